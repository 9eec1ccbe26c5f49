// Copyright 2026 The ecgfuse Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ecgfuse/cli.hpp"
#include "ecgfuse/io_util.hpp"
#include "ecgfuse/metrics.hpp"
#include "ecgfuse/resampling.hpp"
#include "ecgfuse/synthgen.hpp"
#include "ecgfuse/tsne.hpp"
#include "support.hpp"

namespace {

using namespace ecgfuse;
namespace t = ecgfuse::testing;
using nlohmann::json;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    o.pass = false;
    o.detail += " (over time budget)";
  }
  if (!o.pass) ++failures;
  std::printf("%s  %-28s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome metric_oracle() {
  Rng rng(20260101);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t m = 2 + rng.below(199);
    const auto s = t::random_scores(rng, m);
    const auto y = t::random_labels(rng, m);
    worst = std::max(worst, std::abs(auroc(s, y) - t::auroc_pairwise(s, y)));
    worst = std::max(worst, std::abs(aucpr(s, y) - t::aucpr_sweep(s, y)));
  }
  return {worst <= 1e-12, fmt("1000 instances, max |diff| = %.3g", worst)};
}

Outcome hand_metrics() {
  const std::vector<double> s = {0.1, 0.4, 0.35, 0.8};
  const std::vector<std::uint8_t> y = {0, 0, 1, 1};
  const double a = auroc(s, y), p = aucpr(s, y);
  const bool ok = std::abs(a - 0.75) <= 1e-12 && std::abs(p - 5.0 / 6.0) <= 1e-12;
  return {ok, fmt("auroc = %.15f, aucpr = %.15f", a, p)};
}

Outcome gbdt_correctness() {
  // (a) four positive rows
  Rng rng(7);
  GbdtConfig one;
  one.n_rounds = 1;
  one.subsample = one.colsample_bytree = 1.0;
  auto x4 = t::random_features(rng, 4, 2);
  auto m4 = train(x4, std::vector<std::uint8_t>(4, 1), one);
  const double w = m4.trees[0].root().weight;
  const double p = predict_proba(m4, x4)[0];
  const bool a_ok = m4.trees[0].root().is_leaf() && std::abs(w - 1.0) <= 1e-9 &&
                    std::abs(p - 1.0 / (1.0 + std::exp(-0.1))) <= 1e-9;

  // (b) log-loss non-increasing on 10 datasets
  int b_bad = 0;
  GbdtConfig full;
  full.subsample = full.colsample_bytree = 1.0;
  for (int k = 0; k < 10; ++k) {
    auto x = t::random_features(rng, 60 + rng.below(140), 1 + rng.below(8), k % 2 == 1);
    auto y = t::noisy_labels(rng, x);
    auto m = train(x, y, full);
    double prev = t::log_loss(m, x, y, 0);
    for (std::size_t r = 1; r <= m.trees.size(); ++r) {
      const double cur = t::log_loss(m, x, y, r);
      if (cur > prev + 1e-9) ++b_bad;
      prev = cur;
    }
  }

  // (c) every node of every tree against the brute-force argmax
  int c_bad = 0, instances = 0;
  for (int k = 0; k < 20; ++k) {
    GbdtConfig c = full;
    c.n_rounds = 5;
    c.max_depth = 1 + static_cast<int>(rng.below(6));
    c.min_child_weight = k % 2 ? 1.0 : 0.0;
    auto x = t::random_features(rng, 20 + rng.below(181), 1 + rng.below(10), k % 3 == 0);
    auto y = t::noisy_labels(rng, x);
    c_bad += t::count_split_mismatches(x, y, train(x, y, c));
    ++instances;
  }
  Outcome o;
  o.pass = a_ok && b_bad == 0 && c_bad == 0;
  o.detail = fmt("(a) w = %.12f p = %.12f; (b) %g increases; (c) %g mismatched nodes", w, p,
                 b_bad, c_bad) +
             " over " + std::to_string(instances) + " models";
  return o;
}

Outcome split_counts() {
  std::vector<std::uint8_t> y(1207 + 4606, 0);
  for (std::size_t i = 0; i < 1207; ++i) y[i * 4] = 1;
  auto plan = stratified_split(y, 0.2, 0);
  std::size_t pos = 0;
  for (auto i : plan.test_indices) pos += y[i];
  const std::size_t neg = plan.test_indices.size() - pos;
  bool ok = pos == 241 && neg == 921;

  Rng rng(99);
  int bad = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 4 + rng.below(300);
    std::vector<std::uint8_t> labels(n);
    for (auto& v : labels) v = static_cast<std::uint8_t>(rng.below(2));
    labels[0] = labels[1] = 0;
    labels[2] = labels[3] = 1;
    const double f = 0.05 + 0.9 * rng.uniform();
    auto p = stratified_split(labels, f, rng.next());
    std::vector<int> seen(n, 0);
    for (auto i : p.train_indices) ++seen[i];
    for (auto i : p.test_indices) ++seen[i];
    for (int s : seen) bad += s != 1;
  }
  ok = ok && bad == 0;
  return {ok, "test = " + std::to_string(pos) + " pos + " + std::to_string(neg) +
                  " neg; 1000 random plans, " + std::to_string(bad) + " coverage violations"};
}

// Shared by the synthetic reproduction and determinism criteria.
struct BenchDir {
  std::filesystem::path dir;
  std::filesystem::path config;
};

BenchDir synth_bench_config(const std::string& name, std::uint64_t base_seed) {
  const auto dir = t::scratch_dir("acceptance_" + name);
  json cfg = {
      {"output_dir", "out"},
      {"synth", {{"dprime_a", 1.2}, {"dprime_b", 1.6}, {"seed", 7}}},
      {"arms", {{{"name", "A"}, {"path", "out/A.ebf"}}, {{"name", "B"}, {"path", "out/B.ebf"}}}},
      {"fuse", {{{"name", "fused"}, {"left", "A"}, {"right", "B"}}}},
      {"reshuffle", {{"n_repeats", 10}, {"test_fraction", 0.2}, {"base_seed", base_seed}}},
  };
  std::ofstream(dir / "run.json") << cfg.dump(2);
  return {dir, dir / "run.json"};
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ecgfuse");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int s = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (s != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return s;
}

double mean_auroc(const json& report, const std::string& arm) {
  for (const auto& a : report["arms"]) {
    if (a["name"] == arm) return a["summary"]["auroc"]["mean"].get<double>();
  }
  throw std::runtime_error("arm missing: " + arm);
}

json first_run;
std::filesystem::path first_run_dir;

Outcome synthetic_ordering() {
  const auto b = synth_bench_config("bench", 0);
  if (cli({"synth", b.config.string()}) != 0) return {false, "synth failed"};
  if (cli({"benchmark", b.config.string()}) != 0) return {false, "benchmark failed"};
  first_run_dir = b.dir;
  first_run = json::parse(read_text_file(b.dir / "out" / "report.json"));
  const double a = mean_auroc(first_run, "A"), bb = mean_auroc(first_run, "B"),
               f = mean_auroc(first_run, "fused");
  const double oracle = bayes_auroc(combined_dprime(1.2, 1.6));
  const bool ok = f - bb >= 0.01 && bb - a >= 0.01 && std::abs(f - oracle) <= 0.03;
  return {ok, fmt("A %.4f < B %.4f < fused %.4f; Bayes %.4f", a, bb, f, oracle)};
}

Outcome determinism() {
  const auto again = synth_bench_config("bench_again", 0);
  const auto shifted = synth_bench_config("bench_shifted", 1);
  for (const auto* b : {&again, &shifted}) {
    if (cli({"synth", b->config.string()}) != 0) return {false, "synth failed"};
    if (cli({"benchmark", b->config.string()}) != 0) return {false, "benchmark failed"};
  }
  const auto ref = read_text_file(first_run_dir / "out" / "report.json");
  const auto rep = read_text_file(again.dir / "out" / "report.json");
  const bool identical = ref == rep;

  const auto other = json::parse(read_text_file(shifted.dir / "out" / "report.json"));
  bool differs = false;
  double worst = 0.0;
  for (std::size_t k = 0; k < first_run["arms"].size(); ++k) {
    const auto& x = first_run["arms"][k];
    const auto& y = other["arms"][k];
    differs |= x["results"] != y["results"];
    for (const char* metric : {"auroc", "aucpr"}) {
      worst = std::max(worst, std::abs(x["summary"][metric]["mean"].get<double>() -
                                       y["summary"][metric]["mean"].get<double>()));
    }
  }
  const bool ok = identical && differs && worst <= 0.02;
  return {ok, std::string("rerun ") + (identical ? "byte-identical" : "DIFFERS") +
                  "; base_seed+1 results " + (differs ? "differ" : "IDENTICAL") +
                  fmt(", max summary-mean shift %.4f", worst)};
}

Outcome tsne_invariants() {
  SynthConfig sc;
  sc.dim_a = 16;
  sc.dim_b = 1;
  sc.dprime_a = 2.0;
  auto [a, b] = generate(sc);
  const auto sample = subsample_balanced(a, 250, 1);
  const auto& x = sample.features();
  TsneConfig cfg;
  cfg.seed = 3;

  const auto cond = conditional_affinities(x, cfg.perplexity);
  double worst_h = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double h = 0.0;
    for (std::size_t j = 0; j < x.rows(); ++j) {
      const double p = cond.p(i, j);
      if (j != i && p > 0.0) h -= p * std::log2(p);
    }
    worst_h = std::max(worst_h, std::abs(h - std::log2(cfg.perplexity)));
  }
  const auto P = pairwise_affinities(x, cfg.perplexity);
  double total = 0.0;
  for (double v : P.data()) total += v;

  const auto r1 = tsne_embed(x, cfg);
  const auto r2 = tsne_embed(x, cfg);
  const double kl0 = r1.kl_trace.front().kl, kl1 = r1.kl_trace.back().kl;
  const bool same = r1.coords == r2.coords;
  const bool ok = x.rows() == 500 && worst_h <= 1e-5 && std::abs(total - 1.0) <= 1e-9 &&
                  kl1 < kl0 && same;
  return {ok, fmt("n=500, max |H - log2 perp| = %.2g, |sum P - 1| = %.2g, KL %.4f -> %.4f", worst_h,
                  std::abs(total - 1.0), kl0, kl1) +
                  (same ? ", repeat identical" : ", repeat DIFFERS")};
}

Outcome format_robustness() {
  Rng rng(31337);
  int roundtrip_bad = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto set = t::random_set(rng, 1 + rng.below(30), 1 + rng.below(8));
    const auto bytes = encode_ebf(set);
    const auto back = decode_ebf(bytes);
    const auto fa = set.features().data(), fb = back.features().data();
    const bool same = back.ids() == set.ids() && back.labels() == set.labels() &&
                      back.source_tag() == set.source_tag() && fa.size() == fb.size() &&
                      std::memcmp(fa.data(), fb.data(), fa.size_bytes()) == 0 &&
                      encode_ebf(back) == bytes;
    roundtrip_bad += !same;
  }

  int accepted = 0, rejected = 0, invalid = 0;
  for (int k = 0; k < 10000; ++k) {
    auto b = encode_ebf(t::random_set(rng, 1 + rng.below(5), 1 + rng.below(4)));
    const auto edits = 1 + rng.below(3);
    for (std::uint64_t e = 0; e < edits && !b.empty(); ++e) {
      switch (rng.below(4)) {
        case 0: b[rng.below(b.size())] = static_cast<std::uint8_t>(rng.below(256)); break;
        case 1: b[rng.below(b.size())] ^= static_cast<std::uint8_t>(1u << rng.below(8)); break;
        case 2: b.resize(rng.below(b.size() + 1)); break;
        default: b.insert(b.begin() + static_cast<long>(rng.below(b.size() + 1)),
                          static_cast<std::uint8_t>(rng.below(256)));
      }
    }
    try {
      const auto set = decode_ebf(b);
      try {
        validate(set.ids(), set.labels(), set.features());
        ++accepted;
      } catch (const ValidationError&) {
        ++invalid;
      }
    } catch (const ValidationError&) {
      ++rejected;
    }
    // any other exception type escapes to criterion() and fails the line
  }
  const bool ok = roundtrip_bad == 0 && invalid == 0;
  return {ok, std::to_string(1000 - roundtrip_bad) + "/1000 exact roundtrips; fuzz: " +
                  std::to_string(rejected) + " typed errors, " + std::to_string(accepted) +
                  " valid sets, " + std::to_string(invalid) + " invariant violations"};
}

}  // namespace

int main() {
  criterion("metric-oracle-equivalence", 30, metric_oracle);
  criterion("hand-computable-metrics", 0, hand_metrics);
  criterion("gbdt-correctness", 120, gbdt_correctness);
  criterion("stratified-split-counts", 0, split_counts);
  criterion("synthetic-fusion-ordering", 300, synthetic_ordering);
  criterion("benchmark-determinism", 0, determinism);
  criterion("tsne-invariants", 120, tsne_invariants);
  criterion("ebf-format-robustness", 0, format_robustness);
  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
