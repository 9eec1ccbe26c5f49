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

#include <charconv>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "ecgfuse/cli.hpp"
#include "ecgfuse/json_io.hpp"

namespace ecgfuse::cli {

namespace {

json summary_json(const SummaryStats& s) {
  return json{{"mean", s.mean}, {"std", s.std}, {"n", s.n}, {"std_defined", s.std_defined}};
}

json result_json(int repeat, const EvalResult& r) {
  return json{{"repeat", repeat},
              {"auroc", r.auroc},
              {"aucpr", r.aucpr},
              {"n_pos", r.n_pos},
              {"n_neg", r.n_neg}};
}

std::string mean_pm_std(const SummaryStats& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f±%.3f", s.mean, s.std);
  return buf;
}

}  // namespace

std::string report_json(const BenchmarkReport& report,
                        const std::vector<std::string>& model_files) {
  json repeats = json::array();
  for (std::size_t i = 0; i < report.plans.size(); ++i) {
    const auto& p = report.plans[i];
    repeats.push_back(json{{"repeat", i},
                           {"seed", p.seed},
                           {"plan_digest", p.digest()},
                           {"n_train", p.train_indices.size()},
                           {"n_test", p.test_indices.size()}});
  }
  json arms = json::array();
  for (const auto& arm : report.arms) {
    json results = json::array();
    for (std::size_t i = 0; i < arm.results.size(); ++i) {
      json r = result_json(static_cast<int>(i), arm.results[i]);
      r["plan_digest"] = arm.plan_digests.at(i);
      results.push_back(std::move(r));
    }
    json a{{"name", arm.name},
           {"fused", arm.fused()},
           {"results", std::move(results)},
           {"summary", {{"auroc", summary_json(arm.auroc)}, {"aucpr", summary_json(arm.aucpr)}}}};
    if (arm.fused()) {
      a["left"] = arm.left;
      a["right"] = arm.right;
      json scalers = json::array();
      for (std::size_t i = 0; i < arm.left_scalers.size(); ++i) {
        scalers.push_back(json{{"repeat", i},
                               {"left", arm.left_scalers[i]},
                               {"right", arm.right_scalers[i]}});
      }
      a["scalers"] = std::move(scalers);
    }
    arms.push_back(std::move(a));
  }
  json doc{{"format", "ecgfuse.report.v1"},
           {"aucpr_method", kAucprMethod},
           {"std_method", "sample"},
           {"classifier", report.classifier},
           {"reshuffle",
            {{"n_repeats", report.spec.n_repeats},
             {"test_fraction", report.spec.test_fraction},
             {"base_seed", report.spec.base_seed}}},
           {"repeats", std::move(repeats)},
           {"arms", std::move(arms)}};
  if (!model_files.empty()) doc["model_files"] = model_files;
  return doc.dump(1) + "\n";
}

std::string report_markdown(const BenchmarkReport& report) {
  std::ostringstream s;
  s << "|       |";
  for (const auto& a : report.arms) s << ' ' << a.name << " |";
  s << "\n|-------|";
  for (std::size_t i = 0; i < report.arms.size(); ++i) s << "---|";
  s << "\n| AUROC |";
  for (const auto& a : report.arms) s << ' ' << mean_pm_std(a.auroc) << " |";
  s << "\n| AUCPR |";
  for (const auto& a : report.arms) s << ' ' << mean_pm_std(a.aucpr) << " |";
  s << "\n\nMean ± sample standard deviation over " << report.spec.n_repeats
    << " stratified reshuffles (test fraction " << report.spec.test_fraction
    << "). AUCPR is average precision.\n";
  return s.str();
}

std::string splits_json(const std::vector<SplitPlan>& plans,
                        const std::vector<std::string>& ids) {
  json repeats = json::array();
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto& p = plans[i];
    json train_ids = json::array(), test_ids = json::array();
    for (auto k : p.train_indices) train_ids.push_back(ids.at(k));
    for (auto k : p.test_indices) test_ids.push_back(ids.at(k));
    repeats.push_back(json{{"repeat", i},
                           {"seed", p.seed},
                           {"digest", p.digest()},
                           {"train_ids", std::move(train_ids)},
                           {"test_ids", std::move(test_ids)}});
  }
  return json{{"format", "ecgfuse.splits.v1"}, {"repeats", std::move(repeats)}}.dump(1) + "\n";
}

std::string splits_json(const BenchmarkReport& report, const std::vector<std::string>& ids) {
  return splits_json(report.plans, ids);
}

std::string eval_json(const EvalResult& r) {
  return json{{"auroc", r.auroc},
              {"aucpr", r.aucpr},
              {"n_pos", r.n_pos},
              {"n_neg", r.n_neg},
              {"aucpr_method", kAucprMethod}}
             .dump() +
         "\n";
}

EvalResult evaluate_scores_csv(const std::string& csv_text, const EmbeddingSet& labels_set) {
  std::unordered_map<std::string_view, std::uint8_t> label_of;
  for (std::size_t i = 0; i < labels_set.size(); ++i) {
    label_of.emplace(labels_set.ids()[i], labels_set.labels()[i]);
  }
  std::istringstream in(csv_text);
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw ValidationError("scores CSV line " + std::to_string(line_no) + ": " + what);
  };
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  std::unordered_map<std::string, bool> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "id,score") fail("header must be \"id,score\"");
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      fail("expected 2 columns");
    }
    const std::string id = line.substr(0, comma);
    const std::string_view cell(line.data() + comma + 1, line.size() - comma - 1);
    double score = 0.0;
    auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), score);
    if (ec != std::errc() || end != cell.data() + cell.size() || cell.empty()) {
      fail("cannot parse score \"" + std::string(cell) + "\"");
    }
    auto it = label_of.find(id);
    if (it == label_of.end()) fail("id \"" + id + "\" not present in the label set");
    if (!seen.emplace(id, true).second) fail("duplicate id \"" + id + "\"");
    scores.push_back(score);
    labels.push_back(it->second);
  }
  if (line_no == 0) throw ValidationError("scores CSV is empty");
  return evaluate(scores, labels);
}

}  // namespace ecgfuse::cli
