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

#include <set>

#include "ecgfuse/cli.hpp"
#include "ecgfuse/io_util.hpp"
#include "ecgfuse/json_io.hpp"

namespace ecgfuse::cli {

namespace fs = std::filesystem;

namespace {

template <typename T>
void read_key(const json& j, const char* key, T& out, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(context + "." + key + ": " + e.what());
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_known_keys(doc,
                     {"output_dir", "arms", "fuse", "classifier", "reshuffle", "tsne",
                      "synth", "save_models"},
                     "config");
  RunConfig cfg;
  std::string out_dir = "out";
  read_key(doc, "output_dir", out_dir, "config");
  cfg.output_dir = resolve(base_dir, out_dir);
  read_key(doc, "save_models", cfg.save_models, "config");

  std::set<std::string> names;
  if (auto it = doc.find("arms"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("config.arms must be an array");
    for (const auto& a : *it) {
      require_known_keys(a, {"name", "path"}, "config.arms[]");
      ArmSource src;
      std::string path;
      read_key(a, "name", src.name, "config.arms[]");
      read_key(a, "path", path, "config.arms[]");
      if (src.name.empty() || path.empty()) {
        throw ConfigError("config.arms[] needs a name and a path");
      }
      if (!names.insert(src.name).second) {
        throw ConfigError("duplicate arm name \"" + src.name + "\"");
      }
      src.path = resolve(base_dir, path);
      cfg.arms.push_back(std::move(src));
    }
  }
  if (auto it = doc.find("fuse"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("config.fuse must be an array");
    for (const auto& f : *it) {
      require_known_keys(f, {"name", "left", "right"}, "config.fuse[]");
      FusePair pair;
      read_key(f, "left", pair.left, "config.fuse[]");
      read_key(f, "right", pair.right, "config.fuse[]");
      pair.name = pair.left + "+" + pair.right;
      read_key(f, "name", pair.name, "config.fuse[]");
      if (!names.count(pair.left) || !names.count(pair.right)) {
        throw ConfigError("fuse pair \"" + pair.name + "\" references an unknown arm");
      }
      if (!names.insert(pair.name).second) {
        throw ConfigError("duplicate arm name \"" + pair.name + "\"");
      }
      cfg.fuse.push_back(std::move(pair));
    }
  }
  if (auto it = doc.find("classifier"); it != doc.end()) {
    try {
      cfg.classifier = it->get<GbdtConfig>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config.classifier: ") + e.what());
    }
  }
  cfg.classifier.validate();

  if (auto it = doc.find("reshuffle"); it != doc.end()) {
    require_known_keys(*it, {"n_repeats", "test_fraction", "base_seed"}, "config.reshuffle");
    read_key(*it, "n_repeats", cfg.reshuffle.n_repeats, "config.reshuffle");
    read_key(*it, "test_fraction", cfg.reshuffle.test_fraction, "config.reshuffle");
    read_key(*it, "base_seed", cfg.reshuffle.base_seed, "config.reshuffle");
  }
  cfg.reshuffle.validate();

  if (auto it = doc.find("tsne"); it != doc.end()) {
    const std::string ctx = "config.tsne";
    require_known_keys(*it,
                       {"perplexity", "n_iter", "learning_rate", "early_exaggeration_factor",
                        "early_exaggeration_iters", "momentum_initial", "momentum_final",
                        "momentum_switch_iter", "seed", "per_class", "sample_seed"},
                       ctx);
    auto& t = cfg.tsne;
    read_key(*it, "perplexity", t.perplexity, ctx);
    read_key(*it, "n_iter", t.n_iter, ctx);
    read_key(*it, "learning_rate", t.learning_rate, ctx);
    read_key(*it, "early_exaggeration_factor", t.early_exaggeration_factor, ctx);
    read_key(*it, "early_exaggeration_iters", t.early_exaggeration_iters, ctx);
    read_key(*it, "momentum_initial", t.momentum_initial, ctx);
    read_key(*it, "momentum_final", t.momentum_final, ctx);
    read_key(*it, "momentum_switch_iter", t.momentum_switch_iter, ctx);
    read_key(*it, "seed", t.seed, ctx);
    read_key(*it, "per_class", cfg.tsne_per_class, ctx);
    read_key(*it, "sample_seed", cfg.tsne_sample_seed, ctx);
  }

  if (auto it = doc.find("synth"); it != doc.end()) {
    const std::string ctx = "config.synth";
    require_known_keys(*it,
                       {"n_records", "n_pos", "dim_a", "dim_b", "dprime_a", "dprime_b",
                        "noise_scale", "seed", "name_a", "name_b"},
                       ctx);
    auto& s = cfg.synth;
    read_key(*it, "n_records", s.n_records, ctx);
    read_key(*it, "n_pos", s.n_pos, ctx);
    read_key(*it, "dim_a", s.dim_a, ctx);
    read_key(*it, "dim_b", s.dim_b, ctx);
    read_key(*it, "dprime_a", s.dprime_a, ctx);
    read_key(*it, "dprime_b", s.dprime_b, ctx);
    read_key(*it, "noise_scale", s.noise_scale, ctx);
    read_key(*it, "seed", s.seed, ctx);
    read_key(*it, "name_a", cfg.synth_name_a, ctx);
    read_key(*it, "name_b", cfg.synth_name_b, ctx);
    s.validate();
    if (cfg.synth_name_a.empty() || cfg.synth_name_b.empty() ||
        cfg.synth_name_a == cfg.synth_name_b) {
      throw ConfigError("config.synth: name_a and name_b must be distinct and non-empty");
    }
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::string text;
  try {
    text = read_text_file(path.string());
  } catch (const IoError&) {
    throw ConfigError("cannot read config file " + path.string());
  }
  return parse_run_config(text, path.parent_path());
}

}  // namespace ecgfuse::cli
