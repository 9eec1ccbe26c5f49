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

#include <fstream>
#include <functional>

#include "ecgfuse/cli.hpp"
#include "ecgfuse/io_util.hpp"
#include "ecgfuse/json_io.hpp"

namespace ecgfuse::cli {

namespace fs = std::filesystem;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ValidationError*>(&e)) {
    return kExitUsage;
  }
  return kExitRuntime;
}

namespace {

int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

EmbeddingSet load_arm(const ArmSource& arm) {
  if (!fs::exists(arm.path)) {
    throw ConfigError("arm \"" + arm.name + "\": file " + arm.path.string() + " does not exist");
  }
  return read_ebf_file(arm.path.string());
}

std::vector<NamedSet> load_arms(const RunConfig& cfg) {
  if (cfg.arms.empty()) throw ConfigError("config declares no arms");
  std::vector<NamedSet> arms;
  for (const auto& a : cfg.arms) arms.push_back({a.name, load_arm(a)});
  return arms;
}

std::string path_in(const fs::path& dir, const std::string& name) {
  return (dir / name).string();
}

// Arm names become file names; keep them portable.
std::string file_stem(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

}  // namespace

int cmd_convert(const std::string& csv_path, const std::string& ebf_path, std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open " + csv_path);
    write_ebf_file(read_csv(in), ebf_path);
  });
}

int cmd_synth(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config_path);
    const auto [a, b] = generate(cfg.synth);
    const auto path_a = path_in(cfg.output_dir, file_stem(cfg.synth_name_a) + ".ebf");
    const auto path_b = path_in(cfg.output_dir, file_stem(cfg.synth_name_b) + ".ebf");
    write_ebf_file(a, path_a);
    write_ebf_file(b, path_b);
    out << "wrote " << path_a << " and " << path_b << " (" << a.size() << " records, "
        << a.count_label(1) << " positive)\n";
  });
}

int cmd_fuse(const std::string& a_path, const std::string& b_path, const std::string& out_path,
             std::ostream& err) {
  return guarded(err, [&] {
    const auto [a, b] = align(read_ebf_file(a_path), read_ebf_file(b_path));
    std::vector<std::size_t> all(a.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    write_ebf_file(fuse_for_split(a, b, all).fused, out_path);
  });
}

int cmd_train(const std::string& ebf_path, const std::string& model_path,
              const std::optional<std::string>& config_path, std::ostream& err) {
  return guarded(err, [&] {
    GbdtConfig config;
    if (config_path) config = load_run_config(*config_path).classifier;
    const auto set = read_ebf_file(ebf_path);
    save_model(train(set.features(), set.labels(), config), model_path);
  });
}

int cmd_eval(const std::string& model_path, const std::string& ebf_path, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    const auto model = load_model(model_path);
    const auto set = read_ebf_file(ebf_path);
    const auto scores = predict_proba(model, set.features());
    out << eval_json(evaluate(scores, set.labels()));
  });
}

int cmd_eval_scores(const std::string& scores_csv_path, const std::string& ebf_path,
                    std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto set = read_ebf_file(ebf_path);
    out << eval_json(evaluate_scores_csv(read_text_file(scores_csv_path), set));
  });
}

int cmd_benchmark(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config_path);
    const auto arms = load_arms(cfg);

    std::vector<std::string> model_files;
    CellObserver observer;
    if (cfg.save_models) {
      observer = [&](const CellOutput& cell) {
        const std::string stem =
            "models/r" + std::to_string(cell.repeat) + "_" + file_stem(cell.arm);
        save_model(cell.model, path_in(cfg.output_dir, stem + ".model.json"));
        write_ebf_file(cell.test_set, path_in(cfg.output_dir, stem + ".test.ebf"));
        model_files.push_back(stem + ".model.json");
      };
    }
    const auto report =
        run_benchmark(arms, cfg.reshuffle, cfg.classifier, cfg.fuse, observer);

    write_file_atomic(path_in(cfg.output_dir, "report.json"), report_json(report, model_files));
    write_file_atomic(path_in(cfg.output_dir, "report.md"), report_markdown(report));
    write_file_atomic(path_in(cfg.output_dir, "splits.json"),
                      splits_json(report, arms.front().set.ids()));
    out << report_markdown(report);
  });
}

int cmd_splits(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config_path);
    const auto arms = load_arms(cfg);
    const auto& set = arms.front().set;
    std::vector<SplitPlan> plans;
    for (int i = 0; i < cfg.reshuffle.n_repeats; ++i) {
      plans.push_back(stratified_split(set.labels(), cfg.reshuffle.test_fraction,
                                       cfg.reshuffle.base_seed + static_cast<std::uint64_t>(i)));
    }
    const auto path = path_in(cfg.output_dir, "splits.json");
    write_file_atomic(path, splits_json(plans, set.ids()));
    out << "wrote " << path << '\n';
  });
}

int cmd_tsne(const std::string& config_path, const std::string& arm_name, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config_path);
    auto find = [&](const std::string& name) -> const ArmSource* {
      for (const auto& a : cfg.arms) {
        if (a.name == name) return &a;
      }
      return nullptr;
    };
    const FusePair* pair = nullptr;
    for (const auto& f : cfg.fuse) {
      if (f.name == arm_name) pair = &f;
    }
    const ArmSource* arm = find(arm_name);
    if (!arm && !pair) throw ConfigError("no arm named \"" + arm_name + "\" in config");

    // Points are drawn from the training rows of the first reshuffle; a fused
    // arm is scaled with that split's training statistics, as in the benchmark.
    EmbeddingSet set = load_arm(arm ? *arm : *find(pair->left));
    const auto plan = stratified_split(set.labels(), cfg.reshuffle.test_fraction,
                                       cfg.reshuffle.base_seed);
    if (pair) {
      const auto right = load_arm(*find(pair->right));
      if (!same_records(set, right)) {
        throw AlignmentError("arms \"" + pair->left + "\" and \"" + pair->right +
                             "\" do not list the same records in the same order");
      }
      set = fuse_for_split(set, right, plan.train_indices).fused;
    }
    const auto train_rows = set.subset(plan.train_indices);
    const auto sample = subsample_balanced(train_rows, cfg.tsne_per_class, cfg.tsne_sample_seed);
    const auto result = tsne_embed(sample.features(), cfg.tsne);

    const Embedding2D emb{result.coords, sample.labels(), sample.ids()};
    const auto stem = "tsne_" + file_stem(arm_name);
    write_file_atomic(path_in(cfg.output_dir, stem + ".svg"), scatter_svg(emb, "t-SNE: " + arm_name));
    write_file_atomic(path_in(cfg.output_dir, stem + ".csv"), coords_csv(emb));
    out << "wrote " << path_in(cfg.output_dir, stem + ".svg") << " (" << sample.size()
        << " points, final KL " << result.kl_trace.back().kl << ")\n";
  });
}

}  // namespace ecgfuse::cli
