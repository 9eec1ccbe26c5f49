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

#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ecgfuse/gbdt.hpp"
#include "ecgfuse/resampling.hpp"
#include "ecgfuse/synthgen.hpp"
#include "ecgfuse/tsne.hpp"

namespace ecgfuse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct ArmSource {
  std::string name;
  std::filesystem::path path;
};

/// File-based run configuration (JSON). Relative paths resolve against the
/// directory holding the config file.
struct RunConfig {
  std::filesystem::path output_dir;
  std::vector<ArmSource> arms;
  std::vector<FusePair> fuse;
  GbdtConfig classifier;
  ReshuffleSpec reshuffle;
  TsneConfig tsne;
  std::size_t tsne_per_class = 250;
  std::uint64_t tsne_sample_seed = 0;
  SynthConfig synth;
  std::string synth_name_a = "A";
  std::string synth_name_b = "B";
  bool save_models = false;
};

/// Parses and validates; throws ConfigError. Arm paths are not required to
/// exist here (synth creates them); commands that read arms check them.
RunConfig parse_run_config(const std::string& text,
                           const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// 2 for usage, config and input-validation errors, 1 otherwise.
int exit_code_for(const std::exception& e);

std::string report_json(const BenchmarkReport& report,
                        const std::vector<std::string>& model_files = {});
std::string report_markdown(const BenchmarkReport& report);
std::string splits_json(const BenchmarkReport& report,
                        const std::vector<std::string>& ids);
std::string splits_json(const std::vector<SplitPlan>& plans,
                        const std::vector<std::string>& ids);
std::string eval_json(const EvalResult& result);

/// "id,score" CSV (header required) scored against the labels of `labels_set`.
EvalResult evaluate_scores_csv(const std::string& csv_text,
                               const EmbeddingSet& labels_set);

// Each command returns a process exit code and reports failures on `err`.
int cmd_convert(const std::string& csv_path, const std::string& ebf_path,
                std::ostream& err);
int cmd_synth(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_fuse(const std::string& a_path, const std::string& b_path,
             const std::string& out_path, std::ostream& err);
int cmd_train(const std::string& ebf_path, const std::string& model_path,
              const std::optional<std::string>& config_path, std::ostream& err);
int cmd_eval(const std::string& model_path, const std::string& ebf_path,
             std::ostream& out, std::ostream& err);
int cmd_eval_scores(const std::string& scores_csv_path, const std::string& ebf_path,
                    std::ostream& out, std::ostream& err);
int cmd_benchmark(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_splits(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_tsne(const std::string& config_path, const std::string& arm,
             std::ostream& out, std::ostream& err);

/// Dispatches argv to the commands above.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ecgfuse::cli
