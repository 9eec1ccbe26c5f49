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

#include <CLI11.hpp>

#include "ecgfuse/cli.hpp"

namespace ecgfuse::cli {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ecgfuse: late-fusion evaluation of ECG embedding sets"};
  app.require_subcommand(1);
  int status = kExitOk;

  std::string a, b, c;
  std::optional<std::string> config;

  auto* convert = app.add_subcommand("convert", "Convert a CSV fixture to EBF");
  convert->add_option("csv", a, "Input CSV (id,label,f0,...)")->required();
  convert->add_option("ebf", b, "Output EBF path")->required();
  convert->callback([&] { status = cmd_convert(a, b, err); });

  auto* synth = app.add_subcommand("synth", "Write a synthetic EBF pair from the config");
  synth->add_option("config", a, "Run config (JSON)")->required();
  synth->callback([&] { status = cmd_synth(a, out, err); });

  auto* fuse_cmd = app.add_subcommand(
      "fuse", "Align two EBF files, min-max normalize each over all rows, concatenate");
  fuse_cmd->add_option("a", a, "First EBF")->required();
  fuse_cmd->add_option("b", b, "Second EBF")->required();
  fuse_cmd->add_option("out", c, "Output EBF")->required();
  fuse_cmd->callback([&] { status = cmd_fuse(a, b, c, err); });

  auto* train_cmd = app.add_subcommand("train", "Train a classifier on every row of an EBF");
  train_cmd->add_option("ebf", a, "Training EBF")->required();
  train_cmd->add_option("model", b, "Output model JSON")->required();
  train_cmd->add_option("--config", config, "Run config supplying classifier settings");
  train_cmd->callback([&] { status = cmd_train(a, b, config, err); });

  auto* eval = app.add_subcommand(
      "eval", "Print AUROC/AUCPR for <model> <ebf>, or for --scores CSV against <ebf> labels");
  std::optional<std::string> scores;
  std::vector<std::string> eval_paths;
  eval->add_option("paths", eval_paths, "[model] ebf")->required()->expected(1, 2);
  eval->add_option("--scores", scores, "Score an \"id,score\" CSV instead of a model");
  eval->callback([&] {
    if (scores && eval_paths.size() == 1) {
      status = cmd_eval_scores(*scores, eval_paths[0], out, err);
    } else if (!scores && eval_paths.size() == 2) {
      status = cmd_eval(eval_paths[0], eval_paths[1], out, err);
    } else {
      err << "error: use \"eval <model> <ebf>\" or \"eval --scores <csv> <ebf>\"\n";
      status = kExitUsage;
    }
  });

  auto* bench = app.add_subcommand("benchmark", "Run the repeated stratified benchmark");
  bench->add_option("config", a, "Run config (JSON)")->required();
  bench->callback([&] { status = cmd_benchmark(a, out, err); });

  auto* splits = app.add_subcommand("splits", "Export the reshuffle split plans");
  splits->add_option("config", a, "Run config (JSON)")->required();
  splits->callback([&] { status = cmd_splits(a, out, err); });

  auto* tsne = app.add_subcommand("tsne", "t-SNE scatter of one arm's training rows");
  tsne->add_option("config", a, "Run config (JSON)")->required();
  tsne->add_option("arm", b, "Arm name")->required();
  tsne->callback([&] { status = cmd_tsne(a, b, out, err); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  return status;
}

}  // namespace ecgfuse::cli
