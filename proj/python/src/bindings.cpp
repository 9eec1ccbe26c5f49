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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ecgfuse/cli.hpp"
#include "ecgfuse/embedding_store.hpp"
#include "ecgfuse/errors.hpp"
#include "ecgfuse/fusion.hpp"
#include "ecgfuse/gbdt.hpp"
#include "ecgfuse/metrics.hpp"
#include "ecgfuse/resampling.hpp"
#include "ecgfuse/synthgen.hpp"
#include "ecgfuse/tsne.hpp"

namespace py = pybind11;
using namespace ecgfuse;

namespace {

using F32 = py::array_t<float, py::array::c_style | py::array::forcecast>;
using U8 = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using F64 = py::array_t<double, py::array::c_style | py::array::forcecast>;

FeatureMatrix to_matrix(const F32& a) {
  if (a.ndim() != 2) throw ValidationError("features must be a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  std::vector<float> data(a.data(), a.data() + rows * cols);
  return FeatureMatrix(rows, cols, std::move(data));
}

std::vector<std::uint8_t> to_labels(const U8& a) {
  if (a.ndim() != 1) throw ValidationError("labels must be a 1-d array");
  return {a.data(), a.data() + a.size()};
}

std::vector<double> to_scores(const F64& a) {
  if (a.ndim() != 1) throw ValidationError("scores must be a 1-d array");
  return {a.data(), a.data() + a.size()};
}

template <typename T>
py::array_t<T> to_numpy(const Matrix<T>& m) {
  return py::array_t<T>({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())},
                        m.data().data());
}

template <typename T>
py::array_t<T> to_numpy(const std::vector<T>& v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict eval_dict(const EvalResult& r) {
  py::dict d;
  d["auroc"] = r.auroc;
  d["aucpr"] = r.aucpr;
  d["n_pos"] = r.n_pos;
  d["n_neg"] = r.n_neg;
  return d;
}

py::dict summary_dict(const SummaryStats& s) {
  py::dict d;
  d["mean"] = s.mean;
  d["std"] = s.std_defined ? py::object(py::float_(s.std)) : py::object(py::none());
  d["n"] = s.n;
  return d;
}

// Unknown keys are errors, same as the run config.
GbdtConfig gbdt_config(const py::kwargs& kw) {
  GbdtConfig c;
  for (auto item : kw) {
    const auto key = item.first.cast<std::string>();
    auto v = item.second;
    if (key == "n_rounds") c.n_rounds = v.cast<int>();
    else if (key == "max_depth") c.max_depth = v.cast<int>();
    else if (key == "learning_rate") c.learning_rate = v.cast<double>();
    else if (key == "subsample") c.subsample = v.cast<double>();
    else if (key == "colsample_bytree") c.colsample_bytree = v.cast<double>();
    else if (key == "reg_lambda") c.reg_lambda = v.cast<double>();
    else if (key == "gamma") c.gamma = v.cast<double>();
    else if (key == "min_child_weight") c.min_child_weight = v.cast<double>();
    else if (key == "base_score") c.base_score = v.cast<double>();
    else if (key == "seed") c.seed = v.cast<std::uint64_t>();
    else throw ConfigError("unknown classifier option '" + key + "'");
  }
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "ecgfuse: embedding store, GBDT, metrics, resampling and t-SNE";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", validation);
  py::register_exception<UnsupportedVersionError>(m, "UnsupportedVersionError", validation);
  py::register_exception<TruncationError>(m, "TruncationError", validation);
  auto alignment = py::register_exception<AlignmentError>(m, "AlignmentError", error);
  py::register_exception<LabelConflictError>(m, "LabelConflictError", alignment);
  py::register_exception<ConfigError>(m, "ConfigError", error);
  py::register_exception<UndefinedMetricError>(m, "UndefinedMetricError", error);
  py::register_exception<StratificationError>(m, "StratificationError", error);
  py::register_exception<DegenerateAffinityError>(m, "DegenerateAffinityError", error);
  py::register_exception<IoError>(m, "IoError", error);

  py::class_<EmbeddingSet>(m, "EmbeddingSet")
      .def(py::init([](std::vector<std::string> ids, const U8& labels, const F32& features,
                       std::string tag) {
             return EmbeddingSet::make(std::move(ids), to_labels(labels), to_matrix(features),
                                       std::move(tag));
           }),
           py::arg("ids"), py::arg("labels"), py::arg("features"), py::arg("source_tag") = "")
      .def_property_readonly("ids", &EmbeddingSet::ids)
      .def_property_readonly("labels", [](const EmbeddingSet& s) { return to_numpy(s.labels()); })
      .def_property_readonly("features", [](const EmbeddingSet& s) { return to_numpy(s.features()); })
      .def_property_readonly("source_tag", &EmbeddingSet::source_tag)
      .def_property_readonly("dim", &EmbeddingSet::dim)
      .def("__len__", &EmbeddingSet::size)
      .def("count_label", &EmbeddingSet::count_label)
      .def("subset", [](const EmbeddingSet& s, std::vector<std::size_t> idx) {
        for (auto i : idx) {
          if (i >= s.size()) throw py::index_error("row index out of range");
        }
        return s.subset(idx);
      })
      .def("__eq__", [](const EmbeddingSet& a, const EmbeddingSet& b) { return a == b; });

  m.def("encode_ebf", [](const EmbeddingSet& s) {
    auto bytes = encode_ebf(s);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  });
  m.def("decode_ebf", [](const py::bytes& b) {
    std::string_view v = b;
    return decode_ebf(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(v.data()), v.size()));
  });
  m.def("read_ebf", &read_ebf_file, py::arg("path"));
  m.def("write_ebf", &write_ebf_file, py::arg("set"), py::arg("path"));
  m.def("read_csv", &read_csv_file, py::arg("path"));
  m.def("align", &align);
  m.def("fuse", &fuse);

  py::class_<MinMaxScaler>(m, "MinMaxScaler")
      .def_readonly("mins", &MinMaxScaler::mins)
      .def_readonly("maxs", &MinMaxScaler::maxs)
      .def("transform", [](const MinMaxScaler& s, const F32& x) {
        return to_numpy(apply_minmax(s, to_matrix(x)));
      });
  m.def("fit_minmax", [](const F32& x) { return fit_minmax(to_matrix(x)); });

  py::class_<GbdtModel>(m, "GbdtModel")
      .def_property_readonly("n_trees", [](const GbdtModel& g) { return g.trees.size(); })
      .def_readonly("n_features", &GbdtModel::n_features)
      .def("predict_proba", [](const GbdtModel& g, const F32& x, std::optional<std::size_t> n) {
             return to_numpy(predict_proba(g, to_matrix(x), n));
           }, py::arg("features"), py::arg("n_trees") = py::none())
      .def("predict_margin", [](const GbdtModel& g, const F32& x, std::optional<std::size_t> n) {
             return to_numpy(predict_margin(g, to_matrix(x), n));
           }, py::arg("features"), py::arg("n_trees") = py::none())
      .def("to_json", &model_to_json)
      .def_static("from_json", &model_from_json)
      .def("__eq__", [](const GbdtModel& a, const GbdtModel& b) { return a == b; });

  m.def("train", [](const F32& x, const U8& y, const py::kwargs& kw) {
    return train(to_matrix(x), to_labels(y), gbdt_config(kw));
  }, py::arg("features"), py::arg("labels"));

  m.def("auroc", [](const F64& s, const U8& y) { return auroc(to_scores(s), to_labels(y)); });
  m.def("aucpr", [](const F64& s, const U8& y) { return aucpr(to_scores(s), to_labels(y)); });
  m.def("evaluate", [](const F64& s, const U8& y) {
    return eval_dict(evaluate(to_scores(s), to_labels(y)));
  });
  m.def("evaluate_scores_csv", [](const std::string& text, const EmbeddingSet& s) {
    return eval_dict(cli::evaluate_scores_csv(text, s));
  }, py::arg("csv_text"), py::arg("labels_set"));

  py::class_<SplitPlan>(m, "SplitPlan")
      .def_readonly("train_indices", &SplitPlan::train_indices)
      .def_readonly("test_indices", &SplitPlan::test_indices)
      .def_readonly("seed", &SplitPlan::seed)
      .def("digest", &SplitPlan::digest);
  m.def("stratified_split", [](const U8& y, double f, std::uint64_t seed) {
    return stratified_split(to_labels(y), f, seed);
  }, py::arg("labels"), py::arg("test_fraction") = 0.2, py::arg("seed") = 0);
  m.def("splits_json", [](const std::vector<SplitPlan>& plans, const std::vector<std::string>& ids) {
    return cli::splits_json(plans, ids);
  });

  m.def("run_benchmark",
        [](const std::vector<std::pair<std::string, EmbeddingSet>>& arms,
           const std::vector<std::tuple<std::string, std::string, std::string>>& fuse_pairs,
           int n_repeats, double test_fraction, std::uint64_t base_seed, const py::kwargs& kw) {
          std::vector<NamedSet> named;
          for (const auto& [name, set] : arms) named.push_back({name, set});
          std::vector<FusePair> pairs;
          for (const auto& [n, l, r] : fuse_pairs) pairs.push_back({n, l, r});
          ReshuffleSpec spec{n_repeats, test_fraction, base_seed};
          const auto report = run_benchmark(named, spec, gbdt_config(kw), pairs);
          py::dict out;
          for (const auto& arm : report.arms) {
            py::dict d;
            py::list results;
            for (const auto& r : arm.results) results.append(eval_dict(r));
            d["results"] = results;
            d["auroc"] = summary_dict(arm.auroc);
            d["aucpr"] = summary_dict(arm.aucpr);
            d["plan_digests"] = arm.plan_digests;
            out[py::str(arm.name)] = d;
          }
          return py::make_tuple(out, report.plans);
        },
        py::arg("arms"), py::arg("fuse_pairs") = std::vector<std::tuple<std::string, std::string, std::string>>{},
        py::arg("n_repeats") = 10, py::arg("test_fraction") = 0.2, py::arg("base_seed") = 0);

  m.def("synth", [](std::size_t n_records, std::size_t n_pos, std::size_t dim_a, std::size_t dim_b,
                    double dprime_a, double dprime_b, double noise_scale, std::uint64_t seed) {
    return generate(SynthConfig{n_records, n_pos, dim_a, dim_b, dprime_a, dprime_b, noise_scale, seed});
  }, py::arg("n_records") = 5813, py::arg("n_pos") = 1207, py::arg("dim_a") = 64,
     py::arg("dim_b") = 64, py::arg("dprime_a") = 1.0, py::arg("dprime_b") = 1.0,
     py::arg("noise_scale") = 1.0, py::arg("seed") = 0);
  m.def("bayes_auroc", &bayes_auroc);
  m.def("combined_dprime", &combined_dprime);

  m.def("pairwise_affinities", [](const F32& x, double perplexity) {
    return to_numpy(pairwise_affinities(to_matrix(x), perplexity));
  });
  m.def("tsne", [](const F32& x, double perplexity, int n_iter, std::uint64_t seed) {
    TsneConfig c;
    c.perplexity = perplexity;
    c.n_iter = n_iter;
    c.seed = seed;
    auto r = tsne_embed(to_matrix(x), c);
    py::list trace;
    for (const auto& k : r.kl_trace) trace.append(py::make_tuple(k.iteration, k.kl));
    return py::make_tuple(to_numpy(r.coords), trace);
  }, py::arg("features"), py::arg("perplexity") = 30.0, py::arg("n_iter") = 1000,
     py::arg("seed") = 0);
  m.def("subsample_balanced", &subsample_balanced, py::arg("set"), py::arg("per_class"),
        py::arg("seed") = 0);
  m.def("scatter_svg", [](const F64& coords, const EmbeddingSet& s, const std::string& title) {
    if (coords.ndim() != 2 || coords.shape(1) != 2 || static_cast<std::size_t>(coords.shape(0)) != s.size()) {
      throw ValidationError("coords must be an n x 2 array matching the set");
    }
    Embedding2D e{Matrix<double>(s.size(), 2, std::vector<double>(coords.data(), coords.data() + coords.size())),
                  s.labels(), s.ids()};
    return scatter_svg(e, title);
  }, py::arg("coords"), py::arg("set"), py::arg("title") = "");
}
