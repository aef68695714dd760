// Copyright 2026 The XLT Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Python surface over the core operations: tweet normalization, the metric
// and statistics primitives, score matrices with their aggregations, the
// synthetic data generator, manifest-driven experiment runs, and trained
// checkpoints for inference.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <memory>

#include "xlt/common.hpp"
#include "xlt/exp_runner.hpp"
#include "xlt/matrix.hpp"
#include "xlt/metrics.hpp"
#include "xlt/model.hpp"
#include "xlt/stats.hpp"
#include "xlt/text.hpp"
#include "xlt/trainer.hpp"

namespace py = pybind11;
using namespace xlt;

namespace {

stats::TailDirection tail_from_name(const std::string& name) {
  if (name == "greater") return stats::TailDirection::kAGreater;
  if (name == "less") return stats::TailDirection::kALess;
  throw py::value_error("tail must be 'greater' or 'less', got '" + name +
                        "'");
}

using AggregateDict =
    std::map<std::pair<std::string, std::string>, std::pair<double, double>>;

AggregateDict aggregate_dict(const eval::AggregateView& view) {
  AggregateDict out;
  for (const auto& [key, mc] : view.entries()) {
    out[key] = {mc.mono, mc.cross};
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(xlt, m) {
  m.doc() = "Cross-lingual transfer experiment toolkit";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<RuntimeFailure>(m, "RuntimeFailure",
                                         PyExc_RuntimeError);

  m.def(
      "normalize_tweet",
      [](const std::string& text, bool replace_mentions, bool replace_urls,
         bool segment_hashtags) {
        text::NormalizeConfig config;
        config.replace_mentions = replace_mentions;
        config.replace_urls = replace_urls;
        config.segment_hashtags = segment_hashtags;
        return text::normalize_tweet(text, config);
      },
      py::arg("text"), py::arg("replace_mentions") = true,
      py::arg("replace_urls") = true, py::arg("segment_hashtags") = true,
      "Replaces mentions/URLs with placeholders and segments hashtags.");
  m.def("token_count", &text::token_count, py::arg("normalized_text"),
        "Whitespace token count; the length statistic used for subsampling.");

  m.def("macro_f1", &metrics::macro_f1, py::arg("gold"), py::arg("predicted"),
        py::arg("label_space"),
        "Macro-averaged F1 over the label space, 0-100.");
  m.def("ks_statistic", &stats::ks_statistic, py::arg("a"), py::arg("b"),
        "Two-sample Kolmogorov-Smirnov statistic.");
  m.def("ks_two_sample_pvalue", &stats::ks_two_sample_pvalue,
        py::arg("statistic"), py::arg("n_a"), py::arg("n_b"),
        "Asymptotic two-sample KS p-value.");
  m.def(
      "one_sided_t_test",
      [](const std::vector<double>& a, const std::vector<double>& b,
         const std::string& tail) {
        return stats::one_sided_t_test(a, b, tail_from_name(tail));
      },
      py::arg("a"), py::arg("b"), py::arg("tail") = "greater",
      "Pooled two-sample t-test p-value; tail is 'greater' or 'less'.");

  m.def("smooth_sample_weights", &trainer::smooth_sample_weights,
        py::arg("sizes"), py::arg("alpha") = 0.5,
        "Exponent-smoothed multi-dataset sampling weights.");

  py::class_<eval::ScoreMatrix>(m, "ScoreMatrix")
      .def(py::init<>())
      .def_readwrite("model_id", &eval::ScoreMatrix::model_id)
      .def(
          "add",
          [](eval::ScoreMatrix& self, const std::string& source,
             const std::string& target, const std::string& domain,
             const std::string& combo, std::vector<double> per_seed) {
            self.add({source, target, domain, combo},
                     eval::CellScores::from_seeds(std::move(per_seed)));
          },
          py::arg("source"), py::arg("target"), py::arg("domain"),
          py::arg("combo"), py::arg("per_seed"))
      .def(
          "mean",
          [](const eval::ScoreMatrix& self, const std::string& source,
             const std::string& target, const std::string& domain,
             const std::string& combo) {
            return self.at({source, target, domain, combo}).mean;
          },
          py::arg("source"), py::arg("target"), py::arg("domain"),
          py::arg("combo"))
      .def("__len__", &eval::ScoreMatrix::size)
      .def("languages",
           [](const eval::ScoreMatrix& self) {
             const auto s = self.languages();
             return std::vector<std::string>(s.begin(), s.end());
           })
      .def("domains",
           [](const eval::ScoreMatrix& self) {
             const auto s = self.domains();
             return std::vector<std::string>(s.begin(), s.end());
           })
      .def("combos",
           [](const eval::ScoreMatrix& self) {
             const auto s = self.combos();
             return std::vector<std::string>(s.begin(), s.end());
           })
      .def("to_tsv", &eval::ScoreMatrix::to_tsv)
      .def_static("from_tsv", &eval::ScoreMatrix::from_tsv, py::arg("text"));

  m.def(
      "aggregate_mono_cross",
      [](const eval::ScoreMatrix& matrix) {
        return aggregate_dict(eval::aggregate_mono_cross(matrix));
      },
      py::arg("matrix"),
      "(domain, combo) -> (mono mean, cross mean) over a complete language "
      "block.");
  m.def(
      "flag_transfer_failures",
      [](const eval::ScoreMatrix& matrix, double threshold) {
        std::vector<std::tuple<std::string, std::string, std::string,
                               std::string>>
            out;
        for (const auto& k : eval::flag_transfer_failures(matrix, threshold)) {
          out.emplace_back(k.source, k.target, k.domain, k.combo);
        }
        return out;
      },
      py::arg("matrix"), py::arg("threshold") = 0.25,
      "Off-diagonal cells whose relative drop vs. the monolingual cell "
      "exceeds the threshold, as (source, target, domain, combo) tuples.");
  m.def(
      "aggregate_deltas",
      [](const eval::ScoreMatrix& matrix, const std::string& baseline) {
        AggregateDict out;
        for (const auto& [key, mc] :
             eval::build_delta_table(matrix, baseline).aggregate) {
          out[key] = {mc.mono, mc.cross};
        }
        return out;
      },
      py::arg("matrix"), py::arg("baseline") = "none",
      "(domain, combo) -> (mean mono delta, mean cross delta) vs. the "
      "baseline combo.");
  m.def(
      "delta_table_tsv",
      [](const eval::ScoreMatrix& matrix, const std::string& baseline) {
        return eval::build_delta_table(matrix, baseline).to_tsv();
      },
      py::arg("matrix"), py::arg("baseline") = "none",
      "Per-cell deltas with significance markers, as TSV text.");

  m.def(
      "generate_synthetic",
      [](const std::string& output_dir, uint64_t seed, size_t train_size,
         size_t dev_size, size_t test_size, double noise_rate) {
        runner::SyntheticSpec spec;
        spec.train_size = train_size;
        spec.dev_size = dev_size;
        spec.test_size = test_size;
        spec.noise_rate = noise_rate;
        runner::generate_synthetic(spec, seed, output_dir);
      },
      py::arg("output_dir"), py::arg("seed") = 1, py::arg("train_size") = 64,
      py::arg("dev_size") = 16, py::arg("test_size") = 16,
      py::arg("noise_rate") = 0.0,
      "Writes the two-pseudo-language validation corpus plus its manifest.");

  m.def(
      "run_manifest",
      [](const std::string& path, const std::string& output_dir,
         size_t parallelism) {
        runner::ExperimentManifest manifest = runner::load_manifest(path);
        if (!output_dir.empty()) {
          manifest.output_dir = std::filesystem::absolute(output_dir)
                                    .lexically_normal()
                                    .string();
        }
        if (parallelism > 0) manifest.parallelism = parallelism;
        manifest.validate();
        const runner::MatrixResult result = runner::run_matrix(manifest);
        if (!result.gaps.empty()) {
          std::string detail;
          for (const auto& o : result.outcomes) {
            if (o.failed) detail += "\n  " + o.run_id + ": " + o.diagnostic;
          }
          throw RuntimeFailure("incomplete matrix: " +
                               std::to_string(result.gaps.size()) +
                               " cells missing" + detail);
        }
        return result.matrix;
      },
      py::arg("path"), py::arg("output_dir") = std::string(),
      py::arg("parallelism") = size_t{0},
      py::call_guard<py::gil_scoped_release>(),
      "Executes (or resumes) the manifest's full run grid and returns the "
      "score matrix.");

  py::class_<model::MultiTaskModel>(m, "Model")
      .def_static(
          "load",
          [](const std::string& dir) {
            return std::make_unique<model::MultiTaskModel>(
                model::MultiTaskModel::load(dir));
          },
          py::arg("dir"), "Loads a training-run checkpoint directory.")
      .def("save", &model::MultiTaskModel::save, py::arg("dir"))
      .def("task_names", &model::MultiTaskModel::task_names)
      .def("predict", &model::MultiTaskModel::predict_sequence_labels,
           py::arg("task"), py::arg("texts"),
           "Predicted labels for raw texts under a sequence task.")
      .def("predict_tags", &model::MultiTaskModel::predict_token_labels,
           py::arg("task"), py::arg("tokens"),
           "Predicted per-token labels under a tagging task.");
}
