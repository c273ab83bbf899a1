#include <filesystem>
#include <optional>
#include <tuple>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bfp/descriptives.hpp"
#include "bfp/error.hpp"
#include "bfp/eval.hpp"
#include "bfp/ingest.hpp"
#include "bfp/logit.hpp"
#include "bfp/model_io.hpp"
#include "bfp/normal.hpp"
#include "bfp/pipeline.hpp"
#include "bfp/report.hpp"
#include "bfp/selection.hpp"

namespace py = pybind11;
using namespace bfp;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix to_matrix(const Rows& rows) {
  const std::size_t n = rows.size();
  const std::size_t p = n ? rows[0].size() : 0;
  Matrix x(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != p) throw Error(ErrorCode::DimensionMismatch, "ragged design matrix");
    for (std::size_t j = 0; j < p; ++j) x(i, j) = rows[i][j];
  }
  return x;
}

Rows to_rows(const Matrix& m) {
  Rows out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i].assign(m.row(i).begin(), m.row(i).end());
  return out;
}

PositiveClass parse_positive(const std::string& s) {
  auto pc = positive_class_from_string(s);
  if (!pc) throw Error(ErrorCode::InvalidArgument, "positive class must be 'bankrupt' or 'non-bankrupt'");
  return *pc;
}

py::object json_to_py(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

// Ratio table of a CSV as (firm_ids, labels, feature ids, rows). Rows with an
// undefined ratio are dropped.
py::tuple load_ratios(const std::string& path, bool ratios_mode) {
  const auto data = load_ratio_dataset(read_text_file(path), ratios_mode);
  const auto d = build_design(data, data.feature_names);
  std::vector<std::string> ids;
  for (auto r : d.rows) ids.push_back(data.records[r].firm_id);
  return py::make_tuple(ids, d.y, d.features, to_rows(d.x));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bankruptcy prediction core: ratios, descriptives, logistic regression, evaluation";

  static py::handle error = py::exception<Error>(m, "BfpError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error)(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), inst.ptr());
    }
  });

  m.def("load_ratios", &load_ratios, py::arg("path"), py::arg("ratios_mode") = false,
        "Read a statement or ratio CSV; returns (firm_ids, labels, features, rows).");

  m.def(
      "split_indices",
      [](const std::vector<int>& labels, double train_fraction, std::uint64_t seed, bool stratified) {
        const auto s = split_indices(labels, {train_fraction, seed, stratified});
        return py::make_tuple(s.train, s.test);
      },
      py::arg("labels"), py::arg("train_fraction") = 0.7, py::arg("seed") = 0, py::arg("stratified") = false);

  m.def(
      "describe",
      [](const std::vector<double>& x) {
        const auto d = describe(x);
        return json_to_py(to_json(d).dump());
      },
      py::arg("values"));

  m.def(
      "correlation_matrix",
      [](const std::vector<std::string>& names, const std::vector<std::vector<double>>& columns) {
        return to_rows(correlation_matrix(names, columns).values);
      },
      py::arg("names"), py::arg("columns"));

  py::class_<InferenceRow>(m, "InferenceRow")
      .def_readonly("name", &InferenceRow::name)
      .def_readonly("coefficient", &InferenceRow::coefficient)
      .def_readonly("std_err", &InferenceRow::std_err)
      .def_readonly("z", &InferenceRow::z)
      .def_readonly("p_value", &InferenceRow::p_value)
      .def_readonly("ci_low", &InferenceRow::ci_low)
      .def_readonly("ci_high", &InferenceRow::ci_high)
      .def_readonly("is_intercept", &InferenceRow::is_intercept)
      .def("__repr__", [](const InferenceRow& r) {
        return "InferenceRow(" + r.name + ", coef=" + std::to_string(r.coefficient) +
               ", p=" + std::to_string(r.p_value) + ")";
      });

  m.def("wald_row", &wald_row, py::arg("name"), py::arg("coefficient"), py::arg("std_err"),
        py::arg("level") = 0.95);

  py::class_<FittedModel>(m, "FittedModel")
      .def_property_readonly("feature_names", [](const FittedModel& f) { return f.model.feature_names; })
      .def_property_readonly("beta", [](const FittedModel& f) { return f.model.beta; })
      .def_property_readonly("covariance", [](const FittedModel& f) { return to_rows(f.covariance); })
      .def_readonly("log_likelihood", &FittedModel::log_likelihood)
      .def_readonly("iterations", &FittedModel::iterations)
      .def_readonly("converged", &FittedModel::converged)
      .def_readonly("gradient_norm", &FittedModel::gradient_norm)
      .def_readonly("log_likelihood_trace", &FittedModel::log_likelihood_trace)
      .def(
          "wald", [](const FittedModel& f, double level) { return wald_inference(f, level).rows; },
          py::arg("level") = 0.95)
      .def(
          "predict_proba",
          [](const FittedModel& f, const Rows& x) {
            std::vector<double> p;
            for (const auto& r : x) p.push_back(predict_probability(f.model, r));
            return p;
          },
          py::arg("x"))
      .def(
          "predict",
          [](const FittedModel& f, const Rows& x) {
            std::vector<int> c;
            for (const auto& r : x) c.push_back(classify(f.model, r));
            return c;
          },
          py::arg("x"))
      .def("save", [](const FittedModel& f, const std::string& path) { save_model(f, path); }, py::arg("path"))
      .def("to_json", [](const FittedModel& f) { return json_to_py(model_to_json(f).dump()); });

  m.def(
      "fit",
      [](const Rows& x, const std::vector<int>& y, std::vector<std::string> feature_names, double tolerance,
         int max_iterations, double ridge) {
        return fit_irls(to_matrix(x), y, FitConfig{tolerance, max_iterations, ridge}, std::move(feature_names));
      },
      py::arg("x"), py::arg("y"), py::arg("feature_names") = std::vector<std::string>{},
      py::arg("tolerance") = 1e-8, py::arg("max_iterations") = 50, py::arg("ridge") = 0.0,
      "Maximum-likelihood logistic regression by IRLS. The intercept is added internally.");

  m.def("load_model", &load_model, py::arg("path"));

  m.def(
      "select",
      [](const std::vector<InferenceRow>& rows, std::optional<double> alpha, std::optional<std::size_t> top_k) {
        if (alpha.has_value() == top_k.has_value()) {
          throw Error(ErrorCode::InvalidArgument, "give exactly one of alpha and top_k");
        }
        InferenceTable t{rows, 0.95};
        const auto s = alpha ? select_by_pvalue(t, *alpha) : select_top_k(t, *top_k);
        return py::make_tuple(s.kept, s.dropped);
      },
      py::arg("rows"), py::arg("alpha") = py::none(), py::arg("top_k") = py::none(),
      "Returns (kept names, [(dropped name, p)]).");

  m.def(
      "confusion_matrix",
      [](const std::vector<int>& actual, const std::vector<int>& predicted) {
        const auto cm = confusion_matrix(actual, predicted);
        return py::make_tuple(py::make_tuple(cm.at(1, 1), cm.at(1, 0)), py::make_tuple(cm.at(0, 1), cm.at(0, 0)));
      },
      py::arg("actual"), py::arg("predicted"),
      "Rows actual, columns predicted, bankrupt first: ((bb, bn), (nb, nn)).");

  m.def(
      "class_metrics",
      [](std::size_t bb, std::size_t bn, std::size_t nb, std::size_t nn, const std::string& positive) {
        const auto cm = ConfusionMatrix::from_report_cells(bb, bn, nb, nn);
        return json_to_py(to_json(class_metrics(cm, parse_positive(positive))).dump());
      },
      py::arg("bb"), py::arg("bn"), py::arg("nb"), py::arg("nn"), py::arg("positive") = "non-bankrupt");

  m.def(
      "roc_curve",
      [](const std::vector<double>& scores, const std::vector<int>& actual, const std::string& positive) {
        const auto roc = roc_curve(scores, actual, parse_positive(positive));
        std::vector<std::tuple<double, double, double>> pts;
        for (const auto& p : roc.points) pts.emplace_back(p.threshold, p.fpr, p.tpr);
        return py::make_tuple(pts, roc.auc);
      },
      py::arg("scores"), py::arg("actual"), py::arg("positive") = "bankrupt",
      "scores are P(bankrupt). Returns ([(threshold, fpr, tpr)], auc).");

  m.def("normal_cdf", &normal_cdf, py::arg("z"));
  m.def("normal_quantile", &normal_quantile, py::arg("p"));

  m.def(
      "run_pipeline",
      [](const std::vector<std::string>& inputs, std::vector<std::string> labels, bool ratios_mode,
         double train_fraction, std::uint64_t seed, bool stratified, std::optional<double> alpha,
         std::optional<std::size_t> top_k, const std::string& positive, std::optional<std::string> out_dir) {
        PipelineConfig cfg;
        if (!labels.empty() && labels.size() != inputs.size()) {
          throw Error(ErrorCode::InvalidArgument, "need one label per input");
        }
        for (std::size_t i = 0; i < inputs.size(); ++i) {
          std::string label = labels.empty() ? std::filesystem::path(inputs[i]).stem().string() : labels[i];
          cfg.inputs.push_back({inputs[i], label});
        }
        cfg.ratios_mode = ratios_mode;
        cfg.split = {train_fraction, seed, stratified};
        if (alpha && top_k) throw Error(ErrorCode::InvalidArgument, "give at most one of alpha and top_k");
        if (top_k) cfg.rule = SelectionRule::top_k(*top_k);
        if (alpha) cfg.rule = SelectionRule::threshold(*alpha);
        cfg.positive = parse_positive(positive);
        RunReport r;
        {
          py::gil_scoped_release release;
          r = run_pipeline(cfg);
          if (out_dir) write_report_bundle(r, *out_dir);
        }
        return json_to_py(to_json(r).dump());
      },
      py::arg("inputs"), py::arg("labels") = std::vector<std::string>{}, py::arg("ratios_mode") = false,
      py::arg("train_fraction") = 0.7, py::arg("seed") = 0, py::arg("stratified") = false,
      py::arg("alpha") = py::none(), py::arg("top_k") = py::none(), py::arg("positive") = "non-bankrupt",
      py::arg("out_dir") = py::none(), "Run every stage; returns the report as a dict.");
}
