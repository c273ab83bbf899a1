#include "bfp/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "bfp/model_io.hpp"
#include "csv.hpp"

namespace bfp {
namespace {

using json = nlohmann::ordered_json;

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string opt_fixed(const std::optional<double>& v, int digits) {
  return v ? fmt::format("{:.{}f}", *v, digits) : std::string("undefined");
}

std::string stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::string label_of(std::string_view id) {
  if (id == kLabelColumn) return kLabelColumn;
  return std::string(display_name_for(id));
}

json rule_json(const SelectionRule& r) {
  json j;
  if (r.kind == SelectionRule::Kind::TopK) {
    j["kind"] = "top_k";
    j["k"] = r.k;
  } else {
    j["kind"] = "threshold";
    j["alpha"] = r.alpha;
  }
  return j;
}

json roc_json(const RocCurve& roc) {
  json pts = json::array();
  for (const auto& p : roc.points) {
    pts.push_back({{"threshold", std::isinf(p.threshold) ? json("inf") : json(p.threshold)},
                   {"fpr", p.fpr},
                   {"tpr", p.tpr}});
  }
  return {{"positive_class", to_string(roc.positive_class)}, {"auc", roc.auc}, {"points", pts}};
}

json fit_json(const FittedModel& f) {
  return {{"log_likelihood", f.log_likelihood},
          {"iterations", f.iterations},
          {"converged", f.converged},
          {"gradient_norm", f.gradient_norm},
          {"log_likelihood_trace", f.log_likelihood_trace}};
}

std::string model_file_name(const RunReport& r, const std::string& label) {
  return r.horizons.size() == 1 ? std::string("model.json") : "model_" + label + ".json";
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + p.string() + "'");
  out << text;
}

}  // namespace

json to_json(const DescriptiveStats& d) {
  return {{"n", d.n},
          {"mean", d.mean},
          {"standard_error", d.standard_error},
          {"median", d.median},
          {"standard_deviation", d.standard_deviation},
          {"excess_kurtosis", optional_json(d.excess_kurtosis)},
          {"skewness", optional_json(d.skewness)},
          {"range", d.range},
          {"minimum", d.minimum},
          {"maximum", d.maximum}};
}

json to_json(const InferenceTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"name", r.name},
                    {"coefficient", r.coefficient},
                    {"std_err", r.std_err},
                    {"z", r.z},
                    {"p_value", r.p_value},
                    {"ci_low", r.ci_low},
                    {"ci_high", r.ci_high}});
  }
  return {{"confidence_level", t.confidence_level}, {"rows", rows}};
}

json to_json(const ConfusionMatrix& cm) {
  return {{"orientation", "rows=actual, columns=predicted"},
          {"bankrupt", {{"predicted_bankrupt", cm.at(1, 1)}, {"predicted_non_bankrupt", cm.at(1, 0)}}},
          {"non_bankrupt", {{"predicted_bankrupt", cm.at(0, 1)}, {"predicted_non_bankrupt", cm.at(0, 0)}}},
          {"total", cm.total()}};
}

json to_json(const ClassMetrics& m) {
  return {{"positive_class", to_string(m.positive_class)},
          {"accuracy", m.accuracy},
          {"precision", optional_json(m.precision)},
          {"recall", optional_json(m.recall)}};
}

json to_json(const RunReport& r) {
  const auto& c = r.config;
  json inputs = json::array();
  for (const auto& in : c.inputs) inputs.push_back({{"path", in.path}, {"label", in.label}});
  json out;
  out["config"] = {{"inputs", inputs},
                   {"ratios_mode", c.ratios_mode},
                   {"split", {{"train_fraction", c.split.train_fraction},
                              {"seed", c.split.seed},
                              {"stratified", c.split.stratified}}},
                   {"fit", {{"tolerance", c.fit.tolerance},
                            {"max_iterations", c.fit.max_iterations},
                            {"ridge", c.fit.ridge}}},
                   {"selection", rule_json(c.rule)},
                   {"positive_class", to_string(c.positive)},
                   {"corr_threshold", c.corr_threshold},
                   {"confidence_level", c.confidence_level}};

  json horizons = json::array();
  for (const auto& h : r.horizons) {
    json desc = json::object();
    for (std::size_t i = 0; i < h.described.size(); ++i) desc[h.described[i]] = to_json(h.descriptives[i]);
    json corr_values = json::array();
    for (std::size_t i = 0; i < h.correlation.names.size(); ++i) {
      auto row = h.correlation.values.row(i);
      corr_values.push_back(std::vector<double>(row.begin(), row.end()));
    }
    json flags = json::array();
    for (const auto& f : h.collinear) flags.push_back({{"first", f.first}, {"second", f.second}, {"value", f.value}});
    json dropped = json::array();
    for (const auto& [name, p] : h.selection.dropped) dropped.push_back({{"name", name}, {"p_value", p}});
    json preds = json::array();
    for (const auto& p : h.test_predictions) {
      preds.push_back({{"firm_id", p.firm_id},
                       {"actual", p.actual},
                       {"probability", p.probability},
                       {"predicted", p.predicted}});
    }

    json hj;
    hj["label"] = h.label;
    hj["input"] = h.input_path;
    hj["records"] = {{"total", h.n_records},
                     {"train", h.n_train},
                     {"test", h.n_test},
                     {"train_used_preliminary", h.n_train_used_preliminary},
                     {"train_used_final", h.n_train_used_final}};
    hj["candidate_features"] = h.candidate_features;
    hj["descriptives"] = desc;
    hj["correlation"] = {{"names", h.correlation.names}, {"values", corr_values}};
    hj["multicollinearity_flags"] = flags;
    hj["preliminary_model"] = {{"fit", fit_json(h.preliminary)}, {"inference", to_json(h.preliminary_table)}};
    hj["selection"] = {{"rule", rule_json(h.selection.rule)}, {"kept", h.selection.kept}, {"dropped", dropped}};
    hj["final_model"] = {{"fit", fit_json(h.final_fit)},
                         {"inference", to_json(h.final_table)},
                         {"model_file", model_file_name(r, h.label)}};
    hj["evaluation"] = {{"confusion_matrix", to_json(h.confusion)},
                        {"metrics", {to_json(h.metrics_non_bankrupt), to_json(h.metrics_bankrupt)}},
                        {"roc", roc_json(h.roc)},
                        {"test_predictions", preds}};
    horizons.push_back(std::move(hj));
  }
  out["horizons"] = horizons;

  json comparison = json::array();
  for (const auto& h : r.horizons) {
    comparison.push_back({{"label", h.label}, {"accuracy", h.metrics_non_bankrupt.accuracy}, {"auc", h.roc.auc}});
  }
  out["accuracy_comparison"] = comparison;
  return out;
}

std::string render_descriptives(std::span<const std::string> names, std::span<const DescriptiveStats> stats) {
  std::vector<std::size_t> width;
  for (const auto& n : names) width.push_back(std::max<std::size_t>(12, label_of(n).size()));
  std::string out = fmt::format("{:<20}", "Variables");
  for (std::size_t i = 0; i < names.size(); ++i) out += fmt::format("  {:>{}}", label_of(names[i]), width[i]);
  out += '\n';
  auto line = [&](std::string_view label, auto get) {
    out += fmt::format("{:<20}", label);
    for (std::size_t i = 0; i < stats.size(); ++i) out += fmt::format("  {:>{}}", get(stats[i]), width[i]);
    out += '\n';
  };
  auto num = [](double v) { return fmt::format("{:.6g}", v); };
  line("Mean", [&](const auto& s) { return num(s.mean); });
  line("Standard Error", [&](const auto& s) { return num(s.standard_error); });
  line("Median", [&](const auto& s) { return num(s.median); });
  line("Standard Deviation", [&](const auto& s) { return num(s.standard_deviation); });
  line("Kurtosis", [&](const auto& s) { return s.excess_kurtosis ? num(*s.excess_kurtosis) : "undefined"; });
  line("Skewness", [&](const auto& s) { return s.skewness ? num(*s.skewness) : "undefined"; });
  line("Range", [&](const auto& s) { return num(s.range); });
  line("Minimum", [&](const auto& s) { return num(s.minimum); });
  line("Maximum", [&](const auto& s) { return num(s.maximum); });
  return out;
}

std::string render_correlation(const CorrelationMatrix& m) {
  std::vector<std::size_t> width;
  for (const auto& n : m.names) width.push_back(std::max<std::size_t>(8, label_of(n).size()));
  std::string out = fmt::format("{:<40}", "");
  for (std::size_t j = 0; j < m.names.size(); ++j) out += fmt::format("  {:>{}}", label_of(m.names[j]), width[j]);
  out += '\n';
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    out += fmt::format("{:<40}", label_of(m.names[i]));
    for (std::size_t j = 0; j <= i; ++j) out += fmt::format("  {:>{}.3f}", m(i, j), width[j]);
    out += '\n';
  }
  return out;
}

std::string render_inference(const InferenceTable& t) {
  const double tail = (1.0 - t.confidence_level) / 2.0;
  std::string out = fmt::format("{:<40} {:>12} {:>10} {:>9} {:>12} {:>12} {:>12}\n", "", "Coefficient", "Std. Err.",
                                "z", "P>|z|", fmt::format("[{:.3f}", tail), fmt::format("{:.3f}]", 1.0 - tail));
  for (const auto& r : t.rows) {
    out += fmt::format("{:<40} {:>12.4f} {:>10.4f} {:>9.4f} {:>12} {:>12.4f} {:>12.4f}\n", label_of(r.name),
                       r.coefficient, r.std_err, r.z, fmt::format("({:.4f}){:<3}", r.p_value, stars(r.p_value)),
                       r.ci_low, r.ci_high);
  }
  return out;
}

std::string render_selection(const SelectionResult& s, const InferenceTable& t) {
  std::string out;
  if (s.rule.kind == SelectionRule::Kind::TopK) {
    out += fmt::format("Rule: keep the {} smallest p-values\n", s.rule.k);
  } else {
    out += fmt::format("Rule: keep p < {:g}\n", s.rule.alpha);
  }
  for (const auto& name : s.kept) {
    for (const auto& r : t.rows) {
      if (r.name == name) out += fmt::format("  kept     {:<40} p = {:.4f}\n", label_of(name), r.p_value);
    }
  }
  for (const auto& [name, p] : s.dropped) out += fmt::format("  dropped  {:<40} p = {:.4f}\n", label_of(name), p);
  return out;
}

std::string render_confusion(const ConfusionMatrix& cm) {
  std::string out = fmt::format("{:<14} {:>10} {:>14} {:>7}\n", "", "Bankrupt", "Non-Bankrupt", "Total");
  out += fmt::format("{:<14} {:>10} {:>14} {:>7}\n", "Bankrupt", cm.at(1, 1), cm.at(1, 0), cm.actual_total(1));
  out += fmt::format("{:<14} {:>10} {:>14} {:>7}\n", "Non-Bankrupt", cm.at(0, 1), cm.at(0, 0), cm.actual_total(0));
  out += fmt::format("{:<14} {:>10} {:>14} {:>7}\n", "Total", cm.predicted_total(1), cm.predicted_total(0),
                     cm.total());
  out += "(rows = actual, columns = predicted)\n";
  return out;
}

std::string render_metrics(const ClassMetrics& a, const ClassMetrics& b) {
  auto head = [](const ClassMetrics& m) {
    return fmt::format("positive = {}", to_string(m.positive_class));
  };
  std::string out = fmt::format("{:<10} {:>26} {:>26}\n", "Measure", head(a), head(b));
  out += fmt::format("{:<10} {:>26.4f} {:>26.4f}\n", "Accuracy", a.accuracy, b.accuracy);
  out += fmt::format("{:<10} {:>26} {:>26}\n", "Precision", opt_fixed(a.precision, 4), opt_fixed(b.precision, 4));
  out += fmt::format("{:<10} {:>26} {:>26}\n", "Recall", opt_fixed(a.recall, 4), opt_fixed(b.recall, 4));
  return out;
}

std::string render_report(const RunReport& r) {
  const auto& c = r.config;
  std::string out = "BANKRUPTCY PREDICTION REPORT\n\n";
  out += fmt::format("split: train fraction {:g}, seed {}, {}\n", c.split.train_fraction, c.split.seed,
                     c.split.stratified ? "stratified" : "not stratified");
  out += fmt::format("fit: tolerance {:g}, max iterations {}, ridge {:g}\n", c.fit.tolerance, c.fit.max_iterations,
                     c.fit.ridge);

  for (const auto& h : r.horizons) {
    out += fmt::format("\n==== Horizon: {} ({}) ====\n", h.label, h.input_path);
    out += fmt::format("records {}: train {}, test {}\n", h.n_records, h.n_train, h.n_test);
    if (h.n_train_used_preliminary < h.n_train || h.n_train_used_final < h.n_train) {
      out += fmt::format("train rows with every ratio defined: preliminary {}, final {}\n",
                         h.n_train_used_preliminary, h.n_train_used_final);
    }

    out += "\n-- Descriptive statistics (full sample) --\n";
    out += render_descriptives(h.described, h.descriptives);
    out += "\n-- Correlation matrix --\n";
    out += render_correlation(h.correlation);
    if (h.collinear.empty()) {
      out += fmt::format("multicollinearity screen: no pair with |r| >= {:g}\n", c.corr_threshold);
    } else {
      for (const auto& f : h.collinear) {
        out += fmt::format("multicollinearity screen: {} / {} r = {:.3f}\n", label_of(f.first), label_of(f.second),
                           f.value);
      }
    }

    out += "\n-- Preliminary model, all candidate ratios (train set) --\n";
    out += render_inference(h.preliminary_table);
    out += "\n-- Variable selection --\n";
    out += render_selection(h.selection, h.preliminary_table);
    if (h.selection.rule.kind == SelectionRule::Kind::Threshold) {
      out += "note: the published final variable set corresponds to alpha = 0.10 (equivalently top-4),\n"
             "      not to its stated 5% rule; use --alpha 0.10 or --top-k 4 to reproduce it.\n";
    }

    out += "\n-- Final model (train set) --\n";
    out += render_inference(h.final_table);
    out += fmt::format("log-likelihood {:.6f}; {} iterations; converged: {}; score norm {:.3g}\n",
                       h.final_fit.log_likelihood, h.final_fit.iterations, h.final_fit.converged ? "yes" : "no",
                       h.final_fit.gradient_norm);

    out += "\n-- Accuracy table (test set) --\n";
    out += render_confusion(h.confusion);
    out += "\n-- Robustness check (first column as published) --\n";
    out += render_metrics(h.metrics_non_bankrupt, h.metrics_bankrupt);
    out += fmt::format("\nROC: AUC = {:.4f} (positive class {}); points in roc_{}.csv\n", h.roc.auc,
                       to_string(h.roc.positive_class), h.label);
  }

  if (r.horizons.size() > 1) {
    out += "\n==== Accuracy by horizon ====\n";
    for (const auto& h : r.horizons) {
      out += fmt::format("{:<24} accuracy {:.4f}  AUC {:.4f}\n", h.label, h.metrics_non_bankrupt.accuracy, h.roc.auc);
    }
  }
  out += "\nnote: the intercept is always fitted and reported; the published coefficient tables print no "
         "intercept row.\n";
  return out;
}

std::string roc_csv(const RocCurve& roc) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& p : roc.points) {
    out += detail::format_double(p.threshold) + ',' + detail::format_double(p.fpr) + ',' +
           detail::format_double(p.tpr) + '\n';
  }
  return out;
}

std::string roc_svg(const RocCurve& roc, const std::string& title) {
  constexpr double kSize = 400.0;
  constexpr double kPad = 50.0;
  constexpr double kPlot = kSize - 2 * kPad;
  auto px = [&](double fpr) { return kPad + fpr * kPlot; };
  auto py = [&](double tpr) { return kSize - kPad - tpr * kPlot; };

  std::string pts;
  for (const auto& p : roc.points) pts += fmt::format("{:.2f},{:.2f} ", px(p.fpr), py(p.tpr));
  if (!pts.empty()) pts.pop_back();

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n", kSize);
  svg += fmt::format("<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n", kSize);
  svg += fmt::format(
      "<text x=\"{:.0f}\" y=\"25\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
      kSize / 2, xml_escape(title));
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kPad, kSize - kPad,
                     kSize - kPad);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{0}\" x2=\"{0}\" y2=\"{1}\" stroke=\"black\"/>\n", kPad, kSize - kPad);
  for (int t = 0; t <= 4; ++t) {
    const double v = t / 4.0;
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"10\" "
        "text-anchor=\"middle\">{:.2f}</text>\n",
        px(v), kSize - kPad + 15, v);
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"10\" "
        "text-anchor=\"end\">{:.2f}</text>\n",
        kPad - 5, py(v) + 3, v);
  }
  svg += fmt::format(
      "<text x=\"{:.0f}\" y=\"{:.0f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
      "False positive rate</text>\n",
      kSize / 2, kSize - 12);
  svg += fmt::format(
      "<text x=\"14\" y=\"{:.0f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 14 {:.0f})\">True positive rate</text>\n",
      kSize / 2, kSize / 2);
  svg += fmt::format(
      "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n",
      px(0), py(0), px(1), py(1));
  svg += fmt::format("<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>\n", pts);
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
      "AUC = {:.4f} (positive: {})</text>\n",
      px(1) - 5, py(0) - 10, roc.auc, to_string(roc.positive_class));
  svg += "</svg>\n";
  return svg;
}

void write_report_bundle(const RunReport& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + out_dir + "': " + ec.message());
  const fs::path dir(out_dir);
  write_file(dir / "report.json", to_json(r).dump(2) + "\n");
  write_file(dir / "report.txt", render_report(r));
  for (const auto& h : r.horizons) {
    save_model(h.final_fit, (dir / model_file_name(r, h.label)).string());
    write_file(dir / ("roc_" + h.label + ".csv"), roc_csv(h.roc));
    write_file(dir / ("roc_" + h.label + ".svg"), roc_svg(h.roc, "ROC curve: " + h.label));
  }
}

}  // namespace bfp
