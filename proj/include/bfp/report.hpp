#pragma once

#include <string>

#include "bfp/pipeline.hpp"
#include "json.hpp"

namespace bfp {

nlohmann::ordered_json to_json(const DescriptiveStats& d);
nlohmann::ordered_json to_json(const InferenceTable& t);
nlohmann::ordered_json to_json(const ConfusionMatrix& cm);
nlohmann::ordered_json to_json(const ClassMetrics& m);
nlohmann::ordered_json to_json(const RunReport& r);

/// Text tables in the row order of the published tables.
std::string render_descriptives(std::span<const std::string> names, std::span<const DescriptiveStats> stats);
std::string render_correlation(const CorrelationMatrix& m);
std::string render_inference(const InferenceTable& t);
std::string render_selection(const SelectionResult& s, const InferenceTable& t);
std::string render_confusion(const ConfusionMatrix& cm);
std::string render_metrics(const ClassMetrics& as_published, const ClassMetrics& other);
std::string render_report(const RunReport& r);

/// `threshold,fpr,tpr` rows, anchor threshold printed as `inf`.
std::string roc_csv(const RocCurve& roc);
std::string roc_svg(const RocCurve& roc, const std::string& title);

/// Writes report.json, report.txt, the model file(s) and ROC CSV/SVG pairs.
/// One horizon writes model.json; several write model_<label>.json.
void write_report_bundle(const RunReport& r, const std::string& out_dir);

}  // namespace bfp
