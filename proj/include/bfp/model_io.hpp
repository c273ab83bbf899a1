#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bfp/ingest.hpp"
#include "bfp/logit.hpp"
#include "json.hpp"

namespace bfp {

/// Model file layout:
///   {"format": "bfp-logit-model", "version": 1, "feature_names": [...],
///    "beta": [intercept, ...], "covariance": [[...], ...], "log_likelihood": x,
///    "iterations": n, "converged": b, "gradient_norm": x}
nlohmann::ordered_json model_to_json(const FittedModel& f);
FittedModel model_from_json(const nlohmann::json& j);

void save_model(const FittedModel& f, const std::string& path);
FittedModel load_model(const std::string& path);

struct Prediction {
  std::string firm_id;
  double probability = 0;
  int predicted_class = 0;
};

/// Scores every record. The data's ratio columns must equal the model's
/// features exactly; otherwise FeatureMismatch lists what is missing and extra.
std::vector<Prediction> predict(const LogitModel& m, const RatioDataset& data);

/// `firm_id,probability,class` with shortest round-trip probabilities.
std::string predictions_csv(std::span<const Prediction> preds);

/// Reads `name,coefficient,std_err` rows (a printed coefficient table) and
/// recomputes z, p and the confidence interval for each.
InferenceTable wald_from_coefficient_csv(std::string_view csv_text, double level = 0.95);

}  // namespace bfp
