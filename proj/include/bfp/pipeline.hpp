#pragma once

#include <span>
#include <string>
#include <vector>

#include "bfp/descriptives.hpp"
#include "bfp/eval.hpp"
#include "bfp/ingest.hpp"
#include "bfp/logit.hpp"
#include "bfp/selection.hpp"

namespace bfp {

inline constexpr const char* kLabelColumn = "Bankruptcy";

/// Where a pipeline failure happened; decides the CLI exit code.
enum class Stage { Input, Fit, Evaluation };

int exit_code(Stage s) noexcept;
std::string_view to_string(Stage s) noexcept;

class StageError : public Error {
 public:
  StageError(Stage stage, ErrorCode code, const std::string& message)
      : Error(code, "[" + std::string(to_string(stage)) + "] " + message), stage_(stage) {}
  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

struct PipelineInput {
  std::string path;
  std::string label;
};

struct PipelineConfig {
  std::vector<PipelineInput> inputs;
  bool ratios_mode = false;
  SplitConfig split;
  FitConfig fit;
  SelectionRule rule = SelectionRule::threshold(0.05);
  PositiveClass positive = PositiveClass::NonBankrupt;
  double corr_threshold = 0.9;
  double confidence_level = 0.95;
};

/// Design matrix over the rows whose requested ratios are all defined.
struct Design {
  Matrix x;
  std::vector<int> y;                // empty when labels were not required
  std::vector<std::size_t> rows;     // source record index per design row
  std::vector<std::string> features;
};

/// Reads a raw statement CSV, or a ratio CSV when `ratios_mode` is set.
RatioDataset load_ratio_dataset(std::string_view csv_text, bool ratios_mode);

Design build_design(const RatioDataset& data, std::span<const std::string> features, bool require_labels = true);

struct TestPrediction {
  std::string firm_id;
  int actual = 0;
  double probability = 0;
  int predicted = 0;
};

struct HorizonReport {
  std::string label;
  std::string input_path;
  std::size_t n_records = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::size_t n_train_used_preliminary = 0;
  std::size_t n_train_used_final = 0;
  std::vector<std::string> candidate_features;

  std::vector<std::string> described;  // Bankruptcy + final features
  std::vector<DescriptiveStats> descriptives;
  CorrelationMatrix correlation;
  std::vector<CorrelationFlag> collinear;

  FittedModel preliminary;
  InferenceTable preliminary_table;
  SelectionResult selection;
  FittedModel final_fit;
  InferenceTable final_table;

  std::vector<TestPrediction> test_predictions;
  ConfusionMatrix confusion;
  ClassMetrics metrics_non_bankrupt;
  ClassMetrics metrics_bankrupt;
  RocCurve roc;
};

struct RunReport {
  PipelineConfig config;
  std::vector<HorizonReport> horizons;
};

/// The whole pipeline for one horizon, from CSV text. Errors surface as
/// StageError carrying the underlying code.
HorizonReport run_horizon(std::string_view csv_text, const std::string& label, const std::string& path,
                          const PipelineConfig& cfg);

/// Reads every input and runs the horizons concurrently; report order
/// follows the input order.
RunReport run_pipeline(const PipelineConfig& cfg);

/// Fit on the selected features of `train`, naming the collinear pair when
/// the information matrix is singular.
FittedModel fit_features(const RatioDataset& train, std::span<const std::string> features, const FitConfig& cfg);

}  // namespace bfp
