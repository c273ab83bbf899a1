#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bfp {

enum class PositiveClass { Bankrupt, NonBankrupt };

std::string_view to_string(PositiveClass c) noexcept;
/// Accepts "bankrupt" and "non-bankrupt" / "non_bankrupt".
std::optional<PositiveClass> positive_class_from_string(std::string_view s) noexcept;
inline int positive_label(PositiveClass c) noexcept { return c == PositiveClass::Bankrupt ? 1 : 0; }

/// Rows are actual classes, columns predicted. Indexed by label value
/// (1 = bankrupt, 0 = non-bankrupt).
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  /// Cells in report order: bankrupt row first, then non-bankrupt.
  static ConfusionMatrix from_report_cells(std::size_t bb, std::size_t bn, std::size_t nb, std::size_t nn);

  std::size_t at(int actual, int predicted) const;
  std::size_t& at(int actual, int predicted);
  std::size_t total() const noexcept;
  std::size_t actual_total(int actual) const;
  std::size_t predicted_total(int predicted) const;
  std::size_t trace() const noexcept { return cells_[0][0] + cells_[1][1]; }

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::array<std::array<std::size_t, 2>, 2> cells_{};
};

ConfusionMatrix confusion_matrix(std::span<const int> actual, std::span<const int> predicted);

struct ClassMetrics {
  PositiveClass positive_class = PositiveClass::Bankrupt;
  double accuracy = 0;
  std::optional<double> precision;  // empty: no predicted positives
  std::optional<double> recall;     // empty: no actual positives
};

ClassMetrics class_metrics(const ConfusionMatrix& cm, PositiveClass positive);

struct RocPoint {
  double threshold = 0;  // positive when score >= threshold; +inf for the (0,0) anchor
  double fpr = 0;
  double tpr = 0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0;
  PositiveClass positive_class = PositiveClass::Bankrupt;
};

/// `scores` are probabilities of bankruptcy (label 1). For the non-bankrupt
/// positive class the curve is built on 1 - score. Thresholds sweep the
/// distinct positive-class scores in descending order; ties collapse into
/// one point. AUC is the trapezoidal area under the points.
RocCurve roc_curve(std::span<const double> scores, std::span<const int> actual, PositiveClass positive);

}  // namespace bfp
