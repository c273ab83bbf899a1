#include "bfp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bfp/error.hpp"

namespace bfp {
namespace {

std::size_t idx(int label) {
  if (label != 0 && label != 1) throw Error(ErrorCode::InvalidLabel, "labels must be 0 or 1");
  return static_cast<std::size_t>(label);
}

}  // namespace

std::string_view to_string(PositiveClass c) noexcept {
  return c == PositiveClass::Bankrupt ? "bankrupt" : "non-bankrupt";
}

std::optional<PositiveClass> positive_class_from_string(std::string_view s) noexcept {
  if (s == "bankrupt") return PositiveClass::Bankrupt;
  if (s == "non-bankrupt" || s == "non_bankrupt") return PositiveClass::NonBankrupt;
  return std::nullopt;
}

ConfusionMatrix ConfusionMatrix::from_report_cells(std::size_t bb, std::size_t bn, std::size_t nb, std::size_t nn) {
  ConfusionMatrix cm;
  cm.at(1, 1) = bb;
  cm.at(1, 0) = bn;
  cm.at(0, 1) = nb;
  cm.at(0, 0) = nn;
  return cm;
}

std::size_t ConfusionMatrix::at(int actual, int predicted) const { return cells_[idx(actual)][idx(predicted)]; }
std::size_t& ConfusionMatrix::at(int actual, int predicted) { return cells_[idx(actual)][idx(predicted)]; }

std::size_t ConfusionMatrix::total() const noexcept {
  return cells_[0][0] + cells_[0][1] + cells_[1][0] + cells_[1][1];
}

std::size_t ConfusionMatrix::actual_total(int actual) const { return at(actual, 0) + at(actual, 1); }
std::size_t ConfusionMatrix::predicted_total(int predicted) const { return at(0, predicted) + at(1, predicted); }

ConfusionMatrix confusion_matrix(std::span<const int> actual, std::span<const int> predicted) {
  if (actual.size() != predicted.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(actual.size()) + " actual labels vs " +
                                               std::to_string(predicted.size()) + " predictions");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < actual.size(); ++i) ++cm.at(actual[i], predicted[i]);
  return cm;
}

ClassMetrics class_metrics(const ConfusionMatrix& cm, PositiveClass positive) {
  if (cm.total() == 0) throw Error(ErrorCode::EmptyDataset, "confusion matrix is empty");
  const int pos = positive_label(positive);
  const double tp = static_cast<double>(cm.at(pos, pos));
  ClassMetrics m;
  m.positive_class = positive;
  m.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
  if (const auto pp = cm.predicted_total(pos); pp > 0) m.precision = tp / static_cast<double>(pp);
  if (const auto ap = cm.actual_total(pos); ap > 0) m.recall = tp / static_cast<double>(ap);
  return m;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> actual, PositiveClass positive) {
  if (scores.size() != actual.size()) throw Error(ErrorCode::LengthMismatch, "scores and labels differ in length");
  const int pos = positive_label(positive);
  std::vector<double> s(scores.size());
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!(scores[i] >= 0.0 && scores[i] <= 1.0)) throw Error(ErrorCode::InvalidArgument, "scores must lie in [0, 1]");
    s[i] = positive == PositiveClass::Bankrupt ? scores[i] : 1.0 - scores[i];
    if (idx(actual[i]) == static_cast<std::size_t>(pos)) ++n_pos;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error(ErrorCode::SingleClassInput, "ROC needs both classes");

  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });

  RocCurve roc;
  roc.positive_class = positive;
  roc.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double thr = s[order[k]];
    while (k < order.size() && s[order[k]] == thr) {
      (actual[order[k]] == pos ? tp : fp) += 1;
      ++k;
    }
    roc.points.push_back({thr, static_cast<double>(fp) / static_cast<double>(n_neg),
                          static_cast<double>(tp) / static_cast<double>(n_pos)});
  }
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    const auto& a = roc.points[i - 1];
    const auto& b = roc.points[i];
    roc.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return roc;
}

}  // namespace bfp
