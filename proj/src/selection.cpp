#include "bfp/selection.hpp"

#include <algorithm>
#include <numeric>

namespace bfp {
namespace {

std::vector<const InferenceRow*> candidates(const InferenceTable& t) {
  std::vector<const InferenceRow*> out;
  for (const auto& r : t.rows) {
    if (!r.is_intercept) out.push_back(&r);
  }
  return out;
}

}  // namespace

SelectionResult select_by_pvalue(const InferenceTable& t, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  SelectionResult res;
  res.rule = SelectionRule::threshold(alpha);
  for (const auto* r : candidates(t)) {
    if (r->p_value < alpha) {
      res.kept.push_back(r->name);
    } else {
      res.dropped.emplace_back(r->name, r->p_value);
    }
  }
  if (res.kept.empty()) {
    throw Error(ErrorCode::AllDropped, "no covariate has p < " + std::to_string(alpha));
  }
  return res;
}

SelectionResult select_top_k(const InferenceTable& t, std::size_t k) {
  const auto rows = candidates(t);
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (k > rows.size()) {
    throw Error(ErrorCode::KTooLarge, "k = " + std::to_string(k) + " exceeds the " + std::to_string(rows.size()) +
                                          " candidate covariates");
  }
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rows[a]->p_value < rows[b]->p_value; });
  std::vector<bool> keep(rows.size(), false);
  for (std::size_t i = 0; i < k; ++i) keep[order[i]] = true;

  SelectionResult res;
  res.rule = SelectionRule::top_k(k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (keep[i]) {
      res.kept.push_back(rows[i]->name);
    } else {
      res.dropped.emplace_back(rows[i]->name, rows[i]->p_value);
    }
  }
  return res;
}

SelectionResult select(const InferenceTable& t, const SelectionRule& rule) {
  return rule.kind == SelectionRule::Kind::TopK ? select_top_k(t, rule.k) : select_by_pvalue(t, rule.alpha);
}

}  // namespace bfp
