#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bfp/logit.hpp"

namespace bfp {

struct SelectionRule {
  enum class Kind { Threshold, TopK };
  Kind kind = Kind::Threshold;
  double alpha = 0.05;
  std::size_t k = 0;

  static SelectionRule threshold(double a) { return {Kind::Threshold, a, 0}; }
  static SelectionRule top_k(std::size_t k) { return {Kind::TopK, 0.0, k}; }
};

struct SelectionResult {
  std::vector<std::string> kept;                       // table order
  std::vector<std::pair<std::string, double>> dropped;  // (name, p-value), table order
  SelectionRule rule;
};

/// Keeps covariates with p < alpha. The intercept row never takes part.
/// Throws AllDropped when nothing survives.
SelectionResult select_by_pvalue(const InferenceTable& t, double alpha);

/// Keeps the k smallest p-values; ties go to the earlier row.
SelectionResult select_top_k(const InferenceTable& t, std::size_t k);

SelectionResult select(const InferenceTable& t, const SelectionRule& rule);

}  // namespace bfp
