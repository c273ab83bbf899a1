#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bfp/linalg.hpp"

namespace bfp {

/// Summary of one variable using the spreadsheet conventions:
///
///   standard_deviation  s = sqrt( sum (x - mean)^2 / (n - 1) )
///   standard_error        = s / sqrt(n)
///   skewness              = n / ((n-1)(n-2)) * sum ((x - mean) / s)^3          (n >= 3)
///   excess_kurtosis       = n(n+1) / ((n-1)(n-2)(n-3)) * sum ((x - mean) / s)^4
///                           - 3 (n-1)^2 / ((n-2)(n-3))                         (n >= 4)
///
/// Skewness and kurtosis are empty when the variance is zero or n is too small.
struct DescriptiveStats {
  std::size_t n = 0;
  double mean = 0;
  double standard_error = 0;
  double median = 0;
  double standard_deviation = 0;
  std::optional<double> excess_kurtosis;
  std::optional<double> skewness;
  double range = 0;
  double minimum = 0;
  double maximum = 0;
};

/// Requires n >= 2 (TooFewObservations otherwise).
DescriptiveStats describe(std::span<const double> series);

struct CorrelationMatrix {
  std::vector<std::string> names;
  Matrix values;

  double operator()(std::size_t i, std::size_t j) const noexcept { return values(i, j); }
};

/// Pearson correlations between equal-length columns. Throws
/// ZeroVarianceColumn for a constant column and TooFewObservations for n < 2.
CorrelationMatrix correlation_matrix(std::span<const std::string> names,
                                     std::span<const std::vector<double>> columns);

double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationFlag {
  std::string first;
  std::string second;
  double value = 0;
};

/// Off-diagonal pairs with |r| >= threshold, largest |r| first.
std::vector<CorrelationFlag> flag_multicollinearity(const CorrelationMatrix& m, double threshold);

}  // namespace bfp
