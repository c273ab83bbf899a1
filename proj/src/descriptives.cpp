#include "bfp/descriptives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bfp {
namespace {

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sum_sq_dev(std::span<const double> x, double m) {
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s;
}

}  // namespace

DescriptiveStats describe(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) throw Error(ErrorCode::TooFewObservations, "describe needs at least 2 observations");
  for (double v : series) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "series has a non-finite value");
  }
  const double nd = static_cast<double>(n);

  DescriptiveStats d;
  d.n = n;
  d.mean = mean_of(series);
  d.standard_deviation = std::sqrt(sum_sq_dev(series, d.mean) / (nd - 1.0));
  d.standard_error = d.standard_deviation / std::sqrt(nd);

  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());
  d.minimum = sorted.front();
  d.maximum = sorted.back();
  d.range = d.maximum - d.minimum;
  d.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  if (d.standard_deviation > 0.0) {
    double s3 = 0.0;
    double s4 = 0.0;
    for (double v : series) {
      const double z = (v - d.mean) / d.standard_deviation;
      s3 += z * z * z;
      s4 += z * z * z * z;
    }
    if (n >= 3) d.skewness = nd / ((nd - 1.0) * (nd - 2.0)) * s3;
    if (n >= 4) {
      d.excess_kurtosis = nd * (nd + 1.0) / ((nd - 1.0) * (nd - 2.0) * (nd - 3.0)) * s4 -
                          3.0 * (nd - 1.0) * (nd - 1.0) / ((nd - 2.0) * (nd - 3.0));
    }
  }
  return d;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "correlation of unequal-length series");
  if (x.size() < 2) throw Error(ErrorCode::TooFewObservations, "correlation needs at least 2 observations");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my);
  const double r = sxy / std::sqrt(sum_sq_dev(x, mx) * sum_sq_dev(y, my));
  return std::clamp(r, -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(std::span<const std::string> names,
                                     std::span<const std::vector<double>> columns) {
  if (names.size() != columns.size()) throw Error(ErrorCode::DimensionMismatch, "one name per column required");
  const std::size_t k = columns.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (columns[i].size() < 2) throw Error(ErrorCode::TooFewObservations, "column '" + names[i] + "' has n < 2");
    if (columns[i].size() != columns[0].size()) throw Error(ErrorCode::LengthMismatch, "columns differ in length");
    const double m = mean_of(columns[i]);
    if (sum_sq_dev(columns[i], m) == 0.0) {
      throw Error(ErrorCode::ZeroVarianceColumn, "column '" + names[i] + "' is constant");
    }
  }
  CorrelationMatrix out{std::vector<std::string>(names.begin(), names.end()), Matrix(k, k)};
  for (std::size_t i = 0; i < k; ++i) {
    out.values(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double r = pearson(columns[i], columns[j]);
      out.values(i, j) = r;
      out.values(j, i) = r;
    }
  }
  return out;
}

std::vector<CorrelationFlag> flag_multicollinearity(const CorrelationMatrix& m, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0, 1]");
  }
  std::vector<CorrelationFlag> flags;
  const std::size_t k = m.names.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(m(i, j)) >= threshold) flags.push_back({m.names[j], m.names[i], m(i, j)});
    }
  }
  std::stable_sort(flags.begin(), flags.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.value) > std::abs(b.value); });
  return flags;
}

}  // namespace bfp
