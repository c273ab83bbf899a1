#pragma once

#include <initializer_list>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bfp/linalg.hpp"
#include "bfp/logit.hpp"

namespace bfp::testing {

struct Sample {
  Matrix x;
  std::vector<int> y;
};

// Draws y ~ Bernoulli(sigmoid(beta0 + x.beta)) with standard normal covariates.
inline Sample draw_logistic(std::size_t n, std::span<const double> beta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t p = beta.size() - 1;
  Sample s{Matrix(n, p), std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double eta = beta[0];
    for (std::size_t j = 0; j < p; ++j) {
      s.x(i, j) = norm(rng);
      eta += beta[j + 1] * s.x(i, j);
    }
    s.y[i] = unif(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1 : 0;
  }
  return s;
}

// Product-form likelihood, computed without the log1p_exp shortcut.
inline double naive_log_likelihood(std::span<const double> beta, const Matrix& x, std::span<const int> y) {
  double ll = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double eta = beta[0];
    for (std::size_t j = 0; j < x.cols(); ++j) eta += beta[j + 1] * x(i, j);
    const double p = 1.0 / (1.0 + std::exp(-eta));
    ll += y[i] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return ll;
}

// Brute-force maximizer over a lattice: a pitch-0.1 sweep of [-4, 4]^d picks
// the cell, then a pitch-`pitch` sweep of +-0.5 around it.
inline std::vector<double> grid_argmax(const Matrix& x, std::span<const int> y, double pitch) {
  const std::size_t d = x.cols() + 1;
  auto sweep = [&](std::vector<double> center, double half, double step) {
    const int m = static_cast<int>(std::lround(half / step));
    std::vector<int> k(d, -m);
    std::vector<double> best = center, b(d);
    double best_ll = -INFINITY;
    while (true) {
      for (std::size_t j = 0; j < d; ++j) b[j] = center[j] + k[j] * step;
      const double ll = naive_log_likelihood(b, x, y);
      if (ll > best_ll) {
        best_ll = ll;
        best = b;
      }
      std::size_t j = 0;
      while (j < d && ++k[j] > m) k[j++] = -m;
      if (j == d) break;
    }
    return best;
  };
  auto coarse = sweep(std::vector<double>(d, 0.0), 4.0, 0.1);
  return sweep(coarse, 0.5, pitch);
}

// Mann-Whitney probability that a random positive outscores a random
// negative, ties counted as one half.
inline double mann_whitney(std::span<const double> pos_scores, std::span<const double> neg_scores) {
  double wins = 0;
  for (double a : pos_scores) {
    for (double b : neg_scores) wins += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
  }
  return wins / (static_cast<double>(pos_scores.size()) * static_cast<double>(neg_scores.size()));
}

}  // namespace bfp::testing
