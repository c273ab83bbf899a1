#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bfp/linalg.hpp"

namespace bfp {

inline constexpr const char* kInterceptName = "Intercept";

/// Logistic model on the log-odds scale: logit p(x) = beta[0] + sum_j beta[j+1] x_j.
struct LogitModel {
  std::vector<std::string> feature_names;
  std::vector<double> beta;  // [intercept, slopes...]

  std::size_t feature_count() const noexcept { return feature_names.size(); }
  double linear_predictor(std::span<const double> x) const;
};

struct FitConfig {
  double tolerance = 1e-8;   // on the max-norm of the score
  int max_iterations = 50;
  double ridge = 0.0;        // penalty on slopes; 0 is plain maximum likelihood
};

struct FittedModel {
  LogitModel model;
  Matrix covariance;  // inverse information at the final iterate
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  /// Log-likelihood at the start value and after each accepted step.
  std::vector<double> log_likelihood_trace;
};

struct InferenceRow {
  std::string name;
  double coefficient = 0.0;
  double std_err = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool is_intercept = false;
};

struct InferenceTable {
  std::vector<InferenceRow> rows;
  double confidence_level = 0.95;
};

/// Overflow-safe logistic function.
double sigmoid(double eta) noexcept;
/// log(1 + exp(eta)) without overflow.
double log1p_exp(double eta) noexcept;

double predict_probability(const LogitModel& m, std::span<const double> x);

/// Class 1 iff p(x) > 0.5; p(x) == 0.5 exactly is class 0.
int classify(const LogitModel& m, std::span<const double> x);

/// Sum over rows of y*eta - log(1 + exp(eta)). X excludes the intercept column.
double log_likelihood(const LogitModel& m, const Matrix& x, std::span<const int> y);

/// Score vector X1^T (y - p) with X1 = [1 | X].
std::vector<double> score(const LogitModel& m, const Matrix& x, std::span<const int> y);

/// Maximum-likelihood fit by iteratively reweighted least squares (Newton's
/// method on the log-likelihood). Each step solves (X1^T W X1) d = X1^T (y - p)
/// by Cholesky, with W = diag(p(1 - p)), and halves the step up to 30 times
/// until the log-likelihood does not decrease. Stops once the score max-norm
/// is at or below cfg.tolerance.
///
/// Throws SeparationDetected when the likelihood keeps rising along a
/// direction with diverging coefficients, and SingularInformation when the
/// weighted normal matrix is singular (collinear covariates). Hitting
/// max_iterations is not an error: the result carries converged = false.
FittedModel fit_irls(const Matrix& x, std::span<const int> y, const FitConfig& cfg = {},
                     std::vector<std::string> feature_names = {});

/// Thrown for collinear designs. `column` indexes the covariate (0-based,
/// intercept excluded) at which the Cholesky factorization broke down, or is
/// empty when the intercept itself is the problem.
class SingularInformationError : public Error {
 public:
  SingularInformationError(std::optional<std::size_t> column, const std::string& message)
      : Error(ErrorCode::SingularInformation, message), column_(column) {}
  std::optional<std::size_t> column() const noexcept { return column_; }

 private:
  std::optional<std::size_t> column_;
};

/// Wald z, two-sided normal p-value and symmetric confidence interval for
/// one coefficient.
InferenceRow wald_row(std::string name, double coefficient, double std_err, double level = 0.95);

/// Wald table for every coefficient (intercept first). Requires a converged
/// fit and strictly positive standard errors.
InferenceTable wald_inference(const FittedModel& f, double level = 0.95);

struct DecisionBoundary {
  std::vector<double> coefficients;  // beta0 + sum beta_j x_j = 0
  std::optional<double> root;        // -beta0 / beta1 for one feature
};

DecisionBoundary decision_boundary(const LogitModel& m);

}  // namespace bfp
