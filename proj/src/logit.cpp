#include "bfp/logit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bfp/normal.hpp"

namespace bfp {
namespace {

constexpr int kMaxHalvings = 30;
// Linear predictors beyond this are numerically saturated probabilities.
constexpr double kSaturatedEta = 30.0;
// At a score-converged point, a pending Newton step that still moves some
// linear predictor this far means the likelihood is flat but rising.
constexpr double kResidualStepEta = 0.1;
constexpr double kResidualStepMinEta = 15.0;

void check_features(const LogitModel& m, std::span<const double> x) {
  if (m.beta.size() != m.feature_count() + 1) {
    throw Error(ErrorCode::DimensionMismatch, "model has " + std::to_string(m.beta.size()) +
                                                  " coefficients for " + std::to_string(m.feature_count()) +
                                                  " features");
  }
  if (x.size() != m.feature_count()) {
    throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.size()) +
                                                  " values, model expects " + std::to_string(m.feature_count()));
  }
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Everything IRLS needs at one coefficient vector.
struct Iterate {
  std::vector<double> eta;
  double log_likelihood = 0.0;  // unpenalized
  double objective = 0.0;       // penalized when ridge > 0
  std::vector<double> gradient;
  Matrix hessian;  // negative Hessian of the objective: X1^T W X1 + ridge * I_slopes
  double max_abs_eta = 0.0;
};

class IrlsProblem {
 public:
  IrlsProblem(const Matrix& x, std::span<const int> y, double ridge)
      : x_(x), y_(y), ridge_(ridge), k_(x.cols() + 1) {}

  std::size_t dim() const noexcept { return k_; }

  double eta(std::size_t i, std::span<const double> beta) const {
    double e = beta[0];
    auto row = x_.row(i);
    for (std::size_t j = 0; j + 1 < k_; ++j) e += beta[j + 1] * row[j];
    return e;
  }

  double penalty(std::span<const double> beta) const {
    if (ridge_ == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t j = 1; j < k_; ++j) s += beta[j] * beta[j];
    return 0.5 * ridge_ * s;
  }

  Iterate evaluate(std::span<const double> beta) const {
    Iterate it;
    const std::size_t n = x_.rows();
    it.eta.resize(n);
    it.gradient.assign(k_, 0.0);
    it.hessian = Matrix(k_, k_);
    std::vector<double> row1(k_);
    for (std::size_t i = 0; i < n; ++i) {
      const double e = eta(i, beta);
      it.eta[i] = e;
      it.max_abs_eta = std::max(it.max_abs_eta, std::abs(e));
      it.log_likelihood += y_[i] * e - log1p_exp(e);
      const double p = sigmoid(e);
      const double resid = y_[i] - p;
      const double w = p * (1.0 - p);
      row1[0] = 1.0;
      auto row = x_.row(i);
      std::copy(row.begin(), row.end(), row1.begin() + 1);
      for (std::size_t a = 0; a < k_; ++a) {
        it.gradient[a] += row1[a] * resid;
        const double wa = w * row1[a];
        for (std::size_t b = 0; b <= a; ++b) it.hessian(a, b) += wa * row1[b];
      }
    }
    for (std::size_t a = 0; a < k_; ++a)
      for (std::size_t b = 0; b < a; ++b) it.hessian(b, a) = it.hessian(a, b);
    if (ridge_ > 0.0) {
      for (std::size_t j = 1; j < k_; ++j) {
        it.gradient[j] -= ridge_ * beta[j];
        it.hessian(j, j) += ridge_;
      }
    }
    it.objective = it.log_likelihood - penalty(beta);
    return it;
  }

  // objective(beta + step) - objective(beta), summed row by row so that the
  // tiny gains near the optimum are not lost to rounding of the full sums.
  double gain(const Iterate& it, std::span<const double> beta, std::span<const double> step,
              double* max_eta) const {
    double g = 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i < x_.rows(); ++i) {
      const double e = it.eta[i];
      const double d = eta(i, step);
      double dlog;
      if (std::abs(d) < 1.0) {
        // log((1 + e^(e+d)) / (1 + e^e)) = log1p(p * expm1(d))
        dlog = std::log1p(sigmoid(e) * std::expm1(d));
      } else {
        dlog = log1p_exp(e + d) - log1p_exp(e);
      }
      g += y_[i] * d - dlog;
      m = std::max(m, std::abs(e + d));
    }
    if (ridge_ > 0.0) {
      double s = 0.0;
      for (std::size_t j = 1; j < k_; ++j) s += step[j] * (2.0 * beta[j] + step[j]);
      g -= 0.5 * ridge_ * s;
    }
    if (max_eta) *max_eta = m;
    return g;
  }

  double max_step_eta(std::span<const double> step) const {
    double m = 0.0;
    for (std::size_t i = 0; i < x_.rows(); ++i) m = std::max(m, std::abs(eta(i, step)));
    return m;
  }

 private:
  const Matrix& x_;
  std::span<const int> y_;
  double ridge_;
  std::size_t k_;
};

[[noreturn]] void throw_separation(const std::string& detail) {
  throw Error(ErrorCode::SeparationDetected,
              "the classes are (quasi-)completely separated; the maximum-likelihood estimate does not "
              "exist (" + detail + "). Consider dropping the separating covariate or setting a ridge penalty");
}

std::vector<double> newton_direction(const Iterate& it, const std::vector<std::string>& names) {
  try {
    return Cholesky(it.hessian).solve(it.gradient);
  } catch (const NotPositiveDefiniteError& e) {
    if (it.max_abs_eta > kResidualStepMinEta) {
      throw_separation("information matrix collapsed with fitted probabilities at 0 or 1");
    }
    const std::size_t pivot = e.pivot();
    if (pivot == 0) {
      throw SingularInformationError(std::nullopt, "information matrix is singular at the intercept");
    }
    throw SingularInformationError(pivot - 1, "information matrix is singular: covariate '" + names[pivot - 1] +
                                                  "' is collinear with earlier covariates");
  }
}

}  // namespace

double sigmoid(double eta) noexcept {
  if (eta < 0.0) {
    const double e = std::exp(eta);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(-eta));
}

double log1p_exp(double eta) noexcept { return std::max(eta, 0.0) + std::log1p(std::exp(-std::abs(eta))); }

double LogitModel::linear_predictor(std::span<const double> x) const {
  check_features(*this, x);
  double e = beta[0];
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!std::isfinite(x[j])) throw Error(ErrorCode::InvalidArgument, "non-finite covariate value");
    e += beta[j + 1] * x[j];
  }
  return e;
}

double predict_probability(const LogitModel& m, std::span<const double> x) {
  return sigmoid(m.linear_predictor(x));
}

int classify(const LogitModel& m, std::span<const double> x) {
  return predict_probability(m, x) > 0.5 ? 1 : 0;
}

double log_likelihood(const LogitModel& m, const Matrix& x, std::span<const int> y) {
  if (x.rows() != y.size()) throw Error(ErrorCode::DimensionMismatch, "X rows != label count");
  if (x.cols() != m.feature_count() || m.beta.size() != m.feature_count() + 1) {
    throw Error(ErrorCode::DimensionMismatch, "X columns do not match the model");
  }
  double ll = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double e = m.linear_predictor(x.row(i));
    ll += y[i] * e - log1p_exp(e);
  }
  return ll;
}

std::vector<double> score(const LogitModel& m, const Matrix& x, std::span<const int> y) {
  if (x.rows() != y.size()) throw Error(ErrorCode::DimensionMismatch, "X rows != label count");
  std::vector<double> g(m.beta.size(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double r = y[i] - predict_probability(m, x.row(i));
    g[0] += r;
    for (std::size_t j = 0; j < x.cols(); ++j) g[j + 1] += r * x(i, j);
  }
  return g;
}

FittedModel fit_irls(const Matrix& x, std::span<const int> y, const FitConfig& cfg,
                     std::vector<std::string> feature_names) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n) throw Error(ErrorCode::DimensionMismatch, "X has " + std::to_string(n) + " rows but " +
                                                                   std::to_string(y.size()) + " labels");
  if (!(cfg.tolerance > 0.0) || cfg.max_iterations < 1 || !(cfg.ridge >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "fit config needs tolerance > 0, max_iterations >= 1, ridge >= 0");
  }
  if (n == 0) throw Error(ErrorCode::EmptyDataset, "no observations to fit");
  if (n < p + 2) {
    throw Error(ErrorCode::InvalidArgument, "need at least " + std::to_string(p + 2) + " observations for " +
                                                std::to_string(p) + " covariates, got " + std::to_string(n));
  }
  std::size_t ones = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw Error(ErrorCode::InvalidLabel, "labels must be 0 or 1");
    ones += static_cast<std::size_t>(v);
  }
  if (ones == 0 || ones == n) throw Error(ErrorCode::SingleClassInput, "labels contain only one class");
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "design matrix has a non-finite entry");
  }
  if (feature_names.empty()) {
    for (std::size_t j = 0; j < p; ++j) feature_names.push_back("x" + std::to_string(j + 1));
  } else if (feature_names.size() != p) {
    throw Error(ErrorCode::DimensionMismatch, "feature name count does not match X columns");
  }

  const IrlsProblem problem(x, y, cfg.ridge);
  std::vector<double> beta(p + 1, 0.0);
  Iterate it = problem.evaluate(beta);

  FittedModel fit;
  fit.log_likelihood_trace.push_back(it.objective);

  for (;;) {
    const double gnorm = max_abs(it.gradient);
    if (gnorm <= cfg.tolerance) {
      const auto pending = newton_direction(it, feature_names);
      if (it.max_abs_eta > kResidualStepMinEta && problem.max_step_eta(pending) > kResidualStepEta) {
        throw_separation("score vanished while the Newton step still diverges");
      }
      fit.converged = true;
      break;
    }
    if (fit.iterations >= cfg.max_iterations) break;

    const auto direction = newton_direction(it, feature_names);
    std::vector<double> candidate(beta.size()), step(beta.size());
    double t = 1.0;
    bool accepted = false;
    double gain = 0.0;
    double cand_max_eta = 0.0;
    for (int h = 0; h <= kMaxHalvings; ++h, t *= 0.5) {
      for (std::size_t j = 0; j < beta.size(); ++j) {
        step[j] = t * direction[j];
        candidate[j] = beta[j] + step[j];
      }
      gain = problem.gain(it, beta, step, &cand_max_eta);
      if (gain >= 0.0) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // line search stalled at rounding level

    if (cand_max_eta > kSaturatedEta && norm2(candidate) > norm2(beta) * (1.0 + 1e-3) &&
        gain < 1e-6 * (1.0 + std::abs(it.objective))) {
      throw_separation("|linear predictor| > 30 while coefficients grow and the likelihood flattens");
    }

    const double objective = it.objective + gain;
    beta = std::move(candidate);
    it = problem.evaluate(beta);
    // carry the accumulated value so the trace reflects the measured gains
    it.objective = objective;
    it.log_likelihood = objective + problem.penalty(beta);
    ++fit.iterations;
    fit.log_likelihood_trace.push_back(it.objective);
  }

  fit.gradient_norm = max_abs(it.gradient);
  try {
    fit.covariance = Cholesky(it.hessian).inverse();
  } catch (const NotPositiveDefiniteError&) {
    (void)newton_direction(it, feature_names);  // rethrows as the specific condition
    throw;
  }
  fit.log_likelihood = it.log_likelihood;
  fit.model.feature_names = std::move(feature_names);
  fit.model.beta = std::move(beta);
  return fit;
}

InferenceRow wald_row(std::string name, double coefficient, double std_err, double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "confidence level must lie in (0, 1)");
  if (!(std_err > 0.0) || !std::isfinite(std_err)) {
    throw Error(ErrorCode::ZeroStdErr, "standard error of '" + name + "' is not strictly positive");
  }
  const double crit = normal_quantile(1.0 - (1.0 - level) / 2.0);
  InferenceRow row;
  row.name = std::move(name);
  row.coefficient = coefficient;
  row.std_err = std_err;
  row.z = coefficient / std_err;
  row.p_value = two_sided_p_value(row.z);
  row.ci_low = coefficient - crit * std_err;
  row.ci_high = coefficient + crit * std_err;
  return row;
}

InferenceTable wald_inference(const FittedModel& f, double level) {
  if (!f.converged) {
    throw Error(ErrorCode::NotConverged, "fit did not converge after " + std::to_string(f.iterations) +
                                             " iterations (score norm " + std::to_string(f.gradient_norm) + ")");
  }
  const std::size_t k = f.model.beta.size();
  if (f.covariance.rows() != k || f.covariance.cols() != k) {
    throw Error(ErrorCode::DimensionMismatch, "covariance shape does not match the coefficients");
  }
  InferenceTable table;
  table.confidence_level = level;
  for (std::size_t j = 0; j < k; ++j) {
    const double var = f.covariance(j, j);
    const std::string name = j == 0 ? kInterceptName : f.model.feature_names[j - 1];
    if (!(var > 0.0)) throw Error(ErrorCode::ZeroStdErr, "variance of '" + name + "' is not positive");
    auto row = wald_row(name, f.model.beta[j], std::sqrt(var), level);
    row.is_intercept = j == 0;
    table.rows.push_back(std::move(row));
  }
  return table;
}

DecisionBoundary decision_boundary(const LogitModel& m) {
  if (m.beta.size() != m.feature_count() + 1 || m.beta.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "model coefficients do not match its features");
  }
  for (double b : m.beta) {
    if (!std::isfinite(b)) throw Error(ErrorCode::InvalidArgument, "model has a non-finite coefficient");
  }
  const bool flat = std::all_of(m.beta.begin() + 1, m.beta.end(), [](double b) { return b == 0.0; });
  if (flat) throw Error(ErrorCode::DegenerateBoundary, "all slope coefficients are zero");
  DecisionBoundary out;
  out.coefficients = m.beta;
  if (m.feature_count() == 1) out.root = -m.beta[0] / m.beta[1];
  return out;
}

}  // namespace bfp
