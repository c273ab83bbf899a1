#pragma once

namespace bfp {

/// Complementary error function by W. J. Cody's rational Chebyshev
/// approximations (Math. Comp. 23, 1969) on the three ranges |x| <= 0.46875,
/// <= 4 and > 4. Relative error is below 1e-15 across the double range.
double erfc_cody(double x) noexcept;

/// Standard normal CDF, Phi(z) = erfc(-z / sqrt 2) / 2. Absolute error stays
/// below 1e-15, well inside the 1e-7 needed for printed p-values.
double normal_cdf(double z) noexcept;

/// Two-sided tail probability 2 * Phi(-|z|).
double two_sided_p_value(double z) noexcept;

/// Inverse standard normal CDF (Wichura's AS 241, PPND16), accurate to about
/// 1e-16 relative. Returns -inf / +inf at p = 0 / 1 and NaN outside [0, 1].
double normal_quantile(double p) noexcept;

}  // namespace bfp
