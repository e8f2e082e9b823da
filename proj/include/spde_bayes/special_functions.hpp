#pragma once

#include <numbers>

namespace spde_bayes {

inline constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF, Φ(x) = erfc(−x/√2)/2. Relative error below 1e-14
/// over the whole double range where the result is a normal number.
double normal_cdf(double x);

/// Upper tail 1 − Φ(x) without cancellation.
double normal_sf(double x);

/// log Φ(x); stays finite far into the lower tail where Φ underflows.
double log_normal_cdf(double x);

/// Inverse of Φ on (0, 1).
double normal_quantile(double p);

/// E|Z|^r for Z ~ N(0,1): 2^{r/2} Γ((r+1)/2) / √π.
double normal_abs_moment(double r);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

/// Mills-ratio hazard φ(z)/Φ(z), evaluated stably for very negative z.
double normal_hazard(double z);

} // namespace spde_bayes
