#pragma once

namespace condent {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile for 0 < p < 1 (Acklam's rational approximation
/// followed by one Halley step against erfc). Absolute error below 1e-8 on
/// (1e-10, 1 - 1e-10). Throws std::domain_error outside (0, 1).
double normal_quantile(double p);

}  // namespace condent
