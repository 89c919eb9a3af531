#pragma once

namespace qrng::nist {

/// Regularized upper incomplete gamma function Q(a, x).
double igamc(double a, double x);

double erfc(double x);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace qrng::nist
