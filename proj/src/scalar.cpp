#include "popa/scalar.hpp"

#include <cmath>

namespace popa::scalar {

namespace {

// sum_{k=first}^{kSeriesTerms-1} z^k / (k+1)!
complex ratio_series(complex z, int first) {
  complex term = 1.0;
  complex sum = 0.0;
  for (int k = 0; k < kSeriesTerms; ++k) {
    if (k > 0) term *= z / static_cast<double>(k + 1);
    if (k >= first) sum += term;
  }
  return sum;
}

}  // namespace

complex expm1(complex z) {
  const double x = z.real();
  const double y = z.imag();
  if (y == 0.0) return {std::expm1(x), 0.0};
  const double half_sin = std::sin(0.5 * y);
  const double cosm1 = -2.0 * half_sin * half_sin;
  return {std::expm1(x) * std::cos(y) + cosm1, std::exp(x) * std::sin(y)};
}

complex log1p(complex w) {
  const double re = w.real();
  const double im = w.imag();
  if (im == 0.0 && re > -1.0) return {std::log1p(re), 0.0};
  const double real_part = 0.5 * std::log1p(2.0 * re + re * re + im * im);
  return {real_part, std::atan2(im, 1.0 + re)};
}

complex mu(complex z) {
  if (std::abs(z) < kSeriesThreshold) return ratio_series(z, 0);
  return expm1(z) / z;
}

complex h(complex z) {
  if (std::abs(z) < kSeriesThreshold) return ratio_series(z, 1);
  return (expm1(z) - z) / z;
}

complex lambda(complex z, double t) {
  if (std::abs(z) < kSeriesThreshold) return t * mu(t * z) / mu(z);
  const complex denom = expm1(z);
  if (std::abs(denom) < kLhospitalEps) return t;
  return expm1(t * z) / denom;
}

complex log1p_ratio(complex z) {
  if (std::abs(z) < kSeriesThreshold) {
    // log(1+z)/z = sum_{k>=0} (-z)^k / (k+1)
    complex term = 1.0;
    complex sum = 0.0;
    for (int k = 0; k < kSeriesTerms; ++k) {
      sum += term / static_cast<double>(k + 1);
      term *= -z;
    }
    return sum;
  }
  return log1p(z) / z;
}

}  // namespace popa::scalar
