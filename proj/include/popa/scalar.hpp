#pragma once

// Scalar kernels of the holomorphic functional calculus. Every element-valued
// transcendental map in the library reduces to one of these applied to the
// spectral coordinates of an element.

#include <complex>

namespace popa::scalar {

using complex = std::complex<double>;

/// Below this modulus the ratio kernels switch to their Taylor series.
inline constexpr double kSeriesThreshold = 1e-5;
/// Number of Taylor terms used in the series branch.
inline constexpr int kSeriesTerms = 8;
/// L'Hospital branch for ratios whose denominator is e^z - 1.
inline constexpr double kLhospitalEps = 1e-12;

/// e^z - 1 without cancellation near z = 0.
complex expm1(complex z);

/// log(1 + w) without cancellation near w = 0 (principal branch).
complex log1p(complex w);

/// mu(z) = (e^z - 1) / z, with mu(0) = 1.
complex mu(complex z);

/// H(z) = (e^z - 1 - z) / z = mu(z) - 1, with H(0) = 0.
complex h(complex z);

/// (e^{tz} - 1) / (e^z - 1), with value t wherever e^z = 1.
complex lambda(complex z, double t);

/// log(1 + z) / z, with value 1 at z = 0.
complex log1p_ratio(complex z);

}  // namespace popa::scalar
