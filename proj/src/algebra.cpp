#include "popa/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "popa/scalar.hpp"

namespace popa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::LogBranchViolation: return "LogBranchViolation";
    case ErrorCode::NotInGroup: return "NotInGroup";
    case ErrorCode::UnitNotInGroup: return "UnitNotInGroup";
    case ErrorCode::DomainExhausted: return "DomainExhausted";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NotOmegaHomogeneous: return "NotOmegaHomogeneous";
    case ErrorCode::NotDifferentiable: return "NotDifferentiable";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidTriple: return "InvalidTriple";
    case ErrorCode::NotInRange: return "NotInRange";
    case ErrorCode::NotOrthogonalIdempotents: return "NotOrthogonalIdempotents";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Algebra Algebra::hadamard(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidInput, "algebra dimension must be >= 1");
  return Algebra(AlgebraKind::HadamardRd, dim, nullptr);
}

Algebra Algebra::complex_plane() { return Algebra(AlgebraKind::ComplexAsR2, 2, nullptr); }

Algebra Algebra::grid(std::vector<double> abscissae) {
  if (abscissae.empty()) throw Error(ErrorCode::InvalidInput, "grid must contain at least one abscissa");
  for (std::size_t i = 0; i < abscissae.size(); ++i) {
    const double s = abscissae[i];
    if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::InvalidInput, "grid abscissa outside [0,1]");
    if (i > 0 && !(abscissae[i - 1] < s)) throw Error(ErrorCode::InvalidInput, "grid must be strictly increasing");
  }
  const std::size_t dim = abscissae.size();
  return Algebra(AlgebraKind::GridCInterval, dim,
                 std::make_shared<const std::vector<double>>(std::move(abscissae)));
}

const std::vector<double>& Algebra::abscissae() const {
  static const std::vector<double> empty;
  return grid_ ? *grid_ : empty;
}

bool operator==(const Algebra& a, const Algebra& b) {
  if (a.kind_ != b.kind_ || a.dim_ != b.dim_) return false;
  if (a.grid_ == b.grid_) return true;
  return a.abscissae() == b.abscissae();
}

Element::Element(Algebra algebra, std::vector<double> coords)
    : algebra_(std::move(algebra)), coords_(std::move(coords)) {
  if (coords_.size() != algebra_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(algebra_.dim()) +
                                                  " coordinates, got " + std::to_string(coords_.size()));
  }
}

Element Element::zero(const Algebra& algebra) { return Element(algebra, std::vector<double>(algebra.dim(), 0.0)); }

Element Element::one(const Algebra& algebra) {
  std::vector<double> c(algebra.dim(), 0.0);
  if (algebra.componentwise()) {
    std::fill(c.begin(), c.end(), 1.0);
  } else {
    c[0] = 1.0;
  }
  return Element(algebra, std::move(c));
}

Element Element::basis(const Algebra& algebra, std::size_t i) {
  std::vector<double> c(algebra.dim(), 0.0);
  c.at(i) = 1.0;
  return Element(algebra, std::move(c));
}

void require_same_algebra(const Element& a, const Element& b) {
  if (!(a.algebra() == b.algebra())) {
    throw Error(ErrorCode::DimensionMismatch, "operands belong to different algebras");
  }
}

Element add(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return Element(a.algebra(), std::move(c));
}

Element sub(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] - b[i];
  return Element(a.algebra(), std::move(c));
}

Element mul(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  if (!a.algebra().componentwise()) {
    const auto z = a.as_complex() * b.as_complex();
    return Element(a.algebra(), {z.real(), z.imag()});
  }
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] * b[i];
  return Element(a.algebra(), std::move(c));
}

Element scale(double s, const Element& a) {
  std::vector<double> c(a.coords());
  for (double& v : c) v *= s;
  return Element(a.algebra(), std::move(c));
}

double norm(const Element& a) {
  if (!a.algebra().componentwise()) return std::abs(a.as_complex());
  double m = 0.0;
  for (double v : a.coords()) m = std::max(m, std::abs(v));
  return m;
}

Spectrum spectrum(const Element& a) {
  Spectrum s;
  if (a.algebra().componentwise()) {
    s.points.reserve(a.dim());
    for (double v : a.coords()) s.points.emplace_back(v, 0.0);
  } else {
    const auto z = a.as_complex();
    s.points = {z, std::conj(z)};
  }
  return s;
}

double min_spectral_modulus(const Element& a) {
  if (!a.algebra().componentwise()) return std::abs(a.as_complex());
  double m = std::abs(a[0]);
  for (double v : a.coords()) m = std::min(m, std::abs(v));
  return m;
}

bool is_invertible(const Element& a, double eps) { return min_spectral_modulus(a) > eps; }

Element invert(const Element& a, double eps) {
  if (!is_invertible(a, eps)) throw Error(ErrorCode::NotInvertible, "a spectral point lies within eps of 0");
  return apply_spectral(a, [](std::complex<double> z) { return 1.0 / z; });
}

Element exp(const Element& a) {
  return apply_spectral(a, [](std::complex<double> z) { return std::exp(z); });
}

Element log_principal(const Element& a) {
  for (const auto& z : spectrum(a).points) {
    const bool on_cut = std::abs(z.imag()) <= kInvertibilityEps && z.real() <= kInvertibilityEps;
    if (on_cut) throw Error(ErrorCode::LogBranchViolation, "spectrum meets the closed negative real axis");
  }
  return apply_spectral(a, [](std::complex<double> z) { return std::log(z); });
}

Element mu(const Element& a) { return apply_spectral(a, [](std::complex<double> z) { return scalar::mu(z); }); }

}  // namespace popa
