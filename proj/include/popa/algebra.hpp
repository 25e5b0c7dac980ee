#pragma once

// Concrete commutative unital real Banach algebras: R^d with the Hadamard
// product, C viewed as R^2, and C[0,1] sampled on a finite grid.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "popa/errors.hpp"

namespace popa {

enum class AlgebraKind { HadamardRd, ComplexAsR2, GridCInterval };

/// Tolerance below which a spectral point counts as zero.
inline constexpr double kInvertibilityEps = 1e-12;

class Algebra {
 public:
  static Algebra hadamard(std::size_t dim);
  static Algebra complex_plane();
  /// Grid abscissae must be strictly increasing inside [0, 1].
  static Algebra grid(std::vector<double> abscissae);

  AlgebraKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  /// Empty unless kind() == GridCInterval.
  const std::vector<double>& abscissae() const;

  /// True for the kinds whose product is componentwise.
  bool componentwise() const noexcept { return kind_ != AlgebraKind::ComplexAsR2; }

  friend bool operator==(const Algebra& a, const Algebra& b);

 private:
  Algebra(AlgebraKind kind, std::size_t dim, std::shared_ptr<const std::vector<double>> grid)
      : kind_(kind), dim_(dim), grid_(std::move(grid)) {}

  AlgebraKind kind_;
  std::size_t dim_;
  std::shared_ptr<const std::vector<double>> grid_;
};

/// A point of one of the algebras above, stored by coordinates.
class Element {
 public:
  Element(Algebra algebra, std::vector<double> coords);

  static Element zero(const Algebra& algebra);
  static Element one(const Algebra& algebra);
  /// Basis vector e_i (coordinate i set to 1).
  static Element basis(const Algebra& algebra, std::size_t i);

  const Algebra& algebra() const noexcept { return algebra_; }
  std::size_t dim() const noexcept { return coords_.size(); }
  const std::vector<double>& coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  /// The single spectral coordinate of a ComplexAsR2 element.
  std::complex<double> as_complex() const { return {coords_[0], coords_[1]}; }

 private:
  Algebra algebra_;
  std::vector<double> coords_;
};

struct Spectrum {
  std::vector<std::complex<double>> points;
};

Element add(const Element& a, const Element& b);
Element sub(const Element& a, const Element& b);
Element mul(const Element& a, const Element& b);
Element scale(double s, const Element& a);

inline Element operator+(const Element& a, const Element& b) { return add(a, b); }
inline Element operator-(const Element& a, const Element& b) { return sub(a, b); }
inline Element operator-(const Element& a) { return scale(-1.0, a); }
inline Element operator*(const Element& a, const Element& b) { return mul(a, b); }
inline Element operator*(double s, const Element& a) { return scale(s, a); }

/// Max-norm of the coordinates; modulus for ComplexAsR2.
double norm(const Element& a);
Spectrum spectrum(const Element& a);
/// Smallest modulus over the spectrum.
double min_spectral_modulus(const Element& a);
bool is_invertible(const Element& a, double eps = kInvertibilityEps);

/// Throws NotInvertible when a spectral point lies within eps of 0.
Element invert(const Element& a, double eps = kInvertibilityEps);

Element exp(const Element& a);
/// Principal logarithm; throws LogBranchViolation if the spectrum meets (-inf, 0].
Element log_principal(const Element& a);
/// (e^a - 1)/a evaluated spectrally, with value 1 at zero spectral points.
Element mu(const Element& a);

/// Applies a scalar holomorphic kernel to the spectral coordinates of a.
/// Componentwise kinds evaluate f on the real axis and keep the real part.
template <class F>
Element apply_spectral(const Element& a, F&& f) {
  std::vector<double> out(a.dim());
  if (a.algebra().componentwise()) {
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = f(std::complex<double>(a[i], 0.0)).real();
  } else {
    const std::complex<double> w = f(a.as_complex());
    out[0] = w.real();
    out[1] = w.imag();
  }
  return Element(a.algebra(), std::move(out));
}

/// Throws DimensionMismatch unless both elements live in the same algebra.
void require_same_algebra(const Element& a, const Element& b);

}  // namespace popa
