#pragma once

// Roots of e^w = 1 + w in the right half-plane, the boundary constant xi,
// Wolodzko-Javor triples (N, Lambda, W) and the idempotent solution builder.

#include <cstddef>
#include <functional>
#include <vector>

#include "popa/solutions.hpp"

namespace popa {

struct StSolution {
  double x = 0.0;  // Re w
  double y = 0.0;  // Im w
  /// floor(y / 2 pi): the 2 pi window of Im w holding the root.
  int branch = 0;
  /// |e^w - 1 - w|
  double residual = 0.0;
};

inline constexpr double kStScanStep = 1e-3;

/// Roots of e^w = 1 + w with Im w = y(x) = sqrt(e^{2x} - (1+x)^2) > 0 and
/// Re w in (x_lo, x_hi), in increasing order of Im w. Candidates are bracketed
/// by sign changes of sin y(x) - e^{-x} y(x) with cos y(x) > 0 and refined by
/// Newton on e^w - 1 - w. Stops after max_roots roots.
std::vector<StSolution> st_roots_in(double x_lo, double x_hi, std::size_t max_roots);

/// The first n_roots roots with Re w > 0 (scan over (0, 20]).
std::vector<StSolution> st_roots(std::size_t n_roots);

/// The root xi > 1 of e^{-xi} = xi - 1.
double xi_root();

/// y(x)^2 = e^{2x} - (1 + x)^2.
double st_y_squared(double x);

/// A Wolodzko-Javor triple sampled at finitely many lambdas.
struct WjTriple {
  /// Spans the additive subgroup N; need not be orthonormal.
  std::vector<Element> kernel_basis;
  /// Finite sample of the multiplicative group Lambda.
  std::vector<Element> lambda_samples;
  std::function<Element(const Element&)> W;
};

struct WjDiagnostics {
  bool invariant_kernel = true;  // Lambda N = N on samples
  bool kernel_iff_unit = true;   // W(lambda) in N iff lambda = 1
  bool cocycle = true;           // W(l1 l2) = W(l1) + l1 W(l2) mod N
  double max_cocycle_defect = 0.0;
  bool ok() const { return invariant_kernel && kernel_iff_unit && cocycle; }
};

/// Orthogonal projection of r onto the complement of span(basis).
Element project_off(const std::vector<Element>& basis, const Element& r);

WjDiagnostics wj_diagnose(const WjTriple& t, double tol = 1e-10);
bool wj_verify(const WjTriple& t, double tol = 1e-10);

/// S(x) = lambda when x = W(lambda) mod N for a sampled lambda, 0 otherwise.
class WjOracle {
 public:
  /// Throws InvalidTriple when the triple fails verification.
  explicit WjOracle(WjTriple triple, double tol = 1e-10);

  Element operator()(const Element& x) const;
  /// True when x = W(lambda) mod N for some sampled lambda.
  bool covers(const Element& x) const;

  const WjTriple& triple() const noexcept { return triple_; }

 private:
  std::ptrdiff_t lookup(const Element& x) const;

  WjTriple triple_;
  std::vector<Element> basis_;  // orthonormalised kernel basis
  std::vector<Element> images_; // W(lambda) projected off N
  double tol_;
};

WjOracle wj_build_S(WjTriple triple, double tol = 1e-10);

struct CoveredResidual {
  double max_residual = 0.0;
  std::size_t pairs_tested = 0;
};

/// GS residual of the oracle over pairs of points whose composite x + S(x) y
/// is covered as well.
CoveredResidual wj_covered_gs_residual(const WjOracle& oracle, const std::vector<Element>& points);

/// N = null(gamma), Lambda = the given samples of ran S, W = a closed-form
/// preimage per variant. Throws NotInRange when a sample has no preimage.
WjTriple wj_extract(const GsSolution& sol, const std::vector<Element>& lambda_samples);

/// S(x) = 1 + sum_i sigma(e_i x) e_i. Throws NotOrthogonalIdempotents.
GsSolution idempotent_solution(const Algebra& algebra, std::vector<Element> idempotents, std::vector<double> sigma);

}  // namespace popa
