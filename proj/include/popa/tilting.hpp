#pragma once

// Exponential tilting T(u) = u (e^{g(u)} - 1) / g(u), the radial scale
// lambda_u(t), tilt inversion (closed form and contraction fixed point) and the
// limit behaviour of T along rays.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "popa/solutions.hpp"

namespace popa {

/// T(u) = u mu(g(u)).
Element tilt_T(const GsSolution& sol, const Element& u);

/// T_t(u) = u (e^{t g(u)} - 1) / g(u) = t u mu(t g(u)).
Element tilt_T_scaled(const GsSolution& sol, const Element& u, double t);

/// lambda_u(t) = (e^{t g(u)} - 1) / (e^{g(u)} - 1), equal to t at spectral
/// points z of g(u) with e^z = 1.
Element lambda_scale(const GsSolution& sol, const Element& u, double t);

/// max_t norm(N(T_t(u)) - lambda_u(t) N(T(u))).
double radiality_check(const GsSolution& sol, const Element& u, const std::vector<double>& t_grid);

/// Closed-form inverse u = v log(1 + g(v)) / g(v). Throws NotOmegaHomogeneous
/// for the degenerate family and LogBranchViolation when 1 + g(v) has
/// spectrum on (-inf, 0].
Element tilt_inverse(const GsSolution& sol, const Element& v);

struct TiltResult {
  Element u;
  std::size_t iterations = 0;
  double final_residual = 0.0;
  /// norm(v) < eta, the radius on which convergence is guaranteed.
  bool guaranteed = false;
  double eta = 0.0;
  /// Largest observed ratio |u_{n+1} - u_n| / |u_n - u_{n-1}|.
  double max_contraction = 0.0;
};

struct GuaranteeRadii {
  double gamma_norm = 0.0;
  double delta = 0.0;
  double eta = 0.0;
};

/// delta = min{1, 1/(3|g| e^{|g|})}, eta = min{1, delta/2, delta/(2|g| e^{|g|})}.
GuaranteeRadii guarantee_radii(const GsSolution& sol);

inline constexpr std::size_t kDefaultMaxIter = 200;
inline constexpr double kFixedPointTol = 1e-12;

/// Iterates u_{n+1} = v - u_n H(u_n) from u_1 = v until norm(v - T(u)) < 1e-12.
/// Outside the eta-ball the solve is attempted and reported with
/// guaranteed = false. Throws NoConvergence after max_iter steps or after five
/// consecutive residual increases.
TiltResult tilt_solve_fixed_point(const GsSolution& sol, const Element& v, std::size_t max_iter = kDefaultMaxIter);

enum class Direction { PlusUnbounded, MinusUnbounded, BothUnbounded, UnitNorm };

std::string_view to_string(Direction d);

struct UnboundednessVerdict {
  Direction direction = Direction::UnitNorm;
  /// -u/g(u) on the coordinates where g(u) != 0 (0 elsewhere), when one side is bounded.
  std::optional<Element> limit_point;
  /// Distance of T(-+ s_max u) from the limit on those coordinates.
  double limit_defect = 0.0;
};

UnboundednessVerdict unboundedness_direction(const GsSolution& sol, const Element& u, double s_max,
                                             double tol = 1e-9);

struct RatioError {
  std::size_t n = 0;
  double error = 0.0;
};

/// Errors of ((1+a/n)^{m} - 1)/((1+a/n)^n - 1), m = round(t n), against
/// (e^{ta} - 1)/(e^a - 1) for n = 10, 100, ... <= n_max.
std::vector<RatioError> ratio_limit_check(const Element& a, double t, std::size_t n_max);

}  // namespace popa
