#include "popa/tilting.hpp"

#include <algorithm>
#include <cmath>

#include "popa/scalar.hpp"
#include "popa/structure.hpp"

namespace popa {

namespace {

using scalar::complex;

bool omega_homogeneous_family(const GsSolution& sol) {
  if (sol.get_if<variant::DegenerateExp>() != nullptr) return false;
  if (const auto* s = sol.get_if<variant::SigmaAffine>()) return validate_sigma(s->sigma);
  return true;
}

// Coordinates on which the spectral value of g is nonzero.
std::vector<bool> nonzero_mask(const Element& g) {
  if (!g.algebra().componentwise()) return std::vector<bool>(g.dim(), std::abs(g.as_complex()) > scalar::kLhospitalEps);
  std::vector<bool> mask(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) mask[i] = std::abs(g[i]) > scalar::kLhospitalEps;
  return mask;
}

double masked_norm(const Element& a, const std::vector<bool>& mask) {
  if (!a.algebra().componentwise()) return mask[0] ? norm(a) : 0.0;
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (mask[i]) m = std::max(m, std::abs(a[i]));
  }
  return m;
}

complex pow_minus_one(complex w, double k) { return scalar::expm1(k * scalar::log1p(w)); }

}  // namespace

Element tilt_T(const GsSolution& sol, const Element& u) { return tilt_T_scaled(sol, u, 1.0); }

Element tilt_T_scaled(const GsSolution& sol, const Element& u, double t) {
  const Element g = gamma(sol, u);
  return scale(t, u * apply_spectral(g, [t](complex z) { return scalar::mu(t * z); }));
}

Element lambda_scale(const GsSolution& sol, const Element& u, double t) {
  return apply_spectral(gamma(sol, u), [t](complex z) { return scalar::lambda(z, t); });
}

double radiality_check(const GsSolution& sol, const Element& u, const std::vector<double>& t_grid) {
  const Element n_unit = adjustor_N(sol, tilt_T(sol, u));
  double worst = 0.0;
  for (double t : t_grid) {
    const Element lhs = adjustor_N(sol, tilt_T_scaled(sol, u, t));
    worst = std::max(worst, norm(lhs - lambda_scale(sol, u, t) * n_unit));
  }
  return worst;
}

Element tilt_inverse(const GsSolution& sol, const Element& v) {
  if (!omega_homogeneous_family(sol)) {
    throw Error(ErrorCode::NotOmegaHomogeneous, "closed-form inverse needs an omega-homogeneous gamma");
  }
  const Element g = gamma(sol, v);
  (void)log_principal(Element::one(sol.algebra()) + g);  // branch check
  return v * apply_spectral(g, [](complex z) { return scalar::log1p_ratio(z); });
}

GuaranteeRadii guarantee_radii(const GsSolution& sol) {
  GuaranteeRadii r;
  r.gamma_norm = gamma_operator_norm(sol);
  if (r.gamma_norm == 0.0) {
    r.delta = 1.0;
    r.eta = 0.5;
    return r;
  }
  const double growth = r.gamma_norm * std::exp(r.gamma_norm);
  r.delta = std::min(1.0, 1.0 / (3.0 * growth));
  r.eta = std::min({1.0, r.delta / 2.0, r.delta / (2.0 * growth)});
  return r;
}

TiltResult tilt_solve_fixed_point(const GsSolution& sol, const Element& v, std::size_t max_iter) {
  const GuaranteeRadii radii = guarantee_radii(sol);
  TiltResult result{v, 0, 0.0, norm(v) < radii.eta, radii.eta, 0.0};

  Element u = v;
  double prev_step = -1.0;
  double prev_residual = -1.0;
  int growth_streak = 0;
  for (std::size_t n = 1; n <= max_iter; ++n) {
    const double residual = norm(v - tilt_T(sol, u));
    if (residual < kFixedPointTol) {
      result.u = u;
      result.iterations = n;
      result.final_residual = residual;
      return result;
    }
    if (prev_residual >= 0.0 && residual > prev_residual) {
      if (++growth_streak >= 5) break;
    } else {
      growth_streak = 0;
    }
    prev_residual = residual;

    const Element h = apply_spectral(gamma(sol, u), [](complex z) { return scalar::h(z); });
    Element next = v - u * h;
    const double step = norm(next - u);
    // Ratios of steps at rounding level carry no information.
    if (prev_step > 1e-13) result.max_contraction = std::max(result.max_contraction, step / prev_step);
    prev_step = step;
    u = std::move(next);
  }
  throw Error(ErrorCode::NoConvergence, "fixed-point iteration did not reach residual 1e-12");
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::PlusUnbounded: return "PlusUnbounded";
    case Direction::MinusUnbounded: return "MinusUnbounded";
    case Direction::BothUnbounded: return "BothUnbounded";
    case Direction::UnitNorm: return "UnitNorm";
  }
  return "Unknown";
}

UnboundednessVerdict unboundedness_direction(const GsSolution& sol, const Element& u, double s_max, double tol) {
  const Element g = gamma(sol, u);
  UnboundednessVerdict verdict;
  if (std::abs(norm(exp(g)) - 1.0) < tol) return verdict;

  const auto mask = nonzero_mask(g);
  // The direction is read off the sets E+- = {e^{+-s g(u)}}: on each spectral
  // coordinate |e^{sz}| is strictly monotone in s, so comparing s_max with
  // s_max/2 separates growth from decay.
  auto grows = [&](double sign) {
    const double at_max = masked_norm(exp(scale(sign * s_max, g)), mask);
    const double at_half = masked_norm(exp(scale(sign * 0.5 * s_max, g)), mask);
    return std::isinf(at_max) || at_max > at_half * (1.0 + 1e-9);
  };
  const bool plus = grows(1.0);
  const bool minus = grows(-1.0);

  if (plus && minus) {
    verdict.direction = Direction::BothUnbounded;
    return verdict;
  }
  verdict.direction = minus ? Direction::MinusUnbounded : Direction::PlusUnbounded;
  const double bounded_sign = minus ? 1.0 : -1.0;

  Element limit = -(u * apply_spectral(g, [](complex z) {
                      return std::abs(z) > scalar::kLhospitalEps ? 1.0 / z : complex(0.0);
                    }));
  const Element far = tilt_T_scaled(sol, u, bounded_sign * s_max);
  verdict.limit_defect = masked_norm(far - limit, mask);
  verdict.limit_point = std::move(limit);
  return verdict;
}

std::vector<RatioError> ratio_limit_check(const Element& a, double t, std::size_t n_max) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidInput, "t must be positive");
  const Element limit = apply_spectral(a, [t](complex z) { return scalar::lambda(z, t); });
  std::vector<RatioError> out;
  for (std::size_t n = 10; n <= n_max; n *= 10) {
    const double nd = static_cast<double>(n);
    const double m = std::round(t * nd);
    const Element ratio = apply_spectral(a, [&](complex z) {
      const complex w = z / nd;
      if (std::abs(1.0 + w) < kInvertibilityEps) throw Error(ErrorCode::NotInvertible, "1 + a/n is singular");
      const complex den = pow_minus_one(w, nd);
      if (std::abs(den) < scalar::kLhospitalEps) return complex(m / nd);
      return pow_minus_one(w, m) / den;
    });
    out.push_back(RatioError{n, norm(ratio - limit)});
  }
  return out;
}

}  // namespace popa
