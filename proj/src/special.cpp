#include "popa/special.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "popa/structure.hpp"
#include "popa/tilting.hpp"

namespace popa {

namespace {

using complex = std::complex<double>;

double st_y(double x) { return std::sqrt(std::max(0.0, st_y_squared(x))); }

double st_bracket_fn(double x) {
  const double y = st_y(x);
  return std::sin(y) - std::exp(-x) * y;
}

complex st_newton(complex w) {
  for (int it = 0; it < 50; ++it) {
    const complex e = std::exp(w);
    const complex step = (e - 1.0 - w) / (e - 1.0);
    w -= step;
    if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

double st_residual(complex w) { return std::abs(std::exp(w) - 1.0 - w); }

std::vector<Element> orthonormalize(const std::vector<Element>& basis) {
  if (basis.empty()) return {};
  const auto d = static_cast<Eigen::Index>(basis.front().dim());
  Matrix b(d, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c) {
    for (Eigen::Index r = 0; r < d; ++r) b(r, static_cast<Eigen::Index>(c)) = basis[c][static_cast<std::size_t>(r)];
  }
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  std::vector<Element> out;
  for (Eigen::Index c = 0; c < sv.size(); ++c) {
    if (sv(c) <= 1e-12 * sv(0)) break;
    const Eigen::VectorXd col = svd.matrixU().col(c);
    out.emplace_back(basis.front().algebra(), std::vector<double>(col.data(), col.data() + col.size()));
  }
  return out;
}

double dot(const Element& a, const Element& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

Element project_off_orthonormal(const std::vector<Element>& onb, const Element& r) {
  Element out = r;
  for (const auto& b : onb) out = out - scale(dot(b, out), b);
  return out;
}

double range_tol(const Element& target) { return 1e-9 * std::max(1.0, norm(target)); }

// W for 1 + (linear map): the least-squares preimage, rejected when it misses.
std::function<Element(const Element&)> linear_preimage(const GsSolution& sol) {
  const Matrix m = gamma_matrix(sol);
  const Algebra alg = sol.algebra();
  auto solver = std::make_shared<Eigen::CompleteOrthogonalDecomposition<Matrix>>(m);
  return [solver, m, alg](const Element& lambda) {
    const Element target = lambda - Element::one(alg);
    Eigen::Map<const Eigen::VectorXd> rhs(target.coords().data(), static_cast<Eigen::Index>(target.dim()));
    const Eigen::VectorXd x = solver->solve(rhs);
    if ((m * x - rhs).cwiseAbs().maxCoeff() > range_tol(target)) {
      throw Error(ErrorCode::NotInRange, "lambda has no preimage under S");
    }
    return Element(alg, std::vector<double>(x.data(), x.data() + x.size()));
  };
}

std::function<Element(const Element&)> degenerate_preimage(const GsSolution& sol, const variant::DegenerateExp& p) {
  const Algebra alg = sol.algebra();
  const std::size_t d = alg.dim();
  if (p.form == DegenerateForm::PurePower) {
    throw Error(ErrorCode::NotDifferentiable, "the pure power form has no kernel at 0");
  }
  if (p.form == DegenerateForm::AffinePower) {
    return [p, alg](const Element& lambda) {
      const std::size_t a = p.axis;
      const std::size_t b = a == 0 ? 1 : 0;
      if (p.rho == 0.0) {
        if (norm(lambda - Element::one(alg)) > range_tol(lambda)) throw Error(ErrorCode::NotInRange, "S is constant 1");
        return Element::zero(alg);
      }
      if (!(lambda[a] > 0.0) || std::abs(std::pow(lambda[a], p.gamma_exp) - lambda[b]) > range_tol(lambda)) {
        throw Error(ErrorCode::NotInRange, "lambda is not of the form (s, s^gamma) with s > 0");
      }
      std::vector<double> x(2, 0.0);
      x[a] = (lambda[a] - 1.0) / p.rho;
      return Element(alg, std::move(x));
    };
  }
  std::vector<double> c = p.functional;
  if (c.empty()) {
    c.assign(d, 0.0);
    c[p.axis] = 1.0;
  }
  return [p, c, alg](const Element& lambda) {
    double c_sq = 0.0;
    for (double v : c) c_sq += v * v;
    std::ptrdiff_t target = -1;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] != 0.0) {
        if (std::abs(lambda[k] - 1.0) > range_tol(lambda)) throw Error(ErrorCode::NotInRange, "driving coordinates of S are 1");
      } else if (target < 0) {
        target = static_cast<std::ptrdiff_t>(k);
      } else if (std::abs(lambda[k] - lambda[static_cast<std::size_t>(target)]) > range_tol(lambda)) {
        throw Error(ErrorCode::NotInRange, "exponential coordinates of S coincide");
      }
    }
    const double level = target < 0 ? 1.0 : lambda[static_cast<std::size_t>(target)];
    if (!(level > 0.0)) throw Error(ErrorCode::NotInRange, "exponential coordinates of S are positive");
    if (p.gamma_exp == 0.0 || target < 0) {
      if (std::abs(level - 1.0) > range_tol(lambda)) throw Error(ErrorCode::NotInRange, "S is constant 1");
      return Element::zero(alg);
    }
    const double s = std::log(level) / p.gamma_exp;
    std::vector<double> x(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) x[k] = c[k] * s / c_sq;
    return Element(alg, std::move(x));
  };
}

}  // namespace

double st_y_squared(double x) {
  const double e = std::exp(x);
  return e * e - (1.0 + x) * (1.0 + x);
}

std::vector<StSolution> st_roots_in(double x_lo, double x_hi, std::size_t max_roots) {
  std::vector<StSolution> roots;
  if (max_roots == 0) return roots;
  double x_prev = x_lo;
  bool have_prev = false;
  double f_prev = 0.0;
  double x = x_lo + kStScanStep;
  while (x < x_hi && roots.size() < max_roots) {
    if (st_y_squared(x) <= 0.0) {
      have_prev = false;
      x += kStScanStep;
      continue;
    }
    const double f = st_bracket_fn(x);
    if (have_prev && ((f_prev < 0.0) != (f < 0.0))) {
      double lo = x_prev;
      double hi = x;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((st_bracket_fn(mid) < 0.0) == (f_prev < 0.0)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double xr = 0.5 * (lo + hi);
      const double yr = st_y(xr);
      if (std::cos(yr) > 0.0) {
        const complex w = st_newton({xr, yr});
        const double res = st_residual(w);
        const bool fresh = roots.empty() || std::abs(w.imag() - roots.back().y) > 1e-8;
        if (res < 1e-12 && w.real() > x_lo && w.real() < x_hi && w.imag() > 0.0 && fresh &&
            std::abs(w - complex(xr, yr)) < 1e-3) {
          roots.push_back(StSolution{w.real(), w.imag(),
                                     static_cast<int>(std::floor(w.imag() / (2.0 * std::numbers::pi))), res});
        }
      }
    }
    x_prev = x;
    f_prev = f;
    have_prev = true;
    // y'(x) grows like e^x; keep the phase advance per step well below pi.
    const double y = st_y(x);
    const double dy = y > 0.0 ? std::abs(std::exp(2.0 * x) - (1.0 + x)) / y : 0.0;
    x += dy > 0.0 ? std::min(kStScanStep, 0.05 / dy) : kStScanStep;
  }
  return roots;
}

std::vector<StSolution> st_roots(std::size_t n_roots) {
  if (n_roots < 1) throw Error(ErrorCode::InvalidInput, "n_roots must be >= 1");
  return st_roots_in(0.0, 20.0, n_roots);
}

double xi_root() {
  auto f = [](double s) { return std::exp(-s) - (s - 1.0); };
  double lo = 1.0;  // f > 0
  double hi = 2.0;  // f < 0
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) s -= f(s) / (-std::exp(-s) - 1.0);
  return s;
}

Element project_off(const std::vector<Element>& basis, const Element& r) {
  return project_off_orthonormal(orthonormalize(basis), r);
}

WjDiagnostics wj_diagnose(const WjTriple& t, double tol) {
  WjDiagnostics out;
  const auto onb = orthonormalize(t.kernel_basis);
  for (const auto& lambda : t.lambda_samples) {
    if (!is_invertible(lambda)) out.invariant_kernel = false;
    for (const auto& b : onb) {
      if (norm(project_off_orthonormal(onb, lambda * b)) > tol) out.invariant_kernel = false;
    }
    const Element one = Element::one(lambda.algebra());
    const bool in_kernel = norm(project_off_orthonormal(onb, t.W(lambda))) <= tol;
    const bool is_unit = norm(lambda - one) <= tol;
    if (in_kernel != is_unit) out.kernel_iff_unit = false;
  }
  for (const auto& l1 : t.lambda_samples) {
    const Element w1 = t.W(l1);
    for (const auto& l2 : t.lambda_samples) {
      const Element defect = t.W(l1 * l2) - w1 - l1 * t.W(l2);
      const double d = norm(project_off_orthonormal(onb, defect));
      out.max_cocycle_defect = std::max(out.max_cocycle_defect, d);
      if (d > tol) out.cocycle = false;
    }
  }
  return out;
}

bool wj_verify(const WjTriple& t, double tol) { return wj_diagnose(t, tol).ok(); }

WjOracle::WjOracle(WjTriple triple, double tol) : triple_(std::move(triple)), tol_(tol) {
  if (!wj_verify(triple_, tol_)) throw Error(ErrorCode::InvalidTriple, "triple fails the Wolodzko-Javor conditions");
  basis_ = orthonormalize(triple_.kernel_basis);
  images_.reserve(triple_.lambda_samples.size());
  for (const auto& lambda : triple_.lambda_samples) images_.push_back(project_off_orthonormal(basis_, triple_.W(lambda)));
}

std::ptrdiff_t WjOracle::lookup(const Element& x) const {
  const Element px = project_off_orthonormal(basis_, x);
  for (std::size_t k = 0; k < images_.size(); ++k) {
    if (norm(px - images_[k]) <= tol_ * std::max(1.0, norm(px))) return static_cast<std::ptrdiff_t>(k);
  }
  return -1;
}

Element WjOracle::operator()(const Element& x) const {
  const auto k = lookup(x);
  if (k < 0) return Element::zero(x.algebra());
  return triple_.lambda_samples[static_cast<std::size_t>(k)];
}

bool WjOracle::covers(const Element& x) const { return lookup(x) >= 0; }

WjOracle wj_build_S(WjTriple triple, double tol) { return WjOracle(std::move(triple), tol); }

CoveredResidual wj_covered_gs_residual(const WjOracle& oracle, const std::vector<Element>& points) {
  CoveredResidual out;
  for (const auto& x : points) {
    if (!oracle.covers(x)) continue;
    const Element sx = oracle(x);
    for (const auto& y : points) {
      if (!oracle.covers(y)) continue;
      const Element xy = x + sx * y;
      if (!oracle.covers(xy)) continue;
      out.max_residual = std::max(out.max_residual, norm(oracle(xy) - sx * oracle(y)));
      ++out.pairs_tested;
    }
  }
  return out;
}

WjTriple wj_extract(const GsSolution& sol, const std::vector<Element>& lambda_samples) {
  WjTriple t;
  t.kernel_basis = kernel_basis(sol);
  t.lambda_samples = lambda_samples;
  if (const auto* d = sol.get_if<variant::DegenerateExp>()) {
    t.W = degenerate_preimage(sol, *d);
  } else {
    if (const auto* s = sol.get_if<variant::SigmaAffine>(); s != nullptr && !validate_sigma(s->sigma)) {
      throw Error(ErrorCode::ConstraintViolated, "Sigma does not define a solution");
    }
    t.W = linear_preimage(sol);
  }
  for (const auto& lambda : lambda_samples) (void)t.W(lambda);
  return t;
}

GsSolution idempotent_solution(const Algebra& algebra, std::vector<Element> idempotents, std::vector<double> sigma) {
  return GsSolution::idempotent_built(algebra, std::move(idempotents), std::move(sigma));
}

}  // namespace popa
