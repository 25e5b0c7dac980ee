#include "popa/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "popa/scalar.hpp"

namespace popa {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Element apply_matrix(const Matrix& m, const Element& x) {
  const auto n = static_cast<Eigen::Index>(x.dim());
  Eigen::Map<const Eigen::VectorXd> v(x.coords().data(), n);
  const Eigen::VectorXd r = m * v;
  return Element(x.algebra(), std::vector<double>(r.data(), r.data() + n));
}

double linear_functional(const std::vector<double>& coeffs, const Element& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * x[k];
  return s;
}

std::size_t other_axis(std::size_t axis) { return axis == 0 ? 1 : 0; }

std::vector<double> degenerate_functional(const variant::DegenerateExp& p, std::size_t dim) {
  if (!p.functional.empty()) return p.functional;
  std::vector<double> c(dim, 0.0);
  c[p.axis] = 1.0;
  return c;
}

Element eval_degenerate(const variant::DegenerateExp& p, const Element& x) {
  std::vector<double> s(x.dim(), 1.0);
  switch (p.form) {
    case DegenerateForm::OneExp: {
      const auto c = degenerate_functional(p, x.dim());
      const double e = std::exp(p.gamma_exp * linear_functional(c, x));
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (c[k] == 0.0) s[k] = e;
      }
      break;
    }
    case DegenerateForm::AffinePower: {
      const double base = 1.0 + p.rho * x[p.axis];
      if (!(base > 0.0)) throw Error(ErrorCode::NotInGroup, "1 + rho x_axis must be positive");
      s[p.axis] = base;
      s[other_axis(p.axis)] = std::pow(base, p.gamma_exp);
      break;
    }
    case DegenerateForm::PurePower: {
      const double base = x[p.axis];
      if (!(base > 0.0)) throw Error(ErrorCode::NotInGroup, "x_axis must be positive");
      s[p.axis] = base;
      s[other_axis(p.axis)] = std::pow(base, p.gamma_exp);
      break;
    }
  }
  return Element(x.algebra(), std::move(s));
}

// sigma(y) for the idempotent builder: a real functional on coordinates.
Element eval_idempotent(const variant::IdempotentBuilt& v, const Element& x) {
  Element nu = Element::zero(x.algebra());
  for (const auto& e : v.idempotents) nu = nu + scale(linear_functional(v.sigma, e * x), e);
  return Element::one(x.algebra()) + nu;
}

std::uint64_t uniform_bits(std::mt19937_64& rng) { return rng() >> 11; }

double uniform_in_box(std::mt19937_64& rng, double r) {
  const double u = static_cast<double>(uniform_bits(rng)) * 0x1.0p-53;
  return -r + 2.0 * r * u;
}

}  // namespace

void PartitionSpec::validate(std::size_t d) const {
  if (rho.size() != d) throw Error(ErrorCode::InvalidInput, "rho must have one coefficient per coordinate");
  std::vector<int> seen(d, 0);
  for (const auto& part : parts) {
    if (part.empty()) throw Error(ErrorCode::InvalidInput, "partition contains an empty part");
    for (std::size_t i : part) {
      if (i >= d) throw Error(ErrorCode::InvalidInput, "partition index out of range");
      if (seen[i]++) throw Error(ErrorCode::InvalidInput, "partition parts overlap");
    }
  }
  if (std::count(seen.begin(), seen.end(), 0) != 0) {
    throw Error(ErrorCode::InvalidInput, "partition does not cover every coordinate");
  }
  for (double r : rho) {
    if (!std::isfinite(r)) throw Error(ErrorCode::InvalidInput, "rho must be finite");
  }
}

std::vector<std::size_t> PartitionSpec::part_index() const {
  std::vector<std::size_t> idx(rho.size(), 0);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (std::size_t i : parts[p]) idx[i] = p;
  }
  return idx;
}

Matrix PartitionSpec::sigma() const {
  const auto d = static_cast<Eigen::Index>(rho.size());
  Matrix m = Matrix::Zero(d, d);
  for (const auto& part : parts) {
    for (std::size_t i : part) {
      for (std::size_t j : part) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rho[j];
    }
  }
  return m;
}

GsSolution GsSolution::canonical(Element rho) {
  Algebra a = rho.algebra();
  return GsSolution(std::move(a), variant::Canonical{std::move(rho)});
}

GsSolution GsSolution::partition(Algebra algebra, PartitionSpec spec) {
  if (!algebra.componentwise()) throw Error(ErrorCode::InvalidInput, "partition solutions need a componentwise algebra");
  spec.validate(algebra.dim());
  for (auto& part : spec.parts) std::sort(part.begin(), part.end());
  std::sort(spec.parts.begin(), spec.parts.end());
  return GsSolution(std::move(algebra), variant::Partition{std::move(spec)});
}

GsSolution GsSolution::sigma_affine(Algebra algebra, Matrix sigma) {
  if (!algebra.componentwise()) throw Error(ErrorCode::InvalidInput, "Sigma solutions need a componentwise algebra");
  const auto d = static_cast<Eigen::Index>(algebra.dim());
  if (sigma.rows() != d || sigma.cols() != d) throw Error(ErrorCode::DimensionMismatch, "Sigma must be d x d");
  if (!sigma.allFinite()) throw Error(ErrorCode::InvalidInput, "Sigma entries must be finite");
  return GsSolution(std::move(algebra), variant::SigmaAffine{std::move(sigma)});
}

GsSolution GsSolution::degenerate_exp(variant::DegenerateExp params, std::size_t dim) {
  if (dim < 2) throw Error(ErrorCode::UnsupportedDimension, "degenerate solutions need dim >= 2");
  if (params.form != DegenerateForm::OneExp || params.functional.empty()) {
    if (dim != 2) throw Error(ErrorCode::UnsupportedDimension, "this degenerate form lives on R^2");
    if (params.axis > 1) throw Error(ErrorCode::InvalidInput, "axis must be 0 or 1");
  }
  if (!params.functional.empty()) {
    if (params.form != DegenerateForm::OneExp) {
      throw Error(ErrorCode::InvalidInput, "a driving functional is only supported for the exponential form");
    }
    if (params.functional.size() != dim) throw Error(ErrorCode::DimensionMismatch, "functional length must equal dim");
    if (std::all_of(params.functional.begin(), params.functional.end(), [](double c) { return c == 0.0; })) {
      throw Error(ErrorCode::InvalidInput, "driving functional must be nonzero");
    }
  }
  return GsSolution(Algebra::hadamard(dim), std::move(params));
}

GsSolution GsSolution::complex_re_im(double a, double b) {
  return GsSolution(Algebra::complex_plane(), variant::ComplexReIm{a, b});
}

GsSolution GsSolution::idempotent_built(Algebra algebra, std::vector<Element> idempotents, std::vector<double> sigma) {
  if (sigma.size() != algebra.dim()) throw Error(ErrorCode::DimensionMismatch, "sigma length must equal dim");
  for (const auto& e : idempotents) {
    if (!(e.algebra() == algebra)) throw Error(ErrorCode::DimensionMismatch, "idempotent from a different algebra");
  }
  for (std::size_t i = 0; i < idempotents.size(); ++i) {
    for (std::size_t j = 0; j < idempotents.size(); ++j) {
      const Element prod = idempotents[i] * idempotents[j];
      const Element expected = i == j ? idempotents[i] : Element::zero(algebra);
      if (norm(prod - expected) > 1e-12) {
        throw Error(ErrorCode::NotOrthogonalIdempotents,
                    "e_" + std::to_string(i) + " e_" + std::to_string(j) + " != delta_ij e_i");
      }
    }
  }
  return GsSolution(std::move(algebra), variant::IdempotentBuilt{std::move(idempotents), std::move(sigma)});
}

std::string_view GsSolution::name() const {
  return std::visit(overloaded{
                        [](const variant::Canonical&) { return std::string_view("Canonical"); },
                        [](const variant::Partition&) { return std::string_view("Partition"); },
                        [](const variant::SigmaAffine&) { return std::string_view("SigmaAffine"); },
                        [](const variant::DegenerateExp&) { return std::string_view("DegenerateExp"); },
                        [](const variant::ComplexReIm&) { return std::string_view("ComplexReIm"); },
                        [](const variant::IdempotentBuilt&) { return std::string_view("IdempotentBuilt"); },
                    },
                    variant_);
}

bool in_domain(const GsSolution& sol, const Element& x) {
  const auto* p = sol.get_if<variant::DegenerateExp>();
  if (p == nullptr) return true;
  switch (p->form) {
    case DegenerateForm::OneExp: return true;
    case DegenerateForm::AffinePower: return 1.0 + p->rho * x[p->axis] > 0.0;
    case DegenerateForm::PurePower: return x[p->axis] > 0.0;
  }
  return true;
}

Element eval_S(const GsSolution& sol, const Element& x) {
  if (!(x.algebra() == sol.algebra())) throw Error(ErrorCode::DimensionMismatch, "x is not in the solution's algebra");
  const Element one = Element::one(x.algebra());
  return std::visit(overloaded{
                        [&](const variant::Canonical& v) { return one + v.rho * x; },
                        [&](const variant::Partition& v) {
                          std::vector<double> s(x.dim(), 1.0);
                          for (const auto& part : v.spec.parts) {
                            double t = 0.0;
                            for (std::size_t j : part) t += v.spec.rho[j] * x[j];
                            for (std::size_t i : part) s[i] += t;
                          }
                          return Element(x.algebra(), std::move(s));
                        },
                        [&](const variant::SigmaAffine& v) { return one + apply_matrix(v.sigma, x); },
                        [&](const variant::DegenerateExp& v) { return eval_degenerate(v, x); },
                        [&](const variant::ComplexReIm& v) {
                          return Element(x.algebra(), {1.0 + v.a * x[0] + v.b * x[1], 0.0});
                        },
                        [&](const variant::IdempotentBuilt& v) { return eval_idempotent(v, x); },
                    },
                    sol.variant());
}

bool in_group(const GsSolution& sol, const Element& x, double eps) {
  return in_domain(sol, x) && min_spectral_modulus(eval_S(sol, x)) > eps;
}

Element circle_op(const GsSolution& sol, const Element& x, const Element& y) {
  require_same_algebra(x, y);
  return x + eval_S(sol, x) * y;
}

Element circle_inv(const GsSolution& sol, const Element& x) {
  if (!in_domain(sol, x)) throw Error(ErrorCode::NotInGroup, "x outside the solution's domain");
  const Element s = eval_S(sol, x);
  if (!is_invertible(s)) throw Error(ErrorCode::NotInGroup, "S(x) is not invertible");
  return -(x * invert(s));
}

Element rho_of(const GsSolution& sol) {
  const Element one = Element::one(sol.algebra());
  if (!in_group(sol, one, kInvertibilityEps)) throw Error(ErrorCode::UnitNotInGroup, "S(1) is not invertible");
  return eval_S(sol, one) - one;
}

Element adjustor_N(const GsSolution& sol, const Element& x) {
  const Element rho = rho_of(sol);
  return eval_S(sol, x) - Element::one(sol.algebra()) - rho * x;
}

Matrix gamma_matrix(const GsSolution& sol) {
  const auto d = static_cast<Eigen::Index>(sol.algebra().dim());
  return std::visit(
      overloaded{
          [&](const variant::Canonical& v) -> Matrix {
            Matrix m = Matrix::Zero(d, d);
            if (sol.algebra().componentwise()) {
              for (Eigen::Index i = 0; i < d; ++i) m(i, i) = v.rho[static_cast<std::size_t>(i)];
            } else {
              m << v.rho[0], -v.rho[1], v.rho[1], v.rho[0];
            }
            return m;
          },
          [&](const variant::Partition& v) -> Matrix { return v.spec.sigma(); },
          [&](const variant::SigmaAffine& v) -> Matrix { return v.sigma; },
          [&](const variant::DegenerateExp& v) -> Matrix {
            Matrix m = Matrix::Zero(d, d);
            const auto a = static_cast<Eigen::Index>(v.axis);
            const auto b = static_cast<Eigen::Index>(other_axis(v.axis));
            switch (v.form) {
              case DegenerateForm::OneExp: {
                const auto c = degenerate_functional(v, sol.algebra().dim());
                for (Eigen::Index k = 0; k < d; ++k) {
                  if (c[static_cast<std::size_t>(k)] != 0.0) continue;
                  for (Eigen::Index j = 0; j < d; ++j) m(k, j) = v.gamma_exp * c[static_cast<std::size_t>(j)];
                }
                break;
              }
              case DegenerateForm::AffinePower:
                m(a, a) = v.rho;
                m(b, a) = v.gamma_exp * v.rho;
                break;
              case DegenerateForm::PurePower:
                throw Error(ErrorCode::NotDifferentiable, "the pure power form is undefined at 0");
            }
            return m;
          },
          [&](const variant::ComplexReIm& v) -> Matrix {
            Matrix m = Matrix::Zero(2, 2);
            m(0, 0) = v.a;
            m(0, 1) = v.b;
            return m;
          },
          [&](const variant::IdempotentBuilt& v) -> Matrix {
            // nu is linear, so its columns are its values on the coordinate basis.
            Matrix m(d, d);
            const Element one = Element::one(sol.algebra());
            for (Eigen::Index j = 0; j < d; ++j) {
              const Element col = eval_idempotent(v, Element::basis(sol.algebra(), static_cast<std::size_t>(j))) - one;
              for (Eigen::Index i = 0; i < d; ++i) m(i, j) = col[static_cast<std::size_t>(i)];
            }
            return m;
          },
      },
      sol.variant());
}

Element gamma(const GsSolution& sol, const Element& u) {
  if (!(u.algebra() == sol.algebra())) throw Error(ErrorCode::DimensionMismatch, "u is not in the solution's algebra");
  return apply_matrix(gamma_matrix(sol), u);
}

Element gamma_fd(const GsSolution& sol, const Element& u, double h) {
  const Element plus = eval_S(sol, scale(h, u));
  const Element minus = eval_S(sol, scale(-h, u));
  return scale(0.5 / h, plus - minus);
}

double gamma_operator_norm(const GsSolution& sol) {
  const Matrix m = gamma_matrix(sol);
  if (sol.algebra().componentwise()) return m.cwiseAbs().rowwise().sum().maxCoeff();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

unsigned resolve_thread_count(unsigned requested) {
  unsigned n = requested;
  if (n == 0) {
    n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("POPA_ALGEBRA_THREADS")) {
      const long cap = std::strtol(env, nullptr, 10);
      if (cap > 0) n = std::min(n, static_cast<unsigned>(cap));
    }
  }
  return std::max(1u, n);
}

GoldieResidualReport verify_gs(const GsSolution& sol, const VerifyOptions& options) {
  if (options.n_samples < 1) throw Error(ErrorCode::InvalidInput, "n_samples must be >= 1");
  const Algebra& alg = sol.algebra();
  const std::size_t d = alg.dim();

  // Samples are drawn sequentially so the set is independent of the thread count.
  std::mt19937_64 rng(options.seed);
  std::vector<double> xs(options.n_samples * d);
  std::vector<double> ys(options.n_samples * d);
  for (std::size_t s = 0; s < options.n_samples; ++s) {
    for (std::size_t k = 0; k < d; ++k) xs[s * d + k] = uniform_in_box(rng, options.box_radius);
    for (std::size_t k = 0; k < d; ++k) ys[s * d + k] = uniform_in_box(rng, options.box_radius);
  }

  const Element one = Element::one(alg);
  const Element rho = eval_S(sol, one) - one;
  auto adjustor = [&](const Element& x) { return eval_S(sol, x) - one - rho * x; };

  struct Partial {
    double gs = -1.0;
    double goldie = 0.0;
    std::size_t worst = 0;
    std::size_t tested = 0;
  };

  auto element_at = [&](const std::vector<double>& buf, std::size_t s) {
    return Element(alg, std::vector<double>(buf.begin() + static_cast<std::ptrdiff_t>(s * d),
                                            buf.begin() + static_cast<std::ptrdiff_t>((s + 1) * d)));
  };

  auto work = [&](std::size_t begin, std::size_t end) {
    Partial p;
    for (std::size_t s = begin; s < end; ++s) {
      const Element x = element_at(xs, s);
      const Element y = element_at(ys, s);
      if (!in_group(sol, x) || !in_group(sol, y)) continue;
      const Element sx = eval_S(sol, x);
      const Element xy = x + sx * y;
      if (!in_domain(sol, xy)) continue;
      const double gs = norm(eval_S(sol, xy) - sx * eval_S(sol, y));
      const double goldie = norm(adjustor(xy) - adjustor(x) - sx * adjustor(y));
      ++p.tested;
      if (gs > p.gs) {
        p.gs = gs;
        p.worst = s;
      }
      p.goldie = std::max(p.goldie, goldie);
    }
    return p;
  };

  const unsigned threads = std::min<std::size_t>(resolve_thread_count(options.threads), options.n_samples);
  std::vector<Partial> partials(threads);
  const std::size_t chunk = (options.n_samples + threads - 1) / threads;
  if (threads == 1) {
    partials[0] = work(0, options.n_samples);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = std::min(options.n_samples, t * chunk);
      const std::size_t e = std::min(options.n_samples, b + chunk);
      pool.emplace_back([&, t, b, e] { partials[t] = work(b, e); });
    }
    for (auto& th : pool) th.join();
  }

  // Chunks are ordered, so a strict > keeps the lowest index on ties.
  Partial total;
  for (const auto& p : partials) {
    total.tested += p.tested;
    total.goldie = std::max(total.goldie, p.goldie);
    if (p.tested > 0 && p.gs > total.gs) {
      total.gs = p.gs;
      total.worst = p.worst;
    }
  }

  const std::size_t rejected = options.n_samples - total.tested;
  if (total.tested == 0 || rejected * 100 > options.n_samples * 99) {
    throw Error(ErrorCode::DomainExhausted, std::to_string(rejected) + " of " + std::to_string(options.n_samples) +
                                                " samples fell outside G*_S");
  }
  return GoldieResidualReport{total.gs, total.goldie, total.tested, rejected,
                              {element_at(xs, total.worst), element_at(ys, total.worst)}};
}

Decomposition decomposition_check(const GsSolution& sol, const Element& x) {
  const Element one = Element::one(sol.algebra());
  const Element s = eval_S(sol, x);
  const Element gx = gamma(sol, x);
  const Element g1x = gamma(sol, one) * x;
  const Element n = s - one - gx;
  const Element m = s - one - g1x;
  auto form = [&](const Element& a, const Element& b) { return norm(gamma(sol, a * b)); };
  auto gform = [&](const Element& a, const Element& b) { return norm(gamma(sol, a * gamma(sol, b))); };
  return Decomposition{n, m, {form(gx, n), gform(gx, n), form(gx, m), gform(g1x, m)}};
}

double check_omega_homogeneity(const GsSolution& sol, const Element& u, int k_max) {
  if (k_max < 1) throw Error(ErrorCode::InvalidInput, "k_max must be >= 1");
  const Element gu = gamma(sol, u);
  Element power = Element::one(sol.algebra());  // g(u)^k
  double worst = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    const Element lhs = gamma(sol, u * power);
    power = power * gu;
    worst = std::max(worst, norm(lhs - power));
  }
  return worst;
}

DichotomyResult dichotomy_check(const GsSolution& sol, const Element& a) {
  const Element complement = Element::one(sol.algebra()) - eval_S(sol, a);
  const Element b = a * invert(complement);
  return DichotomyResult{b, eval_S(sol, b)};
}

double popa_isomorphism_check(const Element& rho, const std::vector<double>& t_grid) {
  const Element rho_inv = invert(rho);
  const Element one = Element::one(rho.algebra());
  auto g = [&](double t) {
    return rho_inv * apply_spectral(rho, [t](std::complex<double> z) { return scalar::expm1(t * z); });
  };
  double worst = 0.0;
  for (double s : t_grid) {
    const Element gs = g(s);
    for (double t : t_grid) {
      const Element composed = gs + (one + rho * gs) * g(t);
      worst = std::max(worst, norm(composed - g(s + t)));
    }
  }
  return worst;
}

}  // namespace popa
