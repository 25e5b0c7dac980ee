#pragma once

// Continuous solutions S of the Golab-Schinzel equation S(x + S(x)y) = S(x)S(y)
// over the concrete algebras, the circle (Popa) group law they induce, the
// adjustor N and the derivative gamma = S'(0).

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "popa/algebra.hpp"

namespace popa {

using Matrix = Eigen::MatrixXd;

/// A partition of {0..d-1} together with the generator coefficients rho.
/// The induced solution is S(x)_i = 1 + sum_{j in part(i)} rho_j x_j.
struct PartitionSpec {
  std::vector<std::vector<std::size_t>> parts;
  std::vector<double> rho;

  /// Throws InvalidInput unless parts are disjoint, cover {0..d-1} and rho has length d.
  void validate(std::size_t d) const;
  /// part_index()[i] is the index into `parts` of the part containing i.
  std::vector<std::size_t> part_index() const;
  /// The d x d matrix Sigma with S(x) = 1 + Sigma x.
  Matrix sigma() const;
};

enum class DegenerateForm { OneExp, AffinePower, PurePower };

namespace variant {

/// S(x) = 1 + rho x, the algebra-linear family.
struct Canonical {
  Element rho;
};

struct Partition {
  PartitionSpec spec;
};

/// S(x) = 1 + Sigma x for an arbitrary square Sigma on a componentwise algebra.
/// Only solves the equation when Sigma satisfies the row constraint; used to
/// represent candidate matrices before validation.
struct SigmaAffine {
  Matrix sigma;
};

/// The univariate families on R^2 driven by coordinate `axis`, with the other
/// coordinate coupled through a homomorphism:
///   OneExp       (1, e^{g x_a})
///   AffinePower  (1 + r x_a, (1 + r x_a)^g)     domain 1 + r x_a > 0
///   PurePower    (x_a, x_a^g)                   domain x_a > 0
/// OneExp generalises to R^d through `functional` c: S_k = 1 where c_k != 0 and
/// S_k = exp(g <c, x>) elsewhere. An empty functional means c = e_axis.
struct DegenerateExp {
  double rho = 0.0;
  double gamma_exp = 1.0;
  std::size_t axis = 0;
  DegenerateForm form = DegenerateForm::OneExp;
  std::vector<double> functional;
};

/// S(z) = 1 + a Re z + b Im z on C.
struct ComplexReIm {
  double a = 0.0;
  double b = 0.0;
};

/// S(x) = 1 + sum_i sigma(e_i x) e_i for mutually orthogonal idempotents e_i.
/// sigma is the coordinate vector of a real linear functional.
struct IdempotentBuilt {
  std::vector<Element> idempotents;
  std::vector<double> sigma;
};

}  // namespace variant

class GsSolution {
 public:
  using Variant = std::variant<variant::Canonical, variant::Partition, variant::SigmaAffine,
                               variant::DegenerateExp, variant::ComplexReIm, variant::IdempotentBuilt>;

  static GsSolution canonical(Element rho);
  static GsSolution partition(Algebra algebra, PartitionSpec spec);
  static GsSolution sigma_affine(Algebra algebra, Matrix sigma);
  /// dim defaults to 2; dim > 2 is only allowed for OneExp with an explicit functional.
  static GsSolution degenerate_exp(variant::DegenerateExp params, std::size_t dim = 2);
  static GsSolution complex_re_im(double a, double b);
  /// Throws NotOrthogonalIdempotents unless e_i e_j = delta_ij e_i to 1e-12.
  static GsSolution idempotent_built(Algebra algebra, std::vector<Element> idempotents, std::vector<double> sigma);

  const Algebra& algebra() const noexcept { return algebra_; }
  const Variant& variant() const noexcept { return variant_; }
  std::string_view name() const;

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&variant_);
  }

 private:
  GsSolution(Algebra algebra, Variant v) : algebra_(std::move(algebra)), variant_(std::move(v)) {}

  Algebra algebra_;
  Variant variant_;
};

/// Tolerance for membership of S(x) in the invertibles when sampling.
inline constexpr double kGroupEps = 1e-9;
/// Kernel membership: norm(S(x) - 1) below this.
inline constexpr double kKernelTol = 1e-9;

/// False when x lies outside the real domain of a power-law variant.
bool in_domain(const GsSolution& sol, const Element& x);
Element eval_S(const GsSolution& sol, const Element& x);
/// x in G*_S: x in the domain and S(x) invertible.
bool in_group(const GsSolution& sol, const Element& x, double eps = kGroupEps);

/// x o_S y = x + S(x) y.
Element circle_op(const GsSolution& sol, const Element& x, const Element& y);
/// -x S(x)^{-1}; throws NotInGroup when S(x) is not invertible.
Element circle_inv(const GsSolution& sol, const Element& x);

/// rho = S(1) - 1; throws UnitNotInGroup when S(1) is not invertible.
Element rho_of(const GsSolution& sol);
/// N(x) = S(x) - 1 - rho x.
Element adjustor_N(const GsSolution& sol, const Element& x);

/// Matrix of gamma = S'(0) in coordinates, computed in closed form per variant.
/// Throws NotDifferentiable for PurePower.
Matrix gamma_matrix(const GsSolution& sol);
Element gamma(const GsSolution& sol, const Element& u);
/// Central finite-difference estimate of S'(0)u; a cross-check only.
Element gamma_fd(const GsSolution& sol, const Element& u, double h = 1e-6);
/// Operator norm of gamma with respect to the algebra norm.
double gamma_operator_norm(const GsSolution& sol);

struct GoldieResidualReport {
  double max_gs_residual = 0.0;
  double max_goldie_residual = 0.0;
  std::size_t samples_tested = 0;
  std::size_t samples_rejected = 0;
  std::pair<Element, Element> worst_pair;
};

struct VerifyOptions {
  std::size_t n_samples = 10000;
  std::uint64_t seed = 0;
  double box_radius = 0.4;
  /// 0 selects POPA_ALGEBRA_THREADS or the hardware default.
  unsigned threads = 0;
};

/// Samples pairs uniformly in [-r, r]^dim, rejects pairs outside G*_S and
/// records the max-norm residuals of the GS identity and of the Goldie
/// identity N(x o y) = N(x) + S(x) N(y). Deterministic in (seed, n_samples).
GoldieResidualReport verify_gs(const GsSolution& sol, const VerifyOptions& options);

struct Decomposition {
  Element n_x;
  Element m_x;
  /// |<g(x), n(x)>|, |<g(x), n(x)>_g|, |<g(x), m(x)>|, |<g(1)x, m(x)>_g| where
  /// <a,b> = g(ab) and <a,b>_g = g(a g(b)).
  std::array<double, 4> orth_defects{};
};

Decomposition decomposition_check(const GsSolution& sol, const Element& x);

/// max_{0 <= k <= k_max} norm(g(u g(u)^k) - g(u)^{k+1}).
double check_omega_homogeneity(const GsSolution& sol, const Element& u, int k_max);

struct DichotomyResult {
  Element b;
  Element s_of_b;
};

/// b = a (1 - S(a))^{-1} and S(b); throws NotInvertible when 1 - S(a) is singular.
DichotomyResult dichotomy_check(const GsSolution& sol, const Element& a);

/// Max defect of g(s) o_rho g(t) = g(s + t) over the grid, g(t) = rho^{-1}(e^{t rho} - 1).
double popa_isomorphism_check(const Element& rho, const std::vector<double>& t_grid);

/// Number of worker threads honoured by the sampling routines.
unsigned resolve_thread_count(unsigned requested);

}  // namespace popa
