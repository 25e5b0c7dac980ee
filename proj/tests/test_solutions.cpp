#include <doctest.h>

#include <cmath>
#include <numbers>

#include "popa/structure.hpp"
#include "support.hpp"

using namespace popa;
using testing::dist;
using testing::vec;

namespace {

constexpr double e = std::numbers::e;

// Closed forms for the two-dimensional co-dependent solution with generator
// (s1, s2): S(x) = (1 + t, 1 + t), t = s1 x1 + s2 x2.
struct CoDependentOracle {
  double s1, s2;
  Element S(const Element& x) const {
    const double t = s1 * x[0] + s2 * x[1];
    return vec({1 + t, 1 + t});
  }
  Element rho() const { return vec({s1 + s2, s1 + s2}); }
  Element N(const Element& x) const { return vec({s2 * (x[1] - x[0]), s1 * (x[0] - x[1])}); }
  Element gamma(const Element& u) const {
    const double t = s1 * u[0] + s2 * u[1];
    return vec({t, t});
  }
};

// S(x1, x2) = (1, e^{x1}).
struct ExpOracle {
  Element S(const Element& x) const { return vec({1, std::exp(x[0])}); }
  Element rho() const { return vec({0, e - 1}); }
  Element N(const Element& x) const { return vec({0, std::expm1(x[0]) - (e - 1) * x[1]}); }
  Element gamma(const Element& u) const { return vec({0, u[0]}); }
};

GsSolution example_codependent(double s1, double s2) {
  return GsSolution::partition(Algebra::hadamard(2), PartitionSpec{{{0, 1}}, {s1, s2}});
}

GsSolution example_exp() { return GsSolution::degenerate_exp({0.0, 1.0, 0, DegenerateForm::OneExp, {}}); }

GsSolution example_exp3() {
  return GsSolution::degenerate_exp({0.0, 1.0, 0, DegenerateForm::OneExp, {1, 1, 0}}, 3);
}

std::vector<GsSolution> differentiable_variants() {
  const Algebra r3 = Algebra::hadamard(3);
  return {
      GsSolution::canonical(vec({0.7, -1.2, 2.0})),
      GsSolution::partition(r3, PartitionSpec{{{0, 2}, {1}}, {1.5, -0.5, 0.8}}),
      example_exp(),
      GsSolution::degenerate_exp({1.3, 0.6, 1, DegenerateForm::AffinePower, {}}),
      GsSolution::complex_re_im(0.9, -1.4),
      GsSolution::idempotent_built(r3, {vec({1, 0, 0}), vec({0, 1, 1})}, {1, 2, 3}),
      example_exp3(),
      GsSolution::canonical(Element(Algebra::complex_plane(), {0.5, 1.5})),
  };
}

}  // namespace

TEST_CASE("eval_S") {
  const auto can = GsSolution::canonical(vec({1, 1}));
  CHECK(dist(eval_S(can, vec({1, 2})), vec({2, 3})) == 0.0);
  CHECK(dist(eval_S(example_codependent(1, 2), vec({1, 3})), vec({8, 8})) == 0.0);
  CHECK(dist(eval_S(example_exp(), vec({1, 5})), vec({1, e})) < 1e-15);
  for (const auto& sol : differentiable_variants()) {
    CHECK(dist(eval_S(sol, Element::zero(sol.algebra())), Element::one(sol.algebra())) == 0.0);
  }
  const auto pure = GsSolution::degenerate_exp({0.0, 2.0, 0, DegenerateForm::PurePower, {}});
  CHECK(dist(eval_S(pure, vec({3, 1})), vec({3, 9})) < 1e-14);
  CHECK_FALSE(in_domain(pure, vec({-1, 0})));
  CHECK_THROWS_AS(eval_S(pure, vec({-1, 0})), Error);
}

TEST_CASE("circle operation") {
  const auto s = GsSolution::canonical(vec({1}));
  CHECK(circle_op(s, vec({1}), vec({2}))[0] == 5.0);
  CHECK(circle_inv(s, vec({1}))[0] == -0.5);
  CHECK(circle_op(s, vec({1}), vec({-0.5}))[0] == 0.0);
  try {
    (void)circle_inv(s, vec({-1}));
    FAIL("expected NotInGroup");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotInGroup);
  }
  std::mt19937_64 rng(21);
  for (const auto& sol : differentiable_variants()) {
    for (int k = 0; k < 50; ++k) {
      const Element x = testing::random_element(rng, sol.algebra(), 0.4);
      CHECK(dist(circle_op(sol, x, Element::zero(sol.algebra())), x) == 0.0);
      CHECK(norm(circle_op(sol, x, circle_inv(sol, x))) < 1e-14);
    }
  }
}

TEST_CASE("rho and the adjustor on the co-dependent example") {
  const CoDependentOracle oracle{1, 2};
  const auto sol = example_codependent(1, 2);
  CHECK(dist(rho_of(sol), vec({3, 3})) == 0.0);
  CHECK(dist(adjustor_N(sol, vec({1, 3})), vec({4, -2})) == 0.0);
  std::mt19937_64 rng(22);
  for (int k = 0; k < 20; ++k) {
    const Element x = testing::random_element(rng, sol.algebra(), 3);
    CHECK(dist(eval_S(sol, x), oracle.S(x)) < 1e-14);
    CHECK(dist(adjustor_N(sol, x), oracle.N(x)) < 1e-13);
    CHECK(dist(gamma(sol, x), oracle.gamma(x)) < 1e-14);
  }
  CHECK(dist(gamma(sol, vec({1, 1})), vec({3, 3})) == 0.0);
}

TEST_CASE("rho and the adjustor on the exponential example") {
  const ExpOracle oracle;
  const auto sol = example_exp();
  CHECK(dist(rho_of(sol), vec({0, e - 1})) < 1e-15);
  CHECK(dist(adjustor_N(sol, vec({1, 0})), vec({0, e - 1})) < 1e-15);
  CHECK(dist(gamma(sol, vec({1, 0})), vec({0, 1})) == 0.0);
  std::mt19937_64 rng(23);
  for (int k = 0; k < 20; ++k) {
    const Element x = testing::random_element(rng, sol.algebra(), 2);
    CHECK(dist(adjustor_N(sol, x), oracle.N(x)) < 1e-14);
    CHECK(dist(eval_S(sol, adjustor_N(sol, x)), Element::one(sol.algebra())) < 1e-14);
  }
}

TEST_CASE("adjustor vanishes at 0 and 1") {
  for (const auto& sol : differentiable_variants()) {
    CHECK(norm(adjustor_N(sol, Element::zero(sol.algebra()))) == 0.0);
    CHECK(norm(adjustor_N(sol, Element::one(sol.algebra()))) < 1e-15);
  }
  const auto bad = GsSolution::canonical(vec({-1, 1}));
  try {
    (void)rho_of(bad);
    FAIL("expected UnitNotInGroup");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::UnitNotInGroup);
  }
}

TEST_CASE("verify_gs") {
  VerifyOptions o;
  o.seed = 7;
  const auto can = verify_gs(GsSolution::canonical(vec({1, 1})), o);
  CHECK(can.max_gs_residual < 1e-12);
  CHECK(can.samples_tested == 10000);
  CHECK(verify_gs(example_exp3(), o).max_gs_residual < 1e-10);

  Matrix bad(2, 2);
  bad << 1, 2, 3, 4;
  const auto perturbed = GsSolution::sigma_affine(Algebra::hadamard(2), bad);
  CHECK(verify_gs(perturbed, o).max_gs_residual > 1e-3);
  // Both sides at x = y = (0.1, 0.1): S(x o y) = (1.77, 2.77), S(x) S(y) = (1.69, 2.89).
  const Element x = vec({0.1, 0.1});
  const Element lhs = eval_S(perturbed, circle_op(perturbed, x, x));
  const Element rhs = eval_S(perturbed, x) * eval_S(perturbed, x);
  CHECK(dist(lhs, vec({1.77, 2.77})) < 1e-14);
  CHECK(dist(rhs, vec({1.69, 2.89})) < 1e-14);
  CHECK(dist(lhs, rhs) == doctest::Approx(0.12).epsilon(1e-12));
}

TEST_CASE("verify_gs is deterministic across thread counts") {
  const auto sol = GsSolution::degenerate_exp({1.3, 0.6, 1, DegenerateForm::AffinePower, {}});
  VerifyOptions o;
  o.seed = 99;
  o.n_samples = 3000;
  o.threads = 1;
  const auto a = verify_gs(sol, o);
  o.threads = 5;
  const auto b = verify_gs(sol, o);
  CHECK(a.max_gs_residual == b.max_gs_residual);
  CHECK(a.max_goldie_residual == b.max_goldie_residual);
  CHECK(a.samples_tested == b.samples_tested);
  CHECK(a.samples_rejected == b.samples_rejected);
  CHECK(dist(a.worst_pair.first, b.worst_pair.first) == 0.0);
  o.seed = 100;
  CHECK(dist(verify_gs(sol, o).worst_pair.first, a.worst_pair.first) > 0.0);
}

TEST_CASE("gamma is analytic and matches finite differences") {
  std::mt19937_64 rng(24);
  for (const auto& sol : differentiable_variants()) {
    for (int k = 0; k < 10; ++k) {
      const Element u = testing::random_element(rng, sol.algebra(), 1);
      CHECK(dist(gamma(sol, u), gamma_fd(sol, u)) < 1e-7);
    }
  }
  const auto can = GsSolution::canonical(vec({0.5, -2}));
  const Element u = vec({3, 1.25});
  CHECK(dist(gamma(can, u), vec({1.5, -2.5})) == 0.0);
  const auto z = GsSolution::complex_re_im(2, 3);
  CHECK(dist(gamma(z, Element(z.algebra(), {1, -1})), Element(z.algebra(), {-1, 0})) == 0.0);
  const auto pure = GsSolution::degenerate_exp({0.0, 2.0, 0, DegenerateForm::PurePower, {}});
  CHECK_THROWS_AS(gamma_matrix(pure), Error);
}

TEST_CASE("decomposition") {
  const auto can = GsSolution::canonical(vec({1.5, -0.5}));
  const auto d = decomposition_check(can, vec({0.3, 0.9}));
  CHECK(norm(d.n_x) < 1e-15);
  CHECK(norm(d.m_x) < 1e-15);
  for (double v : d.orth_defects) CHECK(v < 1e-15);

  const auto ex = decomposition_check(example_exp(), vec({1, 0}));
  CHECK(dist(ex.n_x, vec({0, e - 2})) < 1e-15);

  std::mt19937_64 rng(25);
  for (int k = 0; k < 10; ++k) {
    CHECK(norm(decomposition_check(example_codependent(1, 2), testing::random_element(rng, Algebra::hadamard(2), 2)).n_x) <
          1e-14);
  }
}

TEST_CASE("omega homogeneity") {
  std::mt19937_64 rng(26);
  for (int k = 0; k < 20; ++k) {
    const std::size_t d = 2 + rng() % 4;
    const auto sol = GsSolution::partition(Algebra::hadamard(d), testing::random_partition(rng, d, 1.0));
    const Element u = testing::random_element(rng, sol.algebra(), 0.3);
    CHECK(check_omega_homogeneity(sol, u, 5) < 1e-10);
    CHECK(check_omega_homogeneity(sol, u, 1) <= check_omega_homogeneity(sol, u, 5));
  }
  // u = (1, 0): g(u) = (0, 1), u g(u) = 0, so g(u g(u)) = 0 while g(u)^2 = (0, 1).
  CHECK(check_omega_homogeneity(example_exp(), vec({1, 0}), 1) == 1.0);
  CHECK_THROWS_AS(check_omega_homogeneity(example_exp(), vec({1, 0}), 0), Error);
}

TEST_CASE("dichotomy") {
  const auto co = GsSolution::partition(Algebra::hadamard(2), PartitionSpec{{{0, 1}}, {1, 1}});
  const auto r = dichotomy_check(co, vec({1, 0}));
  CHECK(dist(r.b, vec({-1, 0})) == 0.0);
  CHECK(norm(r.s_of_b) == 0.0);
  const auto can = GsSolution::canonical(vec({1, 1}));
  const auto c = dichotomy_check(can, vec({1, 1}));
  CHECK(dist(c.b, vec({-1, -1})) == 0.0);
  CHECK(norm(c.s_of_b) == 0.0);
  try {
    (void)dichotomy_check(co, vec({1, -1}));
    FAIL("expected NotInvertible");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotInvertible);
  }
}

TEST_CASE("one-parameter subgroup") {
  CHECK(popa_isomorphism_check(vec({1}), {0.0}) == 0.0);
  const double g1 = e - 1;
  CHECK(std::abs(g1 + e * g1 - (e * e - 1)) < 1e-14);
  CHECK(popa_isomorphism_check(vec({1}), {1.0}) < 1e-14);
  CHECK(popa_isomorphism_check(vec({1, 2}), {-1, 0, 0.5, 1}) < 1e-12);
  CHECK_THROWS_AS(popa_isomorphism_check(vec({1, 0}), {1.0}), Error);
}

TEST_CASE("group axioms and homomorphism per variant") {
  std::mt19937_64 rng(27);
  for (const auto& sol : differentiable_variants()) {
    const Algebra& a = sol.algebra();
    for (int k = 0; k < 200; ++k) {
      const Element x = testing::random_element(rng, a, 0.3);
      const Element y = testing::random_element(rng, a, 0.3);
      const Element z = testing::random_element(rng, a, 0.3);
      if (!in_group(sol, x) || !in_group(sol, y) || !in_group(sol, z)) continue;
      CHECK(dist(circle_op(sol, circle_op(sol, x, y), z), circle_op(sol, x, circle_op(sol, y, z))) < 1e-10);
      CHECK(dist(circle_op(sol, circle_inv(sol, x), x), Element::zero(a)) < 1e-10);
      CHECK(dist(eval_S(sol, circle_op(sol, x, y)), eval_S(sol, x) * eval_S(sol, y)) < 1e-10);
      const Element lhs = adjustor_N(sol, circle_op(sol, x, y));
      CHECK(dist(lhs, adjustor_N(sol, x) + eval_S(sol, x) * adjustor_N(sol, y)) < 1e-10);
      CHECK(dist(eval_S(sol, x), Element::one(a) + rho_of(sol) * x + adjustor_N(sol, x)) < 1e-14);
    }
  }
}

TEST_CASE("kernel closure") {
  std::mt19937_64 rng(28);
  for (const auto& sol : differentiable_variants()) {
    for (const auto& kb : kernel_basis(sol)) {
      for (int k = 0; k < 20; ++k) {
        const Element a = testing::uniform(rng, -2, 2) * kb;
        const Element z = testing::random_element(rng, sol.algebra(), 0.4);
        CHECK(dist(eval_S(sol, a), Element::one(sol.algebra())) < 1e-10);
        CHECK(dist(eval_S(sol, eval_S(sol, z) * a), Element::one(sol.algebra())) < 1e-10);
      }
    }
  }
}

TEST_CASE("similarity of derivatives") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 20; ++k) {
    const std::size_t d = 2 + rng() % 3;
    const auto sol = GsSolution::partition(Algebra::hadamard(d), testing::random_partition(rng, d, 1.0));
    const Element c = testing::random_element(rng, sol.algebra(), 0.3);
    const Element h = testing::random_element(rng, sol.algebra(), 1.0);
    const double step = 1e-6;
    const Element fd = scale(0.5 / step, eval_S(sol, c + step * h) - eval_S(sol, c - step * h));
    const Element sc = eval_S(sol, c);
    CHECK(dist(fd, sc * gamma(sol, invert(sc) * h)) < 1e-6);
  }
}

TEST_CASE("phantom homogeneity") {
  std::mt19937_64 rng(30);
  for (int k = 0; k < 20; ++k) {
    const std::size_t d = 2 + rng() % 4;
    const auto sol = GsSolution::partition(Algebra::hadamard(d), testing::random_partition(rng, d, 1.0));
    const Element a = testing::random_element(rng, sol.algebra(), 1);
    const Element b = testing::random_element(rng, sol.algebra(), 1);
    CHECK(dist(gamma(sol, gamma(sol, a * gamma(sol, b))), gamma(sol, gamma(sol, a) * gamma(sol, b))) < 1e-10);
  }
}

TEST_CASE("canonical scale map") {
  const Element rho = vec({0.5, -2, 3});
  const auto sol = GsSolution::canonical(rho);
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    const Element g = Element::one(rho.algebra()) + testing::random_element(rng, rho.algebra(), 0.2);
    CHECK(dist(eval_S(sol, invert(rho) * (g - Element::one(rho.algebra()))), g) < 1e-14);
  }
}

TEST_CASE("gamma operator norm") {
  Matrix sigma(2, 2);
  sigma << 1, -2, 3, 0.5;
  CHECK(gamma_operator_norm(GsSolution::sigma_affine(Algebra::hadamard(2), sigma)) == 3.5);
  CHECK(gamma_operator_norm(GsSolution::complex_re_im(3, 4)) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(3) == 3);
  CHECK(resolve_thread_count(0) >= 1);
}
