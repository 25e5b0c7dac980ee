#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "popa/special.hpp"
#include "popa/structure.hpp"
#include "support.hpp"

using namespace popa;
using testing::dist;
using testing::vec;

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

// Brute-force oracle for the first root: a dense scan of
// f(x) = e^x cos y(x) - 1 - x over the branch y in (2 pi, 3 pi), then bisection.
double first_root_x_oracle() {
  auto y = [](double x) { return std::sqrt(std::exp(2 * x) - (1 + x) * (1 + x)); };
  auto f = [&](double x) { return std::sin(y(x)) - std::exp(-x) * y(x); };
  double prev = 0.5;
  for (double x = 0.5; x < 5; x += 1e-4) {
    if (y(x) > two_pi && y(x) < 3 * std::numbers::pi && (f(prev) < 0) != (f(x) < 0)) {
      double lo = prev, hi = x;
      for (int k = 0; k < 100; ++k) {
        const double mid = 0.5 * (lo + hi);
        ((f(mid) < 0) == (f(lo) < 0) ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = x;
  }
  return NAN;
}

WjTriple scalar_triple(std::function<Element(const Element&)> w) {
  return WjTriple{{}, {vec({0.5}), vec({2}), vec({3}), vec({1})}, std::move(w)};
}

}  // namespace

TEST_CASE("roots of e^w = 1 + w") {
  const auto roots = st_roots(10);
  REQUIRE(roots.size() == 10);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const auto& r = roots[k];
    const std::complex<double> w(r.x, r.y);
    CHECK(std::abs(std::exp(w) - 1.0 - w) < 1e-12);
    CHECK(r.residual < 1e-12);
    CHECK(r.x > 0);
    CHECK(std::abs(std::exp(r.x) * std::cos(r.y) - 1 - r.x) < 1e-12 * std::exp(r.x));
    CHECK(std::abs(std::exp(r.x) * std::sin(r.y) - r.y) < 1e-12 * std::exp(r.x));
    CHECK(r.branch == static_cast<int>(std::floor(r.y / two_pi)));
    if (k > 0) {
      CHECK(r.y > roots[k - 1].y);
      CHECK(r.branch == roots[k - 1].branch + 1);
    }
  }
  CHECK(roots[0].x == doctest::Approx(first_root_x_oracle()).epsilon(1e-10));
  CHECK(roots.back().y - roots.front().y > 9 * two_pi * 0.9);
  CHECK(st_roots(3).size() == 3);
  CHECK_THROWS_AS(st_roots(0), Error);
}

TEST_CASE("no roots in the left half-plane") {
  const double xi = xi_root();
  CHECK(st_roots_in(-xi, 0.0, 100).empty());
}

TEST_CASE("e^{-x} y(x) increases from 0 toward 1") {
  double prev = -1;
  for (double x = 0; x < 12; x += 0.01) {
    const double v = std::exp(-x) * std::sqrt(std::max(0.0, st_y_squared(x)));
    CHECK(v > prev);
    CHECK(v < 1);
    prev = v;
  }
  CHECK(prev > 0.999);
}

TEST_CASE("xi") {
  const double xi = xi_root();
  CHECK(xi >= 1.27846);
  CHECK(xi <= 1.27847);
  CHECK(std::abs(std::exp(-xi) - (xi - 1)) < 1e-13);
  CHECK(std::abs(st_y_squared(-xi)) < 1e-14);
}

TEST_CASE("wj_verify on scalar triples") {
  const auto good = scalar_triple([](const Element& l) { return l - Element::one(l.algebra()); });
  CHECK(wj_verify(good));
  const auto d = wj_diagnose(good);
  CHECK(d.kernel_iff_unit);
  CHECK(d.max_cocycle_defect < 1e-15);

  const auto square = scalar_triple([](const Element& l) { return l * l - Element::one(l.algebra()); });
  CHECK_FALSE(wj_verify(square));
  // W(4) = 15 against W(2) + 2 W(2) = 9.
  CHECK(square.W(vec({4}))[0] == 15.0);
  CHECK(square.W(vec({2}))[0] + 2 * square.W(vec({2}))[0] == 9.0);

  const auto shifted = scalar_triple([](const Element& l) { return l; });
  CHECK_FALSE(wj_diagnose(shifted).kernel_iff_unit);
}

TEST_CASE("wj_build_S reconstructs 1 + x") {
  std::vector<Element> lambdas;
  for (double l : {0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 4.0}) lambdas.push_back(vec({l}));
  const WjOracle oracle(WjTriple{{}, lambdas, [](const Element& l) { return l - Element::one(l.algebra()); }});
  for (const auto& l : lambdas) {
    const Element x = l - Element::one(l.algebra());
    CHECK(oracle.covers(x));
    CHECK(dist(oracle(x), vec({1 + x[0]})) < 1e-15);
  }
  CHECK_FALSE(oracle.covers(vec({0.37})));
  CHECK(norm(oracle(vec({0.37}))) == 0.0);

  std::vector<Element> pts;
  for (const auto& l : lambdas) pts.push_back(l - Element::one(l.algebra()));
  const auto res = wj_covered_gs_residual(oracle, pts);
  CHECK(res.pairs_tested > 0);
  CHECK(res.max_residual < 1e-10);

  try {
    WjOracle bad(scalar_triple([](const Element& l) { return l * l - Element::one(l.algebra()); }));
    FAIL("expected InvalidTriple");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidTriple);
  }
}

TEST_CASE("wj_extract") {
  const auto can = GsSolution::canonical(vec({1}));
  const auto t = wj_extract(can, {vec({0.5}), vec({2}), vec({4})});
  CHECK(t.kernel_basis.empty());
  CHECK(dist(t.W(vec({4})), vec({3})) < 1e-14);
  CHECK(wj_verify(t));

  const auto co = GsSolution::partition(Algebra::hadamard(2), {{{0, 1}}, {1, 1}});
  std::vector<Element> diag;
  for (double l : {0.5, 2.0, 3.0}) diag.push_back(vec({l, l}));
  const auto tc = wj_extract(co, diag);
  REQUIRE(tc.kernel_basis.size() == 1);
  CHECK(std::abs(tc.kernel_basis[0][0] + tc.kernel_basis[0][1]) < 1e-15);
  CHECK(dist(tc.W(vec({3, 3})), vec({1, 1})) < 1e-14);
  CHECK(dist(tc.W(vec({2, 2})), vec({0.5, 0.5})) < 1e-14);
  CHECK(wj_verify(tc));

  try {
    (void)wj_extract(co, {vec({2, 3})});
    FAIL("expected NotInRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInRange);
  }

  const auto ex = GsSolution::degenerate_exp({0.0, 1.0, 0, DegenerateForm::OneExp, {}});
  const auto te = wj_extract(ex, {vec({1, 2}), vec({1, 0.5}), vec({1, 1})});
  CHECK(wj_verify(te));
  CHECK(dist(eval_S(ex, te.W(vec({1, 2}))), vec({1, 2})) < 1e-14);
  CHECK_THROWS_AS(wj_extract(ex, {vec({2, 2})}), Error);
}

TEST_CASE("extract then build reproduces S modulo the kernel") {
  std::mt19937_64 rng(61);
  for (int k = 0; k < 10; ++k) {
    const std::size_t d = 2 + rng() % 3;
    const auto sol = GsSolution::partition(Algebra::hadamard(d), testing::random_partition(rng, d, 1.5));
    std::vector<Element> xs, lambdas;
    for (int s = 0; s < 12; ++s) {
      const Element x = testing::random_element(rng, sol.algebra(), 0.3);
      xs.push_back(x);
      lambdas.push_back(eval_S(sol, x));
    }
    const WjOracle oracle(wj_extract(sol, lambdas));
    for (const auto& x : xs) {
      REQUIRE(oracle.covers(x));
      CHECK(dist(oracle(x), eval_S(sol, x)) < 1e-10);
    }
  }
}

TEST_CASE("idempotent builder") {
  const Algebra r2 = Algebra::hadamard(2);
  const auto full = idempotent_solution(r2, {vec({1, 0}), vec({0, 1})}, {1, 1});
  const auto can = GsSolution::canonical(Element::one(r2));
  std::mt19937_64 rng(62);
  for (int k = 0; k < 20; ++k) {
    const Element x = testing::random_element(rng, r2, 2);
    CHECK(dist(eval_S(full, x), eval_S(can, x)) < 1e-12);
  }
  const auto single = idempotent_solution(r2, {vec({1, 0})}, {1, 0});
  CHECK(dist(eval_S(single, vec({0.3, 5})), vec({1.3, 1})) == 0.0);
  CHECK(dist(eval_S(single, vec({-0.5, 2})), vec({0.5, 1})) == 0.0);
  VerifyOptions o;
  o.seed = 3;
  CHECK(verify_gs(single, o).max_gs_residual < 1e-10);

  // Spanning rank-one idempotents with sigma = f_rho reproduce the canonical solution.
  const Element rho = vec({0.5, -1.5, 2});
  const auto built = idempotent_solution(rho.algebra(), {vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})},
                                         {rho[0], rho[1], rho[2]});
  for (int k = 0; k < 20; ++k) {
    const Element x = testing::random_element(rng, rho.algebra(), 2);
    CHECK(dist(eval_S(built, x), eval_S(GsSolution::canonical(rho), x)) < 1e-12);
  }

  try {
    (void)idempotent_solution(r2, {vec({1, 1}), vec({1, 0})}, {1, 1});
    FAIL("expected NotOrthogonalIdempotents");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotOrthogonalIdempotents);
  }
}
