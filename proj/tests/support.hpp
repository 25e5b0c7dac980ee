#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "popa/algebra.hpp"
#include "popa/solutions.hpp"

namespace testing {

using popa::Algebra;
using popa::Element;

inline Element vec(std::vector<double> v) {
  const auto d = v.size();
  return Element(Algebra::hadamard(d), std::move(v));
}

inline Element cplx(double re, double im) { return Element(Algebra::complex_plane(), {re, im}); }

inline double dist(const Element& a, const Element& b) { return popa::norm(a - b); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Element random_element(std::mt19937_64& rng, const Algebra& alg, double r) {
  std::vector<double> c(alg.dim());
  for (auto& v : c) v = uniform(rng, -r, r);
  return Element(alg, std::move(c));
}

inline Element random_invertible(std::mt19937_64& rng, const Algebra& alg, double lo, double hi) {
  std::vector<double> c(alg.dim());
  for (auto& v : c) v = uniform(rng, lo, hi) * (rng() & 1 ? 1.0 : -1.0);
  return Element(alg, std::move(c));
}

// A random partition of {0..d-1} with random generator coefficients.
inline popa::PartitionSpec random_partition(std::mt19937_64& rng, std::size_t d, double rho_max = 2.0) {
  std::vector<std::size_t> label(d);
  const std::size_t k = 1 + rng() % d;
  for (auto& l : label) l = rng() % k;
  std::vector<std::vector<std::size_t>> parts;
  for (std::size_t p = 0; p < k; ++p) {
    std::vector<std::size_t> part;
    for (std::size_t i = 0; i < d; ++i) {
      if (label[i] == p) part.push_back(i);
    }
    if (!part.empty()) parts.push_back(std::move(part));
  }
  std::vector<double> rho(d);
  for (auto& r : rho) r = uniform(rng, -rho_max, rho_max);
  return {std::move(parts), std::move(rho)};
}

}  // namespace testing
