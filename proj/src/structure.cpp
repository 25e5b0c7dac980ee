#include "popa/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace popa {

namespace {

double row_norm(const Matrix& m, Eigen::Index i) { return m.row(i).cwiseAbs().maxCoeff(); }

bool rows_equal(const Matrix& m, Eigen::Index i, Eigen::Index j, double tol) {
  const double scale = std::max({1.0, row_norm(m, i), row_norm(m, j)});
  return (m.row(i) - m.row(j)).cwiseAbs().maxCoeff() <= tol * scale;
}

std::vector<std::vector<std::size_t>> components(const Matrix& m, double tol) {
  const auto d = static_cast<std::size_t>(m.rows());
  std::vector<std::size_t> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      if (std::abs(m(ii, jj)) > tol || std::abs(m(jj, ii)) > tol) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<std::size_t>> by_root(d);
  for (std::size_t i = 0; i < d; ++i) by_root[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> parts;
  for (auto& p : by_root) {
    if (!p.empty()) parts.push_back(std::move(p));
  }
  std::sort(parts.begin(), parts.end());
  return parts;
}

void require_square(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "Sigma must be square");
  if (!m.allFinite()) throw Error(ErrorCode::InvalidInput, "Sigma entries must be finite");
}

TwoDClassification classify_partition(const PartitionSpec& spec) {
  TwoDClassification out;
  out.params = {{"rho1", spec.rho[0]}, {"rho2", spec.rho[1]}};
  if (spec.rho[0] == 0.0 && spec.rho[1] == 0.0) {
    out.cls = TwoDClass::Trivial;
    out.params.clear();
  } else if (spec.parts.size() == 1) {
    out.cls = TwoDClass::CoDependent;
  } else {
    out.cls = TwoDClass::Independent;
  }
  return out;
}

}  // namespace

bool validate_sigma(const Matrix& sigma, double tol) {
  require_square(sigma);
  for (const auto& part : components(sigma, tol)) {
    const auto first = static_cast<Eigen::Index>(part.front());
    for (std::size_t i : part) {
      if (!rows_equal(sigma, first, static_cast<Eigen::Index>(i), tol)) return false;
    }
  }
  return true;
}

PartitionSpec recover_partition(const Matrix& sigma, double tol) {
  if (!validate_sigma(sigma, tol)) {
    throw Error(ErrorCode::ConstraintViolated, "sigma_ij != 0 for a pair of unequal rows");
  }
  PartitionSpec spec;
  spec.parts = components(sigma, tol);
  spec.rho.assign(static_cast<std::size_t>(sigma.rows()), 0.0);
  for (const auto& part : spec.parts) {
    const auto row = static_cast<Eigen::Index>(part.front());
    for (std::size_t j : part) spec.rho[j] = sigma(row, static_cast<Eigen::Index>(j));
  }
  return spec;
}

std::vector<Eigen::VectorXd> null_space(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  if (top > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > kRankRtol * top) ++rank;
    }
  }
  std::vector<Eigen::VectorXd> basis;
  const Matrix& v = svd.matrixV();
  for (Eigen::Index c = rank; c < v.cols(); ++c) {
    Eigen::VectorXd col = v.col(c);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > 1e-12) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
    basis.push_back(std::move(col));
  }
  return basis;
}

std::vector<Element> kernel_subspace(const Matrix& sigma, double tol) {
  require_square(sigma);
  (void)tol;
  const Algebra alg = Algebra::hadamard(static_cast<std::size_t>(sigma.rows()));
  std::vector<Element> out;
  for (const auto& v : null_space(sigma)) out.emplace_back(alg, std::vector<double>(v.data(), v.data() + v.size()));
  return out;
}

std::vector<Element> kernel_basis(const GsSolution& sol) {
  std::vector<Element> out;
  for (const auto& v : null_space(gamma_matrix(sol))) {
    out.emplace_back(sol.algebra(), std::vector<double>(v.data(), v.data() + v.size()));
  }
  return out;
}

std::string_view to_string(TwoDClass c) {
  switch (c) {
    case TwoDClass::CoDependent: return "CoDependent";
    case TwoDClass::Independent: return "Independent";
    case TwoDClass::DegenerateUnivariate: return "DegenerateUnivariate";
    case TwoDClass::Trivial: return "Trivial";
  }
  return "Unknown";
}

TwoDClassification classify_2d(const GsSolution& sol) {
  const Algebra& alg = sol.algebra();
  if (!alg.componentwise() || alg.dim() != 2) {
    throw Error(ErrorCode::UnsupportedDimension, "classification is defined for R^2 with the Hadamard product");
  }
  if (const auto* p = sol.get_if<variant::Partition>()) return classify_partition(p->spec);
  if (const auto* c = sol.get_if<variant::Canonical>()) {
    return classify_partition(PartitionSpec{{{0}, {1}}, {c->rho[0], c->rho[1]}});
  }
  if (const auto* d = sol.get_if<variant::DegenerateExp>()) {
    const bool trivial = (d->form == DegenerateForm::OneExp && d->gamma_exp == 0.0) ||
                         (d->form == DegenerateForm::AffinePower && d->rho == 0.0);
    if (trivial) return TwoDClassification{TwoDClass::Trivial, {}};
    return TwoDClassification{TwoDClass::DegenerateUnivariate,
                              {{"rho", d->rho},
                               {"gamma", d->gamma_exp},
                               {"axis", static_cast<double>(d->axis + 1)},
                               {"form", static_cast<double>(static_cast<int>(d->form))}}};
  }
  // The remaining componentwise variants are 1 + (linear map); classify the map.
  return classify_partition(recover_partition(gamma_matrix(sol)));
}

StructureReport factorize(const Matrix& sigma, double tol) {
  StructureReport report;
  report.partition = recover_partition(sigma, tol);
  report.valid = true;
  report.kernel_basis = kernel_subspace(sigma, tol);
  report.kernel_dim = report.kernel_basis.size();

  for (const auto& part : report.partition->parts) {
    Factor f;
    f.part = part;
    for (std::size_t j : part) f.generator.push_back(report.partition->rho[j]);
    report.factors.push_back(std::move(f));
  }

  // Projected circle operation vs. the factor's own multi-Popa operation.
  const std::size_t d = static_cast<std::size_t>(sigma.rows());
  const GsSolution sol = GsSolution::sigma_affine(Algebra::hadamard(d), sigma);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> box(-0.4, 0.4);
  for (int s = 0; s < 256; ++s) {
    std::vector<double> xv(d), yv(d);
    for (auto& v : xv) v = box(rng);
    for (auto& v : yv) v = box(rng);
    const Element x(sol.algebra(), xv);
    const Element y(sol.algebra(), yv);
    const Element xy = circle_op(sol, x, y);
    for (const auto& f : report.factors) {
      double s_part = 1.0;
      for (std::size_t k = 0; k < f.part.size(); ++k) s_part += f.generator[k] * x[f.part[k]];
      for (std::size_t i : f.part) {
        const double expected = x[i] + y[i] * s_part;
        report.max_factor_defect = std::max(report.max_factor_defect, std::abs(xy[i] - expected));
      }
    }
  }
  return report;
}

GsSolution grid_cinterval_solution(std::vector<double> grid, std::vector<double> rho_values,
                                   std::vector<std::vector<std::size_t>> parts) {
  Algebra alg = Algebra::grid(std::move(grid));
  return GsSolution::partition(std::move(alg), PartitionSpec{std::move(parts), std::move(rho_values)});
}

}  // namespace popa
