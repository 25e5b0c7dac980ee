#pragma once

// Validation of Sigma matrices for S(x) = 1 + Sigma x, recovery of the
// partition/generator signature, kernel subspaces, the exhaustive 2-d
// classification and the factorisation into multi-Popa groups.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "popa/solutions.hpp"

namespace popa {

inline constexpr double kStructureTol = 1e-9;
/// Relative singular-value cut-off for numerical rank.
inline constexpr double kRankRtol = 1e-10;

/// True iff every pair (i, j) linked by a nonzero entry has equal rows.
/// Rows are compared with tolerance tol * max(1, |row_i|, |row_j|).
bool validate_sigma(const Matrix& sigma, double tol = kStructureTol);

/// Parts are the connected components of the graph with an edge wherever
/// sigma_ij or sigma_ji is nonzero; rho_j is read from the first row of j's part.
/// Throws ConstraintViolated when validate_sigma fails.
PartitionSpec recover_partition(const Matrix& sigma, double tol = kStructureTol);

/// Orthonormal basis of null(m) via SVD with threshold kRankRtol * sigma_max.
/// Each vector is sign-normalised so its first nonzero coordinate is positive.
std::vector<Eigen::VectorXd> null_space(const Matrix& m);

/// null(Sigma) as elements of R^d.
std::vector<Element> kernel_subspace(const Matrix& sigma, double tol = kStructureTol);

/// null(gamma) in the solution's algebra.
std::vector<Element> kernel_basis(const GsSolution& sol);

enum class TwoDClass { CoDependent, Independent, DegenerateUnivariate, Trivial };

std::string_view to_string(TwoDClass c);

struct TwoDClassification {
  TwoDClass cls = TwoDClass::Trivial;
  std::vector<std::pair<std::string, double>> params;
};

/// Throws UnsupportedDimension unless the solution lives on a 2-dimensional
/// componentwise algebra.
TwoDClassification classify_2d(const GsSolution& sol);

struct Factor {
  std::vector<std::size_t> part;
  /// Restricted generator sigma_I, one coefficient per index in `part`.
  std::vector<double> generator;
};

struct StructureReport {
  bool valid = false;
  std::optional<PartitionSpec> partition;
  std::vector<Element> kernel_basis;
  std::size_t kernel_dim = 0;
  std::vector<Factor> factors;
  /// Max deviation of the projected circle operation from the factor operation.
  double max_factor_defect = 0.0;
};

/// Throws ConstraintViolated when the matrix fails validation.
StructureReport factorize(const Matrix& sigma, double tol = kStructureTol);

/// Partition solution on the grid algebra induced by a partition of the grid indices.
GsSolution grid_cinterval_solution(std::vector<double> grid, std::vector<double> rho_values,
                                   std::vector<std::vector<std::size_t>> parts);

}  // namespace popa
