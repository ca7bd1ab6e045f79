#pragma once

// Eigenspace decomposition of a self-adjoint operator on a metric Lie algebra
// and the structural tests attached to it: the Codazzi characterization by
// brackets between eigenspaces, nonparallel witnesses, the p_i / h_i split,
// the deformed products <,>_k with their representations rho_k, the Ricci
// restriction identities, and the standardness test for solvable algebras.

#include "hlie/metric_geometry.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlie {

inline constexpr double kDefaultEigenTolerance = 1e-7;
inline constexpr double kDefaultStructureTolerance = 1e-9;

/// Eigenvalue clustering failed, or (rational mode) the spectrum is not
/// rational.
class DecompositionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A decomposition no longer matches the metric algebra it is used with.
class StaleDecompositionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <Field T>
struct Eigenspace {
  T eigenvalue;
  /// Gram-orthogonal basis; orthonormal in float mode.
  std::vector<Vector<T>> basis;
  /// weights[a] = 1 / <basis[a], basis[a]> (all 1 in float mode).
  std::vector<T> weights;

  std::size_t multiplicity() const { return basis.size(); }
};

template <Field T>
struct RicciDecomposition {
  std::vector<Eigenspace<T>> eigenspaces;  // strictly increasing eigenvalues
  /// Eigenspace indices in order of first appearance along e_1, ..., e_n
  /// (each e_j is assigned to the eigenspace carrying most of its weight).
  std::vector<std::size_t> appearance_order;
  Matrix<T> operator_matrix;
  Matrix<T> gram;
  /// Widest eigenvalue spread merged into one eigenspace (float mode).
  double cluster_spread = 0.0;

  std::size_t size() const { return eigenspaces.size(); }
  std::size_t dim() const { return gram.rows(); }
  std::vector<T> eigenvalues() const;
  std::vector<std::size_t> multiplicities() const;
  Subspace<T> subspace(std::size_t i) const;
};

/// Rational mode: eigenvalues are located in floating point, recovered as
/// fractions, and accepted only if the exact eigenspaces fill the space;
/// otherwise DecompositionError. Float mode: gaps <= tol_eig * max(1, |λ|max)
/// merge, gaps >= 10x that split, anything in between is ambiguous and throws.
template <Field T>
RicciDecomposition<T> decompose(const MetricLieAlgebra<T>& m, const SymmetricOperator<T>& t,
                                double tol_eig = kDefaultEigenTolerance);

struct ConditionResidual {
  std::vector<std::size_t> eigenspaces;  // 0-based indices into the decomposition
  double residual = 0.0;
  bool holds = true;
};

struct StructureReport {
  std::vector<ConditionResidual> subalgebra;  // one per eigenspace
  std::vector<ConditionResidual> skew;        // ordered pairs (i, j), i != j
  std::vector<ConditionResidual> cross;       // triples i < j < k
  bool pass = true;

  /// 1-based numbers of the conditions that fail.
  std::vector<int> failed_conditions() const;
};

/// Residuals are |a + b| / max(1, |a| + |b|) over orthonormalized basis
/// triples; in rational mode `holds` is exact.
template <Field T>
StructureReport verify_structure(const MetricLieAlgebra<T>& m, const RicciDecomposition<T>& dec,
                                 double tol = kDefaultStructureTolerance);

template <Field T>
struct NonparallelWitness {
  std::size_t i, j, k;  // distinct eigenspace indices, i < j
  Vector<T> u, v, w;
  T value;  // <[u, v], w>
};

template <Field T>
std::optional<NonparallelWitness<T>> nonparallel_witness(const MetricLieAlgebra<T>& m,
                                                         const RicciDecomposition<T>& dec,
                                                         double tol = kDefaultStructureTolerance);

template <Field T>
struct PHSplit {
  Subspace<T> p;
  Subspace<T> h;
  bool h_is_subalgebra;
};

template <Field T>
PHSplit<T> p_and_h_subspaces(const MetricLieAlgebra<T>& m, const RicciDecomposition<T>& dec, std::size_t i,
                             double tol = kDefaultStructureTolerance);

struct DeformedProductReport {
  double skew_residual = 0.0;
  double representation_residual = 0.0;
  bool skew = true;
  bool representation = true;
  bool holds() const { return skew && representation; }
};

/// Skewness of ad_{u_k} for <,>_k on g_k^perp, and rho_k([u,u']) = [rho_k(u), rho_k(u')].
template <Field T>
DeformedProductReport deformed_product_check(const MetricLieAlgebra<T>& m, const RicciDecomposition<T>& dec,
                                             std::size_t k, double tol = kDefaultStructureTolerance);

struct RestrictionResiduals {
  double ricci = 0.0;   // worst bilinear residual over eigenspace basis pairs
  double scalar = 0.0;  // |s - sum s_i|
};

/// `dec` must decompose ricci(m) and every eigenspace must be a subalgebra.
template <Field T>
RestrictionResiduals restriction_identity_residuals(const MetricLieAlgebra<T>& m, const RicciDecomposition<T>& dec,
                                                    double tol = kDefaultStructureTolerance);

struct StandardnessReport {
  std::size_t derived_dim = 0;
  bool vacuous_hypothesis = false;  // dim [g,g] <= 1
  bool ricci_scalar_on_derived = false;
  std::optional<double> constant;
  double scalar_residual = 0.0;
  bool complement_abelian = false;
  double abelian_residual = 0.0;
  bool unimodular = true;
  std::optional<double> formula_constant;
  bool formula_agrees = true;  // true when the cross-check is skipped
  bool theorem_violation = false;
};

/// `tol` governs the scalar test on [g,g] and the constant cross-check,
/// `tol_abelian` the bracket test on [g,g]^perp. Throws
/// std::invalid_argument for non-solvable input.
template <Field T>
StandardnessReport standardness_check(const MetricLieAlgebra<T>& m, double tol = kDefaultStructureTolerance,
                                      double tol_abelian = kDefaultTolerance);

}  // namespace hlie
