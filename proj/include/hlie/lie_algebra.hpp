#pragma once

// Finite-dimensional real Lie algebras given by structure constants
// c(i, j, k) = coefficient of e_k in [e_i, e_j]. Indices are 0-based here;
// the JSON and CLI layers translate to the 1-based e_1..e_n convention.

#include "hlie/linalg.hpp"
#include "hlie/matrix.hpp"

#include <string>
#include <vector>

namespace hlie {

/// Default tolerance for float-mode zero tests on brackets and residuals.
inline constexpr double kDefaultTolerance = 1e-10;

template <Field T>
class Subspace {
 public:
  /// Takes ownership of a basis; throws std::invalid_argument when the
  /// vectors have the wrong length or are linearly dependent.
  Subspace(std::size_t ambient_dim, std::vector<Vector<T>> basis);

  /// Span of arbitrary generators (dependent ones are dropped).
  static Subspace span(std::size_t ambient_dim, const std::vector<Vector<T>>& generators);
  static Subspace zero(std::size_t ambient_dim) { return Subspace(ambient_dim, {}); }
  static Subspace full(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  const std::vector<Vector<T>>& basis() const { return basis_; }

  bool contains(const Vector<T>& v, double tol = kDefaultTolerance) const;

 private:
  std::size_t ambient_dim_;
  std::vector<Vector<T>> basis_;
};

template <Field T>
struct BracketTerm {
  std::size_t i;  // requires i < j
  std::size_t j;
  std::size_t k;
  T value;  // coefficient of e_k in [e_i, e_j]
};

template <Field T>
class LieAlgebra {
 public:
  /// `constants` is the flat array c[(i*dim + j)*dim + k]. Throws
  /// std::invalid_argument unless c(i,j,k) = -c(j,i,k) exactly.
  LieAlgebra(std::size_t dim, std::vector<T> constants, std::vector<std::string> labels = {});

  static LieAlgebra abelian(std::size_t dim);
  /// Builds from the nonzero brackets with i < j; antisymmetric partners are
  /// filled in. Repeated (i, j, k) entries accumulate.
  static LieAlgebra from_brackets(std::size_t dim, const std::vector<BracketTerm<T>>& terms,
                                  std::vector<std::string> labels = {});

  std::size_t dim() const { return dim_; }
  const T& constant(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * dim_ + j) * dim_ + k]; }
  const std::vector<T>& constants() const { return c_; }
  const std::vector<std::string>& labels() const { return labels_; }

  Vector<T> bracket(const Vector<T>& x, const Vector<T>& y) const;
  Vector<T> bracket_basis(std::size_t i, std::size_t j) const;

  /// Matrix of ad_x in the standard basis (column j is [x, e_j]).
  Matrix<T> ad(const Vector<T>& x) const;
  Matrix<T> ad_basis(std::size_t i) const;

  LieAlgebra<double> to_float() const;

  friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) { return a.dim_ == b.dim_ && a.c_ == b.c_; }

 private:
  std::size_t dim_;
  std::vector<T> c_;
  std::vector<std::string> labels_;
};

/// max over basis triples i<j<k of max_abs(J(e_i, e_j, e_k)).
template <Field T>
T jacobi_defect(const LieAlgebra<T>& alg);

/// B(u, v) = tr(ad_u ad_v) on basis vectors.
template <Field T>
Matrix<T> killing_form(const LieAlgebra<T>& alg);

template <Field T>
Subspace<T> derived_subalgebra(const LieAlgebra<T>& alg);

/// span [s, t] over basis pairs of s and t.
template <Field T>
Subspace<T> bracket_span(const LieAlgebra<T>& alg, const Subspace<T>& s, const Subspace<T>& t);

template <Field T>
bool is_solvable(const LieAlgebra<T>& alg, double tol = kDefaultTolerance);

template <Field T>
bool is_ideal(const LieAlgebra<T>& alg, const Subspace<T>& s, double tol = kDefaultTolerance);

template <Field T>
bool is_subalgebra(const LieAlgebra<T>& alg, const Subspace<T>& s, double tol = kDefaultTolerance);

template <Field T>
LieAlgebra<T> direct_sum(const LieAlgebra<T>& a, const LieAlgebra<T>& b);

}  // namespace hlie
