#pragma once

// Dense linear algebra over both fields. Rational routines are exact
// (fraction-based elimination); double routines use Eigen with a relative
// singular-value threshold for rank decisions.

#include "hlie/matrix.hpp"

#include <stdexcept>
#include <vector>

namespace hlie {

/// Relative singular-value cutoff used for every float rank decision.
inline constexpr double kRankRelativeTolerance = 1e-10;
/// Spans whose largest singular value falls below this are treated as zero.
inline constexpr double kRankAbsoluteFloor = 1e-13;

/// Thrown when an inverse or solve meets a singular matrix.
class SingularMatrixError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <Field T>
Matrix<T> inverse(const Matrix<T>& a);

template <Field T>
Vector<T> solve(const Matrix<T>& a, const Vector<T>& b);

/// Basis of span(generators). Rational: reduced row echelon rows.
/// Double: Euclidean-orthonormal right singular vectors above the cutoff.
std::vector<Vector<Rational>> span_basis(const std::vector<Vector<Rational>>& generators, std::size_t ambient_dim);
std::vector<Vector<double>> span_basis(const std::vector<Vector<double>>& generators, std::size_t ambient_dim);

template <Field T>
std::size_t rank_of(const std::vector<Vector<T>>& vectors, std::size_t ambient_dim) {
  return span_basis(vectors, ambient_dim).size();
}

/// Basis of {x : A x = 0}.
std::vector<Vector<Rational>> null_space(const Matrix<Rational>& a);
std::vector<Vector<double>> null_space(const Matrix<double>& a);

/// True when v lies in span(basis): exact for rationals; for doubles the
/// least-squares residual must be <= tol * max(1, |v|).
bool in_span(const std::vector<Vector<Rational>>& basis, const Vector<Rational>& v, double tol);
bool in_span(const std::vector<Vector<double>>& basis, const Vector<double>& v, double tol);

/// Rational: all leading principal minors positive.
/// Double: smallest eigenvalue > 1e-12.
bool is_positive_definite(const Matrix<Rational>& g);
bool is_positive_definite(const Matrix<double>& g);

template <Field T>
bool is_symmetric(const Matrix<T>& a, double tol);

/// Gram-Schmidt of `vectors` with respect to `gram`. Rational: exact, not
/// normalized. Double: modified Gram-Schmidt with one re-orthogonalization
/// pass, normalized. Throws std::invalid_argument on dependent input.
template <Field T>
std::vector<Vector<T>> gram_schmidt(const Matrix<T>& gram, const std::vector<Vector<T>>& vectors);

struct SymmetricEigen {
  std::vector<double> values;           // ascending
  std::vector<Vector<double>> vectors;  // Euclidean-orthonormal
};

SymmetricEigen symmetric_eigen(const Matrix<double>& a);

/// Lower-triangular L with L L^T = a. Throws std::invalid_argument if a is
/// not positive definite.
Matrix<double> cholesky(const Matrix<double>& a);

}  // namespace hlie
