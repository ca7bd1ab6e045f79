#include "hlie/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace hlie {

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

// Reduced row echelon form in place; returns the pivot column of each
// nonzero row. Exact for rationals.
std::vector<std::size_t> rref(Matrix<Rational>& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    const Rational inv = Rational(1) / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      const Rational f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

struct SvdSplit {
  std::vector<Vector<double>> range;  // right singular vectors above cutoff
  std::vector<Vector<double>> kernel;
};

SvdSplit svd_split(const Matrix<double>& a, std::size_t cols) {
  SvdSplit out;
  if (a.rows() == 0) {
    for (std::size_t j = 0; j < cols; ++j) out.kernel.push_back(unit_vector<double>(cols, j));
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(a), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cutoff = std::max(kRankRelativeTolerance * smax, kRankAbsoluteFloor);
  const Eigen::MatrixXd& v = svd.matrixV();
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Vector<double> col(cols);
    for (std::size_t i = 0; i < cols; ++i) col[i] = v(static_cast<Eigen::Index>(i), j);
    const bool above = j < s.size() && s(j) > cutoff;
    (above ? out.range : out.kernel).push_back(std::move(col));
  }
  return out;
}

template <Field T>
Matrix<T> stack_rows(const std::vector<Vector<T>>& rows, std::size_t cols) {
  Matrix<T> m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("vector length does not match ambient dimension");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace

template <Field T>
Matrix<T> inverse(const Matrix<T>& a) {
  if (!a.is_square()) throw std::invalid_argument("inverse: matrix is not square");
  const std::size_t n = a.rows();
  Matrix<T> work = a;
  Matrix<T> inv = Matrix<T>::identity(n);
  const double scale = std::max(1.0, to_double(a.max_abs()));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    T best = abs_of(work(col, col));
    for (std::size_t i = col + 1; i < n; ++i) {
      if constexpr (is_exact_v<T>) {
        if (best != 0) break;
      }
      T cand = abs_of(work(i, col));
      if (cand > best) {
        best = cand;
        p = i;
      }
    }
    if (is_zero(best, 1e-14 * scale)) throw SingularMatrixError("matrix is singular");
    if (p != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(p, j), work(col, j));
        std::swap(inv(p, j), inv(col, j));
      }
    const T pivot_inv = T(1) / work(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) *= pivot_inv;
      inv(col, j) *= pivot_inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || work(i, col) == 0) continue;
      const T f = work(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        work(i, j) -= f * work(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

template <Field T>
Vector<T> solve(const Matrix<T>& a, const Vector<T>& b) {
  return inverse(a) * b;
}

std::vector<Vector<Rational>> span_basis(const std::vector<Vector<Rational>>& generators, std::size_t ambient_dim) {
  Matrix<Rational> m = stack_rows(generators, ambient_dim);
  const auto pivots = rref(m);
  std::vector<Vector<Rational>> basis;
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    Vector<Rational> row(ambient_dim);
    for (std::size_t j = 0; j < ambient_dim; ++j) row[j] = m(r, j);
    basis.push_back(std::move(row));
  }
  return basis;
}

std::vector<Vector<double>> span_basis(const std::vector<Vector<double>>& generators, std::size_t ambient_dim) {
  return svd_split(stack_rows(generators, ambient_dim), ambient_dim).range;
}

std::vector<Vector<Rational>> null_space(const Matrix<Rational>& a) {
  Matrix<Rational> m = a;
  const auto pivots = rref(m);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector<Rational>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector<Rational> x(a.cols(), Rational(0));
    x[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -m(r, free);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::vector<Vector<double>> null_space(const Matrix<double>& a) {
  return svd_split(a, a.cols()).kernel;
}

bool in_span(const std::vector<Vector<Rational>>& basis, const Vector<Rational>& v, double) {
  if (all_zero(v, 0.0)) return true;
  const std::size_t n = v.size();
  auto extended = basis;
  extended.push_back(v);
  return rank_of(extended, n) == rank_of(basis, n);
}

bool in_span(const std::vector<Vector<double>>& basis, const Vector<double>& v, double tol) {
  Eigen::VectorXd ev(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) ev(static_cast<Eigen::Index>(i)) = v[i];
  const double scale = std::max(1.0, ev.norm());
  if (basis.empty()) return ev.norm() <= tol * scale;
  Eigen::MatrixXd b(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < v.size(); ++i)
      b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = basis[j][i];
  Eigen::VectorXd x = b.colPivHouseholderQr().solve(ev);
  return (b * x - ev).norm() <= tol * scale;
}

bool is_positive_definite(const Matrix<Rational>& g) {
  if (!g.is_square()) return false;
  Matrix<Rational> m = g;
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k) {
    // m(k,k) equals the ratio of consecutive leading principal minors.
    if (m(k, k) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      const Rational f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return true;
}

bool is_positive_definite(const Matrix<double>& g) {
  if (!g.is_square()) return false;
  if (!is_symmetric(g, 1e-12 * std::max(1.0, g.max_abs()))) return false;
  const auto eig = symmetric_eigen(g);
  return eig.values.empty() || eig.values.front() > 1e-12;
}

template <Field T>
bool is_symmetric(const Matrix<T>& a, double tol) {
  if (!a.is_square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (!is_zero(T(a(i, j) - a(j, i)), tol)) return false;
  return true;
}

template <Field T>
std::vector<Vector<T>> gram_schmidt(const Matrix<T>& gram, const std::vector<Vector<T>>& vectors) {
  std::vector<Vector<T>> out;
  std::vector<T> norm_sq;
  for (const auto& v : vectors) {
    Vector<T> w = v;
    const int passes = is_exact_v<T> ? 1 : 2;
    for (int pass = 0; pass < passes; ++pass)
      for (std::size_t k = 0; k < out.size(); ++k) {
        const T coeff = inner(gram, out[k], w) / norm_sq[k];
        w = axpy(T(-coeff), out[k], std::move(w));
      }
    T nw = inner(gram, w, w);
    if constexpr (is_exact_v<T>) {
      if (nw == 0) throw std::invalid_argument("gram_schmidt: vectors are linearly dependent");
    } else {
      const double ref = std::max(inner(gram, v, v), 0.0);
      if (!(nw > 1e-24 * std::max(ref, 1e-300)) || nw <= 0.0)
        throw std::invalid_argument("gram_schmidt: vectors are linearly dependent");
      w = scaled(1.0 / std::sqrt(nw), std::move(w));
      nw = 1.0;
    }
    out.push_back(std::move(w));
    norm_sq.push_back(nw);
  }
  return out;
}

SymmetricEigen symmetric_eigen(const Matrix<double>& a) {
  if (!a.is_square()) throw std::invalid_argument("symmetric_eigen: matrix is not square");
  SymmetricEigen out;
  if (a.rows() == 0) return out;
  Eigen::MatrixXd e = to_eigen(a);
  e = 0.5 * (e + e.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver failed");
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    out.values.push_back(solver.eigenvalues()(static_cast<Eigen::Index>(k)));
    Vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    out.vectors.push_back(std::move(v));
  }
  return out;
}

Matrix<double> cholesky(const Matrix<double>& a) {
  if (!a.is_square()) throw std::invalid_argument("cholesky: matrix is not square");
  Eigen::LLT<Eigen::MatrixXd> llt(to_eigen(a));
  if (llt.info() != Eigen::Success) throw std::invalid_argument("cholesky: matrix is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  Matrix<double> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      out(i, j) = l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

template Matrix<double> inverse(const Matrix<double>&);
template Matrix<Rational> inverse(const Matrix<Rational>&);
template Vector<double> solve(const Matrix<double>&, const Vector<double>&);
template Vector<Rational> solve(const Matrix<Rational>&, const Vector<Rational>&);
template bool is_symmetric(const Matrix<double>&, double);
template bool is_symmetric(const Matrix<Rational>&, double);
template std::vector<Vector<double>> gram_schmidt(const Matrix<double>&, const std::vector<Vector<double>>&);
template std::vector<Vector<Rational>> gram_schmidt(const Matrix<Rational>&, const std::vector<Vector<Rational>>&);

}  // namespace hlie
