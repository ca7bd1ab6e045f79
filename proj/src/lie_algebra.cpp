#include "hlie/lie_algebra.hpp"

#include <stdexcept>

namespace hlie {

// ---- Subspace --------------------------------------------------------------

template <Field T>
Subspace<T>::Subspace(std::size_t ambient_dim, std::vector<Vector<T>> basis)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
  if (ambient_dim_ == 0) throw std::invalid_argument("subspace: ambient dimension must be positive");
  for (const auto& v : basis_)
    if (v.size() != ambient_dim_) throw std::invalid_argument("subspace: basis vector has wrong length");
  if (basis_.size() > ambient_dim_ || rank_of(basis_, ambient_dim_) != basis_.size())
    throw std::invalid_argument("subspace: basis vectors are linearly dependent");
}

template <Field T>
Subspace<T> Subspace<T>::span(std::size_t ambient_dim, const std::vector<Vector<T>>& generators) {
  return Subspace(ambient_dim, span_basis(generators, ambient_dim));
}

template <Field T>
Subspace<T> Subspace<T>::full(std::size_t ambient_dim) {
  std::vector<Vector<T>> basis;
  for (std::size_t i = 0; i < ambient_dim; ++i) basis.push_back(unit_vector<T>(ambient_dim, i));
  return Subspace(ambient_dim, std::move(basis));
}

template <Field T>
bool Subspace<T>::contains(const Vector<T>& v, double tol) const {
  if (v.size() != ambient_dim_) throw std::invalid_argument("subspace: dimension mismatch");
  return in_span(basis_, v, tol);
}

// ---- LieAlgebra ------------------------------------------------------------

template <Field T>
LieAlgebra<T>::LieAlgebra(std::size_t dim, std::vector<T> constants, std::vector<std::string> labels)
    : dim_(dim), c_(std::move(constants)), labels_(std::move(labels)) {
  if (dim_ == 0) throw std::invalid_argument("Lie algebra dimension must be positive");
  if (c_.size() != dim_ * dim_ * dim_) throw std::invalid_argument("structure constant array has wrong size");
  if (!labels_.empty() && labels_.size() != dim_) throw std::invalid_argument("basis label count must equal dim");
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      for (std::size_t k = 0; k < dim_; ++k) {
        if (constant(i, j, k) != -constant(j, i, k))
          throw std::invalid_argument("structure constants are not antisymmetric at (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
      }
}

template <Field T>
LieAlgebra<T> LieAlgebra<T>::abelian(std::size_t dim) {
  return LieAlgebra(dim, std::vector<T>(dim * dim * dim, T(0)));
}

template <Field T>
LieAlgebra<T> LieAlgebra<T>::from_brackets(std::size_t dim, const std::vector<BracketTerm<T>>& terms,
                                           std::vector<std::string> labels) {
  std::vector<T> c(dim * dim * dim, T(0));
  for (const auto& t : terms) {
    if (t.i >= dim || t.j >= dim || t.k >= dim) throw std::invalid_argument("bracket index out of range");
    if (t.i >= t.j) throw std::invalid_argument("bracket entries must have i < j");
    c[(t.i * dim + t.j) * dim + t.k] += t.value;
    c[(t.j * dim + t.i) * dim + t.k] -= t.value;
  }
  return LieAlgebra(dim, std::move(c), std::move(labels));
}

template <Field T>
Vector<T> LieAlgebra<T>::bracket(const Vector<T>& x, const Vector<T>& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw std::invalid_argument("bracket: dimension mismatch");
  Vector<T> z(dim_, T(0));
  for (std::size_t i = 0; i < dim_; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (y[j] == 0 || i == j) continue;
      const T xy = x[i] * y[j];
      for (std::size_t k = 0; k < dim_; ++k) z[k] += xy * constant(i, j, k);
    }
  }
  return z;
}

template <Field T>
Vector<T> LieAlgebra<T>::bracket_basis(std::size_t i, std::size_t j) const {
  Vector<T> z(dim_);
  for (std::size_t k = 0; k < dim_; ++k) z[k] = constant(i, j, k);
  return z;
}

template <Field T>
Matrix<T> LieAlgebra<T>::ad(const Vector<T>& x) const {
  if (x.size() != dim_) throw std::invalid_argument("ad: dimension mismatch");
  Matrix<T> m(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t k = 0; k < dim_; ++k) m(k, j) += x[i] * constant(i, j, k);
  }
  return m;
}

template <Field T>
Matrix<T> LieAlgebra<T>::ad_basis(std::size_t i) const {
  Matrix<T> m(dim_, dim_);
  for (std::size_t j = 0; j < dim_; ++j)
    for (std::size_t k = 0; k < dim_; ++k) m(k, j) = constant(i, j, k);
  return m;
}

template <Field T>
LieAlgebra<double> LieAlgebra<T>::to_float() const {
  std::vector<double> c(c_.size());
  for (std::size_t n = 0; n < c_.size(); ++n) c[n] = to_double(c_[n]);
  return LieAlgebra<double>(dim_, std::move(c), labels_);
}

// ---- structural operations -------------------------------------------------

template <Field T>
T jacobi_defect(const LieAlgebra<T>& alg) {
  const std::size_t n = alg.dim();
  T worst(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t t = 0; t < n; ++t) {
          T s(0);
          for (std::size_t m = 0; m < n; ++m)
            s += alg.constant(j, k, m) * alg.constant(i, m, t) + alg.constant(k, i, m) * alg.constant(j, m, t) +
                 alg.constant(i, j, m) * alg.constant(k, m, t);
          const T a = abs_of(s);
          if (a > worst) worst = a;
        }
  return worst;
}

template <Field T>
Matrix<T> killing_form(const LieAlgebra<T>& alg) {
  const std::size_t n = alg.dim();
  std::vector<Matrix<T>> ads;
  for (std::size_t i = 0; i < n; ++i) ads.push_back(alg.ad_basis(i));
  Matrix<T> b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      T tr(0);
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) tr += ads[i](p, q) * ads[j](q, p);
      b(i, j) = tr;
      b(j, i) = tr;
    }
  return b;
}

template <Field T>
Subspace<T> bracket_span(const LieAlgebra<T>& alg, const Subspace<T>& s, const Subspace<T>& t) {
  if (s.ambient_dim() != alg.dim() || t.ambient_dim() != alg.dim())
    throw std::invalid_argument("bracket_span: dimension mismatch");
  std::vector<Vector<T>> gens;
  for (const auto& x : s.basis())
    for (const auto& y : t.basis()) gens.push_back(alg.bracket(x, y));
  return Subspace<T>::span(alg.dim(), gens);
}

template <Field T>
Subspace<T> derived_subalgebra(const LieAlgebra<T>& alg) {
  const std::size_t n = alg.dim();
  std::vector<Vector<T>> gens;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) gens.push_back(alg.bracket_basis(i, j));
  return Subspace<T>::span(n, gens);
}

template <Field T>
bool is_solvable(const LieAlgebra<T>& alg, double) {
  Subspace<T> current = derived_subalgebra(alg);
  for (std::size_t step = 0; step <= alg.dim(); ++step) {
    if (current.is_zero()) return true;
    Subspace<T> next = bracket_span(alg, current, current);
    if (next.dim() == current.dim()) return false;
    current = std::move(next);
  }
  return current.is_zero();
}

template <Field T>
bool is_ideal(const LieAlgebra<T>& alg, const Subspace<T>& s, double tol) {
  if (s.ambient_dim() != alg.dim()) throw std::invalid_argument("is_ideal: dimension mismatch");
  for (std::size_t i = 0; i < alg.dim(); ++i) {
    const Vector<T> ei = unit_vector<T>(alg.dim(), i);
    for (const auto& x : s.basis())
      if (!s.contains(alg.bracket(ei, x), tol)) return false;
  }
  return true;
}

template <Field T>
bool is_subalgebra(const LieAlgebra<T>& alg, const Subspace<T>& s, double tol) {
  if (s.ambient_dim() != alg.dim()) throw std::invalid_argument("is_subalgebra: dimension mismatch");
  const auto& b = s.basis();
  for (std::size_t p = 0; p < b.size(); ++p)
    for (std::size_t q = p + 1; q < b.size(); ++q)
      if (!s.contains(alg.bracket(b[p], b[q]), tol)) return false;
  return true;
}

template <Field T>
LieAlgebra<T> direct_sum(const LieAlgebra<T>& a, const LieAlgebra<T>& b) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na + nb;
  std::vector<T> c(n * n * n, T(0));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < na; ++k) c[(i * n + j) * n + k] = a.constant(i, j, k);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = 0; k < nb; ++k) c[((i + na) * n + j + na) * n + k + na] = b.constant(i, j, k);
  std::vector<std::string> labels;
  if (!a.labels().empty() && !b.labels().empty()) {
    labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  }
  return LieAlgebra<T>(n, std::move(c), std::move(labels));
}

#define HLIE_INSTANTIATE(T)                                                                      \
  template class Subspace<T>;                                                                    \
  template class LieAlgebra<T>;                                                                  \
  template T jacobi_defect(const LieAlgebra<T>&);                                                \
  template Matrix<T> killing_form(const LieAlgebra<T>&);                                         \
  template Subspace<T> derived_subalgebra(const LieAlgebra<T>&);                                 \
  template Subspace<T> bracket_span(const LieAlgebra<T>&, const Subspace<T>&, const Subspace<T>&); \
  template bool is_solvable(const LieAlgebra<T>&, double);                                       \
  template bool is_ideal(const LieAlgebra<T>&, const Subspace<T>&, double);                      \
  template bool is_subalgebra(const LieAlgebra<T>&, const Subspace<T>&, double);                 \
  template LieAlgebra<T> direct_sum(const LieAlgebra<T>&, const LieAlgebra<T>&);

HLIE_INSTANTIATE(double)
HLIE_INSTANTIATE(Rational)

#undef HLIE_INSTANTIATE

}  // namespace hlie
