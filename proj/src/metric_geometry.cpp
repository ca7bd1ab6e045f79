#include "hlie/metric_geometry.hpp"

#include <stdexcept>

namespace hlie {

namespace {

template <Field T>
void require_dim(const MetricLieAlgebra<T>& m, const Vector<T>& v, const char* what) {
  if (v.size() != m.dim()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

template <Field T>
bool self_adjoint(const Matrix<T>& a, const Matrix<T>& gram, double tol) {
  if (!a.is_square() || a.rows() != gram.rows()) return false;
  const Matrix<T> ga = gram * a;
  const double scale = std::max(1.0, to_double(ga.max_abs()));
  return is_symmetric(ga, tol * scale);
}

template <Field T>
void require_self_adjoint(const MetricLieAlgebra<T>& m, const SymmetricOperator<T>& t) {
  if (t.dim() != m.dim()) throw std::invalid_argument("operator dimension does not match the algebra");
  if (!self_adjoint(t.matrix(), m.gram(), kDefaultTolerance))
    throw std::invalid_argument("operator is not self-adjoint with respect to this metric");
}

// Contracts each slot of a trilinear tensor with the frame and sums the
// weighted squares.
template <Field T>
T frame_norm_sq(const OrthogonalFrame<T>& frame, std::size_t n, const std::vector<T>& d) {
  const auto& f = frame.vectors;
  std::vector<T> s1(n * n * n, T(0)), s2(n * n * n, T(0));
  // slot 3
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t z = 0; z < n; ++z) {
        T acc(0);
        for (std::size_t c = 0; c < n; ++c) acc += f[z][c] * d[(a * n + b) * n + c];
        s1[(a * n + b) * n + z] = acc;
      }
  // slot 2
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        T acc(0);
        for (std::size_t b = 0; b < n; ++b) acc += f[y][b] * s1[(a * n + b) * n + z];
        s2[(a * n + y) * n + z] = acc;
      }
  T total(0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        T acc(0);
        for (std::size_t a = 0; a < n; ++a) acc += f[x][a] * s2[(a * n + y) * n + z];
        total += frame.weights[x] * frame.weights[y] * frame.weights[z] * acc * acc;
      }
  return total;
}

// D[(a*n + b)*n + c] = component c of (nabla_{e_a} T) e_b.
template <Field T>
std::vector<T> nabla_components(const MetricLieAlgebra<T>& m, const Matrix<T>& t) {
  const std::size_t n = m.dim();
  std::vector<T> d(n * n * n, T(0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        T acc(0);
        for (std::size_t q = 0; q < n; ++q)
          acc += m.christoffel(a, q, c) * t(q, b) - t(c, q) * m.christoffel(a, b, q);
        d[(a * n + b) * n + c] = acc;
      }
  return d;
}

template <Field T>
std::vector<T> lower_last_slot(const MetricLieAlgebra<T>& m, const std::vector<T>& d) {
  const std::size_t n = m.dim();
  const Matrix<T>& g = m.gram();
  std::vector<T> out(n * n * n, T(0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t w = 0; w < n; ++w) {
        T acc(0);
        for (std::size_t c = 0; c < n; ++c) acc += g(w, c) * d[(a * n + b) * n + c];
        out[(a * n + b) * n + w] = acc;
      }
  return out;
}

template <Field T>
Matrix<T> christoffel_matrix(const MetricLieAlgebra<T>& m, std::size_t a) {
  const std::size_t n = m.dim();
  Matrix<T> l(n, n);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = 0; c < n; ++c) l(c, b) = m.christoffel(a, b, c);
  return l;
}

}  // namespace

// ---- MetricLieAlgebra ------------------------------------------------------

template <Field T>
MetricLieAlgebra<T>::MetricLieAlgebra(LieAlgebra<T> alg, Matrix<T> gram) : alg_(std::move(alg)), gram_(std::move(gram)) {
  const std::size_t n = alg_.dim();
  if (gram_.rows() != n || gram_.cols() != n) throw std::invalid_argument("Gram matrix has wrong dimensions");
  const double sym_tol = is_exact_v<T> ? 0.0 : 1e-12 * std::max(1.0, to_double(gram_.max_abs()));
  if (!is_symmetric(gram_, sym_tol)) throw std::invalid_argument("Gram matrix is not symmetric");
  if (!is_positive_definite(gram_)) throw std::invalid_argument("Gram matrix is not positive definite");
  gram_inv_ = inverse(gram_);

  std::vector<Vector<T>> standard;
  for (std::size_t i = 0; i < n; ++i) standard.push_back(unit_vector<T>(n, i));
  frame_.vectors = gram_schmidt(gram_, standard);
  for (const auto& f : frame_.vectors) {
    if constexpr (is_exact_v<T>) {
      frame_.weights.push_back(T(1) / hlie::inner(gram_, f, f));
    } else {
      frame_.weights.push_back(1.0);
    }
  }

  // Koszul: 2<L_a e_b, e_w> = C(a,b,w) + C(w,a,b) + C(w,b,a), C(i,j,k) = <[e_i,e_j], e_k>.
  std::vector<T> lowered(n * n * n, T(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        T acc(0);
        for (std::size_t p = 0; p < n; ++p) acc += alg_.constant(i, j, p) * gram_(p, k);
        lowered[(i * n + j) * n + k] = acc;
      }
  const T half = T(1) / T(2);
  gamma_.assign(n * n * n, T(0));
  std::vector<T> rhs(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t w = 0; w < n; ++w)
        rhs[w] = half * (lowered[(a * n + b) * n + w] + lowered[(w * n + a) * n + b] + lowered[(w * n + b) * n + a]);
      for (std::size_t c = 0; c < n; ++c) {
        T acc(0);
        for (std::size_t w = 0; w < n; ++w) acc += gram_inv_(c, w) * rhs[w];
        gamma_[(a * n + b) * n + c] = acc;
      }
    }
}

template <Field T>
MetricLieAlgebra<T> MetricLieAlgebra<T>::with_identity(LieAlgebra<T> alg) {
  const std::size_t n = alg.dim();
  return MetricLieAlgebra(std::move(alg), Matrix<T>::identity(n));
}

template <Field T>
MetricLieAlgebra<double> MetricLieAlgebra<T>::to_float() const {
  return MetricLieAlgebra<double>(alg_.to_float(), hlie::to_float(gram_));
}

template <Field T>
SymmetricOperator<T>::SymmetricOperator(Matrix<T> matrix, const Matrix<T>& gram, double tol) : matrix_(std::move(matrix)) {
  if (!matrix_.is_square() || matrix_.rows() != gram.rows())
    throw std::invalid_argument("symmetric operator: dimension mismatch");
  if (!self_adjoint(matrix_, gram, tol))
    throw std::invalid_argument("operator is not self-adjoint with respect to the Gram matrix");
}

// ---- operations ------------------------------------------------------------

template <Field T>
Matrix<T> adjoint(const MetricLieAlgebra<T>& m, const Matrix<T>& a) {
  return m.gram_inverse() * a.transpose() * m.gram();
}

template <Field T>
Matrix<T> levi_civita(const MetricLieAlgebra<T>& m, const Vector<T>& u) {
  require_dim(m, u, "levi_civita");
  const std::size_t n = m.dim();
  Matrix<T> l(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    if (u[a] == 0) continue;
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) l(c, b) += u[a] * m.christoffel(a, b, c);
  }
  return l;
}

template <Field T>
Matrix<T> curvature(const MetricLieAlgebra<T>& m, const Vector<T>& u, const Vector<T>& v) {
  require_dim(m, u, "curvature");
  require_dim(m, v, "curvature");
  const Matrix<T> lu = levi_civita(m, u);
  const Matrix<T> lv = levi_civita(m, v);
  return levi_civita(m, m.algebra().bracket(u, v)) - commutator(lu, lv);
}

template <Field T>
Matrix<T> ricci_form(const MetricLieAlgebra<T>& m) {
  const std::size_t n = m.dim();
  const auto& alg = m.algebra();
  // tau_q = sum_w Gamma(w, q, w)
  std::vector<T> tau(n, T(0));
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t w = 0; w < n; ++w) tau[q] += m.christoffel(w, q, w);
  Matrix<T> ric(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      T acc(0);
      for (std::size_t w = 0; w < n; ++w)
        for (std::size_t p = 0; p < n; ++p) {
          // (L_[a,w] e_b)_w - (L_a L_w e_b)_w
          acc += alg.constant(a, w, p) * m.christoffel(p, b, w) - m.christoffel(w, b, p) * m.christoffel(a, p, w);
        }
      // (L_w L_a e_b)_w summed over w
      for (std::size_t q = 0; q < n; ++q) acc += m.christoffel(a, b, q) * tau[q];
      ric(a, b) = acc;
    }
  return ric;
}

template <Field T>
SymmetricOperator<T> ricci(const MetricLieAlgebra<T>& m) {
  return SymmetricOperator<T>(m.gram_inverse() * ricci_form(m), m.gram());
}

template <Field T>
Vector<T> mean_curvature_vector(const MetricLieAlgebra<T>& m) {
  const std::size_t n = m.dim();
  Vector<T> traces(n, T(0));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t k = 0; k < n; ++k) traces[u] += m.algebra().constant(u, k, k);
  return m.gram_inverse() * traces;
}

template <Field T>
SymmetricOperator<T> ricci_structure_formula(const MetricLieAlgebra<T>& m) {
  const std::size_t n = m.dim();
  const auto& alg = m.algebra();
  const auto& frame = m.frame();
  const auto& f = frame.vectors;

  // P(a,i,j) = <[e_a, E_i], E_j>,  Q(i,j,a) = <[E_i, E_j], e_a>
  std::vector<T> p(n * n * n), q(n * n * n);
  for (std::size_t a = 0; a < n; ++a) {
    const Vector<T> ea = unit_vector<T>(n, a);
    for (std::size_t i = 0; i < n; ++i) {
      const Vector<T> br = alg.bracket(ea, f[i]);
      for (std::size_t j = 0; j < n; ++j) p[(a * n + i) * n + j] = m.inner(br, f[j]);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Vector<T> lowered = m.gram() * alg.bracket(f[i], f[j]);
      for (std::size_t a = 0; a < n; ++a) q[(i * n + j) * n + a] = lowered[a];
    }

  const T half = T(1) / T(2);
  const T quarter = T(1) / T(4);
  Matrix<T> r_form(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      T first(0), second(0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const T w = frame.weights[i] * frame.weights[j];
          first += w * p[(a * n + i) * n + j] * p[(b * n + i) * n + j];
          second += w * q[(i * n + j) * n + a] * q[(i * n + j) * n + b];
        }
      r_form(a, b) = -half * first + quarter * second;
      r_form(b, a) = r_form(a, b);
    }

  const Matrix<T> r_op = m.gram_inverse() * r_form;
  const Matrix<T> b_op = m.gram_inverse() * killing_form(alg);
  const Matrix<T> ad_h = alg.ad(mean_curvature_vector(m));
  const Matrix<T> s_ad_h = half * (ad_h + adjoint(m, ad_h));
  return SymmetricOperator<T>(r_op - half * b_op - s_ad_h, m.gram());
}

template <Field T>
T scalar_curvature(const MetricLieAlgebra<T>& m) {
  return ricci(m).matrix().trace();
}

template <Field T>
Matrix<T> covariant_derivative(const MetricLieAlgebra<T>& m, const SymmetricOperator<T>& t, const Vector<T>& u) {
  require_self_adjoint(m, t);
  require_dim(m, u, "covariant_derivative");
  const Matrix<T> lu = levi_civita(m, u);
  return lu * t.matrix() - t.matrix() * lu;
}

template <Field T>
CodazziDefect<T> codazzi_defect(const MetricLieAlgebra<T>& m, const SymmetricOperator<T>& t) {
  require_self_adjoint(m, t);
  const std::size_t n = m.dim();
  const std::vector<T> d = nabla_components(m, t.matrix());
  std::vector<T> anti(n * n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) anti[(a * n + b) * n + c] = d[(a * n + b) * n + c] - d[(b * n + a) * n + c];
  CodazziDefect<T> out;
  out.dim = n;
  out.tensor = lower_last_slot(m, anti);
  out.norm.squared = frame_norm_sq(m.frame(), n, out.tensor);
  for (const T& x : out.tensor) {
    const T ax = abs_of(x);
    if (ax > out.max_entry) out.max_entry = ax;
  }
  return out;
}

template <Field T>
FrameNorm<T> nabla_norm(const MetricLieAlgebra<T>& m, const SymmetricOperator<T>& t) {
  require_self_adjoint(m, t);
  const std::vector<T> lowered = lower_last_slot(m, nabla_components(m, t.matrix()));
  return FrameNorm<T>{frame_norm_sq(m.frame(), m.dim(), lowered)};
}

template <Field T>
FrameNorm<T> curvature_divergence_norm(const MetricLieAlgebra<T>& m) {
  const std::size_t n = m.dim();
  const auto& frame = m.frame();
  const auto& alg = m.algebra();

  std::vector<Matrix<T>> l_basis;
  for (std::size_t a = 0; a < n; ++a) l_basis.push_back(christoffel_matrix(m, a));
  auto lc = [&](const Vector<T>& u) {
    Matrix<T> out(n, n);
    for (std::size_t a = 0; a < n; ++a)
      if (u[a] != 0) out += u[a] * l_basis[a];
    return out;
  };
  // K on standard basis pairs, extended bilinearly.
  std::vector<Matrix<T>> k_basis(n * n, Matrix<T>(n, n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      k_basis[a * n + b] = lc(alg.bracket_basis(a, b)) - commutator(l_basis[a], l_basis[b]);
  auto kk = [&](const Vector<T>& u, const Vector<T>& v) {
    Matrix<T> out(n, n);
    for (std::size_t a = 0; a < n; ++a) {
      if (u[a] == 0) continue;
      for (std::size_t b = 0; b < n; ++b)
        if (v[b] != 0) out += (u[a] * v[b]) * k_basis[a * n + b];
    }
    return out;
  };

  // div(x)(y) components, then lowered: tensor(x, y, z) = <div(e_x) e_y, e_z>.
  std::vector<Matrix<T>> div(n, Matrix<T>(n, n));
  for (std::size_t i = 0; i < n; ++i) {
    const Vector<T>& e = frame.vectors[i];
    const Matrix<T> le = lc(e);
    const Vector<T> le_e = le * e;
    for (std::size_t x = 0; x < n; ++x) {
      const Vector<T> ex = unit_vector<T>(n, x);
      const Matrix<T> kex = kk(e, ex);
      Matrix<T> term = commutator(le, kex) - kk(le_e, ex) - kk(e, le * ex);
      div[x] += frame.weights[i] * term;
    }
  }
  std::vector<T> tensor(n * n * n);
  for (std::size_t x = 0; x < n; ++x) {
    const Matrix<T> lowered = m.gram() * div[x];
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) tensor[(x * n + y) * n + z] = lowered(z, y);
  }
  return FrameNorm<T>{frame_norm_sq(frame, n, tensor)};
}

template <Field T>
T orthogonal_ric_identity_residual(const MetricLieAlgebra<T>& m, const Vector<T>& s, double tol) {
  require_dim(m, s, "orthogonal_ric_identity_residual");
  const Subspace<T> derived = derived_subalgebra(m.algebra());
  for (const auto& d : derived.basis()) {
    const T ip = m.inner(s, d);
    const double scale = std::sqrt(std::max(0.0, to_double(m.inner(s, s)) * to_double(m.inner(d, d))));
    if (!is_zero(ip, tol * std::max(1.0, scale)))
      throw std::invalid_argument("vector is not orthogonal to the derived algebra");
  }
  const Matrix<T> ric = ricci_form(m);
  const T ric_ss = inner(ric, s, s);
  const Matrix<T> ad_s = m.algebra().ad(s);
  const Matrix<T> sym = ad_s + adjoint(m, ad_s);
  const T rhs = (sym * sym).trace() / T(4);
  return abs_of(T(ric_ss + rhs));
}

template <Field T>
FrameNorm<T> frame_norm3(const OrthogonalFrame<T>& frame, std::size_t n, const std::vector<T>& tensor) {
  return FrameNorm<T>{frame_norm_sq(frame, n, tensor)};
}

#define HLIE_INSTANTIATE(T)                                                                               \
  template class MetricLieAlgebra<T>;                                                                     \
  template class SymmetricOperator<T>;                                                                    \
  template Matrix<T> adjoint(const MetricLieAlgebra<T>&, const Matrix<T>&);                               \
  template Matrix<T> levi_civita(const MetricLieAlgebra<T>&, const Vector<T>&);                           \
  template Matrix<T> curvature(const MetricLieAlgebra<T>&, const Vector<T>&, const Vector<T>&);           \
  template Matrix<T> ricci_form(const MetricLieAlgebra<T>&);                                              \
  template SymmetricOperator<T> ricci(const MetricLieAlgebra<T>&);                                        \
  template SymmetricOperator<T> ricci_structure_formula(const MetricLieAlgebra<T>&);                      \
  template Vector<T> mean_curvature_vector(const MetricLieAlgebra<T>&);                                   \
  template T scalar_curvature(const MetricLieAlgebra<T>&);                                                \
  template Matrix<T> covariant_derivative(const MetricLieAlgebra<T>&, const SymmetricOperator<T>&,        \
                                          const Vector<T>&);                                              \
  template CodazziDefect<T> codazzi_defect(const MetricLieAlgebra<T>&, const SymmetricOperator<T>&);      \
  template FrameNorm<T> nabla_norm(const MetricLieAlgebra<T>&, const SymmetricOperator<T>&);              \
  template FrameNorm<T> curvature_divergence_norm(const MetricLieAlgebra<T>&);                            \
  template T orthogonal_ric_identity_residual(const MetricLieAlgebra<T>&, const Vector<T>&, double);      \
  template FrameNorm<T> frame_norm3(const OrthogonalFrame<T>&, std::size_t, const std::vector<T>&);

HLIE_INSTANTIATE(double)
HLIE_INSTANTIATE(Rational)

#undef HLIE_INSTANTIATE

}  // namespace hlie
