#pragma once

// Left-invariant Riemannian geometry of a Lie algebra with an inner product.
//
// Conventions:
//   * L_u v is the Levi-Civita product from Koszul's formula
//       2<L_u v, w> = <[u,v],w> + <[w,u],v> + <[w,v],u>.
//   * K(u,v) = L_[u,v] - [L_u, L_v].
//   * ric(u,v) = tr(w -> K(u,w)v), Ric = gram^{-1} ric.
//   * (nabla_u T) = L_u T - T L_u for a left-invariant endomorphism T.
// Endomorphisms are matrices in the standard basis; adjoints are taken with
// respect to the Gram matrix.

#include "hlie/lie_algebra.hpp"

#include <cmath>
#include <vector>

namespace hlie {

/// A frame orthogonal with respect to the Gram matrix. In float mode the
/// vectors are normalized (weights all 1); in rational mode they are not and
/// `weights[i] = 1 / <f_i, f_i>`.
template <Field T>
struct OrthogonalFrame {
  std::vector<Vector<T>> vectors;
  std::vector<T> weights;
};

/// Norm over an orthonormal frame. `squared` is exact in rational mode.
template <Field T>
struct FrameNorm {
  T squared{0};
  double value() const { return std::sqrt(std::max(0.0, to_double(squared))); }
  bool is_zero(double tol) const {
    if constexpr (is_exact_v<T>) {
      return squared == 0;
    } else {
      return value() <= tol;
    }
  }
};

template <Field T>
class MetricLieAlgebra {
 public:
  /// Throws std::invalid_argument unless `gram` is a symmetric
  /// positive-definite dim x dim matrix.
  MetricLieAlgebra(LieAlgebra<T> alg, Matrix<T> gram);

  static MetricLieAlgebra with_identity(LieAlgebra<T> alg);

  std::size_t dim() const { return alg_.dim(); }
  const LieAlgebra<T>& algebra() const { return alg_; }
  const Matrix<T>& gram() const { return gram_; }
  const Matrix<T>& gram_inverse() const { return gram_inv_; }
  const OrthogonalFrame<T>& frame() const { return frame_; }

  T inner(const Vector<T>& x, const Vector<T>& y) const { return hlie::inner(gram_, x, y); }

  /// Component c of L_{e_a} e_b.
  const T& christoffel(std::size_t a, std::size_t b, std::size_t c) const {
    return gamma_[(a * dim() + b) * dim() + c];
  }

  MetricLieAlgebra<double> to_float() const;

 private:
  LieAlgebra<T> alg_;
  Matrix<T> gram_;
  Matrix<T> gram_inv_;
  OrthogonalFrame<T> frame_;
  std::vector<T> gamma_;
};

/// Endomorphism that is self-adjoint with respect to a Gram matrix.
template <Field T>
class SymmetricOperator {
 public:
  /// Throws std::invalid_argument unless gram * matrix is symmetric
  /// (exactly, or within tol * max(1, |gram * matrix|) in float mode).
  SymmetricOperator(Matrix<T> matrix, const Matrix<T>& gram, double tol = kDefaultTolerance);

  const Matrix<T>& matrix() const { return matrix_; }
  std::size_t dim() const { return matrix_.rows(); }

 private:
  Matrix<T> matrix_;
};

/// d(u,v,w) = <(nabla_u T)v - (nabla_v T)u, w> on standard basis vectors.
template <Field T>
struct CodazziDefect {
  std::size_t dim = 0;
  std::vector<T> tensor;
  FrameNorm<T> norm;
  T max_entry{0};

  const T& operator()(std::size_t u, std::size_t v, std::size_t w) const { return tensor[(u * dim + v) * dim + w]; }
};

template <Field T>
Matrix<T> adjoint(const MetricLieAlgebra<T>& m, const Matrix<T>& a);

template <Field T>
Matrix<T> levi_civita(const MetricLieAlgebra<T>& m, const Vector<T>& u);

template <Field T>
Matrix<T> curvature(const MetricLieAlgebra<T>& m, const Vector<T>& u, const Vector<T>& v);

/// Ricci bilinear form ric(e_a, e_b).
template <Field T>
Matrix<T> ricci_form(const MetricLieAlgebra<T>& m);

template <Field T>
SymmetricOperator<T> ricci(const MetricLieAlgebra<T>& m);

/// Ric = R - B/2 - S(ad_H), assembled from brackets, the Killing form and the
/// mean curvature vector without touching the Levi-Civita product.
template <Field T>
SymmetricOperator<T> ricci_structure_formula(const MetricLieAlgebra<T>& m);

/// H with <H, u> = tr(ad_u).
template <Field T>
Vector<T> mean_curvature_vector(const MetricLieAlgebra<T>& m);

template <Field T>
T scalar_curvature(const MetricLieAlgebra<T>& m);

template <Field T>
Matrix<T> covariant_derivative(const MetricLieAlgebra<T>& m, const SymmetricOperator<T>& t, const Vector<T>& u);

template <Field T>
CodazziDefect<T> codazzi_defect(const MetricLieAlgebra<T>& m, const SymmetricOperator<T>& t);

/// Frobenius norm of (u,v,w) -> <(nabla_u T)v, w> over the frame.
template <Field T>
FrameNorm<T> nabla_norm(const MetricLieAlgebra<T>& m, const SymmetricOperator<T>& t);

/// Frobenius norm of (X,Y,Z) -> sum_i <(nabla_{E_i} K)(E_i, X) Y, Z>.
template <Field T>
FrameNorm<T> curvature_divergence_norm(const MetricLieAlgebra<T>& m);

/// |ric(s,s) + tr((ad_s + ad_s^*)^2) / 4| for s orthogonal to [g,g].
/// Throws std::invalid_argument if s is not orthogonal to the derived algebra.
template <Field T>
T orthogonal_ric_identity_residual(const MetricLieAlgebra<T>& m, const Vector<T>& s, double tol = kDefaultTolerance);

/// Frame Frobenius norm of a trilinear tensor given on the standard basis.
template <Field T>
FrameNorm<T> frame_norm3(const OrthogonalFrame<T>& frame, std::size_t n, const std::vector<T>& tensor);

}  // namespace hlie
