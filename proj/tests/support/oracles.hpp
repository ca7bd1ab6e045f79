#pragma once

// Brute-force reference computations that share no code with the library
// beyond the LieAlgebra container: plain nested loops, their own
// Gauss-Jordan inverse, the textbook curvature R(X,Y) = [D_X, D_Y] - D_[X,Y]
// and the inverse-metric contraction for tensor norms.

#include "hlie/lie_algebra.hpp"

#include <vector>

namespace hlie::oracle {

template <Field T>
using Mat = std::vector<std::vector<T>>;

template <Field T>
Mat<T> invert(Mat<T> a);

/// G[d] of D_{e_a} e_b, from 2<D_a b, d> = <[a,b],d> - <[b,d],a> + <[d,a],b>.
template <Field T>
std::vector<T> connection(const LieAlgebra<T>& alg, const Mat<T>& g);

/// R(e_x, e_y) e_z for R(X,Y) = D_X D_Y - D_Y D_X - D_[X,Y].
template <Field T>
std::vector<T> curvature(const LieAlgebra<T>& alg, const Mat<T>& g, std::size_t x, std::size_t y, std::size_t z);

/// ric(Y, Z) = tr(X -> R(X,Y)Z) with R(X,Y) = D_X D_Y - D_Y D_X - D_[X,Y].
template <Field T>
Mat<T> ricci_form(const LieAlgebra<T>& alg, const Mat<T>& g);

/// g^{-1} ric.
template <Field T>
Mat<T> ricci_operator(const LieAlgebra<T>& alg, const Mat<T>& g);

/// Sum over all triples of the cyclic Jacobi sum, squared entrywise.
template <Field T>
T jacobi_sum_squares(const LieAlgebra<T>& alg);

/// tr(ad_a ad_b) through explicit ad matrices.
template <Field T>
Mat<T> killing(const LieAlgebra<T>& alg);

/// Squared norm of d(u,v,w) = <(D_u T)v - (D_v T)u, w>, contracted with g^{-1}
/// in every slot. `t` is the operator matrix in the standard basis.
template <Field T>
T codazzi_norm_squared(const LieAlgebra<T>& alg, const Mat<T>& g, const Mat<T>& t);

/// Squared norm of <(D_u T)v, w>.
template <Field T>
T nabla_norm_squared(const LieAlgebra<T>& alg, const Mat<T>& g, const Mat<T>& t);

template <Field T>
Mat<T> identity(std::size_t n);

template <Field T>
Mat<T> from_matrix(const Matrix<T>& m);

}  // namespace hlie::oracle
