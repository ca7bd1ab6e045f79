#pragma once

// Random Lie algebras and metrics for property tests. Every generator builds
// brackets from a construction that satisfies Jacobi by design (direct sums,
// semidirect products by derivations, basis changes); tests still check it.

#include "hlie/lie_algebra.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hlie::testing {

using Rng = std::mt19937_64;

struct NamedAlgebra {
  std::string name;
  LieAlgebra<Rational> algebra;
};

Rational small_rational(Rng& rng, int num_range = 3, int den_max = 2);
/// Small nonzero integer in [-range, range].
long nonzero_int(Rng& rng, long range);
double uniform(Rng& rng, double lo, double hi);

/// Basis change f_i = sum_k p(k, i) e_k; p must be invertible.
template <Field T>
LieAlgebra<T> change_basis(const LieAlgebra<T>& alg, const Matrix<T>& p);

/// Unipotent-times-permutation rational matrix with small entries.
Matrix<Rational> random_basis_change(Rng& rng, std::size_t n);

/// R^k semidirect R^m by commuting derivations (m <= 2).
LieAlgebra<Rational> random_abelian_extension(Rng& rng, std::size_t dim);
/// h3 + R^l extended by a derivation diag(a, b, a+b) with a nilpotent part.
LieAlgebra<Rational> random_heisenberg_extension(Rng& rng, std::size_t dim);
/// Nilpotent: filiform chains [e1, e_i] = e_{i+1} plus optional central terms.
LieAlgebra<Rational> random_nilpotent(Rng& rng, std::size_t dim);

/// One of the solvable constructions above in dimension 3..max_dim, followed
/// by a random basis change.
NamedAlgebra random_solvable(Rng& rng, std::size_t max_dim = 6);

/// Solvable or not: adds sl2 + R^2 (standard representation), su2 + R^k,
/// sl2 + solvable and su2 + su2 to the solvable pool.
NamedAlgebra random_algebra(Rng& rng, std::size_t max_dim = 6);

LieAlgebra<Rational> sl2_semidirect_r2();

/// Probe-style parameter vector, uniform in [-box, box].
std::vector<double> random_params(Rng& rng, std::size_t dim, double box = 1.0);
/// Gram = F F^T with F lower triangular, positive integer diagonal and small
/// rational off-diagonal entries.
Matrix<Rational> random_rational_gram(Rng& rng, std::size_t dim);

}  // namespace hlie::testing
