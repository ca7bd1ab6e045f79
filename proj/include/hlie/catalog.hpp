#pragma once

// Named metric Lie algebras used as fixtures, the six-dimensional bracket
// family with three simple Ricci eigenvalues and one triple one, and the
// essential Codazzi example that family produces.

#include "hlie/harmonic_structure.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hlie {

struct CatalogEntry {
  std::string name;
  std::string description;
  bool takes_dimension = false;
  std::size_t default_dimension = 0;
  bool solvable = false;
};

const std::vector<CatalogEntry>& catalog_entries();

/// Identity-metric fixture by name. `n` is accepted only by `abelian` and
/// `hyperbolic_solvable`. Throws std::invalid_argument for unknown names or
/// an out-of-range n.
MetricLieAlgebra<Rational> named(const std::string& name, std::optional<std::size_t> n = std::nullopt);

/// Parameters of the six-dimensional family. lambda holds the four distinct
/// eigenvalues; g_4 is three-dimensional.
template <Field T>
struct FamilyParameters {
  std::array<T, 4> lambda{};
  std::array<T, 3> mu{};
  std::array<T, 3> alpha{};
  T r{0};
  T a{0}, b{0}, c{0};

  /// alpha = r = 0 and mu_2, mu_3, a, b, c fixed by the Jacobi identity.
  static FamilyParameters jacobi_forced(const std::array<T, 4>& lambda, const T& mu1);
};

/// Requires pairwise distinct lambda with lambda_1 < lambda_2 < lambda_3.
/// The Jacobi identity is not enforced.
template <Field T>
LieAlgebra<T> general_family(const FamilyParameters<T>& p);

template <Field T>
struct CodazziExample {
  MetricLieAlgebra<T> metric;
  SymmetricOperator<T> tensor;  // Diag(l1, l2, l3, l4, l4, l4)
};

/// Identity metric; requires pairwise distinct lambda and mu != 0.
template <Field T>
CodazziExample<T> essential_codazzi_example(const std::array<T, 4>& lambda, const T& mu);

template <Field T>
struct EssentialCodazziCertificate {
  T jacobi_defect{0};
  T codazzi_norm_squared{0};
  T nabla_norm_squared{0};
  std::vector<bool> eigenspace_is_ideal;
  bool killing_negative_definite = false;

  bool jacobi() const { return jacobi_defect == 0; }
  bool codazzi() const { return codazzi_norm_squared == 0; }
  bool nonparallel() const { return nabla_norm_squared > 0; }
  bool no_ideal_eigenspace() const;
  bool all() const { return jacobi() && codazzi() && nonparallel() && no_ideal_eigenspace() && killing_negative_definite; }
};

/// The five defining properties of an essential Codazzi example on a compact
/// algebra. Meant for rational mode, where every test is exact.
template <Field T>
EssentialCodazziCertificate<T> certify(const CodazziExample<T>& ex);

}  // namespace hlie
