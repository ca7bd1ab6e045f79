#include "hlie/catalog.hpp"

#include <stdexcept>

namespace hlie {

namespace {

using Q = Rational;

LieAlgebra<Q> su2() {
  return LieAlgebra<Q>::from_brackets(3, {{0, 1, 2, Q(1)}, {1, 2, 0, Q(1)}, {0, 2, 1, Q(-1)}});
}

LieAlgebra<Q> sl2r() {
  return LieAlgebra<Q>::from_brackets(3, {{0, 1, 2, Q(-1)}, {1, 2, 0, Q(1)}, {0, 2, 1, Q(-1)}});
}

LieAlgebra<Q> hyperbolic(std::size_t n) {
  std::vector<BracketTerm<Q>> terms;
  for (std::size_t i = 1; i < n; ++i) terms.push_back({0, i, i, Q(1)});
  return LieAlgebra<Q>::from_brackets(n, terms);
}

std::size_t dimension_or(std::optional<std::size_t> n, const CatalogEntry& e, std::size_t min) {
  if (!n) return e.default_dimension;
  if (!e.takes_dimension) throw std::invalid_argument("catalog entry '" + e.name + "' has a fixed dimension");
  if (*n < min || *n > 16)
    throw std::invalid_argument("catalog entry '" + e.name + "' needs " + std::to_string(min) + " <= n <= 16");
  return *n;
}

template <Field T>
void require_distinct(const std::array<T, 4>& l) {
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (l[i] == l[j]) throw std::invalid_argument("eigenvalue parameters must be pairwise distinct");
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"abelian", "abelian algebra R^n", true, 4, true},
      {"heisenberg3", "[e1,e2] = e3", false, 3, true},
      {"su2_biinvariant", "su(2), cyclic brackets, bi-invariant metric", false, 3, false},
      {"sl2r", "sl(2,R): [e1,e2] = -e3, [e2,e3] = e1, [e3,e1] = e2", false, 3, false},
      {"hyperbolic_solvable", "[e1,e_i] = e_i for i >= 2 (real hyperbolic space)", true, 3, true},
      {"su2_plus_abelian3", "su(2) + R^3", false, 6, false},
      {"su2_plus_su2", "su(2) + su(2)", false, 6, false},
  };
  return entries;
}

MetricLieAlgebra<Rational> named(const std::string& name, std::optional<std::size_t> n) {
  const auto& entries = catalog_entries();
  const CatalogEntry* entry = nullptr;
  for (const auto& e : entries)
    if (e.name == name) entry = &e;
  if (!entry) throw std::invalid_argument("unknown catalog entry '" + name + "'");

  if (name == "abelian") return MetricLieAlgebra<Q>::with_identity(LieAlgebra<Q>::abelian(dimension_or(n, *entry, 1)));
  if (name == "hyperbolic_solvable") return MetricLieAlgebra<Q>::with_identity(hyperbolic(dimension_or(n, *entry, 2)));
  dimension_or(n, *entry, entry->default_dimension);
  if (name == "heisenberg3") return MetricLieAlgebra<Q>::with_identity(LieAlgebra<Q>::from_brackets(3, {{0, 1, 2, Q(1)}}));
  if (name == "su2_biinvariant") return MetricLieAlgebra<Q>::with_identity(su2());
  if (name == "sl2r") return MetricLieAlgebra<Q>::with_identity(sl2r());
  if (name == "su2_plus_abelian3") return MetricLieAlgebra<Q>::with_identity(direct_sum(su2(), LieAlgebra<Q>::abelian(3)));
  return MetricLieAlgebra<Q>::with_identity(direct_sum(su2(), su2()));
}

template <Field T>
FamilyParameters<T> FamilyParameters<T>::jacobi_forced(const std::array<T, 4>& lambda, const T& mu1) {
  require_distinct(lambda);
  auto d = [&](int i, int j) { return T(lambda[i - 1] - lambda[j - 1]); };
  FamilyParameters p;
  p.lambda = lambda;
  p.mu = {mu1, T(d(1, 3) * mu1 / d(1, 2)), T(d(2, 3) * mu1 / d(1, 2))};
  p.a = d(1, 4) * d(1, 4) * d(2, 3) * mu1 / (d(1, 2) * d(1, 2) * d(1, 3));
  p.b = -d(2, 4) * d(2, 4) * d(1, 3) * mu1 / (d(1, 2) * d(1, 2) * d(2, 3));
  p.c = d(3, 4) * d(3, 4) * mu1 / (d(2, 3) * d(1, 3));
  return p;
}

template <Field T>
LieAlgebra<T> general_family(const FamilyParameters<T>& p) {
  require_distinct(p.lambda);
  if (!(p.lambda[0] < p.lambda[1] && p.lambda[1] < p.lambda[2]))
    throw std::invalid_argument("general_family requires lambda_1 < lambda_2 < lambda_3");
  auto sq = [&](int i, int j) {
    const T d = p.lambda[i - 1] - p.lambda[j - 1];
    return T(d * d);
  };
  const auto& mu = p.mu;
  const auto& al = p.alpha;
  std::vector<BracketTerm<T>> t = {
      {3, 4, 5, p.a},
      {3, 5, 4, p.b},
      {4, 5, 3, p.c},
      {0, 1, 3, mu[0]},
      {0, 1, 2, T(sq(1, 2) / sq(2, 3) * p.r)},
      {0, 2, 4, mu[1]},
      {0, 2, 1, T(-sq(1, 3) / sq(2, 3) * p.r)},
      {1, 2, 5, mu[2]},
      {1, 2, 0, p.r},
      {0, 3, 4, al[0]},
      {0, 3, 1, T(-sq(1, 4) / sq(1, 2) * mu[0])},
      {0, 4, 3, T(-al[0])},
      {0, 4, 2, T(-sq(1, 4) / sq(1, 3) * mu[1])},
      {1, 3, 5, al[1]},
      {1, 3, 0, T(sq(2, 4) / sq(1, 2) * mu[0])},
      {1, 5, 3, T(-al[1])},
      {1, 5, 2, T(-sq(2, 4) / sq(2, 3) * mu[2])},
      {2, 4, 5, al[2]},
      {2, 4, 0, T(sq(3, 4) / sq(1, 3) * mu[1])},
      {2, 5, 4, T(-al[2])},
      {2, 5, 1, T(sq(3, 4) / sq(2, 3) * mu[2])},
  };
  return LieAlgebra<T>::from_brackets(6, t);
}

template <Field T>
CodazziExample<T> essential_codazzi_example(const std::array<T, 4>& lambda, const T& mu) {
  require_distinct(lambda);
  if (mu == 0) throw std::invalid_argument("mu must be nonzero");
  auto d = [&](int i, int j) { return T(lambda[i - 1] - lambda[j - 1]); };
  const T l12 = d(1, 2), l13 = d(1, 3), l14 = d(1, 4), l23 = d(2, 3), l24 = d(2, 4), l34 = d(3, 4);
  std::vector<BracketTerm<T>> t = {
      {0, 1, 3, mu},
      {0, 2, 4, T(l13 * mu / l12)},
      {0, 3, 1, T(-l14 * l14 * mu / (l12 * l12))},
      {0, 4, 2, T(-l14 * l14 * mu / (l13 * l12))},
      {1, 2, 5, T(l23 * mu / l12)},
      {1, 3, 0, T(l24 * l24 * mu / (l12 * l12))},
      {1, 5, 2, T(-l24 * l24 * mu / (l23 * l12))},
      {2, 4, 0, T(l34 * l34 * mu / (l13 * l12))},
      {2, 5, 1, T(l34 * l34 * mu / (l23 * l12))},
      {3, 4, 5, T(l14 * l14 * l23 * mu / (l13 * l12 * l12))},
      {3, 5, 4, T(-l24 * l24 * l13 * mu / (l12 * l12 * l23))},
      {4, 5, 3, T(l34 * l34 * mu / (l13 * l23))},
  };
  auto m = MetricLieAlgebra<T>::with_identity(LieAlgebra<T>::from_brackets(6, t));
  const Matrix<T> a = Matrix<T>::diagonal({lambda[0], lambda[1], lambda[2], lambda[3], lambda[3], lambda[3]});
  SymmetricOperator<T> op(a, m.gram());
  return CodazziExample<T>{std::move(m), std::move(op)};
}

template <Field T>
bool EssentialCodazziCertificate<T>::no_ideal_eigenspace() const {
  for (bool ideal : eigenspace_is_ideal)
    if (ideal) return false;
  return !eigenspace_is_ideal.empty();
}

template <Field T>
EssentialCodazziCertificate<T> certify(const CodazziExample<T>& ex) {
  EssentialCodazziCertificate<T> cert;
  const auto& m = ex.metric;
  cert.jacobi_defect = jacobi_defect(m.algebra());
  cert.codazzi_norm_squared = codazzi_defect(m, ex.tensor).norm.squared;
  cert.nabla_norm_squared = nabla_norm(m, ex.tensor).squared;
  const RicciDecomposition<T> dec = decompose(m, ex.tensor);
  for (std::size_t i = 0; i < dec.size(); ++i) cert.eigenspace_is_ideal.push_back(is_ideal(m.algebra(), dec.subspace(i)));
  cert.killing_negative_definite = is_positive_definite(Matrix<T>(-killing_form(m.algebra())));
  return cert;
}

#define HLIE_INSTANTIATE(T)                                                                          \
  template struct FamilyParameters<T>;                                                               \
  template LieAlgebra<T> general_family(const FamilyParameters<T>&);                                 \
  template CodazziExample<T> essential_codazzi_example(const std::array<T, 4>&, const T&);           \
  template struct EssentialCodazziCertificate<T>;                                                    \
  template EssentialCodazziCertificate<T> certify(const CodazziExample<T>&);

HLIE_INSTANTIATE(double)
HLIE_INSTANTIATE(Rational)

#undef HLIE_INSTANTIATE

}  // namespace hlie
