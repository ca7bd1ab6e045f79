#include <doctest.h>

#include "hlie/catalog.hpp"
#include "hlie/json_io.hpp"
#include "hlie/linalg.hpp"
#include "support/oracles.hpp"
#include "support/random_algebras.hpp"

#include <algorithm>

#ifndef HLIE_GOLDEN_DIR
#error "HLIE_GOLDEN_DIR must point at tests/golden"
#endif

using namespace hlie;
using Q = Rational;

namespace {

std::array<Q, 4> random_lambda(testing::Rng& rng, bool ordered) {
  std::array<Q, 4> l;
  for (;;) {
    for (auto& x : l) x = testing::small_rational(rng, 6, 3);
    bool distinct = true;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < i; ++j) distinct = distinct && l[i] != l[j];
    if (!distinct) continue;
    if (ordered) std::sort(l.begin(), l.begin() + 3);
    return l;
  }
}

Q random_mu(testing::Rng& rng) {
  Q mu(0);
  while (mu == 0) mu = testing::small_rational(rng, 4, 3);
  return mu;
}

}  // namespace

TEST_SUITE("catalog") {
  TEST_CASE("named fixtures") {
    const auto ab = named("abelian", 4);
    CHECK(ab.dim() == 4);
    CHECK(ab.algebra() == LieAlgebra<Q>::abelian(4));
    CHECK(named("abelian").dim() == 4);
    CHECK(named("hyperbolic_solvable").dim() == 3);
    CHECK(named("su2_biinvariant").algebra().bracket_basis(0, 1) == Vector<Q>{0, 0, 1});
    CHECK_THROWS_AS(named("e8"), std::invalid_argument);
    CHECK_THROWS_AS(named("heisenberg3", 5), std::invalid_argument);
    for (const auto& e : catalog_entries()) {
      const auto m = named(e.name);
      CHECK(m.gram() == Matrix<Q>::identity(m.dim()));
      CHECK(jacobi_defect(m.algebra()) == 0);
      CHECK(is_solvable(m.algebra()) == e.solvable);
    }
  }

  TEST_CASE("fixtures are regression-locked against golden values") {
    const json golden = read_json_file(std::string(HLIE_GOLDEN_DIR) + "/catalog.json");
    std::size_t count = 0;
    for (const auto& f : golden.at("fixtures")) {
      const std::string name = f.at("name").get<std::string>();
      CAPTURE(name);
      const auto n = f.at("n").is_null() ? std::optional<std::size_t>{} : std::optional<std::size_t>{f.at("n").get<std::size_t>()};
      const auto m = named(name, n);
      CHECK(algebra_to_json(m.algebra()) == f.at("algebra"));

      const auto dec = decompose(m, ricci(m));
      std::vector<std::string> values;
      for (const auto& v : dec.eigenvalues()) values.push_back(format_rational(v));
      CHECK(values == f.at("ricci_eigenvalues").get<std::vector<std::string>>());
      CHECK(dec.multiplicities() == f.at("multiplicities").get<std::vector<std::size_t>>());

      // Golden spectra re-derived from the brute-force Koszul and trace oracle.
      const auto ric = oracle::ricci_operator(m.algebra(), oracle::from_matrix(m.gram()));
      std::size_t total = 0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        Matrix<Q> shifted(m.dim(), m.dim());
        for (std::size_t r = 0; r < m.dim(); ++r)
          for (std::size_t c = 0; c < m.dim(); ++c) shifted(r, c) = ric[r][c] - (r == c ? parse_rational(values[i]) : Q(0));
        const std::size_t nullity = null_space(shifted).size();
        CHECK(nullity == dec.multiplicities()[i]);
        total += nullity;
      }
      CHECK(total == m.dim());
      ++count;
    }
    CHECK(count == 9);
  }

  TEST_CASE("general family: Jacobi-forced parameters") {
    testing::Rng rng(41);
    for (int t = 0; t < 20; ++t) {
      const auto l = random_lambda(rng, true);
      const auto mu = random_mu(rng);
      const auto p = FamilyParameters<Q>::jacobi_forced(l, mu);
      const auto alg = general_family(p);
      CHECK(jacobi_defect(alg) == 0);
      CHECK(oracle::jacobi_sum_squares(alg) == 0);
      // Same bracket table as the essential Codazzi example.
      CHECK(alg == essential_codazzi_example<Q>(l, mu).metric.algebra());
    }
  }

  TEST_CASE("general family: obstructions and degenerate cases") {
    testing::Rng rng(42);
    const auto l = random_lambda(rng, true);
    auto p = FamilyParameters<Q>::jacobi_forced(l, Q(1));
    p.alpha = {Q(1), Q(2), Q(-1)};
    CHECK(jacobi_defect(general_family(p)) > 0);
    CHECK(oracle::jacobi_sum_squares(general_family(p)) > 0);

    FamilyParameters<Q> zero;
    zero.lambda = l;
    CHECK(general_family(zero) == LieAlgebra<Q>::abelian(6));

    FamilyParameters<Q> bad = zero;
    bad.lambda = {Q(0), Q(0), Q(1), Q(2)};
    CHECK_THROWS_AS(general_family(bad), std::invalid_argument);
    bad.lambda = {Q(2), Q(1), Q(3), Q(5)};
    CHECK_THROWS_AS(general_family(bad), std::invalid_argument);
  }

  TEST_CASE("essential Codazzi example: the reference tuple") {
    const auto ex = essential_codazzi_example<Q>({Q(0), Q(1), Q(3), Q(7)}, Q(1));
    const auto& a = ex.metric.algebra();
    CHECK(a.bracket_basis(0, 1) == Vector<Q>{0, 0, 0, 1, 0, 0});
    CHECK(a.bracket_basis(0, 2) == Vector<Q>{0, 0, 0, 0, 3, 0});
    CHECK(a.bracket_basis(1, 2) == Vector<Q>{0, 0, 0, 0, 0, 2});
    CHECK(ex.tensor.matrix() == Matrix<Q>::diagonal({0, 1, 3, 7, 7, 7}));
    CHECK(ex.metric.gram() == Matrix<Q>::identity(6));
    const auto cert = certify(ex);
    CHECK(cert.all());
    CHECK(cert.nabla_norm_squared == Q(18744));
  }

  TEST_CASE("essential Codazzi example: random tuples against the oracles") {
    testing::Rng rng(43);
    for (int t = 0; t < 20; ++t) {
      const auto l = random_lambda(rng, false);
      const auto mu = random_mu(rng);
      const auto ex = essential_codazzi_example<Q>(l, mu);
      const auto cert = certify(ex);
      CHECK(cert.jacobi());
      CHECK(cert.codazzi());
      CHECK(cert.nonparallel());
      CHECK(cert.no_ideal_eigenspace());
      CHECK(cert.killing_negative_definite);

      const auto& alg = ex.metric.algebra();
      const auto g = oracle::identity<Q>(6);
      const auto tm = oracle::from_matrix(ex.tensor.matrix());
      CHECK(oracle::jacobi_sum_squares(alg) == 0);
      CHECK(oracle::codazzi_norm_squared(alg, g, tm) == 0);
      CHECK(oracle::nabla_norm_squared(alg, g, tm) == cert.nabla_norm_squared);
      const auto b = oracle::killing(alg);
      Matrix<Q> minus_b(6, 6);
      for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) minus_b(i, j) = -b[i][j];
      CHECK(is_positive_definite(minus_b));

      const auto dec = decompose(ex.metric, ex.tensor);
      for (std::size_t i = 0; i < dec.size(); ++i) {
        CHECK(is_subalgebra(alg, dec.subspace(i)));
        CHECK_FALSE(is_ideal(alg, dec.subspace(i)));
      }
    }
  }

  TEST_CASE("essential Codazzi example: swapping eigenvalues keeps the guarantees") {
    testing::Rng rng(44);
    for (int t = 0; t < 6; ++t) {
      auto l = random_lambda(rng, false);
      const auto mu = random_mu(rng);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
          auto swapped = l;
          std::swap(swapped[i], swapped[j]);
          CHECK(certify(essential_codazzi_example<Q>(swapped, mu)).all());
        }
    }
    CHECK_THROWS_AS(essential_codazzi_example<Q>({Q(1), Q(1), Q(2), Q(3)}, Q(1)), std::invalid_argument);
    CHECK_THROWS_AS(essential_codazzi_example<Q>({Q(0), Q(1), Q(2), Q(3)}, Q(0)), std::invalid_argument);
  }

  TEST_CASE("essential Codazzi example in float mode") {
    const auto ex = essential_codazzi_example<double>({0.0, 1.0, 3.0, 7.0}, 1.0);
    CHECK(jacobi_defect(ex.metric.algebra()) < 1e-12);
    CHECK(codazzi_defect(ex.metric, ex.tensor).norm.value() < 1e-12);
    CHECK(nabla_norm(ex.metric, ex.tensor).value() == doctest::Approx(std::sqrt(18744.0)));
  }
}
