#include <doctest.h>

#include "hlie/catalog.hpp"
#include "hlie/conjecture_probe.hpp"
#include "hlie/linalg.hpp"
#include "support/random_algebras.hpp"

#include <cmath>
#include <limits>

using namespace hlie;

namespace {

LieAlgebra<double> fixture(const char* name) { return named(name).algebra().to_float(); }

// |[,]|^2 over an orthonormal frame: c_ij^k c_ab^l g^ia g^jb g_kl.
double bracket_norm_squared(const MetricLieAlgebra<double>& m) {
  const std::size_t n = m.dim();
  const auto& h = m.gram_inverse();
  const auto& g = m.gram();
  const auto& alg = m.algebra();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) s += alg.constant(i, j, k) * alg.constant(a, b, l) * h(i, a) * h(j, b) * g(k, l);
  return s;
}

ProbeConfig small_config(std::uint64_t seed = 7) {
  ProbeConfig cfg;
  cfg.seed = seed;
  cfg.restarts = 4;
  cfg.max_iters = 150;
  return cfg;
}

}  // namespace

TEST_SUITE("conjecture_probe") {
  TEST_CASE("metric parameters") {
    CHECK(parameter_count(4) == 10);
    CHECK(gram_from_parameters(3, std::vector<double>(6, 0.0)) == Matrix<double>::identity(3));
    std::vector<double> p(6, 0.0);
    p[0] = std::log(2.0);
    const auto g = gram_from_parameters(3, p);
    CHECK(g(0, 0) == doctest::Approx(4.0));
    CHECK(g(1, 1) == 1.0);
    CHECK(g(0, 1) == 0.0);

    testing::Rng rng(51);
    for (int t = 0; t < 20; ++t) {
      const std::size_t n = 2 + static_cast<std::size_t>(t % 5);
      const auto gram = gram_from_parameters(n, testing::random_params(rng, n, 1.5));
      const auto back = gram_from_parameters(n, parameters_from_gram(gram));
      CHECK((back - gram).max_abs() < 1e-12 * std::max(1.0, gram.max_abs()));
      CHECK(is_positive_definite(gram));
    }
    const auto alg = fixture("heisenberg3");
    CHECK_THROWS_AS(metric_from_parameters(alg, std::vector<double>(5, 0.0)), std::invalid_argument);
    auto bad = std::vector<double>(6, 0.0);
    bad[4] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(metric_from_parameters(alg, bad), std::invalid_argument);
    bad[4] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(defect_objective(alg, bad), std::invalid_argument);
  }

  TEST_CASE("objective closed forms") {
    testing::Rng rng(52);
    CHECK(defect_objective(LieAlgebra<double>::abelian(4), testing::random_params(rng, 4)) == 0.0);
    CHECK(defect_objective(fixture("su2_biinvariant"), std::vector<double>(6, 0.0)) < 1e-28);
    CHECK(defect_objective(fixture("heisenberg3"), std::vector<double>(6, 0.0)) > 0.1);
  }

  TEST_CASE("evaluator agrees with the generic geometry") {
    testing::Rng rng(53);
    for (int t = 0; t < 40; ++t) {
      const auto alg = testing::random_algebra(rng).algebra.to_float();
      const auto p = testing::random_params(rng, alg.dim());
      const auto m = metric_from_parameters(alg, p);
      const auto ric = ricci(m);
      const double expected = codazzi_defect(m, ric).norm.squared;
      DefectEvaluator ev(alg);
      const double got = ev.objective(p);
      CHECK(got >= 0.0);
      CHECK(std::fabs(got - expected) <= 1e-10 * std::max(1.0, expected));
      const double nab = nabla_norm(m, ric).squared;
      CHECK(std::fabs(ev.parallel_norm_squared() - nab) <= 1e-10 * std::max(1.0, nab));
      const double bn = bracket_norm_squared(m);
      CHECK(std::fabs(ev.bracket_norm_squared() - bn) <= 1e-12 * std::max(1.0, bn));
      CHECK(defect_objective(alg, p) == got);
    }
  }

  TEST_CASE("normalized objective is invariant under rescaling the metric") {
    testing::Rng rng(54);
    for (int t = 0; t < 20; ++t) {
      const auto alg = testing::random_algebra(rng).algebra.to_float();
      const std::size_t n = alg.dim();
      auto p = testing::random_params(rng, n);
      DefectEvaluator ev(alg);
      const double f0 = ev.normalized_objective(p);
      const double raw0 = ev.objective(p);
      const double s = testing::uniform(rng, -0.7, 0.7);  // gram -> e^{2s} gram
      for (std::size_t i = 0; i < n; ++i) p[i] += s;
      for (std::size_t i = n; i < p.size(); ++i) p[i] *= std::exp(s);
      const double f1 = ev.normalized_objective(p);
      const double raw1 = ev.objective(p);
      CHECK(std::fabs(f1 - f0) <= 1e-9 * std::max(1e-12, f0));
      // Codazzi defect of Ric scales like e^{-3s}; its square like e^{-6s}.
      CHECK(std::fabs(raw1 - raw0 * std::exp(-6.0 * s)) <= 1e-9 * std::max(1e-12, raw1));
    }
  }

  TEST_CASE("gradient") {
    testing::Rng rng(55);
    const auto ab = LieAlgebra<double>::abelian(3);
    for (double x : gradient(ab, testing::random_params(rng, 3))) CHECK(x == 0.0);

    const auto g = gradient(fixture("su2_biinvariant"), std::vector<double>(6, 0.0));
    double norm = 0.0;
    for (double x : g) norm += x * x;
    CHECK(std::sqrt(norm) < 1e-6);

    for (int t = 0; t < 20; ++t) {
      const auto alg = testing::random_algebra(rng, 5).algebra.to_float();
      const auto p = testing::random_params(rng, alg.dim(), 0.5);
      std::vector<double> d(p.size());
      double dn = 0.0;
      for (auto& x : d) {
        x = testing::uniform(rng, -1.0, 1.0);
        dn += x * x;
      }
      for (auto& x : d) x /= std::sqrt(dn);
      const auto grad = gradient(alg, p);
      double dir = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) dir += grad[i] * d[i];
      const double t_step = 1e-5;
      auto plus = p, minus = p;
      for (std::size_t i = 0; i < p.size(); ++i) {
        plus[i] += t_step * d[i];
        minus[i] -= t_step * d[i];
      }
      const double secant = (defect_objective(alg, plus) - defect_objective(alg, minus)) / (2.0 * t_step);
      CHECK(std::fabs(dir - secant) <= 1e-4 * std::max({std::fabs(dir), std::fabs(secant), 1e-12}));
    }
  }

  TEST_CASE("minimize: closed-form cases") {
    const auto ab = minimize(LieAlgebra<double>::abelian(4), small_config());
    CHECK(ab.classification == Classification::harmonic_parallel);
    for (const auto& r : ab.restarts) CHECK(r.iterations == 0);

    auto cfg = small_config();
    cfg.max_iters = ProbeConfig{}.max_iters;
    const auto su2 = minimize(fixture("su2_biinvariant"), cfg);
    CHECK(su2.classification == Classification::harmonic_parallel);
    CHECK(su2.defect < 1e-9);
    CHECK(su2.parallel_norm < 1e-6);

    const auto h = minimize(fixture("heisenberg3"), small_config());
    CHECK(h.classification == Classification::nonconverged);
    CHECK(h.defect > 1e-3);

    auto bad = fixture("su2_biinvariant").constants();
    bad[(0 * 3 + 1) * 3 + 0] = 1.0;
    bad[(1 * 3 + 0) * 3 + 0] = -1.0;
    CHECK_THROWS_AS(minimize(LieAlgebra<double>(3, bad), small_config()), std::invalid_argument);
  }

  TEST_CASE("minimize: result invariants") {
    testing::Rng rng(56);
    for (int t = 0; t < 6; ++t) {
      const auto alg = testing::random_solvable(rng, 5).algebra.to_float();
      const auto cfg = small_config(100 + static_cast<std::uint64_t>(t));
      const auto res = minimize(alg, cfg);
      REQUIRE(res.restarts.size() == cfg.restarts);
      std::size_t total = 0;
      for (std::size_t i = 0; i < res.restarts.size(); ++i) {
        const auto& r = res.restarts[i];
        CHECK(r.index == i);
        total += r.iterations;
        CHECK(r.iterations <= cfg.max_iters);
        if (r.stop_reason != "boundary") {
          const bool converged = r.defect < cfg.tol_defect;
          CHECK((r.classification != Classification::nonconverged) == converged);
          if (converged) CHECK((r.classification == Classification::harmonic_parallel) == (r.parallel_norm < cfg.tol_parallel));
        } else {
          CHECK(r.classification == Classification::nonconverged);
        }
        CHECK(r.classification != Classification::harmonic_nonparallel_candidate);
      }
      CHECK(total == res.iterations);
      const auto& best = res.restarts[res.best_restart];
      CHECK(best.params == res.best_params);
      CHECK(best.defect == res.defect);
    }
  }

  TEST_CASE("minimize is deterministic and thread-count independent") {
    const auto alg = fixture("sl2r");
    auto cfg = small_config(99);
    const auto a = minimize(alg, cfg);
    const auto b = minimize(alg, cfg);
    cfg.threads = 3;
    const auto c = minimize(alg, cfg);
    for (const auto* other : {&b, &c}) {
      CHECK(other->best_params == a.best_params);
      CHECK(other->defect == a.defect);
      CHECK(other->best_restart == a.best_restart);
      for (std::size_t i = 0; i < a.restarts.size(); ++i) {
        CHECK(other->restarts[i].params == a.restarts[i].params);
        CHECK(other->restarts[i].iterations == a.restarts[i].iterations);
      }
    }
    cfg.threads = 1;
    cfg.seed = 100;
    CHECK(minimize(alg, cfg).restarts[0].initial_defect != a.restarts[0].initial_defect);
  }

  TEST_CASE("config validation") {
    ProbeConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.restarts = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ProbeConfig{};
    cfg.tol_defect = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ProbeConfig{};
    cfg.tol_parallel = -1.0;
    CHECK_THROWS_AS(minimize(fixture("su2_biinvariant"), cfg), std::invalid_argument);
    CHECK(to_string(Classification::harmonic_nonparallel_candidate) == "harmonic_nonparallel_CANDIDATE");
  }

  TEST_CASE("sweep") {
    const auto empty = sweep({}, small_config());
    CHECK(empty.results.empty());
    CHECK(empty.parallel + empty.candidates + empty.nonconverged == 0);

    const auto h = fixture("heisenberg3");
    const auto s = fixture("su2_biinvariant");
    auto cfg = small_config();
    cfg.max_iters = ProbeConfig{}.max_iters;
    const auto res = sweep({h, s, h}, cfg);
    REQUIRE(res.results.size() == 3);
    CHECK(res.results[0].best_params == res.results[2].best_params);
    CHECK(res.results[0].defect == res.results[2].defect);
    CHECK(res.results[1].classification == Classification::harmonic_parallel);
    CHECK(res.parallel + res.candidates + res.nonconverged == 3);
    CHECK(res.candidates == 0);
  }
}
