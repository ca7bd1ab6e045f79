#include "hlie/conjecture_probe.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>
#include <thread>

namespace hlie {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-20;
constexpr std::size_t kStallWindow = 50;
constexpr double kStallRelative = 1e-14;

void require_params(std::size_t n, const std::vector<double>& params) {
  if (params.size() != parameter_count(n))
    throw std::invalid_argument("expected " + std::to_string(parameter_count(n)) + " metric parameters, got " +
                                std::to_string(params.size()));
  for (double p : params)
    if (!std::isfinite(p)) throw std::invalid_argument("metric parameters must be finite");
}

// Moves params along the scaling orbit to det(gram) = 1, then clamps
// log-diagonal coordinates to [-bounds, bounds] and off-diagonal ones to
// [-e^bounds, e^bounds].
void normalize(std::size_t n, std::vector<double>& p, double bounds) {
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) shift += p[i];
  shift /= static_cast<double>(n);
  const double factor = std::exp(-shift);
  const double off = std::exp(bounds);
  for (std::size_t i = 0; i < n; ++i) p[i] = std::clamp(p[i] - shift, -bounds, bounds);
  for (std::size_t i = n; i < p.size(); ++i) p[i] = std::clamp(p[i] * factor, -off, off);
}

bool on_boundary(std::size_t n, const std::vector<double>& p, double bounds) {
  const double margin = 1e-9 * std::max(1.0, bounds);
  const double off = std::exp(bounds);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double limit = i < n ? bounds : off;
    if (std::fabs(p[i]) >= limit - margin * (i < n ? 1.0 : off)) return true;
  }
  return false;
}

// Removes the component along d/dt of the scaling orbit.
void project_scaling(std::size_t n, const std::vector<double>& p, std::vector<double>& g) {
  double gs = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double s = i < n ? 0.5 : 0.5 * p[i];
    gs += g[i] * s;
    ss += s * s;
  }
  const double k = gs / ss;
  for (std::size_t i = 0; i < p.size(); ++i) g[i] -= k * (i < n ? 0.5 : 0.5 * p[i]);
}

template <class Objective>
void fd_gradient(Objective&& f, const std::vector<double>& p, double h, std::vector<double>& g) {
  std::vector<double> x = p;
  g.assign(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double step = h * std::max(1.0, std::fabs(p[i]));
    x[i] = p[i] + step;
    const double fp = f(x);
    x[i] = p[i] - step;
    const double fm = f(x);
    x[i] = p[i];
    g[i] = (fp - fm) / (2.0 * step);
  }
}

double dot_of(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Classification classify(double defect, double parallel, const ProbeConfig& cfg) {
  if (!(defect < cfg.tol_defect)) return Classification::nonconverged;
  return parallel < cfg.tol_parallel ? Classification::harmonic_parallel
                                     : Classification::harmonic_nonparallel_candidate;
}

RestartSummary run_restart(DefectEvaluator& ev, const ProbeConfig& cfg, std::size_t index) {
  const std::size_t n = ev.dim();
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::vector<double> p(parameter_count(n));
  for (double& x : p) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x = cfg.init_box * (2.0 * u - 1.0);
  }
  normalize(n, p, cfg.param_bounds);

  auto objective = [&ev](const std::vector<double>& x) { return ev.normalized_objective(x); };
  RestartSummary out;
  out.index = index;
  double f = objective(p);
  out.initial_defect = std::sqrt(f);
  std::deque<double> history{f};
  std::vector<double> g, g_prev, p_prev, trial(p.size());
  double bb = 0.0;
  out.stop_reason = "max_iters";

  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    if (std::sqrt(f) < cfg.tol_defect) {
      out.stop_reason = "converged";
      break;
    }
    fd_gradient(objective, p, cfg.fd_step, g);
    project_scaling(n, p, g);
    const double gg = dot_of(g, g);
    if (!(gg > 0.0) || !std::isfinite(gg)) {
      out.stop_reason = "stationary";
      break;
    }
    if (!g_prev.empty()) {
      double sy = 0.0, ss = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double s = p[i] - p_prev[i];
        sy += s * (g[i] - g_prev[i]);
        ss += s * s;
      }
      bb = sy > 0.0 ? ss / sy : 0.0;
    }
    double alpha = bb > 0.0 && std::isfinite(bb) ? bb : cfg.step_init / std::sqrt(gg);
    double ft = f;
    bool accepted = false;
    while (alpha >= kMinStep) {
      for (std::size_t i = 0; i < p.size(); ++i) trial[i] = p[i] - alpha * g[i];
      normalize(n, trial, cfg.param_bounds);
      ft = objective(trial);
      if (std::isfinite(ft) && ft <= f - kArmijo * alpha * gg) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      out.stop_reason = "step_underflow";
      break;
    }
    p_prev = p;
    g_prev = g;
    p = trial;
    f = ft;
    out.iterations = it + 1;
    history.push_back(f);
    if (history.size() > kStallWindow + 1) history.pop_front();
    if (history.size() == kStallWindow + 1 && history.front() > 0.0 &&
        (history.front() - f) / history.front() < kStallRelative) {
      out.stop_reason = "stalled";
      break;
    }
  }
  if (std::sqrt(f) < cfg.tol_defect) out.stop_reason = "converged";

  const double raw = ev.objective(p);
  const double bn = ev.bracket_norm_squared();
  out.raw_defect = std::sqrt(raw);
  out.raw_parallel_norm = std::sqrt(ev.parallel_norm_squared());
  out.defect = bn > 0.0 ? out.raw_defect / (bn * std::sqrt(bn)) : 0.0;
  out.parallel_norm = bn > 0.0 ? out.raw_parallel_norm / (bn * std::sqrt(bn)) : 0.0;
  out.classification = classify(out.defect, out.parallel_norm, cfg);
  if (on_boundary(n, p, cfg.param_bounds)) {
    out.classification = Classification::nonconverged;
    out.stop_reason = "boundary";
  }
  out.params = p;
  return out;
}

}  // namespace

void ProbeConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  if (!(tol_defect > 0) || !(tol_parallel > 0)) throw std::invalid_argument("tolerances must be positive");
  if (!(step_init > 0) || !(fd_step > 0)) throw std::invalid_argument("step sizes must be positive");
  if (!(param_bounds > 0) || !(init_box > 0)) throw std::invalid_argument("parameter boxes must be positive");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::harmonic_parallel:
      return "harmonic_parallel";
    case Classification::harmonic_nonparallel_candidate:
      return "harmonic_nonparallel_CANDIDATE";
    case Classification::nonconverged:
      break;
  }
  return "nonconverged";
}

std::size_t parameter_count(std::size_t dim) { return dim * (dim + 1) / 2; }

Matrix<double> gram_from_parameters(std::size_t dim, const std::vector<double>& params) {
  require_params(dim, params);
  Matrix<double> f(dim, dim);
  std::size_t k = dim;
  for (std::size_t i = 0; i < dim; ++i) {
    f(i, i) = std::exp(params[i]);
    for (std::size_t j = 0; j < i; ++j) f(i, j) = params[k++];
  }
  Matrix<double> g = f * f.transpose();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < i; ++j) g(j, i) = g(i, j);
  return g;
}

MetricLieAlgebra<double> metric_from_parameters(const LieAlgebra<double>& alg, const std::vector<double>& params) {
  return MetricLieAlgebra<double>(alg, gram_from_parameters(alg.dim(), params));
}

std::vector<double> parameters_from_gram(const Matrix<double>& gram) {
  const Matrix<double> l = cholesky(gram);
  const std::size_t n = gram.rows();
  std::vector<double> p(parameter_count(n));
  std::size_t k = n;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = std::log(l(i, i));
    for (std::size_t j = 0; j < i; ++j) p[k++] = l(i, j);
  }
  return p;
}

// ---- DefectEvaluator -------------------------------------------------------

DefectEvaluator::DefectEvaluator(const LieAlgebra<double>& alg) : n_(alg.dim()), c_(alg.constants()) {
  const std::size_t n3 = n_ * n_ * n_;
  f_.assign(n_ * n_, 0.0);
  finv_.assign(n_ * n_, 0.0);
  t1_.assign(n3, 0.0);
  t2_.assign(n3, 0.0);
  cf_.assign(n3, 0.0);
  gamma_.assign(n3, 0.0);
  nabla_.assign(n3, 0.0);
  ric_.assign(n_ * n_, 0.0);
  tau_.assign(n_, 0.0);
}

// Structure constants in the orthonormal basis given by the columns of F^{-T}.
void DefectEvaluator::load(const std::vector<double>& params) {
  const std::size_t n = n_;
  std::fill(f_.begin(), f_.end(), 0.0);
  std::size_t k = n;
  for (std::size_t i = 0; i < n; ++i) {
    f_[i * n + i] = std::exp(params[i]);
    for (std::size_t j = 0; j < i; ++j) f_[i * n + j] = params[k++];
  }
  std::fill(finv_.begin(), finv_.end(), 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    finv_[j * n + j] = 1.0 / f_[j * n + j];
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t q = j; q < i; ++q) s += f_[i * n + q] * finv_[q * n + j];
      finv_[i * n + j] = -s / f_[i * n + i];
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m) {
        double s = 0.0;
        for (std::size_t i = 0; i <= a; ++i) s += finv_[a * n + i] * c_[(i * n + j) * n + m];
        t1_[(a * n + j) * n + m] = s;
      }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t m = 0; m < n; ++m) {
        double s = 0.0;
        for (std::size_t j = 0; j <= b; ++j) s += finv_[b * n + j] * t1_[(a * n + j) * n + m];
        t2_[(a * n + b) * n + m] = s;
      }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t kk = 0; kk < n; ++kk) {
        double s = 0.0;
        for (std::size_t m = kk; m < n; ++m) s += f_[m * n + kk] * t2_[(a * n + b) * n + m];
        cf_[(a * n + b) * n + kk] = s;
      }
}

double DefectEvaluator::objective(const std::vector<double>& params) {
  require_params(n_, params);
  load(params);
  const std::size_t n = n_;
  auto cf = [&](std::size_t a, std::size_t b, std::size_t c) { return cf_[(a * n + b) * n + c]; };
  auto gm = [&](std::size_t a, std::size_t b, std::size_t c) { return gamma_[(a * n + b) * n + c]; };

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        gamma_[(a * n + b) * n + c] = 0.5 * (cf(a, b, c) + cf(c, a, b) + cf(c, b, a));
  for (std::size_t q = 0; q < n; ++q) {
    double s = 0.0;
    for (std::size_t w = 0; w < n; ++w) s += gm(w, q, w);
    tau_[q] = s;
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      double s = 0.0;
      for (std::size_t w = 0; w < n; ++w)
        for (std::size_t p = 0; p < n; ++p) s += cf(a, w, p) * gm(p, b, w) - gm(w, b, p) * gm(a, p, w);
      for (std::size_t q = 0; q < n; ++q) s += gm(a, b, q) * tau_[q];
      ric_[a * n + b] = s;
    }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < a; ++b) ric_[a * n + b] = ric_[b * n + a];

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (std::size_t q = 0; q < n; ++q) s += gm(a, q, c) * ric_[q * n + b] - ric_[c * n + q] * gm(a, b, q);
        nabla_[(a * n + b) * n + c] = s;
      }
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const double d = nabla_[(a * n + b) * n + c] - nabla_[(b * n + a) * n + c];
        total += d * d;
      }
  return total;
}

double DefectEvaluator::normalized_objective(const std::vector<double>& params) {
  const double raw = objective(params);
  const double bn = bracket_norm_squared();
  return bn > 0.0 ? raw / (bn * bn * bn) : 0.0;
}

double DefectEvaluator::bracket_norm_squared() const {
  double total = 0.0;
  for (double x : cf_) total += x * x;
  return total;
}

double DefectEvaluator::parallel_norm_squared() const {
  double total = 0.0;
  for (double x : nabla_) total += x * x;
  return total;
}

// ---- free functions --------------------------------------------------------

double defect_objective(const LieAlgebra<double>& alg, const std::vector<double>& params) {
  DefectEvaluator ev(alg);
  return ev.objective(params);
}

std::vector<double> gradient(const LieAlgebra<double>& alg, const std::vector<double>& params, double h) {
  if (!(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
  DefectEvaluator ev(alg);
  require_params(alg.dim(), params);
  std::vector<double> g;
  fd_gradient([&ev](const std::vector<double>& x) { return ev.objective(x); }, params, h, g);
  return g;
}

ProbeResult minimize(const LieAlgebra<double>& alg, const ProbeConfig& config) {
  config.validate();
  double scale = 1.0;
  for (double c : alg.constants()) scale = std::max(scale, std::fabs(c));
  if (jacobi_defect(alg) > 1e-10 * scale * scale) throw std::invalid_argument("input is not a Lie algebra (Jacobi fails)");

  std::vector<RestartSummary> runs(config.restarts);
  const std::size_t workers = std::min(config.threads, config.restarts);
  if (workers <= 1) {
    DefectEvaluator ev(alg);
    for (std::size_t r = 0; r < config.restarts; ++r) runs[r] = run_restart(ev, config, r);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        DefectEvaluator ev(alg);
        for (std::size_t r = t; r < config.restarts; r += workers) runs[r] = run_restart(ev, config, r);
      });
    for (auto& th : pool) th.join();
  }

  std::size_t best = 0;
  // Candidates first, then converged runs, then the rest; lowest defect within a class.
  auto rank = [](Classification c) {
    switch (c) {
      case Classification::harmonic_nonparallel_candidate:
        return 0;
      case Classification::harmonic_parallel:
        return 1;
      case Classification::nonconverged:
        break;
    }
    return 2;
  };
  auto better = [&rank](const RestartSummary& a, const RestartSummary& b) {
    const int ra = rank(a.classification), rb = rank(b.classification);
    if (ra != rb) return ra < rb;
    return a.defect < b.defect;
  };
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (better(runs[r], runs[best])) best = r;

  ProbeResult out;
  out.best_restart = best;
  out.best_params = runs[best].params;
  out.defect = runs[best].defect;
  out.parallel_norm = runs[best].parallel_norm;
  out.raw_defect = runs[best].raw_defect;
  out.raw_parallel_norm = runs[best].raw_parallel_norm;
  out.classification = runs[best].classification;
  for (const auto& r : runs) out.iterations += r.iterations;
  out.restarts = std::move(runs);
  return out;
}

SweepResult sweep(const std::vector<LieAlgebra<double>>& algebras, const ProbeConfig& config) {
  SweepResult out;
  for (const auto& alg : algebras) {
    out.results.push_back(minimize(alg, config));
    switch (out.results.back().classification) {
      case Classification::harmonic_parallel:
        ++out.parallel;
        break;
      case Classification::harmonic_nonparallel_candidate:
        ++out.candidates;
        break;
      case Classification::nonconverged:
        ++out.nonconverged;
        break;
    }
  }
  return out;
}

}  // namespace hlie
