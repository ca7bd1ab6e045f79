#pragma once

// Multi-start search for left-invariant metrics whose Ricci operator is
// Codazzi (harmonic curvature), classifying each hit as Ricci-parallel or not.
//
// Metric parameters: p[0..n) are log-diagonal entries of a lower-triangular
// F, p[n..) its strictly lower entries in row-major order; gram = F F^T.
// defect_objective is the squared frame norm of the Codazzi defect of Ric.
// The search minimizes it divided by |[,]|^6, where |[,]| is the norm of the
// bracket in an orthonormal frame. Reported defect and parallel norms are
// normalized the same way (by |[,]|^3). Iterates are kept at det(gram) = 1
// inside the parameter box; a restart that ends on the box boundary is
// classified nonconverged.

#include "hlie/metric_geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hlie {

struct ProbeConfig {
  std::uint64_t seed = 0;
  std::size_t restarts = 16;
  std::size_t max_iters = 500;
  double tol_defect = 1e-9;    // on the defect norm, not its square
  double tol_parallel = 1e-6;  // on the nabla Ric norm
  double step_init = 1e-2;
  double param_bounds = 4.0;  // clamp on log-diagonal coordinates
  double init_box = 1.0;      // restarts start uniform in [-init_box, init_box]
  double fd_step = 1e-6;
  std::size_t threads = 1;

  /// Throws std::invalid_argument on non-positive tolerances or counts.
  void validate() const;
};

enum class Classification { harmonic_parallel, harmonic_nonparallel_candidate, nonconverged };

std::string to_string(Classification c);

struct RestartSummary {
  std::size_t index = 0;
  double initial_defect = 0.0;
  double defect = 0.0;         // normalized
  double parallel_norm = 0.0;  // normalized
  double raw_defect = 0.0;
  double raw_parallel_norm = 0.0;
  std::size_t iterations = 0;
  std::string stop_reason;
  Classification classification = Classification::nonconverged;
  std::vector<double> params;
};

struct ProbeResult {
  std::vector<double> best_params;
  double defect = 0.0;         // normalized
  double parallel_norm = 0.0;  // normalized
  double raw_defect = 0.0;
  double raw_parallel_norm = 0.0;
  Classification classification = Classification::nonconverged;
  std::size_t iterations = 0;
  std::size_t best_restart = 0;
  std::vector<RestartSummary> restarts;
};

std::size_t parameter_count(std::size_t dim);

/// Throws std::invalid_argument on wrong length or non-finite entries.
MetricLieAlgebra<double> metric_from_parameters(const LieAlgebra<double>& alg, const std::vector<double>& params);
Matrix<double> gram_from_parameters(std::size_t dim, const std::vector<double>& params);
/// Inverse of gram_from_parameters through the Cholesky factor.
std::vector<double> parameters_from_gram(const Matrix<double>& gram);

/// Codazzi defect and nabla Ric of one metric, computed in the orthonormal
/// frame defined by F. Reuses its buffers between calls.
class DefectEvaluator {
 public:
  explicit DefectEvaluator(const LieAlgebra<double>& alg);

  double objective(const std::vector<double>& params);
  /// objective(params) / |[,]|^6, zero for abelian algebras.
  double normalized_objective(const std::vector<double>& params);
  /// At the parameters of the last evaluation: squared frame norm of
  /// nabla Ric, and |[,]|^2.
  double parallel_norm_squared() const;
  double bracket_norm_squared() const;
  std::size_t dim() const { return n_; }

 private:
  void load(const std::vector<double>& params);

  std::size_t n_;
  std::vector<double> c_;
  std::vector<double> f_, finv_;
  std::vector<double> t1_, t2_, cf_, gamma_, ric_, tau_, nabla_;
};

double defect_objective(const LieAlgebra<double>& alg, const std::vector<double>& params);

/// Central differences with step h * max(1, |p_i|).
std::vector<double> gradient(const LieAlgebra<double>& alg, const std::vector<double>& params, double h = 1e-6);

/// The reported restart is the best by classification (candidate, then
/// harmonic_parallel, then nonconverged), ties broken by lowest defect.
/// Throws std::invalid_argument when alg fails the Jacobi identity.
ProbeResult minimize(const LieAlgebra<double>& alg, const ProbeConfig& config);

struct SweepResult {
  std::vector<ProbeResult> results;
  std::size_t parallel = 0;
  std::size_t candidates = 0;
  std::size_t nonconverged = 0;
};

SweepResult sweep(const std::vector<LieAlgebra<double>>& algebras, const ProbeConfig& config);

}  // namespace hlie
