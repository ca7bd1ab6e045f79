#include "hlie/cli.hpp"

#include "hlie/catalog.hpp"
#include "hlie/conjecture_probe.hpp"
#include "hlie/harmonic_structure.hpp"
#include "hlie/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <optional>

namespace hlie {

namespace {

const json& member_or_throw(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return doc.at(key);
}

struct Inputs {
  std::string algebra_path;
  std::string metric_path;
  std::string tensor_path;
  double tol = kDefaultStructureTolerance;
  double tol_eig = kDefaultEigenTolerance;
};

struct Report {
  json results = json::object();
  json tolerances = json::object();
  std::string digest_source;
  bool pass = true;
};

template <Field T>
json norm_json(const FrameNorm<T>& n) {
  json j;
  j["norm"] = n.value();
  if constexpr (is_exact_v<T>) j["norm_squared"] = format_rational(n.squared);
  return j;
}

std::vector<std::size_t> one_based(std::vector<std::size_t> v) {
  for (auto& x : v) ++x;
  return v;
}

json residual_list(const std::vector<ConditionResidual>& list) {
  json out = json::array();
  for (const auto& r : list) out.push_back({{"eigenspaces", one_based(r.eigenspaces)}, {"residual", r.residual}, {"holds", r.holds}});
  return out;
}

template <Field T>
json decomposition_json(const RicciDecomposition<T>& dec) {
  json j;
  j["field"] = is_exact_v<T> ? "rational" : "float";
  json values = json::array(), mult = json::array(), spaces = json::array();
  for (const auto& e : dec.eigenspaces) {
    values.push_back(scalar_to_json(e.eigenvalue));
    mult.push_back(e.multiplicity());
    json basis = json::array();
    for (const auto& v : e.basis) basis.push_back(vector_to_json(v));
    spaces.push_back(basis);
  }
  j["eigenvalues"] = values;
  j["multiplicities"] = mult;
  j["eigenspaces"] = spaces;
  j["appearance_order"] = one_based(dec.appearance_order);
  return j;
}

template <Field T>
json structure_json(const MetricLieAlgebra<T>& m, const RicciDecomposition<T>& dec, double tol) {
  json j = decomposition_json(dec);
  const StructureReport rep = verify_structure(m, dec, tol);
  j["conditions"] = {{"subalgebra", residual_list(rep.subalgebra)},
                     {"skew", residual_list(rep.skew)},
                     {"cross", residual_list(rep.cross)}};
  j["failed_conditions"] = rep.failed_conditions();
  j["pass"] = rep.pass;
  if (rep.pass) {
    if (auto w = nonparallel_witness(m, dec, tol)) {
      j["nonparallel_witness"] = {{"eigenspaces", {w->i + 1, w->j + 1, w->k + 1}},
                                  {"u", vector_to_json(w->u)},
                                  {"v", vector_to_json(w->v)},
                                  {"w", vector_to_json(w->w)},
                                  {"value", scalar_to_json(w->value)}};
    } else {
      j["nonparallel_witness"] = nullptr;
    }
  }
  return j;
}

template <Field T>
Matrix<T> load_gram(const Inputs& in, std::size_t dim, std::string& digest) {
  if (in.metric_path.empty()) return Matrix<T>::identity(dim);
  std::string raw;
  const json doc = read_json_file(in.metric_path, &raw);
  digest += raw;
  return parse_matrix<T>(member_or_throw(doc, "gram"), dim, "gram");
}

template <Field T>
std::optional<Matrix<T>> load_tensor(const Inputs& in, std::size_t dim, std::string& digest) {
  if (in.tensor_path.empty()) return std::nullopt;
  std::string raw;
  const json doc = read_json_file(in.tensor_path, &raw);
  digest += raw;
  return parse_matrix<T>(member_or_throw(doc, "matrix"), dim, "matrix");
}

template <Field T>
MetricLieAlgebra<T> make_metric(const LieAlgebra<T>& alg, Matrix<T> gram) {
  try {
    return MetricLieAlgebra<T>(alg, std::move(gram));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

template <Field T>
SymmetricOperator<T> make_operator(const MetricLieAlgebra<T>& m, const std::optional<Matrix<T>>& tensor) {
  if (!tensor) return ricci(m);
  try {
    return SymmetricOperator<T>(*tensor, m.gram());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

// Rational spectra are tried first; irrational ones fall back to floats.
template <Field T>
json structure_with_fallback(const MetricLieAlgebra<T>& m, const SymmetricOperator<T>& op, const Inputs& in,
                             bool& ok) {
  try {
    try {
      return structure_json(m, decompose(m, op, in.tol_eig), in.tol);
    } catch (const DecompositionError& e) {
      if constexpr (!is_exact_v<T>) throw;
      const MetricLieAlgebra<double> mf = m.to_float();
      const SymmetricOperator<double> opf(to_float(op.matrix()), mf.gram());
      json j = structure_json(mf, decompose(mf, opf, in.tol_eig), in.tol);
      j["note"] = std::string("exact decomposition unavailable (") + e.what() + ")";
      return j;
    }
  } catch (const DecompositionError& e) {
    ok = false;
    return json{{"error", e.what()}};
  }
}

template <Field T>
void check_impl(const LieAlgebra<T>& alg, const Inputs& in, Report& rep) {
  auto& r = rep.results;
  r["field"] = is_exact_v<T> ? "rational" : "float";
  r["dim"] = alg.dim();
  const T jd = jacobi_defect(alg);
  const bool jacobi_ok = is_zero(jd, in.tol);
  r["jacobi"] = {{"defect", scalar_to_json(jd)}, {"holds", jacobi_ok}};
  if (!jacobi_ok) {
    rep.pass = false;
    return;
  }
  const MetricLieAlgebra<T> m = make_metric(alg, load_gram<T>(in, alg.dim(), rep.digest_source));
  const SymmetricOperator<T> op = make_operator(m, load_tensor<T>(in, alg.dim(), rep.digest_source));
  r["operator"] = in.tensor_path.empty() ? "ricci" : "tensor";

  const CodazziDefect<T> cd = codazzi_defect(m, op);
  json codazzi = norm_json(cd.norm);
  codazzi["max_entry"] = scalar_to_json(cd.max_entry);
  codazzi["holds"] = cd.norm.is_zero(in.tol);
  r["codazzi"] = codazzi;

  const FrameNorm<T> nn = nabla_norm(m, op);
  json nabla = norm_json(nn);
  nabla["parallel"] = nn.is_zero(in.tol);
  r["nabla"] = nabla;

  const FrameNorm<T> div = curvature_divergence_norm(m);
  json divergence = norm_json(div);
  divergence["vanishes"] = div.is_zero(in.tol);
  r["curvature_divergence"] = divergence;

  bool structure_ok = true;
  json structure = structure_with_fallback(m, op, in, structure_ok);
  if (structure_ok) structure["consistent_with_codazzi"] = structure["pass"].get<bool>() == cd.norm.is_zero(in.tol);
  r["structure"] = structure;
  rep.pass = cd.norm.is_zero(in.tol) && structure_ok && structure["consistent_with_codazzi"].get<bool>();
}

template <Field T>
void decompose_impl(const LieAlgebra<T>& alg, const Inputs& in, Report& rep) {
  const MetricLieAlgebra<T> m = make_metric(alg, load_gram<T>(in, alg.dim(), rep.digest_source));
  const SymmetricOperator<T> op = make_operator(m, load_tensor<T>(in, alg.dim(), rep.digest_source));
  rep.results["operator"] = in.tensor_path.empty() ? "ricci" : "tensor";
  try {
    try {
      rep.results["decomposition"] = decomposition_json(decompose(m, op, in.tol_eig));
    } catch (const DecompositionError& e) {
      if constexpr (!is_exact_v<T>) throw;
      const MetricLieAlgebra<double> mf = m.to_float();
      const SymmetricOperator<double> opf(to_float(op.matrix()), mf.gram());
      json j = decomposition_json(decompose(mf, opf, in.tol_eig));
      j["note"] = std::string("exact decomposition unavailable (") + e.what() + ")";
      rep.results["decomposition"] = j;
    }
  } catch (const DecompositionError& e) {
    rep.results["decomposition"] = {{"error", e.what()}};
    rep.pass = false;
  }
}

AnyAlgebra load_algebra(const std::string& path, Report& rep) {
  std::string raw;
  const json doc = read_json_file(path, &raw);
  rep.digest_source += raw;
  return parse_algebra(doc);
}

std::vector<Rational> parse_rational_list(const std::string& text, const char* what) {
  std::vector<Rational> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      out.push_back(parse_rational(item));
    } catch (const std::invalid_argument&) {
      throw InputError(std::string(what) + ": cannot parse '" + item + "' as a rational");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void reproduce_impl(const std::string& lambda_text, const std::string& mu_text, Report& rep) {
  const auto lambdas = parse_rational_list(lambda_text, "--lambda");
  if (lambdas.size() != 4) throw InputError("--lambda needs exactly four values");
  const auto mus = parse_rational_list(mu_text, "--mu");
  if (mus.size() != 1) throw InputError("--mu needs exactly one value");
  rep.digest_source = lambda_text + ";" + mu_text;
  const std::array<Rational, 4> l{lambdas[0], lambdas[1], lambdas[2], lambdas[3]};
  std::optional<CodazziExample<Rational>> ex;
  try {
    ex.emplace(essential_codazzi_example(l, mus[0]));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const auto cert = certify(*ex);
  auto& r = rep.results;
  r["lambda"] = vector_to_json(std::vector<Rational>(l.begin(), l.end()));
  r["mu"] = format_rational(mus[0]);
  r["algebra"] = algebra_to_json(ex->metric.algebra());
  r["tensor"] = matrix_to_json(ex->tensor.matrix());
  json ideals = json::array();
  for (bool b : cert.eigenspace_is_ideal) ideals.push_back(b);
  r["guarantees"] = {
      {"jacobi", {{"defect", format_rational(cert.jacobi_defect)}, {"holds", cert.jacobi()}}},
      {"codazzi", {{"norm_squared", format_rational(cert.codazzi_norm_squared)}, {"holds", cert.codazzi()}}},
      {"nonparallel", {{"nabla_norm_squared", format_rational(cert.nabla_norm_squared)}, {"holds", cert.nonparallel()}}},
      {"no_ideal_eigenspace", {{"eigenspace_is_ideal", ideals}, {"holds", cert.no_ideal_eigenspace()}}},
      {"killing_negative_definite", {{"killing_form", matrix_to_json(killing_form(ex->metric.algebra()))},
                                     {"holds", cert.killing_negative_definite}}},
  };
  const auto dec = decompose(ex->metric, ex->tensor);
  if (auto w = nonparallel_witness(ex->metric, dec))
    r["nonparallel_witness"] = {{"eigenspaces", {w->i + 1, w->j + 1, w->k + 1}}, {"value", format_rational(w->value)}};
  rep.pass = cert.all();
}

json probe_json(const ProbeResult& res, std::size_t dim) {
  json j;
  j["classification"] = to_string(res.classification);
  j["defect"] = res.defect;
  j["parallel_norm"] = res.parallel_norm;
  j["raw_defect"] = res.raw_defect;
  j["raw_parallel_norm"] = res.raw_parallel_norm;
  j["best_restart"] = res.best_restart;
  j["best_params"] = res.best_params;
  j["best_gram"] = matrix_to_json(gram_from_parameters(dim, res.best_params));
  j["iterations"] = res.iterations;
  json runs = json::array();
  for (const auto& r : res.restarts)
    runs.push_back({{"index", r.index},
                    {"initial_defect", r.initial_defect},
                    {"defect", r.defect},
                    {"parallel_norm", r.parallel_norm},
                    {"iterations", r.iterations},
                    {"stop_reason", r.stop_reason},
                    {"classification", to_string(r.classification)}});
  j["restarts"] = runs;
  return j;
}

void write_file(const std::string& path, const json& doc) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << doc.dump(2) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Left-invariant geometry, Codazzi tests and harmonic-metric search for metric Lie algebras", "hlie"};
  app.require_subcommand(1);

  Inputs in;
  Report rep;
  std::function<void()> action;

  auto add_inputs = [&](CLI::App* sub, bool with_tol) {
    sub->add_option("algebra", in.algebra_path, "Lie algebra JSON file")->required();
    sub->add_option("--metric", in.metric_path, "Gram matrix JSON file (default: identity)");
    sub->add_option("--tensor", in.tensor_path, "self-adjoint operator JSON file (default: Ricci)");
    sub->add_option("--tol-eig", in.tol_eig, "relative eigenvalue clustering tolerance")->check(CLI::PositiveNumber);
    if (with_tol) sub->add_option("--tol", in.tol, "zero tolerance for float residuals")->check(CLI::PositiveNumber);
  };

  auto* check = app.add_subcommand("check", "Jacobi, Codazzi, nabla and divergence norms, structure report");
  add_inputs(check, true);
  check->callback([&] {
    action = [&] {
      rep.tolerances = {{"tol", in.tol}, {"tol_eig", in.tol_eig}};
      std::visit([&](const auto& alg) { check_impl(alg, in, rep); }, load_algebra(in.algebra_path, rep));
    };
  });

  auto* decomp = app.add_subcommand("decompose", "eigenspace decomposition of Ricci or a given operator");
  add_inputs(decomp, false);
  decomp->callback([&] {
    action = [&] {
      rep.tolerances = {{"tol_eig", in.tol_eig}};
      std::visit([&](const auto& alg) { decompose_impl(alg, in, rep); }, load_algebra(in.algebra_path, rep));
    };
  });

  std::string example, lambda_text, mu_text;
  auto* repro = app.add_subcommand("reproduce", "rebuild and certify the six-dimensional essential Codazzi example");
  repro->add_option("example", example, "example name")
      ->required()
      ->check(CLI::IsMember({"paper-example", "essential-codazzi"}));
  repro->add_option("--lambda", lambda_text, "four distinct rationals l1,l2,l3,l4")->required();
  repro->add_option("--mu", mu_text, "nonzero rational")->required();
  repro->callback([&] { action = [&] { reproduce_impl(lambda_text, mu_text, rep); }; });

  ProbeConfig cfg;
  auto* probe = app.add_subcommand("probe", "search for harmonic metrics by minimizing the Codazzi defect of Ric");
  probe->add_option("algebra", in.algebra_path, "Lie algebra JSON file")->required();
  probe->add_option("--restarts", cfg.restarts, "number of random starts")->check(CLI::PositiveNumber);
  probe->add_option("--seed", cfg.seed, "base seed");
  probe->add_option("--max-iter", cfg.max_iters, "iterations per restart");
  probe->add_option("--tol-defect", cfg.tol_defect, "defect norm counted as harmonic")->check(CLI::PositiveNumber);
  probe->add_option("--tol-parallel", cfg.tol_parallel, "nabla Ric norm counted as parallel")->check(CLI::PositiveNumber);
  probe->add_option("--param-bounds", cfg.param_bounds, "clamp on log-diagonal parameters")->check(CLI::PositiveNumber);
  probe->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  probe->callback([&] {
    action = [&] {
      rep.tolerances = {{"tol_defect", cfg.tol_defect}, {"tol_parallel", cfg.tol_parallel}};
      const AnyAlgebra any = load_algebra(in.algebra_path, rep);
      const LieAlgebra<double> alg = std::visit([](const auto& a) { return LieAlgebra<double>(a.to_float()); }, any);
      if (jacobi_defect(alg) > 1e-10) throw InputError("input fails the Jacobi identity");
      const ProbeResult res = minimize(alg, cfg);
      rep.results = probe_json(res, alg.dim());
      rep.results["config"] = {{"seed", cfg.seed}, {"restarts", cfg.restarts}, {"max_iters", cfg.max_iters},
                               {"param_bounds", cfg.param_bounds}, {"init_box", cfg.init_box}, {"fd_step", cfg.fd_step}};
      rep.pass = res.classification != Classification::harmonic_nonparallel_candidate;
    };
  });

  auto* catalog = app.add_subcommand("catalog", "named fixtures");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "list fixture names");
  list->callback([&] {
    action = [&] {
      json entries = json::array();
      for (const auto& e : catalog_entries()) {
        json j = {{"name", e.name}, {"description", e.description}, {"solvable", e.solvable}};
        if (e.takes_dimension) j["default_n"] = e.default_dimension;
        entries.push_back(j);
      }
      rep.results["entries"] = entries;
      rep.digest_source = "catalog list";
    };
  });
  std::string name, out_path, metric_out;
  std::optional<std::size_t> n;
  auto* build = catalog->add_subcommand("build", "emit a fixture as algebra JSON");
  build->add_option("name", name, "fixture name")->required();
  build->add_option("--n", n, "dimension for families");
  build->add_option("--out", out_path, "write the algebra JSON here instead of standard output");
  build->add_option("--metric-out", metric_out, "also write the metric JSON here");
  build->callback([&] {
    action = [&] {
      std::optional<MetricLieAlgebra<Rational>> m;
      try {
        m.emplace(named(name, n));
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      const json alg = algebra_to_json(m->algebra());
      const json metric = {{"gram", matrix_to_json(m->gram())}};
      if (!metric_out.empty()) write_file(metric_out, metric);
      rep.digest_source = "catalog build " + name + (n ? " " + std::to_string(*n) : "");
      if (out_path.empty()) {
        rep.results = alg;
        rep.results["metric"] = metric;
      } else {
        write_file(out_path, alg);
        rep.results["written"] = out_path;
      }
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    action();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }

  json report;
  report["command"] = args;
  report["input_digest"] = fnv1a_hex(rep.digest_source);
  report["results"] = rep.results;
  report["tolerances"] = rep.tolerances;
  report["pass"] = rep.pass;
  out << report.dump(2) << "\n";
  return rep.pass ? kExitPass : kExitFail;
}

}  // namespace hlie
