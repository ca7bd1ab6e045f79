#include <doctest.h>

#include "hlie/catalog.hpp"
#include "hlie/cli.hpp"
#include "hlie/json_io.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hlie;
using Q = Rational;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  json report;
  std::string raw;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  Outcome o{code, json(), out.str(), err.str()};
  if (!o.raw.empty() && o.raw.front() == '{') o.report = json::parse(o.raw);
  return o;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("hlie_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write(const std::string& name, const json& j) const { return write(name, j.dump()); }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string fixture_file(const TempDir& dir, const std::string& name) {
  return dir.write(name + ".json", algebra_to_json(named(name).algebra()));
}

}  // namespace

TEST_SUITE("json_io") {
  TEST_CASE("algebra documents round trip") {
    for (const auto& e : catalog_entries()) {
      const auto alg = named(e.name).algebra();
      const json j = algebra_to_json(alg);
      const auto back = parse_algebra(j);
      REQUIRE(std::holds_alternative<LieAlgebra<Q>>(back));
      CHECK(std::get<LieAlgebra<Q>>(back) == alg);
      CHECK(algebra_to_json(std::get<LieAlgebra<Q>>(back)) == j);
    }
    const json f = json::parse(R"({"dim": 3, "field": "float",
        "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "value": 0.5}]}]})");
    const auto fa = parse_algebra(f);
    REQUIRE(std::holds_alternative<LieAlgebra<double>>(fa));
    CHECK(std::get<LieAlgebra<double>>(fa).constant(1, 0, 2) == -0.5);
    const json q = json::parse(R"({"dim": 2, "field": "rational",
        "brackets": [{"i": 1, "j": 2, "terms": [{"k": 2, "value": "-3/6"}]}]})");
    CHECK(std::get<LieAlgebra<Q>>(parse_algebra(q)).constant(0, 1, 1) == Q(-1, 2));
  }

  TEST_CASE("malformed algebra documents are rejected") {
    const char* bad[] = {
        R"({"field": "rational", "brackets": []})",
        R"({"dim": 0, "field": "rational", "brackets": []})",
        R"({"dim": 2, "field": "complex", "brackets": []})",
        R"({"dim": 2, "field": "rational", "brackets": [{"i": 2, "j": 1, "terms": [{"k": 1, "value": "1"}]}]})",
        R"({"dim": 2, "field": "rational", "brackets": [{"i": 1, "j": 1, "terms": []}]})",
        R"({"dim": 2, "field": "rational", "brackets": [{"i": 1, "j": 3, "terms": []}]})",
        R"({"dim": 2, "field": "rational", "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "value": "1"}]}]})",
        R"({"dim": 2, "field": "rational", "brackets": [{"i": 1, "j": 2, "terms": [{"k": 1, "value": "x"}]}]})",
        R"({"dim": 2, "field": "rational", "brackets": [{"i": 1, "j": 2, "terms": [{"k": 1, "value": 0.5}]}]})",
        R"({"dim": 2, "field": "rational", "brackets": [{"i": 1, "j": 2, "terms": []}, {"i": 1, "j": 2, "terms": []}]})",
        R"({"dim": 2, "field": "rational", "brackets": [{"i": 1, "j": 2, "terms": [{"k": 1, "value": "1"}, {"k": 1, "value": "2"}]}]})",
    };
    for (const char* text : bad) {
      CAPTURE(text);
      CHECK_THROWS(parse_algebra(json::parse(text)));
    }
  }

  TEST_CASE("matrices and scalars") {
    const json rows = json::parse(R"([["1", "1/2"], ["1/2", "2"]])");
    const auto m = parse_matrix<Q>(rows, 2, "gram");
    CHECK(m(0, 1) == Q(1, 2));
    CHECK(matrix_to_json(m) == json::parse(R"([["1", "1/2"], ["1/2", "2"]])"));
    CHECK_THROWS_AS(parse_matrix<Q>(rows, 3, "gram"), InputError);
    CHECK_THROWS_AS(parse_matrix<double>(json::parse("[[1, 2], [3]]"), 2, "gram"), InputError);
    CHECK(scalar_to_json(Q(-7, 3)) == "-7/3");
    CHECK(parse_scalar<Q>(json(4)) == Q(4));
  }

  TEST_CASE("digest") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
  }
}

TEST_SUITE("cli") {
  TEST_CASE("check: abelian passes with zero norms") {
    TempDir dir;
    const auto path = dir.write("abelian4.json", algebra_to_json(named("abelian", 4).algebra()));
    const auto o = invoke({"check", path});
    CHECK(o.code == kExitPass);
    const auto& r = o.report.at("results");
    CHECK(o.report.at("pass") == true);
    CHECK(r.at("codazzi").at("norm_squared") == "0");
    CHECK(r.at("nabla").at("norm_squared") == "0");
    CHECK(r.at("curvature_divergence").at("norm_squared") == "0");
    CHECK(r.at("jacobi").at("holds") == true);
  }

  TEST_CASE("check: heisenberg3 fails on condition 1") {
    TempDir dir;
    const auto o = invoke({"check", fixture_file(dir, "heisenberg3")});
    CHECK(o.code == kExitFail);
    const auto& r = o.report.at("results");
    CHECK(o.report.at("pass") == false);
    CHECK(r.at("codazzi").at("holds") == false);
    CHECK(r.at("codazzi").at("norm_squared") == "3");
    CHECK(r.at("structure").at("failed_conditions") == json::array({1}));
    CHECK(r.at("structure").at("consistent_with_codazzi") == true);
  }

  TEST_CASE("check: metric, tensor and float inputs") {
    TempDir dir;
    const auto alg = fixture_file(dir, "su2_plus_abelian3");
    const auto metric = dir.write("g.json", json::parse(R"({"gram": [["1","0","0","0","0","0"],["0","1","0","0","0","0"],
        ["0","0","1","0","0","0"],["0","0","0","2","0","0"],["0","0","0","0","1","1/2"],["0","0","0","0","1/2","1"]]})"));
    const auto o = invoke({"check", alg, "--metric", metric});
    CHECK(o.code == kExitPass);
    CHECK(o.report.at("results").at("nabla").at("parallel") == true);

    const auto ex = essential_codazzi_example<Q>({Q(0), Q(1), Q(3), Q(7)}, Q(1));
    const auto a6 = dir.write("ex.json", algebra_to_json(ex.metric.algebra()));
    const auto t6 = dir.write("t.json", json{{"matrix", matrix_to_json(ex.tensor.matrix())}});
    const auto ot = invoke({"check", a6, "--tensor", t6});
    CHECK(ot.code == kExitPass);
    CHECK(ot.report.at("results").at("operator") == "tensor");
    CHECK(ot.report.at("results").at("nabla").at("parallel") == false);

    const auto f = dir.write("f.json", json::parse(R"({"dim": 3, "field": "float",
        "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "value": 1.0}]}, {"i": 2, "j": 3, "terms": [{"k": 1, "value": 1.0}]},
                     {"i": 1, "j": 3, "terms": [{"k": 2, "value": -1.0}]}]})"));
    const auto of = invoke({"check", f, "--tol", "1e-9"});
    CHECK(of.code == kExitPass);
    CHECK(of.report.at("results").at("field") == "float");
    CHECK(of.report.at("tolerances").contains("tol"));
  }

  TEST_CASE("check: non-Lie input fails, malformed input is an input error") {
    TempDir dir;
    const auto bad = dir.write("bad.json", json::parse(R"({"dim": 3, "field": "rational",
        "brackets": [{"i": 1, "j": 2, "terms": [{"k": 1, "value": "1"}, {"k": 3, "value": "1"}]},
                     {"i": 2, "j": 3, "terms": [{"k": 1, "value": "1"}]}, {"i": 1, "j": 3, "terms": [{"k": 2, "value": "-1"}]}]})"));
    const auto o = invoke({"check", bad});
    CHECK(o.code == kExitFail);
    CHECK(o.report.at("results").at("jacobi").at("holds") == false);

    CHECK(invoke({"check", dir.path("missing.json")}).code == kExitInput);
    CHECK(invoke({"check", dir.write("junk.json", std::string("{not json"))}).code == kExitInput);
    CHECK(invoke({"check", dir.write("shape.json", std::string(R"({"dim": "two"})"))}).code == kExitInput);
    CHECK(invoke({"check", dir.write("bare.json", std::string(R"({"dim": 2})"))}).code == kExitPass);
    const auto alg = fixture_file(dir, "heisenberg3");
    CHECK(invoke({"check", alg, "--metric", dir.write("neg.json", std::string(R"({"gram": [["1","0","0"],["0","-1","0"],["0","0","1"]]})"))}).code ==
          kExitInput);
    CHECK(invoke({"check", alg, "--tensor", dir.write("asym.json", std::string(R"({"matrix": [["0","1","0"],["0","0","0"],["0","0","0"]]})"))}).code ==
          kExitInput);
    CHECK(invoke({"frobnicate"}).code == kExitInput);
    CHECK(invoke({}).code == kExitInput);
  }

  TEST_CASE("decompose") {
    TempDir dir;
    const auto o = invoke({"decompose", fixture_file(dir, "heisenberg3")});
    CHECK(o.code == kExitPass);
    const auto& d = o.report.at("results").at("decomposition");
    CHECK(d.at("eigenvalues") == json::array({"-1/2", "1/2"}));
    CHECK(d.at("multiplicities") == json::array({2, 1}));
  }

  TEST_CASE("reproduce") {
    const auto o = invoke({"reproduce", "paper-example", "--lambda", "0,1,3,7", "--mu", "1"});
    CHECK(o.code == kExitPass);
    const auto& g = o.report.at("results").at("guarantees");
    for (const char* key : {"jacobi", "codazzi", "nonparallel", "no_ideal_eigenspace", "killing_negative_definite"}) {
      CAPTURE(key);
      CHECK(g.at(key).at("holds") == true);
    }
    CHECK(o.report.at("results").at("nonparallel_witness").at("eigenspaces") == json::array({1, 2, 4}));
    CHECK(invoke({"reproduce", "essential-codazzi", "--lambda", "1/2,-1,3,2/3", "--mu", "-5/7"}).code == kExitPass);
    CHECK(invoke({"reproduce", "paper-example", "--lambda", "0,1,1,7", "--mu", "1"}).code == kExitInput);
    CHECK(invoke({"reproduce", "paper-example", "--lambda", "0,1,3", "--mu", "1"}).code == kExitInput);
    CHECK(invoke({"reproduce", "paper-example", "--lambda", "0,1,3,7", "--mu", "0"}).code == kExitInput);
    CHECK(invoke({"reproduce", "other", "--lambda", "0,1,3,7", "--mu", "1"}).code == kExitInput);
  }

  TEST_CASE("reports are byte-identical across runs") {
    TempDir dir;
    const auto alg = fixture_file(dir, "su2_plus_su2");
    CHECK(invoke({"check", alg}).raw == invoke({"check", alg}).raw);
    const auto h = fixture_file(dir, "heisenberg3");
    const std::vector<std::string> args{"probe", h, "--restarts", "3", "--max-iter", "40", "--seed", "5"};
    CHECK(invoke(args).raw == invoke(args).raw);
  }

  TEST_CASE("probe") {
    TempDir dir;
    const auto o = invoke({"probe", fixture_file(dir, "su2_biinvariant"), "--restarts", "4", "--seed", "7"});
    CHECK(o.code == kExitPass);
    const auto& r = o.report.at("results");
    CHECK(r.at("classification") == "harmonic_parallel");
    CHECK(r.at("restarts").size() == 4);
    CHECK(r.at("best_gram").size() == 3);
    CHECK(o.report.at("tolerances").at("tol_defect") == 1e-9);

    const auto h = invoke({"probe", fixture_file(dir, "heisenberg3"), "--restarts", "2", "--max-iter", "30"});
    CHECK(h.code == kExitPass);
    CHECK(h.report.at("results").at("classification") == "nonconverged");

    CHECK(invoke({"probe", fixture_file(dir, "heisenberg3"), "--restarts", "0"}).code == kExitInput);
    CHECK(invoke({"probe", fixture_file(dir, "heisenberg3"), "--tol-defect", "-1"}).code == kExitInput);
  }

  TEST_CASE("catalog") {
    const auto list = invoke({"catalog", "list"});
    CHECK(list.code == kExitPass);
    CHECK(list.report.at("results").at("entries").size() == catalog_entries().size());

    const auto b = invoke({"catalog", "build", "hyperbolic_solvable", "--n", "4"});
    CHECK(b.code == kExitPass);
    const auto back = parse_algebra(b.report.at("results"));
    CHECK(std::get<LieAlgebra<Q>>(back) == named("hyperbolic_solvable", 4).algebra());

    TempDir dir;
    const auto out = dir.path("a.json");
    const auto metric = dir.path("g.json");
    CHECK(invoke({"catalog", "build", "sl2r", "--out", out, "--metric-out", metric}).code == kExitPass);
    CHECK(std::get<LieAlgebra<Q>>(parse_algebra(read_json_file(out))) == named("sl2r").algebra());
    CHECK(read_json_file(metric).at("gram").size() == 3);
    CHECK(invoke({"catalog", "build", "nope"}).code == kExitInput);
    CHECK(invoke({"catalog", "build", "su2_biinvariant", "--n", "5"}).code == kExitInput);
  }
}
