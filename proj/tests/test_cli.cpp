#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "gmap/cli.hpp"
#include "gmap/curvature.hpp"
#include "gmap/metric_file.hpp"

using namespace gmap;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path corpus_dir() { return fs::path(GMAP_CORPUS_DIR); }

std::string corpus(const std::string& name) {
  return (corpus_dir() / name).string();
}

fs::path write_temp(const std::string& stem, const std::string& content) {
  fs::path p = fs::temp_directory_path() / ("gmap_test_" + stem + ".metric");
  std::ofstream out(p);
  out << content;
  return p;
}

struct CliCapture {
  int exit_code;
  std::string output;
};

CliCapture run_cli(const std::string& args) {
  std::string cmd = std::string(GMAP_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  while (std::size_t got = fread(buf, 1, sizeof(buf), pipe)) output.append(buf, got);
  int status = pclose(pipe);
  return CliCapture{WEXITSTATUS(status), output};
}

} // namespace

TEST_CASE("load_metric_spec on corpus files") {
  SUBCASE("flat2 is the 2d identity metric") {
    MetricSpecFile spec = load_metric_spec(corpus("flat2.metric"));
    CHECK(spec.name == "flat2");
    CHECK(spec.field.dim() == 2);
    VecN p{0.1, -0.2};
    Mat g = spec.field.value(p.span());
    CHECK((g - Mat::identity(2)).norm_inf() == 0.0);
  }
  SUBCASE("sphere_gnomonic4 loads and is einstein") {
    MetricSpecFile spec = load_metric_spec(corpus("sphere_gnomonic4.metric"));
    CHECK(spec.field.dim() == 4);
    CHECK(spec.field.chart().domain(0).lo == -0.45);
    EinsteinReport rep = einstein_check(spec.field, spec.field.chart().grid(3),
                                        Backend::Analytic, 1e-9);
    CHECK(rep.is_einstein);
    CHECK(std::abs(std::abs(rep.K) - 1.0) < 1e-9);
  }
  SUBCASE("off-diagonal entries default to zero") {
    MetricSpecFile spec = load_metric_spec(corpus("nonflat2.metric"));
    VecN p{0.3, 0.0};
    CHECK(spec.field.value(p.span())(0, 1) == 0.0);
  }
}

TEST_CASE("load_metric_spec error reporting") {
  SUBCASE("duplicate symmetric entry") {
    fs::path p = write_temp("dup",
                            "[chart]\ndim = 2\ncoords = x1, x2\n"
                            "range x1 = -1 1\nrange x2 = -1 1\n"
                            "[metric]\ng11 = \"1\"\ng22 = \"1\"\n"
                            "g12 = \"x1\"\ng21 = \"x1\"\n");
    try {
      load_metric_spec(p);
      FAIL("expected InputError");
    } catch (const InputError& err) {
      std::string what = err.what();
      CHECK(what.find("duplicate symmetric entry") != std::string::npos);
      CHECK(what.find(":10:") != std::string::npos);
    }
    fs::remove(p);
  }
  SUBCASE("dimension mismatch") {
    fs::path p = write_temp("dim",
                            "[chart]\ndim = 3\ncoords = x1, x2\n"
                            "range x1 = -1 1\nrange x2 = -1 1\n"
                            "[metric]\ng11 = \"1\"\ng22 = \"1\"\n");
    CHECK_THROWS_AS(load_metric_spec(p), InputError);
    fs::remove(p);
  }
  SUBCASE("expression errors carry the line") {
    fs::path p = write_temp("expr",
                            "[chart]\ndim = 2\ncoords = x1, x2\n"
                            "range x1 = -1 1\nrange x2 = -1 1\n"
                            "[metric]\ng11 = \"1 + + x1\"\ng22 = \"1\"\n");
    try {
      load_metric_spec(p);
      FAIL("expected InputError");
    } catch (const InputError& err) {
      CHECK(std::string(err.what()).find(":7:") != std::string::npos);
    }
    fs::remove(p);
  }
  SUBCASE("unquoted expressions are rejected") {
    fs::path p = write_temp("quote",
                            "[chart]\ndim = 2\ncoords = x1, x2\n"
                            "range x1 = -1 1\nrange x2 = -1 1\n"
                            "[metric]\ng11 = 1\ng22 = \"1\"\n");
    CHECK_THROWS_AS(load_metric_spec(p), InputError);
    fs::remove(p);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_metric_spec("no_such_file.metric"), InputError);
  }
}

TEST_CASE("run_verify exit codes and classification") {
  RunOptions opts;
  SUBCASE("nontrivial geodesic pair") {
    RunResult r = run_verify(corpus("sphere_gnomonic3.metric"), corpus("flat3.metric"), opts);
    CHECK(r.exit_code == 0);
    CHECK(r.doc["results"]["classification"] == "nontrivial_geodesic");
    CHECK(r.doc["results"]["equivalence_agrees"] == true);
  }
  SUBCASE("identity pair is trivial") {
    RunResult r = run_verify(corpus("flat2.metric"), corpus("flat2.metric"), opts);
    CHECK(r.exit_code == 0);
    CHECK(r.doc["results"]["classification"] == "trivial_affine");
  }
  SUBCASE("negative control") {
    RunResult r = run_verify(corpus("flat2.metric"), corpus("nonflat2.metric"), opts);
    CHECK(r.exit_code == 1);
    CHECK(r.doc["results"]["classification"] == "not_geodesic");
  }
  SUBCASE("incompatible charts error") {
    RunResult r = run_verify(corpus("flat2.metric"), corpus("flat3.metric"), opts);
    CHECK(r.exit_code == 2);
    CHECK(r.doc["status"] == "error");
  }
  SUBCASE("fd backend skips the third equation") {
    RunOptions fd;
    fd.backend = Backend::FiniteDifference;
    RunResult r = run_verify(corpus("sphere_gnomonic2.metric"), corpus("flat2.metric"), fd);
    CHECK(r.exit_code == 0);
    CHECK(r.doc["results"]["skipped"].size() == 1);
  }
}

TEST_CASE("manifest pairs verify to their expected classifications") {
  std::ifstream in(corpus_dir() / "manifest.json");
  REQUIRE(in.good());
  json manifest = json::parse(in);
  RunOptions opts;
  for (const auto& pair : manifest["pairs"]) {
    RunResult r = run_verify(corpus(pair["g"]), corpus(pair["gbar"]), opts);
    INFO("pair ", std::string(pair["g"]), " -> ", std::string(pair["gbar"]));
    CHECK(r.doc["results"]["classification"] == pair["expected"]);
    int expected_code = pair["expected"] == "not_geodesic" ? 1 : 0;
    CHECK(r.exit_code == expected_code);
  }
}

TEST_CASE("run_einstein") {
  RunOptions opts;
  SUBCASE("gnomonic n=4 onto flat") {
    RunResult r = run_einstein(corpus("sphere_gnomonic4.metric"), corpus("flat4.metric"), opts);
    CHECK(r.exit_code == 0);
    CHECK(std::abs(double(r.doc["results"]["Kbar"])) < 1e-9);
    CHECK(r.doc["results"]["target_check"]["is_einstein"] == true);
  }
  SUBCASE("flat onto flat") {
    RunResult r = run_einstein(corpus("flat4.metric"), corpus("flat4.metric"), opts);
    CHECK(r.exit_code == 0);
    CHECK(double(r.doc["results"]["K"]) == 0.0);
    CHECK(double(r.doc["results"]["Kbar"]) == 0.0);
  }
  SUBCASE("non-einstein source exits 2") {
    RunResult r = run_einstein(corpus("noneinstein4.metric"), corpus("flat4.metric"), opts);
    CHECK(r.exit_code == 2);
    CHECK(std::string(r.doc["error"]).find("source not Einstein") != std::string::npos);
  }
}

TEST_CASE("run_solve") {
  SUBCASE("flat metric with an explicit seed") {
    SolveSeed seed;
    seed.a_upper = {1.0, 0.0, 2.0};
    seed.lambda = {0.1, -0.2};
    seed.mu = 0.5;
    SolveOptions opts;
    opts.base = {0.0, 0.0};
    RunResult r = run_solve(corpus("flat2.metric"), seed, opts);
    CHECK(r.exit_code == 0);
    CHECK(r.doc["results"]["trivial"] == false);
    CHECK(double(r.doc["results"]["verification"][0]["max_abs"]) < 1e-6);
    CHECK(r.doc["results"]["classification"] == "nontrivial_geodesic");
  }
  SUBCASE("gnomonic metric seeded from the flat pair") {
    SolveSeed seed;
    seed.from_pair = corpus("flat2.metric");
    SolveOptions opts;
    opts.base = {0.0, 0.0};
    opts.run.grid = 3;
    opts.step = 2e-3;
    RunResult r = run_solve(corpus("sphere_gnomonic2.metric"), seed, opts);
    CHECK(r.exit_code == 0);
    for (const auto& node : r.doc["results"]["nodes"]) {
      CHECK(std::abs(double(node["gbar"][0][0]) - 1.0) < 1e-6);
      CHECK(std::abs(double(node["gbar"][0][1])) < 1e-6);
      CHECK(std::abs(double(node["gbar"][1][1]) - 1.0) < 1e-6);
    }
    CHECK(double(r.doc["results"]["holonomy_probe"]["defect"]) < 1e-6);
  }
  SUBCASE("parallel seed is flagged trivial") {
    SolveSeed seed;
    seed.a_upper = {1.0, 0.0, 1.0};  // g at the origin
    seed.lambda = {0.0, 0.0};
    seed.mu = 0.0;
    SolveOptions opts;
    opts.base = {0.0, 0.0};
    opts.run.grid = 3;
    opts.step = 2e-3;
    RunResult r = run_solve(corpus("sphere_gnomonic2.metric"), seed, opts);
    CHECK(r.exit_code == 0);
    CHECK(r.doc["results"]["trivial"] == true);
    CHECK(r.doc["results"]["classification"] == "trivial_affine");
  }
}

TEST_CASE("run_curvature and run_geodesic_compare") {
  RunOptions opts;
  RunResult c = run_curvature(corpus("sphere_gnomonic2.metric"), opts);
  CHECK(c.exit_code == 0);
  CHECK(double(c.doc["results"]["max_bianchi_residual"]) < 1e-9);
  CHECK(std::abs(std::abs(double(c.doc["results"]["points"][0]["scalar"])) - 2.0) < 1e-9);

  GeodesicCompareOptions gopts;
  gopts.count = 5;
  RunResult g = run_geodesic_compare(corpus("klein_hyperbolic2.metric"),
                                     corpus("flat2.metric"), gopts);
  CHECK(g.exit_code == 0);
  CHECK(double(g.doc["results"]["max_defect"]) < 1e-6);

  RunResult bad = run_geodesic_compare(corpus("flat2.metric"),
                                       corpus("nonflat2.metric"), gopts);
  CHECK(bad.exit_code == 1);
}

TEST_CASE("reports are deterministic apart from the timestamp") {
  RunOptions opts;
  RunResult a = run_verify(corpus("sphere_gnomonic2.metric"), corpus("flat2.metric"), opts);
  RunResult b = run_verify(corpus("sphere_gnomonic2.metric"), corpus("flat2.metric"), opts);
  a.doc["timestamp"] = "";
  b.doc["timestamp"] = "";
  CHECK(a.doc.dump() == b.doc.dump());
}

TEST_CASE("command line binary") {
  SUBCASE("verify exit codes") {
    CliCapture ok = run_cli("verify " + corpus("sphere_gnomonic2.metric") + " " +
                            corpus("flat2.metric"));
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("nontrivial_geodesic") != std::string::npos);

    CliCapture bad = run_cli("verify " + corpus("flat2.metric") + " " +
                             corpus("nonflat2.metric"));
    CHECK(bad.exit_code == 1);

    CliCapture err = run_cli("verify " + corpus("flat2.metric") + " missing.metric");
    CHECK(err.exit_code == 2);
  }
  SUBCASE("einstein subcommand") {
    CliCapture r = run_cli("einstein " + corpus("klein_hyperbolic4.metric") + " " +
                           corpus("flat4.metric"));
    CHECK(r.exit_code == 0);
  }
  SUBCASE("report file output") {
    fs::path out = fs::temp_directory_path() / "gmap_test_report.json";
    CliCapture r = run_cli("verify " + corpus("flat2.metric") + " " +
                           corpus("flat2_scaled4.metric") + " --out " + out.string());
    CHECK(r.exit_code == 0);
    std::ifstream in(out);
    REQUIRE(in.good());
    json doc = json::parse(in);
    CHECK(doc["results"]["classification"] == "trivial_affine");
    fs::remove(out);
  }
  SUBCASE("fd backend flag") {
    CliCapture r = run_cli("verify " + corpus("sphere_gnomonic2.metric") + " " +
                           corpus("flat2.metric") + " --backend fd --grid 3");
    CHECK(r.exit_code == 0);
  }
}
