#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hsfw/cli/commands.hpp"
#include "hsfw/cli/config.hpp"

using namespace hsfw;
using namespace hsfw::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("hsfw_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmallRun = R"(problem:
  family: synthetic
  d: 5
  n: 20
  seed: 3
solvers:
  - algorithm: H1SFW
    max_iterations: 60
    trace_every: 5
  - name: spider
    algorithm: HSPIDERFW
    max_iterations: 31
seeds: [1, 2]
)";

int invoke(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::vector<const char*> argv{"hsfw"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

}  // namespace

TEST_CASE("config parsing: defaults and overrides") {
  const ExperimentConfig c = parse_config(kSmallRun);
  CHECK(c.problem.family == "synthetic");
  CHECK(c.problem.d == 5);
  REQUIRE(c.solvers.size() == 2);
  CHECK(c.solvers[0].name == "h1sfw");
  CHECK(c.solvers[1].name == "spider");
  CHECK(c.solvers[1].config.algorithm == Algorithm::HSPIDERFW);
  CHECK(c.seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(c.probe.n_seeds == 20);

  const ExperimentConfig o = parse_config(R"(problem: {family: synthetic, d: 3, n: 4}
solvers:
  - {algorithm: SHCGM, trace_every: 3}
  - {algorithm: HCGM, name: h}
output: {trace_every: 9}
)");
  CHECK(o.solvers[0].config.trace_every == 3);
  CHECK(o.solvers[1].config.trace_every == 9);
}

TEST_CASE("config errors name the key and the line") {
  const auto message = [](const std::string& yaml) {
    try {
      parse_config(yaml);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  const std::string unknown = message("problem:\n  family: synthetic\n  d: 3\n  n: 4\n  colour: red\nsolvers:\n  - algorithm: H1SFW\n");
  CHECK(unknown.find("colour") != std::string::npos);
  CHECK(unknown.find("line 5") != std::string::npos);

  // a key valid for one family is unknown for another
  const std::string wrong = message("problem:\n  family: kmeans\n  clusters: 2\n  per_cluster: 3\n  d: 4\nsolvers:\n  - algorithm: H1SFW\n");
  CHECK(wrong.find("'d'") != std::string::npos);
  CHECK(wrong.find("line 5") != std::string::npos);

  const std::string alg = message("problem: {family: synthetic, d: 3, n: 4}\nsolvers:\n  - algorithm: ADAM\n");
  CHECK(alg.find("ADAM") != std::string::npos);
  CHECK(alg.find("line 3") != std::string::npos);

  const std::string beta = message("problem: {family: synthetic, d: 3, n: 4}\nsolvers:\n  - algorithm: H1SFW\n    beta0: abc\n");
  CHECK(beta.find("beta0") != std::string::npos);
  CHECK(beta.find("line 4") != std::string::npos);

  CHECK(message("problem: {family: synthetic, d: 3, n: 4}\nsolvers: []\n").find("solvers") != std::string::npos);
  CHECK(message("problem: {family: synthetic, d: 3, n: 4}\nsolvers:\n  - {algorithm: H1SFW}\n  - {algorithm: H1SFW}\n")
            .find("duplicate") != std::string::npos);
  CHECK(message("problem: {family: synthetic, d: 3, n: 4}\nsolvers:\n  - {algorithm: H1SFW, lmo: {tol: 0}}\n")
            .find("tol") != std::string::npos);
  CHECK(message("problem: [1, 2\n").find("line") != std::string::npos);
  CHECK(message("problem: {family: lp}\nsolvers:\n  - {algorithm: H1SFW}\n").find("lp") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  std::string out, err;
  CHECK(invoke({}, &out, &err) == kUsage);
  CHECK(invoke({"frobnicate"}) == kUsage);
  CHECK(invoke({"run"}) == kUsage);
  CHECK(invoke({"--help"}) == kOk);

  CHECK(invoke({"run", (tmp.path / "missing.yaml").string()}, &out, &err) == kConfigError);
  CHECK(err.find("missing.yaml") != std::string::npos);

  const fs::path bad = write(tmp.path / "bad.yaml", "problem:\n  family: synthetic\n  bogus: 1\n");
  CHECK(invoke({"run", bad.string()}, &out, &err) == kConfigError);
  CHECK(err.find("bogus") != std::string::npos);

  const fs::path noedges = write(tmp.path / "g.yaml", "problem: {family: sparsestcut, edges: nowhere.edges}\nsolvers:\n  - {algorithm: H1SFW}\n");
  CHECK(invoke({"make-problem", noedges.string()}, &out, &err) == kConfigError);

  // a solver that fails at run time
  const fs::path probe = write(tmp.path / "p.yaml",
                               "problem: {family: synthetic, d: 3, n: 4}\nsolvers:\n  - {algorithm: H1SFW, mode: Expectation}\n"
                               "probe: {checkpoints: [1, 2], n_seeds: 2}\n");
  CHECK(invoke({"probe-variance", probe.string(), "--out", (tmp.path / "pv").string()}, &out, &err) == kRuntimeError);
  CHECK(err.find("h1sfw") != std::string::npos);
}

TEST_CASE("run writes traces and a manifest; reruns are identical up to timing") {
  TempDir tmp;
  const fs::path cfg = write(tmp.path / "small.yaml", kSmallRun);
  const fs::path a = tmp.path / "a", b = tmp.path / "b";
  std::string out, err;
  REQUIRE(invoke({"run", cfg.string(), "--out", a.string()}, &out, &err) == kOk);
  REQUIRE(invoke({"run", cfg.string(), "--out", b.string()}, &out, &err) == kOk);

  for (const char* name : {"h1sfw_1.csv", "h1sfw_2.csv", "spider_1.csv", "spider_2.csv"}) {
    REQUIRE(fs::exists(a / name));
    std::ifstream ia(a / name), ib(b / name);
    const CsvTable ta = read_trace_csv(ia), tb = read_trace_csv(ib);
    CHECK(ta.header == std::vector<std::string>(kTraceColumns.begin(), kTraceColumns.end()));
    REQUIRE(ta.rows.size() == tb.rows.size());
    const std::size_t wall = ta.column("wall_ms");
    for (std::size_t r = 0; r < ta.rows.size(); ++r)
      for (std::size_t c = 0; c < ta.header.size(); ++c) {
        if (c == wall) continue;
        const double x = ta.rows[r][c], y = tb.rows[r][c];
        REQUIRE((x == y || (std::isnan(x) && std::isnan(y))));
      }
  }
  std::ifstream h(a / "h1sfw_1.csv");
  const CsvTable t = read_trace_csv(h);
  CHECK(t.rows.size() == 13);
  CHECK(t.rows.back()[t.column("global_iter")] == 60);

  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["runs"].size() == 4);
  CHECK(manifest["problem"]["constraint_count"] == 20);
  CHECK(manifest.contains("versions"));

  // different seeds produce different traces
  CHECK(slurp(a / "h1sfw_1.csv") != slurp(a / "h1sfw_2.csv"));
}

TEST_CASE("trace CSV round trip keeps full precision") {
  RunTrace t;
  TraceRow r;
  r.global_iter = 7;
  r.objective = 0.1 + 0.2;
  r.feasibility = 1.0 / 3.0;
  r.subopt = NAN;
  r.est_error = NAN;
  r.sfo_calls = 123456789012ULL;
  t.rows.push_back(r);
  std::stringstream ss;
  write_trace_csv(t, ss);
  const CsvTable back = read_trace_csv(ss);
  REQUIRE(back.rows.size() == 1);
  CHECK(back.rows[0][back.column("objective")] == 0.1 + 0.2);
  CHECK(back.rows[0][back.column("feasibility")] == 1.0 / 3.0);
  CHECK(std::isnan(back.rows[0][back.column("subopt")]));
  CHECK(back.rows[0][back.column("sfo_calls")] == 123456789012.0);
  CHECK_THROWS(back.column("nope"));
}

TEST_CASE("plot renders one polyline per trace and drops non-positive rows") {
  TempDir tmp;
  const fs::path cfg = write(tmp.path / "small.yaml", kSmallRun);
  REQUIRE(invoke({"run", cfg.string(), "--out", tmp.path.string()}) == kOk);
  const fs::path svg = tmp.path / "feas.svg";
  std::string out, err;
  REQUIRE(invoke({"plot", "--metric", "feasibility", "--out", svg.string(), (tmp.path / "h1sfw_1.csv").string(),
               (tmp.path / "spider_1.csv").string()},
              &out, &err) == kOk);
  const std::string text = slurp(svg);
  std::size_t polylines = 0;
  for (std::size_t pos = 0; (pos = text.find("<polyline", pos)) != std::string::npos; ++pos) ++polylines;
  CHECK(polylines == 2);
  CHECK(text.find("h1sfw_1") != std::string::npos);
  CHECK(text.find("spider_1") != std::string::npos);
  CHECK(text.rfind("<svg", 0) == 0);
  // the initial row sits at global_iter 0 and cannot go on a log axis
  CHECK(err.find("dropped 1 row") != std::string::npos);

  CHECK(invoke({"plot", "--metric", "colour", "--out", svg.string(), (tmp.path / "h1sfw_1.csv").string()}, &out, &err) ==
        kConfigError);
  CHECK(invoke({"plot", "--metric", "feasibility", "--out", svg.string(), (tmp.path / "none.csv").string()}, &out, &err) ==
        kRuntimeError);
}

TEST_CASE("svg renderer") {
  const std::string s = render_loglog_svg({{"a", {1, 10, 100}, {1, 0.1, 0.01}}, {"b", {1, 100}, {2, 0.5}}}, "k", "err");
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find(">a<") != std::string::npos);
  CHECK(s.find(">b<") != std::string::npos);
  CHECK_THROWS(render_loglog_svg({{"a", {1, 2}, {0.0, 1.0}}}, "k", "err"));
}

TEST_CASE("make-problem reports sizes without solving") {
  TempDir tmp;
  std::string out, err;
  const fs::path syn = write(tmp.path / "s.yaml", kSmallRun);
  REQUIRE(invoke({"make-problem", syn.string()}, &out, &err) == kOk);
  auto j = nlohmann::json::parse(out);
  CHECK(j["constraint_count"] == 20);
  CHECK(j["equality_rank"] == 15);
  CHECK(j["unique_feasible_point"] == true);

  const fs::path sc = write(tmp.path / "c.yaml", "problem: {family: sparsestcut, nodes: 25, seed: 1}\nsolvers:\n  - {algorithm: H1SFW}\n");
  REQUIRE(invoke({"make-problem", sc.string()}, &out, &err) == kOk);
  j = nlohmann::json::parse(out);
  CHECK(j["triangle_constraints"] == 6900);
  CHECK(j["constraint_count"] == 6901);

  fs::copy_file(fs::path(HSFW_TEST_DATA_DIR) / "k3.edges", tmp.path / "k3.edges");
  const fs::path rel = write(tmp.path / "r.yaml", "problem: {family: sparsestcut, edges: k3.edges}\nsolvers:\n  - {algorithm: H1SFW}\n");
  REQUIRE(invoke({"make-problem", rel.string()}, &out, &err) == kOk);
  CHECK(nlohmann::json::parse(out)["dim"] == 3);

  const fs::path km = write(tmp.path / "k.yaml", "problem: {family: kmeans, clusters: 2, per_cluster: 4}\nsolvers:\n  - {algorithm: H1SFW}\n");
  REQUIRE(invoke({"make-problem", km.string()}, &out, &err) == kOk);
  CHECK(nlohmann::json::parse(out)["constraint_count"] == 8 + 64);
}

TEST_CASE("output directory fallback") {
  ExperimentConfig c = parse_config(kSmallRun, "/some/where/exp1.yaml");
  ::unsetenv("HSFW_OUTPUT_ROOT");
  CHECK(output_directory(c) == fs::path("runs") / "exp1");
  ::setenv("HSFW_OUTPUT_ROOT", "/tmp/roots", 1);
  CHECK(output_directory(c) == fs::path("/tmp/roots") / "exp1");
  c.output.directory = "explicit";
  CHECK(output_directory(c) == fs::path("explicit"));
  ::unsetenv("HSFW_OUTPUT_ROOT");
}

TEST_CASE("probe-variance writes one file per solver") {
  TempDir tmp;
  const fs::path cfg = write(tmp.path / "p.yaml", R"(problem: {family: synthetic, d: 4, n: 20, seed: 1}
solvers:
  - {algorithm: HSPIDERFW, name: sp}
probe: {checkpoints: [2, 3, 8], n_seeds: 3}
)");
  std::string out, err;
  REQUIRE(invoke({"probe-variance", cfg.string(), "--out", tmp.path.string()}, &out, &err) == kOk);
  std::ifstream in(tmp.path / "variance_sp.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "global_iter,mse,envelope");
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 3);
}

TEST_CASE("installed binary responds") {
  const std::string cmd = std::string("\"") + HSFW_CLI_PATH + "\" --help > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
}
