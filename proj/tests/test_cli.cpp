#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <regex>
#include <sstream>

#include "cli_app.hpp"
#include "rmm/errors.hpp"
#include "rmm/io.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;
using namespace rmm;
using namespace rmm::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rmm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "rmm_cli_test";
    fs::remove_all(d);
    testing::write_synthetic_ett(d / "data" / "ETTh1.csv", 17420, 1);
    return d;
  }();
  return dir;
}

std::string data_dir() { return (workdir() / "data").string(); }
std::string out_dir(const std::string& name) { return (workdir() / name).string(); }

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("config json round trip and precedence") {
  RunConfig c;
  c.dataset = "ILI";
  c.task = "multivariate";
  c.horizons = std::vector<std::size_t>{24, 36};
  c.rho = 0.99;
  const auto j = to_json(c);
  CHECK(to_json(apply_json(j)) == j);
  CHECK(config_sha256(apply_json(j)) == config_sha256(c));
  CHECK_THROWS_AS(apply_json(nlohmann::json{{"lookback", 3}}), ConfigError);
  CHECK_THROWS_AS(apply_json(nlohmann::json{{"tau", "long"}}), ConfigError);
  CHECK(apply_json(nlohmann::json{{"tau", 96}}, c).dataset == "ILI");
}

TEST_CASE("ILI lookback adaptation") {
  RunConfig c;
  const auto ili = resolve_geometry(c, "ILI", 676);
  CHECK(ili.tau == 104);
  CHECK(ili.reservoir_size == 51);
  CHECK(ili.reservoir_size < ili.tau / 2.0);
  const auto short_ili = resolve_geometry(c, "ILI", 150);
  CHECK(short_ili.tau == 75);
  CHECK(short_ili.reservoir_size == 37);
  const auto etth1 = resolve_geometry(c, "ETTh1", 8640);
  CHECK(etth1.tau == 336);
  CHECK(etth1.reservoir_size == 150);
  c.tau = 200;
  CHECK(resolve_geometry(c, "ILI", 676).tau == 200);
}

TEST_CASE("usage and validation errors") {
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({}).code == kConfig);
  CHECK(invoke({"frobnicate"}).code == kConfig);
  CHECK(invoke({"train", "--tau", "abc"}).code == kConfig);
  const auto unknown = invoke({"prepare", "--dataset", "Nope", "--out-dir", out_dir("e1")});
  CHECK(unknown.code == kConfig);
  CHECK(unknown.err.find("unknown dataset") != std::string::npos);

  const auto cfg = workdir() / "empty_h.json";
  io::write_file(cfg, R"({"dataset": "ETTh1", "horizons": []})");
  const auto empty = invoke({"gridsearch", "--config", cfg.string(), "--data-dir", data_dir()});
  CHECK(empty.code == kConfig);
  CHECK(empty.err.find("horizon list is empty") != std::string::npos);

  io::write_file(workdir() / "broken.json", "{");
  CHECK(invoke({"prepare", "--config", (workdir() / "broken.json").string()}).code == kConfig);
  CHECK(invoke({"train", "--dataset", "ETTh1", "--data-dir", data_dir(), "--out-dir", out_dir("e2")}).code == kConfig);
  CHECK(invoke({"gridsearch", "--dataset", "ETTh1", "--rho-grid", "0.5,1.5"}).code == kConfig);
}

TEST_CASE("missing raw file names the expected path and source") {
  const auto r = invoke({"prepare", "--dataset", "ETTm1", "--data-dir", data_dir(), "--out-dir", out_dir("e3")});
  CHECK(r.code == kData);
  CHECK(r.err.find((workdir() / "data" / "ETTm1.csv").string()) != std::string::npos);
  CHECK(r.err.find("https://") != std::string::npos);
}

TEST_CASE("prepare reports shape and reuses the cache") {
  const auto first = invoke({"prepare", "--dataset", "ETTh1", "--data-dir", data_dir(), "--out-dir", out_dir("p1")});
  REQUIRE(first.code == 0);
  CHECK(first.out.find("T=17420 D=7") != std::string::npos);
  const auto container = workdir() / "data" / "cache" / "ETTh1-OT-reject.rmmdata";
  REQUIRE(fs::exists(container));
  const auto stamp = fs::last_write_time(container);
  const auto second = invoke({"prepare", "--dataset", "ETTh1", "--data-dir", data_dir(), "--out-dir", out_dir("p1")});
  CHECK(second.out.find("cache hit") != std::string::npos);
  CHECK(fs::last_write_time(container) == stamp);

  const auto manifest = nlohmann::json::parse(io::read_file(workdir() / "p1" / "manifest.json"));
  CHECK(manifest["command"] == "prepare");
  CHECK(manifest["inputs"][0]["sha256"] == io::sha256_file(workdir() / "data" / "ETTh1.csv"));
  CHECK(manifest["config_sha256"].get<std::string>().size() == 64);

  const auto multi = invoke({"prepare", "--dataset", "ETTh1", "--task", "multivariate", "--data-dir", data_dir(),
                             "--out-dir", out_dir("p2")});
  CHECK(multi.code == 0);
  CHECK(multi.out.find("cached channels 7") != std::string::npos);
}

TEST_CASE("environment variable points at the data directory") {
  ::setenv("RMM_DATA_DIR", data_dir().c_str(), 1);
  const auto r = invoke({"prepare", "--dataset", "ETTh1", "--out-dir", out_dir("env")});
  ::unsetenv("RMM_DATA_DIR");
  CHECK(r.code == 0);
}

TEST_CASE("motif export") {
  const auto r = invoke({"motifs", "--rho", "0.99", "--r-in", "0.1", "--top-k", "6", "--out-dir", out_dir("m1")});
  REQUIRE(r.code == 0);
  const auto csv = io::read_file(workdir() / "m1" / "motifs.csv");
  CHECK(line_count(csv) == 337);
  CHECK(csv.substr(0, csv.find('\n')).find("motif_150") != std::string::npos);
  const auto eig = io::read_file(workdir() / "m1" / "eigenvalues.csv");
  CHECK(line_count(eig) == 151);
  std::istringstream in(eig);
  std::string line;
  std::getline(in, line);
  double prev = INFINITY;
  while (std::getline(in, line)) {
    const double v = std::stod(line.substr(line.find(',') + 1));
    CHECK(v <= prev);
    prev = v;
  }
  const auto svg = io::read_file(workdir() / "m1" / "motifs_top6.svg");
  const std::regex poly(R"(<polyline class="trace")");
  CHECK(std::distance(std::sregex_iterator(svg.begin(), svg.end(), poly), std::sregex_iterator()) == 6);
  CHECK(invoke({"motifs", "--out-dir", out_dir("m2")}).code == kConfig);
}

TEST_CASE("train, evaluate and relevance-ordered motifs") {
  const std::vector<std::string> common{"--dataset", "ETTh1", "--data-dir", data_dir(), "--tau", "48",
                                        "--reservoir-size", "20"};
  auto args = common;
  args.insert(args.begin(), "train");
  for (std::string a : {"--rho", "0.9", "--r-in", "0.1", "--horizon", "24,48", "--out-dir"}) args.push_back(a);
  args.push_back(out_dir("t1"));
  const auto tr = invoke(args);
  REQUIRE(tr.code == 0);
  CHECK(line_count(io::read_file(workdir() / "t1" / "train.csv")) == 3);
  const auto model = workdir() / "t1" / "models" / "ETTh1-univariate-rmm-H24.rmmmodel";
  REQUIRE(fs::exists(model));

  const auto ev = invoke({"evaluate", "--model", model.string(), "--data-dir", data_dir(), "--out-dir", out_dir("t2")});
  REQUIRE(ev.code == 0);
  const auto csv = io::read_file(workdir() / "t2" / "evaluate.csv");
  CHECK(csv.find(",val,") != std::string::npos);
  CHECK(csv.find(",test,") != std::string::npos);

  const auto mo = invoke({"motifs", "--model", model.string(), "--top-k", "6", "--out-dir", out_dir("t3")});
  REQUIRE(mo.code == 0);
  CHECK(mo.out.find("by relevance") != std::string::npos);
  CHECK(line_count(io::read_file(workdir() / "t3" / "relevance.csv")) == 21);
}

TEST_CASE("benchmark rows and determinism") {
  auto run_bench = [&](const std::string& dir) {
    return invoke({"benchmark", "--task", "univariate", "--dataset", "ETTh1", "--data-dir", data_dir(), "--tau", "48",
                   "--reservoir-size", "16", "--jobs", "2", "--out-dir", out_dir(dir)});
  };
  const auto a = run_bench("b1");
  REQUIRE(a.code == 0);
  const auto csv = io::read_file(workdir() / "b1" / "benchmark_univariate.csv");
  CHECK(line_count(csv) == 1 + 5);
  CHECK(line_count(io::read_file(workdir() / "b1" / "benchmark_univariate_validation.csv")) == 1 + 5 * 16);
  CHECK(io::read_file(workdir() / "b1" / "comparison_univariate.txt").find("Informer") != std::string::npos);

  const auto b = run_bench("b2");
  REQUIRE(b.code == 0);
  for (const auto& entry : fs::recursive_directory_iterator(workdir() / "b1")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), workdir() / "b1");
    if (rel == "manifest.json" || rel == "config.json") continue;  // record their own out_dir
    CHECK_MESSAGE(io::read_file(entry.path()) == io::read_file(workdir() / "b2" / rel), rel.string());
  }
  const auto manifest = nlohmann::json::parse(io::read_file(workdir() / "b1" / "manifest.json"));
  for (const auto& o : manifest["outputs"])
    CHECK(io::sha256_file(workdir() / "b1" / o["path"].get<std::string>()) == o["sha256"]);

  CHECK(invoke({"benchmark", "--task", "multivariate", "--dataset", "ECL", "--data-dir", data_dir()}).code == kConfig);
}
