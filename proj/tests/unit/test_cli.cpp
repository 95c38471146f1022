#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "monocomp/cli/runner.hpp"
#include "monocomp/io/csv.hpp"
#include "monocomp/io/pgm.hpp"

using namespace monocomp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("monocomp_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

cli::RunConfig small_mmatrix_config(const fs::path& out) {
  cli::RunConfig cfg;
  cfg.kv["experiment"] = "mmatrix";
  cfg.kv["mmatrix_n"] = "8";
  cfg.kv["lambda"] = "0.05";
  cfg.kv["tau"] = "0.5";
  cfg.kv["solvers"] = "monotone,gist";
  cfg.kv["output"] = out.string();
  cfg.kv["seed"] = "3";
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("config parsing, overrides and unknown-key rejection") {
  const fs::path dir = fresh_dir("cfg");
  {
    std::ofstream f(dir / "run.cfg");
    f << "# comment\nexperiment = mmatrix\nlambda=0.1\n\nmmatrix_n = 8 # trailing\n";
  }
  auto cfg = cli::RunConfig::from_file(dir / "run.cfg");
  CHECK(cfg.experiment() == "mmatrix");
  CHECK(cfg.get_num("lambda", 0.0) == 0.1);
  CHECK(cfg.get_count("mmatrix_n", 0) == 8);
  cfg.apply_overrides({"lambda=0.2"});
  CHECK(cfg.get_num("lambda", 0.0) == 0.2);
  CHECK_NOTHROW(cfg.validate_keys());
  cfg.kv["no_such_key"] = "1";
  CHECK_THROWS_AS(cfg.validate_keys(), cli::ConfigError);
  CHECK_THROWS_AS(cfg.apply_overrides({"oops"}), cli::ConfigError);
  cfg.kv.erase("no_such_key");
  cfg.kv["lambda"] = "abc";
  CHECK_THROWS_AS(cfg.get_num("lambda", 0.0), cli::ConfigError);
}

TEST_CASE("invalid config yields usage exit code, not a crash") {
  cli::RunConfig cfg;
  cfg.kv["experiment"] = "no_such_experiment";
  cfg.kv["output"] = fresh_dir("bad").string();
  CHECK(cli::run(cfg) == 2);
  cli::RunConfig cfg2 = small_mmatrix_config(fresh_dir("badsolver"));
  cfg2.kv["solvers"] = "gradient_descent";
  CHECK(cli::run(cfg2) == 2);
  // baselines on a non-identity Lambda problem: rejected as config error
  cli::RunConfig cfg3;
  cfg3.kv["experiment"] = "fracture1d";
  cfg3.kv["solvers"] = "gist";
  cfg3.kv["output"] = fresh_dir("fr_gist").string();
  CHECK(cli::run(cfg3) == 2);
}

TEST_CASE("mmatrix run writes the full artifact set and is byte-deterministic") {
  const fs::path out1 = fresh_dir("det1");
  const fs::path out2 = fresh_dir("det2");
  CHECK(cli::run(small_mmatrix_config(out1)) == 0);
  CHECK(cli::run(small_mmatrix_config(out2)) == 0);
  // the two configs differ only in the output path, so every CSV must be
  // byte-identical (effective_config.txt legitimately differs)
  for (const char* name : {"trace.csv", "summary.csv"}) {
    CAPTURE(name);
    const std::string a = slurp(out1 / name);
    CHECK(!a.empty());
    CHECK(a == slurp(out2 / name));
  }
  CHECK(fs::exists(out1 / "events.jsonl"));
  CHECK(fs::exists(out1 / "timings.txt"));
  CHECK(fs::exists(out1 / "effective_config.txt"));
  // headers
  CHECK(slurp(out1 / "trace.csv").rfind("solver,stage,eps,iter,j_eps,residual\n", 0) == 0);
  CHECK(slurp(out1 / "summary.csv").rfind("solver,final_j,iterations,converged\n", 0) == 0);
  // both solvers produced summary rows
  const std::string sum = slurp(out1 / "summary.csv");
  CHECK(sum.find("monotone,") != std::string::npos);
  CHECK(sum.find("gist,") != std::string::npos);
}

TEST_CASE("compare writes the time-to-match table") {
  const fs::path out = fresh_dir("cmp");
  cli::RunConfig cfg = small_mmatrix_config(out);
  CHECK(cli::compare(cfg) == 0);
  const std::string cmp = slurp(out / "comparison.csv");
  CHECK(cmp.rfind("solver,final_j,iterations,match_iter,match_j\n", 0) == 0);
  CHECK(cmp.find("monotone") != std::string::npos);
  CHECK(cmp.find("gist") != std::string::npos);
}

TEST_CASE("lambda sweep runs points on the pool deterministically") {
  const fs::path out1 = fresh_dir("sw1");
  const fs::path out2 = fresh_dir("sw2");
  for (const fs::path* out : {&out1, &out2}) {
    cli::RunConfig cfg;
    cfg.kv["experiment"] = "mmatrix";
    cfg.kv["mmatrix_n"] = "8";
    cfg.kv["tau"] = "0.5";
    cfg.kv["sweep_kind"] = "lambda";
    cfg.kv["sweep_values"] = "0.001,0.05,0.3";
    cfg.kv["threads"] = out == &out1 ? "1" : "3";
    cfg.kv["output"] = out->string();
    CHECK(cli::sweep(cfg) == 0);
  }
  const std::string s1 = slurp(out1 / "sweep.csv");
  CHECK(s1.rfind("lambda,final_j,fidelity,residual,iterations,support\n", 0) == 0);
  // thread count must not change the bytes (only effective_config differs)
  CHECK(s1 == slurp(out2 / "sweep.csv"));
  CHECK(cli::sweep(small_mmatrix_config(fresh_dir("sw3"))) == 2);  // missing sweep_values
}

TEST_CASE("pgm round trip") {
  gallery::Image img{5, 3, {}};
  img.data = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 0.95, 0.15, 0.35, 0.55};
  const fs::path dir = fresh_dir("pgm");
  io::write_pgm(dir / "a.pgm", img, false);
  io::write_pgm(dir / "b.pgm", img, true);
  for (const char* name : {"a.pgm", "b.pgm"}) {
    const gallery::Image back = io::read_pgm(dir / name);
    REQUIRE(back.width == 5);
    REQUIRE(back.height == 3);
    for (std::size_t i = 0; i < img.data.size(); ++i)
      CHECK(back.data[i] == doctest::Approx(img.data[i]).epsilon(0.01));
  }
}

TEST_CASE("csv writer refuses NaN and leaves an error sidecar") {
  const fs::path dir = fresh_dir("csv");
  bool threw = false;
  try {
    io::CsvWriter w(dir / "x.csv", {"a", "b"});
    w.row({1.0, std::numeric_limits<double>::quiet_NaN()});
  } catch (const std::exception&) {
    threw = true;
  }
  CHECK(threw);
  CHECK(!fs::exists(dir / "x.csv"));
  CHECK(fs::exists(dir / "x.csv.error"));
}

TEST_SUITE_END();
