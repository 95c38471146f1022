#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monocomp/baselines.hpp"
#include "monocomp/gallery/fracture.hpp"
#include "monocomp/gallery/imaging.hpp"
#include "monocomp/solver.hpp"

namespace monocomp::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key=value configuration: read from an optional file, then overridden
/// by command-line assignments. Unknown keys are rejected up front.
struct RunConfig {
  std::map<std::string, std::string> kv;

  static RunConfig from_file(const std::filesystem::path& path);
  void apply_overrides(const std::vector<std::string>& assignments);
  void validate_keys() const;

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_num(const std::string& key, double fallback) const;
  std::size_t get_count(const std::string& key, std::size_t fallback) const;
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  std::string experiment() const { return get("experiment", "mmatrix"); }
  std::filesystem::path output_dir() const { return get("output", "out"); }
  std::vector<std::string> solvers() const;
  Penalty penalty() const;
  ContinuationSchedule schedule(const ContinuationSchedule& defaults) const;
  LinearSolveOptions linsolve(const LinearSolveOptions& defaults) const;
  GistConfig gist() const;
  FistaConfig fista() const;
  std::uint64_t seed() const { return static_cast<std::uint64_t>(get_num("seed", 1)); }
};

struct BuiltExperiment {
  CompositeProblem problem;
  ContinuationSchedule schedule;
  LinearSolveOptions linsolve;
  std::optional<gallery::Image> truth;  // imaging only
};

/// Instantiates the non-fracture experiments (fracture runs are driven by
/// the quasi-static loop instead of a single problem).
BuiltExperiment build_experiment(const RunConfig& cfg);

int run(const RunConfig& cfg);
int compare(const RunConfig& cfg);
int sweep(const RunConfig& cfg);

}  // namespace monocomp::cli
