#pragma once

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "grushin/norm_lab.hpp"
#include "grushin/transform.hpp"

namespace grushin {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitData = 3, kExitInvariant = 4 };

// ConfigError -> 2, any other library error or I/O failure -> 3.
int exit_code_for(const std::exception& e);

struct RunConfig {
  GridSpec grid;
  int K = 8;
  std::string pipeline = "identity";

  struct Input {
    std::string source = "test-function";  // or "file"
    std::string path;                      // resolved against the config directory
    TestFunctionSpec function{TestFunctionKind::hermite_random, 6, 3, 1, 1.0, 0, 1};
  } input;

  struct Apply {
    std::string kind = "pipeline";  // or "gfunc"
    int k = 1;
  } apply;

  struct Probe {
    std::string type = "norm";  // norm, rbound, maximal, hormander, equivalence
    double p = 2.0;
    std::size_t trials = 64;
    std::uint64_t seed = 1;
    std::vector<double> lambdas;  // empty: J seeded log-uniform values in [0.1, 10]
    std::size_t J = 8;
    double decay_lo = 0.1;
    double decay_hi = 16.0;
    bool refine = true;
    int n = 1;
    int Nx = 0;
    double delta = 1.0;
    std::size_t family_size = 16;
    std::string symbol = "rational";
    int order = 3;
    double mu_lo = 1.0;
    double mu_hi = 1e6;
    int samples = 400;
  } probe;

  std::vector<int> criteria;  // selftest; empty means all

  std::string output_dir = "out";
  std::string prefix;  // empty: the subcommand name
  std::string base_dir;  // directory of the config file
};

// Schema check against the full key set; ConfigError carries the key path,
// e.g. "$.probe.trials: must be >= 1".
RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

// Runs one subcommand and writes its reports under config.output_dir. All
// computation happens before the first write. Returns the exit code; library
// errors propagate.
int run_pipeline(const std::string& subcommand, const RunConfig& config, std::ostream& log);

}  // namespace grushin
