#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "antimean/vw.hpp"

namespace antimean::app {

inline constexpr const char* kReportSchema = "antimean-report/1";

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

// Everything a run depends on. A flat JSON file with the same keys can supply
// any field; flags given on the command line win.
struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string groups;
  std::string data_dir;
  std::vector<std::size_t> frame{1, 2, 3, 4, 5};
  double alpha = 0.05;
  std::size_t boot = 0;
  std::uint64_t seed = 0;
  std::string df_mode = "3q";
  double gap_tol = kDefaultGapTol;
  std::string format = "json";
  std::string out;
  std::string null_shape;
  std::string studentize = "resample";
  bool pairwise = false;
  std::string pairwise_method = "two-sample";
  unsigned threads = 1;
  std::vector<std::string> centers;
  std::vector<std::size_t> sizes;
  double kappa = 20.0;
  std::vector<double> spread;
  std::size_t reps = 200;
  std::string kind = "coverage";
};

nlohmann::json to_json(const RunConfig& config);

// Applies the keys of a flat run-config object, skipping those in `keep`
// (flags already given). Unknown keys throw InvalidInput.
void apply_config(const nlohmann::json& object, RunConfig& config, const std::vector<std::string>& keep);

// Report for an already merged configuration. Throws antimean::Error.
nlohmann::json run_command(const RunConfig& config);

// Entry point shared by the executable and the tests; args exclude argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace antimean::app
