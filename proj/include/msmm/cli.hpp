#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "msmm/errors.hpp"

namespace msmm::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfigExit = 2,
  kDataExit = 3,
  kNumericalExit = 4,
};

int exit_code(ErrorCategory category);

/// Every setting a run can take. Keys of the config file are the field names.
struct RunConfig {
  std::filesystem::path tabulation;
  std::filesystem::path adjacency;
  std::filesystem::path population;
  std::filesystem::path out = "msmm-out";
  std::vector<std::filesystem::path> draws;  // diagnose inputs
  std::filesystem::path basis_cache;

  std::string state_column = "state";
  std::string county_column = "county";
  std::string order_column = "order";
  std::string count_column = "count";
  std::string se_column = "std_err";
  std::string sample_size_column;

  std::string model = "msmm";      // msm | msmm | fh
  std::string algorithm = "dp";    // dp | truncated
  std::string init = "by_cell";    // single | by_cell | singletons
  std::string truth = "table";     // table | two_field (simulate)

  double basis_fraction = 0.5;
  int basis_rank = 0;  // > 0 overrides the fraction
  bool intercept = true;
  bool log_population = true;
  bool cell_dummies = true;

  double sigma2_beta = 100.0;
  double a_eta = 0.1;
  double b_eta = 0.1;
  double a_alpha = 1.0;
  double b_alpha = 4.0;
  double a_sigma2 = 0.1;
  double b_sigma2 = 0.1;
  double alpha_init = 0.25;
  int truncation = 25;

  double gvf_span = 0.75;
  double variance_floor = 1e-6;

  int iterations = 10000;
  int burn_in = 5000;
  int thin = 1;
  int chains = 1;
  std::uint64_t seed = 1;
  bool gelman_rubin = false;
  bool write_draws = false;
  bool draws_latent = false;

  int replicates = 100;
  unsigned threads = 0;

  /// Checks the settings `command` depends on; throws ConfigError.
  void validate(const std::string& command) const;
  /// Sorted key = value lines of every setting; hashed into the manifest.
  std::string canonical() const;
};

int cmd_fit(const RunConfig& config, std::ostream& log);
int cmd_basis(const RunConfig& config, std::ostream& log);
int cmd_simulate(const RunConfig& config, std::ostream& log);
int cmd_diagnose(const RunConfig& config, std::ostream& log);

/// Parses `args` (without the program name), runs the subcommand and maps
/// errors to exit codes. Messages go to `err` prefixed by their category.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace msmm::cli
