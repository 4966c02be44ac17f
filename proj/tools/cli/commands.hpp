#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "emit.hpp"

namespace dce::cli {

inline const std::vector<std::string> kSubcommands{"spectrum", "bogoliubov", "msa", "moore", "otto", "gate", "crosscheck"};

struct RunResult {
  std::vector<Table> tables;
  json tolerances = json::object();
  std::vector<std::string> messages;  // printed to stdout
  bool checks_passed = true;          // crosscheck only
};

/// Runs one subcommand on a parsed config.  Throws ConfigError for missing
/// blocks and PhysicsError from the solvers.
RunResult run_subcommand(const std::string& sub, const ScenarioConfig& cfg, unsigned threads, std::uint64_t seed);

struct CrosscheckRow {
  std::string check;
  std::size_t n_modes;
  double value, threshold;
  bool pass;
};
/// ODE vs Moore-overlap beta (elementwise max) and ODE vs slow-time |beta_11|
/// (max relative deviation) for a harmonic trajectory.
std::vector<CrosscheckRow> crosscheck(const TrajectoryConfig& traj, const CrosscheckConfig& cc);

/// Full command line: parse flags, run, write tables and manifests.
/// Returns the process exit code (0 ok, 2 config error, 3 physics error).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dce::cli
