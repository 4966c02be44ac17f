#pragma once

// Scenario configuration: one JSON document with optional blocks per module.
// Every block rejects keys it does not know.  Natural units (c = hbar = 1,
// lengths in units of the cavity length) everywhere except the gate block,
// whose field names carry their SI unit.

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcelab/cavity.hpp"
#include "dcelab/gate.hpp"
#include "dcelab/otto.hpp"
#include "dcelab/squid.hpp"
#include "dcelab/trajectory.hpp"

namespace dce::cli {

using json = nlohmann::json;

/// Typed reader over one JSON object; tracks which keys were consumed.
class Block {
 public:
  Block(const json* j, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double def) const;
  std::size_t count(const std::string& key, std::size_t def) const;
  std::uint64_t u64(const std::string& key, std::uint64_t def) const;
  bool flag(const std::string& key, bool def) const;
  std::string text(const std::string& key, const std::string& def, const std::vector<std::string>& allowed) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> def) const;
  /// Positive number, or null for infinity.
  double lifetime(const std::string& key, double def) const;
  Block child(const std::string& key) const;
  /// ConfigError on any key not read so far.
  void finish() const;
  const std::string& path() const { return path_; }

 private:
  const json& at(const std::string& key) const;
  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* j_;
  std::string path_;
  mutable std::set<std::string> used_;
};

struct TrajectoryConfig {
  std::string kind = "static";  // static | harmonic | quintic | tabulated
  double R0 = 1.0;
  double eps = 0.01;
  double Omega = 0.0;  // set from Omega or Omega_over_omega1
  double t_start = 0.0, t_end = 1.0;
  double R_to = 1.0;
  std::vector<double> t, R;
  TrajectoryPtr build() const;
};

struct BogoliubovConfig {
  double tol = 1e-9;
  double beta = std::numeric_limits<double>::infinity();  // initial inverse temperature
  std::size_t samples = 0;
};

struct MsaConfig {
  double tau_max = 1.0;
  std::size_t samples = 101;
  double match_tol = 1e-9;
  std::size_t report_modes = 4;
};

struct MooreConfig {
  double t_max = 1.0;
  double temperature = 0.0;
  std::size_t nt = 64, nx = 64;
  double grid_spacing = 0.0;
};

struct SquidConfig {
  SquidCavityParams params;
  std::size_t n_roots = 10;
  bool drives = true;
};

struct OttoConfig {
  CycleSpec spec;
  double shape_a = 0.0, shape_b = 0.0;
  std::string sweep = "cycle";  // cycle | friction | trajectory
  std::vector<double> tau_omega1;  // explicit grid, or built from the range below
  double tw_min = 0.1, tw_max = 1000.0;
  std::size_t per_decade = 10;
  std::vector<double> ratios;  // beta_C / beta_A for cycle sweeps
  std::vector<double> betas;   // friction sweeps
  std::size_t samples = 201;   // trajectory sweep
  std::vector<double> grid() const;
};

struct GateConfig {
  GateParams params;
  OpenRates rates;
  std::vector<double> pz{-1.0, -0.5, 0.0, 0.5, 1.0};
  bool open = true;
  std::size_t steps_per_gate = 20;
  std::size_t shots = 0;
  bool rwa_check = false;
  double rwa_rtol = 1e-8;
};

struct CrosscheckConfig {
  std::size_t n_modes = 40;
  std::size_t compare_modes = 5;
  double beta_factor = 5.0;  // |dbeta| threshold in units of eps^2
  double msa_eps = 1e-3;
  std::vector<std::size_t> msa_modes{1, 8};
  double msa_rel_tol = 0.05;
  std::size_t msa_samples = 5;
  double tol = 1e-10;
};

struct OutputConfig {
  std::string path = ".";
  std::string format = "csv";
};

struct ScenarioConfig {
  json document;  // as parsed, for hashing
  std::optional<CavitySpec> cavity;
  std::optional<TrajectoryConfig> trajectory;
  std::optional<BogoliubovConfig> bogoliubov;
  std::optional<MsaConfig> msa;
  std::optional<MooreConfig> moore;
  std::optional<SquidConfig> squid;
  std::optional<OttoConfig> otto;
  std::optional<GateConfig> gate;
  std::optional<CrosscheckConfig> crosscheck;
  OutputConfig output;
};

/// Parse text; ConfigError carries line/column or the offending field path.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// FNV-1a 64 over the canonical (sorted-key) dump, as 16 hex digits.
std::string config_hash(const json& doc);

}  // namespace dce::cli
