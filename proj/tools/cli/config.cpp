#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dcelab/errors.hpp"

namespace dce::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string type_name(const json& v) { return v.type_name(); }

}  // namespace

Block::Block(const json* j, std::string path) : j_(j), path_(std::move(path)) {
  if (j_ && !j_->is_object()) throw ConfigError((path_.empty() ? std::string("config") : path_) + ": expected an object");
}

bool Block::has(const std::string& key) const { return j_ && j_->contains(key); }

const json& Block::at(const std::string& key) const {
  used_.insert(key);
  return j_->at(key);
}

double Block::number(const std::string& key) const {
  if (!has(key)) throw ConfigError(where(key) + ": required field missing");
  const auto& v = at(key);
  if (!v.is_number()) throw ConfigError(where(key) + ": expected a number, got " + type_name(v));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where(key) + ": must be finite");
  return x;
}

double Block::number(const std::string& key, double def) const { return has(key) ? number(key) : def; }

std::size_t Block::count(const std::string& key, std::size_t def) const {
  if (!has(key)) return def;
  const auto& v = at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(where(key) + ": expected a non-negative integer");
  return v.get<std::size_t>();
}

std::uint64_t Block::u64(const std::string& key, std::uint64_t def) const {
  if (!has(key)) return def;
  const auto& v = at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ConfigError(where(key) + ": expected an unsigned integer");
  return v.get<std::uint64_t>();
}

bool Block::flag(const std::string& key, bool def) const {
  if (!has(key)) return def;
  const auto& v = at(key);
  if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true or false");
  return v.get<bool>();
}

std::string Block::text(const std::string& key, const std::string& def, const std::vector<std::string>& allowed) const {
  if (!has(key)) return def;
  const auto& v = at(key);
  if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
  const auto s = v.get<std::string>();
  if (!allowed.empty()) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == s;
    if (!ok) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError(where(key) + ": '" + s + "' is not one of " + list);
    }
  }
  return s;
}

std::vector<double> Block::numbers(const std::string& key, std::vector<double> def) const {
  if (!has(key)) return def;
  const auto& v = at(key);
  if (!v.is_array()) throw ConfigError(where(key) + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(where(key) + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

double Block::lifetime(const std::string& key, double def) const {
  if (has(key) && j_->at(key).is_null()) {
    used_.insert(key);
    return std::numeric_limits<double>::infinity();
  }
  const double v = number(key, def);
  if (!(v > 0.0)) throw ConfigError(where(key) + ": must be positive (null switches the channel off)");
  return v;
}

Block Block::child(const std::string& key) const {
  if (!has(key)) return Block(nullptr, where(key));
  return Block(&at(key), where(key));
}

void Block::finish() const {
  if (!j_) return;
  for (auto it = j_->begin(); it != j_->end(); ++it)
    if (!used_.count(it.key())) throw ConfigError(where(it.key()) + ": unknown key");
}

// ---------------------------------------------------------------- blocks

namespace {

CavitySpec parse_cavity(const Block& b) {
  CavitySpec c;
  c.length = b.number("length", 1.0);
  c.n_modes = b.count("n_modes", 20);
  const auto bc = b.text("boundary", "dirichlet", {"dirichlet"});
  (void)bc;
  b.finish();
  try {
    c.validate();
  } catch (const PhysicsError& e) {
    throw ConfigError(std::string("cavity: ") + e.what());
  }
  return c;
}

TrajectoryConfig parse_trajectory(const Block& b, double L0) {
  TrajectoryConfig t;
  t.kind = b.text("kind", "static", {"static", "harmonic", "quintic", "tabulated"});
  t.R0 = b.number("R0", L0);
  t.t_start = b.number("t_start", 0.0);
  if (t.kind != "tabulated") t.t_end = b.number("t_end");
  if (t.kind == "harmonic") {
    t.eps = b.number("eps", 0.01);
    if (b.has("Omega") && b.has("Omega_over_omega1"))
      throw ConfigError(b.path() + ": give either Omega or Omega_over_omega1");
    t.Omega = b.has("Omega") ? b.number("Omega") : b.number("Omega_over_omega1", 2.0) * kPi / t.R0;
  }
  if (t.kind == "quintic") t.R_to = b.number("R_to");
  if (t.kind == "tabulated") {
    t.t = b.numbers("t", {});
    t.R = b.numbers("R", {});
    if (t.t.size() < 2 || t.t.size() != t.R.size())
      throw ConfigError(b.path() + ": t and R need the same length (>= 2)");
  }
  b.finish();
  if (t.kind != "tabulated" && !(t.t_end >= t.t_start)) throw ConfigError(b.path() + ".t_end: must not precede t_start");
  return t;
}

BogoliubovConfig parse_bogoliubov(const Block& b) {
  BogoliubovConfig c;
  c.tol = b.number("tol", c.tol);
  if (b.has("beta")) c.beta = b.number("beta");
  c.samples = b.count("samples", 0);
  b.finish();
  if (!(c.tol > 0.0)) throw ConfigError("bogoliubov.tol: must be positive");
  if (!(c.beta > 0.0)) throw ConfigError("bogoliubov.beta: must be positive");
  return c;
}

MsaConfig parse_msa(const Block& b) {
  MsaConfig c;
  c.tau_max = b.number("tau_max");
  c.samples = b.count("samples", c.samples);
  c.match_tol = b.number("match_tol", c.match_tol);
  c.report_modes = b.count("report_modes", c.report_modes);
  b.finish();
  if (!(c.tau_max > 0.0)) throw ConfigError("msa.tau_max: must be positive");
  if (c.samples < 2) throw ConfigError("msa.samples: need at least 2");
  return c;
}

MooreConfig parse_moore(const Block& b) {
  MooreConfig c;
  c.t_max = b.number("t_max");
  c.temperature = b.number("temperature", 0.0);
  c.nt = b.count("nt", c.nt);
  c.nx = b.count("nx", c.nx);
  c.grid_spacing = b.number("grid_spacing", 0.0);
  b.finish();
  if (!(c.t_max > 0.0)) throw ConfigError("moore.t_max: must be positive");
  if (c.temperature < 0.0) throw ConfigError("moore.temperature: must be non-negative");
  if (c.nt < 1 || c.nx < 2) throw ConfigError("moore: nt >= 1 and nx >= 2 required");
  return c;
}

SquidConfig parse_squid(const Block& b) {
  SquidConfig c;
  c.params.chi0 = b.number("chi0", 0.0);
  c.params.b0L = b.number("b0L", 0.0);
  c.params.b0R = b.number("b0R", 0.0);
  c.params.d = b.number("d", 1.0);
  c.n_roots = b.count("n_roots", c.n_roots);
  c.drives = b.flag("drives", true);
  b.finish();
  if (c.n_roots < 1) throw ConfigError("squid.n_roots: must be at least 1");
  return c;
}

OttoConfig parse_otto(const Block& b) {
  OttoConfig c;
  auto& s = c.spec;
  s.L0 = b.number("L0", s.L0);
  s.eps = b.number("eps", s.eps);
  // bath temperatures are given as beta * omega_1 with omega_1 = pi / L0
  const double w1 = kPi / s.L0;
  s.beta_A = b.number("beta_A_omega1", 2.0) / w1;
  s.beta_C = b.number("beta_C_omega1", 0.2) / w1;
  s.n_modes = b.count("n_modes", 0);
  s.mode_tol = b.number("mode_tol", s.mode_tol);
  s.max_modes = b.count("max_modes", s.max_modes);
  s.include_casimir = b.flag("include_casimir", true);
  s.thermalization_time = b.number("thermalization_time", 0.0);
  c.sweep = b.text("sweep", "cycle", {"cycle", "friction", "trajectory"});
  c.tau_omega1 = b.numbers("tau_omega1", {});
  c.tw_min = b.number("tau_omega1_min", c.tw_min);
  c.tw_max = b.number("tau_omega1_max", c.tw_max);
  c.per_decade = b.count("points_per_decade", c.per_decade);
  c.ratios = b.numbers("ratios", {});
  c.betas = b.numbers("betas_omega1", {});
  for (double& x : c.betas) x /= w1;
  c.samples = b.count("samples", c.samples);
  const auto sh = b.child("shape");
  c.shape_a = sh.number("a", 0.0);
  c.shape_b = sh.number("b", 0.0);
  sh.finish();
  b.finish();
  s.shape = (c.shape_a == 0.0 && c.shape_b == 0.0) ? quintic_shape() : polynomial_shape(c.shape_a, c.shape_b);
  try {
    s.validate();
    check_admissible(s.shape);
  } catch (const PhysicsError& e) {
    throw ConfigError(std::string("otto: ") + e.what());
  }
  if (!(c.tw_min > 0.0) || !(c.tw_max >= c.tw_min)) throw ConfigError("otto: need 0 < tau_omega1_min <= tau_omega1_max");
  if (c.per_decade < 1) throw ConfigError("otto.points_per_decade: must be at least 1");
  for (double r : c.ratios)
    if (!(r > 0.0)) throw ConfigError("otto.ratios: entries must be positive");
  for (double x : c.betas)
    if (!(x > 0.0)) throw ConfigError("otto.betas_omega1: entries must be positive");
  for (double x : c.tau_omega1)
    if (!(x > 0.0)) throw ConfigError("otto.tau_omega1: entries must be positive");
  if (c.samples < 2) throw ConfigError("otto.samples: need at least 2");
  return c;
}

GateConfig parse_gate(const Block& b) {
  GateConfig c;
  auto& p = c.params;
  p.omega = 2 * kPi * b.number("f_resonator_hz", 6e9);
  p.omega_q = 2 * kPi * b.number("f_qubit_hz", 4e9);
  p.chi = 2 * kPi * b.number("chi_hz", 8e6);
  p.g_d = b.number("g_d_per_s", 5e7);
  p.eps_d = b.number("eps_d", 0.15);
  p.theta = b.number("theta_rad", 0.0);
  p.t_gate = b.number("t_gate_s", 200e-9);
  p.n_max = b.count("n_max", 0);
  c.rates.tau_q = b.lifetime("tau_q_s", 200e-6);
  c.rates.tau_r = b.lifetime("tau_r_s", 200e-6);
  c.rates.tau_phi = b.lifetime("tau_phi_s", 10e-6);
  c.rates.temperature = b.number("temperature_k", 0.06);
  c.pz = b.numbers("pz", c.pz);
  c.open = b.flag("open", true);
  c.steps_per_gate = b.count("steps_per_gate", c.steps_per_gate);
  c.shots = b.count("shots", 0);
  c.rwa_check = b.flag("rwa_check", false);
  c.rwa_rtol = b.number("rwa_rtol", c.rwa_rtol);
  b.finish();
  try {
    p.validate();
    c.rates.validate();
  } catch (const PhysicsError& e) {
    throw ConfigError(std::string("gate: ") + e.what());
  }
  for (double z : c.pz)
    if (!(std::abs(z) <= 1.0)) throw ConfigError("gate.pz: entries must lie in [-1, 1]");
  if (c.steps_per_gate < 1) throw ConfigError("gate.steps_per_gate: must be at least 1");
  return c;
}

CrosscheckConfig parse_crosscheck(const Block& b) {
  CrosscheckConfig c;
  c.n_modes = b.count("n_modes", c.n_modes);
  c.compare_modes = b.count("compare_modes", c.compare_modes);
  c.beta_factor = b.number("beta_factor", c.beta_factor);
  c.msa_eps = b.number("msa_eps", c.msa_eps);
  const auto modes = b.numbers("msa_modes", {1.0, 8.0});
  c.msa_modes.clear();
  for (double m : modes) {
    if (!(m >= 1.0) || m != std::floor(m)) throw ConfigError("crosscheck.msa_modes: entries must be positive integers");
    c.msa_modes.push_back(static_cast<std::size_t>(m));
  }
  c.msa_rel_tol = b.number("msa_rel_tol", c.msa_rel_tol);
  c.msa_samples = b.count("msa_samples", c.msa_samples);
  c.tol = b.number("tol", c.tol);
  b.finish();
  if (c.compare_modes < 1 || c.compare_modes > c.n_modes)
    throw ConfigError("crosscheck.compare_modes: must be between 1 and n_modes");
  if (!(c.msa_eps > 0.0) || !(c.msa_eps < 1.0)) throw ConfigError("crosscheck.msa_eps: must lie in (0, 1)");
  if (c.msa_samples < 2) throw ConfigError("crosscheck.msa_samples: need at least 2");
  return c;
}

}  // namespace

TrajectoryPtr TrajectoryConfig::build() const {
  try {
    if (kind == "static") return make_static(R0, t_start, t_end);
    if (kind == "harmonic") return make_harmonic(R0, eps, Omega, t_start, t_end);
    if (kind == "quintic") return make_quintic_stroke(R0, R_to, t_start, t_end);
    return make_tabulated(t, R);
  } catch (const PhysicsError& e) {
    throw ConfigError(std::string("trajectory: ") + e.what());
  }
}

std::vector<double> OttoConfig::grid() const {
  if (!tau_omega1.empty()) return tau_omega1;
  std::vector<double> g;
  const double l0 = std::log10(tw_min), l1 = std::log10(tw_max);
  const auto n = static_cast<std::size_t>(std::llround((l1 - l0) * static_cast<double>(per_decade)));
  for (std::size_t i = 0; i <= n; ++i)
    g.push_back(std::pow(10.0, l0 + (n ? (l1 - l0) * static_cast<double>(i) / static_cast<double>(n) : 0.0)));
  return g;
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig sc;
  try {
    sc.document = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                      e.what());
  }
  const json& d = sc.document;
  Block top(&d, "");
  const double L0 = top.has("cavity") && d["cavity"].is_object() && d["cavity"].contains("length") &&
                            d["cavity"]["length"].is_number()
                        ? d["cavity"]["length"].get<double>()
                        : 1.0;
  if (top.has("cavity")) sc.cavity = parse_cavity(top.child("cavity"));
  if (top.has("trajectory")) sc.trajectory = parse_trajectory(top.child("trajectory"), L0);
  if (top.has("bogoliubov")) sc.bogoliubov = parse_bogoliubov(top.child("bogoliubov"));
  if (top.has("msa")) sc.msa = parse_msa(top.child("msa"));
  if (top.has("moore")) sc.moore = parse_moore(top.child("moore"));
  if (top.has("squid")) sc.squid = parse_squid(top.child("squid"));
  if (top.has("otto")) sc.otto = parse_otto(top.child("otto"));
  if (top.has("gate")) sc.gate = parse_gate(top.child("gate"));
  if (top.has("crosscheck")) sc.crosscheck = parse_crosscheck(top.child("crosscheck"));
  if (top.has("output")) {
    const auto o = top.child("output");
    sc.output.path = o.text("path", ".", {});
    sc.output.format = o.text("format", "csv", {"csv", "json"});
    o.finish();
  }
  top.finish();
  return sc;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_hash(const json& doc) {
  const std::string s = doc.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dce::cli
