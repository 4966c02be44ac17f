#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "dcelab/bogoliubov.hpp"
#include "dcelab/errors.hpp"
#include "dcelab/moore.hpp"
#include "dcelab/msa.hpp"
#include "dcelab/numerics.hpp"

#ifndef DCELAB_VERSION
#define DCELAB_VERSION "0.0.0"
#endif

namespace dce::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

long long ll(std::size_t v) { return static_cast<long long>(v); }

template <class T>
const T& need(const std::optional<T>& block, const char* name, const std::string& sub) {
  if (!block) throw ConfigError(sub + ": config needs a '" + name + "' block");
  return *block;
}

const TrajectoryConfig& need_harmonic(const ScenarioConfig& cfg, const std::string& sub) {
  const auto& t = need(cfg.trajectory, "trajectory", sub);
  if (t.kind != "harmonic") throw ConfigError(sub + ": trajectory.kind must be 'harmonic'");
  return t;
}

// ---------------------------------------------------------------- spectrum

RunResult run_spectrum(const ScenarioConfig& cfg) {
  const auto& sq = need(cfg.squid, "squid", "spectrum");
  RunResult res;
  const auto roots = solve_spectrum(sq.params, sq.n_roots);
  Table t{"spectrum", {"n", "kd", "k", "phi", "residual_right", "residual_left"}, {}};
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto r = spectrum_residual(sq.params, roots[i]);
    t.add({ll(i + 1), roots[i].kd, roots[i].kd / sq.params.d, roots[i].phi, r.right, r.left});
  }
  res.tables.push_back(std::move(t));
  if (sq.drives) {
    Table d{"drives", {"Omega", "kind", "n", "m"}, {}};
    for (const auto& f : resonance_frequencies(roots, sq.params.d)) {
      const char* kind = f.kind == DriveKind::twice ? "twice" : f.kind == DriveKind::sum ? "sum" : "difference";
      d.add({f.Omega, std::string(kind), ll(f.n), ll(f.m)});
    }
    res.tables.push_back(std::move(d));
  }
  res.tolerances = {{"residual", "normalized |sin(angle mismatch)|"}, {"drive_dedupe_rel_tol", 1e-9}};
  res.messages.push_back(std::string("equidistant: ") + (is_equidistant(roots) ? "yes" : "no"));
  return res;
}

// ---------------------------------------------------------------- bogoliubov

RunResult run_bogoliubov(const ScenarioConfig& cfg) {
  const auto& cav = need(cfg.cavity, "cavity", "bogoliubov");
  const auto& tc = need(cfg.trajectory, "trajectory", "bogoliubov");
  const BogoliubovConfig bc = cfg.bogoliubov.value_or(BogoliubovConfig{});
  const auto traj = tc.build();
  const auto bog = solve_bogoliubov(cav, *traj, bc.tol);
  const auto R1 = traj->R(traj->t_end());
  const auto w_in = dirichlet_spectrum(traj->R(traj->t_start()), cav.n_modes);
  const auto w_out = dirichlet_spectrum(R1, cav.n_modes);
  Eigen::VectorXd N_in(static_cast<Eigen::Index>(cav.n_modes));
  for (Eigen::Index k = 0; k < N_in.size(); ++k)
    N_in[k] = std::isinf(bc.beta) ? 0.0 : thermal_occupation(bc.beta, w_in.k[k]);
  const auto N_out = photon_spectrum(bog, N_in);
  const auto sym = symplectic_rows(bog);
  RunResult res;
  Table t{"bogoliubov", {"n", "omega_out", "symplectic", "beta_norm", "N_in", "N_out"}, {}};
  for (Eigen::Index n = 0; n < N_in.size(); ++n)
    t.add({ll(static_cast<std::size_t>(n) + 1), w_out.k[n], sym[n], bog.beta.row(n).norm(), N_in[n], N_out[n]});
  res.tables.push_back(std::move(t));
  if (bc.samples > 0) {
    std::vector<double> times;
    for (std::size_t i = 0; i < bc.samples; ++i)
      times.push_back(i + 1 == bc.samples ? traj->t_end()
                                          : traj->t_start() + (traj->t_end() - traj->t_start()) * static_cast<double>(i) /
                                                                  static_cast<double>(bc.samples - 1));
    const auto ser = photon_series(cav, *traj, times, bc.tol);
    std::vector<std::string> cols{"t"};
    for (std::size_t k = 1; k <= cav.n_modes; ++k) cols.push_back("N_" + std::to_string(k));
    Table p{"photons", cols, {}};
    for (std::size_t i = 0; i < ser.t.size(); ++i) {
      std::vector<Cell> row{ser.t[i]};
      for (Eigen::Index k = 0; k < ser.N[i].size(); ++k) row.push_back(ser.N[i][k]);
      p.add(std::move(row));
    }
    res.tables.push_back(std::move(p));
  }
  res.tolerances = {{"rtol", bc.tol}, {"atol", bc.tol * 1e-3}, {"n_modes", cav.n_modes}};
  return res;
}

// ---------------------------------------------------------------- msa

RunResult run_msa(const ScenarioConfig& cfg) {
  const auto& cav = need(cfg.cavity, "cavity", "msa");
  const auto& tc = need_harmonic(cfg, "msa");
  const auto& mc = need(cfg.msa, "msa", "msa");
  const auto basis = dirichlet_spectrum(tc.R0, cav.n_modes);
  SlowOptions opt;
  opt.samples = mc.samples;
  opt.match_tol = mc.match_tol;
  const auto s = evolve_slow(basis, tc.Omega, tc.R0, tc.eps, mc.tau_max, opt);
  const auto nrep = static_cast<Eigen::Index>(std::min(mc.report_modes, cav.n_modes));
  RunResult res;
  Table t{"msa", {"tau", "t", "n", "k", "alpha_re", "alpha_im", "beta_re", "beta_im", "beta_abs"}, {}};
  for (std::size_t i = 0; i < s.tau.size(); ++i)
    for (Eigen::Index n = 0; n < nrep; ++n)
      for (Eigen::Index k = 0; k < nrep; ++k) {
        const auto a = s.alpha[i](n, k), b = s.beta[i](n, k);
        t.add({s.tau[i], s.t[i], ll(static_cast<std::size_t>(n) + 1), ll(static_cast<std::size_t>(k) + 1), a.real(),
               a.imag(), b.real(), b.imag(), std::abs(b)});
      }
  res.tables.push_back(std::move(t));
  Table r{"resonances", {"kind", "k", "j", "target"}, {}};
  for (const auto& it : classify_resonances(basis, tc.Omega, mc.match_tol).items)
    r.add({to_string(it.kind), ll(it.k), ll(it.j), it.target});
  res.tables.push_back(std::move(r));
  res.tolerances = {{"match_tol", mc.match_tol}};
  return res;
}

// ---------------------------------------------------------------- moore

RunResult run_moore(const ScenarioConfig& cfg, unsigned threads) {
  const auto& tc = need(cfg.trajectory, "trajectory", "moore");
  const auto& mc = need(cfg.moore, "moore", "moore");
  MooreOptions opt;
  opt.grid_spacing = mc.grid_spacing;
  const auto mf = solve_moore(tc.build(), mc.t_max, opt);
  const auto g = energy_density_grid(mf, mc.temperature, mc.nt, mc.nx, threads);
  RunResult res;
  Table t{"energy_density", {"t", "x", "T_tt"}, {}};
  for (std::size_t i = 0; i < g.t.size(); ++i) t.add({g.t[i], g.x[i], g.T_tt[i]});
  res.tables.push_back(std::move(t));
  Table f{"moore_F", {"z", "F"}, {}};
  for (std::size_t i = 0; i < mf.grid().size(); ++i) f.add({mf.grid()[i], mf.values()[i]});
  res.tables.push_back(std::move(f));
  const double spacing = mc.grid_spacing > 0.0 ? mc.grid_spacing : mf.R0() / 512.0;
  res.tolerances = {{"grid_spacing", spacing}, {"defining_equation_residual", mf.residual()}};
  return res;
}

// ---------------------------------------------------------------- otto

RunResult run_otto(const ScenarioConfig& cfg, unsigned threads) {
  const auto& oc = need(cfg.otto, "otto", "otto");
  RunResult res;
  const double w1 = oc.spec.omega1();
  const auto grid = oc.grid();
  if (oc.sweep == "trajectory") {
    Table t{"trajectory", {"s", "delta", "delta_d1", "delta_d2", "delta_d3", "L_over_L0"}, {}};
    for (std::size_t i = 0; i < oc.samples; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(oc.samples - 1);
      const auto d = oc.spec.shape(s);
      t.add({s, d.value, d.d1, d.d2, d.d3, 1.0 - oc.spec.eps * d.value});
    }
    res.tables.push_back(std::move(t));
  } else if (oc.sweep == "friction") {
    const auto betas = oc.betas.empty() ? std::vector<double>{oc.spec.beta_A} : oc.betas;
    std::vector<std::pair<double, double>> jobs;
    for (double b : betas)
      for (double tw : grid) jobs.emplace_back(b, tw);
    std::vector<FrictionResult> out(jobs.size());
    numerics::parallel_for(jobs.size(), threads, [&](std::size_t i) {
      out[i] = friction_energy_detail(oc.spec, jobs[i].first, jobs[i].second / w1);
    });
    Table t{"friction", {"beta_omega1", "beta", "tau_omega1", "tau", "E_F", "E_F_over_eps2", "n_modes"}, {}};
    for (std::size_t i = 0; i < jobs.size(); ++i)
      t.add({jobs[i].first * w1, jobs[i].first, jobs[i].second, jobs[i].second / w1, out[i].value,
             out[i].value / (oc.spec.eps * oc.spec.eps), ll(out[i].n_modes)});
    res.tables.push_back(std::move(t));
  } else {
    const auto ratios = oc.ratios.empty() ? std::vector<double>{oc.spec.beta_C / oc.spec.beta_A} : oc.ratios;
    std::vector<std::pair<double, double>> jobs;
    for (double r : ratios)
      for (double tw : grid) jobs.emplace_back(r, tw);
    std::vector<CycleResult> out(jobs.size());
    numerics::parallel_for(jobs.size(), threads, [&](std::size_t i) {
      CycleSpec s = oc.spec;
      s.beta_C = jobs[i].first * s.beta_A;
      s.tau = jobs[i].second / w1;
      out[i] = nonadiabatic_cycle(s);
    });
    Table t{"cycle",
            {"ratio", "beta_C_omega1", "tau_omega1", "tau", "W", "Q", "eta", "eta_otto", "eta_first_order", "E_F_A", "E_F_C",
             "P", "engine", "subluminal", "n_modes"},
            {}};
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const auto& c = out[i];
      t.add({jobs[i].first, jobs[i].first * oc.spec.beta_A * w1, jobs[i].second, jobs[i].second / w1, c.W, c.Q, c.eta,
             c.eta_otto, c.eta_first_order, c.E_F_A, c.E_F_C, c.P, ll(c.engine), ll(c.subluminal), ll(c.n_modes)});
    }
    res.tables.push_back(std::move(t));
  }
  res.tolerances = {{"mode_tol", oc.spec.mode_tol}, {"max_modes", oc.spec.max_modes}, {"n_modes", oc.spec.n_modes}};
  return res;
}

// ---------------------------------------------------------------- gate

RunResult run_gate(const ScenarioConfig& cfg, unsigned threads, std::uint64_t seed) {
  const auto& gc = need(cfg.gate, "gate", "gate");
  const auto& p = gc.params;
  const double r = p.squeeze_r(), phi = p.phi();
  const std::size_t n = p.fock_dim();
  struct Row {
    double a, b, p_plus, f_cf, f_sim, f_open, purity, sampled;
  };
  std::vector<Row> rows(gc.pz.size());
  numerics::parallel_for(gc.pz.size(), threads, [&](std::size_t i) {
    const double pz = gc.pz[i];
    const double a = std::sqrt(0.5 * (1.0 + pz)), b = std::sqrt(std::max(0.0, 0.5 * (1.0 - pz)));
    const double an = a / std::hypot(a, b), bn = b / std::hypot(a, b);
    Row& row = rows[i];
    row.a = an;
    row.b = bn;
    const auto sim = simulated_fidelity(an, bn, r, p.theta, phi, n);
    row.p_plus = sim.p_plus;
    row.f_cf = average_fidelity(r, pz);
    row.f_sim = sim.average;
    if (gc.open) {
      const auto o = open_protocol_fidelity(an, bn, p, gc.rates, gc.steps_per_gate);
      row.f_open = o.average;
      row.purity = o.purity;
    }
    if (gc.shots > 0) {
      const auto m = measure_qubit(encoding_protocol(an, bn, r, p.theta, phi, n));
      row.sampled = static_cast<double>(sample_qubit(m, gc.shots, seed + i)) / static_cast<double>(gc.shots);
    }
  });
  RunResult res;
  std::vector<std::string> cols{"pz", "alpha", "beta", "p_plus", "f_closed_form", "f_simulated"};
  if (gc.open) {
    cols.push_back("f_open");
    cols.push_back("purity");
  }
  if (gc.shots > 0) cols.push_back("p_plus_sampled");
  Table t{"gate", cols, {}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& w = rows[i];
    std::vector<Cell> c{gc.pz[i], w.a, w.b, w.p_plus, w.f_cf, w.f_sim};
    if (gc.open) {
      c.push_back(w.f_open);
      c.push_back(w.purity);
    }
    if (gc.shots > 0) c.push_back(w.sampled);
    t.add(std::move(c));
  }
  res.tables.push_back(std::move(t));
  if (gc.rwa_check) {
    const auto b = rwa_branch_fidelities(p, gc.rwa_rtol);
    Table w{"rwa", {"branch", "fidelity"}, {}};
    w.add({std::string("squeeze_vacuum"), b.squeeze_branch});
    w.add({std::string("rotation_vacuum"), b.rotation_branch});
    w.add({std::string("rotation_coherent"), b.rotation_coherent});
    res.tables.push_back(std::move(w));
  }
  res.tolerances = {{"n_max", n},
                    {"leakage", squeeze_leakage(r, n)},
                    {"steps_per_gate", gc.steps_per_gate},
                    {"rwa_rtol", gc.rwa_rtol},
                    {"r", r},
                    {"phi", phi}};
  if (!p.dispersive_ok()) res.messages.push_back("warning: |Delta| < 5 g_d eps_d, the dispersive gate is unreliable");
  return res;
}

// ---------------------------------------------------------------- crosscheck

RunResult run_crosscheck(const ScenarioConfig& cfg) {
  const auto& tc = need_harmonic(cfg, "crosscheck");
  const CrosscheckConfig cc = cfg.crosscheck.value_or(CrosscheckConfig{});
  RunResult res;
  Table t{"crosscheck", {"check", "n_modes", "value", "threshold", "pass"}, {}};
  for (const auto& row : crosscheck(tc, cc)) {
    t.add({row.check, ll(row.n_modes), row.value, row.threshold, ll(row.pass)});
    std::ostringstream line;
    line << row.check << " (N=" << row.n_modes << "): " << format_double(row.value) << " vs "
         << format_double(row.threshold) << (row.pass ? " ok" : " FAIL");
    res.messages.push_back(line.str());
    res.checks_passed = res.checks_passed && row.pass;
  }
  res.tables.push_back(std::move(t));
  res.tolerances = {{"ode_rtol", cc.tol}, {"beta_factor", cc.beta_factor}, {"msa_rel_tol", cc.msa_rel_tol}};
  return res;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<CrosscheckRow> crosscheck(const TrajectoryConfig& tc, const CrosscheckConfig& cc) {
  if (tc.kind != "harmonic") throw ConfigError("crosscheck: trajectory.kind must be 'harmonic'");
  std::vector<CrosscheckRow> rows;
  const auto traj = tc.build();
  {
    CavitySpec spec;
    spec.length = tc.R0;
    spec.n_modes = cc.n_modes;
    const auto ode = solve_bogoliubov(spec, *traj, cc.tol);
    const auto mf = solve_moore(traj, tc.t_end + tc.R0);
    const auto mo = bogoliubov_from_moore(mf, tc.t_end, cc.compare_modes);
    const auto m = static_cast<Eigen::Index>(cc.compare_modes);
    const double d = (ode.beta.topLeftCorner(m, m) - mo.beta).cwiseAbs().maxCoeff();
    const double thr = cc.beta_factor * tc.eps * tc.eps;
    rows.push_back({"ode_vs_moore_beta_max_abs", cc.n_modes, d, thr, d <= thr});
  }
  for (std::size_t N : cc.msa_modes) {
    const auto basis = dirichlet_spectrum(tc.R0, N);
    SlowOptions opt;
    opt.samples = cc.msa_samples;
    const double tau_max = 1.0 / tc.Omega;  // eps t Omega <= 1
    const auto s = evolve_slow(basis, tc.Omega, tc.R0, cc.msa_eps, tau_max, opt);
    CavitySpec spec;
    spec.length = tc.R0;
    spec.n_modes = N;
    double worst = 0.0;
    for (std::size_t i = 1; i < s.tau.size(); ++i) {
      const auto h = make_harmonic(tc.R0, cc.msa_eps, tc.Omega, 0.0, s.t[i]);
      const double ode = std::abs(solve_bogoliubov(spec, *h, cc.tol).beta(0, 0));
      const double msa = std::abs(s.beta[i](0, 0));
      if (!(msa > 0.0)) throw PhysicsError("crosscheck: slow-time |beta_11| vanishes; the drive is not resonant with mode 1");
      worst = std::max(worst, std::abs(ode - msa) / msa);
    }
    rows.push_back({"ode_vs_msa_beta11_rel", N, worst, cc.msa_rel_tol, worst <= cc.msa_rel_tol});
  }
  return rows;
}

RunResult run_subcommand(const std::string& sub, const ScenarioConfig& cfg, unsigned threads, std::uint64_t seed) {
  if (sub == "spectrum") return run_spectrum(cfg);
  if (sub == "bogoliubov") return run_bogoliubov(cfg);
  if (sub == "msa") return run_msa(cfg);
  if (sub == "moore") return run_moore(cfg, threads);
  if (sub == "otto") return run_otto(cfg, threads);
  if (sub == "gate") return run_gate(cfg, threads, seed);
  if (sub == "crosscheck") return run_crosscheck(cfg);
  throw ConfigError("unknown subcommand '" + sub + "'");
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"dcelab: dynamical Casimir effect laboratory"};
  std::string sub, config_path, out_dir, format;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  app.add_option("subcommand", sub, "spectrum | bogoliubov | msa | moore | otto | gate | crosscheck")
      ->required()
      ->check(CLI::IsMember(kSubcommands));
  app.add_option("--config", config_path, "scenario config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory (overrides output.path)");
  app.add_option("--format", format, "csv or json (overrides output.format)")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker threads for sweeps")->check(CLI::Range(1u, 1024u));
  app.add_option("--seed", seed, "seed for Monte-Carlo sampling");
  app.set_version_flag("--version", std::string(DCELAB_VERSION));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << DCELAB_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  try {
    const auto cfg = load_config(config_path);
    const std::string dir = out_dir.empty() ? cfg.output.path : out_dir;
    const std::string fmt = format.empty() ? cfg.output.format : format;
    auto res = run_subcommand(sub, cfg, threads, seed);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& m : res.messages) out << m << '\n';
    for (const auto& t : res.tables) {
      const auto path = write_table(t, dir, fmt);
      json man;
      man["tool"] = "dcelab";
      man["version"] = DCELAB_VERSION;
      man["subcommand"] = sub;
      man["config"] = std::filesystem::absolute(config_path).string();
      man["config_hash"] = config_hash(cfg.document);
      man["seed"] = seed;
      man["threads"] = threads;
      man["format"] = fmt;
      man["output"] = std::filesystem::path(path).filename().string();
      man["rows"] = t.rows.size();
      man["columns"] = t.columns;
      man["started_utc"] = started;
      man["wall_clock_s"] = wall;
      man["tolerances"] = res.tolerances;
      man["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                     std::to_string(EIGEN_MINOR_VERSION);
      write_json_file((std::filesystem::path(dir) / (t.name + ".manifest.json")).string(), man);
      out << "wrote " << path << '\n';
    }
    if (!res.checks_passed) {
      err << "physics error: cross-check deviation above threshold\n";
      return 3;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const PhysicsError& e) {
    err << "physics error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dce::cli
