#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dcelab/bogoliubov.hpp"
#include "dcelab/cavity.hpp"
#include "dcelab/errors.hpp"
#include "dcelab/gate.hpp"
#include "dcelab/moore.hpp"
#include "dcelab/msa.hpp"
#include "dcelab/otto.hpp"
#include "dcelab/squid.hpp"
#include "dcelab/trajectory.hpp"

namespace py = pybind11;
using namespace dce;

namespace {

// pybind11 holders cannot be pointers to const
using PyTraj = std::shared_ptr<WallTrajectory>;
PyTraj hold(TrajectoryPtr t) { return std::const_pointer_cast<WallTrajectory>(std::move(t)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "dynamical Casimir effect solvers";

  auto base = py::register_exception<PhysicsError>(m, "PhysicsError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InvalidTrajectoryError>(m, "InvalidTrajectoryError", base.ptr());
  py::register_exception<TruncationError>(m, "TruncationError", base.ptr());

  // cavity
  py::class_<CavitySpec>(m, "CavitySpec")
      .def(py::init([](double length, std::size_t n_modes) {
             CavitySpec s;
             s.length = length;
             s.n_modes = n_modes;
             s.validate();
             return s;
           }),
           py::arg("length") = 1.0, py::arg("n_modes") = 20)
      .def_readwrite("length", &CavitySpec::length)
      .def_readwrite("n_modes", &CavitySpec::n_modes);
  m.def("dirichlet_spectrum", [](double R, std::size_t n) { return dirichlet_spectrum(R, n).k; });
  m.def("thermal_occupation", &thermal_occupation, py::arg("beta"), py::arg("omega"));
  m.def("static_casimir_energy", &static_casimir_energy);
  m.def("thermal_Z", &thermal_Z);

  // trajectories
  py::class_<WallTrajectory, PyTraj>(m, "WallTrajectory")
      .def("R", &WallTrajectory::R)
      .def("Rdot", &WallTrajectory::Rdot)
      .def_property_readonly("t_start", &WallTrajectory::t_start)
      .def_property_readonly("t_end", &WallTrajectory::t_end)
      .def_property_readonly("kind", &WallTrajectory::kind)
      .def("max_speed", &WallTrajectory::max_speed);
  m.def(
      "make_static", [](double R0, double t0, double t1) { return hold(make_static(R0, t0, t1)); }, py::arg("R0"),
      py::arg("t_start"), py::arg("t_end"));
  m.def(
      "make_harmonic",
      [](double R0, double eps, double Om, double t0, double t1) { return hold(make_harmonic(R0, eps, Om, t0, t1)); },
      py::arg("R0"), py::arg("eps"), py::arg("Omega"), py::arg("t_start"),
        py::arg("t_end"));
  m.def(
      "make_quintic_stroke", [](double a, double b, double t0, double t1) { return hold(make_quintic_stroke(a, b, t0, t1)); },
      py::arg("R_from"), py::arg("R_to"), py::arg("t_start"),
        py::arg("t_end"));
  m.def(
      "make_tabulated", [](std::vector<double> t, std::vector<double> R) { return hold(make_tabulated(std::move(t), std::move(R))); },
      py::arg("t"), py::arg("R"));

  // bogoliubov
  py::class_<BogoliubovMatrices>(m, "BogoliubovMatrices")
      .def_readonly("alpha", &BogoliubovMatrices::alpha)
      .def_readonly("beta", &BogoliubovMatrices::beta);
  m.def(
      "solve_bogoliubov",
      [](const CavitySpec& s, const PyTraj& t, double tol) { return solve_bogoliubov(s, *t, tol); },
      py::arg("spec"), py::arg("trajectory"), py::arg("tol") = 1e-9);
  m.def("photon_spectrum", &photon_spectrum, py::arg("bog"), py::arg("N_in"));
  m.def("symplectic_rows", &symplectic_rows);

  // multiple-scale analysis
  m.def(
      "evolve_slow",
      [](double R0, std::size_t n_modes, double Omega, double eps, double tau_max, std::size_t samples) {
        SlowOptions o;
        o.samples = samples;
        const auto s = evolve_slow(dirichlet_spectrum(R0, n_modes), Omega, R0, eps, tau_max, o);
        return py::dict(py::arg("tau") = s.tau, py::arg("t") = s.t, py::arg("alpha") = s.alpha,
                        py::arg("beta") = s.beta);
      },
      py::arg("R0"), py::arg("n_modes"), py::arg("Omega"), py::arg("eps"), py::arg("tau_max"),
      py::arg("samples") = 11);

  // Moore function
  py::class_<MooreFunction>(m, "MooreFunction")
      .def("F", [](const MooreFunction& f, double v) { return f.F(v).value; })
      .def("G", [](const MooreFunction& f, double z) { return f.G(z).value; })
      .def("residual", &MooreFunction::residual)
      .def_property_readonly("d0", &MooreFunction::d0);
  m.def(
      "solve_moore", [](const PyTraj& t, double t_max) { return solve_moore(t, t_max); }, py::arg("trajectory"),
      py::arg("t_max"));
  m.def("energy_density", &energy_density, py::arg("moore"), py::arg("T"), py::arg("x"), py::arg("t"));
  m.def("bogoliubov_from_moore", &bogoliubov_from_moore, py::arg("moore"), py::arg("t"), py::arg("n_modes"),
        py::arg("panels") = 0);

  // SQUID-terminated cavity
  py::class_<SquidCavityParams>(m, "SquidCavityParams")
      .def(py::init([](double chi0, double b0L, double b0R, double d) { return SquidCavityParams{chi0, b0L, b0R, d}; }),
           py::arg("chi0") = 0.0, py::arg("b0L") = 0.0, py::arg("b0R") = 0.0, py::arg("d") = 1.0)
      .def_readwrite("chi0", &SquidCavityParams::chi0)
      .def_readwrite("b0L", &SquidCavityParams::b0L)
      .def_readwrite("b0R", &SquidCavityParams::b0R)
      .def_readwrite("d", &SquidCavityParams::d);
  m.def(
      "solve_spectrum",
      [](const SquidCavityParams& p, std::size_t n) {
        std::vector<std::pair<double, double>> out;
        for (const auto& r : solve_spectrum(p, n)) out.emplace_back(r.kd, r.phi);
        return out;
      },
      py::arg("params"), py::arg("n_roots"));

  // Otto cycle
  py::class_<CycleSpec>(m, "CycleSpec")
      .def(py::init([](double L0, double eps, double beta_A, double beta_C, double tau) {
             CycleSpec s;
             s.L0 = L0;
             s.eps = eps;
             s.beta_A = beta_A;
             s.beta_C = beta_C;
             s.tau = tau;
             s.validate();
             return s;
           }),
           py::arg("L0") = 1.0, py::arg("eps") = 0.01, py::arg("beta_A") = 2.0, py::arg("beta_C") = 0.2,
           py::arg("tau") = 1.0)
      .def_readwrite("L0", &CycleSpec::L0)
      .def_readwrite("eps", &CycleSpec::eps)
      .def_readwrite("beta_A", &CycleSpec::beta_A)
      .def_readwrite("beta_C", &CycleSpec::beta_C)
      .def_readwrite("tau", &CycleSpec::tau)
      .def_readwrite("n_modes", &CycleSpec::n_modes)
      .def_readwrite("thermalization_time", &CycleSpec::thermalization_time)
      .def("omega1", &CycleSpec::omega1);
  py::class_<CycleResult>(m, "CycleResult")
      .def_readonly("W", &CycleResult::W)
      .def_readonly("Q", &CycleResult::Q)
      .def_readonly("eta", &CycleResult::eta)
      .def_readonly("eta_otto", &CycleResult::eta_otto)
      .def_readonly("eta_first_order", &CycleResult::eta_first_order)
      .def_readonly("E_F_A", &CycleResult::E_F_A)
      .def_readonly("E_F_C", &CycleResult::E_F_C)
      .def_readonly("P", &CycleResult::P)
      .def_readonly("engine", &CycleResult::engine);
  m.def("adiabatic_cycle", &adiabatic_cycle);
  m.def("nonadiabatic_cycle", &nonadiabatic_cycle);
  m.def("friction_energy", &friction_energy, py::arg("spec"), py::arg("beta"), py::arg("tau"));
  m.def("quintic_trajectory", &quintic_trajectory, py::arg("t"), py::arg("tau"));

  // squeeze gate
  py::class_<GateParams>(m, "GateParams")
      .def(py::init<>())
      .def_readwrite("omega", &GateParams::omega)
      .def_readwrite("omega_q", &GateParams::omega_q)
      .def_readwrite("chi", &GateParams::chi)
      .def_readwrite("g_d", &GateParams::g_d)
      .def_readwrite("eps_d", &GateParams::eps_d)
      .def_readwrite("theta", &GateParams::theta)
      .def_readwrite("t_gate", &GateParams::t_gate)
      .def_readwrite("n_max", &GateParams::n_max)
      .def("squeeze_r", &GateParams::squeeze_r)
      .def("phi", &GateParams::phi)
      .def("fock_dim", &GateParams::fock_dim);
  m.def("average_fidelity", &average_fidelity, py::arg("r"), py::arg("pz"));
  m.def("fock_cutoff", &fock_cutoff, py::arg("r"), py::arg("tol") = 1e-12);
  m.def("squeeze_state", &squeeze_state, py::arg("r"), py::arg("theta"), py::arg("n_max"), py::arg("max_leak") = 1e-8);
  m.def(
      "simulated_fidelity",
      [](cplx a, cplx b, double r, double theta, double phi, std::size_t n) {
        const auto f = simulated_fidelity(a, b, r, theta, phi, n);
        return py::dict(py::arg("p_plus") = f.p_plus, py::arg("p_minus") = f.p_minus, py::arg("f_plus") = f.f_plus,
                        py::arg("f_minus") = f.f_minus, py::arg("average") = f.average);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("r"), py::arg("theta"), py::arg("phi"), py::arg("n_max"));
  m.def(
      "encoding_protocol", [](cplx a, cplx b, const GateParams& p) { return encoding_protocol(a, b, p); },
      py::arg("alpha"), py::arg("beta"), py::arg("params"));
}
