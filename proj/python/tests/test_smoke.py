import math

import numpy as np
import pytest

import dcelab


def test_static_wall_creates_nothing():
    spec = dcelab.CavitySpec(1.0, 8)
    bog = dcelab.solve_bogoliubov(spec, dcelab.make_static(1.0, 0.0, 5.0))
    assert np.abs(bog.beta).max() < 1e-10
    assert np.allclose(bog.alpha, np.eye(8), atol=1e-10)


def test_resonant_drive_is_symplectic_and_grows():
    spec = dcelab.CavitySpec(1.0, 12)
    traj = dcelab.make_harmonic(1.0, 0.01, 2 * math.pi, 0.0, 5.0)
    bog = dcelab.solve_bogoliubov(spec, traj, 1e-10)
    assert np.allclose(dcelab.symplectic_rows(bog)[:6], 1.0, atol=1e-8)
    n = dcelab.photon_spectrum(bog, np.zeros(12))
    assert n[0] > 1e-4


def test_moore_static_casimir():
    mf = dcelab.solve_moore(dcelab.make_static(1.0, 0.0, 1.0), 4.0)
    assert dcelab.energy_density(mf, 0.0, 0.4, 2.0) == pytest.approx(-math.pi / 24, abs=1e-10)


def test_squid_rigid_limit():
    roots = dcelab.solve_spectrum(dcelab.SquidCavityParams(0.0, 1e6, 1e6, 1.0), 5)
    for n, (kd, _phi) in enumerate(roots, start=1):
        assert abs(kd - n * math.pi) < 1e-4


def test_otto_adiabatic_efficiency():
    s = dcelab.CycleSpec(eps=0.01, beta_A=2 / math.pi, beta_C=0.2 / math.pi)
    assert dcelab.adiabatic_cycle(s).eta == pytest.approx(0.01, abs=1e-12)
    s.tau = 1.0 / math.pi
    r = dcelab.nonadiabatic_cycle(s)
    assert r.eta < r.eta_otto
    assert dcelab.quintic_trajectory(0.5, 1.0) == pytest.approx(0.5)


def test_gate_fidelity_closed_form_matches_simulation():
    p = dcelab.GateParams()
    assert p.squeeze_r() == pytest.approx(1.5)
    for pz in (-0.5, 0.0, 0.5):
        a, b = math.sqrt((1 + pz) / 2), math.sqrt((1 - pz) / 2)
        f = dcelab.simulated_fidelity(a, b, 1.0, 0.0, p.phi(), dcelab.fock_cutoff(1.0))
        assert f["average"] == pytest.approx(dcelab.average_fidelity(1.0, pz), abs=1e-8)
    psi = dcelab.encoding_protocol(1.0, 0.0, p)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-10)


def test_errors_are_typed():
    with pytest.raises(dcelab.DomainError):
        dcelab.make_static(-1.0, 0.0, 1.0)
    with pytest.raises(dcelab.TruncationError):
        dcelab.squeeze_state(1.5, 0.0, 20)
    assert issubclass(dcelab.DomainError, dcelab.PhysicsError)
