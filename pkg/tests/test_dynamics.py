import numpy as np
import pytest
from scipy.linalg import expm

from su2lgt.dynamics import (MotionSchedule, ToyModelParams, dedx_estimate,
                             evolve_exact, fswap_move, gauge_pair_rounds,
                             run_protocol, toy_fswap_expectation, trotter_step)
from su2lgt.hamiltonian import build_hamiltonian
from su2lgt.observables import z_profile
from su2lgt.pauli import StateVector

from conftest import random_state, spec_for


def _full_h(spec, symmetric=True):
    t = build_hamiltonian(spec, symmetric_gauge=symmetric)
    return t.kinetic + t.mass + t.gauge


def test_evolve_exact_matches_dense_expm():
    spec = spec_for(1, (0,))
    h = _full_h(spec)
    rng = np.random.default_rng(7)
    v = random_state(spec.n_qubits, rng)
    out = evolve_exact(StateVector(v), h, 0.83)
    oracle = expm(-0.83j * h.to_dense()) @ v
    assert np.max(np.abs(out.amps - oracle)) < 1e-10


def test_trotter_step_is_unitary_and_trivial_at_zero():
    spec = spec_for(2, (0,))
    rng = np.random.default_rng(9)
    v = random_state(spec.n_qubits, rng)
    for order in (1, 2):
        out = trotter_step(StateVector(v), spec, 0.7, order=order)
        assert out.norm() == pytest.approx(1.0, abs=1e-12)
        still = trotter_step(StateVector(v), spec, 0.0, order=order)
        assert np.max(np.abs(still.amps - v)) < 1e-12


@pytest.mark.parametrize("order,power", [(1, 2), (2, 3)])
def test_trotter_local_error_order(order, power):
    # a single step of size t has error O(t^(p+1)); halving t must reduce
    # the error by about 2^(p+1)
    spec = spec_for(2, (0,))
    h = _full_h(spec)
    rng = np.random.default_rng(13)
    v = random_state(spec.n_qubits, rng)

    def err(t):
        ex = evolve_exact(StateVector(v.copy()), h, t)
        tr = trotter_step(StateVector(v.copy()), spec, t, order=order)
        return np.linalg.norm(ex.amps - tr.amps)

    ratio = err(0.1) / err(0.05)
    assert np.log2(ratio) == pytest.approx(power, abs=0.15)


def test_gauge_pair_rounds_are_site_disjoint():
    pairs = {(0, 1): 1.0, (1, 2): 1.0, (0, 3): 1.0, (2, 4): 1.0}
    rounds = gauge_pair_rounds(pairs)
    assert sorted(p for r in rounds for p in r) == sorted(pairs)
    for r in rounds:
        sites = [s for p in r for s in p]
        assert len(sites) == len(set(sites))


def test_fswap_move_relocates_the_heavy_quark():
    spec = spec_for(2, (0,))
    from su2lgt.spectra import sc_state

    s = sc_state(spec)
    moved = fswap_move(s, spec, 0, 1)
    assert moved.norm() == pytest.approx(1.0, abs=1e-12)
    z = z_profile(moved)
    # occupied heavy site shows <Z> = 0 on its color pair, empty one -1
    assert z[0] == pytest.approx(-1.0, abs=1e-10)
    assert z[1] == pytest.approx(-1.0, abs=1e-10)
    assert z[6] == pytest.approx(0.0, abs=1e-10)
    assert z[7] == pytest.approx(0.0, abs=1e-10)
    # moving back restores the original state up to global phase
    back = fswap_move(moved, spec, 1, 0)
    overlap = np.vdot(back.amps, s.amps)
    assert abs(overlap) == pytest.approx(1.0, abs=1e-10)


def test_run_protocol_conserves_energy_between_moves():
    spec = spec_for(2, (0,))
    schedule = MotionSchedule(events=((0.0, 0, 1),), horizon=2.0, dt=0.5)
    result = run_protocol(spec, schedule)
    totals = [r.energies["total"] for r in result.records]
    assert max(totals) - min(totals) < 1e-8
    # the move costs energy relative to the initial ground state
    assert totals[0] > result.initial_energy


def test_dedx_estimate_plateau_arithmetic():
    spec = spec_for(2, (0,))
    schedule = MotionSchedule(events=((0.0, 0, 1),), horizon=1.0, dt=0.5)
    vac = run_protocol(spec, schedule)
    med = run_protocol(spec_for(2, (0, 1)), schedule)
    r = dedx_estimate(vac, med)
    assert r.vac_plateaus[0] == pytest.approx(0.0, abs=1e-12)
    assert r.med_plateaus[0] == pytest.approx(0.0, abs=1e-12)
    assert r.dedx[0] == pytest.approx(
        r.med_plateaus[1] - r.vac_plateaus[1], abs=1e-12)


def test_motion_schedule_validation():
    with pytest.raises(ValueError):
        MotionSchedule(events=((5.0, 0, 1),), horizon=1.0, dt=0.5)


def test_toy_model_closed_form():
    # amplitude algebra in the two-state subspace gives
    # R = sin^2(phi/2) cos^2(theta/2) + cos^2(phi/2) sin^2(theta/2)
    #     + (1/2) sin(theta) sin(phi) cos(eta)
    rng = np.random.default_rng(21)
    for _ in range(50):
        theta, phi, eta, alpha = rng.uniform(0, 2 * np.pi, size=4)
        expected = (np.sin(phi / 2) ** 2 * np.cos(theta / 2) ** 2
                    + np.cos(phi / 2) ** 2 * np.sin(theta / 2) ** 2
                    + 0.5 * np.sin(theta) * np.sin(phi) * np.cos(eta))
        got = toy_fswap_expectation(ToyModelParams(theta, phi, eta, alpha))
        assert got == pytest.approx(expected, abs=1e-12)
