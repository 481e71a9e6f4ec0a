"""End-to-end regression criteria for the reference couplings
(g = 1.0, m_q = 0.1, m_Q = 0, lambda^2 = 20 g^2).

All target numbers are frozen here, independent of the package's own
tabulation module.  One check (the intermediate-stage Z rows in criterion 3)
is known to be unreachable at the stated tolerance because the published
per-stage angles and Z rows are internally inconsistent at the 1e-3 level;
see the decisions ledger (notes/decisions.md, kept alongside the checkout)
for the analysis.  That test is intentionally left failing rather than
loosened.
"""
import time

import numpy as np
import pytest

from su2lgt import LatticeSpec
from su2lgt.pauli import StateVector

# ---------------------------------------------------------------------------
# frozen reference targets
# ---------------------------------------------------------------------------

ENERGIES = {(1, 0): -0.6578, (1, 1): -0.1892, (2, 0): -1.5179,
            (2, 1): -1.162, (3, 0): -2.3994, (3, 1): -2.0806}
HADRON_MASSES = {1: 0.4685, 2: 0.3557, 3: 0.3188}
L1_COMPONENTS = {"kinetic": -0.9474, "mass": 0.14553, "gauge": 0.1440}

PRINTED_INFIDELITY = {("L2", 0): 0.0007, ("L2", 1): 0.003619,
                      ("L3", 1): 0.0043}

ENTANGLEMENT_TARGETS = {
    ("quark", "mi"): [1.5182, 0.0367, 1.59e-4],
    ("antiquark", "mi"): [0.0448, 2.52e-3, 9.20e-5],
    ("quark", "tau"): [0.618, 8.03e-3, 3.07e-5],
    ("antiquark", "tau"): [8.95e-3, 4.17e-4, 1.30e-5],
}

M2_STAGES = [(2, 1.519), (4, 1.993), (5, 3.04), (6, 3.06), (7, 3.07),
             (8, 3.21), (9, 4.07), (10, 4.16)]

VACUUM_PLATEAUS = [0.0, 0.5002, 0.8721]
MEDIUM_PLATEAUS = [0.0, 0.5030, 1.2595]
DEDX = [0.0028, 0.3846]

ESTIMATOR_GROUPS = [0.3314, -0.7951, -0.0421]
ESTIMATOR_TOTAL = -0.5058

RESOURCES = {  # name -> (two_qubit_depth, two_qubit_count or None)
    "scprep": (2, 3), "meson0": (6, 8), "meson1": (14, 28),
    "meson2": (26, 60), "baryon0": (14, None), "fswap": (22, None),
    "gauge": (78, None), "step": (112, None), "pipeline": (184, None),
}

TROTTER_Z_COLUMNS = [2, 4, 8, 10, 14, 16]
TROTTER_Z_VALUES = [0.183, 0.348, -0.285, 0.541, -0.325, 0.537]

# ---------------------------------------------------------------------------
# shared lazy state
# ---------------------------------------------------------------------------

_GS: dict = {}
_PREP: dict = {}


def _spec(L, nq):
    heavy = {0: (), 1: (0,), 2: (0, L - 1)}[nq]
    return LatticeSpec(L=L, heavy_positions=frozenset(heavy))


def _ground(spec):
    from su2lgt.spectra import ground_state

    if spec not in _GS:
        _GS[spec] = ground_state(spec)
    return _GS[spec]


def _prepared(spec):
    from su2lgt.ansatz import (L3_Q1_ANGLES, L3_Q1_SEQUENCE,
                               sequence_from_names)
    from su2lgt.spectra import sc_state

    if spec not in _PREP:
        seq = sequence_from_names(spec, L3_Q1_SEQUENCE, L3_Q1_ANGLES)
        _PREP[spec] = seq.apply(sc_state(spec))
    return _PREP[spec]


def _moved(spec):
    from su2lgt.dynamics import fswap_move

    return fswap_move(_prepared(spec), spec, 0, 1)


STAGED_SEQUENCES = {
    ("L2", 0): (["O_M1^(0,1)", ("O_M0^(0)", "O_M0^(1)"),
                 ("O_B0^(0)", "O_B0^(1)"), "O_M1^(0,1)", "O_B1^(0,1)"],
                [0.2316, 0.2790, 0.0637, -0.1691, 0.0289]),
    ("L2", 1): (["O_M0^(0)", "O_M1^(0,1)", "O_M0^(1)", "O_B0^(1)",
                 "O_B1^(0,1)", "O_M0^(0)"],
                [0.3862, 0.2358, 0.2282, 0.03233, 0.02613, -0.1837]),
    ("L3", 1): (["O_M0^(0)", "O_M0^(2)", "O_M1^(0,1)", "O_B0^(2)",
                 "O_M0^(1)", "O_B0^(1)", "O_B1^(0,1)", "O_M0^(0)",
                 "O_M1^(1,2)", "O_M2^(1,2)"],
                [0.3802, 0.2200, 0.2642, 0.0270, 0.1820, 0.0196, 0.0407,
                 -0.2000, 0.2314, -0.0995]),
}

STAGED_ANGLES_L3 = [
    [0.2270, 0.2687],
    [0.2024, 0.2363, 0.2644, 0.0328],
    [0.2141, 0.2411, 0.2369, 0.0358, 0.2280],
    [0.2137, 0.2375, 0.2360, 0.0380, 0.2092, 0.0268],
    [0.2165, 0.2386, 0.2203, 0.0386, 0.2072, 0.0261, 0.0247],
    [0.3706, 0.2401, 0.2591, 0.0370, 0.2102, 0.0235, 0.0278, -0.1878],
    [0.3753, 0.2139, 0.2675, 0.0325, 0.1831, 0.0187, 0.0401, -0.1997,
     0.2002],
    [0.3802, 0.2200, 0.2642, 0.0270, 0.1820, 0.0196, 0.0407, -0.2000,
     0.2314, -0.0995],
]


# ---------------------------------------------------------------------------
# criterion 1: sector energies and hadron masses
# ---------------------------------------------------------------------------

def test_criterion01_energies_and_hadron_masses():
    t0 = time.monotonic()
    for (L, nq), target in ENERGIES.items():
        e, _ = _ground(_spec(L, nq))
        assert e == pytest.approx(target, abs=5e-4), (L, nq)
    for L, target in HADRON_MASSES.items():
        e1, _ = _ground(_spec(L, 1))
        e0, _ = _ground(_spec(L, 0))
        assert e1 - e0 == pytest.approx(target, abs=1e-3), L
    assert time.monotonic() - t0 < 60.0


# ---------------------------------------------------------------------------
# criterion 2: L = 1 vacuum energy components
# ---------------------------------------------------------------------------

def test_criterion02_l1_components():
    from su2lgt.hamiltonian import build_hamiltonian, mass_offset

    spec = _spec(1, 0)
    _, psi = _ground(spec)
    terms = build_hamiltonian(spec)
    assert terms.kinetic.expectation(psi) == pytest.approx(
        L1_COMPONENTS["kinetic"], abs=5e-4)
    assert terms.mass.expectation(psi) + mass_offset(spec) == pytest.approx(
        L1_COMPONENTS["mass"], abs=5e-4)
    assert terms.gauge.expectation(psi) == pytest.approx(
        L1_COMPONENTS["gauge"], abs=5e-4)


# ---------------------------------------------------------------------------
# criterion 3: single-qubit Z tables
# ---------------------------------------------------------------------------

Z_EXACT = {
    ("L2", 0): (list(range(12)),
                [-1, -1, -0.3856, -0.3856, 0.2796, 0.2796, -1, -1, -0.2796,
                 -0.2796, 0.3856, 0.3856]),
    ("L2", 1): (list(range(12)),
                [0, 0, 0.1554, 0.1554, 0.4989, 0.4989, -1, -1, -0.2498,
                 -0.2498, 0.5955, 0.5955]),
    ("L3", 1): ([2, 3, 4, 5, 8, 9, 10, 11, 14, 15, 16, 17],
                [0.1169, 0.1169, 0.4204, 0.4204, -0.2705, -0.2705, 0.4940,
                 0.4940, -0.2878, -0.2878, 0.5270, 0.5270]),
}

Z_SC = {
    ("L2", 0): [-1, -1, -1, -1, 1, 1, -1, -1, -1, -1, 1, 1],
    ("L2", 1): [0, 0, 0, 0, 1, 1, -1, -1, -1, -1, 1, 1],
    ("L3", 1): [0, 0, 1, 1, -1, -1, 1, 1, -1, -1, 1, 1],
}

Z_LAYER_ROWS = {
    # final-stage rows only are reachable; intermediate ones are checked in
    # the intentionally failing companion test below
    ("L2", 0): [
        [-1, -1, -1, -1, 0.7220, 0.7220, -1, -1, -0.7220, -0.7220, 1, 1],
        [-1, -1, -0.4127, -0.4127, 0.2810, 0.2810, -1, -1, -0.2810, -0.2810,
         0.4127, 0.4127],
        [-1, -1, -0.4048, -0.4048, 0.2731, 0.2731, -1, -1, -0.2731, -0.2731,
         0.4048, 0.4048],
        [-1, -1, -0.3936, -0.3936, 0.2841, 0.2841, -1, -1, -0.2841, -0.2841,
         0.3936, 0.3936],
        [-1, -1, -0.3890, -0.3890, 0.2842, 0.2842, -1, -1, -0.2842, -0.2842,
         0.3890, 0.3890],
    ],
    ("L2", 1): [
        [0, 0, 0.1971, 0.1971, 0.8028, 0.8028, -1, -1, -1, -1, 1, 1],
        [0, 0, 0.1660, 0.1660, 0.4148, 0.4148, -1, -1, -0.5809, -0.5809, 1,
         1],
        [0, 0, 0.1839, 0.1839, 0.4941, 0.4941, -1, -1, -0.2752, -0.2752,
         0.5971, 0.5971],
        [0, 0, 0.1844, 0.1844, 0.5049, 0.5049, -1, -1, -0.2843, -0.2843,
         0.5948, 0.5948],
        [0, 0, 0.1854, 0.1854, 0.5061, 0.5061, -1, -1, -0.2796, -0.2796,
         0.5880, 0.5880],
        [0, 0, 0.1533, 0.1533, 0.5034, 0.5034, -1, -1, -0.2581, -0.2581,
         0.6013, 0.6013],
    ],
    ("L3", 1): [
        [0.1935, 0.1935, 0.8064, 0.8064, -1, -1, 1, 1, -0.4727, -0.4727,
         0.4727, 0.4727],
        [0.1593, 0.1593, 0.3711, 0.3711, -0.5305, -0.5305, 1, 1, -0.4961,
         -0.4961, 0.4961, 0.4961],
        [0.1705, 0.1705, 0.4447, 0.4447, -0.3033, -0.3033, 0.6880, 0.6880,
         -0.4444, -0.4444, 0.4444, 0.4444],
        [0.1728, 0.1728, 0.4501, 0.4501, -0.3069, -0.3069, 0.6839, 0.6839,
         -0.4533, -0.4533, 0.4533, 0.4533],
        [0.1763, 0.1763, 0.4437, 0.4437, -0.2980, -0.2980, 0.6779, 0.6779,
         -0.4558, -0.4558, 0.4558, 0.4558],
        [0.1264, 0.1264, 0.4557, 0.4557, -0.2747, -0.2747, 0.6926, 0.6926,
         -0.4536, -0.4536, 0.4536, 0.4536],
        [0.1115, 0.1115, 0.4253, 0.4253, -0.3049, -0.3049, 0.5661, 0.5661,
         -0.3581, -0.3581, 0.5600, 0.5600],
        [0.1177, 0.1177, 0.4310, 0.4310, -0.2834, -0.2834, 0.5035, 0.5035,
         -0.2929, -0.2929, 0.5240, 0.5240],
    ],
}

STAGE_COUNTS = {("L2", 0): [1, 2, 3, 4, 5], ("L2", 1): [1, 2, 3, 4, 5, 6],
                ("L3", 1): [2, 4, 5, 6, 7, 8, 9, 10]}

STAGE_ANGLES = {
    ("L2", 0): [
        [0.1907],
        [0.1291, 0.2967],
        [0.1291, 0.2543, 0.0469],
        [0.2264, 0.2802, 0.0588, -0.1498],
        [0.2316, 0.2790, 0.0637, -0.1691, 0.0289],
    ],
    ("L2", 1): [
        [0.2309],
        [0.2096, 0.2473],
        [0.2231, 0.2152, 0.2563],
        [0.2231, 0.2149, 0.2318, 0.03233],
        [0.2223, 0.2025, 0.2283, 0.03208, 0.02261],
        [0.3862, 0.2358, 0.2282, 0.03233, 0.02613, -0.1837],
    ],
    ("L3", 1): STAGED_ANGLES_L3,
}


def test_criterion03_z_tables_exact_and_sc_rows():
    from su2lgt.observables import z_profile
    from su2lgt.spectra import sc_state

    for (lkey, nq), (cols, row) in Z_EXACT.items():
        L = int(lkey[1])
        spec = _spec(L, nq)
        _, psi = _ground(spec)
        z = z_profile(psi)
        for c, v in zip(cols, row):
            assert z[c] == pytest.approx(v, abs=5e-4), (lkey, nq, c)
        zsc = z_profile(sc_state(spec))
        for c, v in zip(cols, Z_SC[(lkey, nq)]):
            assert zsc[c] == pytest.approx(v, abs=5e-4), (lkey, nq, c)


def test_criterion03_z_tables_layer_rows():
    """Intentionally failing: the published per-stage angle and Z rows are
    mutually inconsistent at about the 1e-3 angle level, which propagates
    to Z errors of up to 1.6e-2; see notes/decisions.md."""
    from su2lgt.ansatz import sequence_from_names
    from su2lgt.observables import z_profile
    from su2lgt.spectra import sc_state

    worst = 0.0
    for (lkey, nq), rows in Z_LAYER_ROWS.items():
        L = int(lkey[1])
        spec = _spec(L, nq)
        names, _ = STAGED_SEQUENCES[(lkey, nq)]
        cols = Z_EXACT[(lkey, nq)][0]
        start = sc_state(spec)
        for k, angles, row in zip(STAGE_COUNTS[(lkey, nq)],
                                  STAGE_ANGLES[(lkey, nq)], rows):
            seq = sequence_from_names(spec, names[:k], angles)
            z = z_profile(seq.apply(start))
            err = max(abs(z[c] - v) for c, v in zip(cols, row))
            worst = max(worst, err)
    assert worst <= 2e-3, f"worst intermediate-stage Z error {worst:.2e}"


# ---------------------------------------------------------------------------
# criterion 4: variational infidelities at the printed angles
# ---------------------------------------------------------------------------

def test_criterion04_variational_infidelities():
    from su2lgt.ansatz import infidelity_density, sequence_from_names
    from su2lgt.spectra import sc_state

    t0 = time.monotonic()
    for (lkey, nq), printed in PRINTED_INFIDELITY.items():
        L = int(lkey[1])
        spec = _spec(L, nq)
        _, psi = _ground(spec)
        names, angles = STAGED_SEQUENCES[(lkey, nq)]
        seq = sequence_from_names(spec, names, angles)
        inf = infidelity_density(seq.apply(sc_state(spec)), psi, L)
        assert inf <= printed + 1e-3, (lkey, nq, inf)
    assert time.monotonic() - t0 < 600.0


# ---------------------------------------------------------------------------
# criterion 5: entanglement structure of the L = 3 ground state
# ---------------------------------------------------------------------------

def test_criterion05_entanglement():
    from su2lgt.observables import four_tangle, mutual_information

    spec = _spec(3, 1)
    _, psi = _ground(spec)
    for flavor in ("quark", "antiquark"):
        for x in range(3):
            mi = mutual_information(psi, spec, x, flavor)
            assert mi == pytest.approx(
                ENTANGLEMENT_TARGETS[(flavor, "mi")][x], abs=2e-3)
            tau = four_tangle(psi, spec, 0, x, flavor)
            assert tau == pytest.approx(
                ENTANGLEMENT_TARGETS[(flavor, "tau")][x], abs=2e-3)


# ---------------------------------------------------------------------------
# criterion 6: stabilizer Renyi entropy through the staged optimization
# ---------------------------------------------------------------------------

def test_criterion06_magic_staging():
    from su2lgt.ansatz import optimize_angles, sequence_from_names
    from su2lgt.observables import sre_m2
    from su2lgt.spectra import sc_state

    spec = _spec(3, 1)
    _, psi = _ground(spec)
    start = sc_state(spec)
    names, _ = STAGED_SEQUENCES[("L3", 1)]
    final = None
    for (k, target), angles in zip(M2_STAGES, STAGED_ANGLES_L3):
        seq = sequence_from_names(spec, names[:k], angles)
        seq, _ = optimize_angles(seq, start, psi, 3, seed_angles=angles,
                                 n_starts=1, rng_seed=0)
        state = seq.apply(start)
        exact = sre_m2(state, method="exact").value
        assert exact == pytest.approx(target, abs=0.05), k
        final = (state, exact)
    state, exact = final
    est = sre_m2(state, method="sampled", samples=2000, seed=0)
    assert abs(est.value - exact) <= 3.0 * est.std_error


# ---------------------------------------------------------------------------
# criterion 7: heavy-quark motion energetics and dE/dx
# ---------------------------------------------------------------------------

def test_criterion07_motion_and_dedx():
    from su2lgt.dynamics import MotionSchedule, dedx_estimate, run_protocol

    t0 = time.monotonic()
    schedule = MotionSchedule(events=((0.0, 0, 1), (5.0, 1, 2)),
                              horizon=10.0, dt=2.5)
    _, psi_vac = _ground(_spec(3, 1))
    _, psi_med = _ground(_spec(3, 2))
    vac = run_protocol(_spec(3, 1), schedule, initial=psi_vac,
                       krylov_tol=1e-9)
    med = run_protocol(_spec(3, 2), schedule, initial=psi_med,
                       krylov_tol=1e-9)
    e_static, _ = _ground(_spec(3, 1))
    e_empty, _ = _ground(_spec(3, 0))
    r = dedx_estimate(vac, med, e_static=e_static, e_empty=e_empty)
    for got, want in zip(r.vac_plateaus, VACUUM_PLATEAUS):
        assert got == pytest.approx(want, abs=2e-3)
    for got, want in zip(r.med_plateaus, MEDIUM_PLATEAUS):
        assert got == pytest.approx(want, abs=2e-3)
    for got, want in zip(r.dedx, DEDX):
        assert got == pytest.approx(want, abs=2e-3)
    assert time.monotonic() - t0 < 300.0


# ---------------------------------------------------------------------------
# criterion 8: grouped energy-loss estimator
# ---------------------------------------------------------------------------

def test_criterion08_energy_loss_estimator():
    from su2lgt.observables import (delta_hg_operator, energy_loss_estimator,
                                    evaluate_energy_loss)

    spec = _spec(3, 1)
    state = _prepared(spec)
    groups = energy_loss_estimator(spec)
    values, total = evaluate_energy_loss(groups, state)
    for got, want in zip(values, ESTIMATOR_GROUPS):
        assert got == pytest.approx(want, abs=5e-4)
    assert total == pytest.approx(ESTIMATOR_TOTAL, abs=5e-4)
    # direct (ungrouped) measurement of the same operator agrees
    direct = delta_hg_operator(spec).expectation(state)
    assert direct == pytest.approx(ESTIMATOR_TOTAL, abs=5e-4)
    # after undoing the move the estimator vanishes identically
    _, after = evaluate_energy_loss(groups, _moved(spec))
    assert abs(after) < 1e-10


# ---------------------------------------------------------------------------
# criterion 9: circuit resources and unitary equivalence
# ---------------------------------------------------------------------------

def test_criterion09_circuit_resources():
    from su2lgt import circuits

    spec = _spec(3, 1)
    built = {
        "scprep": circuits.sc_prep_circuit(spec),
        "meson0": circuits.meson_circuit(spec, 0, 0, 0.1),
        "meson1": circuits.meson_circuit(spec, 1, 0, 0.1),
        "meson2": circuits.meson_circuit(spec, 2, 1, 0.1),
        "baryon0": circuits.baryon_circuit(spec, 0, 2, 0.1),
        "fswap": circuits.fswap_circuit(spec, 0, 1),
        "gauge": circuits._mass_gauge_block(spec, 1.0),
        "step": circuits.trotter_circuit(spec, 1.0),
        "pipeline": circuits.pipeline_circuit(spec),
    }
    for name, (depth, count) in RESOURCES.items():
        rep = circuits.count_resources(built[name])
        if rep.two_qubit_depth > depth:
            print(f"NOTE {name}: depth {rep.two_qubit_depth} exceeds "
                  f"printed {depth}")
        assert rep.two_qubit_depth <= depth + 2, name
        if count is not None:
            assert rep.two_qubit_count <= count + 2, name

    # unitary equivalence of the composite circuits with the state-vector
    # implementations they compile
    from su2lgt.dynamics import trotter_step

    rng = np.random.default_rng(0)
    v = rng.standard_normal(1 << spec.n_qubits) \
        + 1j * rng.standard_normal(1 << spec.n_qubits)
    v = StateVector(v / np.linalg.norm(v))
    got = built["step"].apply(v)
    oracle = trotter_step(v, spec, 1.0, order=2)
    assert np.max(np.abs(got.amps - oracle.amps)) < 1e-10
    pipe_state = built["pipeline"].apply(StateVector.basis(spec.n_qubits, 0))
    module_state = trotter_step(_moved(spec), spec, 1.0, order=2)
    assert np.max(np.abs(pipe_state.amps - module_state.amps)) < 1e-10


# ---------------------------------------------------------------------------
# criterion 10: product-formula convergence and single-step Z profile
# ---------------------------------------------------------------------------

def test_criterion10_trotter_convergence_and_z_row():
    from su2lgt.dynamics import evolve_exact, trotter_step
    from su2lgt.hamiltonian import build_hamiltonian
    from su2lgt.observables import z_profile

    spec = _spec(3, 1)
    terms = build_hamiltonian(spec, symmetric_gauge=True)
    h = terms.kinetic + terms.mass + terms.gauge
    st0 = _moved(spec)

    def err(t, order):
        ex = evolve_exact(StateVector(st0.amps.copy()), h, t)
        tr = trotter_step(StateVector(st0.amps.copy()), spec, t, order=order)
        return float(np.linalg.norm(ex.amps - tr.amps))

    for order, target in ((1, 2.0), (2, 3.0)):
        slope = np.log2(err(0.1, order) / err(0.05, order))
        assert slope == pytest.approx(target, abs=0.1), order

    z = z_profile(trotter_step(StateVector(st0.amps.copy()), spec, 1.0,
                               order=2))
    for c, v in zip(TROTTER_Z_COLUMNS, TROTTER_Z_VALUES):
        assert z[c] == pytest.approx(v, abs=5e-3), c
        assert z[c + 1] == pytest.approx(v, abs=5e-3), c + 1


# ---------------------------------------------------------------------------
# criterion 11: two-qubit toy model of the continuous-angle move
# ---------------------------------------------------------------------------

def test_criterion11_toy_model():
    from su2lgt.dynamics import ToyModelParams, toy_fswap_expectation

    def closed_form(theta, phi, eta):
        return (np.sin(phi / 2) ** 2 * np.cos(theta / 2) ** 2
                + np.cos(phi / 2) ** 2 * np.sin(theta / 2) ** 2
                + 0.5 * np.sin(theta) * np.sin(phi) * np.cos(eta))

    grid = np.linspace(0.0, 2 * np.pi, 9)
    for theta in grid:
        for phi in grid:
            for eta in grid:
                got = toy_fswap_expectation(
                    ToyModelParams(theta, phi, eta, 0.17))
                assert got == pytest.approx(closed_form(theta, phi, eta),
                                            abs=1e-12)
    assert toy_fswap_expectation(ToyModelParams(np.pi, 0.0, 0.9)) == (
        pytest.approx(1.0, abs=1e-12))
    eta = 1.234
    assert toy_fswap_expectation(
        ToyModelParams(np.pi / 2, np.pi / 2, eta)) == pytest.approx(
        1.0 - np.sin(eta / 2) ** 2, abs=1e-12)


# ---------------------------------------------------------------------------
# criterion 12: Hadamard-test extrapolation of the gauge-energy difference
# ---------------------------------------------------------------------------

def test_criterion12_hadamard_test():
    from su2lgt.observables import hadamard_test_energy

    spec = _spec(3, 1)
    state = _prepared(spec)
    grid = np.arange(0.05, 0.2751, 0.025)
    value, half_width = hadamard_test_energy(state, spec, grid,
                                             evolver="trotter")
    assert value == pytest.approx(-0.50, abs=0.03)
    assert half_width <= 0.03


# ---------------------------------------------------------------------------
# criterion 13: error-mitigation algebra
# ---------------------------------------------------------------------------

def test_criterion13_mitigation():
    from su2lgt.observables import depolarized, odr_rescale, zne_extrapolate

    true = ESTIMATOR_TOTAL
    for survival in (0.9, 0.65, 0.3):
        meas_phys = depolarized(true, survival)
        rec = odr_rescale(meas_phys, depolarized(true, survival), true)
        assert rec == pytest.approx(true, abs=1e-12)
    xs = [1.0, 1.5, 2.0]
    vals = [(x, true * (1.0 - 0.07 * x), 0.01) for x in xs]
    intercept, _ = zne_extrapolate(vals)
    assert intercept == pytest.approx(true, abs=1e-12)
