"""
Tabulated reference values for the standard couplings g=1.0, m_q=0.1.

These are the exact-diagonalization targets used by the `report` CLI
subcommand and the regression suite: sector energies, hadron masses,
single-qubit Z profiles through the staged variational optimizations,
entanglement and magic measures, and the heavy-quark motion energetics.
All values refer to the conventions of this package (qubit 0 is the most
significant bit, energies include the identity constant of the mass term).
"""
from __future__ import annotations

# ---------------------------------------------------------------------------
# sector ground-state energies E(L, n_Q) and hadron masses Lambda_Q(L)
# heavy positions: n_Q=1 at x=0; n_Q=2 at x=0 and x=L-1
# ---------------------------------------------------------------------------

ENERGIES = {
    (1, 0): -0.6578,
    (1, 1): -0.1892,
    (2, 0): -1.5179,
    (2, 1): -1.162,
    (3, 0): -2.3994,
    (3, 1): -2.0806,
    (3, 2): -1.5485,
}

HADRON_MASSES = {1: 0.4685, 2: 0.3557, 3: 0.3188}

# L=1 vacuum component energies (kinetic, mass incl. identity constant, gauge)
L1_COMPONENTS = {"kinetic": -0.9474, "mass": 0.14553, "gauge": 0.1440}

# ---------------------------------------------------------------------------
# staged variational optimizations: operator sequence, per-stage angles,
# per-stage infidelity densities.  A `None` angle row marks a stage whose
# numbers were not tabulated individually.
# ---------------------------------------------------------------------------

STAGED = {
    ("L2", 0): {
        "sequence": ["O_M1^(0,1)", ("O_M0^(0)", "O_M0^(1)"),
                     ("O_B0^(0)", "O_B0^(1)"), "O_M1^(0,1)", "O_B1^(0,1)"],
        "angles": [
            [0.1907],
            [0.1291, 0.2967],
            [0.1291, 0.2543, 0.0469],
            [0.2264, 0.2802, 0.0588, -0.1498],
            [0.2316, 0.2790, 0.0637, -0.1691, 0.0289],
        ],
        "infidelity": [0.3479, 0.0202, 0.0133, 0.0020, 0.0007],
        "identity_infidelity": 0.3857,
    },
    ("L2", 1): {
        "sequence": ["O_M0^(0)", "O_M1^(0,1)", "O_M0^(1)", "O_B0^(1)",
                     "O_B1^(0,1)", "O_M0^(0)"],
        "angles": [
            [0.2309],
            [0.2096, 0.2473],
            [0.2231, 0.2152, 0.2563],
            [0.2231, 0.2149, 0.2318, 0.03233],
            [0.2223, 0.2025, 0.2283, 0.03208, 0.02261],
            [0.3862, 0.2358, 0.2282, 0.03233, 0.02613, -0.1837],
        ],
        "infidelity": [0.2965, 0.1855, 0.02256, 0.02048, 0.01959, 0.003619],
        "identity_infidelity": 0.336982,
    },
    ("L3", 1): {
        "sequence": ["O_M0^(0)", "O_M0^(2)", "O_M1^(0,1)", "O_B0^(2)",
                     "O_M0^(1)", "O_B0^(1)", "O_B1^(0,1)", "O_M0^(0)",
                     "O_M1^(1,2)", "O_M2^(1,2)"],
        # tabulated stages: 2, 4, 5, 6, 7, 8, 9, 10 layers
        "stages": [2, 4, 5, 6, 7, 8, 9, 10],
        "angles": [
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
        ],
        "infidelity": [0.2258, 0.1557, 0.0889, 0.0881, 0.0875, 0.0765,
                       0.0171, 0.0043],
        "identity_infidelity": 0.2835,
        # second stabilizer Renyi entropy per tabulated stage (value, sigma)
        "m2": [(1.519, 0.005), (1.993, 0.005), (3.04, 0.02), (3.06, 0.03),
               (3.07, 0.03), (3.21, 0.03), (4.07, 0.04), (4.16, 0.03)],
    },
}

# ---------------------------------------------------------------------------
# <Z_j> tables: SC state, staged-optimization rows, and the exact state.
# For L=3 only the light-qubit columns are tabulated; the heavy qubits are
# 0 on sites occupied by the heavy quark and -1 otherwise.
# ---------------------------------------------------------------------------

Z_TABLES = {
    ("L2", 0): {
        "columns": list(range(12)),
        "sc": [-1, -1, -1, -1, 1, 1, -1, -1, -1, -1, 1, 1],
        "layers": [
            [-1, -1, -1, -1, 0.7220, 0.7220, -1, -1, -0.7220, -0.7220, 1, 1],
            [-1, -1, -0.4127, -0.4127, 0.2810, 0.2810, -1, -1, -0.2810,
             -0.2810, 0.4127, 0.4127],
            [-1, -1, -0.4048, -0.4048, 0.2731, 0.2731, -1, -1, -0.2731,
             -0.2731, 0.4048, 0.4048],
            [-1, -1, -0.3936, -0.3936, 0.2841, 0.2841, -1, -1, -0.2841,
             -0.2841, 0.3936, 0.3936],
            [-1, -1, -0.3890, -0.3890, 0.2842, 0.2842, -1, -1, -0.2842,
             -0.2842, 0.3890, 0.3890],
        ],
        "exact": [-1, -1, -0.3856, -0.3856, 0.2796, 0.2796, -1, -1, -0.2796,
                  -0.2796, 0.3856, 0.3856],
    },
    ("L2", 1): {
        "columns": list(range(12)),
        "sc": [0, 0, 0, 0, 1, 1, -1, -1, -1, -1, 1, 1],
        "layers": [
            [0, 0, 0.1971, 0.1971, 0.8028, 0.8028, -1, -1, -1, -1, 1, 1],
            [0, 0, 0.1660, 0.1660, 0.4148, 0.4148, -1, -1, -0.5809, -0.5809,
             1, 1],
            [0, 0, 0.1839, 0.1839, 0.4941, 0.4941, -1, -1, -0.2752, -0.2752,
             0.5971, 0.5971],
            [0, 0, 0.1844, 0.1844, 0.5049, 0.5049, -1, -1, -0.2843, -0.2843,
             0.5948, 0.5948],
            [0, 0, 0.1854, 0.1854, 0.5061, 0.5061, -1, -1, -0.2796, -0.2796,
             0.5880, 0.5880],
            [0, 0, 0.1533, 0.1533, 0.5034, 0.5034, -1, -1, -0.2581, -0.2581,
             0.6013, 0.6013],
        ],
        "exact": [0, 0, 0.1554, 0.1554, 0.4989, 0.4989, -1, -1, -0.2498,
                  -0.2498, 0.5955, 0.5955],
    },
    ("L3", 1): {
        "columns": [2, 3, 4, 5, 8, 9, 10, 11, 14, 15, 16, 17],
        "heavy": {0: 0, 1: 0, 6: -1, 7: -1, 12: -1, 13: -1},
        "sc": [0, 0, 1, 1, -1, -1, 1, 1, -1, -1, 1, 1],
        "layers": [
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
        "exact": [0.1169, 0.1169, 0.4204, 0.4204, -0.2705, -0.2705, 0.4940,
                  0.4940, -0.2878, -0.2878, 0.5270, 0.5270],
    },
}

# ---------------------------------------------------------------------------
# entanglement of the L=3, n_Q=1 ground state (heavy quark at x=0):
# mutual information and 4-tangles vs spatial separation, in bits.
# ---------------------------------------------------------------------------

ENTANGLEMENT = {
    "mutual_information_quark": [1.5182, 0.0367, 1.59e-4],
    "mutual_information_antiquark": [0.0448, 2.52e-3, 9.20e-5],
    "four_tangle_quark": [0.618, 8.03e-3, 3.07e-5],
    "four_tangle_antiquark": [8.95e-3, 4.17e-4, 1.30e-5],
}

# ---------------------------------------------------------------------------
# heavy-quark motion: moves x=0->1 at t=0 and x=1->2 at t=5, horizon 10.
# Plateau energies are relative to the pre-move ground-state energy.
# ---------------------------------------------------------------------------

MOTION = {
    "move_times": (0.0, 5.0),
    "horizon": 10.0,
    "vacuum_plateaus": [0.0, 0.5002, 0.8721],
    "medium_plateaus": [0.0, 0.5030, 1.2595],
    "vacuum_base": -2.0806,
    "medium_base": -1.5485,
    "dedx": [0.0028, 0.3846],
}

# ---------------------------------------------------------------------------
# energy-loss estimator on the moved variational state (three groups)
# ---------------------------------------------------------------------------

ESTIMATOR = {"groups": [0.3314, -0.7951, -0.0421], "total": -0.5058}

# Hadamard-test extrapolation of the gauge-energy difference
HADAMARD = {"value": -0.50, "half_width": 0.03}

# <Z_j> after a single order-2 product-formula step (time parameter 1.0)
# applied to the moved variational state; light qubits only (pair values are
# equal, so one column per staggered pair is listed).
TROTTER_Z = {
    "columns": [2, 4, 8, 10, 14, 16],
    "values": [0.183, 0.348, -0.285, 0.541, -0.325, 0.537],
}
