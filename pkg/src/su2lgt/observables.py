"""
Measured quantities: Z profiles, mutual information, 4-tangles, stabilizer
Renyi entropy, the GHZ-grouped energy-loss estimator, shot sampling, and
the mitigation post-processing math (ODR / ZNE / Hadamard test).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import charge_cross, charge_square
from .lattice import LatticeSpec
from .pauli import (PauliString, PauliSum, StateVector, apply_unitary_on,
                    partial_trace)

_EIG_CLIP = 1e-14


# ---------------------------------------------------------------------------
# basic profiles and entanglement measures
# ---------------------------------------------------------------------------

def z_profile(state: StateVector, pair_average: bool = False) -> np.ndarray:
    """Per-qubit <Z_j>; optionally averaged over (r, g) color pairs."""
    p = np.abs(state.amps) ** 2
    n = state.n
    out = np.empty(n)
    for j in range(n):
        signs = 1.0 - 2.0 * ((np.arange(p.size) >> (n - 1 - j)) & 1)
        out[j] = float(p @ signs)
    if pair_average:
        out = np.repeat(0.5 * (out[0::2] + out[1::2]), 2)
    return out


def _entropy(rho: np.ndarray) -> float:
    evals = np.linalg.eigvalsh(rho)
    evals = np.clip(evals.real, _EIG_CLIP, None)
    return float(-(evals * np.log2(evals)).sum())


def _flavor_qubits(spec: LatticeSpec, x: int, flavor: str) -> list[int]:
    offset = {"quark": 1, "antiquark": 2}.get(flavor)
    if offset is None:
        raise ValueError("flavor must be 'quark' or 'antiquark'")
    return list(spec.qubits_of(3 * x + offset))


def mutual_information(state: StateVector, spec: LatticeSpec, x: int,
                       flavor: str = "quark") -> float:
    """I = S(heavy pair) + S(flavor pair at x) - S(joint), in bits."""
    if spec.n_Q != 1:
        raise ValueError("mutual_information expects exactly one heavy quark")
    x_q = next(iter(spec.heavy_positions))
    heavy = list(spec.qubits_of(3 * x_q))
    flav = _flavor_qubits(spec, x, flavor)
    s_h = _entropy(partial_trace(state, heavy))
    s_f = _entropy(partial_trace(state, flav))
    s_hf = _entropy(partial_trace(state, heavy + flav))
    return s_h + s_f - s_hf


def four_tangle(state: StateVector, spec: LatticeSpec, x_q: int, x: int,
                flavor: str = "quark") -> float:
    """|<psi| Y_Qr Y_Qg Y_fr Y_fg |psi*>|^2 on the full register."""
    qubits = list(spec.qubits_of(3 * x_q)) + _flavor_qubits(spec, x, flavor)
    ps = PauliString.from_ops(state.n, {j: "Y" for j in qubits})
    rotated = ps.apply(StateVector(state.amps.conj(), normalized=False))
    return float(abs(np.vdot(state.amps, rotated.amps)) ** 2)


# ---------------------------------------------------------------------------
# stabilizer Renyi entropy M2
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SreEstimate:
    value: float
    std_error: float
    method: str
    samples: int = 0


def _fwht(a: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard transform along the last axis (unnormalized)."""
    a = a.copy()
    h = 1
    n = a.shape[-1]
    while h < n:
        a = a.reshape(a.shape[:-1] + (n // (2 * h), 2, h))
        top, bot = a[..., 0, :].copy(), a[..., 1, :].copy()
        a[..., 0, :] = top + bot
        a[..., 1, :] = top - bot
        a = a.reshape(a.shape[:-3] + (n,))
        h *= 2
    return a


def _sre_dense(amps: np.ndarray, n: int) -> float:
    """sum_P <P>^4 / 2^n over all Pauli strings, via per-x-mask transforms."""
    dim = 1 << n
    idx = np.arange(dim)
    total = 0.0
    block = max(1, (1 << 22) // dim)
    for x0 in range(0, dim, block):
        xs = np.arange(x0, min(x0 + block, dim))
        g = amps.conj()[None, :] * amps[idx[None, :] ^ xs[:, None]]
        f = _fwht(g)
        total += float((np.abs(f) ** 4).sum())
    return total / dim


def _sre_sparse_exact(amps: np.ndarray, n: int, tol: float = 1e-12) -> float:
    """Exact sum_P <P>^4 / 2^n for a sparse real state.

    Uses sum_u sum_v |A(u, v)|^2 with A(u, v) the XOR autocorrelation of
    h_u(s) = c_s c_{s XOR u}; cost ~ sum_u k_u^2 over the difference set.
    """
    if np.abs(amps.imag).max(initial=0.0) > 1e-12:
        raise ValueError("sparse exact path requires real amplitudes")
    c = amps.real
    supp = np.flatnonzero(np.abs(c) > tol)
    cs = c[supp]
    lookup = {int(s): i for i, s in enumerate(supp)}
    diffs = sorted({int(a ^ b) for a in supp for b in supp})
    total = 0.0
    for u in diffs:
        partner = np.array([lookup.get(int(s) ^ u, -1) for s in supp])
        ok = partner >= 0
        s_u = supp[ok]
        h = cs[ok] * cs[partner[ok]]
        v = s_u[:, None] ^ s_u[None, :]
        keys, inv = np.unique(v.ravel(), return_inverse=True)
        acc = np.bincount(inv, weights=np.outer(h, h).ravel())
        total += float((acc ** 2).sum())
    return total


def _sre_sampled(amps: np.ndarray, n: int, samples: int, seed,
                 tol: float = 1e-12) -> tuple[float, float]:
    """Monte-Carlo estimate of the 4-replica sum and a bootstrap error.

    Replicas are drawn from |c|^2 and reweighted, giving an unbiased
    estimate of the replica sum; the error is propagated to M2.
    """
    rng = np.random.default_rng(seed)
    c = amps
    supp = np.flatnonzero(np.abs(c) > tol)
    p = np.abs(c[supp]) ** 2
    p = p / p.sum()
    draws = rng.choice(supp.size, size=(samples, 4), p=p)
    s = supp[draws]
    cdict = np.zeros(1 << n, dtype=complex)
    cdict[supp] = c[supp]
    c1, c2, c3, c4 = (c[s[:, k]] for k in range(4))
    t123 = cdict[s[:, 0] ^ s[:, 1] ^ s[:, 2]]
    t124 = cdict[s[:, 0] ^ s[:, 1] ^ s[:, 3]]
    t134 = cdict[s[:, 0] ^ s[:, 2] ^ s[:, 3]]
    t234 = cdict[s[:, 1] ^ s[:, 2] ^ s[:, 3]]
    weight = (np.abs(c1) * np.abs(c2) * np.abs(c3) * np.abs(c4)) ** 2
    terms = (c1 * c2 * c3 * t123 * np.conj(t124 * t134 * t234 * c4)).real / weight
    est = float(terms.mean())
    boots = np.empty(200)
    for b in range(boots.size):
        boots[b] = terms[rng.integers(0, samples, samples)].mean()
    return est, float(boots.std(ddof=1))


def sre_m2(state: StateVector, method: str = "exact", samples: int = 2000,
           seed=None) -> SreEstimate:
    """Stabilizer Renyi entropy M2 = -log2(sum_P <P>^4 / 2^n).

    The exact method enumerates Pauli strings (dense transform up to 14
    qubits, or an equivalent amplitude-space sum for larger sparse real
    states); the sampled method draws replica quadruples with a bootstrap
    uncertainty.
    """
    amps = state.amps
    if method == "exact":
        if state.n <= 14:
            val = _sre_dense(amps, state.n)
        else:
            val = _sre_sparse_exact(amps, state.n)
        m2 = float(-np.log2(max(val, _EIG_CLIP)))
        return SreEstimate(value=max(m2, 0.0), std_error=0.0, method="exact")
    if method == "sampled":
        est, err = _sre_sampled(amps, state.n, samples, seed)
        m2 = float(-np.log2(max(est, _EIG_CLIP)))
        std = err / (max(est, _EIG_CLIP) * np.log(2.0))
        return SreEstimate(value=m2, std_error=std, method="sampled",
                           samples=samples)
    raise ValueError("method must be 'exact' or 'sampled'")


# ---------------------------------------------------------------------------
# GHZ-grouped energy-loss estimator
# ---------------------------------------------------------------------------

# Clifford basis change diagonalizing sigma+ sigma- sigma- sigma+ + h.c. on
# four qubits: an H followed by a CNOT ladder (controls and targets by local
# index).  Applying its adjoint maps the hop-hop terms to Z strings.
GHZ_EVOLUTION_GATES = (("H", 1), ("CX", 1, 2), ("CX", 2, 0), ("CX", 0, 3))


def _gate_matrix(gate, n: int) -> np.ndarray:
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    if gate[0] == "H":
        mats = [h if i == gate[1] else np.eye(2) for i in range(n)]
        out = np.array([[1.0]])
        for m in mats:
            out = np.kron(out, m)
        return out
    if gate[0] == "CX":
        c, t = gate[1], gate[2]
        dim = 1 << n
        m = np.zeros((dim, dim))
        for v in range(dim):
            if (v >> (n - 1 - c)) & 1:
                m[v ^ (1 << (n - 1 - t)), v] = 1.0
            else:
                m[v, v] = 1.0
        return m
    raise ValueError(f"unknown gate {gate[0]}")


def ghz_evolution_unitary(n: int = 4) -> np.ndarray:
    """Dense matrix of the evolution/measurement GHZ transformation."""
    u = np.eye(1 << n)
    for gate in GHZ_EVOLUTION_GATES:
        u = _gate_matrix(gate, n) @ u
    return u


@dataclass(frozen=True)
class EstimatorGroup:
    name: str
    qubits: tuple[int, ...]       # register qubits the basis change acts on
    paulis: tuple[str, ...]       # diagonal strings over those qubits ("IZZI")
    coeffs: tuple[float, ...]
    ghz: bool                     # apply the GHZ adjoint before measuring

    def evaluate(self, state: StateVector) -> float:
        s = state
        if self.ghz:
            s = apply_unitary_on(ghz_evolution_unitary().conj().T,
                                 list(self.qubits), s)
        p = np.abs(s.amps) ** 2
        total = 0.0
        for label, coeff in zip(self.paulis, self.coeffs):
            ops = {self.qubits[k]: "Z"
                   for k, ch in enumerate(label) if ch == "Z"}
            ps = PauliSum(state.n, [PauliString.from_ops(state.n, ops)])
            total += coeff * ps.expectation(StateVector(s.amps, normalized=False))
        return total

    def as_pauli_sum(self, n: int) -> PauliSum:
        """O^dagger (C . P) O as an operator on the full register."""
        out = PauliSum.zero(n)
        k = len(self.qubits)
        u = ghz_evolution_unitary() if self.ghz else np.eye(1 << k)
        for label, coeff in zip(self.paulis, self.coeffs):
            local = PauliSum(k, [PauliString.from_label(label, coeff)])
            dense = u @ local.to_dense() @ u.conj().T
            out = out + _dense_to_pauli(dense, self.qubits, n)
        return out


def _dense_to_pauli(mat: np.ndarray, qubits: tuple[int, ...], n: int) -> PauliSum:
    k = len(qubits)
    terms = []
    for key in range(4 ** k):
        ops, kk = {}, key
        local = PauliString.from_ops(k, {}, 1.0)
        for i in range(k):
            letter = "IXYZ"[kk % 4]
            kk //= 4
            if letter != "I":
                ops[i] = letter
        local = PauliString.from_ops(k, ops)
        coeff = np.trace(local.to_dense().conj().T @ mat) / (1 << k)
        if abs(coeff) > 1e-12:
            terms.append(PauliString.from_ops(
                n, {qubits[i]: local.letter(i) for i in ops}, coeff))
    return PauliSum(n, terms)


def delta_hg_operator(spec: LatticeSpec) -> PauliSum:
    """Gauge-energy difference operator for the x=0 -> x=1 heavy move."""
    g2h = spec.g ** 2 / 2.0
    return g2h * (2.0 * charge_square(spec, 0)
                  + 4.0 * charge_cross(spec, 0, 1)
                  + 2.0 * charge_cross(spec, 0, 2))


def energy_loss_estimator(spec: LatticeSpec) -> tuple[EstimatorGroup, ...]:
    """The three measurement groups whose sum is the gauge-energy change."""
    if spec.Nc != 2:
        raise ValueError("estimator groups constructed for Nc=2")
    g2h = spec.g ** 2 / 2.0
    p1 = ("IIIIII", "ZZIIII", "ZIZIII", "ZIIZII", "IZZIII",
          "IZIZII", "ZIIIZI", "ZIIIIZ", "IZIIZI", "IZIIIZ")
    c1 = tuple(g2h / 8.0 * v for v in (6, -6, 2, -2, -2, 2, 1, -1, -1, 1))
    group1 = EstimatorGroup(
        name="diagonal", qubits=(0, 1, 2, 3, 4, 5),
        paulis=p1, coeffs=c1, ghz=False)
    p23 = ("ZZIZ", "IZZZ", "ZZZI", "IZII", "ZZZZ", "IZZI", "IZIZ", "ZZII")
    s23 = (-1, 1, -1, 1, -1, 1, 1, -1)
    group2 = EstimatorGroup(
        name="hop_01_23", qubits=(0, 1, 2, 3),
        paulis=p23, coeffs=tuple(g2h / 4.0 * s for s in s23), ghz=True)
    group3 = EstimatorGroup(
        name="hop_01_45", qubits=(0, 1, 4, 5),
        paulis=p23, coeffs=tuple(g2h / 8.0 * s for s in s23), ghz=True)
    return (group1, group2, group3)


def evaluate_energy_loss(groups, state: StateVector) -> tuple[list[float], float]:
    values = [g.evaluate(state) for g in groups]
    return values, float(sum(values))


# ---------------------------------------------------------------------------
# shot sampling and mitigation math
# ---------------------------------------------------------------------------

def shot_sample(state: StateVector, diagonal_paulis, n_shots: int,
                seed=None) -> list[tuple[float, float]]:
    """Empirical (mean, standard error) per diagonal string from sampled
    computational-basis bitstrings."""
    for ps in diagonal_paulis:
        if ps.x != 0:
            raise ValueError("shot_sample handles diagonal (Z/I) strings only")
    rng = np.random.default_rng(seed)
    p = np.abs(state.amps) ** 2
    p = p / p.sum()
    hits = rng.choice(p.size, size=n_shots, p=p)
    out = []
    for ps in diagonal_paulis:
        signs = 1.0 - 2.0 * (np.bitwise_count(hits & ps.z) & 1)
        vals = ps.coeff.real * signs
        out.append((float(vals.mean()),
                    float(vals.std(ddof=1) / np.sqrt(n_shots))))
    return out


def odr_rescale(meas_phys: float, meas_mit: float, pred_mit: float,
                cut: float = 0.005):
    """Operator-decoherence renormalization; None when below the cut."""
    if abs(meas_mit) < cut or abs(meas_phys) < cut:
        return None
    return meas_phys * pred_mit / meas_mit


def zne_extrapolate(values) -> tuple[float, float]:
    """Weighted linear fit of (noise_factor, estimate, error) to factor 0."""
    pts = list(values)
    if len({round(v[0], 12) for v in pts}) < 2:
        raise ValueError("ZNE needs at least two distinct noise factors")
    x = np.array([v[0] for v in pts], dtype=float)
    y = np.array([v[1] for v in pts], dtype=float)
    e = np.array([v[2] if len(v) > 2 and v[2] > 0 else 1.0 for v in pts])
    w = 1.0 / e ** 2
    design = np.vstack([np.ones_like(x), x]).T
    cov = np.linalg.inv(design.T @ (w[:, None] * design))
    beta = cov @ design.T @ (w * y)
    return float(beta[0]), float(np.sqrt(cov[0, 0]))


def depolarized(true_value: float, survival: float) -> float:
    """Global-depolarizing toy model: expectation damped by the survival
    probability, used to exercise the mitigation math without hardware."""
    return survival * true_value


# ---------------------------------------------------------------------------
# Hadamard test
# ---------------------------------------------------------------------------

def _trotter_groups(h: PauliSum):
    groups: dict[int, list[PauliString]] = {}
    for t in h.terms():
        groups.setdefault(t.x, []).append(t)
    return [PauliSum(h.n, groups[x]) for x in sorted(groups)]


def _apply_split_evolution(h: PauliSum, t: float, s: StateVector) -> StateVector:
    from .pauli import exp_sum_apply
    for g in _trotter_groups(h):
        s = exp_sum_apply(g, t, s)
    return s


def hadamard_test_energy(state: StateVector, h, dt_grid,
                         evolver: str = "exact",
                         fit_orders=(1, 2, 3)) -> tuple[float, float]:
    """<H> from ancilla-probability differences extrapolated to t -> 0.

    Simulates the one-ancilla circuit (H, S, controlled-U(t), H) for each
    grid time, forms (P0 - P1)/t, and fits polynomials in t; returns the
    median intercept and the half-spread over fit orders and trailing
    subranges as the uncertainty.

    ``h`` is the measured operator; passing a LatticeSpec measures the
    gauge-energy difference operator for that lattice.
    """
    if isinstance(h, LatticeSpec):
        h = delta_hg_operator(h)
    ts = np.asarray(sorted(dt_grid), dtype=float)
    if ts.size < max(fit_orders) + 2 or np.any(ts <= 0):
        raise ValueError("need a positive grid with more points than the fit order")
    ys = []
    for t in ts:
        if evolver == "exact":
            from .dynamics import evolve_exact
            evolved = evolve_exact(state, h, t)
        elif evolver == "trotter":
            evolved = _apply_split_evolution(h, t, state)
        else:
            raise ValueError("evolver must be 'exact' or 'trotter'")
        # ancilla register: |anc> (x) |psi>, anc prepared by H then S, final H
        branch0 = state.amps + 1j * evolved.amps
        branch1 = state.amps - 1j * evolved.amps
        full = np.concatenate([branch0, branch1]) / 2.0
        dim = state.amps.size
        p0 = float(np.sum(np.abs(full[:dim]) ** 2))
        p1 = float(np.sum(np.abs(full[dim:]) ** 2))
        ys.append((p0 - p1) / t)
    ys = np.array(ys)
    intercepts = []
    for order in fit_orders:
        for start in range(0, ts.size - (order + 2)):
            coeffs = np.polynomial.polynomial.polyfit(ts[start:], ys[start:], order)
            intercepts.append(coeffs[0])
    intercepts = np.array(intercepts)
    center = float(np.median(intercepts))
    spread = float(0.5 * (intercepts.max() - intercepts.min()))
    return center, spread
