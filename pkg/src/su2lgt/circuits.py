"""
Gate-level circuits: IR, resource accounting, text emission, and synthesis
of every circuit template used by the simulation pipeline.

Multi-qubit rotations exp(-i*theta*(P1 +- P2)) on adjacent qubits are
emitted as two-CNOT "R-boxes"; longer string rotations are reduced to
R-boxes by conjugating with +-pi/2 boxes found by a deterministic beam
search (the reduction is exact Clifford conjugation, verified by unitary
equivalence in the tests).  Four-body charge products and baryon operators
are diagonalized by GHZ-type Clifford transformations and emitted as a
CNOT parity chain walking a Gray cycle over the diagonal strings.

All circuits track a global phase so that simulated statevectors match the
operator-level pipeline exactly, not only up to phase.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .hamiltonian import (build_kinetic_parts, build_mass, charge_cross,
                          charge_cross_offdiag, charge_square,
                          symmetric_boundary_sites)
from .lattice import LatticeSpec
from .pauli import (PauliString, PauliSum, StateVector, _bit, _popcount,
                    apply_unitary_on)

# ---------------------------------------------------------------------------
# circuit IR
# ---------------------------------------------------------------------------

_ONE_QUBIT = ("h", "s", "sdg", "x", "z", "rx", "ry", "rz")
_TWO_QUBIT = ("cx", "cz")
_PARAMETRIC = ("rx", "ry", "rz")


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    param: float | None = None

    def __post_init__(self):
        if self.kind in _ONE_QUBIT:
            if len(self.qubits) != 1:
                raise ValueError(f"{self.kind} takes one qubit")
        elif self.kind in _TWO_QUBIT:
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError(f"{self.kind} takes two distinct qubits")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if (self.param is None) == (self.kind in _PARAMETRIC):
            raise ValueError(f"bad parameter for {self.kind}")

    def inverse(self) -> "Gate":
        if self.kind == "s":
            return Gate("sdg", self.qubits)
        if self.kind == "sdg":
            return Gate("s", self.qubits)
        if self.kind in _PARAMETRIC:
            return Gate(self.kind, self.qubits, -self.param)
        return self


_SQRT2 = math.sqrt(2.0)
_FIXED_1Q = {
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / _SQRT2,
    "s": np.diag([1.0, 1.0j]),
    "sdg": np.diag([1.0, -1.0j]),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "z": np.diag([1.0, -1.0]),
}
_CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
               dtype=complex)
_CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


def _gate_matrix(g: Gate) -> np.ndarray:
    if g.kind in _FIXED_1Q:
        return _FIXED_1Q[g.kind]
    if g.kind == "cx":
        return _CX
    if g.kind == "cz":
        return _CZ
    half = 0.5 * g.param
    c, s = math.cos(half), math.sin(half)
    if g.kind == "rz":
        return np.diag([c - 1j * s, c + 1j * s])
    if g.kind == "ry":
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)  # rx


class Circuit:
    """Register size, time-ordered gate list and a tracked global phase."""

    def __init__(self, n_qubits: int, gates=(), phase: float = 0.0):
        self.n_qubits = int(n_qubits)
        self.gates: list[Gate] = list(gates)
        self.phase = float(phase)
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate):
        for q in g.qubits:
            if not 0 <= q < self.n_qubits:
                raise ValueError(f"qubit {q} outside register of size {self.n_qubits}")

    def add(self, kind: str, *qubits: int, param: float | None = None) -> "Circuit":
        g = Gate(kind, tuple(qubits), param)
        self._check(g)
        self.gates.append(g)
        return self

    def __add__(self, other: "Circuit") -> "Circuit":
        if self.n_qubits != other.n_qubits:
            raise ValueError("register size mismatch")
        return Circuit(self.n_qubits, self.gates + other.gates,
                       self.phase + other.phase)

    def __iadd__(self, other: "Circuit") -> "Circuit":
        if self.n_qubits != other.n_qubits:
            raise ValueError("register size mismatch")
        self.gates.extend(other.gates)
        self.phase += other.phase
        return self

    def __eq__(self, other) -> bool:
        return (isinstance(other, Circuit) and self.n_qubits == other.n_qubits
                and self.gates == other.gates and self.phase == other.phase)

    def inverse(self) -> "Circuit":
        return Circuit(self.n_qubits, [g.inverse() for g in reversed(self.gates)],
                       -self.phase)

    def apply(self, state: StateVector) -> StateVector:
        if state.n != self.n_qubits:
            raise ValueError("register size mismatch")
        out = state
        for g in self.gates:
            out = apply_unitary_on(_gate_matrix(g), list(g.qubits), out)
        if self.phase:
            out = StateVector(np.exp(1j * self.phase) * out.amps, normalized=False)
        return out

    def unitary(self) -> np.ndarray:
        if self.n_qubits > 12:
            raise ValueError("dense unitary limited to 12 qubits")
        dim = 1 << self.n_qubits
        u = np.empty((dim, dim), dtype=complex)
        for col in range(dim):
            u[:, col] = self.apply(StateVector.basis(self.n_qubits, col)).amps
        return u

    def __repr__(self):
        return f"Circuit(n={self.n_qubits}, {len(self.gates)} gates)"


@dataclass(frozen=True)
class ResourceReport:
    two_qubit_count: int
    two_qubit_depth: int
    per_qubit: tuple[int, ...]


def count_resources(circuit: Circuit) -> ResourceReport:
    """Two-qubit count and depth by greedy ASAP layering.

    Each two-qubit gate starts in the earliest layer where both its qubits
    are free; single-qubit gates are free.
    """
    free = [0] * circuit.n_qubits
    per = [0] * circuit.n_qubits
    count = depth = 0
    for g in circuit.gates:
        if g.kind not in _TWO_QUBIT:
            continue
        a, b = g.qubits
        layer = max(free[a], free[b]) + 1
        free[a] = free[b] = layer
        depth = max(depth, layer)
        per[a] += 1
        per[b] += 1
        count += 1
    return ResourceReport(count, depth, tuple(per))


# ---------------------------------------------------------------------------
# text emission / parsing
# ---------------------------------------------------------------------------

class CircuitParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


def emit_text(circuit: Circuit) -> str:
    """Minimal OpenQASM-2 subset; the global phase rides in a comment."""
    lines = ["OPENQASM 2.0;",
             'include "qelib1.inc";',
             f"// phase: {circuit.phase!r}",
             f"qreg q[{circuit.n_qubits}];"]
    for g in circuit.gates:
        head = g.kind if g.param is None else f"{g.kind}({g.param!r})"
        args = ",".join(f"q[{q}]" for q in g.qubits)
        lines.append(f"{head} {args};")
    return "\n".join(lines) + "\n"


_GATE_RE = re.compile(r"^(\w+)(?:\(([^)]*)\))?\s+q\[(\d+)\](?:\s*,\s*q\[(\d+)\])?;$")


def parse_text(text: str) -> Circuit:
    lines = text.splitlines()
    n_qubits = None
    phase = 0.0
    gates: list[Gate] = []
    for i, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("// phase:"):
            try:
                phase = float(line[len("// phase:"):].strip())
            except ValueError:
                raise CircuitParseError("bad phase value", i, len("// phase:") + 1)
            continue
        if line.startswith("//") or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        if line.startswith("qreg"):
            m = re.match(r"^qreg\s+q\[(\d+)\];$", line)
            if not m:
                raise CircuitParseError("malformed qreg declaration", i, 1)
            n_qubits = int(m.group(1))
            continue
        m = _GATE_RE.match(line)
        if not m:
            raise CircuitParseError(f"unparseable statement {line!r}", i, 1)
        kind, param, qa, qb = m.group(1), m.group(2), m.group(3), m.group(4)
        if kind not in _ONE_QUBIT and kind not in _TWO_QUBIT:
            raise CircuitParseError(f"unknown gate {kind!r}", i, 1)
        if n_qubits is None:
            raise CircuitParseError("gate before qreg declaration", i, 1)
        try:
            pval = None if param is None else float(param)
        except ValueError:
            raise CircuitParseError(f"bad parameter {param!r}", i, len(kind) + 2)
        qubits = (int(qa),) if qb is None else (int(qa), int(qb))
        try:
            gates.append(Gate(kind, qubits, pval))
        except ValueError as exc:
            raise CircuitParseError(str(exc), i, 1)
    if n_qubits is None:
        raise CircuitParseError("missing qreg declaration", max(1, len(lines)), 1)
    return Circuit(n_qubits, gates, phase)


# ---------------------------------------------------------------------------
# R-boxes
# ---------------------------------------------------------------------------

# R^{XX}_pm(t) = exp(-i t/2 (XX pm YY)); R^{XY}_pm(t) = exp(-i t/2 (YX pm XY)).
# Each is two CNOTs around single-qubit Y rotations; phase-exact.
_RBOX_KINDS = ("XX+", "XX-", "XY+", "XY-")


def rbox(kind: str, theta: float, a: int, b: int,
         n_qubits: int | None = None) -> Circuit:
    """Two-CNOT block for the two-body double rotations; a is the first
    tensor factor of the defining generator."""
    if kind not in _RBOX_KINDS:
        raise ValueError(f"unknown R-box kind {kind!r}")
    if a == b:
        raise ValueError("R-box needs two distinct qubits")
    n = n_qubits if n_qubits is not None else max(a, b) + 1
    c = Circuit(n)
    xx = kind.startswith("XX")
    plus = kind.endswith("+")
    c.add("h", a)
    if xx:
        c.add("s", b)
    c.add("cx", a, b)
    if xx:
        c.add("ry", a, param=theta if plus else -theta)
        c.add("ry", b, param=theta)
    else:
        c.add("ry", a, param=-theta)
        c.add("ry", b, param=theta if plus else -theta)
    c.add("cx", a, b)
    c.add("h", a)
    if xx:
        c.add("sdg", b)
    return c


# generator factors (letters on the a/b wires) and relative sign per kind
_BOX_FACTORS = {
    "XX+": (("X", "X"), ("Y", "Y"), +1),
    "XX-": (("X", "X"), ("Y", "Y"), -1),
    "XY+": (("Y", "X"), ("X", "Y"), +1),
    "XY-": (("Y", "X"), ("X", "Y"), -1),
}


# ---------------------------------------------------------------------------
# Clifford conjugation of Pauli strings
# ---------------------------------------------------------------------------

def _conj_gate_string(g: Gate, t: PauliString) -> PauliString:
    """U t U^dag for a Clifford gate U (h, s, sdg, x, z, cx, cz)."""
    n, x, z, c = t.n, t.x, t.z, t.coeff
    if g.kind in _TWO_QUBIT:
        ba, bb = _bit(n, g.qubits[0]), _bit(n, g.qubits[1])
        if g.kind == "cx":
            if (x & ba) and (z & bb) and (bool(x & bb) == bool(z & ba)):
                c = -c
            nx = x ^ bb if x & ba else x
            nz = z ^ ba if z & bb else z
            return PauliString(n, nx, nz, c)
        # cz
        if (x & ba) and (x & bb) and (bool(z & ba) != bool(z & bb)):
            c = -c
        nz = z
        if x & bb:
            nz ^= ba
        if x & ba:
            nz ^= bb
        return PauliString(n, x, nz, c)
    b = _bit(n, g.qubits[0])
    if g.kind == "h":
        if (x & b) and (z & b):
            c = -c
        nx = (x & ~b) | (b if z & b else 0)
        nz = (z & ~b) | (b if x & b else 0)
        return PauliString(n, nx, nz, c)
    if g.kind == "s":
        if x & b:
            if z & b:
                c = -c
            return PauliString(n, x, z ^ b, c)
        return PauliString(n, x, z, c)
    if g.kind == "sdg":
        if x & b:
            if not z & b:
                c = -c
            return PauliString(n, x, z ^ b, c)
        return PauliString(n, x, z, c)
    if g.kind == "x":
        return PauliString(n, x, z, -c if z & b else c)
    if g.kind == "z":
        return PauliString(n, x, z, -c if x & b else c)
    raise ValueError(f"gate {g.kind!r} is not Clifford")


def clifford_conjugate(gates, op: PauliSum) -> PauliSum:
    """U op U^dag for U the product of the gates in circuit (time) order."""
    terms = op.terms()
    for g in gates:
        terms = [_conj_gate_string(g, t) for t in terms]
    return PauliSum(op.n, terms)


# ---------------------------------------------------------------------------
# string-rotation synthesis by pi/2-box reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class _Box:
    kind: str
    sign: int   # the box angle is sign * pi/2
    a: int      # b = a + 1

    @property
    def b(self) -> int:
        return self.a + 1


def _anticommutes(t: PauliString, p: PauliString) -> bool:
    return (_popcount(t.x & p.z) + _popcount(t.z & p.x)) % 2 == 1


def _conj_by_box(gen: PauliSum, box: _Box, n: int) -> PauliSum:
    """B gen B^dag for B = exp(-i sign*pi/4 P1) exp(-i sign*sigma*pi/4 P2)."""
    (l1, l2, sigma) = _BOX_FACTORS[box.kind]
    out = gen
    for letters, rel in ((l1, 1), (l2, sigma)):
        p = PauliString.from_ops(n, {box.a: letters[0], box.b: letters[1]})
        sgn = box.sign * rel
        terms = []
        for t in out.terms():
            if _anticommutes(t, p):
                terms.append((-1j * sgn) * (p * t))
            else:
                terms.append(t)
        out = PauliSum(n, terms)
    return out


def _support_mask(gen: PauliSum) -> int:
    m = 0
    for (x, z), _ in gen._terms.items():
        m |= x | z
    return m


def _classify_pair(gen: PauliSum):
    """(kind, base_coeff, (a, b)) if gen = base*(P1 + sigma*P2) on adjacent
    qubits in R-box form, else None."""
    terms = gen.terms()
    if len(terms) != 2:
        return None
    supp = sorted({j for t in terms for j in t.support()})
    if len(supp) != 2 or supp[1] != supp[0] + 1:
        return None
    a, b = supp
    by_letters = {}
    for t in terms:
        if abs(t.coeff.imag) > 1e-10:
            return None
        by_letters[(t.letter(a), t.letter(b))] = t.coeff.real
    keys = set(by_letters)
    if keys == {("X", "X"), ("Y", "Y")}:
        cxx, cyy = by_letters[("X", "X")], by_letters[("Y", "Y")]
        if abs(cyy - cxx) < 1e-10:
            return ("XX+", cxx, (a, b))
        if abs(cyy + cxx) < 1e-10:
            return ("XX-", cxx, (a, b))
        return None
    if keys == {("Y", "X"), ("X", "Y")}:
        cyx, cxy = by_letters[("Y", "X")], by_letters[("X", "Y")]
        if abs(cxy - cyx) < 1e-10:
            return ("XY+", cyx, (a, b))
        if abs(cxy + cyx) < 1e-10:
            return ("XY-", cyx, (a, b))
        return None
    return None


class SynthesisError(RuntimeError):
    pass


def _canon(gens) -> tuple:
    return tuple(tuple(sorted((x, z, round(c.real, 10), round(c.imag, 10))
                              for (x, z), c in g._terms.items()))
                 for g in gens)


def _box_layers(boxes) -> int:
    free: dict[int, int] = {}
    depth = 0
    for a, b in boxes:
        layer = max(free.get(a, 0), free.get(b, 0)) + 1
        free[a] = free[b] = layer
        depth = max(depth, layer)
    return depth


def _total_support(gens) -> int:
    return sum(_popcount(_support_mask(g)) for g in gens)


_REDUCTION_CACHE: dict[tuple, tuple] = {}
_BEAM_WIDTH = 64


def _search_reduction(gens: list[PauliSum], w: int) -> tuple[_Box, ...]:
    """Deterministic beam search for a pi/2-box sequence A such that every
    A gen A^dag is a two-qubit R-box generator; minimizes the layered depth
    of the assembled A + rotations + A^dag block, then the box count."""
    key = _canon(gens)
    cached = _REDUCTION_CACHE.get(key)
    if cached is not None:
        return cached

    def finished(gs):
        return all(_classify_pair(g) is not None for g in gs)

    def final_cost(gs, boxes):
        pairs = [list(boxes)]
        seq = [(bx.a, bx.b) for bx in boxes]
        seq += [_classify_pair(g)[2] for g in gs]
        seq += [(bx.a, bx.b) for bx in reversed(boxes)]
        return (_box_layers(seq), len(boxes) + len(gs) + len(boxes))

    best: tuple | None = None  # (layers, boxes_total, boxes)
    frontier = [(tuple(gens), ())]
    seen = {key}
    while frontier:
        nxt: dict[tuple, tuple] = {}
        for gs, boxes in frontier:
            if finished(gs):
                cost = final_cost(gs, boxes)
                cand = (cost[0], cost[1], boxes)
                if best is None or cand < best:
                    best = cand
                continue
            total = _total_support(gs)
            for a in range(w - 1):
                for kind in _RBOX_KINDS:
                    for sign in (1, -1):
                        box = _Box(kind, sign, a)
                        gs2 = []
                        ok = True
                        for g in gs:
                            g2 = _conj_by_box(g, box, w)
                            if _popcount(_support_mask(g2)) > _popcount(_support_mask(g)):
                                ok = False
                                break
                            gs2.append(g2)
                        if not ok:
                            continue
                        if _total_support(gs2) >= total:
                            continue
                        k2 = _canon(gs2)
                        if k2 in seen:
                            continue
                        entry = (tuple(gs2), boxes + (box,))
                        score = (_total_support(gs2),
                                 _box_layers([(bx.a, bx.b) for bx in entry[1]]),
                                 len(entry[1]))
                        prev = nxt.get(k2)
                        if prev is None or score < prev[0]:
                            nxt[k2] = (score, entry)
        ranked = sorted(nxt.items(), key=lambda kv: (kv[1][0], kv[0]))
        frontier = [entry for _, (_, entry) in ranked[:_BEAM_WIDTH]]
        for k2, _ in ranked[:_BEAM_WIDTH]:
            seen.add(k2)
    if best is None:
        raise SynthesisError("box reduction failed for the given generators")
    result = best[2]
    if len(_REDUCTION_CACHE) < 256:
        _REDUCTION_CACHE[key] = result
    return result


def _localize(gens: list[PauliSum], n: int) -> tuple[list[PauliSum], int, int]:
    mask = 0
    for g in gens:
        mask |= _support_mask(g)
    supp = [j for j in range(n) if mask & _bit(n, j)]
    off, w = supp[0], supp[-1] - supp[0] + 1
    shift = n - off - w
    local = [PauliSum(w, [PauliString(w, t.x >> shift, t.z >> shift, t.coeff)
                          for t in g.terms()]) for g in gens]
    return local, off, w


def _rotation_block(n: int, gens_lams: list[tuple[PauliSum, float]]) -> Circuit:
    """Circuit for prod_k exp(-i lam_k gen_k) where the generators pairwise
    commute; connected support components are synthesized independently."""
    circ = Circuit(n)
    remaining = list(range(len(gens_lams)))
    comps: list[list[int]] = []
    masks = [_support_mask(g) for g, _ in gens_lams]
    while remaining:
        comp = [remaining.pop(0)]
        mask = masks[comp[0]]
        changed = True
        while changed:
            changed = False
            for i in list(remaining):
                if masks[i] & mask:
                    comp.append(i)
                    mask |= masks[i]
                    remaining.remove(i)
                    changed = True
        comps.append(comp)
    for comp in comps:
        gens = [gens_lams[i][0] for i in comp]
        lams = [gens_lams[i][1] for i in comp]
        local, off, w = _localize(gens, n)
        boxes = _search_reduction(local, w)
        reduced = local
        for box in boxes:
            reduced = [_conj_by_box(g, box, w) for g in reduced]
        for box in boxes:
            circ += rbox(box.kind, box.sign * math.pi / 2.0,
                         box.a + off, box.b + off, n)
        for g_red, lam in zip(reduced, lams):
            info = _classify_pair(g_red)
            if info is None:
                raise SynthesisError("reduced generator is not R-box expressible")
            kind, base, (a, b) = info
            circ += rbox(kind, 2.0 * lam * base, a + off, b + off, n)
        for box in reversed(boxes):
            circ += rbox(box.kind, -box.sign * math.pi / 2.0,
                         box.a + off, box.b + off, n)
    return circ


# ---------------------------------------------------------------------------
# GHZ transformations and diagonal parity-chain blocks
# ---------------------------------------------------------------------------

# state-preparation GHZ transformation G (baryon diagonalization): local
# wires 0..3, applied in circuit order.
_GHZ_PREP_LOCAL = (("h", 2), ("s", 2), ("cx", 2, 0), ("cx", 0, 3), ("cx", 2, 1))

# evolution GHZ transformation (charge hop-hop diagonalization); must match
# observables.GHZ_EVOLUTION_GATES.
_GHZ_EVOL_LOCAL = (("h", 1), ("cx", 1, 2), ("cx", 2, 0), ("cx", 0, 3))


def _mapped_gates(local_gates, wires: tuple[int, ...]) -> list[Gate]:
    out = []
    for spec_ in local_gates:
        kind = spec_[0].lower()
        qubits = tuple(wires[i] for i in spec_[1:])
        out.append(Gate(kind, qubits))
    return out


def ghz_state_prep_circuit(wires: tuple[int, int, int, int],
                           n_qubits: int | None = None) -> Circuit:
    """The Clifford G that maps the baryon generators to diagonal form."""
    n = n_qubits if n_qubits is not None else max(wires) + 1
    return Circuit(n, _mapped_gates(_GHZ_PREP_LOCAL, tuple(wires)))


def ghz_evolution_circuit(wires: tuple[int, int, int, int],
                          n_qubits: int | None = None) -> Circuit:
    """The Clifford used for hop-hop gauge terms and grouped measurement."""
    n = n_qubits if n_qubits is not None else max(wires) + 1
    return Circuit(n, _mapped_gates(_GHZ_EVOL_LOCAL, tuple(wires)))


def _gray_cycle(k: int) -> list[int]:
    return [i ^ (i >> 1) for i in range(1 << k)]


def _ghz_diagonal_block(n: int, wires: tuple[int, ...], local_gates,
                        op: PauliSum, lam: float) -> Circuit:
    """exp(-i lam op) as G . (RZ parity chain) . G^dag with G the given GHZ
    transformation on `wires`; op must diagonalize under G^dag."""
    g_circ = Circuit(n, _mapped_gates(local_gates, tuple(wires)))
    diag = clifford_conjugate(g_circ.inverse().gates, op)
    phase = 0.0
    subsets: dict[frozenset, float] = {}
    for t in diag.terms():
        if t.x != 0:
            raise SynthesisError("operator does not diagonalize under the GHZ map")
        if abs(t.coeff.imag) > 1e-10:
            raise SynthesisError("non-Hermitian diagonal coefficient")
        supp = frozenset(t.support())
        if not supp:
            phase += -lam * t.coeff.real
            continue
        subsets[supp] = t.coeff.real
    common = None
    for s in subsets:
        common = set(s) if common is None else common & s
    if not common:
        raise SynthesisError("diagonal strings share no common qubit")
    active = set(wires)
    targets = sorted(common & active)
    if len(targets) != 1:
        raise SynthesisError("ambiguous parity-chain target")
    target = targets[0]
    mids = sorted(common - {target})
    rem_wires = sorted({j for s in subsets for j in s} - set(common))
    k = len(rem_wires)
    if len(subsets) != 1 << k:
        raise SynthesisError("diagonal strings do not fill the parity cube")
    circ = Circuit(n, phase=phase)
    circ += g_circ.inverse()
    for m in mids:
        circ.add("cx", m, target)
    codes = _gray_cycle(k)
    for i, code in enumerate(codes):
        if i > 0:
            toggled = (codes[i - 1] ^ code).bit_length() - 1
            circ.add("cx", rem_wires[toggled], target)
        subset = frozenset([target, *mids,
                            *(rem_wires[j] for j in range(k) if code >> j & 1)])
        if subset not in subsets:
            raise SynthesisError("missing diagonal string in parity cube")
        circ.add("rz", target, param=2.0 * lam * subsets[subset])
    if k:
        circ.add("cx", rem_wires[codes[-1].bit_length() - 1], target)
    for m in reversed(mids):
        circ.add("cx", m, target)
    circ += g_circ
    return circ


_PAIR_DIAG_LOCAL = (("h", 0), ("cx", 0, 1), ("cx", 0, 2), ("cx", 1, 3))


def _diagonal_walk(n: int, subsets: dict, lam: float) -> Circuit:
    """exp(-i lam sum_s c_s Z_s) for diagonal strings via parity walks.

    Repeatedly picks the qubit covering the most remaining strings as the
    parity target; strings forming a full cube over the other wires are
    walked on a Gray cycle, anything else by a greedy nearest-parity walk.
    """
    circ = Circuit(n)
    remaining = {frozenset(s): c for s, c in subsets.items()}
    while remaining:
        counts: dict[int, int] = {}
        for s in remaining:
            for j in s:
                counts[j] = counts.get(j, 0) + 1
        target = min(counts, key=lambda j: (-counts[j], j))
        batch = [s for s in remaining if target in s]
        rest = sorted({j for s in batch for j in s} - {target})
        k = len(rest)
        cube = [frozenset([target, *(rest[j] for j in range(k) if code >> j & 1)])
                for code in _gray_cycle(k)]
        if len(batch) == 1 << k and set(cube) == set(batch):
            order = cube
        else:
            order = []
            cur = frozenset([target])
            pending = set(batch)
            while pending:
                nxt = min(pending, key=lambda s: (len(s ^ cur), sorted(s)))
                order.append(nxt)
                pending.discard(nxt)
                cur = nxt
        cur = frozenset([target])
        for s in order:
            for j in sorted(cur ^ s):
                circ.add("cx", j, target)
            cur = s
            circ.add("rz", target, param=2.0 * lam * remaining[s])
        for j in sorted(cur - {target}):
            circ.add("cx", j, target)
        for s in batch:
            del remaining[s]
    return circ


def _pair_diagonal_block(n: int, wires: tuple[int, ...], op: PauliSum,
                         lam: float) -> Circuit:
    """exp(-i lam op) for one full charge-pair generator.

    Conjugation by a CX-depth-2 Clifford diagonalizes both the hop-hop and
    the ZZ parts of the generator at once; the diagonal exponential is then
    a parity walk of RZ rotations."""
    g_circ = Circuit(n, _mapped_gates(_PAIR_DIAG_LOCAL, tuple(wires)))
    diag = clifford_conjugate(g_circ.inverse().gates, op)
    phase = 0.0
    subsets: dict[frozenset, float] = {}
    for t in diag.terms():
        if t.x != 0:
            raise SynthesisError("charge-pair operator failed to diagonalize")
        if abs(t.coeff.imag) > 1e-10:
            raise SynthesisError("non-Hermitian diagonal coefficient")
        supp = frozenset(t.support())
        if not supp:
            phase += -lam * t.coeff.real
            continue
        subsets[supp] = t.coeff.real
    circ = Circuit(n, phase=phase)
    circ += g_circ.inverse()
    circ += _diagonal_walk(n, subsets, lam)
    circ += g_circ
    return circ


# ---------------------------------------------------------------------------
# state preparation
# ---------------------------------------------------------------------------

def sc_prep_circuit(spec: LatticeSpec) -> Circuit:
    """Prepare the strong-coupling ground state from |0...0>.

    Vacuum sites are a single X layer; each heavy-quark site adds three
    CNOTs (total two-qubit depth 2) preparing its color-singlet doublet.
    """
    if spec.Nc != 2:
        raise ValueError("circuit templates are implemented for Nc=2")
    c = Circuit(spec.n_qubits)
    for x in range(spec.L):
        j = 6 * x
        if x in spec.heavy_positions:
            c.add("x", j)
            c.add("x", j + 3)
            c.add("h", j + 2)
            c.add("cx", j + 2, j + 1)
            c.add("cx", j + 1, j)
            c.add("cx", j + 2, j + 3)
            c.add("z", j)
        else:
            for q in range(j, j + 4):
                c.add("x", q)
    return c


# ---------------------------------------------------------------------------
# variational layer circuits
# ---------------------------------------------------------------------------

def meson_circuit(spec: LatticeSpec, d: int, x: int, theta: float) -> Circuit:
    """exp(-i theta O_Md) starting at spatial site x."""
    from .ansatz import meson_operator

    op = meson_operator(spec, d, x)
    by_start: dict[int, list[PauliString]] = {}
    for t in op.terms():
        by_start.setdefault(min(t.support()), []).append(t)
    gens = [(PauliSum(spec.n_qubits, ts), theta)
            for _, ts in sorted(by_start.items())]
    return _rotation_block(spec.n_qubits, gens)


def baryon_circuit(spec: LatticeSpec, d: int, x: int, theta: float) -> Circuit:
    """exp(-i theta O_Bd) via the state-preparation GHZ conjugation."""
    from .ansatz import _BARYON_NZ, _BARYON_START, baryon_operator

    if d not in (0, 1):
        raise ValueError("baryon circuits are synthesized for d in {0, 1}")
    op = baryon_operator(spec, d, x)
    j0 = 6 * x + _BARYON_START[d]
    k = _BARYON_NZ[d]
    active = (j0, j0 + 1, j0 + 2 + k, j0 + 3 + k)
    return _ghz_diagonal_block(spec.n_qubits, active, _GHZ_PREP_LOCAL, op, theta)


_LAYER_RE = re.compile(r"^O_([MB])(\d)\^\((\d+)(?:,\d+)*\)$")


def layer_circuit(spec: LatticeSpec, name: str, theta: float) -> Circuit:
    """Circuit for one ansatz layer named like the pool operators; summed
    layers ('A+B') share the angle."""
    circ = Circuit(spec.n_qubits)
    for part in name.split("+"):
        m = _LAYER_RE.match(part.strip())
        if not m:
            raise ValueError(f"unrecognized layer name {part!r}")
        kind, d, x = m.group(1), int(m.group(2)), int(m.group(3))
        if kind == "M":
            circ += meson_circuit(spec, d, x, theta)
        else:
            circ += baryon_circuit(spec, d, x, theta)
    return circ


def ansatz_circuit(spec: LatticeSpec, names=None, angles=None) -> Circuit:
    """The layered variational preparation; defaults to the L=3 reference
    sequence and angles."""
    from .ansatz import L3_Q1_ANGLES, L3_Q1_SEQUENCE

    if names is None:
        names = L3_Q1_SEQUENCE
        if angles is None:
            angles = L3_Q1_ANGLES
    if angles is None or len(angles) != len(names):
        raise ValueError("need one angle per layer")
    circ = Circuit(spec.n_qubits)
    for name, theta in zip(names, angles):
        circ += layer_circuit(spec, name, float(theta))
    return circ


# ---------------------------------------------------------------------------
# heavy-quark FSWAP
# ---------------------------------------------------------------------------

def fswap_circuit(spec: LatticeSpec, x_from: int, x_to: int) -> Circuit:
    """Translate a heavy quark between adjacent sites; equals
    dynamics.fswap_move including the global phase."""
    from .dynamics import _fswap_generator

    if abs(x_from - x_to) != 1:
        raise ValueError("heavy quarks move only between adjacent sites")
    if not (0 <= x_from < spec.L and 0 <= x_to < spec.L):
        raise ValueError("move outside the lattice")
    x = min(x_from, x_to)
    n = spec.n_qubits
    lam = math.pi / 4.0
    string_gens: list[tuple[PauliSum, float]] = []
    circ = Circuit(n)
    for c in range(spec.Nc):
        gen = _fswap_generator(spec, x, c)
        strings, singles = [], []
        for t in gen.terms():
            if t.x:
                strings.append(t)
            elif t.z:
                singles.append(t)
            else:
                circ.phase += -lam * t.coeff.real
        string_gens.append((PauliSum(n, strings), lam))
        for t in singles:
            (j,) = t.support()
            circ.add("rz", j, param=2.0 * lam * t.coeff.real)
    circ += _rotation_block(n, string_gens)
    return circ


# ---------------------------------------------------------------------------
# Trotterized evolution circuit
# ---------------------------------------------------------------------------

def _kinetic_block(spec: LatticeSpec, which: str, theta: float) -> Circuit:
    intra, inter = build_kinetic_parts(spec)
    piece = intra if which == "intra" else inter
    by_supp: dict[tuple, list[PauliString]] = {}
    for t in piece.terms():
        by_supp.setdefault(tuple(t.support()), []).append(t)
    gens = [(PauliSum(spec.n_qubits, ts), theta)
            for _, ts in sorted(by_supp.items())]
    return _rotation_block(spec.n_qubits, gens)


def _gauge_pairs(spec: LatticeSpec) -> dict[tuple[int, int], float]:
    half_g2 = spec.g ** 2 / 2.0
    weights: dict[tuple[int, int], float] = {}
    for b in range(spec.n_boundaries - 1):
        sites = symmetric_boundary_sites(spec, b)
        for i, nn in enumerate(sites):
            for m in sites[i + 1:]:
                key = (nn, m)
                weights[key] = weights.get(key, 0.0) + 2.0 * half_g2
    return weights


def _mass_gauge_block(spec: LatticeSpec, theta: float) -> Circuit:
    """Time-symmetric mass + gauge factor matching dynamics.trotter_step.

    Half the diagonal single-qubit rotations, the charge-pair rounds
    forward at half angle with the final round's two halves merged, the
    rounds reversed at half angle, then the remaining diagonal half.  The
    charge-square ZZ rotations commute with every pair generator and are
    emitted once at full angle."""
    n = spec.n_qubits
    half_g2 = spec.g ** 2 / 2.0
    diag_sum = build_mass(spec)
    for b in range(spec.n_boundaries - 1):
        sites = symmetric_boundary_sites(spec, b)
        for i, nn in enumerate(sites):
            diag_sum = diag_sum + half_g2 * charge_square(spec, nn)
    circ = Circuit(n)
    singles: list[tuple[int, float]] = []
    for t in diag_sum.terms():
        if t.x != 0:
            raise SynthesisError("unexpected off-diagonal term in the diagonal block")
        supp = t.support()
        coeff = t.coeff.real
        if not supp:
            circ.phase += -theta * coeff
        elif len(supp) == 1:
            singles.append((supp[0], coeff))
        elif len(supp) == 2:
            a, b2 = supp
            circ.add("cx", a, b2)
            circ.add("rz", b2, param=2.0 * theta * coeff)
            circ.add("cx", a, b2)
        else:
            raise SynthesisError("diagonal gauge term beyond two qubits")
    for q, coeff in singles:
        circ.add("rz", q, param=theta * coeff)
    from .dynamics import gauge_pair_rounds

    weights = _gauge_pairs(spec)
    rounds = gauge_pair_rounds(weights)
    sched: list[tuple[tuple[int, int], float]] = []
    if rounds:
        for r in rounds[:-1]:
            sched.extend((p, 0.5) for p in r)
        sched.extend((p, 1.0) for p in rounds[-1])
        for r in reversed(rounds[:-1]):
            sched.extend((p, 0.5) for p in reversed(r))
    for (nn, m), frac in sched:
        op = weights[(nn, m)] * charge_cross(spec, nn, m)
        wires = (2 * nn, 2 * nn + 1, 2 * m, 2 * m + 1)
        circ += _pair_diagonal_block(n, wires, op, frac * theta)
    for q, coeff in singles:
        circ.add("rz", q, param=theta * coeff)
    return circ


def trotter_circuit(spec: LatticeSpec, t: float, order: int = 2,
                    steps: int = 1) -> Circuit:
    """Trotter steps of exp(-i t (H_k + H_m + H_g)), matching
    dynamics.trotter_step applied `steps` times with step size t.

    For order 2 the boundary (inter-site) kinetic halves of consecutive
    steps are merged into full-angle blocks.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if steps < 1:
        raise ValueError("steps must be positive")
    n = spec.n_qubits
    circ = Circuit(n)
    if order == 1:
        for _ in range(steps):
            circ += _kinetic_block(spec, "inter", t)
            circ += _kinetic_block(spec, "intra", t)
            circ += _mass_gauge_block(spec, t)
        return circ
    circ += _kinetic_block(spec, "inter", t / 2.0)
    for k in range(steps):
        circ += _kinetic_block(spec, "intra", t / 2.0)
        circ += _mass_gauge_block(spec, t)
        circ += _kinetic_block(spec, "intra", t / 2.0)
        circ += _kinetic_block(spec, "inter", t if k < steps - 1 else t / 2.0)
    return circ


# ---------------------------------------------------------------------------
# measurement bases and the full pipeline
# ---------------------------------------------------------------------------

def measurement_basis_circuit(group, n_qubits: int | None = None) -> Circuit:
    """Basis change after which every string of the estimator group is
    diagonal: the adjoint GHZ transformation on the group's qubits (empty
    for already-diagonal groups)."""
    n = n_qubits if n_qubits is not None else max(group.qubits) + 1
    if not getattr(group, "ghz", False):
        return Circuit(n)
    return ghz_evolution_circuit(tuple(group.qubits), n).inverse()


def pipeline_circuit(spec: LatticeSpec | None = None, t: float = 1.0,
                     order: int = 2, steps: int = 1) -> Circuit:
    """SC preparation, variational layers, heavy-quark move and Trotterized
    evolution for the reference L=3 protocol."""
    if spec is None:
        spec = LatticeSpec(L=3, heavy_positions=frozenset({0}))
    circ = sc_prep_circuit(spec)
    circ += ansatz_circuit(spec)
    circ += fswap_circuit(spec, 0, 1)
    circ += trotter_circuit(spec, t, order=order, steps=steps)
    return circ
