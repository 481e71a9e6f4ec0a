"""
Sparse Pauli-string algebra and a matrix-free statevector engine.

Conventions
-----------
- Qubit 0 is the *leftmost* qubit in ket notation and the most significant
  bit of the basis-state integer, so printed kets read left-to-right.
- |0> is spin-up: Z|0> = +|0>, Z|1> = -|1>.
- A Pauli string is stored as two bitmasks (X-part, Z-part) plus a complex
  coefficient.  A qubit with both bits set carries Y.  The operator is

      coeff * i^{|x & z|} * X^x Z^z

  which equals coeff times the literal product of the per-qubit letters
  (using Y = i X Z).
"""
from __future__ import annotations

import numpy as np

_LETTERS = "IXYZ"


def _bit(n_qubits: int, j: int) -> int:
    """Mask bit for qubit j (qubit 0 = most significant bit)."""
    return 1 << (n_qubits - 1 - j)


def _popcount(v: int) -> int:
    return bin(v).count("1")


_SIGN_CACHE: dict[tuple[int, int], np.ndarray] = {}
_PERM_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _sign_vector(n_qubits: int, z_mask: int) -> np.ndarray:
    """(-1)^{parity(sigma & z)} for every basis index sigma, as float64."""
    key = (n_qubits, z_mask)
    cached = _SIGN_CACHE.get(key)
    if cached is not None:
        return cached
    signs = np.ones(1 << n_qubits)
    for p in range(n_qubits):
        if z_mask >> p & 1:
            signs.reshape(-1, 1 << (p + 1))[:, 1 << p:] *= -1.0
    signs.setflags(write=False)
    if len(_SIGN_CACHE) < 256:
        _SIGN_CACHE[key] = signs
    return signs


def _perm_vector(n_qubits: int, x_mask: int) -> np.ndarray:
    """sigma ^ x for every basis index sigma (an involutive permutation)."""
    key = (n_qubits, x_mask)
    cached = _PERM_CACHE.get(key)
    if cached is not None:
        return cached
    perm = np.arange(1 << n_qubits) ^ x_mask
    perm.setflags(write=False)
    if len(_PERM_CACHE) < 256:
        _PERM_CACHE[key] = perm
    return perm


class PauliString:
    """A single weighted Pauli string on a fixed register."""

    __slots__ = ("n", "x", "z", "coeff")

    def __init__(self, n: int, x: int = 0, z: int = 0, coeff: complex = 1.0):
        self.n = n
        self.x = x
        self.z = z
        self.coeff = complex(coeff)

    # -- constructors -------------------------------------------------
    @classmethod
    def from_label(cls, label: str, coeff: complex = 1.0) -> "PauliString":
        """Build from a letter string like 'XIZY' (qubit 0 first)."""
        n = len(label)
        x = z = 0
        for j, ch in enumerate(label.upper()):
            b = _bit(n, j)
            if ch == "X":
                x |= b
            elif ch == "Y":
                x |= b
                z |= b
            elif ch == "Z":
                z |= b
            elif ch != "I":
                raise ValueError(f"bad Pauli letter {ch!r}")
        return cls(n, x, z, coeff)

    @classmethod
    def from_ops(cls, n: int, ops: dict[int, str], coeff: complex = 1.0) -> "PauliString":
        """Build from {qubit: letter}; unlisted qubits are identity."""
        label = ["I"] * n
        for j, ch in ops.items():
            if not 0 <= j < n:
                raise IndexError(f"qubit {j} outside register of size {n}")
            label[j] = ch
        return cls.from_label("".join(label), coeff)

    # -- basic queries ------------------------------------------------
    def letter(self, j: int) -> str:
        b = _bit(self.n, j)
        return _LETTERS[(1 if self.x & b else 0) + (3 if self.z & b else 0) - (2 if self.x & b and self.z & b else 0)]

    def label(self) -> str:
        return "".join(self.letter(j) for j in range(self.n))

    @property
    def key(self) -> tuple[int, int]:
        return (self.x, self.z)

    def support(self) -> list[int]:
        m = self.x | self.z
        return [j for j in range(self.n) if m & _bit(self.n, j)]

    # -- algebra ------------------------------------------------------
    def __mul__(self, other):
        if isinstance(other, PauliString):
            if self.n != other.n:
                raise ValueError("register size mismatch")
            x, z = self.x ^ other.x, self.z ^ other.z
            y1, y2, y12 = _popcount(self.x & self.z), _popcount(other.x & other.z), _popcount(x & z)
            phase = 1j ** ((y1 + y2 - y12) % 4)
            if _popcount(self.z & other.x) % 2:
                phase = -phase
            return PauliString(self.n, x, z, self.coeff * other.coeff * phase)
        return PauliString(self.n, self.x, self.z, self.coeff * other)

    __rmul__ = __mul__

    def adjoint(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.coeff.conjugate())

    def apply(self, state: "StateVector") -> "StateVector":
        """Matrix-free |out> = P|state>: bit flips for X/Y, signs for Y/Z."""
        if state.n != self.n:
            raise ValueError("register size mismatch")
        c = self.coeff * 1j ** (_popcount(self.x & self.z) % 4)
        amps = c * _sign_vector(self.n, self.z) * state.amps
        if self.x:
            amps = amps[_perm_vector(self.n, self.x)]
        return StateVector(amps, normalized=False)

    def to_dense(self) -> np.ndarray:
        if self.n > 12:
            raise ValueError("dense matrix limited to 12 qubits")
        dim = 1 << self.n
        c = self.coeff * 1j ** (_popcount(self.x & self.z) % 4)
        cols = np.arange(dim)
        rows = cols ^ self.x
        m = np.zeros((dim, dim), dtype=complex)
        m[rows, cols] = c * _sign_vector(self.n, self.z)
        return m

    def __repr__(self):
        return f"PauliString({self.coeff:+g} {self.label()})"


class PauliSum:
    """Canonicalized sum of Pauli strings (duplicate patterns merged)."""

    ZERO_TOL = 1e-14

    def __init__(self, n: int, terms=()):
        self.n = n
        self._terms: dict[tuple[int, int], complex] = {}
        for t in terms:
            self._accumulate(t)
        self._prune()
        self._compiled = None

    def _accumulate(self, t: PauliString):
        if t.n != self.n:
            raise ValueError("register size mismatch")
        self._terms[t.key] = self._terms.get(t.key, 0.0) + t.coeff

    def _prune(self):
        self._terms = {k: c for k, c in self._terms.items() if abs(c) > self.ZERO_TOL}

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "PauliSum":
        return cls(n)

    @classmethod
    def identity(cls, n: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(n, [PauliString(n, 0, 0, coeff)])

    # -- views --------------------------------------------------------
    def terms(self):
        return [PauliString(self.n, x, z, c) for (x, z), c in sorted(self._terms.items())]

    def __len__(self):
        return len(self._terms)

    def coeff_of(self, label: str) -> complex:
        return self._terms.get(PauliString.from_label(label).key, 0.0)

    # -- algebra ------------------------------------------------------
    def __add__(self, other: "PauliSum") -> "PauliSum":
        out = PauliSum(self.n)
        out._terms = dict(self._terms)
        for k, c in other._terms.items():
            out._terms[k] = out._terms.get(k, 0.0) + c
        out._prune()
        return out

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            out = PauliSum(self.n)
            for t1 in self.terms():
                for t2 in other.terms():
                    out._accumulate(t1 * t2)
            out._prune()
            return out
        out = PauliSum(self.n)
        out._terms = {k: c * other for k, c in self._terms.items()}
        out._prune()
        return out

    def __rmul__(self, scalar):
        return self * scalar

    def adjoint(self) -> "PauliSum":
        out = PauliSum(self.n)
        out._terms = {k: c.conjugate() for k, c in self._terms.items()}
        return out

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(c.imag) <= tol for c in self._terms.values())

    # -- statevector action -------------------------------------------
    def _compile(self):
        """Group terms by X-mask; precompute one phase vector per group."""
        if self._compiled is not None:
            return self._compiled
        dim = 1 << self.n
        diag = np.zeros(dim, dtype=complex)
        groups: dict[int, np.ndarray] = {}
        for (x, z), c in self._terms.items():
            vec = (c * 1j ** (_popcount(x & z) % 4)) * _sign_vector(self.n, z)
            if x == 0:
                diag += vec
            else:
                if x in groups:
                    groups[x] = groups[x] + vec
                else:
                    groups[x] = vec
        idx = np.arange(dim)

        def _realify(v):
            return v.real.copy() if np.abs(v.imag).max(initial=0.0) < 1e-15 else v

        self._compiled = (_realify(diag),
                          [(idx ^ x, _realify(vec)) for x, vec in groups.items()])
        return self._compiled

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """H @ v on a raw amplitude array (dtype preserved where possible)."""
        diag, groups = self._compile()
        dtype = np.result_type(v.dtype, diag.dtype, *(g[1].dtype for g in groups))
        out = np.zeros(v.size, dtype=dtype)
        out += diag * v
        for perm, vec in groups:
            out[perm] += vec * v
        return out

    def apply(self, state: "StateVector") -> "StateVector":
        if state.n != self.n:
            raise ValueError("register size mismatch")
        return StateVector(self.matvec(state.amps), normalized=False)

    def expectation(self, state: "StateVector") -> float:
        """<state|H|state> for Hermitian H; asserts the imaginary residual."""
        if not self.is_hermitian(1e-10):
            raise ValueError("expectation requires a Hermitian PauliSum")
        val = np.vdot(state.amps, self.apply(state).amps)
        assert abs(val.imag) < 1e-10, f"imaginary residual {val.imag:g}"
        return float(val.real)

    def to_dense(self) -> np.ndarray:
        if self.n > 12:
            raise ValueError("dense matrix limited to 12 qubits")
        m = np.zeros((1 << self.n, 1 << self.n), dtype=complex)
        for t in self.terms():
            m += t.to_dense()
        return m

    # -- text form ----------------------------------------------------
    def to_text(self) -> str:
        """One term per line: coefficient then letter-index tokens."""
        lines = []
        for t in self.terms():
            toks = [f"{t.letter(j)}{j}" for j in t.support()] or ["I"]
            c = t.coeff
            cs = f"{c.real:+.12g}" if abs(c.imag) < 1e-14 else f"({c.real:+.12g}{c.imag:+.12g}j)"
            lines.append(f"{cs} " + " ".join(toks))
        return "\n".join(lines)

    @classmethod
    def from_text(cls, n: int, text: str) -> "PauliSum":
        terms = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            head, *toks = line.split()
            coeff = complex(head.strip("()"))
            ops = {}
            for tok in toks:
                if tok == "I":
                    continue
                ops[int(tok[1:])] = tok[0]
            terms.append(PauliString.from_ops(n, ops, coeff))
        return cls(n, terms)

    def __repr__(self):
        return f"PauliSum(n={self.n}, {len(self)} terms)"


class StateVector:
    """Normalized complex amplitudes over the full register."""

    __slots__ = ("amps", "n")

    def __init__(self, amps, normalized: bool = True):
        amps = np.asarray(amps, dtype=complex)
        n = int(round(np.log2(amps.size)))
        if 1 << n != amps.size:
            raise ValueError("amplitude length must be a power of two")
        self.amps = amps
        self.n = n
        if normalized:
            nrm = np.linalg.norm(amps)
            if abs(nrm - 1.0) > 1e-12:
                raise ValueError(f"state not normalized (norm {nrm:g})")

    @classmethod
    def basis(cls, n: int, index: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def from_ket(cls, ket: str) -> "StateVector":
        """'111100' -> the corresponding computational basis state."""
        return cls.basis(len(ket), int(ket, 2))

    def copy(self) -> "StateVector":
        return StateVector(self.amps.copy(), normalized=False)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "StateVector":
        return StateVector(self.amps / np.linalg.norm(self.amps), normalized=False)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amps, other.amps))

    def fidelity(self, other: "StateVector") -> float:
        return abs(self.overlap(other)) ** 2

    def __repr__(self):
        return f"StateVector(n={self.n})"


# -- operations on states ---------------------------------------------

def apply(ps: PauliString, s: StateVector) -> StateVector:
    return ps.apply(s)


def expectation(h: PauliSum, s: StateVector) -> float:
    return h.expectation(s)


def exp_apply(ps: PauliString, theta: float, s: StateVector) -> StateVector:
    """exp(-i * theta * ps)|s> for a single Hermitian string.

    Any letter string W squares to the identity, so with ps = c*W (c real)
    the exponential is cos(theta*c) - i sin(theta*c) W.
    """
    if abs(ps.coeff.imag) > 1e-12:
        raise ValueError("exp_apply requires a Hermitian string (real coefficient)")
    ang = theta * ps.coeff.real
    rotated = PauliString(ps.n, ps.x, ps.z, 1.0).apply(s)  # bare letter string
    return StateVector(np.cos(ang) * s.amps - 1j * np.sin(ang) * rotated.amps,
                       normalized=False)


def exp_sum_apply(h: PauliSum, theta: float, s: StateVector) -> StateVector:
    """exp(-i*theta*H)|s> via dense exponential on the support of H.

    Intended for generators with small support (<= 8 qubits); the rest of
    the register is untouched.
    """
    from scipy.linalg import expm

    supp = sorted({j for t in h.terms() for j in t.support()})
    if not supp:
        phase = np.exp(-1j * theta * h.coeff_of("I" * h.n))
        return StateVector(phase * s.amps, normalized=False)
    if len(supp) > 8:
        raise ValueError("support too large for dense exponential")
    k = len(supp)
    sub = PauliSum(k)
    for t in h.terms():
        ops = {supp.index(j): t.letter(j) for j in t.support()}
        sub._accumulate(PauliString.from_ops(k, ops, t.coeff))
    sub._prune()
    u = expm(-1j * theta * sub.to_dense())
    return apply_unitary_on(u, supp, s)


def apply_unitary_on(u: np.ndarray, qubits: list[int], s: StateVector) -> StateVector:
    """Apply a dense unitary on the listed qubits (in that tensor order)."""
    n, k = s.n, len(qubits)
    psi = s.amps.reshape([2] * n)
    src = list(qubits)
    psi = np.moveaxis(psi, src, range(k))
    shape = psi.shape
    psi = u @ psi.reshape(1 << k, -1)
    psi = np.moveaxis(psi.reshape(shape), range(k), src)
    return StateVector(np.ascontiguousarray(psi).reshape(-1), normalized=False)


def partial_trace(s: StateVector, keep: list[int]) -> np.ndarray:
    """Reduced density matrix over the kept qubits (dense, |keep| <= 8)."""
    keep = list(keep)
    if len(keep) > 8:
        raise ValueError("keep set too large for dense density matrix")
    n = s.n
    psi = s.amps.reshape([2] * n)
    psi = np.moveaxis(psi, keep, range(len(keep)))
    mat = psi.reshape(1 << len(keep), -1)
    return mat @ mat.conj().T
