"""
Index arithmetic and sector bookkeeping for the heavy/light staggered layout.

Each spatial site x hosts three staggered sites: n = 3x (heavy quark Q),
n = 3x+1 (light quark q) and n = 3x+2 (light antiquark qbar).  Each staggered
site carries Nc color components, mapped to qubits via i(n, c) = Nc*n + c.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

ROLE_HEAVY, ROLE_QUARK, ROLE_ANTIQUARK = "Q", "q", "qbar"


@dataclass(frozen=True)
class LatticeSpec:
    """Physical couplings, size, color count and heavy-quark placement."""

    L: int
    Nc: int = 2
    g: float = 1.0
    mq: float = 0.1
    mQ: float = 0.0
    lambda2: float | None = None  # penalty strength; default 20 g^2
    heavy_positions: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "heavy_positions", frozenset(self.heavy_positions))
        if self.L < 1:
            raise ValueError("L must be >= 1")
        if self.Nc < 2:
            raise ValueError("Nc must be >= 2")
        if self.g <= 0:
            raise ValueError("g must be positive")
        if self.penalty_strength < 0:
            raise ValueError("lambda2 must be non-negative")
        if not self.heavy_positions <= set(range(self.L)):
            raise ValueError("heavy_positions must lie in {0..L-1}")

    # -- derived sizes ------------------------------------------------
    @property
    def n_staggered(self) -> int:
        return 3 * self.L

    @property
    def n_qubits(self) -> int:
        return 3 * self.Nc * self.L

    @property
    def n_boundaries(self) -> int:
        return 2 * self.L

    @property
    def n_Q(self) -> int:
        return len(self.heavy_positions)

    @property
    def penalty_strength(self) -> float:
        return 20.0 * self.g ** 2 if self.lambda2 is None else self.lambda2

    # -- index arithmetic ---------------------------------------------
    def fermion_index(self, n: int, c: int) -> int:
        """Qubit index i(n, c) = Nc*n + c."""
        if not 0 <= n < self.n_staggered:
            raise IndexError(f"staggered site {n} outside 0..{self.n_staggered - 1}")
        if not 0 <= c < self.Nc:
            raise IndexError(f"color {c} outside 0..{self.Nc - 1}")
        return self.Nc * n + c

    def boundary_upper_staggered(self, b: int) -> int:
        """Inclusive upper staggered index of the charge sum defining E_b."""
        if not 0 <= b < self.n_boundaries:
            raise IndexError(f"boundary {b} outside 0..{self.n_boundaries - 1}")
        return b + 1 + b // 2

    @staticmethod
    def role(n: int) -> str:
        return (ROLE_HEAVY, ROLE_QUARK, ROLE_ANTIQUARK)[n % 3]

    def staggered_sites(self, role: str) -> list[int]:
        return [n for n in range(self.n_staggered) if self.role(n) == role]

    def qubits_of(self, n: int) -> list[int]:
        return [self.fermion_index(n, c) for c in range(self.Nc)]

    def heavy_qubits(self) -> list[int]:
        return [j for n in self.staggered_sites(ROLE_HEAVY) for j in self.qubits_of(n)]

    def light_qubits(self) -> list[int]:
        return [j for n in range(self.n_staggered)
                if self.role(n) != ROLE_HEAVY for j in self.qubits_of(n)]

    def with_heavy(self, *positions: int) -> "LatticeSpec":
        return replace(self, heavy_positions=frozenset(positions))

    # -- serialization ------------------------------------------------
    def to_dict(self) -> dict:
        return {"L": self.L, "Nc": self.Nc, "g": self.g, "mq": self.mq,
                "mQ": self.mQ, "lambda2": self.penalty_strength,
                "heavy_positions": sorted(self.heavy_positions)}

    @classmethod
    def from_dict(cls, d: dict) -> "LatticeSpec":
        return cls(L=int(d["L"]), Nc=int(d.get("Nc", 2)), g=float(d.get("g", 1.0)),
                   mq=float(d.get("mq", 0.1)), mQ=float(d.get("mQ", 0.0)),
                   lambda2=d.get("lambda2"),
                   heavy_positions=frozenset(d.get("heavy_positions", ())))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LatticeSpec":
        return cls.from_dict(json.loads(text))
