"""CSS codes from the chain complex at a chosen qubit grade.

Qubits sit on k-cells. Z-type checks are the rows of boundary(k), X-type
checks the rows of the transposed boundary(k+1); commutation is the double
boundary identity. The logical count is the GF(2) Betti number at grade k.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .complexes import ChainComplex, dual_complex
from .z2 import Z2Matrix, Z2Solver, Z2Vector, bits_of

__all__ = [
    "CssCode",
    "Syndrome",
    "Verdict",
    "atomic_decomposition",
    "residual_verdict",
]


class Verdict(enum.Enum):
    TRIVIAL = "trivial"
    LOGICAL = "logical"
    UNRESOLVED = "unresolved"


@dataclass
class Syndrome:
    """A Z-check outcome pattern: a GF(2) chain on (k-1)-cells."""

    chain: Z2Vector

    @property
    def weight(self) -> int:
        return self.chain.weight

    def support(self) -> List[int]:
        return self.chain.support()

    def __bool__(self) -> bool:
        return bool(self.chain)


@dataclass
class CssCode:
    """A homology CSS code: complex, qubit grade, check matrices.

    z_checks = boundary(k) (rows: (k-1)-cells), x_checks = transpose of
    boundary(k+1) (rows: (k+1)-cells). n_logical = dim ker z_checks -
    rank boundary(k+1).
    """

    complex: ChainComplex
    qubit_grade: int
    z_checks: Z2Matrix
    x_checks: Z2Matrix
    n_logical: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_complex(cls, c: ChainComplex, k: int) -> "CssCode":
        if not 1 <= k <= c.dim:
            raise ValueError(f"qubit grade {k} outside 1..{c.dim}")
        z = c.boundary(k)
        # at the top grade there are no X checks, only the kernel of Z
        if k == c.dim:
            up = Z2Matrix.zeros(c.n_cells[k], 0)
        else:
            up = c.boundary(k + 1)
        n_logical = (z.cols - Z2Solver(z).rank) - Z2Solver(up).rank
        return cls(
            complex=c,
            qubit_grade=k,
            z_checks=z,
            x_checks=up.transpose(),
            n_logical=n_logical,
        )

    @classmethod
    def dual_from_complex(cls, c: ChainComplex, k: int) -> "CssCode":
        """The X-side code: same qubits, transposed check roles, realized
        on the dual complex at grade dim - k."""
        return cls.from_complex(dual_complex(c), c.dim - k)

    @property
    def n_qubits(self) -> int:
        return self.z_checks.cols

    def syndrome(self, error: Z2Vector) -> Syndrome:
        """Z-check pattern of an error chain; always a closed chain."""
        return Syndrome(self.z_checks.mul_vec(error))

    def syndrome_is_closed(self, s: Syndrome) -> bool:
        k = self.qubit_grade
        if k - 1 < 1:
            return True
        return not self.complex.boundary(k - 1).mul_bits(s.chain.bits)

    def check_weights(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        """((min,max) Z-check weight, (min,max) X-check weight)."""
        zw = [w.bit_count() for w in self.z_checks.row_bitsets()]
        xw = [w.bit_count() for w in self.x_checks.row_bitsets()]
        span = lambda ws: (min(ws), max(ws)) if ws else (0, 0)
        return span(zw), span(xw)

    def _up_solver(self) -> Z2Solver:
        solver = self._cache.get("up_solver")
        if solver is None:
            solver = Z2Solver(self.x_checks.transpose())
            self._cache["up_solver"] = solver
        return solver


def atomic_decomposition(code: CssCode, s: Syndrome) -> List[Syndrome]:
    """Split a closed syndrome into connected components.

    Two support cells are adjacent when they share a cell one grade down
    (for grade-1 syndromes on 0-cells: when an edge joins them). Components
    XOR back to the input.
    """
    if not code.syndrome_is_closed(s):
        raise ValueError("syndrome is not closed")
    c = code.complex
    k = code.qubit_grade - 1
    support = s.support()
    if not support:
        return []
    in_support = set(support)
    adj = {}
    if k >= 1:
        for cell in support:
            nbrs = set()
            for f in c.boundary_support(k, cell):
                for up in c.cofaces(k - 1)[f]:
                    if up != cell and up in in_support:
                        nbrs.add(up)
            adj[cell] = nbrs
    else:
        for cell in support:
            nbrs = set()
            for e in c.cofaces(0)[cell]:
                for v in c.boundary_support(1, e):
                    if v != cell and v in in_support:
                        nbrs.add(v)
            adj[cell] = nbrs

    seen = set()
    parts: List[Syndrome] = []
    n = s.chain.n
    for start in support:
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        parts.append(Syndrome(Z2Vector.from_support(n, comp)))
    return parts


def residual_verdict(code: CssCode, residual: Z2Vector) -> Verdict:
    """Classify a residual error chain.

    Nonzero syndrome: unresolved. Zero syndrome: trivial when the chain is
    a boundary of (k+1)-cells, logical otherwise.
    """
    if residual.n != code.n_qubits:
        raise ValueError("residual length mismatch")
    if code.syndrome(residual):
        return Verdict.UNRESOLVED
    if not residual:
        return Verdict.TRIVIAL
    x = code._up_solver().solve_bits(residual.bits)
    return Verdict.TRIVIAL if x is not None else Verdict.LOGICAL
