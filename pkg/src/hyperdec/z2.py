"""Bit-packed GF(2) vectors, matrices, and elimination.

Vectors are Python ints used as bitsets (bit i = coordinate i), so xor,
popcount, and shifts come straight from the int type. Elimination uses a
fixed pivot rule (leftmost unpivoted column, lowest row) so rank, kernel,
and solve are deterministic.
"""
from __future__ import annotations

from typing import Iterable, Iterator, List, Optional

__all__ = [
    "Z2Vector",
    "Z2Matrix",
    "Z2Solver",
    "bits_of",
    "rank",
    "kernel_basis",
    "solve",
]


def bits_of(x: int) -> Iterator[int]:
    """Yield the indices of set bits of x in ascending order."""
    while x:
        lsb = x & -x
        yield lsb.bit_length() - 1
        x ^= lsb


class Z2Vector:
    """A fixed-length vector over GF(2)."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int = 0):
        if bits < 0 or bits >> n:
            raise ValueError(f"bits out of range for length {n}")
        self.n = n
        self.bits = bits

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> "Z2Vector":
        bits = 0
        for i in support:
            if not 0 <= i < n:
                raise ValueError(f"index {i} out of range for length {n}")
            bits ^= 1 << i
        return cls(n, bits)

    def __xor__(self, other: "Z2Vector") -> "Z2Vector":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return Z2Vector(self.n, self.bits ^ other.bits)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Z2Vector)
            and self.n == other.n
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __len__(self) -> int:
        return self.n

    def __bool__(self) -> bool:
        return self.bits != 0

    def get(self, i: int) -> int:
        return (self.bits >> i) & 1

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> List[int]:
        return list(bits_of(self.bits))

    def __repr__(self) -> str:
        return f"Z2Vector(n={self.n}, support={self.support()})"


class Z2Matrix:
    """A rows x cols GF(2) matrix stored column-major as int bitsets."""

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: int, cols: int, columns: List[int]):
        if len(columns) != cols:
            raise ValueError("column count mismatch")
        self.rows = rows
        self.cols = cols
        self.columns = columns

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Z2Matrix":
        return cls(rows, cols, [0] * cols)

    @classmethod
    def identity(cls, n: int) -> "Z2Matrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_rows(cls, rows: List[int], cols: int) -> "Z2Matrix":
        columns = [0] * cols
        for i, r in enumerate(rows):
            for j in bits_of(r):
                columns[j] |= 1 << i
        return cls(len(rows), cols, columns)

    def column(self, j: int) -> int:
        return self.columns[j]

    def row_bitsets(self) -> List[int]:
        rows = [0] * self.rows
        for j, col in enumerate(self.columns):
            for i in bits_of(col):
                rows[i] |= 1 << j
        return rows

    def mul_vec(self, v: Z2Vector) -> Z2Vector:
        if v.n != self.cols:
            raise ValueError("dimension mismatch")
        out = 0
        for j in bits_of(v.bits):
            out ^= self.columns[j]
        return Z2Vector(self.rows, out)

    def mul_bits(self, bits: int) -> int:
        out = 0
        for j in bits_of(bits):
            out ^= self.columns[j]
        return out

    def transpose(self) -> "Z2Matrix":
        return Z2Matrix(self.cols, self.rows, self.row_bitsets())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Z2Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.columns == other.columns
        )

    def __repr__(self) -> str:
        return f"Z2Matrix({self.rows}x{self.cols})"


class Z2Solver:
    """Row-reduces a matrix once and answers many solve/rank queries.

    Factorization records the row transform T with T*A = R (R in reduced
    row echelon form), so solving A x = b costs one pass of parity checks
    against T instead of a fresh elimination.
    """

    def __init__(self, m: Z2Matrix):
        self.m = m
        rows = m.row_bitsets()
        n_rows = m.rows
        transform = [1 << i for i in range(n_rows)]
        pivots: List[tuple] = []  # (row_index_in_reduced_order, col)
        r = 0
        for col in range(m.cols):
            sel = None
            for i in range(r, n_rows):
                if (rows[i] >> col) & 1:
                    sel = i
                    break
            if sel is None:
                continue
            rows[r], rows[sel] = rows[sel], rows[r]
            transform[r], transform[sel] = transform[sel], transform[r]
            for i in range(n_rows):
                if i != r and (rows[i] >> col) & 1:
                    rows[i] ^= rows[r]
                    transform[i] ^= transform[r]
            pivots.append((r, col))
            r += 1
        self.reduced_rows = rows
        self.transform = transform
        self.pivots = pivots
        self.rank = r

    def solve_bits(self, b: int) -> Optional[int]:
        """Return x with A x = b (free variables zero), or None."""
        reduced_b = 0
        for i, t in enumerate(self.transform):
            if (t & b).bit_count() & 1:
                reduced_b |= 1 << i
        if reduced_b >> self.rank:
            return None
        x = 0
        for i, col in self.pivots:
            if (reduced_b >> i) & 1:
                x |= 1 << col
        return x

    def kernel(self) -> List[int]:
        """Basis of the null space, one vector per free column."""
        pivot_cols = {col: i for i, col in self.pivots}
        basis = []
        for col in range(self.m.cols):
            if col in pivot_cols:
                continue
            v = 1 << col
            for pcol, i in pivot_cols.items():
                if (self.reduced_rows[i] >> col) & 1:
                    v |= 1 << pcol
            basis.append(v)
        return basis


def rank(m: Z2Matrix) -> int:
    return Z2Solver(m).rank


def kernel_basis(m: Z2Matrix) -> List[Z2Vector]:
    return [Z2Vector(m.cols, v) for v in Z2Solver(m).kernel()]


def solve(m: Z2Matrix, b: Z2Vector) -> Optional[Z2Vector]:
    """A solution of m x = b with free variables zero, or None if infeasible."""
    if b.n != m.rows:
        raise ValueError("dimension mismatch")
    x = Z2Solver(m).solve_bits(b.bits)
    return None if x is None else Z2Vector(m.cols, x)
