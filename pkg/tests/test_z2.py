import numpy as np
import pytest

from hyperdec.z2 import (
    Z2Matrix,
    Z2Solver,
    Z2Vector,
    bits_of,
    kernel_basis,
    rank,
    solve,
)
from oracles import gf2_rank_numpy


def random_matrix(rng, rows, cols, density=0.4):
    bits = [
        int("".join("1" if rng.random() < density else "0" for _ in range(cols))[::-1], 2)
        if cols
        else 0
        for _ in range(rows)
    ]
    return Z2Matrix.from_rows(bits, cols)


class TestZ2Vector:
    def test_from_support_and_back(self):
        v = Z2Vector.from_support(10, [0, 3, 7])
        assert v.support() == [0, 3, 7]
        assert v.weight == 3
        assert len(v) == 10
        assert v.get(3) == 1 and v.get(4) == 0

    def test_xor_is_symmetric_difference(self):
        a = Z2Vector.from_support(8, [1, 2, 5])
        b = Z2Vector.from_support(8, [2, 5, 6])
        assert (a ^ b).support() == [1, 6]
        assert (a ^ a).weight == 0
        assert not (a ^ a)

    def test_equality_and_hash(self):
        a = Z2Vector.from_support(6, [0, 4])
        b = Z2Vector(6, 0b10001)
        assert a == b and hash(a) == hash(b)
        assert a != Z2Vector(7, 0b10001)

    def test_out_of_range_support_rejected(self):
        with pytest.raises(ValueError):
            Z2Vector.from_support(4, [4])

    def test_bits_of_enumerates_set_positions(self):
        assert list(bits_of(0b101001)) == [0, 3, 5]
        assert list(bits_of(0)) == []


class TestZ2Matrix:
    def test_identity_and_zeros(self):
        eye = Z2Matrix.identity(4)
        assert rank(eye) == 4
        assert rank(Z2Matrix.zeros(3, 3)) == 0

    def test_column_row_consistency(self):
        m = Z2Matrix.from_rows([0b011, 0b110], 3)
        assert m.column(0) == 0b01
        assert m.column(1) == 0b11
        assert m.column(2) == 0b10
        assert m.row_bitsets() == [0b011, 0b110]

    def test_transpose_involution(self):
        rng = np.random.default_rng(3)
        m = random_matrix(rng, 7, 5)
        t = m.transpose()
        assert t.rows == 5 and t.cols == 7
        assert t.transpose().row_bitsets() == m.row_bitsets()

    def test_mul_vec_matches_manual_parity(self):
        m = Z2Matrix.from_rows([0b101, 0b011, 0b111], 3)
        v = Z2Vector(3, 0b110)
        out = m.mul_vec(v)
        rows = m.row_bitsets()
        expected = [(rows[i] & v.bits).bit_count() & 1 for i in range(3)]
        assert [out.get(i) for i in range(3)] == expected

    def test_mul_bits_equals_column_xor(self):
        rng = np.random.default_rng(4)
        m = random_matrix(rng, 6, 9)
        x = 0b101100101
        acc = 0
        for j in bits_of(x):
            acc ^= m.column(j)
        assert m.mul_bits(x) == acc


class TestSolver:
    def test_rank_matches_numpy_oracle(self):
        rng = np.random.default_rng(12)
        for rows, cols in [(5, 5), (8, 3), (3, 8), (10, 10), (6, 1), (1, 6)]:
            for _ in range(5):
                m = random_matrix(rng, rows, cols)
                assert rank(m) == gf2_rank_numpy(m.row_bitsets(), cols)

    def test_kernel_dimension_and_membership(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            m = random_matrix(rng, 6, 9)
            basis = kernel_basis(m)
            assert len(basis) == 9 - rank(m)
            for v in basis:
                assert m.mul_vec(v).weight == 0
            # basis vectors are independent: stacking them keeps full rank
            stacked = Z2Matrix.from_rows([v.bits for v in basis], 9)
            assert rank(stacked) == len(basis)

    def test_solve_recovers_image_vectors(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            m = random_matrix(rng, 7, 7)
            x0 = Z2Vector(7, int(rng.integers(0, 1 << 7)))
            b = m.mul_vec(x0)
            x = solve(m, b)
            assert x is not None
            assert m.mul_vec(x) == b

    def test_solve_detects_inconsistency(self):
        # rows 1 and 2 are equal, so b must agree on them to be solvable
        m = Z2Matrix.from_rows([0b11, 0b11, 0b01], 2)
        assert solve(m, Z2Vector(3, 0b010)) is None
        got = solve(m, Z2Vector(3, 0b011))
        assert got is not None and m.mul_vec(got) == Z2Vector(3, 0b011)

    def test_solver_transform_reproduces_reduction(self):
        rng = np.random.default_rng(9)
        m = random_matrix(rng, 6, 6)
        s = Z2Solver(m)
        rows = m.row_bitsets()
        for i, t in enumerate(s.transform):
            acc = 0
            for j in bits_of(t):
                acc ^= rows[j]
            assert acc == s.reduced_rows[i]

    def test_pivots_are_strictly_increasing_columns(self):
        rng = np.random.default_rng(10)
        m = random_matrix(rng, 8, 8)
        s = Z2Solver(m)
        cols = [c for _, c in s.pivots]
        assert cols == sorted(cols) and len(set(cols)) == len(cols)

    def test_empty_shapes(self):
        assert rank(Z2Matrix.zeros(0, 5)) == 0
        assert rank(Z2Matrix.zeros(5, 0)) == 0
        assert len(kernel_basis(Z2Matrix.zeros(0, 4))) == 4
