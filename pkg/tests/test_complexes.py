import math

import numpy as np
import pytest

from hyperdec.complexes import (
    ChainComplex,
    ComplexFormatError,
    ComplexValidationError,
    build_hypercubic_torus,
    dual_complex,
    dump_complex,
    metric_ball,
    parse_complex,
    spacelike,
    spacetime_boundary,
    timelike,
)
from oracles import bfs_from, torus_vertex_distance, vertex_adjacency_from_boundaries

SQUARE = """complex dim=2
vertices 4
cell 1 0: 0 1
cell 1 1: 1 2
cell 1 2: 2 3
cell 1 3: 3 0
cell 2 0: 0 1 2 3
"""


def comb(n, k):
    return math.comb(n, k)


class TestHypercubicTorus:
    @pytest.mark.parametrize("d,L", [(2, 2), (2, 3), (3, 2), (3, 4), (4, 2), (4, 3)])
    def test_cell_counts_and_euler(self, torus, d, L):
        c = torus(d, L)
        assert c.dim == d
        assert c.n_cells == tuple(comb(d, k) * L**d for k in range(d + 1))
        assert c.euler_characteristic() == 0
        assert c.systole_hint == L
        assert c.torus_shape == (d, L)

    def test_known_counts(self, torus):
        assert torus(4, 2).n_cells == (16, 64, 96, 64, 16)
        assert torus(2, 3).n_cells == (9, 18, 9)
        assert torus(4, 3).n_cells[2] == 486

    @pytest.mark.parametrize("d,L", [(2, 4), (3, 3), (4, 2)])
    def test_double_boundary_vanishes(self, torus, d, L):
        c = torus(d, L)
        for k in range(2, d + 1):
            lower = c.boundary(k - 1)
            upper = c.boundary(k)
            for j in range(upper.cols):
                assert lower.mul_bits(upper.column(j)) == 0

    def test_edges_join_unit_neighbors(self, torus):
        c = torus(3, 4)
        for e in range(c.n_cells[1]):
            u, v = c.cell_vertices(1, e)
            assert torus_vertex_distance(3, 4, u, v) == 1

    def test_squares_have_four_corners_and_edges(self, torus):
        c = torus(3, 3)
        for q in range(0, c.n_cells[2], 7):
            assert len(c.boundary_support(2, q)) == 4
            assert len(c.cell_vertices(2, q)) == 4

    def test_vertex_distances_match_l1_oracle(self, torus):
        c = torus(3, 5)
        dist = c.bfs_distances(0)
        for v in range(c.n_cells[0]):
            assert dist[v] == torus_vertex_distance(3, 5, 0, v)

    def test_metric_ball_sizes_on_4d(self, torus):
        c = torus(4, 5)
        assert len(metric_ball(c, 0, 0)) == 1
        assert len(metric_ball(c, 0, 1)) == 9
        assert len(metric_ball(c, 0, 2)) == 41
        want = {
            v for v in range(c.n_cells[0]) if torus_vertex_distance(4, 5, 0, v) <= 2
        }
        assert metric_ball(c, 0, 2) == want

    def test_radius_truncates_bfs(self, torus):
        c = torus(3, 5)
        near = c.bfs_distances(7, 2)
        assert set(near) == metric_ball(c, 7, 2)
        assert max(near.values()) == 2

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            build_hypercubic_torus(1, 3)
        with pytest.raises(ValueError):
            build_hypercubic_torus(5, 2)
        with pytest.raises(ValueError):
            build_hypercubic_torus(3, 1)


class TestCellDistance:
    def test_adjacent_and_far_cells(self, torus):
        c = torus(3, 4)
        q = 0
        edges = c.boundary_support(2, q)
        assert c.cell_distance(2, q, 1, edges[0]) == 0
        v_far = c.n_cells[0] - 1  # vertex (3,3,3): distance 3 from the corner
        assert c.cell_distance(0, 0, 0, v_far) == 3

    def test_matrix_agrees_with_scalar(self, torus):
        c = torus(3, 3)
        rng = np.random.default_rng(5)
        for ka, kb in [(2, 2), (2, 1), (1, 1), (1, 2), (0, 2)]:
            m = c.cell_distance_matrix(ka, kb)
            assert m.shape == (c.n_cells[ka], c.n_cells[kb])
            for _ in range(25):
                a = int(rng.integers(c.n_cells[ka]))
                b = int(rng.integers(c.n_cells[kb]))
                assert m[a, b] == c.cell_distance(ka, a, kb, b)

    def test_matrix_symmetry_and_zero_diagonal(self, torus):
        c = torus(3, 3)
        m = c.cell_distance_matrix(2, 2)
        assert (m == m.T).all()
        assert (np.diag(m) == 0).all()


class TestDual:
    @pytest.mark.parametrize("d,L", [(2, 3), (3, 3), (4, 2)])
    def test_counts_reverse(self, torus, d, L):
        c = torus(d, L)
        dc = dual_complex(c)
        assert dc.n_cells == tuple(reversed(c.n_cells))

    def test_double_dual_restores_boundaries(self, torus):
        c = torus(3, 3)
        dd = dual_complex(dual_complex(c))
        for k in range(1, c.dim + 1):
            assert dd.boundary(k).columns == c.boundary(k).columns

    def test_dual_boundary_is_transposed_coboundary(self, torus):
        c = torus(3, 3)
        dc = dual_complex(c)
        # dual grade-1 boundary comes from the primal grade-d boundary
        assert dc.boundary(1).columns == c.boundary(c.dim).transpose().columns


class TestSerialization:
    def test_single_square_counts(self):
        c = parse_complex(SQUARE)
        assert c.n_cells == (4, 4, 1)
        assert c.euler_characteristic() == 1
        assert c.systole_hint is None

    def test_round_trip_torus(self, torus):
        c = torus(2, 2)
        again = parse_complex(dump_complex(c))
        assert again.n_cells == c.n_cells
        assert again.systole_hint == c.systole_hint
        for k in range(1, c.dim + 1):
            assert again.boundary(k).columns == c.boundary(k).columns

    def test_round_trip_preserves_coords(self, torus):
        c = torus(2, 3)
        again = parse_complex(dump_complex(c))
        assert again.coords == c.coords

    def test_comments_and_blank_lines_ignored(self):
        text = SQUARE.replace("vertices 4", "vertices 4  # four corners\n\n")
        assert parse_complex(text).n_cells == (4, 4, 1)

    def test_systole_line(self):
        text = "complex dim=1\nvertices 2\nsystole 7\ncell 1 0: 0 1\ncell 1 1: 0 1\n"
        assert parse_complex(text).systole_hint == 7

    def test_missing_header_rejected(self):
        with pytest.raises(ComplexFormatError):
            parse_complex("vertices 4\n")

    def test_dangling_face_rejected(self):
        with pytest.raises(ComplexFormatError):
            parse_complex("complex dim=2\nvertices 4\ncell 1 0: 0 9\n")

    def test_sparse_ids_rejected(self):
        with pytest.raises(ComplexFormatError):
            parse_complex("complex dim=1\nvertices 2\ncell 1 1: 0 1\n")

    def test_nonzero_double_boundary_rejected(self):
        bad = "complex dim=2\nvertices 4\ncell 1 0: 0 1\ncell 1 1: 1 2\ncell 2 0: 0 1\n"
        with pytest.raises(ComplexValidationError):
            parse_complex(bad)


class TestSpacetime:
    def test_spacelike_boundary_is_edge_set_at_slice(self, torus):
        c = torus(3, 3)
        q = 5
        out = spacetime_boundary([spacelike(q, 2)], c, tau=4)
        assert out == {spacelike(e, 2) for e in c.boundary_support(2, q)}

    def test_timelike_boundary_couples_adjacent_slices(self, torus):
        c = torus(3, 3)
        s = 9
        out = spacetime_boundary([timelike(s, 3)], c, tau=4)
        want = {timelike(v, 3) for v in c.boundary_support(1, s)}
        want |= {spacelike(s, 2), spacelike(s, 3)}
        assert out == want

    def test_flip_and_its_syndrome_tube_close(self, torus):
        # a 2-cell at slice i, its boundary edges over interval i+1, and
        # the same 2-cell at slice i+1 form a closed spacetime chain
        c = torus(3, 3)
        q, i = 11, 1
        chain = [spacelike(q, i), spacelike(q, i + 1)]
        chain += [timelike(e, i + 1) for e in c.boundary_support(2, q)]
        assert spacetime_boundary(chain, c, tau=3) == set()

    def test_boundary_is_linear(self, torus):
        c = torus(3, 3)
        a = [spacelike(0, 0), timelike(4, 1)]
        b = [timelike(4, 1), spacelike(7, 2)]
        ba = spacetime_boundary(a, c, 3)
        bb = spacetime_boundary(b, c, 3)
        joint = spacetime_boundary([a[0], b[1]], c, 3)
        assert joint == ba ^ bb

    def test_time_range_validated(self, torus):
        c = torus(3, 3)
        with pytest.raises(ValueError):
            spacetime_boundary([spacelike(0, 5)], c, tau=4)
        with pytest.raises(ValueError):
            spacetime_boundary([timelike(0, 0)], c, tau=4)

    def test_oracle_adjacency_matches_library(self, torus):
        c = torus(3, 4)
        adj = vertex_adjacency_from_boundaries(c)
        dist = bfs_from(adj, 0)
        lib = c.bfs_distances(0)
        assert dist == lib
