"""Validation, row templates, parent/sign data, enumeration, direct sums."""

from __future__ import annotations

from itertools import product

import pytest

from conftest import FOREST_5, REFERENCE_6, TREE_5, fb
from fanobott import (
    InvalidMatrixError,
    InvalidPhiError,
    PhiSigma,
    count_matrices,
    direct_sum,
    enumerate_matrices,
    from_phi_sigma,
    matrix_from_json,
    phi_sigma,
    row_structure,
    to_phi_sigma,
    validate,
)


def all_upper_triangular_grids(d):
    """Every strictly upper triangular {0,+-1} grid, admissible or not."""
    slots = [(i, j) for i in range(d) for j in range(i + 1, d)]
    for values in product((-1, 0, 1), repeat=len(slots)):
        grid = [[0] * d for _ in range(d)]
        for (i, j), v in zip(slots, values):
            grid[i][j] = v
        yield grid


def row_is_admissible(rows, p):
    """Independent template matcher: zero, e_q, or (row q) - e_q."""
    d = len(rows)
    row = rows[p]
    if all(v == 0 for v in row):
        return True
    for q in range(p + 1, d):
        unit = [1 if j == q else 0 for j in range(d)]
        copy = [rows[q][j] - (1 if j == q else 0) for j in range(d)]
        if list(row) == unit or list(row) == copy:
            return True
    return False


class TestValidate:
    def test_accepts_reference(self, a6):
        assert a6.dim == 6
        assert a6.entry(2, 3) == -1

    @pytest.mark.parametrize("d", range(1, 7))
    def test_accepts_zero_matrix(self, d):
        m = validate([[0] * d for _ in range(d)])
        assert m.rows == tuple((0,) * d for _ in range(d))

    def test_rejects_bad_row_template(self):
        with pytest.raises(InvalidMatrixError) as err:
            validate([[0, 1, 1], [0, 0, 0], [0, 0, 0]])
        assert err.value.row == 1
        assert err.value.to_json()["row"] == 1

    def test_rejects_lower_triangle(self):
        with pytest.raises(InvalidMatrixError) as err:
            validate([[0, 0], [1, 0]])
        assert err.value.row == 2
        assert "diagonal" in err.value.violation

    def test_rejects_out_of_range_entry(self):
        with pytest.raises(InvalidMatrixError) as err:
            validate([[0, 2], [0, 0]])
        assert err.value.row == 1
        assert "outside" in err.value.violation

    def test_rejects_ragged_grid(self):
        with pytest.raises(InvalidMatrixError):
            validate([[0, 1], [0]])

    def test_reports_lowest_offending_row(self):
        # row 1 fails the template even though row 2 is also malformed
        with pytest.raises(InvalidMatrixError) as err:
            validate([[0, 1, 1], [0, 0, 2], [0, 0, 0]])
        assert err.value.row == 1

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_matches_independent_template_oracle(self, d):
        for grid in all_upper_triangular_grids(d):
            expected = all(row_is_admissible(grid, p) for p in range(d))
            try:
                validate(grid)
                accepted = True
            except InvalidMatrixError:
                accepted = False
            assert accepted == expected, grid


class TestRowStructure:
    def test_reference_rows(self, a6):
        assert row_structure(a6, 1) == row_structure(a6, 1)
        assert (row_structure(a6, 1).kind, row_structure(a6, 1).q) == ("unit", 3)
        assert (row_structure(a6, 2).kind, row_structure(a6, 2).q) == ("copy", 3)
        assert row_structure(a6, 6).kind == "zero"

    def test_last_row_always_zero(self):
        for m in fb(4):
            assert row_structure(m, 4).kind == "zero"

    def test_out_of_range(self, a6):
        with pytest.raises(ValueError):
            row_structure(a6, 7)


class TestPhiSigma:
    def test_tree5_read_off(self, tree5):
        ps = to_phi_sigma(tree5)
        assert ps.phi == (2, 5, 4, 5, 6)
        assert ps.sigma == ("+", "-", "-", "+", None)

    def test_zero_matrix(self):
        ps = to_phi_sigma(validate([[0] * 3 for _ in range(3)]))
        assert ps.phi == (4, 4, 4)
        assert ps.sigma == (None, None, None)

    def test_reference_read_off(self, a6):
        ps = to_phi_sigma(a6)
        assert ps.phi == (3, 3, 6, 5, 6, 7)
        assert ps.sigma == ("+", "-", "-", "-", "+", None)

    def test_from_phi_sigma_tree5(self):
        ps = phi_sigma((2, 5, 4, 5, 6), ("+", "-", "-", "+", None))
        assert from_phi_sigma(ps).rows == tuple(tuple(r) for r in TREE_5)

    def test_from_phi_sigma_propagates_paths(self, a6):
        # the minus-minus path from 2 through 3 reaches column 6 as -1,
        # while the plus edge below 1 blocks propagation: n16 = 0
        ps = phi_sigma((3, 3, 6, 5, 6, 7), ("+", "-", "-", "-", "+", None))
        rebuilt = from_phi_sigma(ps)
        assert rebuilt == a6
        assert rebuilt.entry(1, 6) == 0
        assert rebuilt.entry(2, 6) == -1

    def test_all_roots_gives_zero_matrix(self):
        ps = phi_sigma((5, 5, 5, 5), (None,) * 4)
        assert from_phi_sigma(ps).rows == ((0, 0, 0, 0),) * 4

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
    def test_round_trip_is_identity(self, d):
        for m in fb(d):
            assert from_phi_sigma(to_phi_sigma(m)) == m

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_matches_upward_path_oracle(self, d):
        # independent reconstruction: walk upward from i; the entry at an
        # ancestor j is +1 for a chain of "-" edges capped by one "+",
        # -1 for an all "-" chain, 0 otherwise
        for m in fb(d):
            ps = to_phi_sigma(m)
            for i in range(1, d + 1):
                for j in range(i + 1, d + 1):
                    signs = []
                    cur = i
                    while ps.phi[cur - 1] <= d and ps.phi[cur - 1] < j:
                        signs.append(ps.sigma[cur - 1])
                        cur = ps.phi[cur - 1]
                    if ps.phi[cur - 1] == j:
                        signs.append(ps.sigma[cur - 1])
                        below, last = signs[:-1], signs[-1]
                        if all(s == "-" for s in below):
                            expected = 1 if last == "+" else -1
                        else:
                            expected = 0
                    else:
                        expected = 0
                    assert m.entry(i, j) == expected

    def test_rejects_non_increasing_phi(self):
        with pytest.raises(InvalidPhiError):
            phi_sigma((1, 3, 4), ("+", "+", None))
        with pytest.raises(InvalidPhiError):
            from_phi_sigma(PhiSigma((2, 2, 2), ("+", "+", "+")))

    def test_rejects_misplaced_sigma(self):
        with pytest.raises(InvalidPhiError):
            phi_sigma((2, 3, 4), ("+", "+", "+"))
        with pytest.raises(InvalidPhiError):
            phi_sigma((2, 3, 4), ("+", None, None))


class TestEnumerate:
    @pytest.mark.parametrize("d,expected",
                             [(1, 1), (2, 3), (3, 15), (4, 105), (5, 945)])
    def test_double_factorial_counts(self, d, expected):
        stream = fb(d)
        assert len(stream) == expected
        assert len(set(stream)) == expected
        assert count_matrices(d) == expected

    def test_d2_listing_order(self):
        assert [m.rows[0] for m in fb(2)] == [(0, 0), (0, 1), (0, -1)]

    def test_stream_reproducible(self):
        assert list(enumerate_matrices(3)) == list(enumerate_matrices(3))

    def test_members_validate(self):
        for m in fb(4):
            assert validate(m.rows) == m

    def test_rejects_nonpositive_dimension(self):
        with pytest.raises(ValueError):
            list(enumerate_matrices(0))


class TestDirectSum:
    def test_two_points(self):
        one = validate([[0]])
        assert direct_sum(one, one).rows == ((0, 0), (0, 0))

    def test_forest5_is_a_direct_sum(self):
        left = validate([[0, 0, 1], [0, 0, -1], [0, 0, 0]])
        right = validate([[0, 1], [0, 0]])
        assert direct_sum(left, right).rows == tuple(tuple(r) for r in FOREST_5)

    def test_appending_an_isolated_root(self, a6):
        summed = direct_sum(a6, validate([[0]]))
        ps = to_phi_sigma(summed)
        inner = to_phi_sigma(a6)
        assert ps.phi[:6] == tuple(p if p <= 6 else 8 for p in inner.phi)
        assert ps.phi[6] == 8
        assert ps.sigma == inner.sigma + (None,)

    def test_direct_sums_stay_admissible(self):
        for left in fb(2):
            for right in fb(2):
                assert validate(direct_sum(left, right).rows)


class TestJson:
    def test_round_trip(self, a6):
        assert matrix_from_json(a6.to_json()) == a6
        assert matrix_from_json(REFERENCE_6) == a6

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            matrix_from_json({"dim": 3, "entries": [[0, 1], [0, 0]]})

    def test_digest_is_stable(self, a6):
        again = validate(REFERENCE_6)
        assert a6.digest() == again.digest()
        assert a6.digest() != validate([[0] * 6 for _ in range(6)]).digest()
