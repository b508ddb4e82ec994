"""Admissible upper triangular matrices of Fano Bott towers.

A d-stage Fano Bott tower is encoded by a strictly upper triangular d x d
integer matrix with entries in {-1, 0, 1} in which every row p is one of

  (1) the zero row,
  (2) the unit row e_q for a single column q > p, or
  (3) (row q) - e_q for some column q > p.

This module owns validation against these row templates, the row
classification, the bijection with parent/sign data, exhaustive
enumeration, and direct sums.  Row and column labels are 1-based in every
public interface; the stored row tuples are ordinary 0-based sequences.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence


class FanoBottError(Exception):
    """Base class for all errors raised by this package."""


class InvalidMatrixError(FanoBottError, ValueError):
    """Rejection of a grid that is not an admissible matrix.

    Attributes:
        row: 1-based index of the first offending row.
        violation: description of the condition that row fails.
    """

    def __init__(self, row: int, violation: str):
        self.row = row
        self.violation = violation
        super().__init__(f"row {row}: {violation}")

    def to_json(self) -> dict:
        return {"row": self.row, "violation": self.violation}


class InvalidPhiError(FanoBottError, ValueError):
    """Parent map violates the ordering condition i < phi(i) <= d+1."""


ROW_ZERO = "zero"
ROW_UNIT = "unit"
ROW_COPY = "copy"


@dataclass(frozen=True)
class RowStructure:
    """Template matched by one row.

    kind is "zero" for a zero row, "unit" for e_q, and "copy" for
    (row q) - e_q; q is the 1-based column of the leading entry and is
    None exactly for zero rows.
    """

    kind: str
    q: int | None = None


@dataclass(frozen=True)
class FanoBottMatrix:
    """A validated admissible matrix.  Construct through :func:`validate`."""

    rows: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        """Entry in row i, column j (1-based)."""
        return self.rows[i - 1][j - 1]

    def column(self, j: int) -> tuple[int, ...]:
        """Column j (1-based) as a tuple."""
        return tuple(row[j - 1] for row in self.rows)

    def to_json(self) -> dict:
        return {"dim": self.dim, "entries": [list(row) for row in self.rows]}

    def digest(self) -> str:
        """Hex sha256 of the canonical JSON form."""
        payload = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("ascii")).hexdigest()


def _classify_row(rows: Sequence[Sequence[int]], p0: int) -> RowStructure:
    """Match row p0 (0-based) against the three admissible templates."""
    row = rows[p0]
    d = len(rows)
    q0 = next((j for j, v in enumerate(row) if v != 0), None)
    if q0 is None:
        return RowStructure(ROW_ZERO)
    lead = row[q0]
    if lead == 1:
        bad = next((j for j in range(q0 + 1, d) if row[j] != 0), None)
        if bad is not None:
            raise InvalidMatrixError(
                p0 + 1,
                f"leading +1 in column {q0 + 1} but entry in column {bad + 1} "
                "is nonzero: not a unit row",
            )
        return RowStructure(ROW_UNIT, q0 + 1)
    bad = next((j for j in range(q0 + 1, d) if row[j] != rows[q0][j]), None)
    if bad is not None:
        raise InvalidMatrixError(
            p0 + 1,
            f"leading -1 in column {q0 + 1} but entry in column {bad + 1} "
            f"differs from row {q0 + 1}: not a copy row",
        )
    return RowStructure(ROW_COPY, q0 + 1)


def validate(grid: Sequence[Sequence[int]]) -> FanoBottMatrix:
    """Check a square integer grid row by row and wrap it.

    Rows are checked in order and the lowest offending row is reported:
    first for a nonzero entry on or below the diagonal, then for an entry
    outside {-1, 0, 1}, then for matching none of the three row templates.

    Raises:
        InvalidMatrixError: with the 1-based row and the failed condition.
    """
    rows = tuple(tuple(int(x) for x in row) for row in grid)
    d = len(rows)
    for p0, row in enumerate(rows):
        if len(row) != d:
            raise InvalidMatrixError(
                p0 + 1, f"row has {len(row)} entries, expected {d}"
            )
    for p0, row in enumerate(rows):
        for j0, value in enumerate(row):
            if j0 <= p0 and value != 0:
                raise InvalidMatrixError(
                    p0 + 1,
                    f"nonzero entry ({p0 + 1},{j0 + 1}) on or below the diagonal",
                )
            if value not in (-1, 0, 1):
                raise InvalidMatrixError(
                    p0 + 1,
                    f"entry ({p0 + 1},{j0 + 1}) = {value} outside {{-1,0,1}}",
                )
        _classify_row(rows, p0)
    return FanoBottMatrix(rows)


def matrix_from_json(data: object) -> FanoBottMatrix:
    """Parse either {"dim": d, "entries": [[...], ...]} or a bare row list."""
    if isinstance(data, dict):
        if "entries" not in data:
            raise ValueError('matrix object must carry an "entries" key')
        entries = data["entries"]
        if not isinstance(entries, list):
            raise ValueError('"entries" must be a list of rows')
        if "dim" in data and int(data["dim"]) != len(entries):
            raise ValueError('"dim" does not match the number of rows')
    elif isinstance(data, list):
        entries = data
    else:
        raise ValueError(f"cannot read a matrix from {type(data).__name__}")
    if not all(isinstance(row, (list, tuple)) for row in entries):
        raise ValueError("every row must be a list of integers")
    return validate(entries)


def row_structure(a: FanoBottMatrix, p: int) -> RowStructure:
    """Classify row p (1-based) of a validated matrix."""
    if not 1 <= p <= a.dim:
        raise ValueError(f"row {p} out of range 1..{a.dim}")
    return _classify_row(a.rows, p - 1)


@dataclass(frozen=True)
class PhiSigma:
    """Parent map and edge signs read off the leading entries of the rows.

    phi[i-1] is the 1-based parent label of vertex i, with d+1 for roots.
    sigma[i-1] is "+" or "-" exactly where phi(i) <= d, and None at roots.
    """

    phi: tuple[int, ...]
    sigma: tuple[str | None, ...]

    @property
    def dim(self) -> int:
        return len(self.phi)


def phi_sigma(phi: Sequence[int], sigma: Sequence[str | None]) -> PhiSigma:
    """Validate and wrap parent/sign data.

    Raises:
        InvalidPhiError: if some phi(i) <= i or phi(i) > d+1, or if sigma is
            defined on the wrong set of vertices.
    """
    d = len(phi)
    if len(sigma) != d:
        raise InvalidPhiError(f"phi has {d} entries but sigma has {len(sigma)}")
    for i0, target in enumerate(phi):
        if not i0 + 1 < target <= d + 1:
            raise InvalidPhiError(
                f"phi({i0 + 1}) = {target} violates {i0 + 1} < phi <= {d + 1}"
            )
        sign = sigma[i0]
        if target == d + 1 and sign is not None:
            raise InvalidPhiError(f"sigma({i0 + 1}) given for a root vertex")
        if target <= d and sign not in ("+", "-"):
            raise InvalidPhiError(f"sigma({i0 + 1}) = {sign!r} is not '+' or '-'")
    return PhiSigma(tuple(int(t) for t in phi), tuple(sigma))


def to_phi_sigma(a: FanoBottMatrix) -> PhiSigma:
    """Read off phi (leading column of each row, d+1 for zero rows) and sigma."""
    phi: list[int] = []
    sigma: list[str | None] = []
    for p in range(1, a.dim + 1):
        rs = _classify_row(a.rows, p - 1)
        if rs.kind == ROW_ZERO:
            phi.append(a.dim + 1)
            sigma.append(None)
        else:
            phi.append(rs.q)  # type: ignore[arg-type]
            sigma.append("+" if rs.kind == ROW_UNIT else "-")
    return PhiSigma(tuple(phi), tuple(sigma))


def from_phi_sigma(ps: PhiSigma) -> FanoBottMatrix:
    """Rebuild the matrix from parent/sign data.

    Rows are materialized from the bottom up: a root gives a zero row, a
    "+" edge the unit row of the parent column, and a "-" edge the parent's
    row minus that unit row.  This inverts :func:`to_phi_sigma`.
    """
    ps = phi_sigma(ps.phi, ps.sigma)
    d = ps.dim
    rows: list[tuple[int, ...]] = [()] * d
    for i0 in range(d - 1, -1, -1):
        target = ps.phi[i0]
        if target == d + 1:
            rows[i0] = (0,) * d
        elif ps.sigma[i0] == "+":
            rows[i0] = tuple(1 if j0 == target - 1 else 0 for j0 in range(d))
        else:
            parent_row = rows[target - 1]
            rows[i0] = tuple(
                v - (1 if j0 == target - 1 else 0)
                for j0, v in enumerate(parent_row)
            )
    return FanoBottMatrix(tuple(rows))


def enumerate_matrices(d: int) -> Iterator[FanoBottMatrix]:
    """Yield every admissible d x d matrix exactly once.

    Row p offers 1 + 2(d-p) template choices, so the stream has length
    (2d-1)!!.  Choices are ordered zero row first, then unit rows by target
    column, then copy rows by target column, and the stream is sorted by
    the choice at row d-1 first, down to row 1.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    per_row: list[list[tuple[str, int | None]]] = []
    for p in range(d - 1, 0, -1):
        choices: list[tuple[str, int | None]] = [(ROW_ZERO, None)]
        choices += [(ROW_UNIT, q) for q in range(p + 1, d + 1)]
        choices += [(ROW_COPY, q) for q in range(p + 1, d + 1)]
        per_row.append(choices)
    zero_row = (0,) * d
    for combo in product(*per_row):
        rows = [zero_row] * d
        for offset, (kind, q) in enumerate(combo):
            p0 = d - 2 - offset
            if kind == ROW_ZERO:
                rows[p0] = zero_row
            elif kind == ROW_UNIT:
                rows[p0] = tuple(1 if j0 == q - 1 else 0 for j0 in range(d))
            else:
                parent_row = rows[q - 1]
                rows[p0] = tuple(
                    v - (1 if j0 == q - 1 else 0)
                    for j0, v in enumerate(parent_row)
                )
        yield FanoBottMatrix(tuple(rows))


def count_matrices(d: int) -> int:
    """(2d-1)!!, the size of the enumeration stream."""
    if d < 1:
        raise ValueError("d must be at least 1")
    total = 1
    for p in range(1, d + 1):
        total *= 2 * (d - p) + 1
    return total


def direct_sum(a: FanoBottMatrix, b: FanoBottMatrix) -> FanoBottMatrix:
    """Block-diagonal sum; the forest is the disjoint union with b shifted."""
    da, db = a.dim, b.dim
    rows = [row + (0,) * db for row in a.rows]
    rows += [(0,) * da + row for row in b.rows]
    return FanoBottMatrix(tuple(rows))
