"""The three moves on admissible matrices, reachability, and witnesses.

Three moves generate the equivalence that matches diffeomorphism of the
underlying towers:

* conjugation by a permutation matrix, which relabels the forest and may
  leave the admissible set (callers validate);
* a column flip at k, which negates column k and adds the old column k
  times entry (k, j) into every other column j; on the forest this flips
  the signs of all edges from vertex k to its children;
* a root-edge flip at (k, l), defined when row l is zero and row k is
  +/- e_l; it negates entry (k, l) and multiplies entry (i, l) by entry
  (i, k) wherever the latter is nonzero, flipping the sign of the single
  edge between root l and its child k.

Column and root-edge flips keep the admissible set.  A replayable witness
is a sequence of steps together with digests of its endpoints.  For small
d the move graph itself is searched exhaustively, which serves as ground
truth for the canonical codes.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence, Union

from fanobott.forest import (
    DIFFEO,
    SignedRootedForest,
    canonical_code,
    children_map,
    from_matrix,
    subtree_codes,
)
from fanobott.matrix import (
    FanoBottError,
    FanoBottMatrix,
    InvalidMatrixError,
    enumerate_matrices,
    to_phi_sigma,
    validate,
)

_FLIP = {"+": "-", "-": "+"}


class OpPreconditionError(FanoBottError, ValueError):
    """A root-edge flip was requested where its row conditions fail."""

    def __init__(self, k: int, l: int, reason: str):
        self.k = k
        self.l = l
        self.reason = reason
        super().__init__(f"root-edge flip ({k},{l}): {reason}")


class StepFailedError(FanoBottError, ValueError):
    """A witness step could not be applied.

    index is the 0-based position of the failing step; -1 marks a source
    digest mismatch and len(steps) a target digest mismatch.
    """

    def __init__(self, index: int, reason: str):
        self.index = index
        self.reason = reason
        super().__init__(f"step {index}: {reason}")


class DimensionMismatchError(FanoBottError, ValueError):
    """The two matrices have different sizes."""


@dataclass(frozen=True)
class ConjugateStep:
    """Relabel by perm: entry (i, j) moves to (perm[i-1], perm[j-1])."""

    perm: tuple[int, ...]


@dataclass(frozen=True)
class ColumnFlipStep:
    """Column flip at column k."""

    k: int


@dataclass(frozen=True)
class RootEdgeFlipStep:
    """Root-edge flip at child row k under root row l."""

    k: int
    l: int


OpStep = Union[ConjugateStep, ColumnFlipStep, RootEdgeFlipStep]


@dataclass(frozen=True)
class OpSequence:
    """Replayable witness with digests of its source and target."""

    steps: tuple[OpStep, ...]
    source_sha: str
    target_sha: str

    def to_json(self) -> dict:
        return {
            "steps": [step_to_json(s) for s in self.steps],
            "source_sha": self.source_sha,
            "target_sha": self.target_sha,
        }


def step_to_json(step: OpStep) -> dict:
    if isinstance(step, ConjugateStep):
        return {"op": "p", "perm": list(step.perm)}
    if isinstance(step, ColumnFlipStep):
        return {"op": "2", "k": step.k}
    if isinstance(step, RootEdgeFlipStep):
        return {"op": "3", "k": step.k, "l": step.l}
    raise TypeError(f"not a step: {step!r}")


def step_from_json(data: dict) -> OpStep:
    tag = data.get("op")
    if tag == "p":
        return ConjugateStep(tuple(int(x) for x in data["perm"]))
    if tag == "2":
        return ColumnFlipStep(int(data["k"]))
    if tag == "3":
        return RootEdgeFlipStep(int(data["k"]), int(data["l"]))
    raise ValueError(f"unknown step tag {tag!r}")


def witness_from_json(data: object) -> OpSequence:
    if not isinstance(data, dict) or "steps" not in data:
        raise ValueError('witness object must carry "steps"')
    steps = tuple(step_from_json(s) for s in data["steps"])
    return OpSequence(steps, str(data.get("source_sha", "")),
                      str(data.get("target_sha", "")))


def _check_perm(perm: Sequence[int], d: int) -> tuple[int, ...]:
    perm = tuple(int(x) for x in perm)
    if sorted(perm) != list(range(1, d + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{d}")
    return perm


def identity_perm(d: int) -> tuple[int, ...]:
    return tuple(range(1, d + 1))


def conjugate(a: FanoBottMatrix, perm: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Conjugate by the permutation matrix of perm; raw rows, not validated.

    Entry (i, j) of the input lands at (perm[i-1], perm[j-1]).  The result
    can leave the admissible set, so callers validate when membership is
    required.
    """
    d = a.dim
    perm = _check_perm(perm, d)
    out = [[0] * d for _ in range(d)]
    for i0 in range(d):
        row = a.rows[i0]
        for j0 in range(d):
            out[perm[i0] - 1][perm[j0] - 1] = row[j0]
    return tuple(tuple(r) for r in out)


def flip_column(a: FanoBottMatrix, k: int) -> FanoBottMatrix:
    """Negate column k and absorb the old column into the others.

    New column k is the negated old one; new column j gains the old column
    k times entry (k, j).  The result stays admissible, and on the forest
    every edge from vertex k to one of its children changes sign.
    """
    d = a.dim
    if not 1 <= k <= d:
        raise ValueError(f"column {k} out of range 1..{d}")
    k0 = k - 1
    rows = [list(r) for r in a.rows]
    for i0 in range(d):
        cik = a.rows[i0][k0]
        if cik == 0:
            continue
        for j0 in range(d):
            if j0 == k0:
                rows[i0][j0] = -cik
            else:
                rows[i0][j0] = a.rows[i0][j0] + a.rows[k0][j0] * cik
    return validate(rows)


def flip_root_edge(a: FanoBottMatrix, k: int, l: int) -> FanoBottMatrix:
    """Flip the sign of the edge between root l and its child k.

    Requires row l to be zero and row k to be +/- e_l.  Negates entry
    (k, l) and multiplies entry (i, l) by entry (i, k) wherever the latter
    is nonzero; all other entries stay.  The result stays admissible.

    Raises:
        OpPreconditionError: naming which of the two row conditions fails.
    """
    d = a.dim
    if not (1 <= k <= d and 1 <= l <= d):
        raise OpPreconditionError(k, l, "indices out of range")
    l0, k0 = l - 1, k - 1
    if any(v != 0 for v in a.rows[l0]):
        raise OpPreconditionError(k, l, f"row {l} is not zero")
    expected_unit = all(
        v == 0 if j0 != l0 else v in (-1, 1)
        for j0, v in enumerate(a.rows[k0])
    ) and a.rows[k0][l0] != 0
    if not expected_unit:
        raise OpPreconditionError(k, l, f"row {k} is not +/- e_{l}")
    rows = [list(r) for r in a.rows]
    rows[k0][l0] = -rows[k0][l0]
    for i0 in range(d):
        if i0 in (k0, l0):
            continue
        if a.rows[i0][k0] != 0:
            rows[i0][l0] = a.rows[i0][k0] * a.rows[i0][l0]
    return validate(rows)


def apply_step(a: FanoBottMatrix, step: OpStep) -> FanoBottMatrix:
    """Apply one step, validating conjugation results."""
    if isinstance(step, ConjugateStep):
        return validate(conjugate(a, step.perm))
    if isinstance(step, ColumnFlipStep):
        return flip_column(a, step.k)
    if isinstance(step, RootEdgeFlipStep):
        return flip_root_edge(a, step.k, step.l)
    raise TypeError(f"not a step: {step!r}")


def replay(a: FanoBottMatrix,
           steps: OpSequence | Iterable[OpStep]) -> FanoBottMatrix:
    """Apply steps in order; every intermediate matrix must be admissible.

    When an OpSequence is given its endpoint digests are enforced as well.

    Raises:
        StepFailedError: with the failing step index and the reason.
    """
    sequence = steps if isinstance(steps, OpSequence) else None
    step_list = list(sequence.steps if sequence else steps)
    if sequence and sequence.source_sha and sequence.source_sha != a.digest():
        raise StepFailedError(-1, "source digest does not match the matrix")
    current = a
    for index, step in enumerate(step_list):
        try:
            current = apply_step(current, step)
        except (FanoBottError, ValueError) as exc:
            raise StepFailedError(index, str(exc)) from exc
    if sequence and sequence.target_sha and sequence.target_sha != current.digest():
        raise StepFailedError(len(step_list), "target digest does not match the result")
    return current


def _valid_root_edge_pairs(a: FanoBottMatrix) -> list[tuple[int, int]]:
    """(k, l) pairs where the root-edge flip applies."""
    ps = to_phi_sigma(a)
    d = a.dim
    roots = [v for v in range(1, d + 1) if ps.phi[v - 1] == d + 1]
    pairs = []
    for l in roots:
        for k in range(1, d + 1):
            if ps.phi[k - 1] == l:
                pairs.append((k, l))
    return pairs


def neighbors(a: FanoBottMatrix, *,
              use_root_edge_flips: bool = True) -> list[FanoBottMatrix]:
    """All admissible matrices one move away from a."""
    d = a.dim
    out = []
    for k in range(1, d + 1):
        out.append(flip_column(a, k))
    if use_root_edge_flips:
        for k, l in _valid_root_edge_pairs(a):
            out.append(flip_root_edge(a, k, l))
    for perm in permutations(range(1, d + 1)):
        try:
            out.append(validate(conjugate(a, perm)))
        except InvalidMatrixError:
            continue
    return out


def bfs_closure_classes(d: int, *,
                        use_root_edge_flips: bool = True
                        ) -> list[list[FanoBottMatrix]]:
    """Connected components of the move graph on the whole enumeration.

    This is ground truth for move reachability; intended for d <= 5.
    With use_root_edge_flips=False only relabelings and column flips are
    used, which characterizes isomorphism of the underlying varieties.
    Classes come in first-occurrence order of the enumeration stream and
    list their members in stream order.
    """
    mats = list(enumerate_matrices(d))
    index = {m: i for i, m in enumerate(mats)}
    parent = list(range(len(mats)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for m in mats:
        i = index[m]
        for n in neighbors(m, use_root_edge_flips=use_root_edge_flips):
            union(i, index[n])
    groups: dict[int, list[FanoBottMatrix]] = defaultdict(list)
    order: list[int] = []
    for i, m in enumerate(mats):
        root = find(i)
        if root not in groups:
            order.append(root)
        groups[root].append(m)
    return [groups[root] for root in order]


def _match_forests(t1: SignedRootedForest, t2: SignedRootedForest
                   ) -> tuple[dict[int, int], list[int], list[tuple[int, int]]]:
    """Match two forests with equal diffeo codes vertex by vertex.

    Returns (mapping, flips, edge_flips): a label bijection t1 -> t2, the
    t2-labels whose child-edge signs must flip, and the (root, child)
    t2-label pairs whose root edges must flip, so that relabeling t1 by
    the mapping and applying the flips reproduces t2 exactly.
    """
    kids1, kids2 = children_map(t1), children_map(t2)
    code1, code2 = subtree_codes(t1), subtree_codes(t2)
    mapping: dict[int, int] = {}
    flips: list[int] = []
    edge_flips: list[tuple[int, int]] = []

    def pair_groups(items1: list[tuple], items2: list[tuple],
                    ) -> list[tuple[int, int]]:
        groups1: dict[object, list[int]] = defaultdict(list)
        groups2: dict[object, list[int]] = defaultdict(list)
        for key, label in items1:
            groups1[key].append(label)
        for key, label in items2:
            groups2[key].append(label)
        if set(groups1) != set(groups2):
            raise FanoBottError("internal: forest matching diverged")
        pairs = []
        for key in groups1:
            g1, g2 = sorted(groups1[key]), sorted(groups2[key])
            if len(g1) != len(g2):
                raise FanoBottError("internal: forest matching diverged")
            pairs.extend(zip(g1, g2))
        return pairs

    def match(u: int, u2: int) -> None:
        mapping[u] = u2
        toks1 = sorted((code1[c], t1.signs[c - 1]) for c in kids1[u])
        toks2 = sorted((code2[c], t2.signs[c - 1]) for c in kids2[u2])
        flipped1 = sorted((code, _FLIP[s]) for code, s in toks1)
        if toks1 == toks2:
            eps = 0
        elif flipped1 == toks2:
            eps = 1
        else:
            raise FanoBottError("internal: forest matching diverged")
        if eps:
            flips.append(u2)
        items1 = [
            ((code1[c], t1.signs[c - 1] if not eps else _FLIP[t1.signs[c - 1]]), c)
            for c in kids1[u]
        ]
        items2 = [((code2[c], t2.signs[c - 1]), c) for c in kids2[u2]]
        for c, c2 in pair_groups(items1, items2):
            match(c, c2)

    def match_root(r: int, r2: int) -> None:
        mapping[r] = r2
        items1 = [(code1[c], c) for c in kids1[r]]
        items2 = [(code2[c], c) for c in kids2[r2]]
        for c, c2 in pair_groups(items1, items2):
            if t1.signs[c - 1] != t2.signs[c2 - 1]:
                edge_flips.append((r2, c2))
            match(c, c2)

    def root_code(t: SignedRootedForest, kids, codes, r: int) -> str:
        return "[" + ",".join(sorted(codes[c] for c in kids[r])) + "]"

    items1 = [(root_code(t1, kids1, code1, r), r) for r in t1.roots()]
    items2 = [(root_code(t2, kids2, code2, r), r) for r in t2.roots()]
    for r, r2 in pair_groups(items1, items2):
        match_root(r, r2)
    return mapping, flips, edge_flips


def find_witness(a: FanoBottMatrix, a2: FanoBottMatrix) -> OpSequence | None:
    """Construct a replayable move sequence from a to a2, or None.

    Both matrices are routed toward a common labeled form: one relabeling
    step (when needed), then column flips, then root-edge flips.  Returns
    None exactly when the diffeo codes differ.

    Raises:
        DimensionMismatchError: if the sizes differ.
    """
    if a.dim != a2.dim:
        raise DimensionMismatchError(f"sizes {a.dim} and {a2.dim} differ")
    t1, t2 = from_matrix(a), from_matrix(a2)
    if canonical_code(t1, DIFFEO) != canonical_code(t2, DIFFEO):
        return None
    mapping, flips, edge_flips = _match_forests(t1, t2)
    d = a.dim
    perm = tuple(mapping[i] for i in range(1, d + 1))
    steps: list[OpStep] = []
    if perm != identity_perm(d):
        steps.append(ConjugateStep(perm))
    steps.extend(ColumnFlipStep(k) for k in sorted(flips))
    steps.extend(RootEdgeFlipStep(k, l) for l, k in sorted(edge_flips))
    result = replay(a, steps)
    if result != a2:
        raise FanoBottError("internal: witness replay failed to reach the target")
    return OpSequence(tuple(steps), a.digest(), a2.digest())
