"""Signed rooted forests and their canonical codes.

The forest of an admissible matrix has one vertex per row: vertex i hangs
below vertex phi(i) with the sign of the leading entry of row i, and rows
with no leading entry are roots.  Three equivalence relations on forests
are decided through canonical codes:

* "rooted"  -- isomorphism of rooted forests, ignoring all edge signs;
* "variety" -- rooted isomorphism combined with flipping, at any set of
  vertices, the signs of all edges to their children simultaneously;
* "diffeo"  -- as "variety", plus flipping each root-adjacent edge on its
  own.

Codes are built bottom up.  A childless vertex contributes the atom "L".
Elsewhere each child contributes the token (code, sign); the token list is
sorted, comparing codes first and then signs with "+" < "-", for both the
given signs and the globally flipped signs, and the smaller list is kept.
Roots in "diffeo" mode drop the child-edge signs entirely.  Equal codes in
a mode characterize equivalence under that mode's group.
"""

from __future__ import annotations

from dataclasses import dataclass

from fanobott.matrix import (
    FanoBottError,
    FanoBottMatrix,
    PhiSigma,
    from_phi_sigma,
    phi_sigma,
    to_phi_sigma,
)

ROOTED = "rooted"
VARIETY = "variety"
DIFFEO = "diffeo"
MODES = (ROOTED, VARIETY, DIFFEO)

LEAF_ATOM = "L"
_FLIP = {"+": "-", "-": "+"}


class LabelOrderError(FanoBottError, ValueError):
    """A vertex label does not precede its parent's label."""

    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} does not precede its parent")


class NotALeafError(FanoBottError, ValueError):
    """The named vertex has children and cannot be cut."""

    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} is not a leaf")


@dataclass(frozen=True)
class SignedRootedForest:
    """Forest on vertices 1..d.

    parents[i-1] is the parent label of vertex i, with 0 for roots;
    signs[i-1] is "+" or "-" for non-roots and "" for roots.
    """

    parents: tuple[int, ...]
    signs: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.parents)

    def parent(self, v: int) -> int:
        """Parent label of vertex v, 0 if v is a root."""
        return self.parents[v - 1]

    def sign(self, v: int) -> str:
        """Sign of the edge from v to its parent, "" if v is a root."""
        return self.signs[v - 1]

    def roots(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.size + 1) if self.parents[v - 1] == 0)

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "parents": list(self.parents),
            "signs": list(self.signs),
        }


def make_forest(parents: list[int] | tuple[int, ...],
                signs: list[str] | tuple[str, ...]) -> SignedRootedForest:
    """Validate parent/sign arrays and wrap them.

    Every vertex must reach a root by iterating the parent map, and signs
    must be "+"/"-" off the roots and "" on them.
    """
    d = len(parents)
    if len(signs) != d:
        raise ValueError(f"{d} parents but {len(signs)} signs")
    parents = tuple(int(p) for p in parents)
    signs = tuple(str(s) for s in signs)
    for v in range(1, d + 1):
        p = parents[v - 1]
        if not 0 <= p <= d:
            raise ValueError(f"parent({v}) = {p} out of range 0..{d}")
        if p == v:
            raise ValueError(f"vertex {v} is its own parent")
        expected = "" if p == 0 else ("+", "-")
        if p == 0 and signs[v - 1] != "":
            raise ValueError(f"sign({v}) given for a root vertex")
        if p != 0 and signs[v - 1] not in expected:
            raise ValueError(f"sign({v}) = {signs[v - 1]!r} is not '+' or '-'")
    for v in range(1, d + 1):
        seen = set()
        cur = v
        while parents[cur - 1] != 0:
            if cur in seen:
                raise ValueError(f"parent map cycles through vertex {cur}")
            seen.add(cur)
            cur = parents[cur - 1]
    return SignedRootedForest(parents, signs)


def forest_from_json(data: object) -> SignedRootedForest:
    """Parse {"size": d, "parents": [...], "signs": [...]}."""
    if not isinstance(data, dict) or "parents" not in data or "signs" not in data:
        raise ValueError('forest object must carry "parents" and "signs"')
    if not isinstance(data["parents"], list) or not isinstance(data["signs"], list):
        raise ValueError('"parents" and "signs" must be lists')
    if "size" in data and int(data["size"]) != len(data["parents"]):
        raise ValueError('"size" does not match the number of parents')
    return make_forest(data["parents"], data["signs"])


def children_map(t: SignedRootedForest) -> dict[int, tuple[int, ...]]:
    """Label -> tuple of child labels in increasing order."""
    kids: dict[int, list[int]] = {v: [] for v in range(1, t.size + 1)}
    for v in range(1, t.size + 1):
        p = t.parents[v - 1]
        if p != 0:
            kids[p].append(v)
    return {v: tuple(c) for v, c in kids.items()}


def leaves(t: SignedRootedForest) -> tuple[int, ...]:
    """Labels of vertices without children, in increasing order."""
    kids = children_map(t)
    return tuple(v for v in range(1, t.size + 1) if not kids[v])


def subtree_vertices(t: SignedRootedForest, v: int) -> frozenset[int]:
    """v together with all of its descendants."""
    kids = children_map(t)
    out = set()
    stack = [v]
    while stack:
        u = stack.pop()
        out.add(u)
        stack.extend(kids[u])
    return frozenset(out)


def from_matrix(a: FanoBottMatrix) -> SignedRootedForest:
    """Forest with parent(i) = phi(i) where phi(i) <= d, roots elsewhere."""
    ps = to_phi_sigma(a)
    d = ps.dim
    parents = tuple(p if p <= d else 0 for p in ps.phi)
    signs = tuple(s if s is not None else "" for s in ps.sigma)
    return SignedRootedForest(parents, signs)


def to_matrix(t: SignedRootedForest) -> FanoBottMatrix:
    """Inverse of :func:`from_matrix`; labels must increase toward the roots.

    Raises:
        LabelOrderError: naming the first vertex whose parent label is
            not larger than its own.
    """
    d = t.size
    for v in range(1, d + 1):
        p = t.parents[v - 1]
        if p != 0 and p <= v:
            raise LabelOrderError(v)
    phi = tuple(p if p != 0 else d + 1 for p in t.parents)
    sigma = tuple(s if s != "" else None for s in t.signs)
    return from_phi_sigma(PhiSigma(phi, sigma))


def to_phi_sigma_of(t: SignedRootedForest) -> PhiSigma:
    """Parent/sign data of a label-ordered forest."""
    d = t.size
    phi = tuple(p if p != 0 else d + 1 for p in t.parents)
    sigma = tuple(s if s != "" else None for s in t.signs)
    return phi_sigma(phi, sigma)


def relabel_topological(
    t: SignedRootedForest,
) -> tuple[SignedRootedForest, tuple[int, ...]]:
    """Relabel so that every parent label exceeds all its children's.

    Vertices become eligible once all their children are relabeled, and the
    eligible vertex with the smallest original label goes next; an input
    that already satisfies the order comes back unchanged with the identity
    permutation.  Returns (forest, pi) with pi[i-1] the new label of the
    original vertex i.
    """
    import heapq

    d = t.size
    kids = children_map(t)
    pending = {v: len(kids[v]) for v in range(1, d + 1)}
    heap = [v for v in range(1, d + 1) if pending[v] == 0]
    heapq.heapify(heap)
    pi = [0] * d
    next_label = 0
    while heap:
        v = heapq.heappop(heap)
        next_label += 1
        pi[v - 1] = next_label
        p = t.parents[v - 1]
        if p != 0:
            pending[p] -= 1
            if pending[p] == 0:
                heapq.heappush(heap, p)
    parents = [0] * d
    signs = [""] * d
    for v in range(1, d + 1):
        p = t.parents[v - 1]
        parents[pi[v - 1] - 1] = pi[p - 1] if p != 0 else 0
        signs[pi[v - 1] - 1] = t.signs[v - 1]
    return SignedRootedForest(tuple(parents), tuple(signs)), tuple(pi)


def relabel(t: SignedRootedForest, pi: tuple[int, ...]) -> SignedRootedForest:
    """Apply an arbitrary relabeling pi (vertex i becomes pi[i-1])."""
    d = t.size
    if sorted(pi) != list(range(1, d + 1)):
        raise ValueError(f"{pi} is not a permutation of 1..{d}")
    parents = [0] * d
    signs = [""] * d
    for v in range(1, d + 1):
        p = t.parents[v - 1]
        parents[pi[v - 1] - 1] = pi[p - 1] if p != 0 else 0
        signs[pi[v - 1] - 1] = t.signs[v - 1]
    return SignedRootedForest(tuple(parents), tuple(signs))


def leaf_cut(t: SignedRootedForest, v: int) -> SignedRootedForest:
    """Remove the leaf v; labels above v shift down by one.

    Raises:
        NotALeafError: if v has children.
    """
    if not 1 <= v <= t.size:
        raise NotALeafError(v)
    kids = children_map(t)
    if kids[v]:
        raise NotALeafError(v)
    parents = []
    signs = []
    for u in range(1, t.size + 1):
        if u == v:
            continue
        p = t.parents[u - 1]
        parents.append(p - 1 if p > v else p)
        signs.append(t.signs[u - 1])
    return SignedRootedForest(tuple(parents), tuple(signs))


@dataclass(frozen=True)
class CanonicalCode:
    """Total-order code deciding equivalence in one mode."""

    mode: str
    code: str


def _vertex_code(v: int, kids: dict[int, tuple[int, ...]],
                 signs: tuple[str, ...], mode: str,
                 memo: dict[int, str]) -> str:
    if v in memo:
        return memo[v]
    children = kids[v]
    if not children:
        memo[v] = LEAF_ATOM
        return LEAF_ATOM
    if mode == ROOTED:
        inner = sorted(_vertex_code(c, kids, signs, mode, memo) for c in children)
        code = "(" + ",".join(inner) + ")"
    else:
        tokens = [
            (_vertex_code(c, kids, signs, mode, memo), signs[c - 1])
            for c in children
        ]
        given = sorted(tokens)
        flipped = sorted((code, _FLIP[s]) for code, s in tokens)
        best = min(given, flipped)
        code = "(" + ",".join(code + s for code, s in best) + ")"
    memo[v] = code
    return code


def _root_code(r: int, kids: dict[int, tuple[int, ...]],
               signs: tuple[str, ...], mode: str,
               memo: dict[int, str]) -> str:
    if mode == DIFFEO:
        inner = sorted(
            _vertex_code(c, kids, signs, mode, memo) for c in kids[r]
        )
        return "[" + ",".join(inner) + "]"
    return _vertex_code(r, kids, signs, mode, memo)


def canonical_code(t: SignedRootedForest, mode: str) -> CanonicalCode:
    """Canonical code of the forest in the given mode.

    The forest code is the sorted multiset of root codes.  Codes are equal
    exactly when the forests are related by a rooted-forest isomorphism
    composed with the sign flips the mode allows.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    kids = children_map(t)
    memo: dict[int, str] = {}
    root_codes = sorted(_root_code(r, kids, t.signs, mode, memo) for r in t.roots())
    return CanonicalCode(mode, "|".join(root_codes))


def equivalent(t1: SignedRootedForest, t2: SignedRootedForest, mode: str) -> bool:
    """Whether the two forests are equivalent under the mode's group."""
    return canonical_code(t1, mode) == canonical_code(t2, mode)


def subtree_codes(t: SignedRootedForest) -> dict[int, str]:
    """Flip-minimized signed code of the subtree hanging below each vertex."""
    kids = children_map(t)
    memo: dict[int, str] = {}
    for v in range(1, t.size + 1):
        _vertex_code(v, kids, t.signs, VARIETY, memo)
    return memo


def render_dot(t: SignedRootedForest) -> str:
    """Deterministic DOT digraph with signed edges and doubled root circles."""
    lines = ["digraph forest {", "  rankdir=BT;"]
    root_set = set(t.roots())
    for v in range(1, t.size + 1):
        if v in root_set:
            lines.append(f"  v{v} [shape=doublecircle];")
        else:
            lines.append(f"  v{v};")
    for v in range(1, t.size + 1):
        p = t.parents[v - 1]
        if p != 0:
            lines.append(f'  v{v} -> v{p} [label="{t.signs[v - 1]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
