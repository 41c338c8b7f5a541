"""The coordinatized order ``L_X(T)``, kept virtual.

Members are finite sequences of rationals.  A sequence belongs to the model
for ``T`` when its class sequence is a leaf path of ``T`` and every coordinate
sitting below a sum node is the literal child index.  Members are ordered
lexicographically; two members are ``E_t``-related when both lie below ``t``
and agree on their first ``len(t)`` coordinates.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Collection, Dict, Iterable, List, Mapping, Sequence, Tuple

from .errors import EmbeddingError
from .finstruct import FinStructure, check_valid
from .presentation import (
    LEAF,
    SUM,
    NodePath,
    TreePresentation,
    has_shuffle,
    iter_nodes,
    leaf_paths,
    subtree,
)
from .rationals import class_of, class_prime, fresh_in_class

CoordPoint = Tuple[Fraction, ...]

SAMPLE_DENOMINATOR_CAP = 2**16


def class_path(point: Sequence[Fraction]) -> NodePath:
    return tuple(class_of(r) for r in point)


def contains(T: TreePresentation, point: Sequence[Fraction]) -> bool:
    node = T
    for r in point:
        if node.kind == LEAF:
            return False
        c = class_of(r)
        if c > len(node.children):
            return False
        if node.kind == SUM and r != c:
            return False
        node = node.children[c - 1]
    return node.kind == LEAF


def _require_member(T: TreePresentation, point: Sequence[Fraction]) -> None:
    if not contains(T, point):
        raise ValueError(f"{[str(r) for r in point]} is not a member of the model")


def lex_compare(T: TreePresentation, a: Sequence[Fraction], b: Sequence[Fraction]) -> int:
    _require_member(T, a)
    _require_member(T, b)
    a, b = tuple(a), tuple(b)
    return (a > b) - (a < b)


def _related(t: NodePath, a: Sequence[Fraction], b: Sequence[Fraction]) -> bool:
    k = len(t)
    if len(a) < k or len(b) < k or tuple(a[:k]) != tuple(b[:k]):
        return False
    return class_path(a[:k]) == tuple(t)


def related(T: TreePresentation, t: Sequence[int], a: Sequence[Fraction], b: Sequence[Fraction]) -> bool:
    """Whether ``a`` and ``b`` lie in the same ``t``-interval."""
    subtree(T, t)
    _require_member(T, a)
    _require_member(T, b)
    return _related(tuple(t), a, b)


def extend_embedding(
    S: FinStructure,
    coords: Mapping[int, CoordPoint],
    x: int,
    avoid: Iterable[CoordPoint] = (),
) -> CoordPoint:
    """Coordinates for point ``x`` extending an embedding of the points in ``coords``.

    Coordinates are fixed left to right.  Below a sum node the coordinate is
    the child index.  Below a shuffle node it is copied from a point sharing
    the next interval with ``x`` when one exists; otherwise it is a fresh
    rational of the right class strictly between the neighbours of ``x`` in
    the current interval.  ``avoid`` lists extra model points whose coordinate
    at a free position is kept clear of, without affecting correctness.
    """
    T = S.tree
    if x in coords:
        raise EmbeddingError(f"point {x} is already placed")
    leaves = S.leaves_of(x)
    if len(leaves) != 1:
        raise EmbeddingError(f"point {x} lies in {len(leaves)} leaf domains, expected exactly one")
    leaf = leaves[0]
    placed = sorted(coords)
    avoid = list(avoid)
    out: List[Fraction] = []
    for i in range(len(leaf)):
        node = subtree(T, leaf[:i])
        if node.kind == SUM:
            out.append(Fraction(leaf[i]))
            continue
        here, below = leaf[:i], leaf[: i + 1]
        witness = next((y for y in placed if S.related(below, x, y)), None)
        if witness is not None:
            wc = coords[witness]
            if len(wc) <= i or tuple(wc[:i]) != tuple(out):
                raise EmbeddingError(f"witness {witness} for point {x} has inconsistent coordinates")
            out.append(wc[i])
            continue
        lower = upper = None
        for z in placed:
            if not S.related(here, x, z):
                continue
            zc = coords[z]
            if len(zc) <= i or tuple(zc[:i]) != tuple(out):
                raise EmbeddingError(f"point {z} shares an interval with {x} but not its coordinates")
            if z < x and (lower is None or zc[i] > lower):
                lower = zc[i]
            if z > x and (upper is None or zc[i] < upper):
                upper = zc[i]
        if lower is not None and upper is not None and not lower < upper:
            # Two bounding points with equal coordinate would share the next
            # interval and, by convexity, give x a witness.
            raise EmbeddingError(
                f"empty gap for point {x} at coordinate {i}: lower {lower} >= upper {upper}"
            )
        for av in avoid:
            if len(av) > i and tuple(av[:i]) == tuple(out):
                v = av[i]
                if (lower is None or v > lower) and (upper is None or v < upper):
                    upper = v
        out.append(fresh_in_class(leaf[i], lower, upper))
    return tuple(out)


def verify_embedding(S: FinStructure, coords: Sequence[CoordPoint]) -> List[str]:
    """Problems preventing ``i -> coords[i]`` from being an embedding (empty if none)."""
    T = S.tree
    problems = []
    if len(coords) != S.n:
        return [f"expected {S.n} coordinate sequences, got {len(coords)}"]
    for x, c in enumerate(coords):
        if not contains(T, c):
            problems.append(f"point {x} maps to a non-member")
    if problems:
        return problems
    for x in range(S.n - 1):
        if not tuple(coords[x]) < tuple(coords[x + 1]):
            problems.append(f"order not preserved between points {x} and {x + 1}")
    for path in S.nodes:
        for x in range(S.n):
            for y in range(x, S.n):
                if S.related(path, x, y) != _related(path, coords[x], coords[y]):
                    problems.append(f"relation <{','.join(map(str, path))}> differs on points {x}, {y}")
    return problems


def coordinatize(S: FinStructure, check: bool = True) -> List[CoordPoint]:
    """Embed the whole structure, point by point from the empty embedding.

    With ``check=False`` the axioms are not consulted first; the construction
    and the final verification alone decide success.
    """
    if check:
        check_valid(S)
    coords: Dict[int, CoordPoint] = {}
    for x in range(S.n):
        coords[x] = extend_embedding(S, coords, x)
    out = [coords[x] for x in range(S.n)]
    problems = verify_embedding(S, out)
    if problems:
        raise EmbeddingError("; ".join(problems[:3]))
    return out


def structure_from_coords(T: TreePresentation, points: Collection[CoordPoint]) -> Tuple[FinStructure, List[CoordPoint]]:
    """The substructure of the model induced on ``points``, with its sorted coordinates."""
    pts = sorted({tuple(p) for p in points})
    for p in pts:
        _require_member(T, p)
    paths = [path for path, _ in iter_nodes(T)]
    classes_of = [class_path(p) for p in pts]
    rels = {}
    for path in paths:
        k = len(path)
        groups: Dict[tuple, List[int]] = {}
        for i, p in enumerate(pts):
            if classes_of[i][:k] == path:
                groups.setdefault(p[:k], []).append(i)
        rels[path] = tuple(tuple(g) for g in groups.values())
    return FinStructure(T, len(pts), rels), pts


def model_size(T: TreePresentation) -> float:
    """Number of members: the leaf count for shuffle-free trees, else infinite."""
    return math.inf if has_shuffle(T) else len(leaf_paths(T))


def _random_in_class(rng: random.Random, c: int) -> Fraction:
    p = class_prime(c)
    kmax = max(1, int(math.log(SAMPLE_DENOMINATOR_CAP, p) + 1e-9))
    scale = p ** rng.randint(1, kmax)
    while True:
        a = rng.randint(-4 * scale, 4 * scale)
        if a % p:
            return Fraction(a, scale)


def sample_substructure(T: TreePresentation, n: int, seed: int) -> Tuple[FinStructure, List[CoordPoint]]:
    """A seeded random ``n``-point substructure of the model, with coordinates."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > model_size(T):
        raise ValueError(f"the model has only {len(leaf_paths(T))} members, cannot sample {n}")
    rng = random.Random(seed)
    leaves = leaf_paths(T)
    if not has_shuffle(T):
        chosen = rng.sample(leaves, n)
        return structure_from_coords(T, [tuple(Fraction(i) for i in leaf) for leaf in chosen])
    kinds = {path: node.kind for path, node in iter_nodes(T)}
    members = set()
    while len(members) < n:
        leaf = rng.choice(leaves)
        point = tuple(
            Fraction(leaf[i]) if kinds[leaf[:i]] == SUM else _random_in_class(rng, leaf[i])
            for i in range(len(leaf))
        )
        members.add(point)
    return structure_from_coords(T, members)
