"""Finite convexly ordered ultrametric spaces and structures over ``sigma^m(1)``.

With distances ``0 = s_0 < s_1 < ... < s_m`` and the nodes of ``sigma^m(1)``
listed from the leaf ``t_0 = (1,)*m`` up to the root ``t_m = ()``, a space
becomes a structure via ``x E_{t_i} y  iff  d(x, y) <= s_i``, and a structure
becomes a space via ``d(x, y) = s_i`` for the least ``i`` relating ``x, y``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Mapping, Sequence, Tuple

from .errors import MalformedStructure, ValidationError
from .finstruct import FinStructure, validate
from .presentation import NodePath, sigma_power
from .rationals import RatLike, as_rat, format_rat


class UltraError(ValueError):
    pass


@dataclass(frozen=True)
class UltraSpace:
    n: int
    S: Tuple[Fraction, ...]
    d: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "S", tuple(as_rat(s) for s in self.S))
        object.__setattr__(self, "d", tuple(tuple(as_rat(v) for v in row) for row in self.d))
        if len(self.d) != self.n or any(len(row) != self.n for row in self.d):
            raise UltraError(f"distance matrix must be {self.n}x{self.n}")

    @property
    def m(self) -> int:
        return len(self.S)

    @classmethod
    def from_pairs(cls, n: int, S: Sequence[RatLike], dist: Mapping[Tuple[int, int], RatLike]) -> "UltraSpace":
        """Build from distances on pairs ``x < y``."""
        rows = [[Fraction(0)] * n for _ in range(n)]
        for (x, y), v in dist.items():
            rows[x][y] = rows[y][x] = as_rat(v)
        return cls(n, tuple(S), tuple(map(tuple, rows)))


def violations(u: UltraSpace) -> List[str]:
    out = []
    S = u.S
    if any(s <= 0 for s in S) or any(a >= b for a, b in zip(S, S[1:])):
        out.append("distance set must be strictly increasing and positive")
    allowed = set(S)
    d = u.d
    for x in range(u.n):
        if d[x][x] != 0:
            out.append(f"d({x},{x}) must be 0")
        for y in range(x + 1, u.n):
            if d[x][y] != d[y][x]:
                out.append(f"d({x},{y}) is not symmetric")
            if d[x][y] not in allowed:
                out.append(f"d({x},{y}) = {format_rat(d[x][y])} is not in S")
    for x, y, z in itertools.permutations(range(u.n), 3):
        if d[x][z] > max(d[x][y], d[y][z]):
            out.append(f"ultrametric inequality fails on {x},{y},{z}")
    for x, y, z in itertools.combinations(range(u.n), 3):
        if d[x][y] > d[x][z] or d[y][z] > d[x][z]:
            out.append(f"balls are not convex on {x} < {y} < {z}")
    return out


def is_valid_space(u: UltraSpace) -> bool:
    return not violations(u)


def level_paths(m: int) -> List[NodePath]:
    """``t_0, ..., t_m``: leaf first, root last."""
    return [(1,) * (m - i) for i in range(m + 1)]


def to_structure(u: UltraSpace) -> FinStructure:
    problems = violations(u)
    if problems:
        raise UltraError("; ".join(problems[:3]))
    thresholds = (Fraction(0),) + u.S
    rels = {}
    for t, s in zip(level_paths(u.m), thresholds):
        # Convexity makes each ball an interval, so linking neighbours suffices.
        classes: List[List[int]] = []
        for x in range(u.n):
            if classes and u.d[x - 1][x] <= s:
                classes[-1].append(x)
            else:
                classes.append([x])
        rels[t] = tuple(tuple(c) for c in classes)
    return FinStructure(sigma_power(u.m), u.n, rels)


def to_ultrametric(A: FinStructure, S: Sequence[RatLike]) -> UltraSpace:
    S = tuple(as_rat(s) for s in S)
    m = len(S)
    if A.tree != sigma_power(m):
        raise UltraError(f"structure tree does not match sigma^{m}(1) for |S| = {m}")
    problems = validate(A)
    if problems:
        raise ValidationError(problems)
    thresholds = (Fraction(0),) + S
    levels = level_paths(m)
    dist = {}
    for x, y in itertools.combinations(range(A.n), 2):
        i = next(i for i, t in enumerate(levels) if A.related(t, x, y))
        dist[(x, y)] = thresholds[i]
    return UltraSpace.from_pairs(A.n, S, dist)


def isometric_embeddings(u: UltraSpace, v: UltraSpace) -> List[Tuple[int, ...]]:
    """Order-preserving distance-preserving injections, by brute force."""
    out = []
    for image in itertools.combinations(range(v.n), u.n):
        if all(
            u.d[x][y] == v.d[image[x]][image[y]]
            for x, y in itertools.combinations(range(u.n), 2)
        ):
            out.append(image)
    return out


def all_spaces(n: int, S: Sequence[RatLike]) -> List[UltraSpace]:
    """Every convexly ordered ultrametric space on ``n`` ordered points with distances in ``S``."""
    S = tuple(as_rat(s) for s in S)
    pairs = list(itertools.combinations(range(n), 2))
    out = []
    for values in itertools.product(S, repeat=len(pairs)):
        u = UltraSpace.from_pairs(n, S, dict(zip(pairs, values)))
        if is_valid_space(u):
            out.append(u)
    return out


def to_json(u: UltraSpace) -> dict:
    return {
        "S": [format_rat(s) for s in u.S],
        "points": u.n,
        "d": [[format_rat(u.d[x][y]) for y in range(x + 1, u.n)] for x in range(u.n - 1)],
    }


def from_json(doc: Mapping) -> UltraSpace:
    try:
        S = [as_rat(s) for s in doc["S"]]
        n = doc["points"]
        rows = doc["d"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedStructure(f"bad ultrametric document: {exc}") from None
    if not isinstance(n, int) or n < 0:
        raise MalformedStructure("'points' must be a non-negative integer")
    rows = list(rows)
    if n and len(rows) == n and not rows[-1]:
        rows = rows[:-1]
    if len(rows) != max(n - 1, 0) or any(len(r) != n - 1 - x for x, r in enumerate(rows)):
        raise MalformedStructure("'d' must hold the upper triangle row by row")
    dist = {(x, x + 1 + j): as_rat(v) for x, r in enumerate(rows) for j, v in enumerate(r)}
    return UltraSpace.from_pairs(n, S, dist)
