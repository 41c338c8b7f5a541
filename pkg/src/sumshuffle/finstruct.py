"""Finite ordered structures with convex partial equivalence relations.

A :class:`FinStructure` over a tree presentation ``T`` has points ``0..n-1``
ordered by index and, for every node path ``t`` of ``T``, a relation ``E_t``
stored as a tuple of disjoint classes.  Points in no class are outside the
domain ``D_t``.

Because the order is part of the structure, an isomorphism between two
structures is forced to be the identity on indices; isomorphism is equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .errors import MalformedStructure, ResourceCapExceeded, ValidationError
from .presentation import (
    LEAF,
    LEAF_NODE,
    SUM,
    NodePath,
    Shuffle,
    TreePresentation,
    iter_nodes,
    parse,
    render,
)
from .rationals import format_rat, parse_rat

Classes = Tuple[Tuple[int, ...], ...]
Embedding = Tuple[int, ...]

DEFAULT_ENUM_CAP = 200_000


@dataclass(frozen=True, eq=False)
class FinStructure:
    tree: TreePresentation
    n: int
    relations: Mapping[NodePath, Classes]

    def __post_init__(self):
        if self.n < 0:
            raise MalformedStructure(f"negative point count {self.n}")
        nodes = dict(iter_nodes(self.tree))
        normalized: Dict[NodePath, Classes] = {}
        for path, classes in self.relations.items():
            path = tuple(path)
            if path not in nodes:
                raise MalformedStructure(f"unknown node path {path!r} for {render(self.tree)}")
            seen: set = set()
            cleaned = []
            for cls in classes:
                members = tuple(sorted(cls))
                if not members:
                    raise MalformedStructure(f"empty class in relation {path!r}")
                if len(set(members)) != len(members):
                    raise MalformedStructure(f"repeated point in a class of {path!r}")
                for x in members:
                    if not 0 <= x < self.n:
                        raise MalformedStructure(f"point {x} out of range in relation {path!r}")
                    if x in seen:
                        raise MalformedStructure(f"classes of {path!r} overlap at point {x}")
                    seen.add(x)
                cleaned.append(members)
            normalized[path] = tuple(sorted(cleaned))
        for path in nodes:
            normalized.setdefault(path, ())
        ordered = {path: normalized[path] for path in nodes}
        object.__setattr__(self, "relations", ordered)

    @cached_property
    def nodes(self) -> Dict[NodePath, TreePresentation]:
        return dict(iter_nodes(self.tree))

    @cached_property
    def _class_ids(self) -> Dict[NodePath, Dict[int, int]]:
        return {
            path: {x: i for i, cls in enumerate(classes) for x in cls}
            for path, classes in self.relations.items()
        }

    @cached_property
    def profile(self) -> Tuple[Tuple[int, ...], ...]:
        """Per point, the class id at every node (``-1`` outside the domain)."""
        ids = [self._class_ids[path] for path in self.nodes]
        return tuple(tuple(m.get(x, -1) for m in ids) for x in range(self.n))

    def key(self) -> tuple:
        return (render(self.tree), self.n, tuple(self.relations.items()))

    def __eq__(self, other):
        if not isinstance(other, FinStructure):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        rels = {k: v for k, v in self.relations.items() if v}
        return f"FinStructure({render(self.tree)}, n={self.n}, {rels})"

    def classes(self, path: Sequence[int]) -> Classes:
        path = tuple(path)
        if path not in self.relations:
            raise MalformedStructure(f"unknown node path {path!r}")
        return self.relations[path]

    def in_domain(self, path: Sequence[int], x: int) -> bool:
        return x in self._class_ids[tuple(path)]

    def related(self, path: Sequence[int], x: int, y: int) -> bool:
        ids = self._class_ids[tuple(path)]
        return x in ids and y in ids and ids[x] == ids[y]

    def leaves_of(self, x: int) -> List[NodePath]:
        return [p for p, node in self.nodes.items() if node.kind == LEAF and self.in_domain(p, x)]

    def induced(self, points: Iterable[int]) -> "FinStructure":
        """Substructure on the given points, reindexed in order."""
        pts = sorted(set(points))
        index = {x: i for i, x in enumerate(pts)}
        rels = {}
        for path, classes in self.relations.items():
            kept = [tuple(index[x] for x in cls if x in index) for cls in classes]
            rels[path] = tuple(c for c in kept if c)
        return FinStructure(self.tree, len(pts), rels)


def empty_structure(tree: TreePresentation) -> FinStructure:
    return FinStructure(tree, 0, {})


# -- validation ------------------------------------------------------------


class Violation(NamedTuple):
    axiom: str
    path: NodePath
    points: Tuple[int, ...]
    message: str

    def __str__(self) -> str:
        where = ",".join(map(str, self.path))
        return f"({self.axiom}) at <{where}> points {list(self.points)}: {self.message}"


def validate(S: FinStructure) -> List[Violation]:
    """Check the axioms; an empty list means ``S`` belongs to the class.

    Besides the five axiom groups this enforces nesting: every class of a
    child relation lies inside one class of its parent's relation.  In the
    coordinate model this holds because agreeing on a longer prefix implies
    agreeing on a shorter one, and without it non-embeddable structures pass.
    """
    out: List[Violation] = []
    for path, classes in S.relations.items():
        for cls in classes:
            if cls[-1] - cls[0] + 1 != len(cls):
                gap = tuple(sorted(set(range(cls[0], cls[-1] + 1)) - set(cls)))
                out.append(Violation("T1", path, gap, f"class {list(cls)} is not convex"))

    root = S.relations[()]
    if S.n and root != (tuple(range(S.n)),):
        covered = {x for cls in root for x in cls}
        missing = tuple(x for x in range(S.n) if x not in covered)
        if missing:
            out.append(Violation("T2", (), missing, "points outside the root relation"))
        if len(root) > 1:
            out.append(Violation("T2", (), tuple(c[0] for c in root), "root relation has several classes"))

    for path, node in S.nodes.items():
        if node.kind == LEAF:
            for cls in S.relations[path]:
                if len(cls) > 1:
                    out.append(Violation("T3", path, cls, "leaf class with more than one point"))
            continue
        kids = [path + (i,) for i in range(1, len(node.children) + 1)]
        for x in range(S.n):
            inside = [k for k in kids if S.in_domain(k, x)]
            if S.in_domain(path, x) and not inside:
                out.append(Violation("T4", path, (x,), "point in the domain but in no child domain"))
            if not S.in_domain(path, x) and inside:
                out.append(Violation("T4", inside[0], (x,), "point in a child domain but not in the parent domain"))
            if len(inside) > 1:
                out.append(Violation("T4", path, (x,), f"point in several child domains {inside}"))
        for k in kids:
            for cls in S.relations[k]:
                parents = {S._class_ids[path].get(x) for x in cls}
                if len(parents) > 1 or None in parents:
                    out.append(Violation("nesting", k, cls, f"class is not inside a single class of <{','.join(map(str, path))}>"))
        if node.kind == SUM:
            out.extend(_sum_violations(S, path, kids))
    return out


def _sum_violations(S: FinStructure, path: NodePath, kids: List[NodePath]) -> Iterator[Violation]:
    for cls in S.relations[path]:
        child_index = {}
        for x in cls:
            for i, k in enumerate(kids):
                if S.in_domain(k, x):
                    child_index[x] = i
                    break
        for x, y in itertools.combinations(cls, 2):
            if x not in child_index or y not in child_index:
                continue
            i, j = child_index[x], child_index[y]
            if i == j and not S.related(kids[i], x, y):
                yield Violation(
                    "T5", kids[i], (x, y),
                    "same child domain inside one sum class but not related by the child relation",
                )
            elif i > j:
                yield Violation("T5", path, (x, y), f"child {i + 1} precedes child {j + 1} inside a sum class")


def is_valid(S: FinStructure) -> bool:
    return not validate(S)


def check_valid(S: FinStructure) -> None:
    violations = validate(S)
    if violations:
        raise ValidationError(violations)


# -- embeddings ------------------------------------------------------------


def _same_tree(A: FinStructure, B: FinStructure) -> None:
    if A.tree != B.tree:
        raise ValueError(f"structures over different trees: {render(A.tree)} vs {render(B.tree)}")


def _pair_ok(pa, pa2, pb, pb2) -> bool:
    # E_t(x, x') in A iff E_t(y, y') in B, for every node at once
    for a, a2, b, b2 in zip(pa, pa2, pb, pb2):
        if (a != -1 and a == a2) != (b != -1 and b == b2):
            return False
    return True


def enumerate_embeddings(A: FinStructure, B: FinStructure) -> Iterator[Embedding]:
    """All order-preserving injections preserving and reflecting every relation."""
    _same_tree(A, B)
    pa, pb = A.profile, B.profile
    image: List[int] = []

    def extend(x: int, start: int) -> Iterator[Embedding]:
        if x == A.n:
            yield tuple(image)
            return
        for y in range(start, B.n - (A.n - x) + 1):
            if not _pair_ok(pa[x], pa[x], pb[y], pb[y]):
                continue
            if all(_pair_ok(pa[x2], pa[x], pb[y2], pb[y]) for x2, y2 in zip(range(x), image)):
                image.append(y)
                yield from extend(x + 1, y + 1)
                image.pop()

    yield from extend(0, 0)


def is_embedding(A: FinStructure, B: FinStructure, f: Sequence[int]) -> bool:
    _same_tree(A, B)
    f = tuple(f)
    if len(f) != A.n or any(not 0 <= y < B.n for y in f):
        return False
    if any(a >= b for a, b in zip(f, f[1:])):
        return False
    pa, pb = A.profile, B.profile
    return all(
        _pair_ok(pa[x], pa[x2], pb[f[x]], pb[f[x2]])
        for x in range(A.n)
        for x2 in range(x, A.n)
    )


def are_isomorphic(A: FinStructure, B: FinStructure) -> bool:
    """The only candidate isomorphism is the order-preserving bijection."""
    _same_tree(A, B)
    return A.n == B.n and A.relations == B.relations


def copies(A: FinStructure, B: FinStructure) -> List[Tuple[int, ...]]:
    """Point sets of the substructures of ``B`` isomorphic to ``A``."""
    return list(enumerate_embeddings(A, B))


# -- exhaustive generation -------------------------------------------------

_Local = Dict[NodePath, List[Tuple[int, ...]]]


def _shifted(local: _Local, prefix: NodePath, offset: int, into: _Local) -> None:
    for rel, classes in local.items():
        into.setdefault(prefix + rel, []).extend(tuple(x + offset for x in c) for c in classes)


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class _Budget:
    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.cap:
            raise ResourceCapExceeded(f"structure enumeration exceeded cap {self.cap}")


def _generate(tp: TreePresentation, m: int, budget: _Budget) -> Iterator[_Local]:
    if m == 0:
        yield {}
        return
    whole = {(): [tuple(range(m))]}
    if tp.kind == LEAF:
        if m == 1:
            yield whole
        return
    if tp.kind == SUM:
        for sizes in _compositions(m, len(tp.children)):
            parts = [list(_generate(c, k, budget)) for c, k in zip(tp.children, sizes)]
            for combo in itertools.product(*parts):
                budget.tick()
                local: _Local = {(): [tuple(range(m))]}
                offset = 0
                for i, (part, k) in enumerate(zip(combo, sizes), start=1):
                    _shifted(part, (i,), offset, local)
                    offset += k
                yield local
        return
    # Shuffle: an ordered sequence of blocks, each a nonempty structure of
    # one child; neighbouring blocks are independent (distinct first coordinates).
    for blocks in _block_sequences(tp, m, budget):
        budget.tick()
        local = {(): [tuple(range(m))]}
        offset = 0
        for i, k, part in blocks:
            _shifted(part, (i,), offset, local)
            offset += k
        yield local


def _block_sequences(tp: TreePresentation, m: int, budget: _Budget) -> Iterator[list]:
    if m == 0:
        yield []
        return
    for size in range(1, m + 1):
        for i, child in enumerate(tp.children, start=1):
            for part in _generate(child, size, budget):
                for rest in _block_sequences(tp, m - size, budget):
                    yield [(i, size, part)] + rest


def enumerate_structures(tree: TreePresentation, n: int, cap: int = DEFAULT_ENUM_CAP) -> List[FinStructure]:
    """Every member of the class with ``n`` points, one per isomorphism type."""
    if n < 0:
        raise ValueError("n must be non-negative")
    budget = _Budget(cap)
    seen = set()
    out = []
    for local in _generate(tree, n, budget):
        S = FinStructure(tree, n, {p: tuple(c) for p, c in local.items()})
        k = S.key()
        if k not in seen:
            seen.add(k)
            out.append(S)
    return out


# -- amalgamation ----------------------------------------------------------


@dataclass(frozen=True)
class Amalgam:
    D: FinStructure
    f_prime: Embedding
    g_prime: Embedding
    coords: tuple


def amalgamate(
    A: FinStructure,
    B: FinStructure,
    C: FinStructure,
    f: Sequence[int],
    g: Sequence[int],
) -> Amalgam:
    """Amalgamate ``B`` and ``C`` over ``A`` inside the coordinate model.

    ``B`` is coordinatized, ``A``'s image in ``C`` inherits those coordinates,
    and the rest of ``C`` is placed one point at a time.  Free coordinates of
    new ``C`` points are kept off ``B``'s coordinates, so points of ``B`` and
    ``C`` outside ``A`` are only identified when the tree forces it.
    """
    from .coordmodel import coordinatize, extend_embedding, structure_from_coords, verify_embedding

    _same_tree(A, B)
    _same_tree(A, C)
    for name, S in (("A", A), ("B", B), ("C", C)):
        violations = validate(S)
        if violations:
            raise ValidationError([v._replace(message=f"{name}: {v.message}") for v in violations])
    if not is_embedding(A, B, f):
        raise ValueError(f"f = {list(f)} is not an embedding of A into B")
    if not is_embedding(A, C, g):
        raise ValueError(f"g = {list(g)} is not an embedding of A into C")

    coords_b = coordinatize(B)
    coords_c = {g[a]: coords_b[f[a]] for a in range(A.n)}
    for x in range(C.n):
        if x not in coords_c:
            coords_c[x] = extend_embedding(C, coords_c, x, avoid=coords_b)
    placed = [coords_c[x] for x in range(C.n)]
    problems = verify_embedding(C, placed)
    if problems:
        raise AssertionError(f"amalgamation produced a non-embedding of C: {problems[0]}")

    D, coords_d = structure_from_coords(A.tree, set(coords_b) | set(placed))
    index = {c: i for i, c in enumerate(coords_d)}
    return Amalgam(
        D,
        tuple(index[c] for c in coords_b),
        tuple(index[c] for c in placed),
        tuple(coords_d),
    )


# -- JSON ------------------------------------------------------------------


def path_text(path: Sequence[int]) -> str:
    return ",".join(str(i) for i in path)


def parse_path(text: str) -> NodePath:
    text = text.strip()
    if not text:
        return ()
    try:
        path = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise MalformedStructure(f"bad node path {text!r}") from None
    if any(i < 1 for i in path):
        raise MalformedStructure(f"node path {text!r} has a non-positive index")
    return path


def to_json(S: FinStructure, coords: Optional[Sequence[Sequence]] = None) -> dict:
    doc = {
        "tree": render(S.tree),
        "points": S.n,
        "relations": {
            path_text(p): [list(c) for c in classes] for p, classes in S.relations.items() if classes
        },
    }
    if coords is not None:
        doc["coords"] = [[format_rat(r) for r in point] for point in coords]
    return doc


def from_json(doc: Mapping) -> Tuple[FinStructure, Optional[List[tuple]]]:
    """Read a structure document; returns the structure and its coordinates, if any."""
    try:
        tree = parse(doc["tree"])
        n = doc["points"]
        raw = doc.get("relations", {})
    except (KeyError, TypeError) as exc:
        raise MalformedStructure(f"structure document is missing {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool):
        raise MalformedStructure("'points' must be an integer")
    if not isinstance(raw, Mapping):
        raise MalformedStructure("'relations' must be an object")
    rels = {}
    for key, classes in raw.items():
        if not isinstance(classes, list) or not all(isinstance(c, list) for c in classes):
            raise MalformedStructure(f"relation {key!r} must be a list of classes")
        for c in classes:
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in c):
                raise MalformedStructure(f"relation {key!r} has a non-integer point")
        rels[parse_path(key)] = tuple(tuple(c) for c in classes)
    S = FinStructure(tree, n, rels)
    coords = None
    if "coords" in doc:
        coords = [tuple(parse_rat(r) for r in point) for point in doc["coords"]]
        if len(coords) != n:
            raise MalformedStructure("'coords' must list one coordinate sequence per point")
    return S, coords


def single_point(tree: TreePresentation, leaf: NodePath) -> FinStructure:
    """The one-point structure whose point lies on the given leaf."""
    rels = {leaf[:i]: ((0,),) for i in range(len(leaf) + 1)}
    return FinStructure(tree, 1, rels)


def chain(n: int) -> FinStructure:
    """The ``n``-point structure over ``sigma(1)``: a bare ordered set."""
    tree = Shuffle((LEAF_NODE,))
    return FinStructure(tree, n, {(): (tuple(range(n)),) if n else (), (1,): tuple((x,) for x in range(n))})
