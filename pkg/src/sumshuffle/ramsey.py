"""Exact small-instance checks of arrow relations ``C -> (B)^A_k``.

A coloring of the copies of ``A`` in ``C`` is *bad* when every copy of ``B``
in ``C`` sees at least two colors on the copies of ``A`` inside it.  The arrow
holds exactly when no bad coloring exists.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import ResourceCapExceeded
from .finstruct import DEFAULT_ENUM_CAP, FinStructure, copies, enumerate_structures

log = logging.getLogger(__name__)

DEFAULT_COPY_CAP = 24


@dataclass(frozen=True)
class ArrowResult:
    holds: bool
    # copy of A (as points of C) -> color in 1..k; set only when the arrow fails
    bad_coloring: Optional[Dict[Tuple[int, ...], int]] = None

    def __bool__(self) -> bool:
        return self.holds


def _hypergraph(C: FinStructure, B: FinStructure, A: FinStructure, cap: int):
    a_copies = copies(A, C)
    if len(a_copies) > cap:
        raise ResourceCapExceeded(f"{len(a_copies)} copies of A in C exceed the cap of {cap}")
    index = {pts: i for i, pts in enumerate(a_copies)}
    edges = []
    for b_pts in copies(B, C):
        # Copies of A inside a copy B' of B are the copies of A in C whose points
        # lie in B': substructures of an induced substructure are induced.
        inside = set(b_pts)
        edges.append(sorted(i for pts, i in index.items() if inside.issuperset(pts)))
    return a_copies, edges


def check_arrow(
    C: FinStructure,
    B: FinStructure,
    A: FinStructure,
    k: int,
    cap: int = DEFAULT_COPY_CAP,
) -> ArrowResult:
    """Decide ``C -> (B)^A_k`` by backtracking over colorings of the copies of ``A``.

    Colors are tried in increasing order with a new color only after all
    smaller ones are in use, so the first bad coloring found is the
    lexicographically least one.  A partial coloring is abandoned as soon as
    some copy of ``B`` has all its ``A``-copies colored alike.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    a_copies, edges = _hypergraph(C, B, A, cap)
    if not edges:
        return ArrowResult(False, {pts: 1 for pts in a_copies})
    if any(len(e) <= 1 for e in edges):
        return ArrowResult(True)
    closing: List[List[List[int]]] = [[] for _ in a_copies]
    for e in edges:
        closing[e[-1]].append(e)

    colors = [0] * len(a_copies)

    def search(v: int, used: int) -> bool:
        if v == len(a_copies):
            return True
        for c in range(min(used + 1, k)):
            colors[v] = c
            if all(any(colors[u] != c for u in e[:-1]) for e in closing[v]):
                if search(v + 1, max(used, c + 1)):
                    return True
        return False

    if search(0, 0):
        return ArrowResult(False, {pts: colors[i] + 1 for i, pts in enumerate(a_copies)})
    return ArrowResult(True)


def is_bad_coloring(C: FinStructure, B: FinStructure, A: FinStructure, coloring: Dict[Tuple[int, ...], int]) -> bool:
    """Direct scan: no copy of ``B`` is monochromatic under ``coloring``."""
    for b_pts in copies(B, C):
        seen = {coloring[a] for a in coloring if set(a) <= set(b_pts)}
        if len(seen) <= 1:
            return False
    return True


def search_witness(
    tree,
    B: FinStructure,
    A: FinStructure,
    k: int,
    size_cap: int,
    copy_cap: int = DEFAULT_COPY_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> Optional[FinStructure]:
    """Smallest-size ``C`` (first in enumeration order) with ``C -> (B)^A_k``.

    ``None`` means unknown: nothing was found up to ``size_cap``, or candidates
    were skipped because a cap was hit.  It never means the arrow is refuted.
    """
    for n in range(B.n, size_cap + 1):
        try:
            candidates = enumerate_structures(tree, n, cap=enum_cap)
        except ResourceCapExceeded:
            log.info("structure enumeration capped at size %d", n)
            return None
        for C in candidates:
            try:
                if check_arrow(C, B, A, k, cap=copy_cap).holds:
                    return C
            except ResourceCapExceeded:
                log.info("skipping a size-%d candidate over the copy cap", n)
    return None
