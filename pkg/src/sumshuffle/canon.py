"""Canonical tree presentations by symbolic condensation.

A tree presentation is translated into a condensation term: a sequence of
components, each either a labeled point ``Pt(label)`` or a dense mixture
``Mix(segments)`` in which copies of every segment are interleaved along a
dense order, each segment densely often.  Two rewriting passes then alternate
until a single point remains:

* finite condensation merges maximal runs of adjacent points into one point
  labeled by their sum;
* label condensation collapses maximal homogeneous intervals into one point
  labeled by the shuffle of their label set.

The label of the final point is the canonical presentation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Tuple, Union

from .presentation import (
    LEAF,
    LEAF_NODE,
    SHUFFLE,
    SUM,
    Shuffle,
    Sum,
    TreePresentation,
    node_count,
    structural_key,
)


class CanonError(RuntimeError):
    """The condensation loop stalled or overran its bound (a bug, never expected)."""


@dataclass(frozen=True)
class Pt:
    label: TreePresentation

    def __repr__(self) -> str:
        return f"Pt({self.label})"


@dataclass(frozen=True)
class Mix:
    segments: Tuple[Tuple["Component", ...], ...]

    def __repr__(self) -> str:
        return "Mix({" + ", ".join(_seq_repr(seg) for seg in self.segments) + "})"


Component = Union[Pt, Mix]
CondTerm = Tuple[Component, ...]
LabelSet = Tuple[TreePresentation, ...]


def _seq_repr(seq: CondTerm) -> str:
    return "[" + ", ".join(map(repr, seq)) + "]"


@lru_cache(maxsize=None)
def _label_key(label: TreePresentation) -> tuple:
    return structural_key(label)


def component_key(c: Component) -> tuple:
    if isinstance(c, Pt):
        return (0, _label_key(c.label))
    return (1, tuple(term_key(seg) for seg in c.segments))


def term_key(u: CondTerm) -> tuple:
    return tuple(component_key(c) for c in u)


def mix(segments: Iterable[CondTerm]) -> Mix:
    """Build a ``Mix`` with segments deduplicated and sorted.

    Shuffle arguments have set semantics: each segment recurs densely often, so
    listing it twice changes nothing.
    """
    unique = {tuple(seg) for seg in segments}
    if not unique or () in unique:
        raise ValueError("a mixture needs nonempty segments")
    return Mix(tuple(sorted(unique, key=term_key)))


def sorted_labels(labels: Iterable[TreePresentation]) -> LabelSet:
    return tuple(sorted(set(labels), key=_label_key))


def sum_label(labels: Iterable[TreePresentation]) -> TreePresentation:
    """``s(l_1, ..., l_m)`` with nested sums spliced in; a single label is returned as is."""
    parts = []
    for label in labels:
        if label.kind == SUM:
            parts.extend(label.children)
        else:
            parts.append(label)
    if not parts:
        raise ValueError("empty sum")
    if len(parts) == 1:
        return parts[0]
    return Sum(tuple(parts))


def shuffle_label(labels: Iterable[TreePresentation]) -> TreePresentation:
    return Shuffle(sorted_labels(labels))


def to_lterm(tp: TreePresentation) -> CondTerm:
    if tp.kind == LEAF:
        return (Pt(LEAF_NODE),)
    if tp.kind == SUM:
        return tuple(c for child in tp.children for c in to_lterm(child))
    return (mix(to_lterm(child) for child in tp.children),)


def label_content(u: CondTerm) -> frozenset:
    labels = set()
    for c in u:
        if isinstance(c, Pt):
            labels.add(c.label)
        else:
            for seg in c.segments:
                labels |= label_content(seg)
    return frozenset(labels)


def finite_condense(u: CondTerm) -> CondTerm:
    """Replace each maximal run of adjacent points by a single point.

    A mixture has no first or last element, and between two copies of its
    segments lie infinitely many further copies.  So no finite interval crosses
    a ``Mix`` boundary or spans two segment copies; runs of ``Pt`` components
    at one sequence level are exactly the maximal finite intervals.
    """
    out: list = []
    run: list = []
    for c in u:
        if isinstance(c, Pt):
            run.append(c.label)
            continue
        if run:
            out.append(Pt(sum_label(run)))
            run = []
        out.append(mix(finite_condense(seg) for seg in c.segments))
    if run:
        out.append(Pt(sum_label(run)))
    return tuple(out)


def _require_condensed(u: CondTerm) -> None:
    for a, b in zip(u, u[1:]):
        if isinstance(a, Pt) and isinstance(b, Pt):
            raise CanonError(f"term is not finite-condensed: adjacent points {a!r}, {b!r}")


def _homogeneous_labels(m: Mix) -> Optional[frozenset]:
    labels = frozenset().union(*(label_content(seg) for seg in m.segments))
    for seg in m.segments:
        _require_condensed(seg)
        if len(seg) == 1 and isinstance(seg[0], Pt):
            continue
        # Inside one copy of a longer segment, an open interval can sit wholly
        # within one nested mixture, so each nested mixture must itself be
        # homogeneous with the full label set.
        for c in seg:
            if isinstance(c, Mix) and _homogeneous_labels(c) != labels:
                return None
    return labels


def homogeneity(component: Component) -> Optional[LabelSet]:
    """Label set of a homogeneous mixture, or ``None`` if it is not homogeneous.

    A mixture is homogeneous when every open interval inside it realizes all of
    its labels.  Any interval meeting two segment copies contains copies of
    every segment, so only intervals inside a single copy can fail.
    """
    if isinstance(component, Pt):
        return None
    labels = _homogeneous_labels(component)
    return None if labels is None else sorted_labels(labels)


def _condense_level(u: CondTerm) -> CondTerm:
    _require_condensed(u)
    hom = [_homogeneous_labels(c) if isinstance(c, Mix) else None for c in u]
    out: list = []
    i = 0
    while i < len(u):
        c, labels = u[i], hom[i]
        if labels is None:
            if isinstance(c, Mix):
                out.append(mix(_condense_level(seg) for seg in c.segments))
            else:
                out.append(c)
            i += 1
            continue
        # A maximal homogeneous interval at this level is a run of mixtures
        # with the same label set, each consecutive pair adjacent or separated
        # by one point whose label lies in that set.  It cannot end on a point
        # (that point would be an endpoint) and cannot enter a different
        # mixture (intervals inside it realize a different label set).
        j = i + 1
        while True:
            if j < len(u) and hom[j] == labels:
                j += 1
            elif (
                j + 1 < len(u)
                and isinstance(u[j], Pt)
                and u[j].label in labels
                and hom[j + 1] == labels
            ):
                j += 2
            else:
                break
        out.append(Pt(shuffle_label(labels)))
        i = j
    return tuple(out)


def label_condense(u: CondTerm) -> CondTerm:
    """Collapse every maximal homogeneous interval into a single shuffle-labeled point.

    Non-homogeneous mixtures are condensed segment by segment; points outside
    homogeneous intervals are kept as singleton intervals.
    """
    return _condense_level(u)


def canonicalize(tp: TreePresentation) -> TreePresentation:
    u = to_lterm(tp)
    bound = 2 * node_count(tp) + 2
    for _ in range(bound):
        u = finite_condense(u)
        if len(u) == 1 and isinstance(u[0], Pt):
            return u[0].label
        v = label_condense(u)
        if v == u:
            raise CanonError(f"no progress condensing {u!r}")
        u = v
    raise CanonError(f"condensation of {tp} exceeded {bound} rounds")


def same_order_type(a: TreePresentation, b: TreePresentation) -> bool:
    return canonicalize(a) == canonicalize(b)


def is_normal_form(tp: TreePresentation) -> bool:
    """Syntactic shape of canonical output (necessary, not sufficient)."""
    if tp.kind == LEAF:
        return True
    if tp.kind == SUM:
        if len(tp.children) < 2 or any(c.kind == SUM for c in tp.children):
            return False
    if tp.kind == SHUFFLE:
        keys = [structural_key(c) for c in tp.children]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            return False
    return all(is_normal_form(c) for c in tp.children)
