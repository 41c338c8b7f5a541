"""Test-only generators and independent oracles.

Nothing here calls into the code paths it is used to check: the
materializers build finite approximations of orders straight from the
definitions of sum and shuffle, and the arithmetic oracles use trial
division and plain scans.
"""

from __future__ import annotations

import bisect
import itertools
import random
from fractions import Fraction
from typing import List, Sequence

from sumshuffle.canon import Mix, Pt
from sumshuffle.finstruct import FinStructure
from sumshuffle.presentation import LEAF, LEAF_NODE, SHUFFLE, SUM, Shuffle, Sum, parse

T_FAMILY = [parse(e) for e in ("1", "s(1,1)", "sigma(1)", "sigma(sigma(1))", "s(sigma(1),1,sigma(1))", "sigma(s(1,1),1)")]


# -- random trees and semantic identities ---------------------------------


def random_tree(rng: random.Random, max_nodes: int, _root: bool = True):
    """A random tree presentation with at most ``max_nodes`` nodes."""
    if max_nodes <= 1 or (not _root and rng.random() < 0.3):
        return LEAF_NODE
    budget = max_nodes - 1
    arity = rng.randint(1, min(3, budget))
    shares = [1] * arity
    for _ in range(budget - arity):
        if rng.random() < 0.8:
            shares[rng.randrange(arity)] += 1
    children = tuple(random_tree(rng, k, False) for k in shares)
    return Sum(children) if rng.random() < 0.5 else Shuffle(children)


def flatten_sums(tp):
    if tp.kind == LEAF:
        return tp
    kids = [flatten_sums(c) for c in tp.children]
    if tp.kind == SUM:
        spliced = []
        for c in kids:
            spliced.extend(c.children if c.kind == SUM else [c])
        return spliced[0] if len(spliced) == 1 else Sum(tuple(spliced))
    return Shuffle(tuple(kids))


def regroup_sums(tp, rng: random.Random):
    """Randomly nest consecutive sum arguments: s(a,b,c) -> s(a,s(b,c)) etc."""
    if tp.kind == LEAF:
        return tp
    kids = [regroup_sums(c, rng) for c in tp.children]
    if tp.kind == SUM and len(kids) >= 3 and rng.random() < 0.7:
        i = rng.randrange(len(kids) - 1)
        j = rng.randint(i + 2, len(kids))
        kids = kids[:i] + [Sum(tuple(kids[i:j]))] + kids[j:]
    if tp.kind == SUM and rng.random() < 0.2:
        return Sum((Sum(tuple(kids)),))
    return (Sum if tp.kind == SUM else Shuffle)(tuple(kids))


def permute_shuffles(tp, rng: random.Random):
    if tp.kind == LEAF:
        return tp
    kids = [permute_shuffles(c, rng) for c in tp.children]
    if tp.kind == SHUFFLE:
        rng.shuffle(kids)
    return (Sum if tp.kind == SUM else Shuffle)(tuple(kids))


def duplicate_shuffle_args(tp, rng: random.Random):
    if tp.kind == LEAF:
        return tp
    kids = [duplicate_shuffle_args(c, rng) for c in tp.children]
    if tp.kind == SHUFFLE:
        kids = kids + [rng.choice(kids) for _ in range(rng.randint(1, 2))]
        rng.shuffle(kids)
    return (Sum if tp.kind == SUM else Shuffle)(tuple(kids))


# -- finite approximations of dense orders ----------------------------------
#
# A dense arrangement with k kinds of copies is approximated at depth d by the
# rationals a / (k+1)**d in (0, 1); the kind of a is its last nonzero base-(k+1)
# digit.  Between any two depth-d points the depth-(d+1) points include every
# kind, and new points also appear below the minimum and above the maximum.
# Hence two points are adjacent in the limit iff nothing lies between them at
# depths d and d+1.


def _grid(k: int, depth: int):
    base = k + 1
    denom = base**depth
    for a in range(1, denom):
        digit = a
        while digit % base == 0:
            digit //= base
        yield Fraction(a, denom), digit % base


def materialize_term(u, depth: int, prefix=()):
    """Sorted ``(address, label)`` list approximating a condensation term."""
    out = []
    for j, c in enumerate(u):
        if isinstance(c, Pt):
            out.append((prefix + (j,), c.label))
        else:
            for q, kind in _grid(len(c.segments), depth):
                out.extend(materialize_term(c.segments[kind - 1], depth, prefix + (j, q)))
    out.sort(key=lambda e: e[0])
    return out


def materialize_tree(tp, depth: int, prefix=()) -> List[tuple]:
    """Sorted addresses approximating the order denoted by a tree presentation."""
    if tp.kind == LEAF:
        return [prefix]
    out = []
    if tp.kind == SUM:
        for i, c in enumerate(tp.children):
            out.extend(materialize_tree(c, depth, prefix + (i,)))
    else:
        for q, kind in _grid(len(tp.children), depth):
            out.extend(materialize_tree(tp.children[kind - 1], depth, prefix + (q,)))
    out.sort()
    return out


def _successors(addresses: Sequence[tuple]) -> dict:
    return {a: b for a, b in zip(addresses, addresses[1:])}


def limit_adjacent_pairs(coarse: Sequence[tuple], fine: Sequence[tuple]) -> set:
    """Consecutive pairs of ``coarse`` still consecutive in ``fine``."""
    nxt = _successors(fine)
    return {(a, b) for a, b in zip(coarse, coarse[1:]) if nxt.get(a) == b}


def order_invariants(tp, depth: int = 1) -> tuple:
    """Isomorphism invariants read off finite approximations.

    (has least element, has greatest element, sorted set of sizes of maximal
    finite intervals, size of the first and last such interval when the order
    has endpoints).
    """
    coarse = materialize_tree(tp, depth)
    fine = materialize_tree(tp, depth + 1)
    adjacent = limit_adjacent_pairs(coarse, fine)
    blocks = [[coarse[0]]]
    for a, b in zip(coarse, coarse[1:]):
        if (a, b) in adjacent:
            blocks[-1].append(b)
        else:
            blocks.append([b])
    has_min = coarse[0] == fine[0]
    has_max = coarse[-1] == fine[-1]
    return (
        has_min,
        has_max,
        tuple(sorted({len(b) for b in blocks})),
        len(blocks[0]) if has_min else None,
        len(blocks[-1]) if has_max else None,
    )


def labels_between(points, lo, hi) -> set:
    return {label for addr, label in points if lo < addr < hi}


def homogeneity_oracle(m: Mix, depth: int = 2):
    """Label set if every gap between consecutive depth-``depth`` points of the
    mixture sees all labels one level finer, else ``None``."""
    coarse = materialize_term((m,), depth)
    fine = materialize_term((m,), depth + 1)
    everything = {label for _, label in fine}
    for (a, _), (b, _) in zip(coarse, coarse[1:]):
        if labels_between(fine, a, b) != everything:
            return None
    return everything


# -- arithmetic oracles -----------------------------------------------------


def primes_upto(n: int) -> List[int]:
    sieve = [True] * (n + 1)
    sieve[0:2] = [False, False]
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = [False] * len(sieve[p * p :: p])
    return [p for p, ok in enumerate(sieve) if ok]


PRIMES = primes_upto(1_000_000)


def largest_prime_factor(b: int) -> int:
    best, p = 1, 2
    while p * p <= b:
        while b % p == 0:
            best, b = p, b // p
        p += 1
    return max(best, b)


def class_oracle(q: Fraction) -> int:
    if q.denominator == 1:
        return max(q.numerator, 1)
    return bisect.bisect_left(PRIMES, largest_prime_factor(q.denominator)) + 1


def fresh_scan_oracle(n: int, lower, upper, max_k: int = 12, max_a: int = 10_000):
    """Exhaustive scan in the documented tie order: smallest k, then |a|, then a > 0."""
    p = PRIMES[n - 1]
    for k in range(1, max_k + 1):
        for mag in range(1, max_a):
            for a in (mag, -mag):
                if a % p == 0:
                    continue
                q = Fraction(a, p**k)
                if (lower is None or q > lower) and (upper is None or q < upper):
                    return q
    raise AssertionError("scan bound too small")


# -- candidate structures ---------------------------------------------------


def partial_partitions(n: int, convex: bool = True):
    """Families of disjoint nonempty classes over points 0..n-1."""
    if convex:
        def rec(i):
            if i == n:
                yield []
                return
            yield from rec(i + 1)  # point i left out
            for j in range(i + 1, n + 1):
                for rest in rec(j):
                    yield [tuple(range(i, j))] + rest
        yield from rec(0)
        return
    for labels in itertools.product(range(n + 1), repeat=n):
        # label 0 = outside; others name classes, canonical first-occurrence order
        seen = []
        ok = True
        for lab in labels:
            if lab and lab not in seen:
                if lab != len(seen) + 1:
                    ok = False
                    break
                seen.append(lab)
        if not ok:
            continue
        classes = [tuple(x for x in range(n) if labels[x] == lab) for lab in seen]
        yield classes


def candidate_structures(tree, n: int):
    """Structures with a total root relation, singleton leaf classes on disjoint
    leaf domains, and arbitrary disjoint convex classes at the other nodes."""
    from sumshuffle.presentation import iter_nodes

    nodes = list(iter_nodes(tree))
    leaves = [p for p, node in nodes if node.kind == LEAF]
    inner = [p for p, node in nodes if node.kind != LEAF and p != ()]
    root = {(): (tuple(range(n)),) if n else ()}
    if tree.kind == LEAF:
        if n <= 1:
            yield FinStructure(tree, n, {(): ((0,),) if n else ()})
        for classes in partial_partitions(n):
            if n > 1:
                yield FinStructure(tree, n, {(): tuple(classes)})
        return
    for assignment in itertools.product(range(len(leaves) + 1), repeat=n):
        leaf_rel = {
            leaf: tuple((x,) for x in range(n) if assignment[x] == i + 1) for i, leaf in enumerate(leaves)
        }
        for choice in itertools.product(*(list(partial_partitions(n)) for _ in inner)):
            rels = dict(root)
            rels.update(leaf_rel)
            rels.update({p: tuple(c) for p, c in zip(inner, choice)})
            yield FinStructure(tree, n, rels)


def raw_structures(tree, n: int, convex: bool = False):
    """Every assignment of disjoint classes to every node (nothing imposed)."""
    from sumshuffle.presentation import iter_nodes

    paths = [p for p, _ in iter_nodes(tree)]
    options = list(partial_partitions(n, convex=convex))
    for choice in itertools.product(options, repeat=len(paths)):
        yield FinStructure(tree, n, {p: tuple(c) for p, c in zip(paths, choice)})
