"""Exact rationals and a fixed dense partition of Q into classes Q_1, Q_2, ...

The partition used throughout the package:

* a positive integer ``n`` lies in ``Q_n``;
* a non-positive integer lies in ``Q_1``;
* a non-integer ``a/b`` in lowest terms lies in ``Q_j`` where the largest prime
  factor of ``b`` is the ``j``-th prime.

Every ``Q_j`` contains all reduced fractions ``a/p_j**k``, so each class is dense.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from sympy import factorint, prime, primepi

Rat = Fraction
RatLike = Union[Fraction, int, str]


def as_rat(value: RatLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def parse_rat(text: str) -> Fraction:
    """Parse ``"a/b"`` or ``"a"``; whitespace around the parts is ignored."""
    parts = text.strip().split("/")
    if len(parts) > 2 or not all(p.strip() for p in parts):
        raise ValueError(f"malformed rational {text!r}")
    try:
        nums = [int(p.strip()) for p in parts]
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if len(nums) == 2 and nums[1] == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(*nums)


def format_rat(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@lru_cache(maxsize=4096)
def _largest_prime_index(denominator: int) -> int:
    p = max(factorint(denominator))
    return int(primepi(p))


def class_of(q: RatLike) -> int:
    """Index ``n`` of the class ``Q_n`` containing ``q``."""
    q = as_rat(q)
    if q.denominator == 1:
        return q.numerator if q.numerator >= 1 else 1
    return _largest_prime_index(q.denominator)


@lru_cache(maxsize=None)
def class_prime(n: int) -> int:
    if n < 1:
        raise ValueError(f"class index must be positive, got {n}")
    return int(prime(n))


def _closest_to_zero(lo: Optional[int], hi: Optional[int], p: int) -> Optional[int]:
    # Integers a with lo < a < hi (None = unbounded) and p not dividing a.
    # Minimal |a| wins, ties go to the positive value.
    if (lo is None or lo < 0) and (hi is None or hi > 0):
        for m in range(1, 3):
            for a in (m, -m):
                if a % p and (lo is None or a > lo) and (hi is None or a < hi):
                    return a
        return None
    if lo is not None and lo >= 0:
        for a in (lo + 1, lo + 2):
            if a % p and (hi is None or a < hi):
                return a
        return None
    for a in (hi - 1, hi - 2):
        if a % p and (lo is None or a > lo):
            return a
    return None


def fresh_in_class(
    n: int, lower: Optional[RatLike] = None, upper: Optional[RatLike] = None
) -> Fraction:
    """Deterministically pick ``q`` in class ``n`` with ``lower < q < upper``.

    Candidates are ``a / p**k`` with ``p`` the ``n``-th prime and ``p`` not
    dividing ``a``.  The smallest ``k`` with a candidate wins, then the smallest
    ``|a|``, then positive ``a``.  ``None`` bounds are infinite.
    """
    lo = None if lower is None else as_rat(lower)
    hi = None if upper is None else as_rat(upper)
    if lo is not None and hi is not None and not lo < hi:
        raise ValueError(f"empty interval ({format_rat(lo)}, {format_rat(hi)})")
    p = class_prime(n)
    k = 1
    while True:
        scale = p**k
        # strict integer bounds on the numerator a
        a_lo = None if lo is None else math.floor(lo * scale)
        a_hi = None if hi is None else math.ceil(hi * scale)
        a = _closest_to_zero(a_lo, a_hi, p)
        if a is not None:
            return Fraction(a, scale)
        k += 1
