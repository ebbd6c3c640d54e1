"""Exact rational arithmetic and finite unions of closed subsets of [0,1].

Every coordinate in this package is a rational number in lowest terms; there
is no floating point anywhere.  The stdlib ``fractions.Fraction`` already
guarantees the lowest-terms / positive-denominator invariants, so it is used
directly as the rational type.

``ClosedSet1D`` is the canonical form of a finite union of closed intervals
and points inside [0,1].  Canonical means: components sorted, pairwise
disjoint, and never touching (touching input intervals are merged), which
makes the set of accessible boundary points well defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Coerce ints, strings like ``"3/4"``, and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational: {value!r}") from exc
    if isinstance(value, float):
        raise DomainError("floating point input rejected; pass a rational")
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    """Lowest-terms ASCII form: ``p/q``, or ``p`` when the denominator is 1."""
    return str(value)


@dataclass(frozen=True)
class ClosedSet1D:
    """Finite union of disjoint closed intervals/points within [0,1].

    ``components`` is a sorted tuple of (lo, hi) pairs with lo <= hi;
    lo == hi encodes a single point.  Construct through :func:`normalize`.
    """

    components: tuple[tuple[Fraction, Fraction], ...]

    def __contains__(self, x) -> bool:
        x = as_rational(x)
        return any(lo <= x <= hi for lo, hi in self.components)

    def is_empty(self) -> bool:
        return not self.components

    def to_text(self) -> str:
        """Semicolon-separated entries, ``lo..hi`` for intervals, ``p`` for points."""
        parts = []
        for lo, hi in self.components:
            parts.append(str(lo) if lo == hi else f"{lo}..{hi}")
        return ";".join(parts)

    @staticmethod
    def from_text(text: str) -> "ClosedSet1D":
        intervals = []
        for entry in text.split(";"):
            entry = entry.strip()
            if not entry:
                continue
            if ".." in entry:
                lo, hi = entry.split("..", 1)
                intervals.append((as_rational(lo), as_rational(hi)))
            else:
                p = as_rational(entry)
                intervals.append((p, p))
        return normalize(intervals)


EMPTY_SET = ClosedSet1D(())


def normalize(intervals) -> ClosedSet1D:
    """Canonicalize a list of closed intervals into a ClosedSet1D.

    Overlapping and touching intervals are merged; the result is independent
    of input order and idempotent.  Raises DomainError for intervals outside
    [0,1] or with lo > hi.
    """
    cleaned = []
    for lo, hi in intervals:
        lo = as_rational(lo)
        hi = as_rational(hi)
        if lo > hi:
            raise DomainError(f"interval has lo > hi: ({lo}, {hi})")
        if lo < ZERO or hi > ONE:
            raise DomainError(f"interval outside [0,1]: ({lo}, {hi})")
        cleaned.append((lo, hi))
    cleaned.sort()
    merged: list[list[Fraction]] = []
    for lo, hi in cleaned:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return ClosedSet1D(tuple((lo, hi) for lo, hi in merged))


def acc_points(closed_set: ClosedSet1D) -> tuple[Fraction, ...]:
    """Accessible points of a canonical set: endpoints of its components.

    A point of a closed set F is accessible when it bounds an open interval
    of the real-line complement of F; for a canonical finite union these are
    exactly the component endpoints (0 and 1 qualify through the open rays
    left of 0 and right of 1).
    """
    out: list[Fraction] = []
    for lo, hi in closed_set.components:
        out.append(lo)
        if hi != lo:
            out.append(hi)
    return tuple(out)
