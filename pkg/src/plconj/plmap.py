"""Exact calculus of continuous piecewise-linear self-maps of [0,1].

A map is stored as its breakpoint list ((x0,y0), ..., (xn,yn)) with x0 = 0,
xn = 1 and all values inside [0,1]; between breakpoints the map is the linear
interpolant.  Breakpoint lists are canonicalized on construction (collinear
interior breakpoints dropped), so structural equality of PLMap values is
equality of the represented functions.

Everything here is a pure function over immutable data; all arithmetic is
exact rational arithmetic.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, DomainError, ShapeError
from .numerics import ONE, ZERO, ClosedSet1D, as_rational, normalize

DEFAULT_PIECE_BUDGET = 100_000


def _canonical_points(points) -> tuple[tuple[Fraction, Fraction], ...]:
    pts = [(as_rational(x), as_rational(y)) for x, y in points]
    if len(pts) < 2:
        raise DomainError("a piecewise-linear map needs at least two breakpoints")
    for (x0, _), (x1, _) in zip(pts, pts[1:]):
        if x0 >= x1:
            raise DomainError("breakpoint abscissae must increase strictly")
    # Drop interior breakpoints where the two adjacent pieces are collinear.
    out = [pts[0]]
    for i in range(1, len(pts) - 1):
        (xa, ya), (xb, yb), (xc, yc) = out[-1], pts[i], pts[i + 1]
        if (yb - ya) * (xc - xb) == (yc - yb) * (xb - xa):
            continue
        out.append(pts[i])
    out.append(pts[-1])
    return tuple(out)


@dataclass(frozen=True)
class PLMap:
    """Continuous piecewise-linear self-map of [0,1] in canonical form."""

    points: tuple[tuple[Fraction, Fraction], ...]

    @staticmethod
    def from_points(points) -> "PLMap":
        pts = _canonical_points(points)
        if pts[0][0] != ZERO or pts[-1][0] != ONE:
            raise DomainError("breakpoints must start at x=0 and end at x=1")
        for _, y in pts:
            if y < ZERO or y > ONE:
                raise DomainError(f"value {y} outside [0,1]")
        return PLMap(pts)

    @staticmethod
    def from_text(text: str) -> "PLMap":
        pairs = []
        for chunk in text.split():
            if ":" not in chunk:
                raise DomainError(f"bad breakpoint {chunk!r}; expected x:y")
            xs, ys = chunk.split(":", 1)
            pairs.append((as_rational(xs), as_rational(ys)))
        return PLMap.from_points(pairs)

    def to_text(self) -> str:
        return " ".join(f"{x}:{y}" for x, y in self.points)

    @property
    def piece_count(self) -> int:
        return len(self.points) - 1

    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(
            (y1 - y0) / (x1 - x0)
            for (x0, y0), (x1, y1) in zip(self.points, self.points[1:])
        )

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)


def identity_map() -> PLMap:
    return PLMap.from_points([(0, 0), (1, 1)])


def constant_map(c) -> PLMap:
    return PLMap.from_points([(0, c), (1, c)])


def tent_map(slope) -> PLMap:
    """Symmetric tent with the given slope: peak value slope/2 at x = 1/2."""
    s = as_rational(slope)
    return PLMap.from_points([(0, 0), (Fraction(1, 2), s / 2), (1, 0)])


def evaluate(f: PLMap, x) -> Fraction:
    """Exact value of the interpolant at x; DomainError outside [0,1]."""
    x = as_rational(x)
    if x < ZERO or x > ONE:
        raise DomainError(f"argument {x} outside [0,1]")
    pts = f.points
    i = bisect_right(pts, x, lo=1, hi=len(pts) - 1, key=lambda p: p[0])
    (x0, y0), (x1, y1) = pts[i - 1], pts[i]
    if x == x0:
        return y0
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def preimage_set(f: PLMap, y) -> ClosedSet1D:
    """Exact f^{-1}(y) as a canonical closed set.

    Per linear piece the preimage is empty, one point, or (for a constant
    piece at level y) the whole piece.
    """
    y = as_rational(y)
    if y < ZERO or y > ONE:
        raise DomainError(f"level {y} outside [0,1]")
    hits = []
    pts = f.points
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if y0 == y1:
            if y0 == y:
                hits.append((x0, x1))
            continue
        lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
        if lo <= y <= hi:
            x = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            hits.append((x, x))
    return normalize(hits)


def compose(f: PLMap, g: PLMap, piece_budget: int = DEFAULT_PIECE_BUDGET) -> PLMap:
    """Exact f∘g.  Breakpoints: those of g plus g-preimages of f's breakpoints."""
    xs = {x for x, _ in g.points}
    for bx, _ in f.points[1:-1]:
        for lo, hi in preimage_set(g, bx).components:
            xs.add(lo)
            xs.add(hi)
    grid = sorted(xs)
    if len(grid) - 1 > piece_budget:
        raise BudgetExceededError(len(grid) - 1, piece_budget)
    return PLMap.from_points([(x, evaluate(f, evaluate(g, x))) for x in grid])


def iterate(f: PLMap, n: int, piece_budget: int = DEFAULT_PIECE_BUDGET) -> PLMap:
    """Exact n-th iterate f^n, n >= 1; same budget guard as compose."""
    if n < 1:
        raise DomainError(f"iteration count must be >= 1, got {n}")
    result = f
    for _ in range(n - 1):
        result = compose(f, result, piece_budget)
    return result


def fixed_set(f: PLMap, n: int, piece_budget: int = DEFAULT_PIECE_BUDGET) -> ClosedSet1D:
    """Exact Fix(f^n): per piece of f^n solve ax + b = x, whole piece when a=1, b=0."""
    fn = iterate(f, n, piece_budget)
    hits = []
    for (x0, y0), (x1, y1) in zip(fn.points, fn.points[1:]):
        a = (y1 - y0) / (x1 - x0)
        if a == 1:
            if y0 == x0:
                hits.append((x0, x1))
            continue
        x = (y0 - a * x0) / (1 - a)
        if x0 <= x <= x1:
            hits.append((x, x))
    return normalize(hits)


def sharp_extrema(f: PLMap) -> tuple[Fraction, ...]:
    """{0,1} plus the breakpoints that are one-sided sharp local extrema.

    A breakpoint is sharp on a side where the map strictly decreases away
    from it (maximum) or strictly increases away from it (minimum), while the
    other side is allowed to be flat.  With slopes sL, sR of the adjacent
    pieces the four conditions read:

      left sharp max:  sL > 0 and sR <= 0     right sharp max: sR < 0 and sL >= 0
      left sharp min:  sL < 0 and sR >= 0     right sharp min: sR > 0 and sL <= 0

    A breakpoint flat on both sides satisfies none of them and is excluded.
    Interior non-breakpoints never qualify for a PL map.
    """
    out = {ZERO, ONE}
    slopes = f.slopes()
    for i in range(1, len(f.points) - 1):
        s_left, s_right = slopes[i - 1], slopes[i]
        if (
            (s_left > 0 and s_right <= 0)
            or (s_right < 0 and s_left >= 0)
            or (s_left < 0 and s_right >= 0)
            or (s_right > 0 and s_left <= 0)
        ):
            out.add(f.points[i][0])
    return tuple(sorted(out))


def plateau_values(f: PLMap) -> tuple[Fraction, ...]:
    """Levels of zero-slope pieces: exactly the y whose preimage contains an interval."""
    out = set()
    for (x0, y0), (x1, y1) in zip(f.points, f.points[1:]):
        if y0 == y1:
            out.add(y0)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# Homeomorphisms


@dataclass(frozen=True)
class PLHomeo:
    """Piecewise-linear self-homeomorphism of [0,1] with exact inverse."""

    plmap: PLMap
    orientation: str  # "increasing" | "decreasing"

    @staticmethod
    def from_plmap(f: PLMap) -> "PLHomeo":
        ys = [y for _, y in f.points]
        increasing = all(a < b for a, b in zip(ys, ys[1:]))
        decreasing = all(a > b for a, b in zip(ys, ys[1:]))
        if increasing and ys[0] == ZERO and ys[-1] == ONE:
            return PLHomeo(f, "increasing")
        if decreasing and ys[0] == ONE and ys[-1] == ZERO:
            return PLHomeo(f, "decreasing")
        raise DomainError("not a PL homeomorphism of [0,1] onto itself")

    @staticmethod
    def from_points(points) -> "PLHomeo":
        return PLHomeo.from_plmap(PLMap.from_points(points))

    @staticmethod
    def identity() -> "PLHomeo":
        return PLHomeo.from_plmap(identity_map())

    def inverse(self) -> "PLHomeo":
        swapped = [(y, x) for x, y in self.plmap.points]
        if self.orientation == "decreasing":
            swapped.reverse()
        return PLHomeo.from_plmap(PLMap.from_points(swapped))

    def __call__(self, x) -> Fraction:
        return evaluate(self.plmap, x)


def conjugate_map(h: PLHomeo, f: PLMap, piece_budget: int = DEFAULT_PIECE_BUDGET) -> PLMap:
    """Exact h∘f∘h^{-1}, the conjugate system of f under the coordinate change h."""
    inner = compose(f, h.inverse().plmap, piece_budget)
    return compose(h.plmap, inner, piece_budget)


# ---------------------------------------------------------------------------
# Orbit order pattern


@dataclass(frozen=True)
class OrderMatrix:
    """K x K boolean matrix with entry (m,n) = [f^m(x) < f^n(x)]."""

    size: int
    entries: tuple[tuple[bool, ...], ...]

    def row_strings(self) -> tuple[str, ...]:
        return tuple("".join("1" if v else "0" for v in row) for row in self.entries)


def orbit_order_pattern(f: PLMap, x, length: int) -> OrderMatrix:
    """Comparison matrix of the first `length` orbit points of x under f."""
    if length < 1:
        raise DomainError(f"pattern length must be >= 1, got {length}")
    orbit = [as_rational(x)]
    for _ in range(length - 1):
        orbit.append(evaluate(f, orbit[-1]))
    entries = tuple(
        tuple(orbit[m] < orbit[n] for n in range(length)) for m in range(length)
    )
    return OrderMatrix(length, entries)


# ---------------------------------------------------------------------------
# Kneading prefix (independent oracle for unimodal maps)


def kneading_prefix(f: PLMap, length: int) -> str:
    """Itinerary of f(c) relative to the critical point c of a unimodal map.

    Unimodality is checked syntactically on the slopes: all nonzero, positive
    pieces first, then negative pieces, exactly one sign change.  Symbols are
    L (left of c), C (at c), R (right of c), comma separated.
    """
    if length < 1:
        raise DomainError(f"prefix length must be >= 1, got {length}")
    slopes = f.slopes()
    if any(s == 0 for s in slopes):
        raise ShapeError("unimodal check failed: map has a constant piece")
    sign_changes = [
        i for i in range(1, len(slopes)) if (slopes[i - 1] > 0) != (slopes[i] > 0)
    ]
    if slopes[0] <= 0 or slopes[-1] >= 0 or len(sign_changes) != 1:
        raise ShapeError("unimodal check failed: need increasing then decreasing pieces")
    critical = f.points[sign_changes[0]][0]
    symbols = []
    t = evaluate(f, critical)
    for _ in range(length):
        if t < critical:
            symbols.append("L")
        elif t == critical:
            symbols.append("C")
        else:
            symbols.append("R")
        t = evaluate(f, t)
    return ",".join(symbols)


# ---------------------------------------------------------------------------
# PL functions on a subinterval (internal calculus for graphs and witnesses)


@dataclass(frozen=True)
class PLSegment:
    """PL function on a closed subinterval [lo, hi] of [0,1], canonical form."""

    points: tuple[tuple[Fraction, Fraction], ...]

    @staticmethod
    def from_points(points) -> "PLSegment":
        return PLSegment(_canonical_points(points))

    @staticmethod
    def linear(x0, y0, x1, y1) -> "PLSegment":
        return PLSegment.from_points([(x0, y0), (x1, y1)])

    @property
    def lo(self) -> Fraction:
        return self.points[0][0]

    @property
    def hi(self) -> Fraction:
        return self.points[-1][0]

    def value_range(self) -> tuple[Fraction, Fraction]:
        ys = [y for _, y in self.points]
        return min(ys), max(ys)

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        pts = self.points
        if x < self.lo or x > self.hi:
            raise DomainError(f"argument {x} outside segment [{self.lo}, {self.hi}]")
        i = bisect_right(pts, x, lo=1, hi=len(pts) - 1, key=lambda p: p[0])
        (x0, y0), (x1, y1) = pts[i - 1], pts[i]
        if x == x0:
            return y0
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def is_identity(self) -> bool:
        return self.points == ((self.lo, self.lo), (self.hi, self.hi))

    def monotonicity(self) -> str:
        """"increasing", "decreasing", "constant" or "none" (non-injective)."""
        ys = [y for _, y in self.points]
        if all(a < b for a, b in zip(ys, ys[1:])):
            return "increasing"
        if all(a > b for a, b in zip(ys, ys[1:])):
            return "decreasing"
        if all(a == b for a, b in zip(ys, ys[1:])):
            return "constant"
        return "none"

    def inverse(self) -> "PLSegment":
        mono = self.monotonicity()
        if mono == "increasing":
            return PLSegment.from_points([(y, x) for x, y in self.points])
        if mono == "decreasing":
            return PLSegment.from_points([(y, x) for x, y in reversed(self.points)])
        raise DomainError("only strictly monotone segments invert")

    def preimages(self, y) -> list[Fraction]:
        """Abscissae where the segment takes the value y (interval hits -> endpoints)."""
        y = as_rational(y)
        out = set()
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            if y0 == y1:
                if y0 == y:
                    out.add(x0)
                    out.add(x1)
                continue
            lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
            if lo <= y <= hi:
                out.add(x0 + (y - y0) * (x1 - x0) / (y1 - y0))
        return sorted(out)

    def fixed_points(self) -> list[tuple[Fraction, Fraction]]:
        """Solutions of s(x) = x inside the segment domain, as (lo, hi) components."""
        hits = []
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            a = (y1 - y0) / (x1 - x0)
            if a == 1:
                if y0 == x0:
                    hits.append((x0, x1))
                continue
            x = (y0 - a * x0) / (1 - a)
            if x0 <= x <= x1:
                hits.append((x, x))
        merged: list[tuple[Fraction, Fraction]] = []
        for lo, hi in sorted(hits):
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
            else:
                merged.append((lo, hi))
        return merged


def restrict(f: PLMap, lo, hi) -> PLSegment:
    """Restriction of a PLMap to [lo, hi] as a segment."""
    lo = as_rational(lo)
    hi = as_rational(hi)
    if not (ZERO <= lo < hi <= ONE):
        raise DomainError(f"bad restriction interval [{lo}, {hi}]")
    pts = [(lo, evaluate(f, lo))]
    for x, y in f.points:
        if lo < x < hi:
            pts.append((x, y))
    pts.append((hi, evaluate(f, hi)))
    return PLSegment.from_points(pts)


def compose_segments(outer: PLSegment, inner: PLSegment) -> PLSegment:
    """Exact outer∘inner; the value range of inner must lie in outer's domain."""
    rlo, rhi = inner.value_range()
    if rlo < outer.lo or rhi > outer.hi:
        raise DomainError(
            f"segment range [{rlo}, {rhi}] escapes outer domain [{outer.lo}, {outer.hi}]"
        )
    xs = {x for x, _ in inner.points}
    for bx, _ in outer.points[1:-1]:
        xs.update(inner.preimages(bx))
    grid = sorted(xs)
    return PLSegment.from_points([(x, outer(inner(x))) for x in grid])
