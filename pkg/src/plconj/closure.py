"""Generation stages of the exceptional point set of a PL interval map.

The exceptional set of a map f collects the dynamically distinguished points:
sharp local extrema together with 0 and 1, levels of constant pieces,
accessible points of the period-n fixed sets, and everything reachable from
those by forward images and by accessible preimage points.  It is produced
here as an increasing chain of finite stages

    S_1 = extrema ∪ plateau levels ∪ ⋃_{n<=N} Acc(Fix(f^n))
    S_{i+1} = S_i ∪ f(S_i) ∪ ⋃{Acc(f^{-1}(y)) : y ∈ S_i}

computed by a worklist that only touches points added in the previous stage
(the generators are pointwise, so this yields exactly the formula above).
Periodic-point harvesting is truncated at the period bound N; stabilization
(S_{i+1} = S_i) is detected by exact set equality and makes the final stage
the full closure modulo that truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PreconditionError
from .numerics import ONE, ZERO, acc_points, as_rational
from .plmap import (
    DEFAULT_PIECE_BUDGET,
    PLMap,
    evaluate,
    fixed_set,
    plateau_values,
    preimage_set,
    sharp_extrema,
)

DEFAULT_PERIOD_BOUND = 8
DEFAULT_MAX_DEPTH = 16

STABILIZED = "stabilized"
TRUNCATED = "truncated"


@dataclass(frozen=True)
class StageFamily:
    """The computed chain S_1 ⊆ ... ⊆ S_k with its stabilization status.

    status == "stabilized" means one further application of the stage rule
    was computed and added nothing, so stages[-1] is the closure (modulo the
    period bound).  status == "truncated" means the chain was cut at the
    requested depth while still growing.
    """

    stages: tuple[tuple[Fraction, ...], ...]
    period_bound: int
    status: str

    @property
    def depth(self) -> int:
        return len(self.stages)

    @property
    def stabilized_at(self) -> int | None:
        return len(self.stages) if self.status == STABILIZED else None

    @property
    def final(self) -> tuple[Fraction, ...]:
        return self.stages[-1]

    def stage_at(self, i: int) -> tuple[Fraction, ...]:
        """S_i, extending a stabilized chain past its last computed stage."""
        if i < 1:
            raise DomainError(f"stage index must be >= 1, got {i}")
        if i <= len(self.stages):
            return self.stages[i - 1]
        if self.status == STABILIZED:
            return self.stages[-1]
        raise PreconditionError(
            f"stage {i} not computed (truncated at {len(self.stages)})"
        )

    def to_text(self) -> str:
        lines = [
            f"stage {i}: " + ", ".join(str(x) for x in stage)
            for i, stage in enumerate(self.stages, start=1)
        ]
        if self.status == STABILIZED:
            lines.append(f"status: stabilized at stage {len(self.stages)}")
        else:
            lines.append(f"status: truncated at depth {len(self.stages)}")
        return "\n".join(lines)


def initial_stage(
    f: PLMap, period_bound: int = DEFAULT_PERIOD_BOUND,
    piece_budget: int = DEFAULT_PIECE_BUDGET,
) -> tuple[Fraction, ...]:
    """S_1: sharp extrema, plateau levels, and accessible periodic points up to N."""
    if period_bound < 1:
        raise DomainError(f"period bound must be >= 1, got {period_bound}")
    out = set(sharp_extrema(f))
    out.update(plateau_values(f))
    for n in range(1, period_bound + 1):
        out.update(acc_points(fixed_set(f, n, piece_budget)))
    return tuple(sorted(out))


def _generated(f: PLMap, points) -> set[Fraction]:
    out: set[Fraction] = set()
    for y in points:
        out.add(evaluate(f, y))
        out.update(acc_points(preimage_set(f, y)))
    return out


def next_stage(f: PLMap, stage) -> tuple[Fraction, ...]:
    """One application of the stage rule: S ∪ f(S) ∪ ⋃ Acc(f^{-1}(y))."""
    current = {as_rational(y) for y in stage}
    for y in current:
        if y < ZERO or y > ONE:
            raise DomainError(f"stage point {y} outside [0,1]")
    return tuple(sorted(current | _generated(f, current)))


def closure(
    f: PLMap,
    period_bound: int = DEFAULT_PERIOD_BOUND,
    max_depth: int = DEFAULT_MAX_DEPTH,
    piece_budget: int = DEFAULT_PIECE_BUDGET,
) -> StageFamily:
    """Iterate the stage rule until a fixpoint or the depth cutoff.

    Newly added points alone are fed to the generators at each step, which
    reproduces the full rule because earlier points already contributed.
    Stabilization is witnessed: the rule was applied once more and returned
    nothing new.
    """
    if max_depth < 1:
        raise DomainError(f"max depth must be >= 1, got {max_depth}")
    first = initial_stage(f, period_bound, piece_budget)
    stages = [first]
    current = set(first)
    fresh = first
    status = TRUNCATED
    while True:
        new_points = _generated(f, fresh) - current
        if not new_points:
            status = STABILIZED
            break
        if len(stages) == max_depth:
            break
        current |= new_points
        stages.append(tuple(sorted(current)))
        fresh = tuple(new_points)
    return StageFamily(tuple(stages), period_bound, status)


def complementary_intervals(stage) -> tuple[tuple[Fraction, Fraction], ...]:
    """Maximal open intervals of [0,1] minus a finite set containing 0 and 1."""
    points = sorted(as_rational(x) for x in stage)
    if not points or points[0] != ZERO or points[-1] != ONE:
        raise DomainError("complementary intervals need both endpoints 0 and 1")
    return tuple((a, b) for a, b in zip(points, points[1:]))
