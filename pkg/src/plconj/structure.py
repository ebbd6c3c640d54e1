"""Finite invariant structures: truncated order/map structure and the gap graph.

Two views of a stage family are built here.  The truncated structure is the
final stage as a linearly ordered finite set together with the partial action
of the map on it (defined wherever the image stays inside the set).  The
interval graph lives on the complementary gaps of a *stabilized* closure:
each gap carries exactly one outgoing edge, either "constant with value v"
(v always a closure point) or "maps one-to-one onto another gap" with an
orientation; gaps on oriented cycles additionally carry the diagonal
behaviour of the return map (pointwise fixed, or fixed-point free above or
below the diagonal).

Both encode deterministically to bytes, and the graph exports to DOT.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .closure import STABILIZED, StageFamily, complementary_intervals
from .errors import InternalInvariantError, PreconditionError
from .plmap import PLMap, PLSegment, compose_segments, evaluate, restrict

POINTWISE_FIXED = "pointwise-fixed"
FREE_ABOVE = "free-above"
FREE_BELOW = "free-below"


@dataclass(frozen=True)
class TruncatedStructure:
    """Final stage with first-appearance indices and the partial map action.

    ``partial_map`` holds (position, image position) pairs into ``universe``;
    it is defined at least on the second-to-last stage since stage images land
    in the next stage.
    """

    universe: tuple[Fraction, ...]
    stage_index: tuple[int, ...]
    partial_map: tuple[tuple[int, int], ...]
    period_bound: int


def build_structure(f: PLMap, family: StageFamily) -> TruncatedStructure:
    universe = family.final
    position = {u: i for i, u in enumerate(universe)}
    first_seen = {}
    for idx, stage in enumerate(family.stages, start=1):
        for u in stage:
            if u not in first_seen:
                first_seen[u] = idx
    pairs = []
    for i, u in enumerate(universe):
        fu = evaluate(f, u)
        j = position.get(fu)
        if j is not None:
            pairs.append((i, j))
    return TruncatedStructure(
        universe=universe,
        stage_index=tuple(first_seen[u] for u in universe),
        partial_map=tuple(pairs),
        period_bound=family.period_bound,
    )


@dataclass(frozen=True)
class GapEdge:
    """Outgoing edge of one gap: constant(value) or monotone onto a target gap."""

    kind: str  # "constant" | "increasing" | "decreasing"
    value: Fraction | None = None
    target: int | None = None


@dataclass(frozen=True)
class IntervalGraph:
    """Labeled functional graph on the gaps of a stabilized closure."""

    nodes: tuple[tuple[Fraction, Fraction], ...]
    edges: tuple[GapEdge, ...]
    cycle_flags: tuple[str | None, ...]

    def cycle_nodes(self) -> tuple[int, ...]:
        return tuple(i for i, flag in enumerate(self.cycle_flags) if flag is not None)


def _return_segment(f: PLMap, nodes, cycle: list[int], start: int) -> PLSegment:
    """Segment of f^len(cycle) on the node at cycle position `start`."""
    order = cycle[start:] + cycle[:start]
    segment = restrict(f, *nodes[order[0]])
    for nxt in order[1:]:
        segment = compose_segments(restrict(f, *nodes[nxt]), segment)
    return segment


def build_graph(f: PLMap, family: StageFamily) -> IntervalGraph:
    """Classify the action of f on every gap of a stabilized closure.

    Raises PreconditionError on truncated input, and on gap cycles whose
    return map violates the fixed-point dichotomy (possible only when the
    cycle is longer than the period bound used for the closure).
    A classification failure (neither constant nor injective on a gap) means
    the alleged closure was not closed, hence InternalInvariantError.
    """
    if family.status != STABILIZED:
        raise PreconditionError("interval graph requires a stabilized closure")
    closure_set = set(family.final)
    nodes = complementary_intervals(family.final)
    index = {node: i for i, node in enumerate(nodes)}

    edges: list[GapEdge] = []
    for lo, hi in nodes:
        seg = restrict(f, lo, hi)
        mono = seg.monotonicity()
        if mono == "constant":
            value = seg(lo)
            if value not in closure_set:
                raise InternalInvariantError(
                    f"constant value {value} of gap ({lo},{hi}) escapes the closure"
                )
            edges.append(GapEdge("constant", value=value))
        elif mono in ("increasing", "decreasing"):
            a, b = seg(lo), seg(hi)
            target = (a, b) if a < b else (b, a)
            if target not in index:
                raise InternalInvariantError(
                    f"image ({target[0]},{target[1]}) of gap ({lo},{hi}) is not a gap"
                )
            edges.append(GapEdge(mono, target=index[target]))
        else:
            raise InternalInvariantError(
                f"gap ({lo},{hi}) is neither constant nor one-to-one"
            )

    flags: list[str | None] = [None] * len(nodes)
    color = [0] * len(nodes)  # 0 unvisited, 1 on stack, 2 done
    for root in range(len(nodes)):
        if color[root]:
            continue
        path: list[int] = []
        node: int | None = root
        while node is not None and color[node] == 0:
            color[node] = 1
            path.append(node)
            node = edges[node].target
        if node is not None and color[node] == 1:
            cycle = path[path.index(node):]
            _flag_cycle(f, family, nodes, cycle, flags)
        for visited in path:
            color[visited] = 2

    return IntervalGraph(tuple(nodes), tuple(edges), tuple(flags))


def _flag_cycle(f, family, nodes, cycle, flags) -> None:
    n = len(cycle)
    for pos, node in enumerate(cycle):
        lo, hi = nodes[node]
        ret = _return_segment(f, nodes, cycle, pos)
        if ret.is_identity():
            flags[node] = POINTWISE_FIXED
            continue
        if ret.monotonicity() != "increasing":
            raise PreconditionError(
                f"gap cycle of length {n} has a non-increasing return map; "
                f"period bound {family.period_bound} is too small to certify it"
            )
        interior = [c for c in ret.fixed_points() if c[1] > lo and c[0] < hi]
        if interior:
            raise PreconditionError(
                f"gap cycle of length {n} violates the fixed-point dichotomy; "
                f"period bound {family.period_bound} is too small to certify it"
            )
        mid = (lo + hi) / 2
        flags[node] = FREE_ABOVE if ret(mid) > mid else FREE_BELOW


# ---------------------------------------------------------------------------
# Canonical byte encoding and DOT export


def canonical_encode(obj) -> bytes:
    """Deterministic ASCII encoding; equal abstract structures encode identically.

    Structures: ``TS1;N=<n>;u=<rationals>;s=<stage indices>;m=<i:j pairs>``.
    Graphs: ``IG1;nodes=<lo..hi list>;edges=<per-node c:v or n:t:inc|dec>;
    flags=<i:pf|fa|fb pairs>``.  Rationals are lowest-terms ``p/q`` text.
    """
    if isinstance(obj, TruncatedStructure):
        fields = [
            "TS1",
            f"N={obj.period_bound}",
            "u=" + ",".join(str(x) for x in obj.universe),
            "s=" + ",".join(str(i) for i in obj.stage_index),
            "m=" + ",".join(f"{i}:{j}" for i, j in obj.partial_map),
        ]
        return (";".join(fields) + ";").encode("ascii")
    if isinstance(obj, IntervalGraph):
        edge_parts = []
        for edge in obj.edges:
            if edge.kind == "constant":
                edge_parts.append(f"c:{edge.value}")
            else:
                tag = "inc" if edge.kind == "increasing" else "dec"
                edge_parts.append(f"n:{edge.target}:{tag}")
        flag_tags = {POINTWISE_FIXED: "pf", FREE_ABOVE: "fa", FREE_BELOW: "fb"}
        fields = [
            "IG1",
            "nodes=" + ",".join(f"{lo}..{hi}" for lo, hi in obj.nodes),
            "edges=" + ",".join(edge_parts),
            "flags=" + ",".join(
                f"{i}:{flag_tags[flag]}"
                for i, flag in enumerate(obj.cycle_flags)
                if flag is not None
            ),
        ]
        return (";".join(fields) + ";").encode("ascii")
    raise TypeError(f"cannot encode {type(obj).__name__}")


def export_dot(graph: IntervalGraph) -> str:
    """DOT digraph; node names are the gap endpoints, labels carry kind and flags."""
    lines = ["digraph gaps {"]
    names = [f"({lo}, {hi})" for lo, hi in graph.nodes]
    for i, name in enumerate(names):
        lines.append(f'  "{name}" [shape=ellipse];')
    value_nodes = []
    for i, edge in enumerate(graph.edges):
        flag = graph.cycle_flags[i]
        if edge.kind == "constant":
            vname = f"value {edge.value}"
            if vname not in value_nodes:
                value_nodes.append(vname)
                lines.append(f'  "{vname}" [shape=box];')
            label = f"constant({edge.value})"
            if flag:
                label += f"/{flag}"
            lines.append(f'  "{names[i]}" -> "{vname}" [label="{label}"];')
        else:
            label = edge.kind
            if flag:
                label += f"/{flag}"
            lines.append(f'  "{names[i]}" -> "{names[edge.target]}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
