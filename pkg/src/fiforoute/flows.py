"""Embed discrete loadings into piecewise-constant flows over time."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .loading import LoadingResult
from .model import FifoRouteError, Game, LinearMultigraph

# (time, rate) pairs: rate holds from time until the next breakpoint, the
# last pair always carries rate 0. Rate is 0 before the first breakpoint.
Breakpoints = tuple[tuple[int, int], ...]


@dataclass(frozen=True, slots=True)
class FlowOverTime:
    """Edge inflow rates on [0, horizon), keyed by (layer, index)."""

    horizon: int
    rates: dict[tuple[int, int], Breakpoints]

    def rate_at(self, layer: int, index: int, t: int) -> int:
        bps = self.rates.get((layer, index), ())
        r = 0
        for bt, br in bps:
            if bt > t:
                break
            r = br
        return r


def state_to_flow(game: Game, loading: LoadingResult) -> FlowOverTime:
    """Send each departure at time t into the edge at rate 1 on [t, t+1).

    The horizon is makespan + 1 so the final hop, a departure at the
    makespan itself, still fits inside the flow's support.
    """
    if loading.game is not game and loading.game != game:
        raise FifoRouteError("loading result does not belong to this game")
    horizon = loading.makespan + 1
    rates: dict[tuple[int, int], Breakpoints] = {}
    for key, log in loading.edge_logs.items():
        if not log.departs:
            continue
        counts = Counter(log.departs)
        bps: list[tuple[int, int]] = []
        current = 0
        for t in sorted(counts):
            if counts[t] != current:
                bps.append((t, counts[t]))
                current = counts[t]
            end = t + 1
            if end not in counts:
                bps.append((end, 0))
                current = 0
        rates[key] = tuple(bps)
    return FlowOverTime(horizon, rates)


def cumulative_flow(flow: FlowOverTime, layer: int, index: int, x: int) -> int:
    """Integral of the edge's rate over [0, x]. Exact for integer x."""
    total = 0
    bps = flow.rates.get((layer, index), ())
    for pos, (t, r) in enumerate(bps):
        if t >= x:
            break
        end = bps[pos + 1][0] if pos + 1 < len(bps) else flow.horizon
        total += r * (min(end, x) - t)
    return total


def flow_value(graph: LinearMultigraph, flow: FlowOverTime) -> int:
    """Total flow reaching the destination: inflow of the last layer, shifted by transit."""
    m = len(graph.layers)
    return sum(
        cumulative_flow(flow, m, e.index_in_layer, flow.horizon - e.transit)
        for e in graph.layers[m - 1]
    )


def check_flow_feasible(
    graph: LinearMultigraph, flow: FlowOverTime, expected_value: int | None = None
) -> list[str]:
    """Return all feasibility violations, empty when the flow is valid.

    Checks per-edge rate bounds and support, weak conservation at every
    internal node (cumulative outflow never exceeds cumulative inflow from
    the previous layer), and optionally the total flow value.
    """
    violations: list[str] = []
    T = flow.horizon
    for key, bps in sorted(flow.rates.items()):
        layer, index = key
        name = f"{layer}:{index}"
        try:
            edge = graph.edge(layer, index)
        except FifoRouteError:
            violations.append(f"edge {name} not in graph")
            continue
        times = [t for t, _ in bps]
        if times != sorted(set(times)):
            violations.append(f"edge {name} breakpoints not strictly increasing")
            continue
        if bps and bps[-1][1] != 0:
            violations.append(f"edge {name} does not end at rate 0")
        cutoff = T - edge.transit
        for pos, (t, r) in enumerate(bps):
            if r < 0:
                violations.append(f"edge {name} negative rate {r} at time {t}")
            if r > edge.capacity:
                violations.append(
                    f"edge {name} rate {r} exceeds capacity {edge.capacity} at time {t}"
                )
            if r > 0:
                end = bps[pos + 1][0] if pos + 1 < len(bps) else T
                if end > cutoff:
                    violations.append(
                        f"edge {name} active on [{t},{end}) past cutoff {cutoff}"
                    )
    if violations:
        return violations

    m = len(graph.layers)
    for j in range(1, m):
        into = graph.layers[j - 1]
        out_of = graph.layers[j]
        critical = {0, T}
        for e in into:
            for t, _ in flow.rates.get((e.layer, e.index_in_layer), ()):
                critical.add(t + e.transit)
        for e in out_of:
            for t, _ in flow.rates.get((e.layer, e.index_in_layer), ()):
                critical.add(t)
        for theta in sorted(c for c in critical if 0 <= c <= T):
            arrived = sum(
                cumulative_flow(flow, e.layer, e.index_in_layer, theta - e.transit)
                for e in into
                if theta >= e.transit
            )
            left = sum(
                cumulative_flow(flow, e.layer, e.index_in_layer, theta) for e in out_of
            )
            if left > arrived:
                violations.append(
                    f"conservation violated at node v_{j} by time {theta}:"
                    f" out {left} > in {arrived}"
                )
    if expected_value is not None:
        value = flow_value(graph, flow)
        if value != expected_value:
            violations.append(f"flow value {value} != expected {expected_value}")
    return violations


def flow_to_dict(flow: FlowOverTime) -> dict:
    return {
        "horizon": flow.horizon,
        "edges": {
            f"{layer}:{index}": [[t, r] for t, r in bps]
            for (layer, index), bps in sorted(flow.rates.items())
        },
    }
