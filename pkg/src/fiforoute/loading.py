"""Discrete-time FIFO network loading: map a strategy profile to its full timeline."""
from __future__ import annotations

import heapq
from array import array
from bisect import bisect_left, bisect_right
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from .model import Edge, FifoRouteError, Game, State, validate_game, validate_state


class LoadingError(FifoRouteError):
    """Game/state mismatch or a simulation that overran its horizon guard."""


@dataclass(frozen=True, slots=True)
class TraceEvent:
    """One row of the event trace; player indices are 1-based."""

    time: int
    layer: int
    edge_index: int
    event: str  # enqueue | depart | arrive
    player: int


@dataclass(frozen=True)
class EdgeLog:
    """FIFO history of one edge: i-th queue entry/departure and who it was."""

    entries: array  # entry times, non-decreasing
    departs: array  # departure times, non-decreasing
    players: array  # 0-based player per slot, in FIFO order

    def __len__(self) -> int:
        return len(self.players)


@dataclass(frozen=True)
class LoadingResult:
    """Complete deterministic timeline of one network loading.

    waiting[i][j] / latency[i][j] refer to 0-based player i on the j-th layer
    of its path; arrivals[j][i] is the time player i reaches node v_j (node 0
    holds the starting pattern); completions mirror the last node. queue_sum
    data is sparse over event times; use the queue_sum() helper for lookups.
    """

    game: Game
    state: State
    waiting: tuple[tuple[int, ...], ...]
    latency: tuple[tuple[int, ...], ...]
    arrivals: tuple[tuple[int, ...], ...]
    completions: tuple[int, ...]
    makespan: int
    edge_logs: dict[tuple[int, int], EdgeLog]
    queue_sum_times: tuple[int, ...]
    queue_sum_values: tuple[int, ...]
    trace: tuple[TraceEvent, ...] | None = None
    queue_trace: dict[tuple[int, int], dict[int, tuple[int, ...]]] | None = None

    def edge_log(self, layer: int, index: int) -> EdgeLog:
        key = (layer, index)
        if key not in self.edge_logs:
            return _EMPTY_LOG
        return self.edge_logs[key]


_EMPTY_LOG = EdgeLog(array("q"), array("q"), array("q"))


def load(
    game: Game,
    state: State,
    *,
    trace: bool = False,
    queue_trace: bool = False,
    _validate: bool = True,
) -> LoadingResult:
    """Run the loading loop: at each time, enqueue released players, then serve queues.

    At every integer time t, players released from their previous edge at
    t - transit(previous) join their next edge's queue (players starting at t
    join their first edge), ordered by (arrival time at the edge, player
    index); then every non-empty queue releases its first min(capacity, len)
    players, each reaching the edge head at t + transit. Iterates only over
    event times; the result is fully deterministic. `_validate=False` skips
    input validation for callers that already checked (bulk enumeration).
    """
    if _validate:
        bad = validate_game(game)
        if bad:
            raise LoadingError("invalid game: " + "; ".join(bad))
        bad = validate_state(game, state)
        if bad:
            raise LoadingError("state does not fit game: " + "; ".join(bad))

    graph = game.graph
    m = graph.num_layers
    n = game.n

    # flat edge ids for speed
    offsets = []
    total = 0
    for layer in graph.layers:
        offsets.append(total)
        total += len(layer)
    taus = array("q", (e.transit for layer in graph.layers for e in layer))
    caps = array("q", (e.capacity for layer in graph.layers for e in layer))
    keys = [(e.layer, e.index_in_layer) for layer in graph.layers for e in layer]

    # player routes as flat edge ids
    routes = [
        array("q", (offsets[j] + idx - 1 for j, idx in enumerate(p.edge_indices)))
        for p in state.paths
    ]

    starts = game.start_times()
    max_route = max((sum(taus[eid] for eid in r) for r in routes), default=0)
    guard = (max(starts) if starts else 0) + n * max_route

    waiting = [[0] * m for _ in range(n)]
    arrivals: list[list[int]] = [[0] * n for _ in range(m + 1)]
    arrivals[0] = list(starts)

    log_entries = [array("q") for _ in range(total)]
    log_departs = [array("q") for _ in range(total)]
    log_players = [array("q") for _ in range(total)]

    queues: list[deque] = [deque() for _ in range(total)]
    entry_at: list[int] = [0] * n  # time the player joined its current queue
    layer_of: list[int] = [0] * n  # 0-based layer the player currently queues on

    joiners: dict[int, dict[int, list[int]]] = {}
    for i, t0 in enumerate(starts):
        joiners.setdefault(t0, {}).setdefault(routes[i][0], []).append(i)

    heap = sorted(joiners)
    heapq.heapify(heap)
    scheduled = set(heap)

    qsum = 0
    qsum_times: list[int] = []
    qsum_values: list[int] = []
    live: set[int] = set()
    rows: list[TraceEvent] = []
    qtrace: dict[int, dict[int, tuple[int, ...]]] = {} if queue_trace else {}

    while heap:
        t = heapq.heappop(heap)
        scheduled.discard(t)
        if t > guard:
            raise LoadingError(f"loading exceeded horizon guard at t={t} (bound {guard})")

        touched: set[int] = set()
        js = joiners.pop(t, None)
        if js is not None:
            for eid in sorted(js):
                group = js[eid]
                if len(group) > 1:
                    group.sort()  # same arrival time: lower player index first
                q = queues[eid]
                for i in group:
                    q.append(i)
                    entry_at[i] = t
                    log_entries[eid].append(t)
                if trace:
                    layer, idx = keys[eid]
                    rows.extend(TraceEvent(t, layer, idx, "enqueue", i + 1) for i in group)
                qsum += len(group)
                live.add(eid)
                touched.add(eid)

        for eid in sorted(live):
            q = queues[eid]
            served = caps[eid]
            if served > len(q):
                served = len(q)
            tau = taus[eid]
            head = t + tau
            for _ in range(served):
                i = q.popleft()
                j = layer_of[i]
                waiting[i][j] = t - entry_at[i]
                arrivals[j + 1][i] = head
                log_departs[eid].append(t)
                log_players[eid].append(i)
                if trace:
                    layer, idx = keys[eid]
                    rows.append(TraceEvent(t, layer, idx, "depart", i + 1))
                    rows.append(TraceEvent(head, layer, idx, "arrive", i + 1))
                if j + 1 < m:
                    layer_of[i] = j + 1
                    nxt = routes[i][j + 1]
                    bucket = joiners.get(head)
                    if bucket is None:
                        joiners[head] = {nxt: [i]}
                        if head not in scheduled:
                            heapq.heappush(heap, head)
                            scheduled.add(head)
                    else:
                        bucket.setdefault(nxt, []).append(i)
            qsum -= served
            if served:
                touched.add(eid)
        drained = [eid for eid in live if not queues[eid]]
        for eid in drained:
            live.discard(eid)
        if live and t + 1 not in scheduled:
            heapq.heappush(heap, t + 1)
            scheduled.add(t + 1)

        qsum_times.append(t)
        qsum_values.append(qsum)
        if queue_trace:
            for eid in touched:
                qtrace.setdefault(eid, {})[t] = tuple(i + 1 for i in queues[eid])

    if live or any(queues[eid] for eid in range(total)):
        raise LoadingError("loading ended with players still queued")  # pragma: no cover

    latency = tuple(
        tuple(
            waiting[i][j] + taus[routes[i][j]] for j in range(m)
        )
        for i in range(n)
    )
    completions = tuple(arrivals[m])
    logs = {
        keys[eid]: EdgeLog(log_entries[eid], log_departs[eid], log_players[eid])
        for eid in range(total)
        if len(log_players[eid])
    }
    result = LoadingResult(
        game=game,
        state=state,
        waiting=tuple(tuple(row) for row in waiting),
        latency=latency,
        arrivals=tuple(tuple(row) for row in arrivals),
        completions=completions,
        makespan=max(completions),
        edge_logs=logs,
        queue_sum_times=tuple(qsum_times),
        queue_sum_values=tuple(qsum_values),
        trace=tuple(sorted(rows, key=lambda r: r.time)) if trace else None,
        queue_trace={keys[eid]: snap for eid, snap in qtrace.items()} if queue_trace else None,
    )
    return result


def workload(result: LoadingResult, edge: Edge, t: int) -> int:
    """Latency a fictional lowest-priority player entering edge's queue at t would face.

    Equals transit + floor(p / capacity) where p counts players that entered
    by t and depart at t or later: exactly the ones the newcomer stands
    behind, drained at `capacity` per step. Beyond the simulated horizon the
    queue is empty and the workload is the bare transit time.
    """
    log = result.edge_log(edge.layer, edge.index_in_layer)
    ahead = bisect_right(log.entries, t) - bisect_left(log.departs, t)
    return edge.transit + ahead // edge.capacity


def queue_length(result: LoadingResult, edge: Edge, t: int) -> int:
    """Players in edge's queue at time t, counted after the join step."""
    log = result.edge_log(edge.layer, edge.index_in_layer)
    return bisect_right(log.entries, t) - bisect_left(log.departs, t)


def queue_sum(result: LoadingResult, t: int) -> int:
    """Total players queued anywhere at time t, after the removal step."""
    times = result.queue_sum_times
    pos = bisect_right(times, t)
    if pos == 0:
        return 0
    return result.queue_sum_values[pos - 1]


def trace_rows(result: LoadingResult) -> Iterator[tuple[int, str, str, int]]:
    """Trace rows as (time, "layer:index", event, player) tuples for CSV export."""
    if result.trace is None:
        raise LoadingError("loading was run without trace recording")
    for ev in result.trace:
        yield ev.time, f"{ev.layer}:{ev.edge_index}", ev.event, ev.player
