"""Construct, verify, and enumerate uniformly-fastest-route equilibria."""
from __future__ import annotations

import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Union

import numpy as np

from .loading import load
from .model import (
    FifoRouteError,
    Game,
    PathChoice,
    State,
    all_paths,
    validate_game,
)


class BudgetError(FifoRouteError):
    """An exact check was asked to cover more states/paths than its budget."""


class ConstructionError(FifoRouteError):
    """The sequential constructor's ordering invariant failed."""


@dataclass(frozen=True, slots=True)
class TieBreakPolicy:
    """How a deciding player picks among minimum-workload edges.

    greedy-queue: longest queue first, then lowest edge index.
    lowest-index: lowest edge index.
    shortest-queue: shortest queue first, then lowest edge index.
    seeded: uniform among tied edges via a deterministic PRNG.
    """

    kind: str
    seed: int | None = None

    def __str__(self) -> str:
        if self.kind == "seeded":
            return f"seeded:{self.seed}"
        return self.kind


GREEDY_QUEUE = TieBreakPolicy("greedy-queue")
LOWEST_INDEX = TieBreakPolicy("lowest-index")
SHORTEST_QUEUE = TieBreakPolicy("shortest-queue")

_KINDS = ("greedy-queue", "lowest-index", "shortest-queue", "seeded")


def seeded(seed: int) -> TieBreakPolicy:
    if not 0 <= seed < 2**64:
        raise FifoRouteError("seed must fit in 64 bits")
    return TieBreakPolicy("seeded", seed)


def parse_policy(text: str, default_seed: int | None = None) -> TieBreakPolicy:
    """Parse a policy name: greedy-queue, lowest-index, shortest-queue, seeded:<u64>."""
    if text in ("greedy-queue", "lowest-index", "shortest-queue"):
        return TieBreakPolicy(text)
    if text == "seeded":
        return seeded(default_seed if default_seed is not None else 0)
    if text.startswith("seeded:"):
        try:
            return seeded(int(text.split(":", 1)[1]))
        except ValueError:
            raise FifoRouteError(f"bad seed in policy {text!r}") from None
    raise FifoRouteError(f"unknown policy {text!r}")


@dataclass(frozen=True)
class UfrWitness:
    """Proof that a state is not an equilibrium: a strictly improving deviation.

    `player` is 1-based; `node` is the index j of the node v_j the player
    reaches strictly earlier (at `improved_arrival`) by switching to
    `deviation` while everyone else stays put.
    """

    player: int
    node: int
    deviation: PathChoice
    improved_arrival: int


def sequential_equilibrium(game: Game, policy: TieBreakPolicy = GREEDY_QUEUE) -> State:
    """Insert players in index order, each walking a currently-fastest route.

    Each player moves layer by layer, always entering an edge whose workload
    at the player's arrival time is minimal given all lower-index players'
    fixed behavior; ties go to the policy. The ordering invariant (no player
    reaches any node before an earlier-indexed player) is asserted at every
    step, and the returned state is an equilibrium.
    """
    paths, _ = _construct(game, policy)
    return State(paths)


def worst_equilibrium(game: Game) -> State:
    """The greedy-queue equilibrium; its makespan majorizes every equilibrium's."""
    return sequential_equilibrium(game, GREEDY_QUEUE)


def _construct(
    game: Game, policy: TieBreakPolicy
) -> tuple[tuple[PathChoice, ...], tuple[tuple[int, ...], ...]]:
    """Core sequential construction; returns (paths, per-node arrival lists)."""
    bad = validate_game(game)
    if bad:
        raise ConstructionError("invalid game: " + "; ".join(bad))
    if policy.kind not in _KINDS:
        raise ConstructionError(f"unknown policy kind {policy.kind!r}")

    graph = game.graph
    m = graph.num_layers
    n = game.n
    rng = random.Random(policy.seed) if policy.kind == "seeded" else None

    # per-layer parallel arrays; per-edge FIFO history as sorted time arrays
    layer_taus = [[e.transit for e in layer] for layer in graph.layers]
    layer_caps = [[e.capacity for e in layer] for layer in graph.layers]
    entries: list[list[list[int]]] = [[[] for _ in layer] for layer in graph.layers]
    departs: list[list[list[int]]] = [[[] for _ in layer] for layer in graph.layers]

    last_node_arrival = [-1] * (m + 1)
    node_arrivals: list[list[int]] = [[] for _ in range(m + 1)]
    kind = policy.kind
    paths: list[PathChoice] = []

    for i in range(n):
        t = game.start_time(i)
        if t < last_node_arrival[0]:
            raise ConstructionError(f"player {i + 1} starts before player {i}")
        last_node_arrival[0] = t
        node_arrivals[0].append(t)
        choice: list[int] = []
        for j in range(m):
            taus = layer_taus[j]
            caps = layer_caps[j]
            ent = entries[j]
            dep = departs[j]
            best = -1
            best_w = -1
            best_q = 0
            ties: list[int] = []
            for idx in range(len(taus)):
                tau = taus[idx]
                if best >= 0 and tau > best_w:
                    break  # layer sorted by transit: nothing better follows
                d = dep[idx]
                e = ent[idx]
                if not d:
                    queued = 0
                elif e[-1] <= t:
                    # everyone already entered; tail departing >= t drains 1/step
                    queued = len(d) - bisect_left(d, t)
                else:
                    queued = bisect_right(e, t) - bisect_left(d, t)
                w = tau + queued // caps[idx]
                if best < 0 or w < best_w:
                    best, best_w, best_q = idx, w, queued
                    if rng is not None:
                        ties = [idx]
                elif w == best_w:
                    if rng is not None:
                        ties.append(idx)
                    elif kind == "greedy-queue":
                        if queued > best_q:
                            best, best_q = idx, queued
                    elif kind == "shortest-queue":
                        if queued < best_q:
                            best, best_q = idx, queued
                    # lowest-index: keep the earlier edge
            if rng is not None and len(ties) > 1:
                best = ties[rng.randrange(len(ties))]

            e = ent[best]
            if e and t < e[-1]:
                raise ConstructionError(
                    f"player {i + 1} enters layer {j + 1} edge {best + 1} at {t}, "
                    f"before an earlier player's entry at {e[-1]}"
                )
            d = dep[best]
            if not d or d[-1] < t:
                out = t + (0 if caps[best] == 1 else (len(d) - bisect_left(d, t)) // caps[best])
            elif caps[best] == 1:
                out = d[-1] + 1
            else:
                out = t + (len(d) - bisect_left(d, t)) // caps[best]
            e.append(t)
            d.append(out)
            t = out + layer_taus[j][best]
            if t < last_node_arrival[j + 1]:
                raise ConstructionError(
                    f"player {i + 1} reaches node {j + 1} at {t}, "
                    f"before the previous front at {last_node_arrival[j + 1]}"
                )
            last_node_arrival[j + 1] = t
            node_arrivals[j + 1].append(t)
            choice.append(best + 1)
        paths.append(PathChoice(tuple(choice)))

    return tuple(paths), tuple(tuple(row) for row in node_arrivals)


DEFAULT_PATH_BUDGET = 10_000
DEFAULT_STATE_BUDGET = 100_000


def is_ufr_equilibrium(
    game: Game, state: State, path_budget: int = DEFAULT_PATH_BUDGET
) -> Union[bool, UfrWitness]:
    """Exact deviation check: True, or the first witness in (player, path, node) order.

    For every player and every alternative path, the profile with only that
    player's path replaced is reloaded and the player's arrival times at every
    node are compared; any strictly earlier arrival disproves equilibrium.
    """
    if path_budget < 1:
        raise BudgetError("path budget must be positive")
    num_paths = game.num_paths()
    if num_paths > path_budget:
        raise BudgetError(
            f"instance too large for exact check: {num_paths} paths per player, budget {path_budget}"
        )
    base = load(game, state)
    alternatives = all_paths(game.graph)
    m = game.graph.num_layers
    paths = list(state.paths)
    for i in range(game.n):
        own = state.paths[i]
        for alt in alternatives:
            if alt == own:
                continue
            paths[i] = alt
            res = load(game, State(tuple(paths)), _validate=False)
            for j in range(1, m + 1):
                if res.arrivals[j][i] < base.arrivals[j][i]:
                    paths[i] = own
                    return UfrWitness(
                        player=i + 1,
                        node=j,
                        deviation=alt,
                        improved_arrival=res.arrivals[j][i],
                    )
        paths[i] = own
    return True


def enumerate_equilibria(game: Game, state_budget: int = DEFAULT_STATE_BUDGET) -> list[State]:
    """All equilibria of a tiny game, lexicographically ordered by path choices.

    Every deviation profile is itself a state, so one arrival table over the
    full mixed-radix state space answers all deviation queries: player i's
    state is an equilibrium iff its arrival row is the componentwise minimum
    of the num_paths rows that differ only in i's digit. Unit-capacity games
    get a vectorized table; capacitated ones pay one load per state.
    """
    if state_budget < 1:
        raise BudgetError("state budget must be positive")
    bad = validate_game(game)
    if bad:
        raise FifoRouteError("invalid game: " + "; ".join(bad))
    paths = all_paths(game.graph)
    num_paths = len(paths)
    n = game.n
    total = num_paths**n
    if total > state_budget:
        raise BudgetError(f"budget exceeded: {num_paths}^{n} = {total} states, budget {state_budget}")

    m = game.graph.num_layers
    if game.graph.all_unit_capacity and _times_fit_int64(game):
        rows = _unit_arrival_tables(game, paths)
    else:
        rows = _loaded_arrival_tables(game, paths, total)

    good = np.ones(total, dtype=bool)
    weight = 1  # num_paths ** (n - 1 - i), player n-1 least significant
    for i in range(n - 1, -1, -1):
        block = weight * num_paths
        view = np.ascontiguousarray(rows[:, i, :]).reshape(
            total // block, num_paths, weight, m
        )
        best = view.min(axis=1, keepdims=True)
        good &= (view == best).all(axis=3).reshape(total)
        weight = block

    found: list[State] = []
    for sid in np.flatnonzero(good):
        digits: list[int] = []
        rem = int(sid)
        for _ in range(n):
            rem, d = divmod(rem, num_paths)
            digits.append(d)
        found.append(State(tuple(paths[d] for d in reversed(digits))))
    return found


def _times_fit_int64(game: Game) -> bool:
    """Every arrival is bounded by start + sum of (max transit + n) per layer."""
    bound = max(game.start_times()) + sum(
        max(e.transit for e in layer) + game.n for layer in game.graph.layers
    )
    return bound < 2**62


def _unit_arrival_tables(game: Game, paths: list[PathChoice]) -> np.ndarray:
    """Arrivals of every player at every node, for all num_paths**n states at once.

    rows[sid, i, j] is player i's arrival at node v_{j+1} in state sid. Within
    one FIFO queue the entrant of rank q departs at q + max_{r <= q}(a_r - r),
    so sorting players by (arrival, index) and taking a per-edge running
    maximum over the sorted axis yields a whole layer in a few array passes.
    """
    n = game.n
    m = game.graph.num_layers
    num_paths = len(paths)
    total = num_paths**n
    choice = np.array([[idx - 1 for idx in p.edge_indices] for p in paths], dtype=np.int64)
    weights = num_paths ** np.arange(n - 1, -1, -1, dtype=np.int64)
    digits = (np.arange(total, dtype=np.int64)[:, None] // weights) % num_paths

    rows = np.empty((total, n, m), dtype=np.int64)
    arr = np.broadcast_to(np.array(game.start_times(), dtype=np.int64), (total, n)).copy()
    low = np.iinfo(np.int64).min // 4
    for j in range(m):
        edge = choice[digits, j]
        order = np.argsort(arr, axis=1, kind="stable")  # FIFO: arrival time, then index
        arr_s = np.take_along_axis(arr, order, axis=1)
        edge_s = np.take_along_axis(edge, order, axis=1)
        depart = np.empty_like(arr_s)
        for e, props in enumerate(game.graph.layers[j]):
            on_e = edge_s == e
            rank = np.cumsum(on_e, axis=1)
            head = np.maximum.accumulate(np.where(on_e, arr_s - rank, low), axis=1)
            np.copyto(depart, rank + head + props.transit, where=on_e)
        np.put_along_axis(arr, order, depart, axis=1)
        rows[:, :, j] = arr
    return rows


def _loaded_arrival_tables(game: Game, paths: list[PathChoice], total: int) -> np.ndarray:
    n = game.n
    m = game.graph.num_layers
    num_paths = len(paths)
    rows = np.empty((total, n, m), dtype=np.int64)
    assign = [0] * n
    for sid in range(total):
        if sid:
            pos = n - 1
            while True:  # mixed-radix increment, player 0 most significant
                assign[pos] += 1
                if assign[pos] < num_paths:
                    break
                assign[pos] = 0
                pos -= 1
        res = load(game, State(tuple(paths[p] for p in assign)), _validate=False)
        for j in range(1, m + 1):
            rows[sid, :, j - 1] = res.arrivals[j]
    return rows
