"""Atomic packet routing games on layered multigraphs with FIFO point queues.

Simulate load profiles in discrete time, construct and verify uniformly
fastest route equilibria, compute optimal release schedules, and reproduce
price-of-anarchy and price-of-stability bounds exactly.
"""
from .capacity import map_state_to_split, split_capacities
from .equilibria import (
    GREEDY_QUEUE,
    LOWEST_INDEX,
    SHORTEST_QUEUE,
    BudgetError,
    ConstructionError,
    TieBreakPolicy,
    UfrWitness,
    enumerate_equilibria,
    is_ufr_equilibrium,
    parse_policy,
    seeded,
    sequential_equilibrium,
    worst_equilibrium,
)
from .flows import (
    FlowOverTime,
    check_flow_feasible,
    cumulative_flow,
    flow_to_dict,
    flow_value,
    state_to_flow,
)
from .instances import (
    InstanceError,
    LowerBoundParams,
    ceil_e_times,
    eq_completion_closed_form,
    gen_gkl,
    gen_lower_bound_game,
    harmonic_range,
    limit_bound,
    lower_bound_row,
    opt_upper_bound_closed_form,
    pos_ratio,
    special_edge_indices,
)
from .loading import (
    EdgeLog,
    LoadingError,
    LoadingResult,
    TraceEvent,
    load,
    queue_length,
    queue_sum,
    trace_rows,
    workload,
)
from .model import (
    Edge,
    FifoRouteError,
    Game,
    LinearMultigraph,
    ModelError,
    PathChoice,
    State,
    all_paths,
    game_from_dict,
    game_to_dict,
    kth_cheapest_path,
    load_game_file,
    load_state_file,
    path_length,
    save_game_file,
    save_state_file,
    state_from_dict,
    state_to_dict,
    validate_game,
    validate_state,
)
from .optimum import (
    OptimalPlan,
    PlanError,
    max_packets,
    min_horizon,
    optimal_state,
    optimality_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "ConstructionError",
    "Edge",
    "EdgeLog",
    "FifoRouteError",
    "FlowOverTime",
    "GREEDY_QUEUE",
    "Game",
    "InstanceError",
    "LOWEST_INDEX",
    "LinearMultigraph",
    "LoadingError",
    "LoadingResult",
    "LowerBoundParams",
    "ModelError",
    "OptimalPlan",
    "PathChoice",
    "PlanError",
    "SHORTEST_QUEUE",
    "State",
    "TieBreakPolicy",
    "TraceEvent",
    "UfrWitness",
    "all_paths",
    "ceil_e_times",
    "check_flow_feasible",
    "cumulative_flow",
    "enumerate_equilibria",
    "eq_completion_closed_form",
    "flow_to_dict",
    "flow_value",
    "game_from_dict",
    "game_to_dict",
    "gen_gkl",
    "gen_lower_bound_game",
    "harmonic_range",
    "is_ufr_equilibrium",
    "kth_cheapest_path",
    "limit_bound",
    "load",
    "load_game_file",
    "load_state_file",
    "lower_bound_row",
    "map_state_to_split",
    "max_packets",
    "min_horizon",
    "opt_upper_bound_closed_form",
    "optimal_state",
    "optimality_certificate",
    "parse_policy",
    "path_length",
    "pos_ratio",
    "queue_length",
    "queue_sum",
    "save_game_file",
    "save_state_file",
    "seeded",
    "sequential_equilibrium",
    "special_edge_indices",
    "split_capacities",
    "state_from_dict",
    "state_to_dict",
    "state_to_flow",
    "trace_rows",
    "validate_game",
    "validate_state",
    "workload",
    "worst_equilibrium",
]
