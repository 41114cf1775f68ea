"""Agent-based simulator of affective polarization via partisan news cascades."""

from .dynamics import (
    DynamicsParams,
    NewsItem,
    PendingDelivery,
    SimState,
    affect_delta,
    apply_exposure,
    make_state,
    run,
    step,
)
from .graph import (
    DirectedGraph,
    GenerationFailure,
    GraphSpec,
    elite_set,
    generate_scale_free,
    in_neighbors,
    load_edge_list,
    save_edge_list,
)
from .metrics import (
    AggregateSeries,
    RunTimeSeries,
    TimeToMaxSummary,
    affective_distance,
    aggregate_runs,
    group_ap,
    mean_time_to_max,
    time_to_max,
)
from .population import (
    AgentState,
    Party,
    PopulationSpec,
    PopulationState,
    assign_parties,
    init_affect,
    mean_similarity,
    similarity,
)
from .experiment import (
    SimConfig,
    SweepConfig,
    desk_config,
    full_config,
    load_config,
    run_cell,
    run_sweep,
    save_config,
)

__version__ = "0.1.0"
