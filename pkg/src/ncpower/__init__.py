"""Power-aware design of 1+1-protected optical networks with XOR-coded protection."""

from .bounds import (
    BoundReport,
    RingClass,
    bound_conventional,
    bound_nc,
    mesh_fluctuation,
    mesh_power,
    mesh_savings_fraction,
    ring_classify,
    ring_conventional_hops,
    ring_power,
    ring_savings_fraction,
    ring_shared_hops,
)
from .coding import (
    EMPTY_ASSIGNMENT,
    KIND_COMBOS,
    CodedPair,
    CodingAssignment,
    EncodableGraph,
    PathKind,
    SelectionResult,
    build_encodable_graph,
    pair_benefit,
    select_pairs_fixed,
    select_pairs_osh,
)
from .errors import (
    ContractError,
    DomainError,
    FeasibilityError,
    InstanceError,
    NcPowerError,
    OracleGuardError,
    RoutingError,
    SurvivabilityError,
)
from .model import (
    Demand,
    Instance,
    Topology,
    generate_full_mesh,
    generate_ring,
    load_instance,
    serialize_instance,
)
from .oracle import OracleResult, optimal_joint, optimal_matching
from .power import PowerParams, PowerReport, eval_conventional, eval_with_coding
from .routing import (
    Path,
    PathPair,
    disjoint_pair_candidates,
    route_instance,
    shortest_path,
    suurballe_pair,
)

__version__ = "0.1.0"
