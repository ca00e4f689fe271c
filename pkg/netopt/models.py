from collections.abc import Mapping
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from pydantic import BaseModel, Extra, Field, PrivateAttr, validator

from netopt.config import get_search_cap, get_thread_count

Pair = Tuple[int, int]
Range = Tuple[float, float]


class NodeKind(str, Enum):
    LOCAL_DISTRIBUTION_CENTER = "LocalDistributionCenter"
    SORTING_CENTER = "SortingCenter"
    AIRPORT = "Airport"
    RAIL_STATION = "RailStation"
    TERMINAL_DISTRIBUTION_CENTER = "TerminalDistributionCenter"


class ArcMode(str, Enum):
    ROAD = "Road"
    RAIL = "Rail"
    AIR = "Air"


class Algorithm(str, Enum):
    EXACT = "exact"
    ANNEAL = "anneal"


class DomainModel(BaseModel):
    """Immutable, strict base for every serialized model"""

    class Config:
        allow_mutation = False
        extra = Extra.forbid


class Node(DomainModel):
    """Network facility: distribution centre, sorting centre, airport or rail station.

    accum_param is in hours (total daily waiting on a served arc is accum_param times the
    carrier size), op_time in hours, op_cost in currency per standard courier unit and
    transfer_capacity in units per day. A missing capacity means unbounded.
    """
    id: int
    name: Optional[str] = None
    kind: NodeKind = NodeKind.LOCAL_DISTRIBUTION_CENTER
    accum_param: float = 12.0
    transfer_capacity: Optional[float] = None
    op_time: float = 0.0
    op_cost: float = 0.0

    @property
    def label(self) -> str:
        return self.name or str(self.id)


class ServiceArc(DomainModel):
    """Directed direct-transport service; the mode is an annotation only"""
    source: int
    target: int
    travel_time: float
    unit_trip_cost: float = 0.0
    carrier_size: float = 60.0
    mode: ArcMode = ArcMode.ROAD

    @property
    def pair(self) -> Pair:
        return (self.source, self.target)


class Demand(DomainModel):
    """Daily courier flow in standard units; a missing deadline means none is offered"""
    origin: int
    dest: int
    volume: float
    deadline: Optional[float] = None

    @property
    def pair(self) -> Pair:
        return (self.origin, self.dest)


class CandidateSet(DomainModel):
    """Explicit potential transfer nodes for one (origin, dest) pair"""
    origin: int
    dest: int
    nodes: List[int]

    @validator("nodes")
    def sort_nodes(cls, v):
        return sorted(v)


class Instance(DomainModel):
    """One courier class: nodes, direct services, demands and the time value λ"""
    nodes: List[Node] = Field(default_factory=list)
    arcs: List[ServiceArc] = Field(default_factory=list)
    demands: List[Demand] = Field(default_factory=list)
    time_value: float = 1.0
    candidate_transfers: Optional[List[CandidateSet]] = None
    courier_class: Optional[str] = None

    _index: Any = PrivateAttr(default=None)

    @validator("nodes")
    def sort_nodes(cls, v):
        return sorted(v, key=lambda node: node.id)

    @validator("arcs")
    def sort_arcs(cls, v):
        return sorted(v, key=lambda arc: (arc.source, arc.target))

    @validator("demands")
    def sort_demands(cls, v):
        return sorted(v, key=lambda demand: (demand.origin, demand.dest))

    @validator("candidate_transfers")
    def sort_candidates(cls, v):
        if v is None:
            return v
        return sorted(v, key=lambda entry: (entry.origin, entry.dest))

    @property
    def index(self) -> "NetworkIndex":
        """Lookup tables, built once per instance"""
        if self._index is None:
            self._index = NetworkIndex(self)
        return self._index

    def copy(self, **kwargs) -> "Instance":
        clone = super().copy(**kwargs)
        clone._index = None
        return clone

    def node_id(self, name: str) -> int:
        for node in self.nodes:
            if node.name == name:
                return node.id
        raise KeyError(f"no node named {name!r}")

    def with_demands(self, demands: Iterable[Demand]) -> "Instance":
        return Instance(
            nodes=self.nodes,
            arcs=self.arcs,
            demands=list(demands),
            time_value=self.time_value,
            candidate_transfers=self.candidate_transfers,
            courier_class=self.courier_class,
        )


class NetworkIndex:
    """Precomputed lookups over a structurally valid instance"""

    def __init__(self, instance: Instance):
        self.nodes: Dict[int, Node] = {node.id: node for node in instance.nodes}
        self.node_ids: Tuple[int, ...] = tuple(sorted(self.nodes))
        self.arcs: Dict[Pair, ServiceArc] = {arc.pair: arc for arc in instance.arcs}
        successors: Dict[int, List[int]] = {}
        for source, target in sorted(self.arcs):
            successors.setdefault(source, []).append(target)
        self.successors: Dict[int, Tuple[int, ...]] = {k: tuple(v) for k, v in successors.items()}
        self.demands: Dict[Pair, Demand] = {demand.pair: demand for demand in instance.demands}
        self.time_value = instance.time_value
        self._all_nodes = frozenset(self.node_ids)
        self._explicit: Dict[Pair, FrozenSet[int]] = {}
        for entry in instance.candidate_transfers or []:
            self._explicit[(entry.origin, entry.dest)] = frozenset(entry.nodes) - {entry.origin, entry.dest}
        self._candidates: Dict[Pair, FrozenSet[int]] = {}
        self._options: Dict[Pair, Tuple[int, ...]] = {}

    def candidates(self, i: int, j: int) -> FrozenSet[int]:
        """P(i,j); every node except i and j unless the instance lists the pair"""
        cached = self._candidates.get((i, j))
        if cached is None:
            cached = self._explicit.get((i, j))
            if cached is None:
                cached = self._all_nodes - {i, j}
            self._candidates[(i, j)] = cached
        return cached

    def options(self, i: int, j: int) -> Tuple[int, ...]:
        """Admissible next hops for (i,j): j over a direct arc, or a candidate reachable by arc"""
        cached = self._options.get((i, j))
        if cached is None:
            candidates = self.candidates(i, j)
            cached = tuple(
                k for k in self.successors.get(i, ()) if k == j or k in candidates
            )
            self._options[(i, j)] = cached
        return cached

    def label(self, node: int) -> str:
        found = self.nodes.get(node)
        return found.label if found is not None else str(node)


class RoutingTable(Mapping):
    """Next-hop decisions: (i, j) -> j for direct transport, (i, j) -> k for a first transfer at k.

    Immutable. Iteration and encoding follow the lexicographic order of (i, j).
    """

    __slots__ = ("_hops",)

    def __init__(self, hops: Union[Mapping, Iterable[Tuple[Pair, int]], None] = None):
        items = hops.items() if isinstance(hops, Mapping) else (hops or ())
        self._hops: Dict[Pair, int] = {
            (int(i), int(j)): int(k) for (i, j), k in sorted(items)
        }

    def __getitem__(self, pair: Pair) -> int:
        return self._hops[pair]

    def __iter__(self) -> Iterator[Pair]:
        return iter(self._hops)

    def __len__(self) -> int:
        return len(self._hops)

    def __hash__(self) -> int:
        return hash(self.encode())

    def __repr__(self) -> str:
        return f"RoutingTable({self._hops!r})"

    def next_hop(self, i: int, j: int) -> Optional[int]:
        return self._hops.get((i, j))

    def encode(self) -> Tuple[Tuple[int, int, int], ...]:
        """Lexicographic key used for deterministic tie-breaks"""
        return tuple((i, j, k) for (i, j), k in self._hops.items())

    def with_hops(self, updates: Mapping) -> "RoutingTable":
        """Copy with updated decisions; a None value removes the pair"""
        hops = dict(self._hops)
        for pair, hop in updates.items():
            if hop is None:
                hops.pop(pair, None)
            else:
                hops[pair] = hop
        return RoutingTable(hops)

    def by_destination(self) -> Dict[int, Dict[int, int]]:
        grouped: Dict[int, Dict[int, int]] = {}
        for (i, j), k in self._hops.items():
            grouped.setdefault(j, {})[i] = k
        return grouped

    def decisions(self) -> Tuple[Dict[Tuple[int, int, int], int], Dict[Pair, int]]:
        """Decode into the binary variables x[i,j,k] (transfer) and y[i,j] (direct)"""
        x: Dict[Tuple[int, int, int], int] = {}
        y: Dict[Pair, int] = {}
        for (i, j), k in self._hops.items():
            if k == j:
                y[(i, j)] = 1
            else:
                x[(i, j, k)] = 1
        return x, y

    @classmethod
    def from_decisions(cls, x: Mapping, y: Mapping) -> "RoutingTable":
        hops: Dict[Pair, int] = {}
        for (i, j), value in y.items():
            if value:
                hops[(i, j)] = j
        for (i, j, k), value in x.items():
            if not value:
                continue
            if (i, j) in hops:
                raise ValueError(f"pair ({i},{j}) has more than one routing choice")
            hops[(i, j)] = k
        return cls(hops)

    @classmethod
    def direct(cls, demands: Iterable[Demand]) -> "RoutingTable":
        return cls({demand.pair: demand.dest for demand in demands})

    def to_entries(self) -> List[Dict[str, int]]:
        return [{"origin": i, "dest": j, "next_hop": k} for (i, j), k in self._hops.items()]

    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, value):
        if isinstance(value, cls):
            return value
        if not isinstance(value, list):
            raise TypeError("routing table must be a list of entries")
        hops: Dict[Pair, int] = {}
        for entry in value:
            if not isinstance(entry, dict) or set(entry) != {"origin", "dest", "next_hop"}:
                raise ValueError("routing entries need exactly origin, dest and next_hop")
            pair = (int(entry["origin"]), int(entry["dest"]))
            if pair in hops:
                raise ValueError(f"duplicate routing entry for {pair}")
            hops[pair] = int(entry["next_hop"])
        return cls(hops)


class ArcReport(DomainModel):
    source: int
    target: int
    service_flow: float
    frequency: float
    rounded_frequency: int
    headway_hours: float
    freq_delay_hours: float
    arc_cost: float


class NodeReport(DomainModel):
    node: int
    sort_load: float
    capacity_slack: Optional[float] = None


class DemandReport(DomainModel):
    origin: int
    dest: int
    chain: List[int]
    delivery_time_hours: float
    deadline_slack_hours: Optional[float] = None


class ViolationRecord(DomainModel):
    entity: str
    rule: str
    message: str


class EvaluationReport(DomainModel):
    """Objective decomposition, constraint residuals and per-demand delivery times"""
    objective: float
    accumulation_cost: float
    transport_cost: float
    transfer_time_cost: float
    transfer_op_cost: float
    per_arc: List[ArcReport] = Field(default_factory=list)
    per_node: List[NodeReport] = Field(default_factory=list)
    per_demand: List[DemandReport] = Field(default_factory=list)
    violations: List[ViolationRecord] = Field(default_factory=list)
    feasible: bool


class AnnealSettings(DomainModel):
    """Cooling schedule; missing temperatures are derived from the initial objective"""
    initial_temp: Optional[float] = None
    cooling: float = 0.97
    iters_per_temp: int = 200
    min_temp: Optional[float] = None
    max_iterations: Optional[int] = None
    restarts: int = 1

    @validator("cooling")
    def validate_cooling(cls, v):
        """Validate that cooling lies strictly between 0 and 1"""
        if not 0.0 < v < 1.0:
            raise ValueError("Cooling must lie strictly between 0 and 1")
        return v

    @validator("initial_temp", "min_temp")
    def validate_temperature(cls, v):
        if v is not None and v <= 0:
            raise ValueError("Temperatures must be positive")
        return v

    @validator("iters_per_temp", "restarts")
    def validate_positive_count(cls, v):
        if v < 1:
            raise ValueError("Counts must be at least 1")
        return v

    @validator("max_iterations")
    def validate_iteration_cap(cls, v):
        if v is not None and v < 0:
            raise ValueError("Iteration cap must be non-negative")
        return v


class PenaltyWeights(DomainModel):
    capacity_weight: float = 1000.0
    deadline_weight: float = 1000.0
    cycle_weight: float = 1.0e6

    @validator("capacity_weight", "deadline_weight", "cycle_weight")
    def validate_weight(cls, v):
        """Validate that penalty weights are non-negative"""
        if v < 0:
            raise ValueError("Penalty weights must be non-negative")
        return v


class SolveConfig(DomainModel):
    algorithm: Algorithm = Algorithm.EXACT
    seed: int = 0
    max_transfers: int = 4
    search_cap: int = Field(default_factory=get_search_cap)
    threads: int = Field(default_factory=get_thread_count)
    anneal: AnnealSettings = Field(default_factory=AnnealSettings)
    penalty: PenaltyWeights = Field(default_factory=PenaltyWeights)

    @validator("seed", "max_transfers")
    def validate_non_negative(cls, v):
        if v < 0:
            raise ValueError("Seed and max_transfers must be non-negative")
        return v

    @validator("threads", "search_cap")
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("Threads and search cap must be at least 1")
        return v


class TracePoint(DomainModel):
    iteration: int
    objective: float


class AlgorithmTrace(DomainModel):
    iterations: int = 0
    best_objective_by_iteration: List[TracePoint] = Field(default_factory=list)
    wall_time: float = 0.0


class SolveResult(DomainModel):
    algorithm: Algorithm
    routing: RoutingTable
    report: EvaluationReport
    trace: AlgorithmTrace = Field(default_factory=AlgorithmTrace)
    proven_optimal: bool = False

    class Config:
        json_encoders = {RoutingTable: RoutingTable.to_entries}


def _default_node_counts() -> Dict[NodeKind, int]:
    return {
        NodeKind.LOCAL_DISTRIBUTION_CENTER: 2,
        NodeKind.SORTING_CENTER: 1,
        NodeKind.TERMINAL_DISTRIBUTION_CENTER: 2,
    }


def _default_arc_density() -> Dict[ArcMode, float]:
    return {ArcMode.ROAD: 0.6, ArcMode.RAIL: 0.8, ArcMode.AIR: 0.8}


class GeneratorSpec(DomainModel):
    """Random instance recipe. Ranges are inclusive (low, high) pairs"""
    seed: int = 0
    node_counts: Dict[NodeKind, int] = Field(default_factory=_default_node_counts)
    arc_density: Dict[ArcMode, float] = Field(default_factory=_default_arc_density)
    demand_count: int = 3
    travel_time_range: Range = (2.0, 20.0)
    trip_cost_range: Range = (100.0, 1500.0)
    carrier_size_range: Range = (60.0, 60.0)
    volume_range: Range = (5.0, 120.0)
    accum_range: Range = (10.0, 11.5)
    op_time_range: Range = (0.5, 3.0)
    op_cost_range: Range = (1.0, 10.0)
    capacity_range: Range = (200.0, 2000.0)
    time_value: float = 1.0
    deadline_tightness: Optional[float] = 1.5
    max_transfers: int = 4
    max_retries: int = 20

    @validator(
        "travel_time_range",
        "trip_cost_range",
        "carrier_size_range",
        "volume_range",
        "accum_range",
        "op_time_range",
        "op_cost_range",
        "capacity_range",
    )
    def validate_range(cls, v, field):
        """Validate that a range is ordered and non-negative"""
        low, high = v
        if low < 0 or high < low:
            raise ValueError(f"{field.name} must satisfy 0 <= low <= high")
        return v

    @validator("travel_time_range", "carrier_size_range", "volume_range")
    def validate_positive_range(cls, v, field):
        if v[0] <= 0:
            raise ValueError(f"{field.name} must start above zero")
        return v

    @validator("accum_range")
    def validate_accum_range(cls, v):
        if v[1] > 24:
            raise ValueError("Accumulation parameters cannot exceed 24 hours")
        return v

    @validator("node_counts")
    def validate_node_counts(cls, v):
        if any(count < 0 for count in v.values()):
            raise ValueError("Node counts must be non-negative")
        return v

    @validator("arc_density")
    def validate_arc_density(cls, v):
        if any(not 0.0 <= density <= 1.0 for density in v.values()):
            raise ValueError("Arc densities must lie in [0, 1]")
        return v

    @validator("demand_count", "seed", "max_transfers", "time_value")
    def validate_non_negative(cls, v):
        if v < 0:
            raise ValueError("Counts, seed and time value must be non-negative")
        return v

    @validator("deadline_tightness")
    def validate_tightness(cls, v):
        if v is not None and v < 1.0:
            raise ValueError("Deadline tightness must be at least 1")
        return v

    @validator("max_retries")
    def validate_retries(cls, v):
        if v < 1:
            raise ValueError("At least one generation attempt is required")
        return v
