"""Pairing demands for XOR-coded protection.

Two demands towards the same destination can be encoded when one chosen path
of each shares at least one directed link: on every shared link the XOR of the
two flows replaces the smaller one, saving min(V1, V2) Gbps there.  Selection
is a max-weight matching problem per destination cluster (a demand can join at
most one coded pair), over the four working/protection kind combinations.

Two selector families are provided:

* ``select_pairs_fixed`` keeps the given routing and a single kind combo.
* ``select_pairs_osh`` searches all four combos and may re-route each matched
  demand among its equal-cost disjoint-pair candidates.  Because candidates
  all have the minimum total hop count, the uncoded power term is invariant
  and the per-pair benefit decomposes, so a per-cluster max-weight matching
  over per-pair-maximised weights is exactly optimal on this search space.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from .errors import ContractError, FeasibilityError
from .model import Demand, Instance, Link
from .power import PowerParams
from .routing import Path, PathPair, disjoint_pair_candidates, index_routing


class PathKind(Enum):
    WORKING = "w"
    PROTECTION = "p"


_W = PathKind.WORKING
_P = PathKind.PROTECTION
# order is the deterministic tie-break among equal-benefit combos
KIND_COMBOS: tuple[tuple[PathKind, PathKind], ...] = ((_W, _W), (_W, _P), (_P, _W), (_P, _P))

COMBO_NAMES = {"ww": (_W, _W), "wp": (_W, _P), "pw": (_P, _W), "pp": (_P, _P)}

# beyond this cluster size, switch from exhaustive matching to blossom
EXHAUSTIVE_MATCHING_LIMIT = 10


@dataclass(frozen=True)
class CodedPair:
    """One encoded demand pair: which path of each is XORed, and where."""

    first: Demand
    second: Demand
    first_kind: PathKind
    second_kind: PathKind
    shared_links: frozenset[Link]
    benefit: float  # watts saved

    def __post_init__(self):
        if self.first.dest != self.second.dest:
            raise FeasibilityError(
                f"cannot encode {self.first} with {self.second}: destinations differ"
            )
        if self.first.source >= self.second.source:
            raise ContractError("coded pair must be ordered by source id")
        if not self.shared_links:
            raise ContractError("coded pair without shared links")
        if self.benefit < 0:
            raise ContractError("negative benefit")

    @property
    def shared_hops(self) -> int:
        return len(self.shared_links)


@dataclass(frozen=True)
class CodingAssignment:
    """A set of coded pairs; every demand appears in at most one."""

    pairs: tuple[CodedPair, ...]

    def __post_init__(self):
        seen: set[Demand] = set()
        for pair in self.pairs:
            for d in (pair.first, pair.second):
                if d in seen:
                    raise ContractError(f"demand {d} appears in two coded pairs")
                seen.add(d)

    @cached_property
    def _shared_by_demand(self) -> dict[Demand, int]:
        table: dict[Demand, int] = {}
        for pair in self.pairs:
            table[pair.first] = pair.shared_hops
            table[pair.second] = pair.shared_hops
        return table

    def shared_hops(self, demand: Demand) -> int:
        """Shared hop count of the demand's coded pair; 0 when unpaired."""
        return self._shared_by_demand.get(demand, 0)

    @property
    def total_benefit(self) -> float:
        return sum(p.benefit for p in self.pairs)


EMPTY_ASSIGNMENT = CodingAssignment(())


@dataclass(frozen=True, eq=False)
class EncodableGraph:
    """Demands as vertices; an edge per feasible (pair, kind combo)."""

    demands: tuple[Demand, ...]
    edges: dict[tuple[Demand, Demand, PathKind, PathKind], CodedPair]

    def clusters(self) -> dict[int, tuple[Demand, ...]]:
        """Demands grouped by destination, sources ascending."""
        by_dest: dict[int, list[Demand]] = {}
        for d in self.demands:
            by_dest.setdefault(d.dest, []).append(d)
        return {t: tuple(sorted(ds, key=lambda d: d.source)) for t, ds in sorted(by_dest.items())}

    def best_edge(self, d1: Demand, d2: Demand) -> CodedPair | None:
        """Highest-benefit combo for an ordered demand pair, if any is feasible."""
        best = None
        for combo in KIND_COMBOS:
            pair = self.edges.get((d1, d2, combo[0], combo[1]))
            if pair is not None and (best is None or pair.benefit > best.benefit):
                best = pair
        return best


@dataclass(frozen=True)
class SelectionResult:
    """A coding assignment plus the routing it is valid against."""

    assignment: CodingAssignment
    routing: tuple[PathPair, ...]


def pair_benefit(
    d1: Demand,
    d2: Demand,
    path1: Path,
    path2: Path,
    params: PowerParams,
) -> tuple[frozenset[Link], float]:
    """Shared directed links of the two encoded paths and the power they save."""
    if d1.dest != d2.dest:
        raise FeasibilityError(f"cannot encode {d1} with {d2}: destinations differ")
    shared = path1.link_set & path2.link_set
    benefit = params.slope_w_per_gbps * min(d1.volume, d2.volume) * len(shared)
    return shared, benefit


def build_encodable_graph(
    instance: Instance,
    routing: Iterable[PathPair],
    combos: Sequence[tuple[PathKind, PathKind]] = KIND_COMBOS,
) -> EncodableGraph:
    """Feasible coded pairs on a fixed routing.

    Edge keys order each demand pair by source id; the first kind applies to
    the lower-source demand.  Clusters are per-destination by construction.
    """
    by_demand = index_routing(instance, routing)
    edges: dict[tuple[Demand, Demand, PathKind, PathKind], CodedPair] = {}
    for demands in _clusters(instance.demands).values():
        for d1, d2 in itertools.combinations(demands, 2):
            for k1, k2 in combos:
                shared, benefit = pair_benefit(
                    d1, d2, by_demand[d1].path(k1), by_demand[d2].path(k2), instance.power
                )
                if shared:
                    edges[(d1, d2, k1, k2)] = CodedPair(d1, d2, k1, k2, shared, benefit)
    return EncodableGraph(demands=instance.demands, edges=edges)


def _clusters(demands: Sequence[Demand]) -> dict[int, tuple[Demand, ...]]:
    by_dest: dict[int, list[Demand]] = {}
    for d in demands:
        by_dest.setdefault(d.dest, []).append(d)
    return {t: tuple(sorted(ds, key=lambda d: d.source)) for t, ds in sorted(by_dest.items())}


# -- max-weight matching -----------------------------------------------------


def _max_weight_pairs_exhaustive(n: int, weights: dict[tuple[int, int], float]) -> list[tuple[int, int]]:
    partners: dict[int, list[int]] = {i: [] for i in range(n)}
    for (i, j) in sorted(weights):
        partners[i].append(j)

    best_total = 0.0
    best_pairs: list[tuple[int, int]] = []

    def walk(i: int, used: int, total: float, chosen: list[tuple[int, int]]):
        nonlocal best_total, best_pairs
        while i < n and used >> i & 1:
            i += 1
        if i == n:
            if total > best_total:
                best_total = total
                best_pairs = list(chosen)
            return
        for j in partners[i]:
            if not used >> j & 1:
                chosen.append((i, j))
                walk(i + 1, used | 1 << i | 1 << j, total + weights[(i, j)], chosen)
                chosen.pop()
        walk(i + 1, used | 1 << i, total, chosen)

    # pairing is explored before skipping, so among equal-benefit matchings the
    # first (lexicographically smallest) one is kept
    walk(0, 0, 0.0, [])
    return best_pairs


def _max_weight_pairs_blossom(n: int, weights: dict[tuple[int, int], float]) -> list[tuple[int, int]]:
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for (i, j) in sorted(weights):
        graph.add_edge(i, j, weight=weights[(i, j)])
    matching = nx.max_weight_matching(graph, maxcardinality=False)
    return sorted(tuple(sorted(edge)) for edge in matching)


def max_weight_pairs(n: int, weights: dict[tuple[int, int], float]) -> list[tuple[int, int]]:
    """Max-weight matching on vertices 0..n-1; exhaustive for small n."""
    weights = {key: w for key, w in weights.items() if w > 0}
    if not weights:
        return []
    if n <= EXHAUSTIVE_MATCHING_LIMIT:
        return _max_weight_pairs_exhaustive(n, weights)
    return _max_weight_pairs_blossom(n, weights)


# -- selectors ---------------------------------------------------------------


def _uniform_volume(demands: Sequence[Demand]) -> bool:
    return len({d.volume for d in demands}) <= 1


def select_pairs_fixed(
    instance: Instance,
    routing: Iterable[PathPair],
    combo: tuple[PathKind, PathKind],
) -> SelectionResult:
    """Best matching for a single kind combo on the given routing (no re-routing)."""
    routing = tuple(routing)
    graph = build_encodable_graph(instance, routing, (combo,))
    uniform = _uniform_volume(instance.demands)
    chosen: list[CodedPair] = []
    for demands in graph.clusters().values():
        weights: dict[tuple[int, int], float] = {}
        for (i, d1), (j, d2) in itertools.combinations(enumerate(demands), 2):
            pair = graph.edges.get((d1, d2, combo[0], combo[1]))
            if pair is not None:
                # integral weights keep the matching exact for uniform volumes
                weights[(i, j)] = (
                    pair.shared_hops if uniform
                    else min(d1.volume, d2.volume) * pair.shared_hops
                )
        for i, j in max_weight_pairs(len(demands), weights):
            chosen.append(graph.edges[(demands[i], demands[j], combo[0], combo[1])])
    return SelectionResult(CodingAssignment(tuple(chosen)), routing)


def _kind_link_sets(pool: Sequence[PathPair], kind: PathKind) -> list[tuple[frozenset[Link], int]]:
    """Distinct link sets of one kind across a candidate pool, first index wins."""
    seen: dict[frozenset[Link], int] = {}
    for idx, pair in enumerate(pool):
        links = pair.path(kind).link_set
        if links not in seen:
            seen[links] = idx
    return [(links, idx) for links, idx in seen.items()]


def select_pairs_osh(
    instance: Instance,
    routing: Iterable[PathPair],
    candidate_budget: int = 8,
) -> SelectionResult:
    """Joint pairing/routing search over all kind combos (the strongest heuristic).

    Per cluster, the weight of a demand pair is the best benefit over the two
    demands' candidate pools and the four kind combos; a max-weight matching
    then fixes the pairs, and matched demands adopt their best candidates.
    Unmatched demands keep the caller's routing untouched.
    """
    routing = tuple(routing)
    by_demand = index_routing(instance, routing)
    topo = instance.topology
    uniform = _uniform_volume(instance.demands)

    pools: dict[Demand, list[PathPair]] = {}
    for d in instance.demands:
        pool = disjoint_pair_candidates(topo, d, candidate_budget)
        base = by_demand[d]
        if base not in pool and base.total_hops == pool[0].total_hops:
            pool.append(base)  # caller's pair competes when it is also optimal
        pools[d] = pool

    kinds: dict[tuple[Demand, PathKind], list[tuple[frozenset[Link], int]]] = {}
    for d, pool in pools.items():
        for kind in (_W, _P):
            kinds[(d, kind)] = _kind_link_sets(pool, kind)

    new_routing = dict(by_demand)
    chosen: list[CodedPair] = []
    for demands in _clusters(instance.demands).values():
        weights: dict[tuple[int, int], float] = {}
        picks: dict[tuple[int, int], tuple[int, int, tuple[PathKind, PathKind], frozenset[Link]]] = {}
        for (i, d1), (j, d2) in itertools.combinations(enumerate(demands), 2):
            best_shared = 0
            best = None
            for combo in KIND_COMBOS:
                for links1, idx1 in kinds[(d1, combo[0])]:
                    for links2, idx2 in kinds[(d2, combo[1])]:
                        shared = links1 & links2
                        if len(shared) > best_shared:
                            best_shared = len(shared)
                            best = (idx1, idx2, combo, shared)
            if best is not None:
                picks[(i, j)] = best
                weights[(i, j)] = (
                    best_shared if uniform else min(d1.volume, d2.volume) * best_shared
                )
        for i, j in max_weight_pairs(len(demands), weights):
            d1, d2 = demands[i], demands[j]
            idx1, idx2, combo, shared = picks[(i, j)]
            new_routing[d1] = pools[d1][idx1]
            new_routing[d2] = pools[d2][idx2]
            benefit = (
                instance.power.slope_w_per_gbps * min(d1.volume, d2.volume) * len(shared)
            )
            chosen.append(CodedPair(d1, d2, combo[0], combo[1], shared, benefit))

    final = tuple(new_routing[d] for d in instance.demands)
    return SelectionResult(CodingAssignment(tuple(chosen)), final)
