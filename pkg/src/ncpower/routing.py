"""Shortest paths and minimum-total-hop link-disjoint path pairs.

All tie-breaks are lexicographic on node sequences so that repeated runs (and
the reference tables under tests/data/) are reproducible bit-for-bit:

* ``shortest_path`` returns the lexicographically smallest minimum-hop path.
* A disjoint pair is ordered (working, protection) by (hop count, sequence).
* Candidate pairs are sorted by (working sequence, protection sequence).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import ContractError, RoutingError, SurvivabilityError
from .model import Demand, Edge, Instance, Link, Topology, undirected


@dataclass(frozen=True)
class Path:
    """A simple path stored as its node sequence."""

    nodes: tuple[int, ...]

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ContractError("a path needs at least two nodes")
        if len(set(self.nodes)) != len(self.nodes):
            raise ContractError(f"path {self.nodes} revisits a node")

    @property
    def hop_count(self) -> int:
        return len(self.nodes) - 1

    @cached_property
    def links(self) -> tuple[Link, ...]:
        return tuple(zip(self.nodes, self.nodes[1:]))

    @cached_property
    def link_set(self) -> frozenset[Link]:
        return frozenset(self.links)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(undirected(l) for l in self.links)

    def __str__(self) -> str:
        return "-".join(map(str, self.nodes))


@dataclass(frozen=True)
class PathPair:
    """Working and protection path of one demand; disjoint in the fibre view."""

    demand: Demand
    working: Path
    protection: Path

    def __post_init__(self):
        for path in (self.working, self.protection):
            if path.nodes[0] != self.demand.source or path.nodes[-1] != self.demand.dest:
                raise ContractError(f"path {path} does not serve demand {self.demand}")
        if self.working.edge_set & self.protection.edge_set:
            raise ContractError(f"paths of {self.demand} share a fibre")
        if self.working.hop_count > self.protection.hop_count:
            raise ContractError("working path must not be longer than protection")

    @property
    def total_hops(self) -> int:
        return self.working.hop_count + self.protection.hop_count

    def path(self, kind) -> Path:
        # kind is coding.PathKind; duck-typed on .value to avoid an import cycle
        return self.working if kind.value == "w" else self.protection


def _bfs_dist(topology: Topology, start: int) -> dict[int, int]:
    dist = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for nb in topology.adjacency[node]:
                if nb not in dist:
                    dist[nb] = dist[node] + 1
                    nxt.append(nb)
        frontier = nxt
    return dist


def shortest_path(topology: Topology, source: int, dest: int) -> Path:
    """Lexicographically smallest minimum-hop path from source to dest."""
    dist_to_dest = _bfs_dist(topology, dest)
    if source not in dist_to_dest:
        raise RoutingError(f"node {dest} is unreachable from node {source}")
    nodes = [source]
    while nodes[-1] != dest:
        here = nodes[-1]
        # adjacency is sorted, so the first admissible neighbour is the smallest
        for nb in topology.adjacency[here]:
            if dist_to_dest.get(nb, -1) == dist_to_dest[here] - 1:
                nodes.append(nb)
                break
    return Path(tuple(nodes))


def _find_cut_edge(topology: Topology, source: int, dest: int) -> Edge | None:
    """An edge whose removal separates source from dest (exists iff no 2 disjoint paths)."""
    base = shortest_path(topology, source, dest)
    for link in base.links:
        banned = undirected(link)
        seen = {source}
        stack = [source]
        while stack:
            node = stack.pop()
            for nb in topology.adjacency[node]:
                if undirected((node, nb)) == banned or nb in seen:
                    continue
                seen.add(nb)
                stack.append(nb)
        if dest not in seen:
            return banned
    return None


def _min_pair_total(topology: Topology, source: int, dest: int) -> int:
    """Minimum total hop count over all edge-disjoint path pairs (Suurballe).

    One BFS gives potentials; the residual graph of the shortest path (its
    links reversed at cost -1) then has non-negative reduced costs, so a
    single Dijkstra run finds the cheapest augmenting path.
    """
    h = _bfs_dist(topology, source)
    if dest not in h:
        raise RoutingError(f"node {dest} is unreachable from node {source}")
    base = shortest_path(topology, source, dest)
    base_edges = base.edge_set
    reversed_links = {(b, a) for a, b in base.links}

    def reduced_arcs(node: int):
        for nb in topology.adjacency[node]:
            if nb not in h:
                continue
            if undirected((node, nb)) in base_edges:
                if (node, nb) in reversed_links:
                    yield nb, -1 + h[node] - h[nb]  # always 0 on a shortest path
                continue
            yield nb, 1 + h[node] - h[nb]

    dist: dict[int, int] = {}
    queue: list[tuple[int, int]] = [(0, source)]
    while queue:
        d, node = heapq.heappop(queue)
        if node in dist:
            continue
        dist[node] = d
        if node == dest:
            break
        for nb, w in reduced_arcs(node):
            if nb not in dist:
                heapq.heappush(queue, (d + w, nb))
    if dest not in dist:
        edge = _find_cut_edge(topology, source, dest)
        raise SurvivabilityError(
            f"no edge-disjoint path pair from {source} to {dest}: "
            f"edge {edge} is a cut edge",
            cut_edge=edge,
        )
    # undo the potential shift: true residual cost = dist + h[dest]
    return base.hop_count + dist[dest] + h[dest]


def _simple_paths_upto(topology: Topology, source: int, dest: int, max_hops: int) -> list[tuple[int, ...]]:
    """All simple source->dest paths of at most max_hops hops, in lex order."""
    dist_to_dest = _bfs_dist(topology, dest)
    out: list[tuple[int, ...]] = []
    if dist_to_dest.get(source, max_hops + 1) > max_hops:
        return out
    if source == dest:
        return [(source,)]
    # explicit stack of neighbour iterators: recursing would overflow on paths
    # hundreds of hops deep, e.g. the far arc of a large ring
    path = [source]
    on_path = {source}
    stack = [iter(topology.adjacency[source])]
    while stack:
        budget = max_hops - len(path) + 1
        for nb in stack[-1]:
            if nb in on_path or dist_to_dest.get(nb, budget) > budget - 1:
                continue
            if nb == dest:
                out.append(tuple(path) + (nb,))
                continue
            path.append(nb)
            on_path.add(nb)
            stack.append(iter(topology.adjacency[nb]))
            break
        else:
            stack.pop()
            on_path.remove(path.pop())
    return out


def disjoint_pair_candidates(topology: Topology, demand: Demand, k: int = 8) -> list[PathPair]:
    """Up to k minimum-total-hop edge-disjoint pairs for a demand, lex-ordered.

    Every returned pair has the same (optimal) total hop count, so callers may
    swap freely among them without touching the uncoded power.
    """
    if k < 1:
        raise ContractError("candidate budget must be at least 1")
    s, t = demand.source, demand.dest
    total = _min_pair_total(topology, s, t)
    h_min = _bfs_dist(topology, t)[s]
    # in an optimal pair the longer path has at most total - h_min hops
    paths = _simple_paths_upto(topology, s, t, total - h_min)
    pairs: list[PathPair] = []
    for i, a in enumerate(paths):
        hops_a = len(a) - 1
        for b in paths[i + 1:]:
            if hops_a + len(b) - 1 != total:
                continue
            edges_a = frozenset(undirected(l) for l in zip(a, a[1:]))
            edges_b = frozenset(undirected(l) for l in zip(b, b[1:]))
            if edges_a & edges_b:
                continue
            first, second = sorted((a, b), key=lambda nodes: (len(nodes), nodes))
            pairs.append(PathPair(demand, Path(first), Path(second)))
    pairs.sort(key=lambda p: (p.working.nodes, p.protection.nodes))
    return pairs[:k]


def suurballe_pair(topology: Topology, demand: Demand) -> PathPair:
    """The canonical minimum-total-hop disjoint pair (first candidate)."""
    return disjoint_pair_candidates(topology, demand, k=1)[0]


def route_instance(instance: Instance) -> tuple[PathPair, ...]:
    """Canonical 1+1 routing: suurballe_pair for every demand, in demand order."""
    return tuple(suurballe_pair(instance.topology, d) for d in instance.demands)


def index_routing(instance: Instance, routing: Iterable[PathPair]) -> dict[Demand, PathPair]:
    """Map each instance demand to its routed pair; reject gaps and duplicates."""
    by_demand: dict[Demand, PathPair] = {}
    for pair in routing:
        if pair.demand in by_demand:
            raise ContractError(f"demand {pair.demand} routed twice")
        by_demand[pair.demand] = pair
    for d in instance.demands:
        if d not in by_demand:
            raise ContractError(f"demand {d} has no routing")
    if len(by_demand) != len(instance.demands):
        stranger = next(d for d in by_demand if d not in set(instance.demands))
        raise ContractError(f"routing covers unknown demand {stranger}")
    return by_demand
