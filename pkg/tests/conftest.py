"""Test-side brute-force oracles and instance generators.

These deliberately avoid the package's routing/matching code paths so that
tests cross-validate two independent implementations.
"""
from __future__ import annotations

import itertools
import random
from pathlib import Path

import networkx as nx
import pytest

from ncpower.model import Demand, Instance, Topology

DATA_DIR = Path(__file__).parent / "data"


def all_simple_paths(topology: Topology, source: int, dest: int) -> list[tuple[int, ...]]:
    """Every simple source->dest path, by plain DFS over sorted neighbours."""
    out: list[tuple[int, ...]] = []
    stack = [(source, (source,))]
    while stack:
        node, path = stack.pop()
        if node == dest:
            out.append(path)
            continue
        for nb in reversed(topology.adjacency[node]):
            if nb not in path:
                stack.append((nb, path + (nb,)))
    return out


def _edges_of(path: tuple[int, ...]) -> frozenset[tuple[int, int]]:
    return frozenset(tuple(sorted(e)) for e in zip(path, path[1:]))


def brute_min_disjoint_total(topology: Topology, source: int, dest: int) -> int | None:
    """Minimum working+protection hops over all disjoint pairs; None if none exist."""
    paths = all_simple_paths(topology, source, dest)
    best = None
    for a, b in itertools.combinations(paths, 2):
        if _edges_of(a) & _edges_of(b):
            continue
        total = len(a) + len(b) - 2
        if best is None or total < best:
            best = total
    return best


def connected_graphs(n: int):
    """All labelled connected graphs on nodes 1..n, as edge lists."""
    all_edges = list(itertools.combinations(range(1, n + 1), 2))
    for bits in range(1 << len(all_edges)):
        edges = [e for i, e in enumerate(all_edges) if bits >> i & 1]
        if len(edges) < n - 1:
            continue
        g = nx.Graph(edges)
        if len(g) == n and nx.is_connected(g):
            yield edges


def random_survivable_instance(
    rng: random.Random,
    n_lo: int = 4,
    n_hi: int = 6,
    volume: float | None = None,
) -> Instance:
    """Connected bridgeless G(n, 0.5) instance with all-pairs demands.

    Bridgeless so that every demand admits a disjoint path pair; ``volume``
    None draws per-demand volumes uniformly from [10, 100].
    """
    while True:
        n = rng.randint(n_lo, n_hi)
        edges = [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < 0.5]
        g = nx.Graph(edges)
        g.add_nodes_from(range(1, n + 1))
        if not nx.is_connected(g) or list(nx.bridges(g)):
            continue
        demands = tuple(
            Demand(s, t, volume if volume is not None else rng.uniform(10.0, 100.0))
            for s in range(1, n + 1)
            for t in range(1, n + 1)
            if s != t
        )
        return Instance(Topology.from_undirected_edges(n, edges), demands)


@pytest.fixture(scope="session")
def random_instances() -> list[Instance]:
    """The 25 heterogeneous-volume instances shared across oracle/bounds tests."""
    rng = random.Random(20260816)
    return [random_survivable_instance(rng) for _ in range(25)]


@pytest.fixture(scope="session")
def random_instances_uniform(random_instances) -> list[Instance]:
    """Same 25 topologies with every volume forced to 20 Gbps."""
    out = []
    for inst in random_instances:
        demands = tuple(Demand(d.source, d.dest, 20.0) for d in inst.demands)
        out.append(Instance(inst.topology, demands, inst.power))
    return out
