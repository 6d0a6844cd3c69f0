"""Shared helpers for building small random arenas in tests."""

import random

from catmouse.solver import Graph


def random_arena(seed, n_max=7, directed=None):
    """A seeded arena graph with 2..n_max nodes and random edge density."""
    rng = random.Random(seed)
    n = rng.randint(2, n_max)
    if directed is None:
        directed = rng.random() < 0.5
    density = rng.uniform(0.2, 0.8)
    nodes = tuple(f"n{i}" for i in range(n))
    edges = []
    for i, a in enumerate(nodes):
        for j, b in enumerate(nodes):
            if i == j:
                continue
            if not directed and i > j:
                continue
            if rng.random() < density:
                edges.append((a, b))
    return Graph(directed=directed, nodes=nodes, edges=tuple(edges))


def random_placement(graph, seed):
    """A valid (cat, mouse, hole) triple: distinct players, mouse off hole."""
    rng = random.Random(seed)
    nodes = list(graph.nodes)
    cat = rng.choice(nodes)
    mouse = rng.choice([v for v in nodes if v != cat])
    hole = rng.choice([v for v in nodes if v != mouse])
    return cat, mouse, hole
