"""Random instance generators shared by the CLI and the test suites."""

from __future__ import annotations

from random import Random

from .errors import PreconditionViolated
from .graph import Graph
from .trees import Tree


def random_tree(n: int, rng: Random) -> Tree:
    """Uniform-ish random tree by random attachment."""
    if n < 1:
        raise PreconditionViolated("tree needs at least one vertex")
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    return Tree(n, edges)


def random_tree_bounded_leaf_degree(n: int, max_ld: int, rng: Random) -> Tree:
    """Random tree in which no vertex has more than max_ld leaf neighbors.

    Built as a random skeleton plus one pendant leaf on a vertex subset that
    covers every skeleton leaf, which pins the leaf degree at <= 1; extra
    pendants (for max_ld > 1) are spread with a per-vertex cap.
    """
    if n < 2:
        raise PreconditionViolated("needs at least an edge")
    if max_ld < 1:
        raise PreconditionViolated("max_ld must be at least 1")
    if n == 2:
        return Tree(2, [(0, 1)])
    if n == 3 and max_ld == 1:
        raise PreconditionViolated("every 3-vertex tree has leaf degree 2")
    for _ in range(1000):
        tree = _try_bounded_tree(n, max_ld, rng)
        if tree is not None:
            return tree
    raise AssertionError("bounded-leaf-degree sampling kept failing")


def _try_bounded_tree(n: int, max_ld: int, rng: Random) -> Tree | None:
    # skeleton of m vertices; every final leaf hangs off it as a pendant,
    # and every skeleton leaf gets a pendant so it stops being a leaf
    m = max(1, min(n - 1, rng.randint(max(1, n // 3), n - 1)))
    skeleton_edges = [(rng.randrange(v), v) for v in range(1, m)]
    deg = [0] * m
    for u, v in skeleton_edges:
        deg[u] += 1
        deg[v] += 1
    skeleton_leaves = [v for v in range(m) if deg[v] <= 1]
    budget = n - m
    if budget < len(skeleton_leaves) or budget > m * max_ld:
        return None
    attach: list[int] = list(skeleton_leaves)
    budget -= len(skeleton_leaves)
    pendant_count = {v: 1 for v in skeleton_leaves}
    open_slots = [v for v in range(m) if pendant_count.get(v, 0) < max_ld]
    while budget > 0:
        if not open_slots:
            return None
        v = rng.choice(open_slots)
        attach.append(v)
        pendant_count[v] = pendant_count.get(v, 0) + 1
        if pendant_count[v] >= max_ld:
            open_slots.remove(v)
        budget -= 1
    edges = list(skeleton_edges)
    nxt = m
    for v in attach:
        edges.append((v, nxt))
        nxt += 1
    return Tree(n, edges)


def random_graph(n: int, p: float, rng: Random) -> Graph:
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph(n, edges)


def random_connected_graph(n: int, p: float, rng: Random) -> Graph:
    """Random graph plus a random spanning tree to force connectivity."""
    present = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p}
    order = list(range(n))
    rng.shuffle(order)
    for a, b in zip(order, order[1:]):
        present.add((min(a, b), max(a, b)))
    return Graph(n, sorted(present))


def random_graph_min_degree(n: int, delta: int, rng: Random, p: float | None = None) -> Graph:
    """Random graph with minimum degree >= delta, by sampling plus greedy
    augmentation from deficient vertices; the result is audited."""
    if delta >= n:
        raise PreconditionViolated(f"cannot reach min degree {delta} on {n} vertices")
    if p is None:
        p = min(0.95, (delta + 1) / max(n - 1, 1))
    adjacency = [set() for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adjacency[u].add(v)
                adjacency[v].add(u)
    for u in range(n):
        while len(adjacency[u]) < delta:
            pool = [v for v in range(n) if v != u and v not in adjacency[u]]
            v = rng.choice(pool)
            adjacency[u].add(v)
            adjacency[v].add(u)
    g = Graph(n, [(u, v) for u in range(n) for v in adjacency[u] if u < v])
    if g.min_degree() < delta:
        raise AssertionError("augmentation failed its degree audit")
    return g


def circulant(n: int, offsets: list[int]) -> Graph:
    edges = set()
    for u in range(n):
        for d in offsets:
            v = (u + d) % n
            if u != v:
                edges.add((min(u, v), max(u, v)))
    return Graph(n, sorted(edges))
