"""Shared test utilities: instance generators and independent oracles.

The oracles here (hitting-set search, rooted-isomorphism backtracking,
non-isomorphic graph enumeration) are deliberately written from scratch so
the production code is always checked against an independent route.
"""

from __future__ import annotations

import itertools
from random import Random

import networkx as nx

from treefit.graph import Graph
from treefit.trees import Tree


# -- conversions -----------------------------------------------------------------

def to_networkx(g: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(g.edges())
    return out


def from_networkx(nxg: nx.Graph) -> Graph:
    nodes = sorted(nxg.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    return Graph(len(nodes), [(index[u], index[v]) for u, v in nxg.edges()])


def tree_from_networkx(nxg: nx.Graph) -> Tree:
    nodes = sorted(nxg.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    return Tree(len(nodes), [(index[u], index[v]) for u, v in nxg.edges()])


# -- named graphs -----------------------------------------------------------------

def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def path_tree(n: int) -> Tree:
    return Tree(n, [(i, i + 1) for i in range(n - 1)])


def star_tree(leaves: int) -> Tree:
    return Tree(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def spider(legs: int, leg_len: int) -> Tree:
    edges = []
    nxt = 1
    for _ in range(legs):
        prev = 0
        for _ in range(leg_len):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Tree(nxt, edges)


# -- exhaustive enumerations ---------------------------------------------------------

def all_trees(order: int) -> list[Tree]:
    """All non-isomorphic trees on `order` vertices."""
    if order == 1:
        return [Tree(1, [])]
    if order == 2:
        return [Tree(2, [(0, 1)])]
    return [tree_from_networkx(nxt) for nxt in nx.nonisomorphic_trees(order)]


def connected_graphs_up_to(max_n: int) -> dict[int, list[Graph]]:
    """All non-isomorphic connected graphs per order, by augmentation.

    Every connected graph on n vertices arises from a connected graph on n-1
    vertices by attaching a new vertex (remove any non-cut vertex), so level
    n candidates are parents plus one vertex with a nonempty neighbor mask;
    dedupe is WL-hash bucketing confirmed by VF2.
    """
    levels: dict[int, list[Graph]] = {1: [Graph(1, [])]}
    for n in range(2, max_n + 1):
        seen: dict[str, list[nx.Graph]] = {}
        accepted: list[Graph] = []
        for parent in levels[n - 1]:
            base_edges = list(parent.edges())
            for mask in range(1, 1 << (n - 1)):
                edges = base_edges + [
                    (i, n - 1) for i in range(n - 1) if mask >> i & 1
                ]
                candidate = nx.Graph()
                candidate.add_nodes_from(range(n))
                candidate.add_edges_from(edges)
                key = nx.weisfeiler_lehman_graph_hash(candidate, iterations=3)
                bucket = seen.setdefault(key, [])
                if any(nx.is_isomorphic(candidate, other) for other in bucket):
                    continue
                bucket.append(candidate)
                accepted.append(Graph(n, edges))
        levels[n] = accepted
    return levels


# -- independent oracles ----------------------------------------------------------------

def min_hitting_set_size(sets: list[frozenset[int]], universe: list[int]) -> int:
    """Exhaustive minimum hitting set over subsets of the universe."""
    if any(not s for s in sets):
        raise ValueError("empty set cannot be hit")
    for size in range(len(universe) + 1):
        for cand in itertools.combinations(universe, size):
            chosen = set(cand)
            if all(chosen & s for s in sets):
                return size
    raise AssertionError("unreachable")


def rooted_isomorphic(
    a: Tree, a_root: int, b: Tree, b_root: int,
    a_within: frozenset | None = None, b_within: frozenset | None = None,
) -> bool:
    """Brute-force rooted isomorphism via recursive children matching."""
    a_act = a_within if a_within is not None else frozenset(range(a.n))
    b_act = b_within if b_within is not None else frozenset(range(b.n))

    def children(t: Tree, root: int, act: frozenset) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        parent = {root: -1}
        stack = [root]
        while stack:
            u = stack.pop()
            kids = []
            for v in t.adj(u) & act:
                if v not in parent:
                    parent[v] = u
                    kids.append(v)
                    stack.append(v)
            out[u] = kids
        return out

    ca = children(a, a_root, a_act)
    cb = children(b, b_root, b_act)

    def match(x: int, y: int) -> bool:
        kx, ky = ca[x], cb[y]
        if len(kx) != len(ky):
            return False
        if not kx:
            return True
        for perm in itertools.permutations(ky):
            if all(match(cx, cy) for cx, cy in zip(kx, perm)):
                return True
        return False

    return len(a_act) == len(b_act) and match(a_root, b_root)


def random_embedding(
    g: Graph, t: Tree, rng: Random, domain: set[int] | None = None
) -> dict[int, int] | None:
    """A uniformly scrambled valid partial embedding via random backtracking."""
    targets = sorted(domain) if domain is not None else list(range(t.n))
    target_set = set(targets)
    root = targets[0]
    order = [root]
    parent = {root: -1}
    queue = [root]
    while queue:
        u = queue.pop(0)
        for v in t.adj(u) & target_set:
            if v not in parent:
                parent[v] = u
                order.append(v)
                queue.append(v)
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def place(depth: int) -> bool:
        if depth == len(order):
            return True
        tv = order[depth]
        if depth == 0:
            pool = list(range(g.n))
        else:
            pool = sorted(g.adj(mapping[parent[tv]]) - used)
        rng.shuffle(pool)
        for gv in pool:
            if gv in used:
                continue
            mapping[tv] = gv
            used.add(gv)
            if place(depth + 1):
                return True
            used.discard(gv)
            del mapping[tv]
        return False

    return dict(mapping) if place(0) else None


def random_connected_subtree(t: Tree, size: int, rng: Random) -> set[int]:
    start = rng.randrange(t.n)
    chosen = {start}
    frontier = set(t.adj(start))
    while len(chosen) < size and frontier:
        v = rng.choice(sorted(frontier))
        chosen.add(v)
        frontier = (frontier | set(t.adj(v))) - chosen
    return chosen
