"""Host graph representation and the graph-side primitives of the solver.

Vertices are dense integers 0..n-1.  The graph is immutable after
construction; every query below is pure, so concurrent reads are safe.
Vertex sets are plain Python sets/frozensets throughout.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Sequence

from .errors import (
    DisconnectedError,
    EmptyGraphError,
    IsEscapeVertexError,
    ParseError,
    TooSmallError,
)


class Graph:
    """Simple undirected graph with adjacency sets and cached degree stats."""

    __slots__ = ("n", "edge_count", "_adj", "_min_degree", "_max_degree")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if v in adj[u]:
                raise ValueError(f"duplicate edge ({u},{v})")
            adj[u].add(v)
            adj[v].add(u)
            m += 1
        self.n = n
        self.edge_count = m
        self._adj: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in adj)
        self._min_degree: int | None = None
        self._max_degree: int | None = None

    # -- basic queries ----------------------------------------------------

    def vertices(self) -> range:
        return range(self.n)

    def adj(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def closed_adj(self, v: int) -> frozenset[int]:
        return self._adj[v] | {v}

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def min_degree(self) -> int:
        if self.n == 0:
            raise EmptyGraphError("minimum degree of the empty graph")
        if self._min_degree is None:
            self._min_degree = min(len(s) for s in self._adj)
        return self._min_degree

    def max_degree(self) -> int:
        if self.n == 0:
            raise EmptyGraphError("maximum degree of the empty graph")
        if self._max_degree is None:
            self._max_degree = max(len(s) for s in self._adj)
        return self._max_degree

    # -- traversal --------------------------------------------------------

    def bfs_distances(self, source: int, forbidden: frozenset[int] | set[int] = frozenset()) -> list[int]:
        """Unweighted distances from source; unreachable vertices get n."""
        inf = self.n
        dist = [inf] * self.n
        if source in forbidden:
            return dist
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u]
            for v in self._adj[u]:
                if dist[v] == inf and v not in forbidden:
                    dist[v] = du + 1
                    queue.append(v)
        return dist

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out: list[list[int]] = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = [s]
            seen[s] = True
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in self._adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        comp.append(v)
                        queue.append(v)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return self.bfs_distances(0).count(self.n) == 0

    def diameter(self) -> tuple[int, tuple[int, int]]:
        """Exact diameter plus the lexicographically smallest diametral pair."""
        if self.n == 0:
            raise EmptyGraphError("diameter of the empty graph")
        best = -1
        pair = (0, 0)
        for u in range(self.n):
            dist = self.bfs_distances(u)
            for v in range(u + 1, self.n):
                d = dist[v]
                if d >= self.n:
                    raise DisconnectedError("diameter of a disconnected graph")
                if d > best or (d == best and (u, v) < pair):
                    best = d
                    pair = (u, v)
        if self.n == 1:
            return 0, (0, 0)
        return best, pair

    def induced(self, keep: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on `keep`; returns (subgraph, new-index -> old-id)."""
        old = sorted(set(keep))
        index = {v: i for i, v in enumerate(old)}
        edges = [
            (index[u], index[v])
            for u in old
            for v in self._adj[u]
            if u < v and v in index
        ]
        return Graph(len(old), edges), old

    def __repr__(self) -> str:  # pragma: no cover
        return f"Graph(n={self.n}, m={self.edge_count})"


# -- degree slack ----------------------------------------------------------

def neighbor_deficiency(g: Graph, v: int, k: int) -> int:
    """How many image vertices must avoid N[v] before v's free neighbors
    suffice for leaf placement: max{(min_degree+k-1) - deg(v), 0}."""
    if not (0 <= v < g.n):
        raise ValueError(f"vertex {v} out of range")
    if k < 0:
        raise ValueError("k must be non-negative")
    return max(g.min_degree() + k - 1 - g.degree(v), 0)


# -- bipartite matching and covers ------------------------------------------

def max_bipartite_matching(
    g: Graph, left: Iterable[int], right: Iterable[int]
) -> list[tuple[int, int]]:
    """Maximum matching of the bipartite subgraph between two disjoint sides.

    Augmenting-path fixpoint; deterministic (ascending vertex order).
    Returns matched (left, right) pairs sorted by the left endpoint.
    """
    left_list = sorted(set(left))
    right_set = frozenset(right)
    if right_set & set(left_list):
        raise ValueError("matching sides must be disjoint")
    match_right: dict[int, int] = {}
    match_left: dict[int, int] = {}

    def augment(u: int, blocked: set[int]) -> bool:
        for v in sorted(g.adj(u) & right_set):
            if v in blocked:
                continue
            blocked.add(v)
            if v not in match_right or augment(match_right[v], blocked):
                match_right[v] = u
                match_left[u] = v
                return True
        return False

    for u in left_list:
        augment(u, set())
    return sorted(match_left.items())


def min_vertex_cover_bipartite(
    g: Graph, left: Iterable[int], right: Iterable[int]
) -> set[int]:
    """Minimum vertex cover of the bipartite cut graph, recovered from a
    maximum matching by alternating reachability."""
    left_set = frozenset(left)
    right_set = frozenset(right)
    matching = max_bipartite_matching(g, left_set, right_set)
    match_left = dict(matching)
    match_right = {v: u for u, v in matching}

    reached_left = {u for u in left_set if u not in match_left}
    reached_right: set[int] = set()
    queue = deque(sorted(reached_left))
    while queue:
        u = queue.popleft()
        for v in g.adj(u) & right_set:
            if v in reached_right or match_left.get(u) == v:
                continue
            reached_right.add(v)
            w = match_right.get(v)
            if w is not None and w not in reached_left:
                reached_left.add(w)
                queue.append(w)
    return (left_set - reached_left) | reached_right


# -- escape vertices and separators ------------------------------------------

def is_q_escape(g: Graph, v: int, q: int) -> bool:
    """True iff deg(v) >= min_degree+q or the matching between N[v] and the
    rest of the graph has size >= q."""
    if not (0 <= v < g.n):
        raise ValueError(f"vertex {v} out of range")
    if q < 0:
        raise ValueError("q must be non-negative")
    if q == 0 or g.degree(v) >= g.min_degree() + q:
        return True
    closed = g.closed_adj(v)
    rest = [u for u in range(g.n) if u not in closed]
    if not rest:
        return False
    return len(max_bipartite_matching(g, closed, rest)) >= q


def nonescape_separator(g: Graph, v: int, q: int) -> set[int]:
    """A separator of size < q around a non-escape vertex v.

    Takes the minimum vertex cover of the bipartite graph between N[v] and
    the rest; v never appears in it.  Raises if v is a q-escape vertex or if
    either separated side would be empty.
    """
    closed = g.closed_adj(v)
    rest = sorted(u for u in range(g.n) if u not in closed)
    if not rest:
        raise TooSmallError("no vertices outside the closed neighborhood")
    if is_q_escape(g, v, q):
        raise IsEscapeVertexError(f"vertex {v} is a {q}-escape vertex")
    cover = min_vertex_cover_bipartite(g, closed, rest)
    if v in cover:
        raise AssertionError("cover recovery placed v itself in the cover")
    if len(cover) >= q:
        raise AssertionError("cover exceeds the matching bound")
    if not set(rest) - cover:
        raise TooSmallError("far side of the separator is empty")
    near = closed - cover
    far = set(rest) - cover
    forbidden = frozenset(cover)
    reach = set(
        u for u, d in enumerate(g.bfs_distances(v, forbidden)) if d < g.n
    )
    if reach & far or not near <= reach | cover:
        raise AssertionError("separator fails the components check")
    return set(cover)


# -- paths -------------------------------------------------------------------

def shortest_path_avoiding(
    g: Graph, s: int, t: int, forbidden: Iterable[int]
) -> list[int] | None:
    """A shortest s-t path in the graph minus `forbidden`, or None."""
    banned = frozenset(forbidden)
    if s in banned or t in banned:
        raise ValueError("path endpoints must not be forbidden")
    if s == t:
        return [s]
    inf = g.n
    dist = [inf] * g.n
    prev = [-1] * g.n
    dist[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        if u == t:
            break
        for v in sorted(g.adj(u)):
            if dist[v] == inf and v not in banned:
                dist[v] = dist[u] + 1
                prev[v] = u
                queue.append(v)
    if dist[t] == inf:
        return None
    path = [t]
    while path[-1] != s:
        path.append(prev[path[-1]])
    path.reverse()
    return path


# -- text format --------------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the graph text format: `n m` then m lines `u v` with u < v."""
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty input", 1)
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError("expected header `n m`", 1)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError("non-integer header", 1) from None
    if n < 0 or m < 0:
        raise ParseError("negative counts in header", 1)
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    lineno = 1
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 2:
            raise ParseError("expected `u v`", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("non-integer endpoint", lineno) from None
        if u == v:
            raise ParseError(f"loop edge ({u},{v})", lineno)
        if not (0 <= u < v < n):
            raise ParseError(f"edge ({u},{v}) violates 0 <= u < v < n", lineno)
        if (u, v) in seen:
            raise ParseError(f"duplicate edge ({u},{v})", lineno)
        seen.add((u, v))
        edges.append((u, v))
    if len(edges) != m:
        raise ParseError(f"header claims {m} edges, found {len(edges)}", lineno)
    return Graph(n, edges)


def format_graph(g: Graph) -> str:
    out = [f"{g.n} {g.edge_count}"]
    out.extend(f"{u} {v}" for u, v in sorted(g.edges()))
    return "\n".join(out) + "\n"


def read_graph(path) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        return parse_graph(fh.read())


def write_graph(path, g: Graph) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_graph(g))
