"""The master solver: size check, greedy guarantee, then the case ladder.

Also houses the brute-force oracle (an independent backtracking search used
by the verification suites; deliberately sharing no code with the solver's
own exact branch) and certificate checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import dense, high_leaf, medium, preserving, small_diameter
from .color_coding import contains_tree_by_size
from .embedding import PartialEmbedding, chvatal_extend, verify
from .errors import BudgetExceededError, EmptyGraphError
from .graph import Graph, is_q_escape
from .outcome import Contains, NotContained, NotFound, SolveOutcome
from .seeds import rng_from
from .trees import Tree, find_separable_edge, leaf_degree, tree_diameter

PIPELINE_P = 15  # exponent behind the small-min-degree and separability cutoffs


@dataclass(frozen=True)
class SolveConfig:
    seed: int = 0
    failure_exponent: int = 20
    node_budget: int | None = 2_000_000
    strict: bool = False  # strict mode removes budgets and may run forever

    def effective_budget(self) -> int | None:
        return None if self.strict else self.node_budget


def verify_certificate(g: Graph, t: Tree, e: PartialEmbedding) -> bool:
    """Full-domain check that e embeds every guest vertex into the host."""
    return verify(e, g, t, require_full=True)


def brute_force_contains(
    g: Graph, t: Tree, node_cap: int | None = None
) -> SolveOutcome:
    """Exact backtracking oracle with degree and remaining-size pruning."""
    if t.n > g.n:
        return NotContained(reason="guest larger than host")
    root = max(range(t.n), key=lambda v: (t.degree(v), -v))
    order = [root]
    parent = {root: -1}
    queue = [root]
    while queue:
        u = queue.pop(0)
        for v in sorted(t.adj(u), key=lambda x: (-t.degree(x), x)):
            if v not in parent:
                parent[v] = u
                order.append(v)
                queue.append(v)

    assignment: dict[int, int] = {}
    taken: set[int] = set()
    nodes = 0

    def attempt(depth: int) -> bool:
        nonlocal nodes
        if depth == t.n:
            return True
        tv = order[depth]
        if depth == 0:
            pool = range(g.n)
        else:
            pool = sorted(g.adj(assignment[parent[tv]]))
        for gv in pool:
            nodes += 1
            if node_cap is not None and nodes > node_cap:
                raise BudgetExceededError(nodes)
            if gv in taken or g.degree(gv) < t.degree(tv):
                continue
            assignment[tv] = gv
            taken.add(gv)
            if attempt(depth + 1):
                return True
            taken.discard(gv)
            del assignment[tv]
        return False

    if attempt(0):
        emb = PartialEmbedding(assignment)
        if not verify_certificate(g, t, emb):
            raise AssertionError("oracle produced an invalid embedding")
        return Contains(emb, branch="oracle")
    return NotContained(reason="exhaustive oracle")


def _solve_connected(g: Graph, t: Tree, config: SolveConfig, stream: int) -> SolveOutcome:
    delta = g.min_degree()
    k = t.n - delta
    budget = config.effective_budget()
    fe = config.failure_exponent

    if t.n > g.n:
        return NotContained(reason="guest larger than host")
    if k <= 1:
        emb = chvatal_extend(g, t, PartialEmbedding({}))
        return Contains(emb, branch="greedy-guarantee")

    # Case 1: small minimum degree -> plain containment search.
    if delta < k ** (3 * PIPELINE_P + 1):
        out = contains_tree_by_size(g, t, fe, rng_from(config.seed, stream, 1), budget)
        return _tag(out, "small-min-degree")

    # Cases 2-3: a vertex with many leaf neighbors.
    if k < 3 or leaf_degree(t)[0] >= k - 1:
        out = high_leaf.solve_high_leaf_degree(
            g, t, k, fe, rng_from(config.seed, stream, 2), node_budget=budget
        )
        return _tag(out, "high-leaf-degree")

    # Case 4: barely more vertices than the minimum degree.
    if 4 * k * (g.n - delta) <= delta:
        emb = dense.embed_dense(g, t, k)
        return Contains(emb, branch="dense")

    # Case 5: very long guests always fit.
    if tree_diameter(t) >= 8 * (k ** 6) * math.log2(delta):
        emb = preserving.solve_large_diameter(g, t, k)
        return Contains(emb, branch="large-diameter")

    # Cases 6-7: escape vertex or separable guest.
    q = k ** PIPELINE_P
    if any(is_q_escape(g, v, q) for v in range(g.n)) or find_separable_edge(t, q):
        emb = medium.solve_medium(g, t, k)
        return Contains(emb, branch="medium")

    out = small_diameter.solve_small_diameter(
        g, t, k, PIPELINE_P, fe, rng_from(config.seed, stream, 3)
    )
    return _tag(out, "small-diameter")


def _tag(out: SolveOutcome, branch: str) -> SolveOutcome:
    if isinstance(out, Contains) and not out.branch.startswith(branch):
        return Contains(out.embedding, branch=f"{branch}:{out.branch}")
    return out


def solve(g: Graph, t: Tree, config: SolveConfig | None = None) -> SolveOutcome:
    """Decide whether the host contains the guest tree.

    One-sided: Contains always carries a verified certificate; NotContained
    only comes from exact branches; NotFound records the spent randomness.
    Disconnected hosts are solved per component with component-local slack.
    """
    config = config or SolveConfig()
    if g.n == 0:
        raise EmptyGraphError("cannot solve on an empty host")
    if t.n > g.n:
        return NotContained(reason="guest larger than host")

    components = g.components()
    if len(components) == 1:
        out = _solve_connected(g, t, config, 0)
        if isinstance(out, NotFound) and out.seed is None:
            out = NotFound(out.rounds, config.seed, out.failure_exponent, out.note)
        _check_contains(g, t, out)
        return out

    misses: list[NotFound] = []
    for index, comp in enumerate(components):
        if len(comp) < t.n:
            continue
        sub, old_ids = g.induced(comp)
        out = _solve_connected(sub, t, config, index + 1)
        if isinstance(out, Contains):
            lifted = PartialEmbedding(
                {tv: old_ids[gv] for tv, gv in out.embedding.mapping.items()}
            )
            result = Contains(lifted, branch=out.branch)
            _check_contains(g, t, result)
            return result
        if isinstance(out, NotFound):
            misses.append(out)
    if misses:
        total = sum(m.rounds for m in misses)
        return NotFound(
            rounds=total,
            seed=config.seed,
            failure_exponent=config.failure_exponent,
            note="; ".join(filter(None, (m.note for m in misses))),
        )
    return NotContained(reason="no component can host the guest")


def _check_contains(g: Graph, t: Tree, out: SolveOutcome) -> None:
    if isinstance(out, Contains) and not verify_certificate(g, t, out.embedding):
        raise AssertionError("solver emitted an unverified certificate")
