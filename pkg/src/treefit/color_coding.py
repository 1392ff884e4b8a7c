"""Randomized color-coding engines.

Three layers: a colorful dynamic program that embeds a whole (sub)tree under
a vertex coloring while honoring a pinned partial map and per-set hitting
quotas; an exact constrained backtracking search used below the
randomization crossover; and the annotated hitting solver that enumerates
candidate subtrees and drives trials.

All searches are one-sided: a returned embedding is always verified, a miss
is only probabilistic (unless the exact branch ran, which callers can see on
the result).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from random import Random
from typing import Iterable, Mapping, Sequence

from .embedding import PartialEmbedding, verify
from .errors import BudgetExceededError
from .graph import Graph
from .outcome import Contains, NotContained, NotFound, SolveOutcome
from .seeds import rng_from
from .trees import (
    Tree,
    canonical_code,
    contains_rooted_subtree,
    minimal_spanning_subtree,
    tree_diameter,
)

Family = tuple[frozenset[int], int]

LN2 = math.log(2.0)


@dataclass(frozen=True)
class Coloring:
    """A palette assignment over host vertices; -1 marks an unusable vertex."""

    colors: tuple[int, ...]
    palette: int
    seed: int | None = None


def trial_count(witness_size: int, failure_exponent: int) -> int:
    """Independent colorings needed to push the miss probability below
    2**-failure_exponent for a witness of the given size."""
    return max(1, math.ceil(math.exp(witness_size) * failure_exponent * LN2))


def sample_coloring(
    g: Graph, palette: int, rng: Random, fixed: Mapping[int, int] | None = None
) -> Coloring:
    """Uniform coloring with reserved colors pinned to the given vertices.

    Reserved colors are exclusive: unpinned vertices draw only from the
    remaining palette (and become unusable when none remains).
    """
    fixed = dict(fixed or {})
    colors = [-1] * g.n
    for gv, c in fixed.items():
        if not (0 <= c < len(fixed)):
            raise ValueError("reserved colors must be 0..len(fixed)-1")
        colors[gv] = c
    lo = len(fixed)
    if palette > lo:
        for v in range(g.n):
            if v not in fixed:
                colors[v] = rng.randrange(lo, palette)
    return Coloring(tuple(colors), palette)


# -- colorful DP ----------------------------------------------------------------

def colorful_full_tree_dp(
    g: Graph,
    t: Tree,
    coloring: Coloring,
    kappa: Mapping[int, int] | None = None,
    families: Sequence[Family] = (),
    within: Iterable[int] | None = None,
) -> PartialEmbedding | None:
    """Embed the whole (sub)tree with pairwise-distinct colors, or None.

    The embedding respects kappa pointwise and hits at least the quota in
    every family.  State per (tree vertex, host vertex): reachable
    (color-mask, capped quota vector) pairs with self-contained back
    pointers for reconstruction.
    """
    active = frozenset(range(t.n)) if within is None else frozenset(within)
    kappa = dict(kappa or {})
    if not set(kappa) <= active:
        raise ValueError("pinned vertices must lie inside the guest subtree")
    if len(active) > coloring.palette:
        return None
    fams = [(frozenset(F), int(q)) for F, q in families]
    goal = tuple(q for _, q in fams)

    root = min(kappa) if kappa else min(active)
    parent: dict[int, int] = {root: -1}
    order = [root]
    queue = [root]
    while queue:
        u = queue.pop(0)
        for v in sorted(t.adj(u) & active):
            if v not in parent:
                parent[v] = u
                order.append(v)
                queue.append(v)
    if len(order) != len(active):
        raise ValueError("guest subtree is not connected")
    children: dict[int, list[int]] = {v: [] for v in active}
    for v in order[1:]:
        children[parent[v]].append(v)

    colors = coloring.colors

    def unit_quota(gv: int) -> tuple[int, ...]:
        return tuple(min(1 if gv in F else 0, q) for F, q in fams)

    def add_quota(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(min(x + y, q) for x, y, (_, q) in zip(a, b, fams))

    # states[tv][gv]: {(mask, quota): backptr}; backptr is ("base",) or
    # ("join", prev_bp, child_tv, child_gv, child_bp)
    states: dict[int, dict[int, dict[tuple[int, tuple[int, ...]], tuple]]] = {}
    for tv in reversed(order):
        if tv in kappa:
            candidates = [kappa[tv]]
        else:
            need = len(t.adj(tv) & active)
            candidates = [
                v for v in range(g.n) if colors[v] >= 0 and g.degree(v) >= need
            ]
        table: dict[int, dict] = {}
        for gv in candidates:
            if colors[gv] < 0:
                continue
            table[gv] = {(1 << colors[gv], unit_quota(gv)): ("base",)}
        for child in children[tv]:
            child_states = states[child]
            nxt: dict[int, dict] = {}
            for gv, entries in table.items():
                merged: dict = {}
                neighbor_tables = [
                    (u, child_states[u]) for u in sorted(g.adj(gv)) if u in child_states
                ]
                for (mask, quota), bp in entries.items():
                    for u, sub in neighbor_tables:
                        for (m2, q2), bp2 in sub.items():
                            if mask & m2:
                                continue
                            key = (mask | m2, add_quota(quota, q2))
                            if key not in merged:
                                merged[key] = ("join", bp, child, u, bp2)
                if merged:
                    nxt[gv] = merged
            table = nxt
            if not table:
                break
        states[tv] = table

    root_table = states[root]

    def reconstruct(tv: int, gv: int, bp: tuple) -> dict[int, int]:
        if bp[0] == "base":
            return {tv: gv}
        _, prev_bp, child_tv, child_gv, child_bp = bp
        out = reconstruct(tv, gv, prev_bp)
        out.update(reconstruct(child_tv, child_gv, child_bp))
        return out

    for gv in sorted(root_table):
        for key in sorted(root_table[gv]):
            _, quota = key
            if quota == goal:
                mapping = reconstruct(root, gv, root_table[gv][key])
                emb = PartialEmbedding(mapping)
                if not verify(emb, g, t):
                    raise AssertionError("colorful DP reconstructed an invalid embedding")
                return emb
    return None


# -- exact constrained search -----------------------------------------------------

def exact_constrained_embed(
    g: Graph,
    t: Tree,
    kappa: Mapping[int, int] | None = None,
    families: Sequence[Family] = (),
    within: Iterable[int] | None = None,
    node_cap: int | None = None,
    rng: Random | None = None,
) -> PartialEmbedding | None:
    """Deterministic backtracking for the same problem the DP solves.

    With `rng`, candidate orders are shuffled (used by tests to sample
    random witnesses); otherwise ascending order, fully deterministic.
    """
    active = frozenset(range(t.n)) if within is None else frozenset(within)
    kappa = dict(kappa or {})
    if not set(kappa) <= active:
        raise ValueError("pinned vertices must lie inside the guest subtree")
    fams = [(frozenset(F), int(q)) for F, q in families]

    root = min(kappa) if kappa else min(active)
    parent: dict[int, int] = {root: -1}
    order = [root]
    queue = [root]
    while queue:
        u = queue.pop(0)
        for v in sorted(t.adj(u) & active):
            if v not in parent:
                parent[v] = u
                order.append(v)
                queue.append(v)
    if len(order) != len(active):
        raise ValueError("guest subtree is not connected")

    mapping: dict[int, int] = {}
    used: set[int] = set()
    counts = [0] * len(fams)
    nodes = 0

    def ordered(seq: list[int]) -> list[int]:
        if rng is not None:
            rng.shuffle(seq)
        return seq

    def feasible(depth: int) -> bool:
        remaining = len(order) - depth
        return all(c + remaining >= q for c, (_, q) in zip(counts, fams))

    def place(depth: int) -> bool:
        nonlocal nodes
        if depth == len(order):
            return all(c >= q for c, (_, q) in zip(counts, fams))
        tv = order[depth]
        if tv in kappa:
            candidates = [kappa[tv]]
        elif depth == 0:
            candidates = ordered(list(range(g.n)))
        else:
            candidates = ordered(sorted(g.adj(mapping[parent[tv]]) - used))
        need = len(t.adj(tv) & active)
        for gv in candidates:
            nodes += 1
            if node_cap is not None and nodes > node_cap:
                raise BudgetExceededError(nodes)
            if gv in used or g.degree(gv) < need:
                continue
            if depth > 0 and not g.has_edge(gv, mapping[parent[tv]]):
                continue
            mapping[tv] = gv
            used.add(gv)
            deltas = [1 if gv in F else 0 for F, _ in fams]
            for i, d in enumerate(deltas):
                counts[i] += d
            if feasible(depth + 1) and place(depth + 1):
                return True
            for i, d in enumerate(deltas):
                counts[i] -= d
            used.discard(gv)
            del mapping[tv]
        return False

    if place(0):
        emb = PartialEmbedding(mapping)
        if not verify(emb, g, t):
            raise AssertionError("constrained search produced an invalid embedding")
        return emb
    return None


def use_exact_search(
    g: Graph, witness_size: int, failure_exponent: int, families: Sequence[Family] = ()
) -> bool:
    """Crossover rule: exact backtracking when the witness is tiny or the DP
    state bound exceeds the straightforward backtracking bound."""
    if witness_size <= 6:
        return True
    if g.n == 0:
        return True
    trials = trial_count(witness_size, failure_exponent)
    quota_space = 1
    for _, q in families:
        quota_space *= q + 1
    avg_deg = max(1.0, 2.0 * g.edge_count / g.n)
    dp_cost = trials * (2.0 ** witness_size) * witness_size * g.n * avg_deg * quota_space
    bt_cost = float(g.n)
    for i in range(1, witness_size):
        bt_cost *= max(1, min(g.max_degree(), g.n - i))
        if bt_cost > dp_cost:
            return False
    return bt_cost <= dp_cost


# -- plain tree containment by guest size ------------------------------------------

def contains_tree_by_size(
    g: Graph,
    t: Tree,
    failure_exponent: int,
    rng: Random,
    node_budget: int | None = None,
) -> SolveOutcome:
    """Decide whole-tree containment; exact below the crossover, randomized
    color coding above it.  One-sided: no false positives."""
    if t.n > g.n:
        return NotContained(reason="guest larger than host")
    s = t.n
    if use_exact_search(g, s, failure_exponent):
        try:
            emb = exact_constrained_embed(g, t, node_cap=node_budget)
        except BudgetExceededError:
            emb = "budget"
        if emb == "budget":
            pass  # fall through to randomized trials
        elif emb is None:
            return NotContained(reason="exhaustive search")
        else:
            return Contains(emb, branch="exact-search")

    total = trial_count(s, failure_exponent)
    capped = total
    note = ""
    if node_budget is not None:
        per_trial = (2 ** min(s, 60)) * s * max(g.n, 1)
        capped = min(total, max(0, node_budget // per_trial))
        if capped < total:
            note = "BudgetExceeded"
    for trial in range(capped):
        coloring = sample_coloring(g, s, rng)
        emb = colorful_full_tree_dp(g, t, coloring)
        if emb is not None:
            return Contains(emb, branch="color-coding")
    return NotFound(rounds=capped, failure_exponent=failure_exponent, note=note)


# -- annotated hitting subtree containment -------------------------------------------

@dataclass(frozen=True)
class AhscInstance:
    """Find a connected subtree of t (within the active subset) whose
    embedding respects kappa and meets every (set, quota) family."""

    g: Graph
    t: Tree
    kappa: tuple[tuple[int, int], ...]
    families: tuple[Family, ...] = ()
    within: frozenset[int] | None = None

    @staticmethod
    def make(
        g: Graph,
        t: Tree,
        kappa: Mapping[int, int] | None = None,
        families: Sequence[Family] = (),
        within: Iterable[int] | None = None,
    ) -> "AhscInstance":
        items = tuple(sorted((kappa or {}).items()))
        images = [gv for _, gv in items]
        if len(set(images)) != len(images):
            raise ValueError("kappa must be injective")
        fams = tuple((frozenset(F), int(q)) for F, q in families)
        act = None if within is None else frozenset(within)
        return AhscInstance(g, t, items, fams, act)

    @property
    def kappa_map(self) -> dict[int, int]:
        return dict(self.kappa)

    @property
    def active(self) -> frozenset[int]:
        return self.within if self.within is not None else frozenset(range(self.t.n))


@dataclass(frozen=True)
class AhscResult:
    subtree: frozenset[int] | None
    embedding: PartialEmbedding | None
    exact: bool
    trials: int = 0

    @property
    def found(self) -> bool:
        return self.embedding is not None


def compositions_at_most(total: int, terms: int):
    """All tuples of `terms` non-negative ints summing to <= total, lexicographic."""
    if terms == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in compositions_at_most(total - first, terms - 1):
            yield (first,) + rest


def rooted_subtrees_with_leaf_count(
    t: Tree, root: int, leaf_target: int, within: Iterable[int], max_size: int
) -> list[frozenset[int]]:
    """Connected vertex sets containing `root` inside `within` whose induced
    subtree has exactly `leaf_target` leaves besides the root, one
    representative per rooted-isomorphism class."""
    universe = frozenset(within)
    if root not in universe:
        raise ValueError("root outside the universe")
    seen: set[frozenset[int]] = set()
    start = frozenset({root})
    queue = [start]
    seen.add(start)
    matches: list[frozenset[int]] = []
    while queue:
        cur = queue.pop(0)
        degs = {v: len(t.adj(v) & cur) for v in cur}
        leaves = sum(1 for v in cur if v != root and degs[v] <= 1)
        if leaves == leaf_target:
            matches.append(cur)
        if len(cur) < max_size:
            boundary = set()
            for v in cur:
                boundary |= (t.adj(v) & universe) - cur
            for v in sorted(boundary):
                nxt = cur | {v}
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    by_code: dict[str, frozenset[int]] = {}
    for cand in sorted(matches, key=lambda s: (len(s), sorted(s))):
        code = canonical_code(t, root, within=cand)
        if code not in by_code:
            by_code[code] = cand
    return list(by_code.values())


def solve_ahsc(inst: AhscInstance, failure_exponent: int, rng: Random) -> AhscResult:
    """Enumerate candidate subtrees (minimal pinned spine plus attachment
    trees per composition) and try each with the colorful DP or the exact
    search.  `exact` in the result means every branch was decided exactly."""
    g, t = inst.g, inst.t
    active = inst.active
    kappa = inst.kappa_map
    fams = list(inst.families)
    total_quota = sum(q for _, q in fams)

    for F, q in fams:
        if q > len(F):
            return AhscResult(None, None, exact=True)
    if total_quota > len(active):
        return AhscResult(None, None, exact=True)

    if not kappa:
        if total_quota == 0:
            return AhscResult(frozenset(), PartialEmbedding({}), exact=True)
        exact_all = True
        trials_total = 0
        for anchor_index, w in enumerate(sorted(active)):
            for v in range(g.n):
                sub = AhscInstance.make(g, t, {w: v}, fams, active)
                res = solve_ahsc(sub, failure_exponent, rng_from(rng.getrandbits(63), anchor_index, v))
                trials_total += res.trials
                if res.found:
                    return AhscResult(res.subtree, res.embedding, res.exact, trials_total)
                exact_all = exact_all and res.exact
        return AhscResult(None, None, exact=exact_all, trials=trials_total)

    pinned = sorted(kappa)
    spine = minimal_spanning_subtree(t, pinned, active)
    spine_order = sorted(spine)
    diam = tree_diameter(t)

    # component of each spine vertex after deleting the spine's edges
    comps: dict[int, frozenset[int]] = {}
    for w in spine_order:
        comp = {w}
        queue = [x for x in t.adj(w) & active if x not in spine]
        while queue:
            v = queue.pop()
            if v in comp:
                continue
            comp.add(v)
            queue.extend(x for x in t.adj(v) & active if x not in comp and x not in spine)
        comps[w] = frozenset(comp)

    candidate_cache: dict[tuple[int, int], list[frozenset[int]]] = {}

    def candidates(w: int, a: int) -> list[frozenset[int]]:
        key = (w, a)
        if key not in candidate_cache:
            if a == 0:
                candidate_cache[key] = [frozenset({w})]
            else:
                found = rooted_subtrees_with_leaf_count(
                    t, w, a, comps[w], max_size=min(len(comps[w]), a * max(diam, 1) + 1)
                )
                for cand in found:
                    if contains_rooted_subtree(t, w, t, w, comps[w], cand) is None:
                        raise AssertionError("generated attachment is not a rooted subtree")
                candidate_cache[key] = found
        return candidate_cache[key]

    exact_all = True
    trials_done = 0
    tried: set[frozenset[int]] = set()
    for comp_vec in compositions_at_most(total_quota, len(spine_order)):
        lists = []
        ok = True
        for w, a in zip(spine_order, comp_vec):
            cands = candidates(w, a)
            if not cands:
                ok = False
                break
            lists.append(cands)
        if not ok:
            continue
        for choice in product(*lists):
            subtree = frozenset(spine.union(*choice))
            if subtree in tried or len(subtree) > g.n:
                continue
            tried.add(subtree)
            s = len(subtree)
            if use_exact_search(g, s, failure_exponent, fams):
                emb = exact_constrained_embed(g, t, kappa, fams, within=subtree)
                if emb is not None:
                    return AhscResult(subtree, emb, exact_all, trials_done)
            else:
                exact_all = False
                reserved = {kappa[tv]: i for i, tv in enumerate(pinned)}
                for _ in range(trial_count(s, failure_exponent)):
                    trials_done += 1
                    coloring = sample_coloring(g, s, rng, fixed=reserved)
                    emb = colorful_full_tree_dp(g, t, coloring, kappa, fams, within=subtree)
                    if emb is not None:
                        return AhscResult(subtree, emb, False, trials_done)
    return AhscResult(None, None, exact=exact_all, trials=trials_done)
