import itertools

import pytest

from helpers import path_tree, rooted_isomorphic, spider, star_tree
from treefit.errors import HypothesisNotMet, ParseError
from treefit.generate import random_tree
from treefit.seeds import rng_from
from treefit.trees import (
    Tree,
    canonical_code,
    contains_rooted_subtree,
    contract_trivial_paths,
    find_balanced_edge,
    find_separable_edge,
    format_tree,
    leaf_count_lower_bound_holds,
    leaf_degree,
    maximal_trivial_paths,
    minimal_spanning_subtree,
    parse_tree,
    tree_diameter,
)


def h_shape(bridge_edges: int) -> Tree:
    """Two degree-3 vertices joined by a bridge path, two pendants each."""
    edges = [(0, 1), (0, 2)]
    prev, nxt = 0, 3
    for _ in range(bridge_edges):
        edges.append((prev, nxt))
        prev = nxt
        nxt += 1
    hub2 = prev
    edges += [(hub2, nxt), (hub2, nxt + 1)]
    return Tree(nxt + 2, edges)


class TestConstruction:
    def test_rejects_cycle(self):
        with pytest.raises(ValueError):
            Tree(3, [(0, 1), (1, 2), (2, 0)])

    def test_rejects_disconnected(self):
        with pytest.raises(ValueError):
            Tree(4, [(0, 1), (2, 3), (0, 1)])

    def test_rejects_wrong_edge_count(self):
        with pytest.raises(ValueError):
            Tree(3, [(0, 1)])


class TestLeafDegree:
    def test_star(self):
        assert leaf_degree(star_tree(5)) == (5, 0)

    def test_path(self):
        ld, witness = leaf_degree(path_tree(6))
        assert ld == 1 and witness in (1, 4)

    def test_spider(self):
        ld, witness = leaf_degree(spider(3, 2))
        assert ld == 1

    def test_single_vertex_error(self):
        with pytest.raises(ValueError):
            leaf_degree(Tree(1, []))


class TestLeafCountBound:
    def test_star_bound(self):
        assert leaf_count_lower_bound_holds(star_tree(6), 3)

    def test_path_bound(self):
        assert leaf_count_lower_bound_holds(path_tree(8), 1)

    def test_hypothesis_rejected(self):
        with pytest.raises(HypothesisNotMet):
            leaf_count_lower_bound_holds(path_tree(5), 3)

    def test_random_trees(self):
        rng = rng_from(21)
        for _ in range(30):
            t = random_tree(20, rng)
            diam = tree_diameter(t)
            q = 20 // diam
            if q >= 1:
                assert leaf_count_lower_bound_holds(t, q)

    def test_exhaustive_small(self, small_trees):
        for n in range(2, 11):
            for t in small_trees[n]:
                diam = tree_diameter(t)
                if diam < 1:
                    continue
                for q in range(0, n // diam + 1):
                    if n >= q * diam:
                        assert leaf_count_lower_bound_holds(t, q)


class TestSeparableEdge:
    def test_path_middle(self):
        assert find_separable_edge(path_tree(10), 5) == (4, 5)

    def test_star_absent(self):
        assert find_separable_edge(star_tree(5), 2) is None

    def test_half_diameter_always_present(self, small_trees):
        for n in range(2, 11):
            for t in small_trees[n]:
                q = tree_diameter(t) // 2
                assert find_separable_edge(t, q) is not None

    def test_split_sizes(self):
        t = h_shape(4)
        edge = find_separable_edge(t, 3)
        assert edge is not None
        u, v = edge
        # check by explicit component count after edge removal
        view = t.rooted(u)
        child = v if view.parent[v] == u else u
        side = view.size[child] if view.parent[v] == u else t.n - view.size[u]
        assert min(side, t.n - side) >= 3


class TestBalancedEdge:
    def test_p4_middle(self):
        assert find_balanced_edge(path_tree(4)) == (1, 2)

    def test_star_any(self):
        edge = find_balanced_edge(star_tree(3))
        assert 0 in edge

    def test_random_trees_meet_bound(self):
        rng = rng_from(22)
        for _ in range(40):
            t = random_tree(15, rng)
            u, v = find_balanced_edge(t)
            view = t.rooted(u)
            assert view.parent[v] == u
            side = view.size[v]
            max_deg = max(t.degree(x) for x in range(t.n))
            bound = -(-(t.n - 1) // max_deg)
            assert min(side, t.n - side) >= bound

    def test_exhaustive_bound(self, small_trees):
        for n in range(2, 11):
            for t in small_trees[n]:
                u, v = find_balanced_edge(t)
                view = t.rooted(u)
                side = view.size[v]
                max_deg = max(t.degree(x) for x in range(t.n))
                bound = -(-(t.n - 1) // max_deg)
                assert min(side, t.n - side) >= bound


class TestTrivialPaths:
    def test_path_is_one_piece(self):
        paths = maximal_trivial_paths(path_tree(7))
        assert len(paths) == 1 and len(paths[0]) == 7

    def test_star_pieces(self):
        paths = maximal_trivial_paths(star_tree(3))
        assert len(paths) == 3 and all(len(p) == 2 for p in paths)

    def test_h_shape_partition(self):
        t = h_shape(4)
        paths = maximal_trivial_paths(t)
        assert len(paths) == 5
        covered = sorted(
            tuple(sorted(e)) for p in paths for e in zip(p, p[1:])
        )
        assert covered == sorted(tuple(sorted(e)) for e in t.edges())

    def test_partition_property_random(self):
        rng = rng_from(23)
        for _ in range(40):
            t = random_tree(rng.randint(2, 18), rng)
            paths = maximal_trivial_paths(t)
            covered = sorted(tuple(sorted(e)) for p in paths for e in zip(p, p[1:]))
            assert covered == sorted(tuple(sorted(e)) for e in t.edges())
            for p in paths:
                for inner in p[1:-1]:
                    assert t.degree(inner) == 2

    def test_breaks_become_endpoints(self):
        t = path_tree(9)
        paths = maximal_trivial_paths(t, breaks=[4])
        assert sorted(len(p) - 1 for p in paths) == [4, 4]
        assert all(p[0] in (0, 4, 8) and p[-1] in (0, 4, 8) for p in paths)


class TestMinimalSpanningSubtree:
    def test_path_ends(self):
        assert minimal_spanning_subtree(path_tree(6), {0, 5}) == set(range(6))

    def test_star_two_leaves(self):
        assert minimal_spanning_subtree(star_tree(4), {1, 2}) == {0, 1, 2}

    def test_minimality_exhaustive(self):
        rng = rng_from(24)
        for _ in range(30):
            t = random_tree(rng.randint(2, 10), rng)
            size = rng.randint(1, t.n)
            w = set(rng.sample(range(t.n), size))
            result = minimal_spanning_subtree(t, w)
            assert w <= result
            deg = {v: len(t.adj(v) & result) for v in result}
            if len(result) > 1:
                for v in result:
                    if deg[v] == 1:
                        assert v in w  # leaves of the result lie in w
            # exhaustive minimality: no proper connected superset of w is smaller
            for size2 in range(len(w), len(result)):
                for cand in itertools.combinations(sorted(range(t.n)), size2):
                    chosen = set(cand)
                    if not w <= chosen:
                        continue
                    deg2 = {v: len(t.adj(v) & chosen) for v in chosen}
                    reach = {min(chosen)}
                    stack = [min(chosen)]
                    while stack:
                        x = stack.pop()
                        for y in t.adj(x) & chosen:
                            if y not in reach:
                                reach.add(y)
                                stack.append(y)
                    assert len(reach) != len(chosen), "smaller connected cover exists"


class TestContractTrivialPaths:
    def test_long_path(self):
        out = contract_trivial_paths(path_tree(20), 4)
        assert len(out.paths) == 1
        assert len(out.paths[0]) == 5  # 4 edges survive
        assert out.owed == (15,)

    def test_star_unchanged(self):
        out = contract_trivial_paths(star_tree(3), 4)
        assert out.owed == (0, 0, 0)
        assert all(len(p) == 2 for p in out.paths)

    def test_h_shape_bridge(self):
        t = h_shape(10)
        out = contract_trivial_paths(t, 4)
        kept_edges = sum(len(p) - 1 for p in out.paths)
        assert kept_edges == 4 + 4  # capped bridge plus four pendant edges
        total_owed = sum(out.owed)
        assert kept_edges + total_owed == t.n - 1

    def test_expansion_restores_count(self):
        rng = rng_from(25)
        for _ in range(30):
            t = random_tree(rng.randint(2, 20), rng)
            out = contract_trivial_paths(t, 3)
            kept = sum(len(p) - 1 for p in out.paths)
            assert kept + sum(out.owed) == t.n - 1


class TestCanonicalCode:
    def test_path_root_matters(self):
        t = path_tree(3)
        assert canonical_code(t, 0) != canonical_code(t, 1)

    def test_relabeling_invariant(self):
        a = Tree(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
        b = Tree(5, [(4, 3), (3, 2), (3, 0), (0, 1)])  # same shape, relabeled
        assert canonical_code(a, 0) == canonical_code(b, 4)

    def test_codes_realize_rooted_classes(self, small_trees):
        # exhaustive over all rooted trees on up to 7 vertices
        rooted = []
        for n in range(1, 8):
            for t in small_trees[n]:
                for root in range(t.n):
                    rooted.append((t, root))
        codes = [canonical_code(t, r) for t, r in rooted]
        for i, j in itertools.combinations(range(len(rooted)), 2):
            t1, r1 = rooted[i]
            t2, r2 = rooted[j]
            same_iso = rooted_isomorphic(t1, r1, t2, r2)
            assert (codes[i] == codes[j]) == same_iso


class TestRootedContainment:
    def test_path_in_star(self):
        assert contains_rooted_subtree(star_tree(3), 0, path_tree(2), 0) is not None
        assert contains_rooted_subtree(star_tree(3), 0, path_tree(3), 0) is None

    def test_agrees_with_brute_force(self, small_trees):
        # containment with equal sizes is exactly rooted isomorphism
        rooted = []
        for n in range(1, 8):
            for t in small_trees[n]:
                for root in range(t.n):
                    rooted.append((n, t, root))
        rng = rng_from(26)
        import random as _random

        pairs = _random.Random(5).sample(list(itertools.combinations(rooted, 2)), 3000)
        for (n1, t1, r1), (n2, t2, r2) in pairs:
            if n1 != n2:
                continue
            got = contains_rooted_subtree(t1, r1, t2, r2) is not None
            expect = rooted_isomorphic(t1, r1, t2, r2)
            assert got == expect

    def test_embedding_is_valid(self):
        host = spider(3, 3)
        guest = spider(2, 2)
        found = contains_rooted_subtree(host, 0, guest, 0)
        assert found is not None
        assert found[0] == 0
        for u, v in guest.edges():
            assert host.has_edge(found[u], found[v])


class TestTextFormat:
    def test_round_trip(self):
        t = spider(3, 2)
        assert format_tree(parse_tree(format_tree(t))) == format_tree(t)

    def test_rejects_cycle(self):
        with pytest.raises(ParseError):
            parse_tree("3\n0 1\n1 2\n2 0\n")

    def test_rejects_disconnection(self):
        with pytest.raises(ParseError):
            parse_tree("4\n0 1\n2 3\n")
