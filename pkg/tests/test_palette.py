from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from foxpalette.modp import AffineMap, Prime
from foxpalette.palette import (PaletteError, affine_equivalent, build_palette_graph,
                                classify_subsets, g1_consistency, injective_labelings,
                                is_connected, palette_family, palette_isomorphic, restrict,
                                spanning_tree, tree_matrix, verify_det_properties)


def brute_edges(S, p):
    out = set()
    for a, b in combinations(sorted(S), 2):
        for c in S:
            if (2 * c - a - b) % p == 0:
                out.add((a, c, b))
    return out


def cofactor_det(M):
    if len(M) == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * cofactor_det([r[:j] + r[j + 1:] for r in M[1:]])
               for j in range(len(M)) if M[0][j])


def test_edges_examples():
    G = build_palette_graph({1, 4, 6, 7, 8}, 11)
    assert G.edge_strings() == ["{1|8|4}", "{1|4|7}", "{4|6|8}", "{6|1|7}", "{6|7|8}"]
    assert is_connected(G)
    G = build_palette_graph({0, 4, 6, 7, 8}, 11)
    assert set(G.edge_strings()) == {"{0|4|8}", "{4|0|7}", "{4|6|8}", "{6|7|8}"}
    G = build_palette_graph({0, 1, 6, 7, 8}, 11)
    assert set(G.edge_strings()) == {"{0|6|1}", "{6|1|7}", "{6|7|8}"}
    assert G.components() == [(0, 1), (6, 7, 8)]
    assert not is_connected(G)
    G = build_palette_graph({3}, 11)
    assert G.edges == () and is_connected(G)


def test_empty_rejected():
    with pytest.raises(PaletteError):
        build_palette_graph(set(), 11)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_edges_match_brute_force(p):
    for k in range(1, 6):
        for S in combinations(range(p), k):
            assert set(build_palette_graph(S, p).edges) == brute_edges(S, p)


def test_restrict():
    big = build_palette_graph({0, 1, 4, 6, 7, 8}, 11)
    assert restrict(big, {1, 4, 6, 7, 8}) == build_palette_graph({1, 4, 6, 7, 8}, 11)
    assert restrict(big, {0, 4, 6, 7, 8}) == build_palette_graph({0, 4, 6, 7, 8}, 11)
    assert restrict(big, big.vertices) == big
    with pytest.raises(PaletteError):
        restrict(big, {2, 4})


@given(st.sets(st.integers(0, 10), min_size=3, max_size=8), st.data())
def test_restrict_is_deletion(S, data):
    sub = data.draw(st.sets(st.sampled_from(sorted(S)), min_size=1))
    assert restrict(build_palette_graph(S, 11), sub) == build_palette_graph(sub, 11)


def test_spanning_tree():
    G = build_palette_graph({0, 4, 6, 7, 8}, 11)
    assert sorted(spanning_tree(G)) == sorted(G.edges)
    assert spanning_tree(build_palette_graph({5}, 11)) == []
    T = spanning_tree(build_palette_graph({1, 4, 6, 7, 8}, 11))
    assert len(T) == 4
    with pytest.raises(PaletteError):
        spanning_tree(build_palette_graph({0, 1, 6, 7, 8}, 11))


def test_tree_matrix_example():
    G = build_palette_graph({0, 4, 6, 7, 8}, 11)
    M = tree_matrix(G, spanning_tree(G))
    assert M.vertex_order == (0, 4, 6, 7, 8)
    assert M.rows == ((1, -2, 0, 0, 1), (-2, 1, 0, 1, 0), (0, 1, -2, 0, 1), (0, 0, 1, -2, 1))
    assert cofactor_det(M.reduced()) == -11
    rep = verify_det_properties(M, 11)
    assert rep.det == -11 and rep.passed


def test_det_properties_all_connected_subsets():
    n = 0
    for S in combinations(range(11), 5):
        G = build_palette_graph(S, 11)
        if not is_connected(G):
            continue
        n += 1
        M = tree_matrix(G, spanning_tree(G))
        rep = verify_det_properties(M, 11)
        assert rep.passed, S
        assert rep.det == cofactor_det(M.reduced())
    assert n == 132


def test_det_properties_p5():
    found = 0
    for S in combinations(range(5), 4):
        G = build_palette_graph(S, 5)
        if is_connected(G):
            found += 1
            assert abs(verify_det_properties(tree_matrix(G, spanning_tree(G)), 5).det) == 5
    assert found > 0


def test_det_wrong_size():
    G = build_palette_graph({0, 1, 4, 6, 7, 8}, 11)
    with pytest.raises(PaletteError):
        verify_det_properties(tree_matrix(G, spanning_tree(G)), 11)


def test_isomorphic_examples():
    f = palette_isomorphic({0, 4, 6, 7, 8}, {0, 1, 4, 6, 7}, 11)
    assert f is not None
    S = (1, 4, 6, 7, 8)
    assert palette_isomorphic(S, S, 11) == {x: x for x in S}
    assert palette_isomorphic({1, 4, 6, 7, 8}, {0, 4, 6, 7, 8}, 11) is None


def test_affine_equivalent_examples():
    f = affine_equivalent({0, 4, 6, 7, 8}, {0, 1, 4, 6, 7}, 11)
    assert f.image({0, 4, 6, 7, 8}) == {0, 1, 4, 6, 7}
    assert AffineMap(7, 6, Prime(11)).image({0, 4, 6, 7, 8}) == {0, 1, 4, 6, 7}
    assert affine_equivalent({2, 3}, {2, 3}, 11).image({2, 3}) == {2, 3}
    assert affine_equivalent({1, 4, 6, 7, 8}, {0, 4, 6, 7, 8}, 11) is None


def brute_connected(S, p):
    S = set(S)
    start = min(S)
    seen, todo = {start}, [start]
    while todo:
        u = todo.pop()
        for w in S:
            if w not in seen and w != u and any((2 * c - u - w) % p == 0 for c in S):
                seen.add(w)
                todo.append(w)
    return seen == S


def test_classify_p11_size5():
    rep = classify_subsets(11, 5)
    assert rep.total_subsets == 462
    # frozen from an independent brute force (brute_connected + orbit minima)
    assert rep.connected_count == sum(brute_connected(S, 11) for S in combinations(range(11), 5)) == 132
    assert [(c.representative, c.size) for c in rep.classes] == [((0, 1, 2, 3, 6), 110), ((0, 1, 2, 4, 7), 22)]
    assert sum(c.size for c in rep.classes) == rep.connected_count
    reps = [c.representative for c in rep.classes]
    assert affine_equivalent(reps[0], {0, 4, 6, 7, 8}, 11)
    assert affine_equivalent(reps[1], {1, 4, 6, 7, 8}, 11)


def test_injective_labelings_count():
    # the p(p-1) count: injective solution vectors, one per labelled copy
    assert injective_labelings({1, 4, 6, 7, 8}, 11) == 110
    assert injective_labelings({0, 4, 6, 7, 8}, 11) == 110


def test_small_sizes_disconnected():
    for k in (2, 3, 4):
        assert classify_subsets(11, k).connected_count == 0


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_lower_bound(p):
    bound = Prime(p).log2_bound()
    for k in range(2, bound):
        assert classify_subsets(p, k).connected_count == 0
    assert classify_subsets(p, bound).connected_count > 0


def test_classify_p3():
    rep = classify_subsets(3, 2)
    assert rep.total_subsets == 3
    assert rep.connected_count == sum(brute_connected(S, 3) for S in combinations(range(3), 2))


def test_classify_bad_size():
    with pytest.raises(PaletteError):
        classify_subsets(11, 1)
    with pytest.raises(PaletteError):
        classify_subsets(11, 12)


def test_affine_iff_isomorphic():
    conn = [S for S in combinations(range(11), 5) if brute_connected(S, 11)]
    reps = [(0, 4, 6, 7, 8), (1, 4, 6, 7, 8)]
    for S in conn:
        for R in reps:
            assert (affine_equivalent(S, R, 11) is None) == (palette_isomorphic(S, R, 11) is None)


@settings(max_examples=60)
@given(st.sets(st.integers(0, 10), min_size=1, max_size=6),
       st.integers(1, 10), st.integers(0, 10))
def test_affine_maps_induce_isomorphisms(S, a, b):
    f = AffineMap(a, b, Prime(11))
    G, H = build_palette_graph(S, 11), build_palette_graph(f.image(S), 11)
    mapped = {tuple(sorted((f(x), f(y)))) + (f(c),) for x, c, y in G.edges}
    assert mapped == {(x, y, c) for x, c, y in H.edges}


def test_families():
    assert palette_family("A", 1, 4) == {1, 4, 6, 7, 8}
    assert palette_family("B", 0, 4) == {0, 4, 6, 7, 8}
    assert palette_family("A", 0, 1) == {0, 1, 2, 6, 9}
    with pytest.raises(PaletteError):
        palette_family("A", 2, 2)


def test_g1():
    checks = g1_consistency()
    assert checks["extra_edges_satisfy_fox_rule"]
    assert checks["full_minus_dropped_equals_g1"]
    # the set printed with 5 in place of 7 does not reproduce the graph
    assert not checks["printed_set_matches"]


def test_family_aliases():
    for a in range(11):
        for b in range(11):
            if a != b:
                assert palette_family("A", a, b) == palette_family("3.2", a, b)
                assert palette_family("b", a, b) == palette_family("6.3", a, b)
    with pytest.raises(PaletteError):
        palette_family("C", 0, 1)
