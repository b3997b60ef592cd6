from math import comb

import pytest
from hypothesis import given, strategies as st

from tensorhoch import aposet
from tensorhoch.aposet import LEAF


def catalan(n):
    return comb(2 * n, n) // (n + 1)


trees = st.recursive(st.just(LEAF), lambda inner: st.tuples(inner, inner), max_leaves=9)


@given(trees)
def test_serialize_roundtrip(t):
    assert aposet.parse(aposet.serialize(t)) == t


@pytest.mark.parametrize("bad", ["", "(.", "(..", "(..).", "x", "(.x)"])
def test_parse_rejects(bad):
    with pytest.raises((ValueError, IndexError)):
        aposet.parse(bad)


@pytest.mark.parametrize("n", range(1, 8))
def test_tree_counts_are_catalan(n):
    assert len(aposet.all_trees(n)) == catalan(n - 1)
    assert all(aposet.n_leaves(t) == n for t in aposet.all_trees(n))


@given(trees)
def test_rotations_keep_leaves(t):
    for u in aposet.rotations(t):
        assert aposet.n_leaves(u) == aposet.n_leaves(t)
        off, (a, b, c) = aposet.rotation_site(t, u)
        assert 0 <= off < aposet.n_leaves(t)


@pytest.mark.parametrize("n", range(0, 5))
def test_associahedron_shape(n):
    a = aposet.associahedron(n)
    assert len(a.vertices) == catalan(n + 1)
    # simple polytope: every vertex has n neighbours
    assert len(a.edges) * 2 == n * len(a.vertices)
    assert a.source == aposet.serialize(aposet.left_comb(n + 2))
    assert a.terminal == aposet.serialize(aposet.right_comb(n + 2))


@pytest.mark.parametrize("n", range(1, 5))
def test_paths_are_chains_into_the_terminal(n):
    a = aposet.associahedron(n)
    assert a.paths
    for p in a.paths:
        assert len(p.vertices) == n + 1
        assert p.vertices[-1] == a.terminal
        assert all(a.less(u, v) for u, v in p.steps)


def test_pentagon_paths():
    got = {p.vertices for p in aposet.associahedron(2).paths}
    assert got == {("(((..).).)", "((..)(..))", "(.(.(..)))"),
                   ("((.(..)).)", "(.((..).))", "(.(.(..)))"),
                   ("(((..).).)", "((.(..)).)", "(.(.(..)))")}


@pytest.mark.parametrize("n", range(1, 5))
def test_facet_count(n):
    assert len(aposet.facets(aposet.associahedron(n))) == n * (n + 3) // 2


def test_facets_reject_non_associahedron():
    with pytest.raises(ValueError):
        aposet.facets(aposet.simplex_aposet(2))


@pytest.mark.parametrize("m,n", [(0, 3), (1, 1), (2, 2), (3, 1)])
def test_shuffles_binomial(m, n):
    paths = aposet.shuffle_paths(tuple(range(m + 1)), tuple(range(n + 1)))
    assert len(paths) == comb(m + n, m)
    assert len({p.vertices for p in paths}) == len(paths)
    assert all(p.tags.count("H") == m for p in paths)


def test_product_of_simplices():
    a, b = aposet.simplex_aposet(2), aposet.simplex_aposet(1)
    pr = aposet.product(a, b)
    assert len(pr.vertices) == 6 and pr.dimension == 3
    assert len(pr.paths) == comb(3, 2)
    assert pr.source == (0, 0) and pr.terminal == (2, 1)


def test_rotation_path_endpoints():
    s, t = aposet.left_comb(5), aposet.right_comb(5)
    path = aposet.rotation_path(s, t)
    assert path[0] == s and path[-1] == t
    assert len(path) - 1 == 3  # one root rotation per leaf after the first two
    for x, y in zip(path, path[1:]):
        assert y in aposet.rotations(x)


def test_rotation_path_rejects_downward():
    with pytest.raises(ValueError):
        aposet.rotation_path(aposet.right_comb(4), aposet.left_comb(4))


@given(trees.filter(lambda t: t != LEAF), st.data())
def test_contract_substitute_inverse(t, data):
    start, length = data.draw(st.sampled_from(aposet.subtree_blocks(t)))
    outer, inner = aposet.contract(t, start, length)
    assert aposet.substitute(outer, start, inner) == t


def test_vertex_deletions():
    dels = aposet.vertex_deletions((1, 2, 3))
    assert [d.vertices for d in dels] == [(2, 3), (1, 3), (1, 2)]
    with pytest.raises(ValueError):
        aposet.vertex_deletions((1,))


@pytest.mark.parametrize("n", range(1, 5))
def test_path_signs_fix_canonical_path(n):
    s = aposet.path_signs(n)
    assert s[aposet.canonical_path(n)] == 1
    assert set(s.values()) <= {1, -1}


@pytest.mark.parametrize("n", range(1, 5))
def test_boundary_lemma_default_signs(n):
    r = aposet.boundary_lemma_check(n)
    assert r.holds_mod2 and r.holds_signed and r.mismatch_witness is None


def test_boundary_lemma_detects_bad_sign():
    s = dict(aposet.path_signs(2))
    p = next(iter(s))
    s[p] = -s[p]
    r = aposet.boundary_lemma_check(2, s)
    assert r.holds_mod2 and not r.holds_signed


def test_boundary_lemma_range():
    with pytest.raises(ValueError):
        aposet.boundary_lemma_check(6)


def test_aposet_json():
    js = aposet.associahedron(1).to_json()
    assert js["dimension"] == 1 and len(js["vertices"]) == 2
