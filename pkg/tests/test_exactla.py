from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.polys.matrices import DomainMatrix

from tensorhoch import exactla
from tensorhoch.exactla import GF, QQ, GradedComplex, SparseMatrix

P = 65521
F = GF(P)
SMALL = GF(7)


def dense_strategy(max_n=7, lo=-3, hi=3):
    shape = st.tuples(st.integers(1, max_n), st.integers(1, max_n))
    return shape.flatmap(lambda s: st.lists(st.lists(st.integers(lo, hi), min_size=s[1], max_size=s[1]),
                                            min_size=s[0], max_size=s[0]))


def sympy_rank_mod(rows, p):
    return DomainMatrix([[sympy.GF(p)(x) for x in r] for r in rows], (len(rows), len(rows[0])), sympy.GF(p)).rank()


@given(dense_strategy())
def test_rank_matches_sympy_mod_p(rows):
    for field in (F, SMALL):
        m = SparseMatrix.from_dense(rows, field)
        assert exactla.rank(m) == sympy_rank_mod(rows, field.p)


@given(dense_strategy())
def test_rank_matches_sympy_over_q(rows):
    m = SparseMatrix.from_dense(rows, QQ)
    assert exactla.rank(m) == sympy.Matrix(rows).rank()


@given(dense_strategy())
def test_rank_nullity(rows):
    m = SparseMatrix.from_dense(rows, F)
    K, free = exactla.kernel_basis(m)
    assert K.shape == (m.shape[1], exactla.kernel_dim(m))
    assert exactla.rank(m) + len(free) == m.shape[1]
    assert exactla.compose(m, K).is_zero()
    assert exactla.rank(K) == K.shape[1]


@given(dense_strategy(6, 0, 6), dense_strategy(6, 0, 6))
def test_compose_matches_dense(a, b):
    inner = min(len(a[0]), len(b))
    a = [r[:inner] for r in a]
    b = b[:inner]
    ma, mb = SparseMatrix.from_dense(a, SMALL), SparseMatrix.from_dense(b, SMALL)
    want = (np.array(a, dtype=np.int64) @ np.array(b, dtype=np.int64)) % 7
    assert np.array_equal(np.array(exactla.compose(ma, mb).to_dense(), dtype=np.int64), want)
    assert exactla.compose(ma, mb) == ma @ mb


@given(dense_strategy(5))
def test_compose_over_q(a):
    m = SparseMatrix.from_dense(a, QQ)
    got = exactla.compose(m.transpose(), m)
    want = sympy.Matrix(a).T * sympy.Matrix(a)
    assert [[Fraction(x) for x in r] for r in got.to_dense()] == [[Fraction(int(x)) for x in want.row(i)]
                                                                    for i in range(want.rows)]


def test_compose_shape_mismatch():
    with pytest.raises(exactla.ShapeMismatch):
        exactla.compose(SparseMatrix.zeros((2, 3), F), SparseMatrix.zeros((2, 3), F))


@given(dense_strategy(5), st.data())
@settings(max_examples=50)
def test_solve_columns(rows, data):
    a = SparseMatrix.from_dense(rows, F)
    x = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2),
                           min_size=a.shape[1], max_size=a.shape[1]))
    b = a @ SparseMatrix.from_dense(x, F)
    sol = exactla.solve_columns(a, b)
    assert a @ sol == b


def test_solve_columns_inconsistent():
    a = SparseMatrix.from_dense([[1, 0], [0, 0]], F)
    b = SparseMatrix.from_dense([[0], [1]], F)
    with pytest.raises(ValueError):
        exactla.solve_columns(a, b)


def test_from_coo_adds_repeats_and_drops_zeros():
    m = SparseMatrix.from_coo((2, 2), F, np.array([0, 0, 1]), np.array([1, 1, 0]), np.array([3, P - 3, 5]))
    assert m.to_dict() == {(1, 0): 5}


@pytest.mark.parametrize("p", [0, 1, 4, 65520, 2 ** 31 + 11])
def test_field_rejects_non_primes(p):
    with pytest.raises(ValueError):
        GF(p)


@pytest.mark.parametrize("tag,want", [("q", QQ), ("Q", QQ), ("fp:7", GF(7)), ("Fp", F)])
def test_parse_field(tag, want):
    assert exactla.parse_field(tag) == want


def test_parse_field_bad():
    with pytest.raises(ValueError):
        exactla.parse_field("gf7")


def test_field_coercion():
    assert F(Fraction(1, 2)) == pow(2, -1, P)
    assert F.mul(F.inv(3), 3) == 1
    assert QQ.inv(3) == Fraction(1, 3)


@pytest.mark.parametrize("order", [1, 2, 3, 4, 5, 8])
def test_roots_of_unity(order):
    z = F.root_of_unity(order)
    assert pow(z, order, P) == 1
    assert all(pow(z, k, P) != 1 for k in range(1, order))


def test_root_of_unity_missing():
    with pytest.raises(ValueError):
        GF(7).root_of_unity(4)
    with pytest.raises(ValueError):
        QQ.root_of_unity(3)


def simplex_boundary(field):
    # cochains of the boundary of a triangle: vertices -> edges
    d0 = SparseMatrix.from_dense([[-1, 1, 0], [0, -1, 1], [-1, 0, 1]], field)
    return GradedComplex(field, {0: 3, 1: 3}, {0: d0})


@pytest.mark.parametrize("field", [F, QQ])
def test_circle_cohomology(field):
    rep = exactla.cohomology(simplex_boundary(field))
    assert rep.dims == {0: 1, 1: 1}
    assert rep.trusted_dims() == {0: 1, 1: 1}
    assert rep.to_json()["cohomology"][0] == {"degree": 0, "dim": 1, "flag": "ok"}


def test_edge_degrees_flagged():
    c = simplex_boundary(F)
    c.trusted = {0}
    rep = exactla.cohomology(c)
    assert rep.flags == {0: "ok", 1: "edge"}
    assert rep.trusted_dims() == {0: 1}


def test_non_complex_detected():
    one = SparseMatrix.identity(1, F)
    c = GradedComplex(F, {0: 1, 1: 1, 2: 1}, {0: one, 1: one})
    with pytest.raises(exactla.NonComplex):
        exactla.cohomology(c)


def test_shape_mismatch_detected():
    c = GradedComplex(F, {0: 2, 1: 1}, {0: SparseMatrix.identity(2, F)})
    with pytest.raises(exactla.ShapeMismatch):
        c.check_shapes()


@pytest.mark.parametrize("field", [F, QQ])
def test_matrix_file_roundtrip(tmp_path, field):
    m = SparseMatrix.from_dict((3, 4), field, {(0, 1): field(Fraction(-5, 3)), (2, 3): field(7)})
    exactla.write_matrix(tmp_path / "m.thmx", m)
    assert exactla.read_matrix(tmp_path / "m.thmx") == m


def test_read_matrix_rejects_junk(tmp_path):
    (tmp_path / "x").write_bytes(b"nope" * 20)
    with pytest.raises(ValueError):
        exactla.read_matrix(tmp_path / "x")


def test_matrix_cache_hits(tmp_path):
    cache = exactla.MatrixCache(tmp_path, threshold=1)
    calls = []

    def build():
        calls.append(1)
        return SparseMatrix.identity(3, F)

    a = cache.get_or_build({"k": 1}, build)
    b = cache.get_or_build({"k": 1}, build)
    assert a == b and len(calls) == 1 and cache.hits == 1 and cache.misses == 1


def test_cache_gc_keeps_sign_files(tmp_path):
    (tmp_path / "signs-abc.json").write_text("{}" * 100)
    for k in range(3):
        exactla.write_matrix(tmp_path / f"mat-{k}.thmx", SparseMatrix.identity(50, F))
    out = exactla.cache_gc(tmp_path, 0)
    assert len(out["evicted"]) == 3
    assert [f.name for f in tmp_path.iterdir()] == ["signs-abc.json"]


def test_content_hash_is_order_free():
    assert exactla.content_hash({"a": 1, "b": 2}) == exactla.content_hash({"b": 2, "a": 1})
