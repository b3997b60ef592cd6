import json

import pytest

from tensorhoch import moncat, tcomplex
from tensorhoch.exactla import cohomology, compose, kernel_dim, rank
from tensorhoch.tcomplex import SignConvention, Window


def gen(name):
    return moncat.builtin(name)[1]


def test_window_cells_and_trust():
    w = Window.total(3)
    assert (1, 2) in w and (2, 2) not in w and (-1, 0) not in w
    assert len(w.cells()) == 10
    assert w.trusted(2) and not w.trusted(3)
    narrow = Window(1, 5, 5)
    assert narrow.trusted(0) and not narrow.trusted(1)


@pytest.mark.parametrize("name", ["vec:2", "vec:3:omega", "kg:2", "alg:dual", "alg:x3"])
@pytest.mark.parametrize("p,q", [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (2, 1)])
def test_closed_form_dims(name, p, q):
    g = gen(name)
    assert tcomplex.cochain_space(p, q, g).dim == tcomplex.closed_form_dim(g, p, q)


def test_closed_form_needs_one_member():
    with pytest.raises(ValueError):
        tcomplex.closed_form_dim(gen("quiver:2"), 0, 0)


def test_space_limit():
    A = tcomplex.Assembler(gen("vec:3"), limit=10)
    with pytest.raises(tcomplex.WindowExceeded):
        A.space(2, 2)


@pytest.mark.parametrize("name", ["vec:2:omega", "quiver:2", "kg:2", "alg:x3"])
@pytest.mark.parametrize("p,q", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_low_anticommutation(name, p, q):
    g = gen(name)
    d0, d1 = tcomplex.assemble_d0, tcomplex.assemble_d1
    assert compose(d0(p, q + 1, g), d0(p, q, g)).is_zero()
    assert (compose(d1(p, q + 1, g), d0(p, q, g)) + compose(d0(p + 1, q, g), d1(p, q, g))).is_zero()


@pytest.mark.parametrize("name", ["vec:2", "vec:3", "quiver:1", "alg:dual", "alg:x3"])
@pytest.mark.parametrize("i,p,q", [(2, 2, 0), (2, 2, 1), (2, 3, 0), (3, 3, 0)])
def test_strict_higher_differentials_vanish(name, i, p, q, signs):
    assert tcomplex.assemble_di(i, p, q, gen(name), signs).is_zero()


@pytest.mark.parametrize("name", ["vec:2:omega", "vec:3:omega"])
def test_nonstrict_second_differential_present(name, signs):
    assert not tcomplex.assemble_di(2, 2, 0, gen(name), signs).is_zero()


def test_di_below_range_is_empty(signs):
    m = tcomplex.assemble_di(3, 2, 0, gen("vec:2"), signs)
    assert m.shape[1] == 0


def test_resolved_signs_meet_anchors(signs):
    assert tcomplex.anchors_hold(signs)
    assert signs.sign(1 + 1, 2, 0, 0, tcomplex._anchor_path(2, 0, ("H",))) == 1


def flipped(signs, verts=("v0", "v1", "v4")):
    path = tcomplex._anchor_path(3, 0, verts)
    k = SignConvention.key(3, 3, 0, 0, path)
    return signs.with_entries({k: -signs.sign(3, 3, 0, 0, path)}, source="flipped")


def test_flipping_a_pentagon_sign_breaks_d_squared(signs):
    g = gen("vec:3:omega")
    assert tcomplex.verify_d_squared(g, Window.total(3), signs).zero
    bad = flipped(signs)
    assert not tcomplex.anchors_hold(bad)
    rep = tcomplex.verify_d_squared(g, Window.total(3), bad)
    assert not rep.zero
    assert rep.max_nonzero_entry["component"] == 3


def test_sign_convention_roundtrip(signs, tmp_path):
    again = SignConvention.from_json(json.loads(json.dumps(signs.to_json())))
    assert again.hash == signs.hash
    signs.save(tmp_path / "s.json")
    loaded = SignConvention.load(tmp_path / "s.json")
    assert loaded.hash == signs.hash
    assert flipped(signs).hash != signs.hash


def test_sign_convention_rejects_other_json():
    with pytest.raises(ValueError):
        SignConvention.from_json({"kind": "something-else"})


def test_resolve_signs_uses_cache(tmp_path, signs):
    first = tcomplex.resolve_signs(cache_dir=str(tmp_path))
    files = sorted(p.name for p in tmp_path.iterdir())
    assert len(files) == 1 and files[0].startswith("signs-")
    second = tcomplex.resolve_signs(cache_dir=str(tmp_path))
    assert first.hash == second.hash == signs.hash


@pytest.mark.parametrize("name", ["alg:k", "alg:dual", "vec:2"])
def test_d_squared_small(name, signs):
    rep = tcomplex.verify_d_squared(gen(name), Window.total(3), signs)
    assert rep.zero and rep.checks
    assert rep.to_json()["zero"]


@pytest.mark.parametrize("name", ["vec:2", "quiver:2"])
def test_dy_inclusion_is_chain_map(name, signs):
    g = gen(name)
    w = Window.total(3)
    comp, tc = tcomplex.dy_subcomplex(g, w, signs)
    assert comp.is_chain_map(tc)


@pytest.mark.parametrize("name", ["vec:2", "quiver:2", "alg:x3"])
def test_hochschild_projection_is_chain_map(name, signs):
    g = gen(name)
    w = Window.total(3)
    tc = tcomplex.total_complex(g, w, signs)
    assert tcomplex.hochschild_quotient(g, w).is_chain_map(tc)


def test_quiver_hochschild_row():
    rep = cohomology(tcomplex.hochschild_quotient(gen("quiver:2"), Window.total(3)).complex)
    assert {n: rep.dims[n] for n in (0, 1)} == {0: 1, 1: 3}


def test_semisimple_e1_in_bottom_row(signs):
    pages = tcomplex.spectral_sequence_F(gen("vec:2"), Window(3, 2, 4), signs)
    e1 = pages.trusted(page=1)
    assert e1 and all(v == 0 for (p, q), v in e1.items() if q > 0)
    # bottom-row E1 is the naturality kernel of the group, |G|^(p+1)
    assert [e1[(p, 0)] for p in range(3)] == [2, 4, 8]


def test_semisimple_e2_matches_total(signs):
    g = gen("vec:2")
    w = Window.total(3)
    th = cohomology(tcomplex.total_complex(g, w, signs)).trusted_dims()
    pages = tcomplex.spectral_sequence_F(g, Window(3, 2, 4), signs)
    for n, h in th.items():
        t = pages.total(n)
        if t is not None:
            assert t == h


def test_unital_column_on_ground_field(signs):
    res = tcomplex.unital_extend(gen("alg:k"), Window.total(3), signs)
    assert res.ok and res.column_dim == 1
    assert cohomology(res.complex).trusted_dims() == {-1: 1, 0: 0, 1: 0, 2: 0}


def test_unital_requires_unit(signs):
    with pytest.raises(tcomplex.NoUnit):
        tcomplex.unital_extend(gen("quiver:1"), Window.total(2), signs)


def test_unit_column_d0_alternates():
    A = tcomplex.Assembler(gen("alg:dual"))
    assert tcomplex.unit_column_d0(A, 0).is_zero()
    assert rank(tcomplex.unit_column_d0(A, 1)) == 2


def test_f_subcomplex_is_subcomplex(signs):
    g = gen("vec:2")
    f1 = tcomplex.f_subcomplex(g, Window.total(3), signs, 1)
    f1.check_d_squared()
    assert f1.dims[0] == 0 and f1.dims[1] > 0


def test_report_is_deterministic(signs):
    g = gen("alg:dual")
    a = tcomplex.cohomology_report(g, Window.total(2), signs)
    b = tcomplex.cohomology_report(gen("alg:dual"), Window.total(2), signs)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert set(a) >= {"presentation", "field", "window", "signs", "cells", "cohomology"}


def test_cached_components_match(tmp_path, signs):
    from tensorhoch.exactla import MatrixCache
    g = gen("vec:2:omega")
    A = tcomplex.Assembler(g)
    cache = MatrixCache(tmp_path, threshold=1)
    m1 = tcomplex.cached_component(A, 2, 0, 1, signs, cache)
    m2 = tcomplex.cached_component(tcomplex.Assembler(gen("vec:2:omega")), 2, 0, 1, signs, cache)
    assert m1 == m2 and cache.hits == 1


def test_naturality_kernel_matches_bottom_row():
    g = gen("vec:3")
    assert [kernel_dim(tcomplex.assemble_d0(p, 0, g)) for p in range(3)] == [3, 9, 27]


def test_filtration_long_exact_sequence(signs):
    # 0 -> F_1 -> TC -> (p = 0 row) -> 0; with TH^0 = TH^1 = TH^2 = 0 the connecting maps are isomorphisms
    g = gen("quiver:2")
    w = Window.total(3)
    th = cohomology(tcomplex.total_complex(g, w, signs)).trusted_dims()
    f1 = cohomology(tcomplex.f_subcomplex(g, w, signs, 1))
    hh = cohomology(tcomplex.hochschild_quotient(g, w).complex)
    assert th == {0: 0, 1: 0, 2: 0}
    assert (f1.dims[1], f1.dims[2]) == (hh.dims[0], hh.dims[1]) == (1, 3)
