import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from tensorhoch import casestudies as cs, moncat, tcomplex
from tensorhoch.exactla import GF, cohomology, compose, kernel_dim

F = GF(65521)


# ---------------------------------------------------------------- R_n

def test_rn_leibniz_entry():
    d = cs.rn_differential(2, 2, F)
    words = list(itertools.product(range(2), repeat=3))
    col = list(itertools.product(range(2), repeat=2)).index((0, 1))
    got = {words[r]: v for (r, c), v in d.to_dict().items() if c == col}
    # d(x1 x2) = x1^2 x2 - x1 x2^2
    assert got == {(0, 0, 1): 1, (0, 1, 1): F(-1)}


@given(st.integers(1, 3), st.integers(0, 5))
@settings(max_examples=25, deadline=None)
def test_rn_squares_to_zero(n, d):
    assert compose(cs.rn_differential(n, d + 1, F), cs.rn_differential(n, d, F)).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_rn_acyclic(n):
    dims, flags = cs.rn_cohomology(n, 6)
    assert {d: h for d, h in dims.items() if flags[d] == "ok"} == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0, 5: 0}
    assert flags[6] == "edge"


@pytest.mark.parametrize("n,length", [(0, 3), (4, 3), (2, 11)])
def test_rn_size_bound(n, length):
    with pytest.raises(cs.SizeBound):
        cs.rn_complex(n, length)


# -------------------------------------------------------- quiver rows

@pytest.mark.parametrize("n", [1, 2])
def test_e1_row_shape(n):
    r = cs.quiver_e1_row(n, 4)
    assert r["dims"] == {p: n ** (p + 2) - 1 for p in range(5)}
    assert r["chain_map"] and r["direct_summand"]
    assert all(h == 0 for p, h in r["cohomology"].items() if r["flags"][p] == "ok")


def test_e1_row_bound():
    with pytest.raises(cs.SizeBound):
        cs.quiver_e1_row(2, 6)


@pytest.mark.parametrize("n,p", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_quiver_hh(n, p):
    assert cs.quiver_hh_dims(n, p) == (1, n ** (p + 1) - 1, 0)


def test_quiver_hh_bound():
    with pytest.raises(cs.SizeBound):
        cs.quiver_hh_dims(4, 1)


# -------------------------------------------------------- bar oracle

@pytest.mark.parametrize("name", ["alg:dual", "alg:x3", "vec:2", "kg:2"])
@pytest.mark.parametrize("q", [0, 1, 2])
def test_bar_oracle_equals_engine_row(name, q):
    oracle, engine = cs.bar_row_matrix(moncat.builtin(name)[1], q)
    assert oracle.shape == engine.shape
    assert oracle == engine


def test_bar_kronecker_matches_k_resolution():
    dims, _ = cs.bar_hochschild(cs.path_algebra_kronecker(2), 3)
    assert (dims[0], dims[1]) == cs.quiver_hh_dims(2, 1)[:2] == (1, 3)
    assert dims[2] == 0


def test_bar_kronecker_matches_engine_quotient():
    g = moncat.builtin("quiver:2")[1]
    rep = cohomology(tcomplex.hochschild_quotient(g, tcomplex.Window.total(3)).complex)
    dims, _ = cs.bar_hochschild(cs.path_algebra_kronecker(2), 3)
    assert (rep.dims[0], rep.dims[1]) == (dims[0], dims[1])


def test_semisimple_algebra_hochschild_in_degree_zero():
    g = moncat.builtin("vec:2")[1]
    dims, flags = cs.bar_hochschild(cs.generator_algebra(g), 3)
    assert {n: h for n, h in dims.items() if flags[n] == "ok"} == {0: 2, 1: 0, 2: 0}


def test_dual_numbers_hochschild():
    # HH^0 is the algebra itself, then one dimension per degree away from characteristic 2
    g = moncat.builtin("alg:dual")[1]
    dims, flags = cs.bar_hochschild(cs.generator_algebra(g), 4)
    assert {n: h for n, h in dims.items() if flags[n] == "ok"} == {0: 2, 1: 1, 2: 1, 3: 1}


# --------------------------------------------------------------- HKR

@pytest.mark.parametrize("p", range(4))
def test_hkr_q1_formula(p):
    d = cs.hkr_differential(1, p, 1, F)
    src = cs._hkr_basis(1, p, 1)
    tgt = {b: k for k, b in enumerate(cs._hkr_basis(1, p + 1, 1))}
    for i in range(p + 1):
        want = {}
        if i % 2:
            want[tgt[((i + 1, 0),)]] = 1
        if (p - i) % 2:
            want[tgt[((i, 0),)]] = F((-1) ** p)
        col = src.index(((i, 0),))
        got = {r: v for (r, c), v in d.to_dict().items() if c == col}
        assert got == want


@pytest.mark.parametrize("dimV,want", [(1, 1), (2, 3)])
def test_hkr_small_cell(dimV, want):
    E2, flags = cs.hkr_layer(dimV, 2)
    assert flags[(1, 2)] == "ok" and E2[(1, 2)] == want


@pytest.mark.parametrize("dimV", [1, 2])
def test_hkr_layer_concentrated(dimV):
    E2, flags = cs.hkr_layer(dimV, 3)
    for (p, q), v in E2.items():
        if flags[(p, q)] == "ok":
            assert v == cs.hkr_expected(dimV, p, q)


def test_hkr_bound():
    with pytest.raises(cs.SizeBound):
        cs.hkr_layer(3, 1)


# ------------------------------------------------------ GS bicomplex

def test_trivial_bialgebra():
    dims, flags = cs.gs_cohomology(cs.trivial_bialgebra(), 3)
    assert {n: h for n, h in dims.items() if flags[n] == "ok"} == {0: 1, 1: 0, 2: 0}


@pytest.mark.parametrize("order", [2, 3])
def test_group_bialgebra_bicomplex(order):
    B = cs.group_bialgebra(moncat.cyclic_group(order))
    gs = cs.GSBicomplex(B, 3)
    gs.check()
    dims, flags = cs._dims_of(gs.total())
    # semisimple and cosemisimple: only the constants survive
    assert {n: h for n, h in dims.items() if flags[n] == "ok"} == {0: 1, 1: 0, 2: 0}


def test_non_multiplicative_coproduct_is_caught():
    B = cs.group_bialgebra(moncat.cyclic_group(2))
    B.comult = {0: {(0, 0): 1}, 1: {(1, 0): 1, (0, 1): 1}}
    with pytest.raises(cs.BicomplexViolation):
        cs.GSBicomplex(B, 4).check()


def test_gs_compare_z2(signs):
    r = cs.gs_compare(moncat.cyclic_group(2), 1, signs=signs)
    assert r["ok"]
    assert [(row["n"], row["UTH"]) for row in r["rows"] if row["trusted"]] == [(-1, 1), (0, 0), (1, 0)]


# ------------------------------------------------- pointed categories

@pytest.mark.parametrize("order", [2, 3])
@pytest.mark.parametrize("p", [0, 1, 2])
def test_naturality_kernel_matches_engine(order, p):
    g = moncat.builtin(f"vec:{order}")[1]
    got = cs.naturality_kernel_dim(moncat.cyclic_group(order), p)
    assert got == order ** (p + 1) == kernel_dim(tcomplex.assemble_d0(p, 0, g))


def test_pointed_z2_small(signs):
    r = cs.pointed_dy_vs_th(moncat.cyclic_group(2), signs=signs, degmax=2)
    assert r["ok"] and r["chain_map"]


def test_pointed_bound():
    with pytest.raises(cs.SizeBound):
        cs.pointed_dy_vs_th(moncat.cyclic_group(4))


# ------------------------------------------------- low-degree formulas

def test_example_formulas_nontrivial_on_z3(signs):
    g = moncat.builtin("vec:3:omega")[1]
    r = cs.compare_examples(g, signs)
    assert set(r) == {"a", "b", "c", "d"}
    for name, v in r.items():
        assert v["equal"], name
        assert v["nnz_oracle"] > 0


def test_example_formulas_detect_sign_flip(signs):
    g = moncat.builtin("vec:3:omega")[1]
    path = tcomplex._anchor_path(3, 0, ("v0", "v1", "v4"))
    k = tcomplex.SignConvention.key(3, 3, 0, 0, path)
    bad = signs.with_entries({k: -signs.sign(3, 3, 0, 0, path)})
    r = cs.compare_examples(g, bad)
    assert not r["d"]["equal"]
    assert r["a"]["equal"] and r["b"]["equal"] and r["c"]["equal"]


# --------------------------------------------------------- registry

def test_study_reports_are_json():
    rep = cs.run_study("rn", n=1, max_word_len=5)
    assert rep["pass"] and set(rep) >= {"study", "parameters", "expected", "expected_from", "computed", "pass"}
    json.dumps(rep)


def test_unknown_study():
    with pytest.raises(KeyError):
        cs.run_study("nope")
