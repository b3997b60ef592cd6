import json
import itertools

import pytest

from tensorhoch import moncat
from tensorhoch.moncat import BUILTINS


@pytest.mark.parametrize("name", BUILTINS)
def test_builtins_validate(name):
    P, g = moncat.builtin(name)
    moncat.validate(P)
    assert P.validated


@pytest.mark.parametrize("name,strict", [("vec:2", True), ("vec:3", True), ("vec:2:omega", False),
                                         ("vec:3:omega", False), ("quiver:1", True), ("quiver:2", False),
                                         ("kg:2", False), ("alg:k", True), ("alg:dual", True), ("alg:x3", True)])
def test_strictness(name, strict):
    assert moncat.builtin(name)[0].is_strict() is strict


@pytest.mark.parametrize("bad", ["vec", "vec:4:omega", "mystery:1", "alg:x9"])
def test_unknown_builtins(bad):
    with pytest.raises((ValueError, KeyError, IndexError)):
        moncat.builtin(bad)


def test_non_cocycle_rejected():
    P = moncat.vec_g_omega(moncat.cyclic_group(2), lambda a, b, c: -1 if (a, b, c) == (1, 1, 0) else 1)
    with pytest.raises(moncat.ValidationFailure) as info:
        moncat.validate(P)
    assert info.value.axiom


def test_zero_omega_rejected():
    with pytest.raises(ValueError):
        moncat.vec_g_omega(moncat.cyclic_group(2), lambda a, b, c: 0)


def test_z3_cocycle_is_a_cocycle():
    F = moncat.GF(moncat.DEFAULT_PRIME)
    om = moncat.omega_z3(F)
    vals = {om(a, b, c) for a, b, c in itertools.product(range(3), repeat=3)}
    assert len(vals) > 1
    moncat.validate(moncat.vec_g_omega(moncat.cyclic_group(3), om, F))


@pytest.mark.parametrize("name", ["vec:2:omega", "quiver:2", "kg:2", "alg:x3"])
def test_json_roundtrip(name):
    P, _ = moncat.builtin(name)
    blob = json.dumps(P.to_json(), sort_keys=True)
    Q = moncat.MonoidalPresentation.from_json(json.loads(blob))
    assert Q.hash == P.hash
    moncat.validate(Q)
    assert Q.is_strict() == P.is_strict()


def test_hash_is_deterministic():
    assert moncat.builtin("quiver:2")[0].hash == moncat.builtin("quiver:2")[0].hash
    assert moncat.builtin("quiver:2")[0].hash != moncat.builtin("quiver:1")[0].hash


@pytest.mark.parametrize("n", [1, 2, 3])
def test_quiver_hom_dims(n):
    P = moncat.quiver_proj(n)
    assert P.hom_dim("e2", "e1") == n
    assert P.hom_dim("e1", "e2") == 0
    assert P.hom_dim("e1", "e1") == P.hom_dim("e2", "e2") == 1


@pytest.mark.parametrize("name,copies", [("vec:2", 2), ("vec:3", 3), ("kg:2", 2), ("alg:dual", 1)])
def test_generator_square_splits(name, copies):
    _, g = moncat.builtin(name)
    obj, cps = g.copies((0, 0))
    assert len(cps) == copies
    assert all(m == 0 for m, _ in cps)


@pytest.mark.parametrize("name", BUILTINS)
def test_endomorphism_index_zero_is_identity(name):
    _, g = moncat.builtin(name)
    for a in range(len(g.members)):
        assert g.is_identity(a, a, 0)
        assert not any(g.is_identity(a, a, k) for k in range(1, g.hom_dim(a, a)))


@pytest.mark.parametrize("name", ["vec:2", "kg:2", "quiver:2"])
def test_inclusions_split_projections(name):
    _, g = moncat.builtin(name)
    env = g.env
    expr = (0, 0)
    for i, (m, _) in enumerate(g.copies(expr)[1]):
        for j, (m2, _) in enumerate(g.copies(expr)[1]):
            pij = env.compose(g.projection(expr, j), g.inclusion(expr, i))
            if i == j:
                assert env.equal(pij, env.identity(g.members[m]))
            else:
                assert env.equal(pij, env.zero(g.members[m], g.members[m2]))


@pytest.mark.parametrize("name", ["vec:3:omega", "quiver:2", "kg:2"])
def test_associator_inverse(name):
    P, g = moncat.builtin(name)
    env = g.env
    for U, V, W in itertools.product([(o,) for o in P.objects], repeat=3):
        a = env.associator(U, V, W)
        b = env.associator(U, V, W, inverse=True)
        assert env.equal(env.compose(b, a), env.identity(env.otimes(env.otimes(U, V), W)))


def test_truncated_polynomial_products():
    P = moncat.truncated_polynomial(3)
    assert P.compose[("I", "I", "I")][(1, 1)] == {2: 1}
    assert P.compose[("I", "I", "I")][(1, 2)] == {}


def test_end_dims():
    _, g = moncat.builtin("vec:2")
    # End(X^{(x)k}) for X = g0 + g1 is 2^k copies of each simple, so dim 2 * (2^(k-1))^2
    assert [g.end_dim(k) for k in (1, 2, 3)] == [2, 8, 32]
