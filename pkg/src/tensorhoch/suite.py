"""The acceptance checks, shared by the ``suite`` command and the test-suite.

Each check returns ``{"id", "title", "pass", "detail"}``.  Expected values
are written out literally; nothing here is tuned to what the engine returns.
"""

from __future__ import annotations

import time
from math import comb

from . import aposet, casestudies as cs, moncat, tcomplex
from .exactla import cohomology

CHECKS = []


def check(cid, title):
    def deco(fn):
        fn.cid, fn.title = cid, title
        CHECKS.append(fn)
        return fn
    return deco


_SIGNS = {}


def signs():
    if "s" not in _SIGNS:
        _SIGNS["s"] = tcomplex.resolve_signs()
    return _SIGNS["s"]


def catalan(n):
    return comb(2 * n, n) // (n + 1)


@check(1, "associahedron paths, Catalan counts, boundary lemma")
def c1():
    pent = {tuple(tcomplex.PENTAGON[v] for v in verts)
            for verts in (("v0", "v1", "v4"), ("v2", "v3", "v4"), ("v0", "v2", "v4"))}
    got = {p.vertices for p in aposet.associahedron(2).paths}
    counts = {n: len(aposet.associahedron(n).vertices) for n in range(5)}
    mod2 = {n: aposet.boundary_lemma_check(n, signs()).holds_mod2 for n in range(1, 5)}
    signed = {n: aposet.boundary_lemma_check(n, signs()).holds_signed for n in range(1, 4)}
    ok = (got == pent and all(counts[n] == catalan(n + 1) for n in counts)
          and all(mod2.values()) and all(signed.values()))
    return ok, {"pentagon_paths": len(got), "vertex_counts": counts, "mod2": mod2, "signed": signed}


@check(2, "d^2 = 0 on every built-in window")
def c2():
    runs = []
    for name in moncat.BUILTINS:
        P, g = moncat.builtin(name)
        if P.is_strict():
            runs.append((name, tcomplex.Window.total(4)))
    runs += [("vec:2:omega", tcomplex.Window.total(4)), ("vec:3:omega", tcomplex.Window.total(4)),
             ("quiver:2", tcomplex.Window.total(3))]
    detail = {}
    for name, w in runs:
        P, g = moncat.builtin(name)
        rep = tcomplex.verify_d_squared(g, w, signs())
        detail[f"{name}@{w.n_max}"] = {"zero": rep.zero, "blocks": len(rep.checks)}
    return all(v["zero"] for v in detail.values()), detail


@check(3, "low-degree formulas (a)-(d) entrywise on Vec_Z2 with nontrivial omega")
def c3():
    P, g = moncat.builtin("vec:2:omega")
    r = cs.compare_examples(g, signs())
    return all(v["equal"] for v in r.values()), r


@check(4, "Kronecker quiver HH dims")
def c4():
    cases = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 2)]
    got = {f"{n},{p}": cs.quiver_hh_dims(n, p) for n, p in cases}
    want = {f"{n},{p}": (1, n ** (p + 1) - 1, 0) for n, p in cases}
    return got == want, {k: {"computed": list(got[k]), "expected": list(want[k])} for k in got}


@check(5, "quiver vanishing, E1 rows, E1 row acyclicity")
def c5():
    detail, ok = {}, True
    for n in (1, 2):
        P, g = moncat.builtin(f"quiver:{n}")
        tc = tcomplex.total_complex(g, tcomplex.Window.total(3), signs())
        th = cohomology(tc).trusted_dims()
        pages = tcomplex.spectral_sequence_F(g, tcomplex.Window(3, 2, 4), signs())
        e1 = pages.trusted(page=1)
        rows = {p: (e1.get((p, 0)), e1.get((p, 1))) for p in range(3)}
        row = cs.quiver_e1_row(n, 5)
        interior = {p: h for p, h in row["cohomology"].items() if row["flags"][p] == "ok"}
        ok &= all(v == 0 for v in th.values())
        ok &= all(rows[p] == (1, n ** (p + 2) - 1) for p in rows)
        ok &= max(interior) >= 4 and all(h == 0 for h in interior.values())
        detail[f"quiver:{n}"] = {"TH": th, "E1": {p: list(r) for p, r in rows.items()}, "e1row": interior}
    return ok, detail


@check(6, "Q2 filtration: H^1(F_1) = 0 and H^2(F_1) = 3")
def c6():
    P, g = moncat.builtin("quiver:2")
    f1 = tcomplex.f_subcomplex(g, tcomplex.Window.total(3), signs(), 1)
    rep = cohomology(f1)
    got = {n: rep.dims[n] for n in (1, 2) if rep.flags[n] == "ok"}
    return got == {1: 0, 2: 3}, {"computed": got, "expected": {1: 0, 2: 3}}


@check(7, "R_n is acyclic above degree 0")
def c7():
    detail, ok = {}, True
    for n in (1, 2):
        dims, flags = cs.rn_cohomology(n, 8)
        want = {d: (1 if d == 0 else 0) for d in range(8)}
        got = {d: dims[d] for d in range(8) if flags[d] == "ok"}
        ok &= got == want
        detail[n] = got
    return ok, detail


@check(8, "HKR layer E2")
def c8():
    detail, ok = {}, True
    for dimV in (1, 2):
        E2, flags = cs.hkr_layer(dimV, 3)
        bad = {f"{p},{q}": v for (p, q), v in E2.items()
               if flags[(p, q)] == "ok" and v != cs.hkr_expected(dimV, p, q)}
        ok &= not bad
        detail[dimV] = {"mismatches": bad, "E2(2,3)": E2[(2, 3)]}
    ok &= detail[2]["E2(2,3)"] == 4
    return ok, detail


@check(9, "semisimple DY = TH")
def c9():
    cases = [("Z2", moncat.cyclic_group(2), None), ("Z2 omega", moncat.cyclic_group(2), moncat.omega_z2_sign),
             ("Z3", moncat.cyclic_group(3), None)]
    detail, ok = {}, True
    for name, table, om in cases:
        r = cs.pointed_dy_vs_th(table, om, signs=signs())
        ok &= r["ok"] and r["chain_map"] and max(row["n"] for row in r["rows"] if row["trusted"]) >= 3
        detail[name] = {row["n"]: [row["TH"], row["DY"]] for row in r["rows"] if row["trusted"]}
    return ok, detail


@check(10, "UTH^n = H^(n+1)(GS) for kZ2, n <= 2")
def c10():
    r = cs.gs_compare(moncat.cyclic_group(2), 2, signs=signs())
    trusted = [row["n"] for row in r["rows"] if row["trusted"]]
    return r["ok"] and trusted == [-1, 0, 1, 2], {row["n"]: [row["UTH"], row["GS"]] for row in r["rows"]}


@check(11, "unital column identities on every unital built-in")
def c11():
    detail = {}
    for name in moncat.BUILTINS:
        P, g = moncat.builtin(name)
        if P.unit is None:
            continue
        res = tcomplex.unital_extend(g, tcomplex.Window.total(4), signs())
        detail[name] = res.ok
    return bool(detail) and all(detail.values()), detail


def run_check(fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, reported as such
        ok, detail = False, {"error": repr(exc)}
    return {"id": fn.cid, "title": fn.title, "pass": bool(ok), "detail": detail,
            "seconds": round(time.perf_counter() - t0, 2)}


def run_all(only=None):
    return [run_check(fn) for fn in CHECKS if only is None or fn.cid in only]
