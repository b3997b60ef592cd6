"""Worked computations with independent oracles.

Each oracle builds its own complex straight from a closed formula and never
calls the differential assembly in :mod:`tensorhoch.tcomplex`; agreement
between the two is the evidence.  Only exact linear algebra (rank, kernels)
and category data (structure constants, splittings) are shared.
"""

from __future__ import annotations

import itertools
from math import comb

from . import moncat, tcomplex
from .exactla import (GF, DEFAULT_PRIME, SparseMatrix, GradedComplex, block_matrix, cohomology, compose, rank,
                      solve_columns)
from .aposet import left_comb


class SizeBound(ValueError):
    pass


class BicomplexViolation(RuntimeError):
    def __init__(self, identity, cell):
        self.identity, self.cell = identity, cell
        super().__init__(f"{identity} fails at {cell}")


def _field(field):
    return field or GF(DEFAULT_PRIME)


def _mat(shape, F, ent):
    return SparseMatrix.from_dict(shape, F, {k: v for k, v in ent.items() if F(v)})


def _acc(ent, key, v, F):
    ent[key] = F.add(ent.get(key, F.zero), F(v))


def _dims_of(cx):
    rep = cohomology(cx)
    return rep.dims, rep.flags


def _report(study, params, expected, computed, ok, basis, **extra):
    out = {"study": study, "parameters": params, "expected": expected, "expected_from": basis,
           "computed": computed, "pass": bool(ok)}
    out.update(extra)
    return out


# ----------------------------------------------------------------- R_n

def _words(n, d):
    return list(itertools.product(range(n), repeat=d))


def rn_differential(n, d, F):
    """``R_n^d -> R_n^{d+1}``: ``x_i -> x_i^2`` extended by the graded Leibniz rule."""
    src = _words(n, d)
    tgt = {w: k for k, w in enumerate(_words(n, d + 1))}
    ent = {}
    for c, w in enumerate(src):
        for k in range(d):
            _acc(ent, (tgt[w[:k + 1] + w[k:]], c), (-1) ** k, F)
    return _mat((len(tgt), len(src)), F, ent)


def rn_complex(n, max_len, field=None):
    if n < 1 or n > 3 or max_len > 10:
        raise SizeBound(f"R_{n} with words up to {max_len} is outside the supported range")
    F = _field(field)
    dims = {d: n ** d for d in range(max_len + 1)}
    dd = {d: rn_differential(n, d, F) for d in range(max_len)}
    cx = GradedComplex(F, dims, dd, set(range(max_len)), f"R_{n}")
    cx.check_d_squared()
    return cx


def rn_cohomology(n, max_word_len, field=None):
    """Per-degree dims of ``H(R_n)``; degree ``max_word_len`` is flagged ``edge``."""
    return _dims_of(rn_complex(n, max_word_len, field))


# --------------------------------------------------- quiver E1 row

def _symbols(n, m):
    """``[x_{i_1} .. x_{i_m}]_j`` as ``(word, j)``."""
    return [(w, j) for j in range(n) for w in itertools.product(range(n), repeat=m)]


def e1_symbol_differential(n, m, F):
    """Symbols of length ``m`` to length ``m + 1``: ``x_j w x_j -> d(x_j w x_j)`` read on symbols."""
    src = _symbols(n, m)
    tgt = {s: k for k, s in enumerate(_symbols(n, m + 1))}
    ent = {}
    for c, (w, j) in enumerate(src):
        _acc(ent, (tgt[((j,) + w, j)], c), 1, F)
        for k in range(m):
            _acc(ent, (tgt[(w[:k + 1] + w[k:], j)], c), (-1) ** (k + 1), F)
        _acc(ent, (tgt[(w + (j,), j)], c), (-1) ** (m + 1), F)
    return _mat((len(tgt), len(src)), F, ent)


def _quotient_by_diagonal(n, m, F):
    """Coordinates modulo ``D = sum_j [j^m]_j``: drop ``[0^m]_0`` and rewrite it as ``-sum_{j>0} [j^m]_j``."""
    syms = _symbols(n, m)
    drop = syms.index(((0,) * m, 0))
    keep = [k for k in range(len(syms)) if k != drop]
    pos = {k: i for i, k in enumerate(keep)}
    ent = {}
    for k in keep:
        ent[(pos[k], k)] = F.one
    for j in range(1, n):
        ent[(pos[syms.index(((j,) * m, j))], drop)] = F(-1)
    return _mat((len(keep), len(syms)), F, ent), keep


def quiver_e1_row(n, p_max, field=None):
    """The ``q = 1`` row of ``E1`` for the Kronecker quiver with ``n`` arrows.

    Degree ``p`` has symbols of length ``p + 1`` modulo the identity class,
    so ``dim = n^(p+2) - 1``.  Also checks that ``[w]_j -> x_j w x_j`` is a
    chain map into ``R_n`` whose image is a direct summand.
    """
    if n > 3 or p_max > 5:
        raise SizeBound(f"E1 row for n={n}, p<={p_max} is outside the supported range")
    F = _field(field)
    dims, dd = {}, {}
    for p in range(p_max + 1):
        m = p + 1
        Q, keep = _quotient_by_diagonal(n, m, F)
        dims[p] = len(keep)
        if p < p_max:
            Q2, _ = _quotient_by_diagonal(n, m + 1, F)
            D = e1_symbol_differential(n, m, F)
            # the lift of a quotient basis vector is the symbol itself
            lift = _mat((n ** (m + 1), len(keep)), F, {(k, i): 1 for i, k in enumerate(keep)})
            dd[p] = compose(Q2, compose(D, lift))
    cx = GradedComplex(F, dims, dd, set(range(p_max)), f"E1 row Q_{n}")
    cx.check_d_squared()
    rep = cohomology(cx)
    chain, summand = _embedding_checks(n, p_max, F)
    return {"complex": cx, "dims": dims, "cohomology": rep.dims, "flags": rep.flags,
            "chain_map": chain, "direct_summand": summand}


def _embedding_checks(n, p_max, F):
    chain = summand = True
    for p in range(p_max):
        m = p + 1
        src, tgt = _symbols(n, m), _symbols(n, m + 1)
        w1 = {w: k for k, w in enumerate(_words(n, m + 2))}
        w2 = {w: k for k, w in enumerate(_words(n, m + 3))}
        emb = lambda syms, idx: _mat((len(idx), len(syms)), F,
                                     {(idx[(j,) + w + (j,)], c): 1 for c, (w, j) in enumerate(syms)})
        i1, i2 = emb(src, w1), emb(tgt, w2)
        dR = rn_differential(n, m + 2, F)
        dS = e1_symbol_differential(n, m, F)
        if not (compose(dR, i1) - compose(i2, dS)).is_zero():
            chain = False
        # words whose first and last letters differ span a complementary subcomplex
        image = {idx for idx_w, idx in w2.items() if idx_w[0] == idx_w[-1]}
        for w, c in w1.items():
            if w[0] == w[-1]:
                continue
            for k in range(len(w)):
                if w2[w[:k + 1] + w[k:]] in image:
                    summand = False
    return chain, summand


# ----------------------------------------------- HH of A^{(x)p} via K

class _QuiverEnd:
    """``E = End(A^{(x)p})`` for the Kronecker quiver, as pairs ``(c, M)``.

    ``A`` as a representation is ``k`` at the first vertex and ``k^(n+1)`` at
    the second; index ``n`` of the second is the ``e2 A`` summand.  Columns
    ``(i, ..., i)`` of ``M`` are tied to the scalar ``c``.
    """

    def __init__(self, n, p):
        self.n, self.p = n, p
        self.idx = list(itertools.product(range(n + 1), repeat=p))
        self.diag = {(i,) * p for i in range(n)}

    def block(self, t, s):
        """Basis of ``e_t E e_s``; ``t, s`` are tuples over {1, 2}."""
        rows = [r for r in self.idx if all((r[j] < self.n) == (t[j] == 1) for j in range(self.p))]
        cols = [c for c in self.idx if all((c[j] < self.n) == (s[j] == 1) for j in range(self.p))]
        out = [("c",)] if all(x == 1 for x in t) and all(x == 1 for x in s) else []
        out += [(r, c) for r in rows for c in cols if c not in self.diag]
        return out

    def left_x(self, b, i, j):
        """``X_{ij} o b`` as ``{(r, c): coeff}``; ``X`` moves slot ``j`` from ``e2 A`` to ``x_i``."""
        if b == ("c",):
            return {}
        r, c = b
        if r[j] != self.n:
            return {}
        return {(r[:j] + (i,) + r[j + 1:], c): 1}

    def right_x(self, b, i, j):
        """``b o X_{ij}``."""
        if b == ("c",):
            d = (i,) * self.p
            return {(d, d[:j] + (self.n,) + d[j + 1:]): 1}
        r, c = b
        if c[j] != i:
            return {}
        return {(r, c[:j] + (self.n,) + c[j + 1:]): 1}


def _labels(n):
    return ["e1", "e2"] + [("x", i) for i in range(n)]


def _ts(z):
    t = tuple(2 if a == "e2" else 1 for a in z)
    s = tuple(1 if a == "e1" else 2 for a in z)
    return t, s


def quiver_k_complex(n, p, field=None):
    """``Hom_{bimod}(K, E)`` with ``K`` the length-``p`` resolution of ``A^{(x)p}``.

    Degree ``k`` is a sum over collections ``z`` with ``k`` arrows of
    ``e_{t(z)} E e_{s(z)}``; the differential is
    ``sum_j (-1)^{eps_j} (z_j o phi(.., e2, ..) - phi(.., e1, ..) o z_j)``.
    """
    if n > 3 or p > 3:
        raise SizeBound(f"K-resolution for n={n}, p={p} is outside the supported range")
    F = _field(field)
    E = _QuiverEnd(n, p)
    by_deg = {k: [] for k in range(p + 1)}
    for z in itertools.product(_labels(n), repeat=p):
        by_deg[sum(isinstance(a, tuple) for a in z)].append(z)
    index, dims = {}, {}
    for k, zs in by_deg.items():
        off = 0
        for z in zs:
            blk = E.block(*_ts(z))
            index[z] = (off, {b: i for i, b in enumerate(blk)}, blk)
            off += len(blk)
        dims[k] = off
    dd = {}
    for k in range(p):
        ent = {}
        for z in by_deg[k]:
            off, _, blk = index[z]
            for bi, b in enumerate(blk):
                col = off + bi
                for j, a in enumerate(z):
                    if isinstance(a, tuple):
                        continue
                    eps = sum(isinstance(x, tuple) for x in z[:j])
                    for i in range(n):
                        z2 = z[:j] + (("x", i),) + z[j + 1:]
                        if a == "e2":
                            img, sgn = E.left_x(b, i, j), (-1) ** eps
                        else:
                            img, sgn = E.right_x(b, i, j), -(-1) ** eps
                        off2, pos2, _ = index[z2]
                        for key, v in img.items():
                            if key[1] in E.diag:
                                raise AssertionError("image left the endomorphism algebra")
                            _acc(ent, (off2 + pos2[key], col), sgn * v, F)
        dd[k] = _mat((dims[k + 1], dims[k]), F, ent)
    cx = GradedComplex(F, dims, dd, set(range(p + 1)), f"K(Q_{n})^{p}")
    cx.check_d_squared()
    return cx


def quiver_hh_dims(n, p, field=None):
    """``(dim HH^0, dim HH^1, max_{i>=2} dim HH^i)`` of ``A^{(x)p}`` with coefficients ``End(A^{(x)p})``."""
    dims, _ = _dims_of(quiver_k_complex(n, p, field))
    higher = max((dims[i] for i in dims if i >= 2), default=0)
    return dims[0], dims.get(1, 0), higher


# ------------------------------------------------------- bar complex

class Algebra:
    """Finite-dimensional algebra by structure constants ``mult[(a, b)] = {c: coeff}``."""

    def __init__(self, dim, mult, unit, field, name=""):
        self.dim, self.mult, self.unit, self.F, self.name = dim, mult, unit, field, name

    def product(self, x, y):
        F = self.F
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for c, v in self.mult.get((a, b), {}).items():
                    _acc(out, c, F.mul(F.mul(ca, cb), v), F)
        return {k: v for k, v in out.items() if v}


def path_algebra_kronecker(n, field=None):
    """``kQ_n`` with basis ``e1, e2, x_1..x_n``; product is composition, ``x_i = e1 x_i e2``."""
    F = _field(field)
    mult = {(0, 0): {0: 1}, (1, 1): {1: 1}}
    for i in range(n):
        mult[(0, 2 + i)] = {2 + i: 1}
        mult[(2 + i, 1)] = {2 + i: 1}
    return Algebra(2 + n, mult, {0: 1, 1: 1}, F, f"kQ_{n}")


def bar_differential(alg, q, args=None):
    """Hochschild differential ``Hom(B^{(x)q}, A) -> Hom(B^{(x)q+1}, A)``.

    ``args`` lists the argument basis as coordinate vectors (default: the
    full basis, giving the plain bar complex).  Products of arguments are
    re-expanded in ``args`` plus the unit; the unit part is dropped, which is
    the normalised complex when ``args`` complements the unit.
    ``(df)(a_1..a_{q+1}) = a_1 f(a_2..) + sum (-1)^i f(..a_i a_{i+1}..) + (-1)^{q+1} f(a_1..a_q) a_{q+1}``.
    """
    F = alg.F
    m = alg.dim
    args = args if args is not None else [{k: F.one} for k in range(m)]
    r = len(args)
    expand = _expander(alg, args)
    src = list(itertools.product(range(r), repeat=q))
    spos = {t: k for k, t in enumerate(src)}
    tgt = list(itertools.product(range(r), repeat=q + 1))
    ent = {}
    for ti, t in enumerate(tgt):
        # outer terms: f(a_2..) left-multiplied by a_1, f(a_1..a_q) right-multiplied by a_{q+1}
        for side in (0, 1):
            inner = t[1:] if side == 0 else t[:-1]
            a = args[t[0] if side == 0 else t[-1]]
            sgn = 1 if side == 0 else (-1) ** (q + 1)
            si = spos[inner]
            for o in range(m):
                prod = alg.product(a, {o: 1}) if side == 0 else alg.product({o: 1}, a)
                for o2, v in prod.items():
                    _acc(ent, (ti * m + o2, si * m + o), sgn * v, F)
        for i in range(q):
            prod = alg.product(args[t[i]], args[t[i + 1]])
            for k, v in expand(prod).items():
                si = spos[t[:i] + (k,) + t[i + 2:]]
                for o in range(m):
                    _acc(ent, (ti * m + o, si * m + o), (-1) ** (i + 1) * v, F)
    return _mat((len(tgt) * m, len(src) * m), F, ent)


def _expander(alg, args):
    """Coordinates in ``args`` of a vector, after removing its unit component (if the unit is not in ``args``)."""
    F = alg.F
    basis = list(args)
    cols = basis + ([alg.unit] if len(basis) < alg.dim else [])
    M = _mat((alg.dim, len(cols)), F, {(k, c): v for c, vec in enumerate(cols) for k, v in vec.items()})
    cache = {}

    def expand(vec):
        key = tuple(sorted(vec.items()))
        if key not in cache:
            b = _mat((alg.dim, 1), F, {(k, 0): v for k, v in vec.items()})
            x = solve_columns(M, b)
            cache[key] = {r: v for r, _, v in x.entries() if r < len(basis)}
        return cache[key]
    return expand


def bar_complex(alg, q_max, args=None):
    F = alg.F
    r = len(args) if args is not None else alg.dim
    dims = {q: r ** q * alg.dim for q in range(q_max + 1)}
    dd = {q: bar_differential(alg, q, args) for q in range(q_max)}
    cx = GradedComplex(F, dims, dd, set(range(q_max)), f"bar({alg.name})")
    cx.check_d_squared()
    return cx


def bar_hochschild(alg, q_max, args=None):
    dims, flags = _dims_of(bar_complex(alg, q_max, args))
    return dims, flags


def generator_algebra(g, member=0):
    """``End(S_member)`` in the flat envelope basis, read from the generator's composition."""
    env, F = g.env, g.F
    U = g.members[member]
    dim = env.hom_dim(U, U)
    mult = {}
    for a in range(dim):
        for b in range(dim):
            m = env.compose(env.basis_mor(U, U, a), env.basis_mor(U, U, b))
            c = env.coords(m)
            if c:
                mult[(a, b)] = c
    unit = env.coords(env.identity(U))
    return Algebra(dim, mult, unit, F, g.name)


def reduced_args(g, member=0):
    """The generator's non-identity basis of ``End(S_member)``, as flat vectors."""
    return [dict(v) for v in g.hom_basis(member, member)[1:]]


def bar_row_matrix(g, q):
    """Oracle for ``d0: C^{0q} -> C^{0,q+1}`` in the engine's basis.

    Engine rows list maps in the order applied, the textbook arguments run
    last map first, so argument tuples are reversed.
    """
    alg = generator_algebra(g)
    args = reduced_args(g)
    r, m = len(args), alg.dim
    D = bar_differential(alg, q, args)
    A = tcomplex.Assembler(g)
    src, tgt = A.space(0, q), A.space(0, q + 1)

    def perm(space, qq):
        ent = {}
        for ri, rect in enumerate(space.rects):
            (objs, ks), = rect
            t = tuple(k - 1 for k in reversed(ks))
            bar_idx = 0
            for k in t:
                bar_idx = bar_idx * r + k
            for o in range(m):
                ent[(space.offsets[ri] + o, bar_idx * m + o)] = 1
        return _mat((space.dim, r ** qq * m), alg.F, ent)
    Pt, Ps = perm(tgt, q + 1), perm(src, q)
    return compose(Pt, compose(D, Ps.transpose())), A.d0(0, q)


# ------------------------------------------------------------- HKR layer

def _hkr_basis(dimV, p, q):
    """Sorted tuples of ``(i, a)`` with ``0 <= i <= p``: a basis of ``Lambda^q(V^{(+)(p+1)})``."""
    gens = [(i, a) for i in range(p + 1) for a in range(dimV)]
    return list(itertools.combinations(gens, q))


def _pi(x):
    return x % 2


def _inversions(seq):
    return sum(1 for a, b in itertools.combinations(seq, 2) if a > b)


def hkr_differential(dimV, p, q, F):
    """``E1^{pq} -> E1^{p+1,q}``: cube-edge terms plus the shuffle symmetrisation.

    For a cut after position ``j`` (``i_0 = -1``, ``i_{q+1} = p+1``) the
    coefficient is ``(-1)^(i_j+1) pi(i_{j+1} - i_j + 1)``; positions after the
    cut move to the next copy.  A cut inside a block of equal indices sums
    over all shuffles of that block's vectors with sign ``(-1)^|sigma|``.
    """
    src = _hkr_basis(dimV, p, q)
    tgt = {b: k for k, b in enumerate(_hkr_basis(dimV, p + 1, q))}
    ent = {}
    for c, w in enumerate(src):
        ii = [-1] + [x[0] for x in w] + [p + 1]
        for j in range(q + 1):
            if not _pi(ii[j + 1] - ii[j] + 1):
                continue
            sign = (-1) ** (ii[j] + 1)
            inside = 1 <= j < q and ii[j] == ii[j + 1]
            if not inside:
                new = tuple(w[:j]) + tuple((i + 1, a) for i, a in w[j:])
                _acc(ent, (tgt[new], c), sign, F)
                continue
            v = ii[j]
            b0 = min(k for k in range(q) if w[k][0] == v)
            b1 = max(k for k in range(q) if w[k][0] == v)
            vecs = [w[k][1] for k in range(b0, b1 + 1)]
            left = j - b0
            for S in itertools.combinations(range(len(vecs)), left):
                rest = [k for k in range(len(vecs)) if k not in S]
                sgn = (-1) ** _inversions(list(S) + rest)
                blk = tuple((v, vecs[k]) for k in S) + tuple((v + 1, vecs[k]) for k in rest)
                new = tuple(w[:b0]) + blk + tuple((i + 1, a) for i, a in w[b1 + 1:])
                _acc(ent, (tgt[new], c), sign * sgn, F)
    return _mat((len(tgt), len(src)), F, ent)


def hkr_layer(dimV, p_max, q_max=None, field=None):
    """``E2`` of the ``E1`` layer ``Lambda^q(V^{(+)(p+1)})`` with the row differential.

    Each row is built one column past ``p_max`` so that every reported cell
    ``p <= p_max`` sees both of its differentials.  Returns
    ``({(p, q): dim}, {(p, q): flag})``.
    """
    if dimV < 1 or dimV > 2 or p_max > 3:
        raise SizeBound(f"HKR layer dimV={dimV}, p<={p_max} is outside the supported range")
    F = _field(field)
    q_max = p_max + 2 if q_max is None else q_max
    top = p_max + 1
    E2, flags = {}, {}
    for q in range(q_max + 1):
        dims = {p: comb((p + 1) * dimV, q) for p in range(top + 1)}
        dd = {p: hkr_differential(dimV, p, q, F) for p in range(top)}
        cx = GradedComplex(F, dims, dd, set(range(top)), f"HKR q={q}")
        cx.check_d_squared()
        rep = cohomology(cx)
        for p in range(p_max + 1):
            E2[(p, q)] = rep.dims[p]
            flags[(p, q)] = rep.flags[p]
    return E2, flags


def hkr_expected(dimV, p, q):
    return comb(dimV + p, p + 1) if q == p + 1 else 0


# ------------------------------------------------- Gerstenhaber-Schack

class Bialgebra:
    def __init__(self, dim, mult, unit, comult, counit, field, name=""):
        self.dim, self.mult, self.unit = dim, mult, unit
        self.comult, self.counit, self.F, self.name = comult, counit, field, name

    def mul(self, x, y):
        return Algebra.product(self, x, y)


def group_bialgebra(group_table, field=None):
    F = _field(field)
    n = len(group_table)
    e = next(a for a in range(n) if all(group_table[a][x] == x for x in range(n)))
    mult = {(a, b): {group_table[a][b]: 1} for a in range(n) for b in range(n)}
    comult = {a: {(a, a): 1} for a in range(n)}
    return Bialgebra(n, mult, {e: 1}, comult, {a: 1 for a in range(n)}, F, f"kG[{n}]")


def trivial_bialgebra(field=None):
    F = _field(field)
    return Bialgebra(1, {(0, 0): {0: 1}}, {0: 1}, {0: {(0, 0): 1}}, {0: 1}, F, "k")


def _tensor_vec(vecs, F):
    """Tensor product of coordinate dicts, keyed by index tuples."""
    out = {(): F.one}
    for v in vecs:
        new = {}
        for k, c in out.items():
            for i, x in v.items():
                new[k + (i,)] = F.mul(c, F(x))
        out = new
    return out


def _iter_coproduct(B, b, p):
    """``Delta^{(p)}(e_b)`` as ``{tuple: coeff}``; ``p = 0`` gives the counit."""
    F = B.F
    if p == 0:
        return {(): F(B.counit.get(b, 0))}
    out = {(b,): F.one}
    for _ in range(p - 1):
        new = {}
        for t, c in out.items():
            for (x, y), v in B.comult[t[-1]].items():
                _acc(new, t[:-1] + (x, y), F.mul(c, F(v)), F)
        out = new
    return out


def _iter_product(B, t):
    """``mu^{(q)}`` of a basis tuple; ``q = 0`` gives the unit."""
    F = B.F
    acc = {k: F(v) for k, v in B.unit.items()}
    for b in t:
        acc = B.mul(acc, {b: F.one})
    return acc


def _tuple_mul(B, x, y):
    """Componentwise product of ``B^{(x)p}`` elements given as ``{tuple: coeff}``."""
    F = B.F
    out = {}
    for s, c in x.items():
        for t, d in y.items():
            prod = _tensor_vec([B.mul({a: 1}, {b: 1}) for a, b in zip(s, t)], F)
            for k, v in prod.items():
                _acc(out, k, F.mul(F.mul(c, d), v), F)
    return out


def _coproduct_tensor(B, t):
    """``Delta`` on ``B^{(x)q}``: ``{(left tuple, right tuple): coeff}``."""
    F = B.F
    out = {((), ()): F.one}
    for b in t:
        new = {}
        for (l, r), c in out.items():
            for (x, y), v in B.comult[b].items():
                _acc(new, (l + (x,), r + (y,)), F.mul(c, F(v)), F)
        out = new
    return out


class GSBicomplex:
    """``GS^{pq} = Hom(B^{(x)q}, B^{(x)p})`` for ``p, q >= 0`` and ``p + q <= n_max``."""

    def __init__(self, B, n_max):
        if B.dim > 4 or n_max > 4:
            raise SizeBound("GS bicomplex outside the supported range")
        self.B, self.F, self.n_max = B, B.F, n_max
        self.cells = [(p, q) for p in range(n_max + 1) for q in range(n_max + 1 - p)]
        m = B.dim
        self.ins = {q: list(itertools.product(range(m), repeat=q)) for q in range(n_max + 1)}
        self.pos = {q: {t: k for k, t in enumerate(self.ins[q])} for q in range(n_max + 1)}

    def dim(self, p, q):
        return self.B.dim ** (p + q)

    def _index(self, p, q, out, inp):
        return self.pos[p][out] * len(self.ins[q]) + self.pos[q][inp]

    def d_v(self, p, q):
        """Hochschild differential for ``B`` acting on ``B^{(x)p}`` through ``Delta^{(p)}``."""
        B, F = self.B, self.F
        ent = {}
        for out in self.ins[p]:
            for inp in self.ins[q]:
                col = self._index(p, q, out, inp)
                f_val = {out: F.one}
                for t in self.ins[q + 1]:
                    terms = {}
                    if t[1:] == inp:
                        for k, v in _tuple_mul(B, _iter_coproduct(B, t[0], p), f_val).items():
                            _acc(terms, k, v, F)
                    if t[:-1] == inp:
                        for k, v in _tuple_mul(B, f_val, _iter_coproduct(B, t[-1], p)).items():
                            _acc(terms, k, (-1) ** (q + 1) * v, F)
                    for i in range(q):
                        prod = B.mul({t[i]: 1}, {t[i + 1]: 1})
                        for b, v in prod.items():
                            if t[:i] + (b,) + t[i + 2:] == inp:
                                _acc(terms, out, (-1) ** (i + 1) * v, F)
                    for k, v in terms.items():
                        if v:
                            _acc(ent, (self._index(p, q + 1, k, t), col), v, F)
        return _mat((self.dim(p, q + 1), self.dim(p, q)), F, ent)

    def d_h(self, p, q):
        """Coalgebra (Cartier) differential, times ``(-1)^q`` so that it anticommutes with ``d_v``."""
        B, F = self.B, self.F
        tw = (-1) ** q
        ent = {}
        for out in self.ins[p]:
            for inp in self.ins[q]:
                col = self._index(p, q, out, inp)
                terms = {}
                for (l, r), c in _coproduct_tensor(B, inp).items():
                    if r == inp:
                        for b, v in _iter_product(B, l).items():
                            _acc(terms, (b,) + out, F.mul(c, v), F)
                    if l == inp:
                        for b, v in _iter_product(B, r).items():
                            _acc(terms, out + (b,), F.mul(c, v) * (-1) ** (p + 1), F)
                for i in range(p):
                    for (x, y), v in B.comult[out[i]].items():
                        _acc(terms, out[:i] + (x, y) + out[i + 1:], (-1) ** (i + 1) * v, F)
                for k, v in terms.items():
                    if v:
                        _acc(ent, (self._index(p + 1, q, k, inp), col), tw * v, F)
        return _mat((self.dim(p + 1, q), self.dim(p, q)), F, ent)

    def check(self):
        """The three bicomplex identities on every cell where they are defined."""
        for p, q in self.cells:
            n = p + q
            if n + 2 > self.n_max:
                continue
            checks = [("d_v^2", compose(self.d_v(p, q + 1), self.d_v(p, q))),
                      ("d_h^2", compose(self.d_h(p + 1, q), self.d_h(p, q))),
                      ("d_v d_h + d_h d_v", compose(self.d_v(p + 1, q), self.d_h(p, q))
                       + compose(self.d_h(p, q + 1), self.d_v(p, q)))]
            for name, m in checks:
                if not m.is_zero():
                    raise BicomplexViolation(name, (p, q))

    def total(self):
        F = self.F
        dims, dd = {}, {}
        by = {n: [(p, n - p) for p in range(n + 1)] for n in range(self.n_max + 1)}
        for n in range(self.n_max + 1):
            dims[n] = sum(self.dim(*c) for c in by[n])
        for n in range(self.n_max):
            blocks = {}
            for bj, (p, q) in enumerate(by[n]):
                for bi, t in enumerate(by[n + 1]):
                    if t == (p, q + 1):
                        blocks[(bi, bj)] = self.d_v(p, q)
                    elif t == (p + 1, q):
                        blocks[(bi, bj)] = self.d_h(p, q)
            dd[n] = block_matrix(blocks, [self.dim(*c) for c in by[n + 1]], [self.dim(*c) for c in by[n]], F)
        return GradedComplex(F, dims, dd, set(range(self.n_max)), f"GS({self.B.name})")


def gs_cohomology(B, n_max):
    gs = GSBicomplex(B, n_max)
    gs.check()
    return _dims_of(gs.total())


def _degree_bound(w, default):
    if w is None:
        return default
    return w.n_max - 1 if isinstance(w, tcomplex.Window) else int(w)


def gs_compare(group_table, w=None, field=None, signs=None):
    """``UTH^n`` of right ``kG``-modules against ``H^{n+1}(GS(kG))`` for ``-1 <= n <= n_max``.

    ``w`` is the top degree ``n_max`` (default 2) or a window whose trusted
    degrees end there.
    """
    n_max = _degree_bound(w, 2)
    F = _field(field)
    signs = signs or tcomplex.resolve_signs()
    P = moncat.group_bialgebra_rep(group_table, F)
    moncat.validate(P)
    g = moncat.Generator(P, [("kG",)], ["kG"])
    ut = tcomplex.unital_extend(g, tcomplex.Window.total(n_max + 1), signs)
    uth, uflags = _dims_of(ut.complex)
    gs, gflags = gs_cohomology(group_bialgebra(group_table, F), n_max + 2)
    rows = []
    for n in range(-1, n_max + 1):
        trusted = uflags.get(n) == "ok" and gflags.get(n + 1) == "ok"
        rows.append({"n": n, "UTH": uth.get(n), "GS": gs.get(n + 1), "trusted": trusted,
                     "equal": uth.get(n) == gs.get(n + 1)})
    ok = all(r["equal"] for r in rows if r["trusted"]) and ut.ok
    return {"rows": rows, "ok": ok, "unital_checks": ut.checks}


# ------------------------------------------------------ pointed categories

def pointed_dy_vs_th(group_table, omega=None, w=None, field=None, signs=None, degmax=3):
    """Cohomology of the DY subcomplex against ``TC`` for ``Vec_G^omega``.

    ``w`` defaults to the smallest window trusting every degree up to ``degmax``.
    """
    if len(group_table) > 3:
        raise SizeBound("pointed comparison is limited to groups of order <= 3")
    F = _field(field)
    window = w or tcomplex.Window.total(degmax + 1)
    signs = signs or tcomplex.resolve_signs()
    P = moncat.vec_g_omega(group_table, omega, F)
    moncat.validate(P)
    g = moncat.Generator(P, [tuple(P.objects)], ["X"])
    A = tcomplex.Assembler(g)
    dy, tc = tcomplex.dy_subcomplex(g, window, signs, A)
    th = cohomology(tc, check=False)
    dyh = cohomology(dy.complex)
    ranks = dy.induced_ranks(tc)
    rows = []
    for n in sorted(th.dims):
        if n > degmax:
            continue
        trusted = th.flags[n] == "ok"
        rows.append({"n": n, "TH": th.dims[n], "DY": dyh.dims.get(n), "induced_rank": ranks.get(n),
                     "trusted": trusted})
    ok = all(r["TH"] == r["DY"] == r["induced_rank"] for r in rows if r["trusted"])
    return {"rows": rows, "ok": ok, "chain_map": dy.is_chain_map(tc)}


def naturality_kernel_dim(group_table, p, field=None):
    """``dim End(Id^{(x)(p+1)})`` on ``Vec_G``, solved as a commutant problem.

    ``X^{(x)(p+1)}`` is graded by tuples of group elements; morphisms preserve
    the product grading; the unknowns are matrices commuting with every
    tuple projector (the image of ``End(X)^{(x)(p+1)}``).
    """
    F = _field(field)
    n = len(group_table)
    tuples = list(itertools.product(range(n), repeat=p + 1))

    def prod(t):
        acc = t[0]
        for x in t[1:]:
            acc = group_table[acc][x]
        return acc
    unknowns = [(s, t) for s in tuples for t in tuples if prod(s) == prod(t)]
    upos = {u: k for k, u in enumerate(unknowns)}
    # phi P_u - P_u phi = 0: entry (s, t) survives iff exactly one of s, t equals u
    ent = {}
    r = 0
    for u in tuples:
        for (s, t), k in upos.items():
            coef = (1 if t == u else 0) - (1 if s == u else 0)
            if coef:
                ent[(r, k)] = F(coef)
            r += 1
    M = _mat((r, len(unknowns)), F, ent)
    return len(unknowns) - rank(M)


# ------------------------------------------------ low-degree formulas

class _Morita:
    """Evaluate basis cochains of ``space`` on rows of envelope morphisms.

    A row is ``(exprs, mors)`` with ``mors[l]: obj(exprs[l]) -> obj(exprs[l+1])``
    in the order applied.  Each object splits into generator copies; the
    value is ``sum (x) incl o phi(proj f incl) o (x) proj`` over copy choices.
    Returns ``{source basis index: EMor}``.
    """

    def __init__(self, g, space):
        self.g, self.env, self.F = g, g.env, g.F
        self.space = space

    def _row_options(self, exprs, mors):
        g, env, F = self.g, self.env, self.F
        cps = [g.copies(e)[1] for e in exprs]
        options = []
        for choice in itertools.product(*[range(len(c)) for c in cps]):
            objs = tuple(cps[l][c][0] for l, c in enumerate(choice))
            coeffs = {(): F.one}
            for l, m in enumerate(mors):
                piece = env.compose(g.projection(exprs[l + 1], choice[l + 1]),
                                    env.compose(m, g.inclusion(exprs[l], choice[l])))
                cc = g.coords(objs[l], objs[l + 1], env.coords(piece))
                coeffs = {k + (b,): F.mul(v, x) for k, v in coeffs.items() for b, x in cc.items()}
                coeffs = {k: v for k, v in coeffs.items() if v}
            if coeffs:
                incl = g.inclusion(exprs[-1], choice[-1])
                proj = g.projection(exprs[0], choice[0])
                options.append((objs, coeffs, incl, proj))
        return options

    def __call__(self, rows):
        g, env, F = self.g, self.env, self.F
        tree = left_comb(len(rows))
        out = {}
        for combo in itertools.product(*[self._row_options(e, m) for e, m in rows]):
            incl = env.tree_mor(tree, [c[2] for c in combo])
            proj = env.tree_mor(tree, [c[3] for c in combo])
            A_in = g.obj(moncat.left_expr([c[0][0] for c in combo]))
            A_out = g.obj(moncat.left_expr([c[0][-1] for c in combo]))
            for picks in itertools.product(*[list(c[1].items()) for c in combo]):
                R = tuple((c[0], ks) for c, (ks, _) in zip(combo, picks))
                off = self.space.locate(R)
                if off is None:
                    continue
                coef = F.one
                for _, v in picks:
                    coef = F.mul(coef, v)
                for k in range(env.hom_dim(A_in, A_out)):
                    val = env.scale(env.compose(incl, env.compose(env.basis_mor(A_in, A_out, k), proj)), coef)
                    out[off + k] = val if off + k not in out else env.add(out[off + k], val)
        return out


def _assoc(g, x, y, z, inverse=False):
    """Associator ``(x y) z -> x (y z)`` on tree expressions."""
    env = g.env
    return env.associator(g.obj(x), g.obj(y), g.obj(z), inverse=inverse)


def _ident(g, e):
    return g.env.identity(g.obj(e))


def example_matrices(g):
    """The four low-degree formulas evaluated directly on a one-member generator.

    Returns ``{name: (oracle matrix, (i, source cell))}`` with the matrices
    in the engine's cochain bases.
    """
    env, F = g.env, g.F
    X = 0
    out = {}

    def combine(terms):
        acc = {}
        for sign, vals in terms:
            for s, m in vals.items():
                m = env.scale(m, sign)
                acc[s] = m if s not in acc else env.add(acc[s], m)
        return acc

    def matrix(src, tgt, evaluate):
        ent = {}
        for ti, R in enumerate(tgt.rects):
            vals = evaluate(R)
            base = tgt.offsets[ti]
            for s, m in vals.items():
                for r, v in env.coords(m).items():
                    _acc(ent, (base + r, s), v, F)
        return _mat((tgt.dim, src.dim), F, ent)

    A = tcomplex.Assembler(g)
    XY, YZ, ZW = (X, X), (X, X), (X, X)

    # (a) C^{01} -> C^{20}: a^{-1} phi(a)
    s01, t20 = A.space(0, 1), A.space(2, 0)
    ev = _Morita(g, s01)
    a = _assoc(g, X, X, X)
    ainv = _assoc(g, X, X, X, inverse=True)

    def eval_a(R):
        vals = ev([([(XY, X), (X, YZ)], [a])])
        return {s: env.compose(ainv, m) for s, m in vals.items()}
    out["a"] = (matrix(s01, t20, eval_a), (2, (0, 1)))

    # (b) C^{02} -> C^{21}: a^{-1} (phi(a', (f g) h) - phi(f (g h), a))
    s02, t21 = A.space(0, 2), A.space(2, 1)
    ev2 = _Morita(g, s02)

    def eval_b(R):
        f, gg, h = [g.mor(objs[0], objs[1], ks[0]) for objs, ks in R]
        fgh_l = env.tensor(env.tensor(f, gg), h)
        fgh_r = env.tensor(f, env.tensor(gg, h))
        t1 = ev2([([(XY, X), (XY, X), (X, YZ)], [fgh_l, a])])
        t2 = ev2([([(XY, X), (X, YZ), (X, YZ)], [a, fgh_r])])
        vals = combine([(1, t1), (-1, t2)])
        return {s: env.compose(ainv, m) for s, m in vals.items()}
    out["b"] = (matrix(s02, t21, eval_b), (2, (0, 2)))

    # (c) C^{11} -> C^{30}: a^{-1} phi(a, 1) + a^{-1} phi(1, a) conjugated
    s11, t30 = A.space(1, 1), A.space(3, 0)
    ev3 = _Morita(g, s11)
    a_xyz = _assoc(g, X, X, X)
    a_yzw = a_xyz
    idX = _ident(g, X)

    def eval_c(R):
        t1 = ev3([([(XY, X), (X, YZ)], [a_xyz]), ([X, X], [idX])])
        t1 = {s: env.compose(env.tensor(_assoc(g, X, X, X, True), idX), m) for s, m in t1.items()}
        t2 = ev3([([X, X], [idX]), ([(YZ, X), (X, ZW)], [a_yzw])])
        pre = env.compose(_assoc(g, X, (X, X), X), env.tensor(a_xyz, idX))
        post = env.compose(env.tensor(_assoc(g, X, X, X, True), idX),
                           env.compose(_assoc(g, X, (X, X), X, True),
                                       env.tensor(idX, _assoc(g, X, X, X, True))))
        t2 = {s: env.compose(post, env.compose(m, pre)) for s, m in t2.items()}
        return combine([(1, t1), (1, t2)])
    out["c"] = (matrix(s11, t30, eval_c), (2, (1, 1)))

    # (d) C^{02} -> C^{30}: the three pentagon paths
    ev4 = _Morita(g, s02)
    v0 = (((X, X), X), X)
    v1 = ((X, X), (X, X))
    v2 = ((X, (X, X)), X)
    v3 = (X, ((X, X), X))
    v4 = (X, (X, (X, X)))
    a01 = _assoc(g, (X, X), X, X)
    a14 = _assoc(g, X, X, (X, X))
    a02 = env.tensor(_assoc(g, X, X, X), idX)
    a23 = _assoc(g, X, (X, X), X)
    a34 = env.tensor(idX, _assoc(g, X, X, X))
    back = env.compose(_assoc(g, (X, X), X, X, True), _assoc(g, X, X, (X, X), True))

    def eval_d(R):
        t1 = ev4([([v0, v1, v4], [a01, a14])])
        t2 = ev4([([v2, v3, v4], [a23, a34])])
        t2 = {s: env.compose(m, a02) for s, m in t2.items()}
        t3 = ev4([([v0, v2, v4], [a02, env.compose(a34, a23)])])
        vals = combine([(1, t1), (-1, t2), (-1, t3)])
        return {s: env.compose(back, m) for s, m in vals.items()}
    out["d"] = (matrix(s02, t30, eval_d), (3, (0, 2)))
    return out


def compare_examples(g, signs):
    """Entrywise comparison of :func:`example_matrices` with the assembled components."""
    A = tcomplex.Assembler(g)
    res = {}
    for name, (M, (i, (p, q))) in example_matrices(g).items():
        E = A.component(i, p, q, signs)
        diff = M - E
        res[name] = {"equal": diff.is_zero(), "nnz_oracle": M.nnz, "nnz_engine": E.nnz,
                     "mismatches": diff.nnz}
    return res


# ---------------------------------------------------------------- runner

STUDIES = {}


def study(name):
    def deco(fn):
        STUDIES[name] = fn
        return fn
    return deco


@study("rn")
def _s_rn(n=2, max_word_len=8, **_):
    dims, flags = rn_cohomology(n, max_word_len)
    got = {d: h for d, h in dims.items() if flags[d] == "ok"}
    want = {d: (1 if d == 0 else 0) for d in got}
    return _report("rn", {"n": n, "max_word_len": max_word_len}, want, got, got == want,
                   "k in degree 0, nothing above")


@study("quiver")
def _s_quiver(n=2, p=2, **_):
    got = quiver_hh_dims(n, p)
    want = (1, n ** (p + 1) - 1, 0)
    return _report("quiver", {"n": n, "p": p}, list(want), list(got), got == want, "(1, n^(p+1) - 1, 0)")


@study("e1row")
def _s_e1row(n=2, p_max=5, **_):
    r = quiver_e1_row(n, p_max)
    got = {p: h for p, h in r["cohomology"].items() if r["flags"][p] == "ok"}
    dims_ok = all(r["dims"][p] == n ** (p + 2) - 1 for p in r["dims"])
    ok = all(h == 0 for h in got.values()) and r["chain_map"] and r["direct_summand"] and dims_ok
    return _report("e1row", {"n": n, "p_max": p_max}, {p: 0 for p in got}, got, ok,
                   "acyclic in interior degrees, rows of size n^(p+2) - 1",
                   chain_map=r["chain_map"], direct_summand=r["direct_summand"])


@study("hkr")
def _s_hkr(dimV=2, p_max=3, **_):
    E2, flags = hkr_layer(dimV, p_max)
    cells = sorted(c for c in E2 if flags[c] == "ok")
    got = {f"{p},{q}": E2[(p, q)] for p, q in cells}
    want = {f"{p},{q}": hkr_expected(dimV, p, q) for p, q in cells}
    return _report("hkr", {"dimV": dimV, "p_max": p_max}, want, got, got == want,
                   "dim S^(p+1) V at q = p + 1, zero elsewhere")


@study("gs")
def _s_gs(group=2, n_max=2, **_):
    r = gs_compare(moncat.cyclic_group(group), n_max)
    got = {row["n"]: {"UTH": row["UTH"], "GS": row["GS"]} for row in r["rows"] if row["trusted"]}
    want = {n: "UTH^n = H^(n+1)(GS)" for n in got}
    return _report("gs", {"group": group, "n_max": n_max}, want, got, r["ok"],
                   "equal dimensions from two independent complexes")


@study("pointed")
def _s_pointed(group=2, omega=False, degmax=3, **_):
    om = None
    if omega:
        om = moncat.omega_z2_sign if group == 2 else moncat.omega_z3(_field(None))
    r = pointed_dy_vs_th(moncat.cyclic_group(group), om, degmax=degmax)
    got = {row["n"]: {"TH": row["TH"], "DY": row["DY"]} for row in r["rows"] if row["trusted"]}
    want = {n: "DY = TH" for n in got}
    return _report("pointed", {"group": group, "omega": bool(omega), "degmax": degmax}, want, got,
                   r["ok"] and r["chain_map"], "the DY inclusion is a quasi-isomorphism")


@study("quiver-th")
def _s_qth(n=2, window=3, **_):
    P, g = moncat.builtin(f"quiver:{n}")
    tc = tcomplex.total_complex(g, tcomplex.Window.total(window), tcomplex.resolve_signs())
    got = cohomology(tc, check=False).trusted_dims()
    return _report("quiver-th", {"n": n, "window": window}, {k: 0 for k in got}, got,
                   all(v == 0 for v in got.values()), "total cohomology vanishes")


@study("anchors")
def _s_anchors(builtin="vec:2:omega", **_):
    P, g = moncat.builtin(builtin)
    r = compare_examples(g, tcomplex.resolve_signs())
    return _report("anchors", {"builtin": builtin}, {k: "entrywise equal" for k in r}, r,
                   all(v["equal"] for v in r.values()), "direct evaluation of the low-degree formulas")


def run_study(name, **params):
    """Run a registered study and return its JSON-ready report."""
    if name not in STUDIES:
        raise KeyError(f"unknown study {name!r}; known: {', '.join(sorted(STUDIES))}")
    return STUDIES[name](**params)
