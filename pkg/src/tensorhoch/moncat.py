"""Finitely presented monoidal categories at the level of bases.

A :class:`MonoidalPresentation` lists indecomposable objects, based Hom
spaces and structure constants for composition, tensor and associators.
Everything else lives in the additive envelope: an object is a tuple of
indecomposable symbols (its slots) and a morphism is a sparse matrix whose
``(target slot, source slot)`` entries are coordinate vectors in the Hom
basis between the two symbols.

A :class:`Generator` is a list of envelope objects closed under tensor
products up to slot-wise isomorphism; cochains of the tensor-Hochschild
complex are defined on morphisms between its members.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction

from . import aposet
from .exactla import GF, DEFAULT_PRIME, SparseMatrix, rref_rows, parse_field, content_hash


class ValidationFailure(ValueError):
    def __init__(self, axiom, witness):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"{axiom} fails at {witness}")


# ------------------------------------------------------------ presentation

class MonoidalPresentation:
    """Basis-level data of a monoidal category.

    ``compose[(a, b, c)][(i, j)]`` is the vector of ``g_i o f_j`` for
    ``f_j: a -> b`` and ``g_i: b -> c``.  ``tensor_mor[(a, a2, i, b, b2, j)]``
    is the envelope matrix of ``f_i (x) g_j`` with ``f_i: a -> a2``,
    ``g_j: b -> b2``.  ``associator[(a, b, c)]`` is the envelope matrix from
    the slots of ``(a b) c`` to those of ``a (b c)``; ``associator_inv`` goes
    back.  Envelope matrices are dicts ``{(t, s): {k: coeff}}``.
    """

    def __init__(self, name, field, objects, homs, compose, identity, tensor_ob, tensor_mor,
                 associator, associator_inv=None, unit=None, degrees=None, params=None):
        self.name = name
        self.field = field
        self.objects = list(objects)
        self.homs = {k: list(v) for k, v in homs.items() if v}
        self.degrees = degrees or {k: [0] * len(v) for k, v in self.homs.items()}
        self.compose = compose
        self.identity = identity
        self.tensor_ob = {k: tuple(v) for k, v in tensor_ob.items()}
        self.tensor_mor = tensor_mor
        self.associator = associator
        self.associator_inv = associator_inv if associator_inv is not None else _invert_monomial(self)
        self.unit = unit
        self.params = params or {}
        self.validated = False

    def hom_dim(self, a, b):
        return len(self.homs.get((a, b), ()))

    def is_strict(self):
        """All associators are slot identities."""
        for (a, b, c), m in self.associator.items():
            left = _local_slots_left(self, a, b, c)
            right = _local_slots_right(self, a, b, c)
            if len(left) != len(right) or any(x != y for x, y in zip(left, right)):
                return False
            want = {(i, i): dict(self.identity[s]) for i, s in enumerate(left)}
            if _clean(m, self.field) != _clean(want, self.field):
                return False
        return True

    @property
    def hash(self):
        return content_hash(self.to_json())

    # serialization ----------------------------------------------------
    def to_json(self):
        def key(*xs):
            return "|".join(map(str, xs))

        def mat(m):
            return [[t, s, {str(k): _ser(v) for k, v in vec.items()}] for (t, s), vec in sorted(m.items())]
        return {
            "name": self.name,
            "field": self.field.tag,
            "objects": self.objects,
            "homs": {key(a, b): {"basis": v, "degrees": self.degrees[(a, b)]} for (a, b), v in sorted(self.homs.items())},
            "compose": {key(*abc): [[i, j, {str(k): _ser(v) for k, v in vec.items()}] for (i, j), vec in sorted(tab.items())]
                        for abc, tab in sorted(self.compose.items())},
            "identity": {a: {str(k): _ser(v) for k, v in vec.items()} for a, vec in sorted(self.identity.items())},
            "tensor_ob": {key(a, b): _runs(v) for (a, b), v in sorted(self.tensor_ob.items())},
            "tensor_mor": {key(*k): mat(m) for k, m in sorted(self.tensor_mor.items())},
            "associator": {key(*k): mat(m) for k, m in sorted(self.associator.items())},
            "associator_inv": {key(*k): mat(m) for k, m in sorted(self.associator_inv.items())},
            "unit": self.unit,
        }

    @classmethod
    def from_json(cls, data):
        f = parse_field(data["field"])

        def unkey(s, n):
            parts = s.split("|")
            if len(parts) != n:
                raise ValueError(f"bad key {s!r}")
            return tuple(parts)

        def vec(d):
            return {int(k): f(_deser(v)) for k, v in d.items()}

        def mat(rows):
            return {(int(t), int(s)): vec(v) for t, s, v in rows}

        objects = list(data["objects"])
        homs, degrees = {}, {}
        for k, v in data["homs"].items():
            a, b = unkey(k, 2)
            homs[(a, b)] = list(v["basis"])
            degrees[(a, b)] = list(v.get("degrees", [0] * len(v["basis"])))
        compose = {unkey(k, 3): {(int(i), int(j)): vec(v) for i, j, v in rows} for k, rows in data["compose"].items()}
        identity = {a: vec(v) for a, v in data["identity"].items()}
        tensor_ob = {unkey(k, 2): _unruns(v) for k, v in data["tensor_ob"].items()}
        tm = {}
        for k, rows in data["tensor_mor"].items():
            a, a2, i, b, b2, j = unkey(k, 6)
            tm[(a, a2, int(i), b, b2, int(j))] = mat(rows)
        assoc = {unkey(k, 3): mat(rows) for k, rows in data["associator"].items()}
        inv = None
        if "associator_inv" in data:
            inv = {unkey(k, 3): mat(rows) for k, rows in data["associator_inv"].items()}
        return cls(data.get("name", "custom"), f, objects, homs, compose, identity, tensor_ob, tm, assoc, inv,
                   data.get("unit"), degrees)


def _ser(x):
    return str(x) if isinstance(x, Fraction) else int(x)


def _deser(x):
    return Fraction(x) if isinstance(x, str) else int(x)


def _runs(slots):
    out = []
    for s in slots:
        if out and out[-1][0] == s:
            out[-1][1] += 1
        else:
            out.append([s, 1])
    return out


def _unruns(runs):
    if runs and isinstance(runs[0], str):
        return tuple(runs)
    return tuple(s for s, m in runs for _ in range(int(m)))


def _clean(m, f):
    out = {}
    for key, vec in m.items():
        v = {k: f(c) for k, c in vec.items() if f(c) != 0}
        if v:
            out[key] = v
    return out


def _local_slots_left(P, a, b, c):
    return [y for x in P.tensor_ob[(a, b)] for y in P.tensor_ob[(x, c)]]


def _local_slots_right(P, a, b, c):
    return [y for z in P.tensor_ob[(b, c)] for y in P.tensor_ob[(a, z)]]


def _invert_monomial(P):
    """Invert associators whose entries are scalar multiples of identities, one per row and column."""
    f = P.field
    inv = {}
    for key, m in P.associator.items():
        left = _local_slots_left(P, *key)
        right = _local_slots_right(P, *key)
        out = {}
        for (t, s), vec in m.items():
            sym = left[s]
            if right[t] != sym:
                raise ValueError(f"associator {key} is not monomial; supply associator_inv")
            idv = P.identity[sym]
            k0 = next(iter(idv))
            scal = f.mul(vec.get(k0, 0), f.inv(idv[k0]))
            if {k: f.mul(scal, c) for k, c in idv.items()} != _clean({0: vec}, f).get(0, {}):
                raise ValueError(f"associator {key} entry is not a scalar identity; supply associator_inv")
            if (s, t) in out:
                raise ValueError(f"associator {key} is not monomial; supply associator_inv")
            out[(s, t)] = {k: f.mul(f.inv(scal), c) for k, c in idv.items()}
        inv[key] = out
    return inv


# --------------------------------------------------------------- envelope

class EMor:
    """Envelope morphism ``src -> tgt`` with entries ``{(t, s): {k: c}}``."""

    __slots__ = ("src", "tgt", "ent")

    def __init__(self, src, tgt, ent):
        self.src, self.tgt, self.ent = src, tgt, ent

    def __repr__(self):
        return f"EMor({len(self.src)}->{len(self.tgt)} slots, {len(self.ent)} entries)"


class Envelope:
    """Additive-envelope arithmetic on top of a presentation."""

    def __init__(self, pres):
        self.P = pres
        self.F = pres.field
        self._layout = {}
        self._homidx = {}
        self._assoc = {}
        self._iso = {}

    # objects ----------------------------------------------------------
    def layout(self, U, V):
        key = (U, V)
        got = self._layout.get(key)
        if got is None:
            slots, off = [], {}
            for iu, u in enumerate(U):
                for iv, v in enumerate(V):
                    off[(iu, iv)] = len(slots)
                    slots.extend(self.P.tensor_ob[(u, v)])
            got = (tuple(slots), off)
            self._layout[key] = got
        return got

    def otimes(self, U, V):
        return self.layout(U, V)[0]

    def tree_obj(self, tree, leaves):
        """Envelope object of a tree-shaped tensor of ``leaves`` (left to right)."""
        it = iter(leaves)

        def rec(t):
            if t == aposet.LEAF:
                return next(it)
            a = rec(t[0])
            b = rec(t[1])
            return self.otimes(a, b)
        return rec(tree)

    def left_nested(self, objs):
        acc = objs[0]
        for o in objs[1:]:
            acc = self.otimes(acc, o)
        return acc

    # homs -------------------------------------------------------------
    def hom_index(self, U, V):
        """``(dim, {(t, s): (offset, d)})`` for the flattened basis of Hom(U, V)."""
        key = (U, V)
        got = self._homidx.get(key)
        if got is None:
            off, n = {}, 0
            homs = self.P.homs
            for t, b in enumerate(V):
                for s, a in enumerate(U):
                    d = len(homs.get((a, b), ()))
                    if d:
                        off[(t, s)] = (n, d)
                        n += d
            got = (n, off)
            self._homidx[key] = got
        return got

    def hom_dim(self, U, V):
        return self.hom_index(U, V)[0]

    def coords(self, m):
        """Flat coordinates ``{index: coeff}`` of an envelope morphism."""
        _, off = self.hom_index(m.src, m.tgt)
        out = {}
        for ts, vec in m.ent.items():
            o = off[ts][0]
            for k, c in vec.items():
                if c:
                    out[o + k] = c
        return out

    def basis_mor(self, U, V, idx):
        _, off = self.hom_index(U, V)
        for ts, (o, d) in off.items():
            if o <= idx < o + d:
                return EMor(U, V, {ts: {idx - o: self.F.one}})
        raise IndexError(idx)

    def flat_basis(self, U, V):
        """List of ``(t, s, k)`` in flat order."""
        _, off = self.hom_index(U, V)
        out = []
        for (t, s), (o, d) in sorted(off.items(), key=lambda kv: kv[1][0]):
            out.extend((t, s, k) for k in range(d))
        return out

    # morphisms --------------------------------------------------------
    def identity(self, U):
        ident = self.P.identity
        return EMor(U, U, {(i, i): dict(ident[u]) for i, u in enumerate(U)})

    def zero(self, U, V):
        return EMor(U, V, {})

    def add(self, f, g, c=1):
        """``f + c*g``."""
        F = self.F
        ent = {k: dict(v) for k, v in f.ent.items()}
        cc = F(c)
        for ts, vec in g.ent.items():
            tgt = ent.setdefault(ts, {})
            for k, x in vec.items():
                y = F.add(tgt.get(k, F.zero), F.mul(cc, x))
                if y:
                    tgt[k] = y
                else:
                    tgt.pop(k, None)
            if not tgt:
                del ent[ts]
        return EMor(f.src, f.tgt, ent)

    def scale(self, f, c):
        F = self.F
        c = F(c)
        if not c:
            return EMor(f.src, f.tgt, {})
        return EMor(f.src, f.tgt, {ts: {k: F.mul(c, x) for k, x in v.items()} for ts, v in f.ent.items()})

    def compose(self, g, f):
        """``g o f``."""
        if f.tgt != g.src:
            raise ValueError("non-composable envelope morphisms")
        F, P = self.F, self.P
        A, B, C = f.src, f.tgt, g.tgt
        by_mid = defaultdict(list)
        for (b, a), v in f.ent.items():
            by_mid[b].append((a, v))
        ent = {}
        for (c, b), gv in g.ent.items():
            for a, fv in by_mid.get(b, ()):
                tab = P.compose[(A[a], B[b], C[c])]
                tgt = ent.setdefault((c, a), {})
                for k1, c1 in gv.items():
                    for k2, c2 in fv.items():
                        r = tab.get((k1, k2))
                        if r:
                            cc = F.mul(c1, c2)
                            for k, x in r.items():
                                tgt[k] = F.add(tgt.get(k, F.zero), F.mul(cc, x))
        return EMor(A, C, _prune(ent))

    def tensor(self, f, g):
        F, tm = self.F, self.P.tensor_mor
        U, U2, V, V2 = f.src, f.tgt, g.src, g.tgt
        src, offs = self.layout(U, V)
        tgt, offt = self.layout(U2, V2)
        ent = {}
        for (t1, s1), fv in f.ent.items():
            for (t2, s2), gv in g.ent.items():
                ot, os_ = offt[(t1, t2)], offs[(s1, s2)]
                for k1, c1 in fv.items():
                    for k2, c2 in gv.items():
                        block = tm[(U[s1], U2[t1], k1, V[s2], V2[t2], k2)]
                        cc = F.mul(c1, c2)
                        for (tau, sig), vec in block.items():
                            tv = ent.setdefault((ot + tau, os_ + sig), {})
                            for k, x in vec.items():
                                tv[k] = F.add(tv.get(k, F.zero), F.mul(cc, x))
        return EMor(src, tgt, _prune(ent))

    def tree_mor(self, tree, mors):
        it = iter(mors)

        def rec(t):
            if t == aposet.LEAF:
                return next(it)
            a = rec(t[0])
            b = rec(t[1])
            return self.tensor(a, b)
        return rec(tree)

    def equal(self, f, g):
        return f.src == g.src and f.tgt == g.tgt and _prune(self.add(f, g, -1).ent) == {}

    # associators ------------------------------------------------------
    def associator(self, U, V, W, inverse=False):
        key = (U, V, W, inverse)
        got = self._assoc.get(key)
        if got is not None:
            return got
        P = self.P
        UV, off1 = self.layout(U, V)
        L, off2 = self.layout(UV, W)
        VW, offm1 = self.layout(V, W)
        R, offm2 = self.layout(U, VW)
        ent = {}
        for iu, u in enumerate(U):
            for iv, v in enumerate(V):
                for iw, w in enumerate(W):
                    lpos = []
                    for x in range(len(P.tensor_ob[(u, v)])):
                        xg = off1[(iu, iv)] + x
                        base = off2[(xg, iw)]
                        lpos.extend(base + y for y in range(len(P.tensor_ob[(UV[xg], w)])))
                    rpos = []
                    for z in range(len(P.tensor_ob[(v, w)])):
                        zg = offm1[(iv, iw)] + z
                        base = offm2[(iu, zg)]
                        rpos.extend(base + y for y in range(len(P.tensor_ob[(u, VW[zg])])))
                    if inverse:
                        for (s, t), vec in P.associator_inv[(u, v, w)].items():
                            ent[(lpos[s], rpos[t])] = dict(vec)
                    else:
                        for (t, s), vec in P.associator[(u, v, w)].items():
                            ent[(rpos[t], lpos[s])] = dict(vec)
        m = EMor(R, L, ent) if inverse else EMor(L, R, ent)
        self._assoc[key] = m
        return m

    def rotation(self, s, t, leaves, inverse=False):
        """The associator instance turning tree ``s`` into ``t`` (one rotation)."""
        def rec(x, y, lv):
            if x == y:
                return self.identity(self.tree_obj(x, lv))
            nx0 = aposet.n_leaves(x[0])
            if x[0] != aposet.LEAF and y == (x[0][0], (x[0][1], x[1])):
                na = aposet.n_leaves(x[0][0])
                A = self.tree_obj(x[0][0], lv[:na])
                B = self.tree_obj(x[0][1], lv[na:nx0])
                C = self.tree_obj(x[1], lv[nx0:])
                return self.associator(A, B, C, inverse)
            if x[1] == y[1]:
                return self.tensor(rec(x[0], y[0], lv[:nx0]), self.identity(self.tree_obj(x[1], lv[nx0:])))
            return self.tensor(self.identity(self.tree_obj(x[0], lv[:nx0])), rec(x[1], y[1], lv[nx0:]))
        return rec(s, t, tuple(leaves))

    def iso(self, s, t, leaves):
        """Associator composite ``tree_obj(s) -> tree_obj(t)`` for trees ``s <= t``."""
        key = ("up", s, t, tuple(leaves))
        got = self._iso.get(key)
        if got is None:
            seq = aposet.rotation_path(s, t)
            got = self.identity(self.tree_obj(s, leaves))
            for x, y in zip(seq[:-1], seq[1:]):
                got = self.compose(self.rotation(x, y, leaves), got)
            self._iso[key] = got
        return got

    def iso_inv(self, s, t, leaves):
        """Inverse of :meth:`iso`: ``tree_obj(t) -> tree_obj(s)``."""
        key = ("down", s, t, tuple(leaves))
        got = self._iso.get(key)
        if got is None:
            seq = aposet.rotation_path(s, t)
            got = self.identity(self.tree_obj(t, leaves))
            for x, y in reversed(list(zip(seq[:-1], seq[1:]))):
                got = self.compose(self.rotation(x, y, leaves, inverse=True), got)
            self._iso[key] = got
        return got

    def between(self, s, t, leaves):
        """Associator composite between any two bracketings, through the left comb."""
        lc = aposet.left_comb(aposet.n_leaves(s))
        return self.compose(self.iso(lc, t, leaves), self.iso_inv(lc, s, leaves))


def _prune(ent):
    out = {}
    for ts, vec in ent.items():
        v = {k: x for k, x in vec.items() if x}
        if v:
            out[ts] = v
    return out


# ------------------------------------------------------------- validation

def validate(P):
    """Check the monoidal axioms; raise :class:`ValidationFailure` on the first failure."""
    F = P.field
    E = Envelope(P)
    objs = P.objects
    basis = {(a, b): range(P.hom_dim(a, b)) for a in objs for b in objs}

    def single(a, b, k):
        return EMor((a,), (b,), {(0, 0): {k: F.one}})

    # composition associativity
    for a, b, c, d in itertools.product(objs, repeat=4):
        for i in basis[(a, b)]:
            for j in basis[(b, c)]:
                for k in basis[(c, d)]:
                    f, g, h = single(a, b, i), single(b, c, j), single(c, d, k)
                    if not E.equal(E.compose(h, E.compose(g, f)), E.compose(E.compose(h, g), f)):
                        raise ValidationFailure("composition associativity", (a, b, c, d, i, j, k))
    # identities
    for a, b in itertools.product(objs, repeat=2):
        for i in basis[(a, b)]:
            f = single(a, b, i)
            if not (E.equal(E.compose(f, E.identity((a,))), f) and E.equal(E.compose(E.identity((b,)), f), f)):
                raise ValidationFailure("identity neutrality", (a, b, i))
    # tensor of identities and interchange
    for a, b in itertools.product(objs, repeat=2):
        if not E.equal(E.tensor(E.identity((a,)), E.identity((b,))), E.identity(E.otimes((a,), (b,)))):
            raise ValidationFailure("tensor of identities", (a, b))
    pairs = [(x, y, z, i, j) for x in objs for y in objs for z in objs
             for i in basis[(x, y)] for j in basis[(y, z)]]
    for (x1, y1, z1, i1, j1), (x2, y2, z2, i2, j2) in itertools.product(pairs, repeat=2):
        g1, f1 = single(x1, y1, i1), single(y1, z1, j1)
        g2, f2 = single(x2, y2, i2), single(y2, z2, j2)
        lhs = E.tensor(E.compose(f1, g1), E.compose(f2, g2))
        rhs = E.compose(E.tensor(f1, f2), E.tensor(g1, g2))
        if not E.equal(lhs, rhs):
            raise ValidationFailure("interchange law", ((x1, y1, z1, i1, j1), (x2, y2, z2, i2, j2)))
    # associators: inverse and naturality
    for a, b, c in itertools.product(objs, repeat=3):
        A, B, C = (a,), (b,), (c,)
        al = E.associator(A, B, C)
        ai = E.associator(A, B, C, inverse=True)
        if not (E.equal(E.compose(ai, al), E.identity(al.src)) and E.equal(E.compose(al, ai), E.identity(al.tgt))):
            raise ValidationFailure("associator invertibility", (a, b, c))
    morphs = [(x, y, i) for x in objs for y in objs for i in basis[(x, y)]]
    for (a, a2, i), (b, b2, j), (c, c2, k) in itertools.product(morphs, repeat=3):
        f, g, h = single(a, a2, i), single(b, b2, j), single(c, c2, k)
        lhs = E.compose(E.associator((a2,), (b2,), (c2,)), E.tensor(E.tensor(f, g), h))
        rhs = E.compose(E.tensor(f, E.tensor(g, h)), E.associator((a,), (b,), (c,)))
        if not E.equal(lhs, rhs):
            raise ValidationFailure("associator naturality", ((a, a2, i), (b, b2, j), (c, c2, k)))
    # pentagon
    for a, b, c, d in itertools.product(objs, repeat=4):
        A, B, C, D = (a,), (b,), (c,), (d,)
        I = E.identity
        p1 = E.compose(E.associator(A, B, E.otimes(C, D)), E.associator(E.otimes(A, B), C, D))
        p2 = E.compose(E.tensor(I(A), E.associator(B, C, D)),
                       E.compose(E.associator(A, E.otimes(B, C), D), E.tensor(E.associator(A, B, C), I(D))))
        if not E.equal(p1, p2):
            raise ValidationFailure("pentagon", (a, b, c, d))
    # unit
    if P.unit is not None:
        u = P.unit
        if u not in objs:
            raise ValidationFailure("unit declared but missing", u)
        for a in objs:
            if P.tensor_ob[(u, a)] != (a,) or P.tensor_ob[(a, u)] != (a,):
                raise ValidationFailure("unit tensor table", a)
        for (a, a2, i) in morphs:
            f = single(a, a2, i)
            if not (E.equal(E.tensor(E.identity((u,)), f), f) and E.equal(E.tensor(f, E.identity((u,))), f)):
                raise ValidationFailure("unitor naturality", (a, a2, i))
        for a, b in itertools.product(objs, repeat=2):
            al = E.associator((a,), (u,), (b,))
            if not E.equal(al, E.identity(al.src)):
                raise ValidationFailure("triangle", (a, b))
    P.validated = True
    return {"presentation": P.name, "status": "pass", "objects": len(objs),
            "morphisms": len(morphs), "strict": P.is_strict()}


# ---------------------------------------------------------------- builders

def cyclic_group(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def vec_g_omega(group_table, omega=None, field=None, name=None):
    """Pointed category: simples ``g``, ``g (x) h = gh``, associator scalar ``omega(g, h, k)``."""
    F = field or GF(DEFAULT_PRIME)
    n = len(group_table)
    objs = [f"g{i}" for i in range(n)]
    om = omega or (lambda a, b, c: 1)
    homs, compose, identity, tob, tm, assoc = {}, {}, {}, {}, {}, {}
    for i, g in enumerate(objs):
        homs[(g, g)] = ["id"]
        identity[g] = {0: F.one}
        compose[(g, g, g)] = {(0, 0): {0: F.one}}
    for i, j in itertools.product(range(n), repeat=2):
        tob[(objs[i], objs[j])] = (objs[group_table[i][j]],)
        tm[(objs[i], objs[i], 0, objs[j], objs[j], 0)] = {(0, 0): {0: F.one}}
    for i, j, k in itertools.product(range(n), repeat=3):
        w = F(om(i, j, k))
        if not w:
            raise ValueError("omega must take nonzero values")
        assoc[(objs[i], objs[j], objs[k])] = {(0, 0): {0: w}}
    unit = next((objs[e] for e in range(n) if all(group_table[e][x] == x for x in range(n))), None)
    return MonoidalPresentation(name or f"vec_g_omega[{n}]", F, objs, homs, compose, identity, tob, tm, assoc,
                                unit=unit, params={"group": group_table})


def omega_z2_sign(a, b, c):
    return -1 if (a, b, c) == (1, 1, 1) else 1


def omega_z3(field):
    z = field.root_of_unity(3)

    def om(a, b, c):
        return pow(z, a * ((b + c) // 3), field.p) if field.is_prime else 1
    return om


def one_object_algebra(basis, mult, unit_vector=None, field=None, name=None):
    """One object ``I`` with ``End(I)`` the given algebra; ``f (x) g = fg``, strict.

    ``mult[(i, j)]`` is the coordinate vector of ``e_i e_j``.
    """
    F = field or GF(DEFAULT_PRIME)
    n = len(basis)
    mult = {k: {kk: F(v) for kk, v in vec.items()} for k, vec in mult.items()}
    if unit_vector is None:
        unit_vector = {0: 1}
    unit_vector = {k: F(v) for k, v in unit_vector.items()}
    comp = {("I", "I", "I"): {(i, j): mult.get((i, j), {}) for i in range(n) for j in range(n)}}
    tm = {("I", "I", i, "I", "I", j): ({(0, 0): mult[(i, j)]} if mult.get((i, j)) else {})
          for i in range(n) for j in range(n)}
    P = MonoidalPresentation(name or f"algebra[{','.join(basis)}]", F, ["I"], {("I", "I"): list(basis)}, comp,
                             {"I": unit_vector}, {("I", "I"): ("I",)}, tm,
                             {("I", "I", "I"): {(0, 0): dict(unit_vector)}}, unit="I")
    return P


def truncated_polynomial(m, field=None):
    """``k[x]/(x^m)`` as a one-object presentation."""
    basis = ["1"] + [f"x^{i}" for i in range(1, m)]
    mult = {(i, j): ({i + j: 1} if i + j < m else {}) for i in range(m) for j in range(m)}
    return one_object_algebra(basis, mult, {0: 1}, field, name=f"k[x]/(x^{m})")


# concrete modules over quivers with grouplike arrows -------------------

class _Concrete:
    """A representation: vertex dimensions and arrow matrices (lists of rows)."""

    def __init__(self, dims, arrows):
        self.dims = dims
        self.arrows = arrows  # name -> (src vertex, tgt vertex, matrix)


def _kron(A, B, F):
    return [[F.mul(a, b) for a in ra for b in rb] for ra in A for rb in B]


def _zeros(n, m, F):
    return [[F.zero] * m for _ in range(n)]


def _matmul(A, B, F, n=None, m=None):
    if not A or not B:
        rows = len(A) if n is None else n
        cols = (len(B[0]) if B else 0) if m is None else m
        return _zeros(rows, cols, F)
    cols = len(B[0])
    return [[sum((F.mul(A[i][k], B[k][j]) for k in range(len(B))), F.zero) if not F.is_prime
             else sum(A[i][k] * B[k][j] for k in range(len(B))) % F.p for j in range(cols)] for i in range(len(A))]


def _concrete_tensor(M, N, F):
    dims = {v: M.dims[v] * N.dims[v] for v in M.dims}
    arrows = {}
    for x, (s, t, A) in M.arrows.items():
        B = N.arrows[x][2]
        arrows[x] = (s, t, _kron(A, B, F) if A and B else _zeros(dims[t], dims[s], F))
    return _Concrete(dims, arrows)


class _ModuleBuilder:
    """Derives presentation tables from concrete modules and chosen summand embeddings.

    ``modules[a]`` is a concrete module; ``hom_maps[(a, b)]`` the named basis of
    Hom(a, b) as dicts vertex -> matrix; ``split[(a, b)]`` a list of
    ``(symbol, embedding)`` decomposing ``a (x) b``.
    """

    def __init__(self, F, modules, hom_maps, split):
        self.F = F
        self.mod = modules
        self.hom = hom_maps
        self.split = split
        self.objs = list(modules)

    def tmod(self, a, b):
        return _concrete_tensor(self.mod[a], self.mod[b], self.F)

    def _solve_coords(self, h, a, b):
        """Coordinates of a concrete map ``a -> b`` in the named basis."""
        F = self.F
        basis = self.hom.get((a, b), [])
        flat = lambda m: [x for v in sorted(self.mod[a].dims) for row in m.get(v, []) for x in row]
        target = flat(h)
        if not any(target):
            return {}
        cols = [flat(bm) for bm in basis]
        n = len(cols)
        rows = [[cols[k][r] for k in range(n)] + [target[r]] for r in range(len(target))]
        M = SparseMatrix.from_dense(rows, F)
        pcols, prows = rref_rows(M)
        if n in pcols:
            raise ValueError(f"map is not in Hom({a},{b})")
        return {pc: r[n] for pc, r in zip(pcols, prows) if r.get(n)}

    def _embedding_images(self, a, b):
        """Stacked vertex bases of ``a (x) b`` from its summand embeddings, with their inverse."""
        T = self.tmod(a, b)
        out = {}
        for v in T.dims:
            cols, owners = [], []
            for idx, (sym, emb) in enumerate(self.split[(a, b)]):
                mat = emb.get(v, [])
                for c in range(self.mod[sym].dims[v]):
                    cols.append([mat[r][c] for r in range(T.dims[v])])
                    owners.append((idx, c))
            if len(cols) != T.dims[v]:
                raise ValueError(f"split of {a}(x){b} has wrong dimension at vertex {v}")
            out[v] = (cols, owners)
        return out

    def slot_matrix(self, a, b, a2, b2, h):
        """Envelope matrix of a concrete map ``h: a (x) b -> a2 (x) b2``."""
        F = self.F
        src = self.split[(a, b)]
        tgt_img = self._embedding_images(a2, b2)
        inv = {}
        for v, (cols, owners) in tgt_img.items():
            n = len(cols)
            if n == 0:
                inv[v] = ([], owners)
                continue
            Mx = [[cols[c][r] for c in range(n)] for r in range(n)]
            inv[v] = (_inverse(Mx, F), owners)
        ent = {}
        for s, (sym, emb) in enumerate(src):
            # image of every basis vector of the summand, split by target summand
            comp = defaultdict(dict)
            for v in self.mod[sym].dims:
                img = _matmul(h.get(v, []), emb.get(v, []), F, self.tmod(a2, b2).dims[v], self.mod[sym].dims[v])
                Minv, owners = inv[v]
                if not Minv:
                    continue
                co = _matmul(Minv, img, F)
                # group rows by owner summand
                for r, (t, c) in enumerate(owners):
                    for col in range(self.mod[sym].dims[v]):
                        x = co[r][col]
                        if x:
                            comp[t].setdefault(v, _zeros(self.mod[self.split[(a2, b2)][t][0]].dims[v],
                                                         self.mod[sym].dims[v], F))[c][col] = x
            for t, hmat in comp.items():
                tsym = self.split[(a2, b2)][t][0]
                full = {v: hmat.get(v, _zeros(self.mod[tsym].dims[v], self.mod[sym].dims[v], F)) for v in self.mod[sym].dims}
                vec = self._solve_coords(full, sym, tsym)
                if vec:
                    ent[(t, s)] = vec
        return ent

    def build(self, name, unit=None):
        F = self.F
        objs = self.objs
        homs = {k: [n for n, _ in v] for k, v in self.hom.items()}
        hmaps = {k: [m for _, m in v] for k, v in self.hom.items()}
        self.hom = hmaps
        compose, identity = {}, {}
        for a, b, c in itertools.product(objs, repeat=3):
            tab = {}
            for i, g in enumerate(hmaps.get((b, c), [])):
                for j, f in enumerate(hmaps.get((a, b), [])):
                    gf = {v: _matmul(g.get(v, []), f.get(v, []), F, self.mod[c].dims[v], self.mod[a].dims[v])
                          for v in self.mod[a].dims}
                    vec = self._solve_coords(gf, a, c)
                    if vec:
                        tab[(i, j)] = vec
            if hmaps.get((b, c)) and hmaps.get((a, b)):
                compose[(a, b, c)] = tab
        for a in objs:
            ident = {v: [[F.one if r == c else F.zero for c in range(d)] for r in range(d)]
                     for v, d in self.mod[a].dims.items()}
            identity[a] = self._solve_coords(ident, a, a)
        tob = {(a, b): tuple(s for s, _ in self.split[(a, b)]) for a in objs for b in objs}
        tm = {}
        for a, a2, b, b2 in itertools.product(objs, repeat=4):
            for i, f in enumerate(hmaps.get((a, a2), [])):
                for j, g in enumerate(hmaps.get((b, b2), [])):
                    h = {v: (_kron(f[v], g[v], F) if f.get(v) and g.get(v) else
                             _zeros(self.mod[a2].dims[v] * self.mod[b2].dims[v], self.mod[a].dims[v] * self.mod[b].dims[v], F))
                         for v in self.mod[a].dims}
                    tm[(a, a2, i, b, b2, j)] = self.slot_matrix(a, b, a2, b2, h)
        assoc, assoc_inv = {}, {}
        for a, b, c in itertools.product(objs, repeat=3):
            assoc[(a, b, c)], assoc_inv[(a, b, c)] = self._associator(a, b, c)
        return MonoidalPresentation(name, F, objs, homs, compose, identity, tob, tm, assoc, assoc_inv, unit=unit)

    def _triple_embeddings(self, a, b, c, left):
        """Embeddings of the slots of (ab)c (left) or a(bc) into the triple tensor space."""
        F = self.F
        out = []
        if left:
            for x, emb_x in self.split[(a, b)]:
                for y, emb_y in self.split[(x, c)]:
                    idc = {v: [[F.one if r == q else F.zero for q in range(d)] for r in range(d)]
                           for v, d in self.mod[c].dims.items()}
                    e = {}
                    for v in self.mod[y].dims:
                        outer = _kron(emb_x[v], idc[v], F) if emb_x.get(v) and idc.get(v) else None
                        e[v] = _matmul(outer, emb_y.get(v, []), F) if outer and emb_y.get(v) else []
                    out.append((y, e))
        else:
            for z, emb_z in self.split[(b, c)]:
                for y, emb_y in self.split[(a, z)]:
                    ida = {v: [[F.one if r == q else F.zero for q in range(d)] for r in range(d)]
                           for v, d in self.mod[a].dims.items()}
                    e = {}
                    for v in self.mod[y].dims:
                        outer = _kron(ida[v], emb_z[v], F) if emb_z.get(v) and ida.get(v) else None
                        e[v] = _matmul(outer, emb_y.get(v, []), F) if outer and emb_y.get(v) else []
                    out.append((y, e))
        return out

    def _associator(self, a, b, c):
        F = self.F
        L = self._triple_embeddings(a, b, c, True)
        R = self._triple_embeddings(a, b, c, False)
        dims = {v: self.mod[a].dims[v] * self.mod[b].dims[v] * self.mod[c].dims[v] for v in self.mod[a].dims}

        def decompose(side_from, side_to):
            ent = {}
            inv = {}
            for v, d in dims.items():
                cols, owners = [], []
                for t, (sym, e) in enumerate(side_to):
                    for q in range(self.mod[sym].dims[v]):
                        cols.append([e[v][r][q] for r in range(d)])
                        owners.append((t, q))
                inv[v] = (_inverse([[cols[q][r] for q in range(d)] for r in range(d)], F) if d else [], owners)
            for s, (sym, e) in enumerate(side_from):
                comp = defaultdict(dict)
                for v in self.mod[sym].dims:
                    Minv, owners = inv[v]
                    if not Minv or not e.get(v):
                        continue
                    co = _matmul(Minv, e[v], F)
                    for r, (t, q) in enumerate(owners):
                        for col in range(self.mod[sym].dims[v]):
                            x = co[r][col]
                            if x:
                                tsym = side_to[t][0]
                                comp[t].setdefault(v, _zeros(self.mod[tsym].dims[v], self.mod[sym].dims[v], F))[q][col] = x
                for t, hmat in comp.items():
                    tsym = side_to[t][0]
                    full = {v: hmat.get(v, _zeros(self.mod[tsym].dims[v], self.mod[sym].dims[v], F)) for v in self.mod[sym].dims}
                    vec = self._solve_coords(full, sym, tsym)
                    if vec:
                        ent[(t, s)] = vec
            return ent
        return decompose(L, R), decompose(R, L)


def _inverse(M, F):
    n = len(M)
    rows = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(M)]
    S = SparseMatrix.from_dense(rows, F)
    pcols, prows = rref_rows(S)
    if pcols[:n] != list(range(n)) or len(pcols) < n or any(c >= n for c in pcols[:n]):
        raise ValueError("singular matrix")
    return [[prows[i].get(n + j, F.zero) for j in range(n)] for i in range(n)]


def quiver_proj(n, field=None):
    """Projective right modules ``e1A``, ``e2A`` over the Kronecker path algebra with n arrows.

    Arrows ``x_i`` lie in ``e1 A e2``; the tensor product is vertex-wise with
    ``x (x) x`` acting on a tensor product of modules.
    """
    F = field or GF(DEFAULT_PRIME)
    if n < 1:
        raise ValueError("n >= 1")
    one = F.one
    unit_col = lambda d, i: [[one if r == i else F.zero] for r in range(d)]
    # e1A: vertex 1 basis [e1], vertex 2 basis [x_1..x_n]; e2A: vertex 2 basis [e2]
    e1 = _Concrete({1: 1, 2: n}, {f"x{i}": (1, 2, unit_col(n, i)) for i in range(n)})
    e2 = _Concrete({1: 0, 2: 1}, {f"x{i}": (1, 2, []) for i in range(n)})
    mods = {"e1": e1, "e2": e2}
    ident = lambda d: [[one if r == c else F.zero for c in range(d)] for r in range(d)]
    hom = {("e1", "e1"): [("1", {1: ident(1), 2: ident(n)})],
           ("e2", "e2"): [("1", {1: [], 2: ident(1)})],
           ("e2", "e1"): [(f"x{i + 1}", {1: [], 2: unit_col(n, i)}) for i in range(n)]}
    B = _ModuleBuilder(F, mods, hom, {})
    split = {}
    # e1 (x) e1: vertex 1 = [e1 e1], vertex 2 = [x_a x_b] (index a*n+b)
    diag = {1: [[one]], 2: [[one if r == a * n + a else F.zero for a in range(n)] for r in range(n * n)]}
    split[("e1", "e1")] = [("e1", diag)] + [("e2", {1: [], 2: unit_col(n * n, a * n + b)})
                                           for a in range(n) for b in range(n) if a != b]
    split[("e1", "e2")] = [("e2", {1: [], 2: unit_col(n, a)}) for a in range(n)]
    split[("e2", "e1")] = [("e2", {1: [], 2: unit_col(n, b)}) for b in range(n)]
    split[("e2", "e2")] = [("e2", {1: [], 2: ident(1)})]
    B.split = split
    P = B.build(f"quiver_proj[{n}]")
    P.params = {"n": n}
    return P


def group_bialgebra_rep(group_table, field=None, with_unit=True):
    """Right kG-modules on the regular module ``kG`` (plus the trivial module as unit).

    ``kG (x) kG`` splits into copies indexed by ``c`` with embedding
    ``x -> cx (x) x``.
    """
    F = field or GF(DEFAULT_PRIME)
    G = len(group_table)
    mul = lambda a, b: group_table[a][b]
    one = F.one

    def perm(f):  # matrix of the linear map basis x -> basis f(x)
        return [[one if f(c) == r else F.zero for c in range(G)] for r in range(G)]
    arrows_reg = {f"h{h}": (0, 0, perm(lambda x, h=h: mul(x, h))) for h in range(G)}
    arrows_triv = {f"h{h}": (0, 0, [[one]]) for h in range(G)}
    mods = {"kG": _Concrete({0: G}, arrows_reg)}
    hom = {("kG", "kG"): [(f"L{g}", {0: perm(lambda x, g=g: mul(g, x))}) for g in range(G)]}
    split = {("kG", "kG"): [("kG", {0: [[one if r == mul(c, x) * G + x else F.zero for x in range(G)]
                                         for r in range(G * G)]}) for c in range(G)]}
    unit = None
    if with_unit:
        mods["k"] = _Concrete({0: 1}, arrows_triv)
        hom[("k", "k")] = [("1", {0: [[one]]})]
        hom[("kG", "k")] = [("eps", {0: [[one] * G]})]
        hom[("k", "kG")] = [("N", {0: [[one] for _ in range(G)]})]
        idG = [[one if r == c else F.zero for c in range(G)] for r in range(G)]
        split[("kG", "k")] = [("kG", {0: idG})]
        split[("k", "kG")] = [("kG", {0: idG})]
        split[("k", "k")] = [("k", {0: [[one]]})]
        unit = "k"
    B = _ModuleBuilder(F, mods, hom, split)
    P = B.build(f"group_bialgebra_rep[{G}]", unit=unit)
    P.params = {"group": group_table}
    return P


# --------------------------------------------------------------- generator

class Generator:
    """Members ``S_0, S_1, ...`` (envelope objects) closed under tensor up to slot isomorphism.

    Hom spaces between members use the envelope basis, except that each
    ``End(S_a)`` is re-based so that index 0 is the identity.
    """

    def __init__(self, pres, members, names=None, name=None):
        if not pres.validated:
            validate(pres)
        self.P = pres
        self.F = pres.field
        self.env = Envelope(pres)
        self.members = [tuple(m) for m in members]
        self.names = names or [f"S{i}" for i in range(len(members))]
        self.name = name or f"{pres.name}/{'+'.join(self.names)}"
        self._hom = {}
        self._copies = {}
        self._split = {}
        self._comp = {}
        self._mor = {}
        for a in range(len(self.members)):
            for b in range(len(self.members)):
                self._split[(a, b)] = self._greedy_split(a, b)

    # Hom bases ---------------------------------------------------------
    def hom_basis(self, a, b):
        """Basis of Hom(S_a, S_b) as a list of flat envelope coordinate dicts."""
        key = (a, b)
        got = self._hom.get(key)
        if got is None:
            U, V = self.members[a], self.members[b]
            n, _ = self.env.hom_index(U, V)
            std = [{k: self.F.one} for k in range(n)]
            swap = None
            if a == b and n:
                idv = self.env.coords(self.env.identity(U))
                swap = min(idv)
                std = [idv] + [v for k, v in enumerate(std) if k != swap]
            got = (std, swap)
            self._hom[key] = got
        return got[0]

    def hom_dim(self, a, b):
        return len(self.hom_basis(a, b))

    def coords(self, a, b, flat):
        """Adapted coordinates of a flat envelope vector in Hom(S_a, S_b)."""
        self.hom_basis(a, b)
        swap = self._hom[(a, b)][1]
        if swap is None:
            return {k: c for k, c in flat.items() if c}
        F = self.F
        idv = self._hom[(a, b)][0][0]
        c0 = F.mul(flat.get(swap, F.zero), F.inv(idv[swap]))
        out = {0: c0} if c0 else {}
        for k, c in flat.items():
            if k == swap:
                continue
            x = F.add(c, F.neg(F.mul(c0, idv.get(k, F.zero))))
            if x:
                out[k + 1 if k < swap else k] = x
        for k, c in idv.items():
            if k != swap and k not in flat and c0:
                x = F.neg(F.mul(c0, c))
                if x:
                    out[k + 1 if k < swap else k] = x
        return out

    def mor(self, a, b, k):
        """Envelope morphism of adapted basis element ``k`` of Hom(S_a, S_b)."""
        key = (a, b, k)
        got = self._mor.get(key)
        if got is None:
            U, V = self.members[a], self.members[b]
            _, off = self.env.hom_index(U, V)
            vec = self.hom_basis(a, b)[k]
            ent = {}
            for (t, s), (o, d) in off.items():
                part = {i - o: c for i, c in vec.items() if o <= i < o + d}
                if part:
                    ent[(t, s)] = part
            got = EMor(U, V, ent)
            self._mor[key] = got
        return got

    def mor_from_coords(self, a, b, vec):
        m = self.env.zero(self.members[a], self.members[b])
        for k, c in vec.items():
            m = self.env.add(m, self.mor(a, b, k), c)
        return m

    def compose_basis(self, a, b, c, i, j):
        """Adapted coordinates of ``g_i o f_j`` with ``f_j: S_a -> S_b``, ``g_i: S_b -> S_c``."""
        key = (a, b, c, i, j)
        got = self._comp.get(key)
        if got is None:
            m = self.env.compose(self.mor(b, c, i), self.mor(a, b, j))
            got = self.coords(a, c, self.env.coords(m))
            self._comp[key] = got
        return got

    def is_identity(self, a, b, k):
        return a == b and k == 0

    # splitting ---------------------------------------------------------
    def _greedy_split(self, a, b):
        """Partition the slots of ``S_a (x) S_b`` into copies of members, greedily."""
        Z = self.env.otimes(self.members[a], self.members[b])
        free = defaultdict(list)
        for i, s in enumerate(Z):
            free[s].append(i)
        out = []
        left = len(Z)
        while left:
            for m, M in enumerate(self.members):
                need = defaultdict(int)
                for s in M:
                    need[s] += 1
                if all(len(free[s]) >= k for s, k in need.items()):
                    pos = []
                    for s in M:
                        pos.append(free[s].pop(0))
                    out.append((m, tuple(pos)))
                    left -= len(M)
                    break
            else:
                raise ValueError(f"{self.names[a]} (x) {self.names[b]} is not a sum of generator members")
        return out

    def copies(self, expr):
        """``(object, [(member, slot positions)])`` for a tree expression of member indices."""
        got = self._copies.get(expr)
        if got is not None:
            return got
        if isinstance(expr, int):
            M = self.members[expr]
            got = (M, [(expr, tuple(range(len(M))))])
        else:
            o1, c1 = self.copies(expr[0])
            o2, c2 = self.copies(expr[1])
            obj, off = self.env.layout(o1, o2)
            out = []
            for m1, pos1 in c1:
                for m2, pos2 in c2:
                    _, loff = self.env.layout(self.members[m1], self.members[m2])
                    local = []
                    for (s1, s2), start in sorted(loff.items(), key=lambda kv: kv[1]):
                        n = len(self.P.tensor_ob[(self.members[m1][s1], self.members[m2][s2])])
                        gstart = off[(pos1[s1], pos2[s2])]
                        local.extend(range(gstart, gstart + n))
                    for m, lp in self._split[(m1, m2)]:
                        out.append((m, tuple(local[i] for i in lp)))
            got = (obj, out)
        self._copies[expr] = got
        return got

    def obj(self, expr):
        return self.copies(expr)[0]

    def inclusion(self, expr, copy_index):
        obj, cps = self.copies(expr)
        m, pos = cps[copy_index]
        M = self.members[m]
        ident = self.P.identity
        return EMor(M, obj, {(pos[i], i): dict(ident[s]) for i, s in enumerate(M)})

    def projection(self, expr, copy_index):
        obj, cps = self.copies(expr)
        m, pos = cps[copy_index]
        M = self.members[m]
        ident = self.P.identity
        return EMor(obj, M, {(i, pos[i]): dict(ident[s]) for i, s in enumerate(M)})

    def power(self, k, member=0):
        """Left-nested ``S^{(x)k}`` as an envelope object."""
        return self.obj(left_expr([member] * k))

    def end_dim(self, k, member=0):
        U = self.power(k, member)
        return self.env.hom_dim(U, U)


def left_expr(ms):
    e = ms[0]
    for m in ms[1:]:
        e = (e, m)
    return e


def tree_expr(tree, ms):
    it = iter(ms)

    def rec(t):
        if t == aposet.LEAF:
            return next(it)
        a = rec(t[0])
        return (a, rec(t[1]))
    return rec(tree)


# --------------------------------------------------------------- built-ins

def builtin(name, field=None):
    """Resolve ``name:params`` into ``(presentation, generator)``.

    Names: ``vec:<n>`` (cyclic group, trivial cocycle), ``vec:<n>:omega``
    (the standard nontrivial cocycle for n = 2, 3), ``quiver:<n>``,
    ``kg:<n>`` (regular module of the cyclic group), ``alg:k``,
    ``alg:dual`` (k[x]/x^2), ``alg:x3`` (k[x]/x^3).
    """
    F = field or GF(DEFAULT_PRIME)
    parts = name.split(":")
    kind = parts[0].lower()
    if kind == "vec":
        n = int(parts[1])
        om = None
        label = "trivial"
        if len(parts) > 2 and parts[2] == "omega":
            if n == 2:
                om = omega_z2_sign
            elif n == 3:
                om = omega_z3(F)
            else:
                raise ValueError("nontrivial omega built in only for n = 2, 3")
            label = "omega"
        P = vec_g_omega(cyclic_group(n), om, F, name=f"vec:{n}:{label}")
        validate(P)
        return P, Generator(P, [tuple(P.objects)], ["X"])
    if kind == "quiver":
        n = int(parts[1])
        P = quiver_proj(n, F)
        validate(P)
        return P, Generator(P, [("e1",), ("e2",)], ["e1A", "e2A"])
    if kind == "kg":
        n = int(parts[1])
        P = group_bialgebra_rep(cyclic_group(n), F)
        validate(P)
        return P, Generator(P, [("kG",)], ["kG"])
    if kind == "alg":
        which = parts[1] if len(parts) > 1 else "k"
        m = {"k": 1, "dual": 2, "x3": 3}[which]
        P = truncated_polynomial(m, F)
        validate(P)
        return P, Generator(P, [("I",)], ["I"])
    raise ValueError(f"unknown built-in {name!r}")


BUILTINS = ["vec:2", "vec:3", "vec:2:omega", "vec:3:omega", "quiver:1", "quiver:2", "kg:2", "alg:k", "alg:dual",
            "alg:x3"]
