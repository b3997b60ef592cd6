"""Reduced tensor-Hochschild cochains on a generator and their differentials.

A cochain in ``C^{pq}`` is indexed by a rectangle of basis morphisms between
generator members (``p+1`` rows, ``q`` composable columns) together with a
basis element of ``Hom(T(col 0), T(col q))``, where ``T`` is the left-nested
tensor product of a column.  Rectangles containing a column made only of
identities are dropped (reducedness).

Differential components:

* ``d0`` (vertical, Hochschild in the columns),
* ``d1`` (horizontal, Davydov-Yetter in the rows), twisted by ``(-1)^(p+q)``
  so that it anticommutes with ``d0``,
* ``d_i`` for ``i >= 2``, a sum over rows ``j`` and admissible paths of
  ``A_{i-1} x I_q`` with signs taken from a :class:`SignConvention`.
"""
from __future__ import annotations

import itertools
import json
import os
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import aposet
from .aposet import LEAF, left_comb, substitute
from .exactla import (SparseMatrix, GradedComplex, compose, rank, content_hash, kernel_basis, solve_columns,
                      hstack, block_matrix, rref_rows, cohomology, CACHE_ENV)
from .moncat import EMor, left_expr, tree_expr

DEFAULT_LIMIT = 5_000_000


class WindowExceeded(ValueError):
    def __init__(self, cell, dim, limit):
        self.cell, self.dim, self.limit = cell, dim, limit
        super().__init__(f"cochain space C^{cell} has dimension {dim} > limit {limit}; shrink the window")


class Unresolvable(RuntimeError):
    def __init__(self, component, cell, witness=None):
        self.component, self.cell, self.witness = component, cell, witness
        super().__init__(f"no sign assignment makes {component} vanish at {cell}; witness {witness}")


class NoUnit(ValueError):
    pass


# ------------------------------------------------------------------ window

@dataclass(frozen=True)
class Window:
    p_max: int
    q_max: int
    n_max: int
    n_min: int = 0

    @classmethod
    def total(cls, n):
        return cls(n, n, n)

    def cells(self):
        return [(p, q) for p in range(self.p_max + 1) for q in range(self.q_max + 1) if p + q <= self.n_max]

    def __contains__(self, cell):
        p, q = cell
        return 0 <= p <= self.p_max and 0 <= q <= self.q_max and p + q <= self.n_max

    def trusted(self, n):
        """All cells with ``p+q <= n+1`` are inside the window."""
        return all((p, m - p) in self for m in range(n + 2) for p in range(m + 1))

    def to_json(self):
        return {"p_max": self.p_max, "q_max": self.q_max, "n_max": self.n_max, "n_min": self.n_min}


# ---------------------------------------------------------- sign convention

def _a_projection(path):
    out = []
    for t, _ in path.vertices:
        if not out or out[-1] != t:
            out.append(t)
    return tuple(out)


def _inversions(path):
    """Pairs (H step, later V step)."""
    n = 0
    hs = 0
    for tag in path.tags:
        if tag == "H":
            hs += 1
        else:
            n += hs
    return n


_PATH_SIGNS = {}


def path_sign(n, apath):
    if n <= 1:
        return 1
    if n not in _PATH_SIGNS:
        _PATH_SIGNS[n] = aposet.path_signs(n)
    return _PATH_SIGNS[n][apath]


MONOMIALS = (
    ("inv", lambda j, p, q, inv: inv),
    ("j", lambda j, p, q, inv: j),
    ("q", lambda j, p, q, inv: q),
    ("p", lambda j, p, q, inv: p),
    ("1", lambda j, p, q, inv: 1),
    ("jq", lambda j, p, q, inv: j * q),
    ("pq", lambda j, p, q, inv: p * q),
    ("jp", lambda j, p, q, inv: j * p),
    ("p2", lambda j, p, q, inv: p * (p - 1) // 2),
    ("q2", lambda j, p, q, inv: q * (q - 1) // 2),
)


def path_key(path):
    """Stable text form of an admissible path, e.g. ``"(..)@0>(..)@1|V"``."""
    verts = ">".join(f"{t if isinstance(t, str) else aposet.serialize(t)}@{n}" for t, n in path.vertices)
    return verts + "|" + "".join(path.tags)


class SignConvention:
    """Signs of the ``d_i`` terms, ``i >= 2``.

    A term is keyed by ``(i, p, q, j, path)`` with ``(p, q)`` the target cell.
    Terms listed in ``table`` take the stored sign.  All other terms follow the
    ansatz ``eps(P_A) * (-1)^(sum of bits[i][k] * monomial_k(j, p, q, inv(P)))``,
    where ``P_A`` is the associahedron part of ``P``, ``eps`` the path signs of
    :func:`aposet.path_signs`, ``inv(P)`` counts (horizontal, later vertical)
    step pairs and the monomials are listed in :data:`MONOMIALS`.
    """

    FIELDS = tuple(name for name, _ in MONOMIALS)

    def __init__(self, bits=None, source="default", table=None):
        self.bits = {}
        for i, v in (bits or {}).items():
            v = tuple(int(x) for x in v)
            self.bits[int(i)] = v + (0,) * (len(MONOMIALS) - len(v))
        self.table = dict(table or {})
        self.source = source

    @staticmethod
    def key(i, p, q, j, path):
        return f"{i}|{p}|{q}|{j}|{path_key(path)}"

    def ansatz(self, i, p, q, j, path):
        bits = self.bits.get(i)
        ex = 0
        if bits:
            inv = _inversions(path)
            ex = sum(b * f(j, p, q, inv) for b, (_, f) in zip(bits, MONOMIALS) if b)
        return path_sign(i - 1, _a_projection(path)) * (-1) ** (ex % 2)

    def sign(self, i, p, q, j, path):
        if self.table:
            got = self.table.get(self.key(i, p, q, j, path))
            if got is not None:
                return got
        return self.ansatz(i, p, q, j, path)

    def with_entries(self, entries, source=None):
        t = dict(self.table)
        t.update(entries)
        return SignConvention(self.bits, source or self.source, t)

    def overrides(self):
        """Table entries that disagree with the ansatz (as ``(key, sign)``)."""
        out = []
        for k, v in sorted(self.table.items()):
            i, p, q, j, pk = k.split("|", 4)
            path = _path_from_key(pk)
            if self.ansatz(int(i), int(p), int(q), int(j), path) != v:
                out.append((k, v))
        return out

    def path_signs(self, n):
        """Signs this convention puts on the admissible paths of A_n (the ``d_{n+1}`` terms into C^{n+1,0})."""
        return {tuple(v for v, _ in P.vertices): self.sign(n + 1, n + 1, 0, 0, P)
                for P in admissible_paths(n, 0)}

    def to_json(self):
        return {"kind": "tensorhoch-signs", "version": 1, "fields": list(self.FIELDS),
                "bits": {str(i): list(v) for i, v in sorted(self.bits.items())},
                "table": dict(sorted(self.table.items())), "source": self.source}

    @classmethod
    def from_json(cls, data):
        if data.get("kind") != "tensorhoch-signs":
            raise ValueError("not a sign convention file")
        if list(data.get("fields", cls.FIELDS)) != list(cls.FIELDS)[:len(data.get("fields", cls.FIELDS))]:
            raise ValueError("sign convention file uses a different ansatz")
        return cls({int(k): v for k, v in data["bits"].items()}, data.get("source", "file"),
                   {k: int(v) for k, v in data.get("table", {}).items()})

    @property
    def hash(self):
        return content_hash({"bits": {str(i): list(v) for i, v in sorted(self.bits.items())},
                             "table": dict(sorted(self.table.items()))})

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def __eq__(self, other):
        return isinstance(other, SignConvention) and self.bits == other.bits and self.table == other.table

    def __repr__(self):
        return f"SignConvention({self.bits}, {len(self.table)} table entries)"


def _path_from_key(text):
    verts, tags = text.rsplit("|", 1)
    vs = []
    for v in verts.split(">"):
        t, n = v.rsplit("@", 1)
        vs.append((t, int(n)))
    return aposet.Path(tuple(vs), tuple(tags))


# ----------------------------------------------------------- cochain index

def row_chains(g, q):
    """All length-q chains of adapted basis morphisms: ``(objs, ks)``."""
    key = ("chains", q)
    cache = g.__dict__.setdefault("_tc_cache", {})
    if key in cache:
        return cache[key]
    m = len(g.members)
    if q == 0:
        out = [((a,), ()) for a in range(m)]
    else:
        out = []
        for objs, ks in row_chains(g, q - 1):
            a = objs[-1]
            for b in range(m):
                for k in range(g.hom_dim(a, b)):
                    out.append((objs + (b,), ks + (k,)))
    cache[key] = out
    return out


def is_reduced(rect):
    q = len(rect[0][1])
    for l in range(q):
        if all(objs[l] == objs[l + 1] and ks[l] == 0 for objs, ks in rect):
            return False
    return True


class CochainIndex:
    """Basis of reduced ``C^{pq}``: pairs (rectangle, flat output basis index)."""

    def __init__(self, g, p, q, limit=DEFAULT_LIMIT):
        self.g, self.p, self.q = g, p, q
        chains = row_chains(g, q)
        env = g.env
        rects, offsets, dims = [], [], []
        n = 0
        for rect in itertools.product(chains, repeat=p + 1):
            if q and not is_reduced(rect):
                continue
            A = g.obj(left_expr([r[0][0] for r in rect]))
            B = g.obj(left_expr([r[0][-1] for r in rect]))
            d = env.hom_dim(A, B)
            if not d:
                continue
            rects.append(rect)
            offsets.append(n)
            dims.append(d)
            n += d
            if n > limit:
                raise WindowExceeded((p, q), f">{limit}", limit)
        self.rects = rects
        self.offsets = offsets
        self.dims = dims
        self.pos = {r: i for i, r in enumerate(rects)}
        self.dim = n

    def __len__(self):
        return self.dim

    def in_objs(self, rect):
        return tuple(r[0][0] for r in rect)

    def out_objs(self, rect):
        return tuple(r[0][-1] for r in rect)

    def locate(self, rect):
        i = self.pos.get(rect)
        return None if i is None else self.offsets[i]

    def label(self, index):
        """Human-readable description of a basis element."""
        i = int(np.searchsorted(self.offsets, index, side="right") - 1)
        rect = self.rects[i]
        return {"rect": [[list(o), list(k)] for o, k in rect], "out": index - self.offsets[i]}


def closed_form_dim(g, p, q):
    """``(e^{p+1}-1)^q * dim End(X^{(x)(p+1)})`` for a one-member generator."""
    if len(g.members) != 1:
        raise ValueError("closed form applies to one-member generators")
    e = g.hom_dim(0, 0)
    return (e ** (p + 1) - 1) ** q * g.end_dim(p + 1)


# ------------------------------------------------------------- assembly

class _Builder:
    def __init__(self, field, shape):
        self.F = field
        self.shape = shape
        self.r, self.c, self.v = [], [], []

    def add(self, roff, coff, coef, block):
        br, bc, bv = block
        if not len(br):
            return
        F = self.F
        self.r.append(br + roff)
        self.c.append(bc + coff)
        if F.is_prime:
            self.v.append((bv * (int(coef) % F.p)) % F.p)
        else:
            self.v.append(bv * F(coef))

    def matrix(self):
        F = self.F
        if not self.r:
            return SparseMatrix.zeros(self.shape, F)
        r = np.concatenate(self.r)
        c = np.concatenate(self.c)
        v = np.concatenate(self.v)
        return SparseMatrix.from_coo(self.shape, F, r, c, v)


class Assembler:
    """Builds differential blocks on one generator; caches spaces and output maps."""

    def __init__(self, g, limit=DEFAULT_LIMIT):
        self.g = g
        self.env = g.env
        self.F = g.F
        self.limit = limit
        self._spaces = {}
        self._maps = {}
        self._colmor = {}
        self._terms = {}

    def space(self, p, q):
        key = (p, q)
        if key not in self._spaces:
            self._spaces[key] = CochainIndex(self.g, p, q, self.limit)
        return self._spaces[key]

    # objects and morphisms -------------------------------------------
    def T(self, ms):
        return self.g.obj(left_expr(list(ms)))

    def column_mor(self, entries):
        """Left-nested tensor of basis morphisms ``[(a, b, k), ...]``."""
        key = tuple(entries)
        got = self._colmor.get(key)
        if got is None:
            g = self.g
            mors = [g.mor(a, b, k) for a, b, k in entries]
            got = self.env.tree_mor(left_comb(len(mors)), mors)
            self._colmor[key] = got
        return got

    def row_composite(self, objs, ks):
        """Adapted coordinates of ``f_{q-1} ... f_0`` along a row."""
        g = self.g
        if not ks:
            return {0: self.F.one}
        acc = {ks[0]: self.F.one}
        for l in range(1, len(ks)):
            new = defaultdict(lambda: self.F.zero)
            for k, c in acc.items():
                for k2, c2 in g.compose_basis(objs[0], objs[l], objs[l + 1], ks[l], k).items():
                    new[k2] = self.F.add(new[k2], self.F.mul(c, c2))
            acc = {k: c for k, c in new.items() if c}
        return acc

    # output maps ------------------------------------------------------
    def _outmap(self, key, A_in, A_out, B_in, B_out, fn):
        """Matrix ``Hom(A_in, A_out) -> Hom(B_in, B_out)`` of ``fn`` as COO arrays."""
        got = self._maps.get(key)
        if got is not None:
            return got
        env, F = self.env, self.F
        _, offA = env.hom_index(A_in, A_out)
        rows, cols, vals = [], [], []
        for (t, s), (o, d) in offA.items():
            for k in range(d):
                e = EMor(A_in, A_out, {(t, s): {k: F.one}})
                img = env.coords(fn(e))
                for r, v in img.items():
                    rows.append(r)
                    cols.append(o + k)
                    vals.append(v)
        got = _arrays(rows, cols, vals, F)
        self._maps[key] = got
        return got

    def sandwich(self, key, A_in, A_out, pre, post):
        """``out -> post o out o pre`` with ``pre: B_in -> A_in``, ``post: A_out -> B_out``."""
        got = self._maps.get(key)
        if got is not None:
            return got
        env, F, P = self.env, self.F, self.g.P
        B_in, B_out = pre.src, post.tgt
        _, offA = env.hom_index(A_in, A_out)
        _, offB = env.hom_index(B_in, B_out)
        pre_by = defaultdict(list)
        for (s, s2), v in pre.ent.items():
            pre_by[s].append((s2, v))
        post_by = defaultdict(list)
        for (t2, t), v in post.ent.items():
            post_by[t].append((t2, v))
        comp = P.compose
        acc = defaultdict(lambda: F.zero)
        for (t, s), (o, d) in offA.items():
            a_s, a_t = A_in[s], A_out[t]
            for s2, pv in pre_by.get(s, ()):
                b_s = B_in[s2]
                tab1 = comp.get((b_s, a_s, a_t), {})
                for t2, qv in post_by.get(t, ()):
                    ob = offB.get((t2, s2))
                    if ob is None:
                        continue
                    tab2 = comp.get((b_s, a_t, B_out[t2]), {})
                    for k in range(d):
                        # e_k o pre
                        mid = defaultdict(lambda: F.zero)
                        for k2, c2 in pv.items():
                            for kk, cc in tab1.get((k, k2), {}).items():
                                mid[kk] = F.add(mid[kk], F.mul(c2, cc))
                        for kk, cm in mid.items():
                            if not cm:
                                continue
                            for k1, c1 in qv.items():
                                for kr, cr in tab2.get((k1, kk), {}).items():
                                    x = F.mul(F.mul(c1, cm), cr)
                                    acc[(ob[0] + kr, o + k)] = F.add(acc[(ob[0] + kr, o + k)], x)
        rows, cols, vals = [], [], []
        for (r, c), v in acc.items():
            if v:
                rows.append(r)
                cols.append(c)
                vals.append(v)
        got = _arrays(rows, cols, vals, F)
        self._maps[key] = got
        return got

    def identity_map(self, A_in, A_out):
        key = ("id", A_in, A_out)
        got = self._maps.get(key)
        if got is None:
            n = self.env.hom_dim(A_in, A_out)
            idx = np.arange(n, dtype=np.int64)
            got = (idx, idx, _ones(n, self.F))
            self._maps[key] = got
        return got

    # d0 ---------------------------------------------------------------
    def d0(self, p, q):
        """``C^{pq} -> C^{p,q+1}``.

        Arguments are listed last map first: ``(d0 phi)(f_0, ..., f_q) =
        f_0 phi(f_1, ..., f_q) + sum_j (-1)^(j+1) phi(..., f_j f_{j+1}, ...)
        + (-1)^(q+1) phi(f_0, ..., f_{q-1}) f_q``, with ``f_k`` standing for
        the tensor product of a column.  Rows store maps in the order they are
        applied, so every term carries ``(-1)^(q+1)`` relative to the
        first-map-first formula.
        """
        src, tgt = self.space(p, q), self.space(p, q + 1)
        F = self.F
        flip = (-1) ** (q + 1)
        b = _Builder(F, (tgt.dim, src.dim))
        g = self.g
        for ti, R in enumerate(tgt.rects):
            roff = tgt.offsets[ti]
            Bin, Bout = self.T(tgt.in_objs(R)), self.T(tgt.out_objs(R))
            # first column
            S = tuple((o[1:], k[1:]) for o, k in R)
            coff = src.locate(S)
            if coff is not None:
                ent = tuple((o[0], o[1], k[0]) for o, k in R)
                Fm = self.column_mor(ent)
                Ain = Fm.tgt
                post = self.env.identity(Bout)
                blk = self.sandwich(("d0f", ent, Bout), Ain, Bout, Fm, post)
                b.add(roff, coff, flip, blk)
            # inner compositions
            for j in range(q):
                opts = []
                for o, k in R:
                    comp = g.compose_basis(o[j], o[j + 1], o[j + 2], k[j + 1], k[j])
                    no = o[:j + 1] + o[j + 2:]
                    opts.append([((no, k[:j] + (kk,) + k[j + 2:]), c) for kk, c in comp.items()])
                blk = self.identity_map(Bin, Bout)
                for combo in itertools.product(*opts):
                    S = tuple(r for r, _ in combo)
                    coff = src.locate(S)
                    if coff is None:
                        continue
                    c = flip * (-1) ** (j + 1)
                    for _, x in combo:
                        c = F.mul(c, x)
                    b.add(roff, coff, c, blk)
            # last column
            S = tuple((o[:-1], k[:-1]) for o, k in R)
            coff = src.locate(S)
            if coff is not None:
                ent = tuple((o[-2], o[-1], k[-1]) for o, k in R)
                Fm = self.column_mor(ent)
                Aout = Fm.src
                pre = self.env.identity(Bin)
                blk = self.sandwich(("d0l", ent, Bin), Bin, Aout, pre, Fm)
                b.add(roff, coff, flip * (-1) ** (q + 1), blk)
        return b.matrix()

    # d1 ---------------------------------------------------------------
    def d1(self, p, q):
        """``C^{pq} -> C^{p+1,q}``, multiplied by ``(-1)^(p+q)``.

        The untwisted ``d0`` and ``d1`` commute; the twist makes them anticommute.
        """
        src, tgt = self.space(p, q), self.space(p + 1, q)
        F = self.F
        b = _Builder(F, (tgt.dim, src.dim))
        g, env = self.g, self.env
        tw = (-1) ** (p + q)
        n = p + 2
        lc = left_comb(n)
        first_tree = (LEAF, left_comb(n - 1)) if n > 2 else (LEAF, LEAF)
        for ti, R in enumerate(tgt.rects):
            roff = tgt.offsets[ti]
            ins, outs = tgt.in_objs(R), tgt.out_objs(R)
            # first row tensored on the left
            S = R[1:]
            coff = src.locate(S)
            if coff is not None:
                o0, k0 = R[0]
                comp = self.row_composite(o0, k0)
                Ain, Aout = self.T(ins[1:]), self.T(outs[1:])
                lv_in = [g.members[m] for m in ins]
                lv_out = [g.members[m] for m in outs]
                pre = env.iso(lc, first_tree, lv_in)
                post = env.iso_inv(lc, first_tree, lv_out)
                for kk, c in comp.items():
                    Fm = g.mor(o0[0], o0[-1], kk)
                    key = ("d1f", o0[0], o0[-1], kk, ins, outs)
                    blk = self._outmap(key, Ain, Aout, pre.src, post.tgt,
                                       lambda e, Fm=Fm, pre=pre, post=post:
                                       env.compose(post, env.compose(env.tensor(Fm, e), pre)))
                    b.add(roff, coff, F.mul(tw, c), blk)
            # last row tensored on the right
            S = R[:-1]
            coff = src.locate(S)
            if coff is not None:
                ol, kl = R[-1]
                comp = self.row_composite(ol, kl)
                Ain, Aout = self.T(ins[:-1]), self.T(outs[:-1])
                for kk, c in comp.items():
                    Fm = g.mor(ol[0], ol[-1], kk)
                    key = ("d1l", ol[0], ol[-1], kk, ins[:-1], outs[:-1])
                    blk = self._outmap(key, Ain, Aout, env.otimes(Ain, Fm.src), env.otimes(Aout, Fm.tgt),
                                       lambda e, Fm=Fm: env.tensor(e, Fm))
                    b.add(roff, coff, F.mul(tw * (-1) ** p, c), blk)
        # merged rows: the i = 1 case of the block construction
        for j in range(p + 1):
            path = _vertical_path((LEAF, LEAF), q)
            self._block_terms(b, src, tgt, 1, j, path, tw * (-1) ** (j + 1))
        return b.matrix()

    # d_i, i >= 2 --------------------------------------------------------
    def di_terms(self, i, p, q):
        """Unsigned term matrices ``{(j, path index): C^{p-i,q+i-1} -> C^{pq}}``."""
        key = (i, p, q)
        if key in self._terms:
            return self._terms[key]
        out = {}
        if p - i >= 0:
            src, tgt = self.space(p - i, q + i - 1), self.space(p, q)
            paths = admissible_paths(i - 1, q)
            for j in range(p - i + 1):
                for pi, path in enumerate(paths):
                    b = _Builder(self.F, (tgt.dim, src.dim))
                    self._block_terms(b, src, tgt, i, j, path, 1)
                    out[(j, pi)] = b.matrix()
        self._terms[key] = out
        return out

    def di(self, i, p, q, signs):
        if p - i < 0:
            return SparseMatrix.zeros((self.space(p, q).dim, 0), self.F)
        src, tgt = self.space(p - i, q + i - 1), self.space(p, q)
        paths = admissible_paths(i - 1, q)
        acc = SparseMatrix.zeros((tgt.dim, src.dim), self.F)
        for (j, pi), m in self.di_terms(i, p, q).items():
            s = signs.sign(i, p, q, j, paths[pi])
            if s:
                acc = acc + (m if s == 1 else -m)
        return acc

    def _block_terms(self, b, src, tgt, i, j, path, sign):
        """Add the (row j, path) term: rows ``j..j+i`` of the target fuse into one row."""
        g, env, F = self.g, self.env, self.F
        p = tgt.p
        n_rows = p + 1
        lc = left_comb(n_rows)
        outer = left_comb(n_rows - i)
        verts = [(aposet.parse(t) if isinstance(t, str) else t, n) for t, n in path.vertices]
        tags = path.tags
        t0, tL = verts[0][0], verts[-1][0]
        W0 = substitute(outer, j, t0)
        WL = substitute(outer, j, tL)
        for ti, R in enumerate(tgt.rects):
            roff = tgt.offsets[ti]
            block = R[j:j + i + 1]
            # chain of objects and morphisms for the fused row
            exprs, mors = [], []
            for (t, n) in verts:
                exprs.append(tree_expr(t, [o[n] for o, _ in block]))
            for l, tag in enumerate(tags):
                (t, n), (t2, _) = verts[l], verts[l + 1]
                if tag == "V":
                    mors.append(env.tree_mor(t, [g.mor(o[n], o[n + 1], k[n]) for o, k in block]))
                else:
                    mors.append(env.iso(t, t2, [g.members[o[n]] for o, _ in block]))
            # other rows, with identities at horizontal steps
            def stretch(row):
                o, k = row
                objs = [o[n] for _, n in verts]
                ks = []
                for l, tag in enumerate(tags):
                    n = verts[l][1]
                    ks.append(k[n] if tag == "V" else 0)
                return tuple(objs), tuple(ks)
            before = tuple(stretch(r) for r in R[:j])
            after = tuple(stretch(r) for r in R[j + i + 1:])
            ins, outs = tgt.in_objs(R), tgt.out_objs(R)
            for c0, cL, objs, coeff_opts in self._copy_chains(exprs, mors):
                for combo in itertools.product(*coeff_opts):
                    ks = tuple(k for k, _ in combo)
                    S = before + ((objs, ks),) + after
                    if not is_reduced(S):
                        continue
                    coff = src.locate(S)
                    if coff is None:
                        continue
                    c = sign
                    for _, x in combo:
                        c = F.mul(c, x)
                    if not c:
                        continue
                    key = ("blk", i, j, t0, tL, c0, cL, exprs[0], exprs[-1], ins, outs)
                    blk = self._maps.get(key)
                    if blk is None:
                        sin = tuple(r[0][0] for r in S)
                        sout = tuple(r[0][-1] for r in S)
                        Ain, Aout = self.T(sin), self.T(sout)
                        lv_in = [g.members[m] for m in ins]
                        lv_out = [g.members[m] for m in outs]
                        pi_ins = self._insert(outer, j, sin, g.projection(exprs[0], c0), in_side=True)
                        io_ins = self._insert(outer, j, sout, g.inclusion(exprs[-1], cL), in_side=False)
                        pre = env.compose(pi_ins, env.iso(lc, W0, lv_in))
                        post = env.compose(env.iso_inv(lc, WL, lv_out), io_ins)
                        blk = self.sandwich(key, Ain, Aout, pre, post)
                    b.add(roff, coff, c, blk)

    def _insert(self, outer, j, ms, mor, in_side):
        """``1 (x) ... (x) mor (x) ... (x) 1`` along ``outer``, ``mor`` at leaf ``j``."""
        g, env = self.g, self.env
        mors = []
        for r, m in enumerate(ms):
            mors.append(mor if r == j else env.identity(g.members[m]))
        return env.tree_mor(outer, mors)

    def _copy_chains(self, exprs, mors):
        """Expand a chain of morphisms between decomposed objects into member chains.

        Yields ``(first copy, last copy, member objects, per-column coordinate options)``.
        """
        g = self.g
        cps = [g.copies(e)[1] for e in exprs]
        slot_owner = []
        for cl in cps:
            own = {}
            for ci, (m, pos) in enumerate(cl):
                for li, s in enumerate(pos):
                    own[s] = (ci, li)
            slot_owner.append(own)
        # restricted blocks per column: (c_l) -> {c_{l+1}: coords}
        blocks = []
        for l, M in enumerate(mors):
            per = defaultdict(lambda: defaultdict(dict))
            for (t, s), vec in M.ent.items():
                cs, ls = slot_owner[l][s]
                ct, lt = slot_owner[l + 1][t]
                per[cs][ct][(lt, ls)] = vec
            blocks.append(per)
        out = []

        def dfs(l, c, objs, opts, c0):
            if l == len(mors):
                out.append((c0, c, tuple(objs), list(opts)))
                return
            for ct, ent in blocks[l].get(c, {}).items():
                a = cps[l][c][0]
                bm = cps[l + 1][ct][0]
                m = EMor(g.members[a], g.members[bm], ent)
                co = g.coords(a, bm, g.env.coords(m))
                if not co:
                    continue
                dfs(l + 1, ct, objs + [bm], opts + [sorted(co.items())], c0)

        for c0 in range(len(cps[0])):
            dfs(0, c0, [cps[0][c0][0]], [], c0)
        return out

    # total ------------------------------------------------------------
    def component(self, kind, p, q, signs=None):
        """Differential block leaving ``C^{pq}``: kind 0, 1 or i >= 2."""
        if kind == 0:
            return self.d0(p, q)
        if kind == 1:
            return self.d1(p, q)
        return self.di(kind, p + kind, q - kind + 1, signs)


def _assembler_for(g):
    got = g.__dict__.get("_assembler")
    if got is None:
        got = g.__dict__["_assembler"] = Assembler(g)
    return got


def cochain_space(p, q, g):
    return _assembler_for(g).space(p, q)


def assemble_d0(p, q, g):
    """``C^{pq} -> C^{p,q+1}``."""
    return _assembler_for(g).d0(p, q)


def assemble_d1(p, q, g):
    """``C^{pq} -> C^{p+1,q}``."""
    return _assembler_for(g).d1(p, q)


def assemble_di(i, p, q, g, signs):
    """``C^{p-i,q+i-1} -> C^{pq}``; the zero map when ``p < i``."""
    return _assembler_for(g).di(i, p, q, signs)


def _vertical_path(t, q):
    verts = tuple((t, n) for n in range(q + 1))
    return aposet.Path(verts, ("V",) * q)


_ADM = {}


def admissible_paths(n, q):
    """Admissible paths of ``A_n x I_q`` in a fixed order."""
    key = (n, q)
    if key not in _ADM:
        _ADM[key] = list(aposet.product(aposet.associahedron(n), aposet.simplex_aposet(q)).paths)
    return _ADM[key]


def _arrays(rows, cols, vals, F):
    r = np.asarray(rows, dtype=np.int64)
    c = np.asarray(cols, dtype=np.int64)
    if F.is_prime:
        v = np.asarray([int(x) % F.p for x in vals], dtype=np.int64)
    else:
        v = np.empty(len(vals), dtype=object)
        v[:] = list(vals)
    return r, c, v


def _ones(n, F):
    if F.is_prime:
        return np.ones(n, dtype=np.int64)
    v = np.empty(n, dtype=object)
    v[:] = [F.one] * n
    return v


# ---------------------------------------------------------- verification

def _shift(kind):
    return (0, 1) if kind == 0 else (kind, 1 - kind)


def d_squared_component(A, k, p, q, signs):
    """``(d^2)_k`` leaving ``C^{pq}``: the sum of ``d_a d_b`` over ``a + b = k``."""
    tgt = (p + k, q - k + 2)
    acc = None
    for b_ in range(k + 1):
        a_ = k - b_
        db = _shift(b_)
        mid = (p + db[0], q + db[1])
        if mid[1] < 0 or tgt[1] < 0:
            continue
        if b_ >= 2 and q - b_ + 1 < 0:
            continue
        m1 = A.component(b_, p, q, signs)
        m2 = A.component(a_, mid[0], mid[1], signs)
        prod = compose(m2, m1)
        acc = prod if acc is None else acc + prod
    return tgt, acc


@dataclass
class D2Report:
    presentation: str
    window: Window
    sign_hash: str
    checks: list
    zero: bool

    @property
    def max_nonzero_entry(self):
        for c in self.checks:
            if not c["zero"]:
                return c
        return None

    def to_json(self):
        return {"presentation": self.presentation, "window": self.window.to_json(), "signs": self.sign_hash,
                "zero": self.zero, "checks": self.checks}


def d_squared_checks(A, window, signs, kinds=None):
    """Every homogeneous component ``(d^2)_k`` between window cells."""
    checks = []
    for (p, q) in window.cells():
        for k in range(0, window.p_max + 1 - p + 1):
            tgt = (p + k, q - k + 2)
            if tgt[1] < 0 or tgt not in window:
                continue
            if kinds is not None and k not in kinds:
                continue
            _, m = d_squared_component(A, k, p, q, signs)
            first = m.first_entry() if m is not None and m.nnz else None
            checks.append({"source": [p, q], "target": list(tgt), "component": k,
                           "nnz": 0 if m is None else m.nnz, "zero": first is None,
                           "witness": None if first is None else [int(first[0]), int(first[1]), str(first[2])]})
    return checks


def verify_d_squared(g, window, signs, assembler=None):
    A = assembler or Assembler(g)
    checks = d_squared_checks(A, window, signs)
    return D2Report(g.name, window, signs.hash, checks, all(c["zero"] for c in checks))


# ------------------------------------------------------------ sign search

PENTAGON = {"v0": "(((..).).)", "v1": "((..)(..))", "v2": "((.(..)).)", "v3": "(.((..).))", "v4": "(.(.(..)))"}

# (i, p, q, j, step tags or associahedron path, sign) fixed by the worked low-degree formulas
ANCHORS = [
    (2, 2, 0, 0, ("H",), 1),
    (2, 2, 1, 0, ("V", "H"), 1),
    (2, 2, 1, 0, ("H", "V"), -1),
    (2, 3, 0, 0, ("H",), 1),
    (2, 3, 0, 1, ("H",), 1),
    (3, 3, 0, 0, ("v0", "v1", "v4"), 1),
    (3, 3, 0, 0, ("v2", "v3", "v4"), -1),
    (3, 3, 0, 0, ("v0", "v2", "v4"), -1),
]


def _anchor_path(i, q, verts):
    for path in admissible_paths(i - 1, q):
        if verts[0] in ("H", "V"):
            if tuple(path.tags) == tuple(verts):
                return path
        elif _a_projection(path) == tuple(PENTAGON[v] for v in verts):
            return path
    raise KeyError(verts)


def anchors_hold(signs, upto=None):
    for i, p, q, j, verts, want in ANCHORS:
        if upto is not None and i not in upto:
            continue
        if signs.sign(i, p, q, j, _anchor_path(i, q, verts)) != want:
            return False
    return True


def _probe(probe, window):
    from .moncat import builtin
    if isinstance(probe, str):
        return builtin(probe)[1], window
    if isinstance(probe, tuple):
        g, w = probe
        return (builtin(g)[1] if isinstance(g, str) else g), w
    return probe, window


DEFAULT_PROBES = (("vec:2:omega", Window.total(4)), ("vec:3:omega", Window.total(4)), ("quiver:2", Window.total(3)))


def seed_convention(i_max):
    """The structured starting point: ``(-1)^(inv(P) + j q)`` times the path signs."""
    bits = {}
    for i in range(2, i_max + 1):
        v = [0] * len(MONOMIALS)
        v[SignConvention.FIELDS.index("inv")] = 1
        v[SignConvention.FIELDS.index("jq")] = 1
        bits[i] = tuple(v)
    return SignConvention(bits, source="seed")


def fit_bits(i, terms):
    """Ansatz bits reproducing the most of ``terms`` (``(i, p, q, j, path), sign`` pairs).

    Ties go to the lexicographically smallest bit vector.
    """
    best, best_hits = None, -1
    rows = []
    for (i_, p, q, j, path), v in terms:
        inv = _inversions(path)
        mono = [f(j, p, q, inv) % 2 for _, f in MONOMIALS]
        target = 0 if v * path_sign(i - 1, _a_projection(path)) == 1 else 1
        rows.append((mono, target))
    for bits in itertools.product((0, 1), repeat=len(MONOMIALS)):
        hits = sum(1 for mono, t in rows if sum(b * m for b, m in zip(bits, mono)) % 2 == t)
        if hits > best_hits:
            best, best_hits = bits, hits
            if hits == len(rows):
                break
    return best


def _unknowns(i, window):
    out = []
    for (p, q) in window.cells():
        if p - i < 0:
            continue
        for j in range(p - i + 1):
            for pi, path in enumerate(admissible_paths(i - 1, q)):
                out.append((i, p, q, j, path, SignConvention.key(i, p, q, j, path)))
    return out


def _flat(m, base, ncols):
    if m is None or not m.nnz:
        return np.zeros(0, dtype=np.int64), []
    return base + m.rows.astype(np.int64) * ncols + m.cols.astype(np.int64), m.vals.tolist()


def _level_system(asm, k, signs, cols):
    """Rows of ``(d^2)_k = 0`` as linear equations in the open signs.

    ``cols`` maps term keys of the open levels to column indices; every other
    sign is read from ``signs``.  A row is a sorted tuple of ``(column, value)``
    with column ``-1`` holding the right-hand side.  Identical rows are merged.
    """
    open_levels = {int(key.split("|", 1)[0]) for key in cols}
    known_signs = _Masked(signs, open_levels)
    rows = {}
    field = None
    for A, w in asm:
        field = field or A.F
        if A.F.p != field.p:
            raise ValueError("sign probes must share a field")
        for (p, q) in w.cells():
            tgt = (p + k, q - k + 2)
            if tgt[1] < 0 or tgt not in w:
                continue
            parts = []  # (matrix, column)
            known = None
            for b_ in range(k + 1):
                a_ = k - b_
                db = _shift(b_)
                mid = (p + db[0], q + db[1])
                if mid[1] < 0 or (b_ >= 2 and q - b_ + 1 < 0):
                    continue
                if a_ in open_levels and b_ in open_levels:
                    raise ValueError("both factors open")
                if a_ in open_levels:
                    m1 = A.component(b_, p, q, known_signs)
                    cell = (mid[0] + a_, mid[1] - a_ + 1)
                    paths = admissible_paths(a_ - 1, cell[1])
                    for (j, pi), m in A.di_terms(a_, *cell).items():
                        parts.append((compose(m, m1), cols[SignConvention.key(a_, *cell, j, paths[pi])]))
                elif b_ in open_levels:
                    m2 = A.component(a_, mid[0], mid[1], known_signs)
                    cell = (p + b_, q - b_ + 1)
                    paths = admissible_paths(b_ - 1, cell[1])
                    for (j, pi), m in A.di_terms(b_, *cell).items():
                        parts.append((compose(m2, m), cols[SignConvention.key(b_, *cell, j, paths[pi])]))
                else:
                    prod = compose(A.component(a_, mid[0], mid[1], known_signs), A.component(b_, p, q, known_signs))
                    known = prod if known is None else known + prod
            entries = defaultdict(dict)
            for m, c in parts:
                for r, cc, v in m.entries():
                    d = entries[(r, cc)]
                    d[c] = field.add(d.get(c, field.zero), v)
            if known is not None:
                for r, cc, v in known.entries():
                    d = entries[(r, cc)]
                    d[-1] = field.neg(v)
            for d in entries.values():
                row = tuple(sorted((c, v) for c, v in d.items() if v))
                if row:
                    rows[row] = (A.g.name, (p, q))
    return field, rows


class _Masked:
    """A convention whose terms on the given levels all vanish."""

    def __init__(self, base, levels):
        self.base, self.levels = base, set(levels)
        self.hash = base.hash

    def sign(self, i, p, q, j, path):
        return 0 if i in self.levels else self.base.sign(i, p, q, j, path)


def _lemma_rows(unk, cols, field):
    """Generic cancellations on ``q = 0`` cells: paired deletions of associahedron paths cancel."""
    rows = {}
    by_cell = defaultdict(dict)
    for i, p, q, j, path, key in unk:
        if q == 0 and i >= 3:
            by_cell[(i, p, j)][tuple(v for v, _ in path.vertices)] = cols[key]
    for (i, p, j), idx in by_cell.items():
        for (p1, k1), (p2, k2) in aposet.cancelling_pairs(i - 1):
            c1, c2 = idx[p1], idx[p2]
            v1, v2 = field((-1) ** k1), field((-1) ** k2)
            if c1 == c2:
                continue
            if c1 > c2:
                c1, c2, v1, v2 = c2, c1, v2, v1
            # normalise so equal rows from different cells merge
            inv = field.inv(v1)
            rows[((c1, field.one), (c2, field.mul(v2, inv)))] = ("lemma", (i, p, j))
    return rows


def _solve_level(field, rows, n, fixed, seed):
    """Solve the level system with ``fixed`` columns pinned; free columns take ``seed``.

    Returns ``(values, free columns)`` or ``None`` if inconsistent or not +-1.
    """
    mat = {}
    r = 0
    for row in rows:
        for c, v in row:
            mat[(r, n if c == -1 else c)] = v
        r += 1
    for c, v in fixed.items():
        mat[(r, c)] = field.one
        mat[(r, n)] = field(v)
        r += 1
    if not r:
        return list(seed), list(range(n))
    piv, prows = rref_rows(SparseMatrix.from_dict((r, n + 1), field, mat))
    if n in piv:
        return None
    free = [c for c in range(n) if c not in piv]
    vals = list(seed)
    for c, row in zip(piv, prows):
        v = row.get(n, field.zero)
        for c2, x in row.items():
            if c2 != c and c2 != n:
                v = field.add(v, field.neg(field.mul(x, field(seed[c2]))))
        vals[c] = v
    one, mone = field.one, field.neg(field.one)
    out = []
    for v in vals:
        v = field(v)
        if v == one:
            out.append(1)
        elif v == mone:
            out.append(-1)
        else:
            return None
    return out, free


def resolve_signs(probes=None, window=None, i_max=None, cache_dir=None, log=None):
    """Signs for every ``d_i`` term on the window, certified by ``(d^2)_i = 0`` on every probe.

    Once the levels below ``i`` are fixed, ``(d^2)_i`` and ``(d^2)_{i+1}`` are
    jointly linear in the signs of ``d_i`` and ``d_{i+1}``.  Each step solves
    that system exactly with the anchors pinned, keeps the level ``i`` part
    (free signs take their seed value) and moves up one level.  ``probes`` are built-in names, generators, or
    ``(probe, window)`` pairs.  Raises :class:`Unresolvable` when a level has no
    +-1 solution.
    """
    window = window or Window.total(4)
    probes = probes or DEFAULT_PROBES
    runs = [_probe(s, window) for s in probes]
    i_max = i_max or max(w.p_max for _, w in runs)
    cover = Window(max(w.p_max for _, w in runs), max(w.q_max for _, w in runs), max(w.n_max for _, w in runs))
    key = content_hash({"probes": [(g.name, g.P.hash, w.to_json()) for g, w in runs], "i_max": i_max,
                        "anchors": ANCHORS, "ansatz": list(SignConvention.FIELDS), "method": "level-solve"})
    cache_dir = cache_dir if cache_dir is not None else os.environ.get(CACHE_ENV)
    path = os.path.join(cache_dir, f"signs-{key}.json") if cache_dir else None
    if path and os.path.exists(path):
        return SignConvention.load(path)
    asm = [(Assembler(g), w) for g, w in runs]
    for k in (0, 1):
        for A, w in asm:
            for (p, q) in w.cells():
                tgt = (p + k, q - k + 2)
                if tgt in w:
                    _, m = d_squared_component(A, k, p, q, SignConvention())
                    if m is not None and m.nnz:
                        raise Unresolvable(f"(d^2)_{k}", (p, q), m.first_entry())
    signs = seed_convention(i_max)
    for i in range(2, i_max + 1):
        # (d^2)_i and (d^2)_{i+1} are jointly linear in the level i and i+1 signs
        unk = _unknowns(i, cover) + (_unknowns(i + 1, cover) if i < i_max else [])
        if not unk:
            continue
        cols = {u[5]: c for c, u in enumerate(unk)}
        rows = {}
        for k in ((i, i + 1) if i < i_max else (i,)):
            field, r = _level_system(asm, k, signs, cols)
            rows.update(r)
        rows.update(_lemma_rows(unk, cols, field))
        fixed = {}
        for ai, ap, aq, aj, verts, want in ANCHORS:
            key_ = SignConvention.key(ai, ap, aq, aj, _anchor_path(ai, aq, verts))
            if key_ in cols:
                fixed[cols[key_]] = want
        seed = [signs.ansatz(*u[:5]) for u in unk]
        got = _solve_level(field, list(rows), len(unk), fixed, seed)
        if got is None:
            raise Unresolvable(f"(d^2)_{i}", "window", {"equations": len(rows), "unknowns": len(unk)})
        vals, free = got
        n_i = len(_unknowns(i, cover))
        if log:
            diff = sum(1 for v, s0 in zip(vals[:n_i], seed) if v != s0)
            log(f"level {i}: {n_i} signs, {len(rows)} distinct equations, "
                f"{sum(1 for c in free if c < n_i)} free, {diff} differ from the ansatz")
        bits = dict(signs.bits)
        bits[i] = fit_bits(i, [(u[:5], v) for u, v in zip(unk[:n_i], vals[:n_i])])
        signs = SignConvention(bits, "resolved", signs.table)
        signs = signs.with_entries({u[5]: v for u, v in zip(unk[:n_i], vals[:n_i])
                                    if signs.ansatz(*u[:5]) != v})
        if log:
            log(f"  fitted ansatz bits {bits[i]}, {len(signs.overrides())} table overrides so far")
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        signs.save(path)
    return signs


# ------------------------------------------------------ total complexes

def _assemble(A, cells, degrees, block, trusted, label, size_of=None):
    """GradedComplex from ``cells`` grouped by ``p + q``; ``block(src, tgt)`` gives a matrix or None."""
    F = A.F
    by_deg = {n: sorted(c for c in cells if c[0] + c[1] == n) for n in degrees}
    size_of = size_of or (lambda c: A.space(*c).dim)
    size = {c: size_of(c) for c in cells}
    dims = {n: sum(size[c] for c in by_deg[n]) for n in degrees}
    d = {}
    for n in degrees:
        if n + 1 not in by_deg:
            continue
        src, tgt = by_deg[n], by_deg[n + 1]
        blocks = {}
        for bj, s in enumerate(src):
            for bi, t in enumerate(tgt):
                m = block(s, t)
                if m is not None and m.nnz:
                    blocks[(bi, bj)] = m
        d[n] = block_matrix(blocks, [size[t] for t in tgt], [size[s] for s in src], F)
    return GradedComplex(F, dims, d, trusted, label)


def _kind(src, tgt):
    dp, dq = tgt[0] - src[0], tgt[1] - src[1]
    if (dp, dq) == (0, 1):
        return 0
    if dp >= 1 and dq == 1 - dp:
        return dp
    return None


def cached_component(A, k, p, q, signs, cache=None):
    """``A.component`` through an optional :class:`MatrixCache`."""
    if cache is None:
        return A.component(k, p, q, signs)
    params = {"presentation": A.g.P.hash, "generator": A.g.name, "members": A.g.members, "field": A.F.tag,
              "kind": k, "cell": [p, q], "signs": signs.hash if k >= 2 else None}
    return cache.get_or_build(params, lambda: A.component(k, p, q, signs))


def total_complex(g, window, signs, assembler=None, p_min=0, cache=None):
    """``TC`` truncated to ``window``; ``p_min > 0`` gives the subcomplex ``F_{p_min}``.

    Degree ``n`` is ``(+) C^{pq}`` over window cells with ``p + q = n``;
    degrees whose cohomology the truncation can affect are left out of
    ``trusted``.
    """
    A = assembler or Assembler(g)
    cells = [c for c in window.cells() if c[0] >= p_min]
    degrees = list(range(window.n_min, window.n_max + 1))

    def block(s, t):
        k = _kind(s, t)
        if k is None or t not in window:
            return None
        return cached_component(A, k, s[0], s[1], signs, cache)

    trusted = {n for n in degrees if window.trusted(n)}
    name = f"{g.name} TC" if not p_min else f"{g.name} F_{p_min}"
    return _assemble(A, cells, degrees, block, trusted, name)


def f_subcomplex(g, window, signs, level, assembler=None):
    """The vertical filtration piece ``F_level = (+)_{p >= level} C^{pq}``."""
    return total_complex(g, window, signs, assembler, p_min=level)


@dataclass
class Comparison:
    """A subcomplex or quotient with its comparison maps, one per degree.

    ``into=True``: maps go from ``complex`` to the ambient complex
    (inclusions); otherwise from the ambient complex to ``complex``.
    """

    complex: GradedComplex
    maps: dict
    into: bool = True

    def is_chain_map(self, ambient):
        for n, m in self.maps.items():
            if n + 1 not in self.maps:
                continue
            if self.into:
                lhs = compose(ambient.differential(n), m)
                rhs = compose(self.maps[n + 1], self.complex.differential(n))
            else:
                lhs = compose(self.complex.differential(n), m)
                rhs = compose(self.maps[n + 1], ambient.differential(n))
            if not (lhs - rhs).is_zero():
                return False
        return True

    def induced_ranks(self, ambient):
        """Rank of the map induced on cohomology, per degree where it is defined."""
        out = {}
        src, tgt = (self.complex, ambient) if self.into else (ambient, self.complex)
        for n, m in self.maps.items():
            out[n] = _induced_rank(src, tgt, m, n)
        return out


def _induced_rank(src, tgt, m, n):
    """``rank H^n(m)``: dim of ``m(Z_src)`` modulo ``B_tgt``."""
    z, _ = kernel_basis(src.differential(n))
    b = tgt.differential(n - 1)
    img = compose(m, z)
    return rank(hstack([b, img])) - rank(b)


def dy_subcomplex(g, window, signs, assembler=None):
    """``G^0``: per column ``ker(d0: C^{p0} -> C^{p1})`` with the restricted ``d1``.

    Returned with the inclusion into :func:`total_complex` in every degree.
    Higher ``d_i`` leave the ``q = 0`` row, so only ``d1`` survives.
    """
    A = assembler or Assembler(g)
    F = A.F
    ps = [p for p in range(window.p_max + 1) if (p, 0) in window and window.n_min <= p]
    K, free = {}, {}
    for p in ps:
        K[p], free[p] = kernel_basis(A.d0(p, 0))
    dims = {p: K[p].shape[1] for p in ps}
    d = {}
    for p in ps:
        if p + 1 in K:
            # kernel coordinates of a kernel vector are its free entries
            img = compose(A.d1(p, 0), K[p])
            d[p] = img.select_rows(free[p + 1])
    trusted = {n for n in ps if window.trusted(n)}
    cx = GradedComplex(F, dims, d, trusted, f"{g.name} G0")
    tc = total_complex(g, window, signs, A)
    maps = {}
    for n in ps:
        # place K[n] in the (n, 0) block of TC^n
        cells = sorted(c for c in window.cells() if c[0] + c[1] == n)
        off = 0
        for c in cells:
            if c == (n, 0):
                break
            off += A.space(*c).dim
        ent = {(off + r, c_): v for r, c_, v in K[n].entries()}
        maps[n] = SparseMatrix.from_dict((tc.dims[n], dims[n]), F, ent)
    return Comparison(cx, maps), tc


def hochschild_quotient(g, window, assembler=None):
    """``gr^0_F``: the ``p = 0`` row with ``d0``, and the projection from :func:`total_complex`."""
    A = assembler or Assembler(g)
    F = A.F
    qs = [q for q in range(window.q_max + 1) if (0, q) in window and q >= window.n_min]
    dims = {q: A.space(0, q).dim for q in qs}
    d = {q: A.d0(0, q) for q in qs if q + 1 in dims}
    trusted = {n for n in qs if window.trusted(n)}
    cx = GradedComplex(F, dims, d, trusted, f"{g.name} gr0")
    maps = {}
    for n in qs:
        cells = sorted(c for c in window.cells() if c[0] + c[1] == n)
        off = 0
        for c in cells:
            if c == (0, n):
                break
            off += A.space(*c).dim
        total = sum(A.space(*c).dim for c in cells)
        ent = {(r, off + r): F.one for r in range(dims[n])}
        maps[n] = SparseMatrix.from_dict((dims[n], total), F, ent)
    return Comparison(cx, maps, into=False)


def _offset(A, window, cell):
    n = cell[0] + cell[1]
    off = 0
    for c in sorted(c for c in window.cells() if c[0] + c[1] == n):
        if c == cell:
            return off
        off += A.space(*c).dim
    raise KeyError(cell)


# --------------------------------------------------------- unital column

@dataclass
class UnitalResult:
    """``UTC`` truncated to a window, with the column identities checked as matrices."""

    complex: GradedComplex
    column_dim: int
    checks: dict

    @property
    def ok(self):
        return all(v["zero"] for v in self.checks.values())


def _unit_mor(g, k):
    u = (g.P.unit,)
    return EMor(u, u, {(0, 0): {k: g.F.one}})


def unit_column_d1(A, q):
    """``C^{-1,q} -> C^{0,q}``: ``g -> g (x) f - f (x) g`` with ``f`` the row composite.

    Includes the ``(-1)^(p+q)`` twist at ``p = -1``.
    """
    g, env, F = A.g, A.env, A.F
    P = g.P
    u = (P.unit,)
    e = env.hom_dim(u, u)
    tgt = A.space(0, q)
    tw = (-1) ** (q - 1)
    rows, cols, vals = [], [], []
    for ti, R in enumerate(tgt.rects):
        (objs, ks), = R
        comp = A.row_composite(objs, ks)
        for gk in range(e):
            gm = _unit_mor(g, gk)
            acc = None
            for kk, c in comp.items():
                fm = env.scale(g.mor(objs[0], objs[-1], kk), c)
                left, right = env.tensor(gm, fm), env.tensor(fm, gm)
                if left.src != fm.src or right.src != fm.src or left.tgt != fm.tgt:
                    raise NoUnit(f"unit {P.unit!r} is not strict on member {objs[0]}")
                term = env.add(left, right, -1)
                acc = term if acc is None else env.add(acc, term)
            if acc is None:
                continue
            for r, v in env.coords(acc).items():
                rows.append(tgt.offsets[ti] + r)
                cols.append(gk)
                vals.append(F.mul(tw, v))
    return SparseMatrix.from_coo((tgt.dim, e), F, *_arrays(rows, cols, vals, F))


def unit_column_d0(A, q):
    """``C^{-1,q} -> C^{-1,q+1}``: zero for even ``q``, the identity for odd ``q``."""
    e = A.env.hom_dim((A.g.P.unit,), (A.g.P.unit,))
    if q % 2:
        return SparseMatrix.identity(e, A.F)
    return SparseMatrix.zeros((e, e), A.F)


def unital_extend(g, window, signs, assembler=None):
    """``TC`` plus the column ``C^{-1,q} = End(I)`` placed in total degree ``q - 1``."""
    if g.P.unit is None:
        raise NoUnit(f"{g.P.name} declares no unit")
    A = assembler or Assembler(g)
    u = (g.P.unit,)
    e = A.env.hom_dim(u, u)
    col = [(-1, q) for q in range(0, min(window.q_max + 1, window.n_max + 1) + 1)]
    cells = col + window.cells()
    degrees = list(range(-1, window.n_max + 1))

    def block(s, t):
        if s[0] == -1:
            if t == (-1, s[1] + 1):
                return unit_column_d0(A, s[1])
            if t == (0, s[1]) and t in window:
                return unit_column_d1(A, s[1])
            return None
        k = _kind(s, t)
        if k is None or t not in window:
            return None
        return A.component(k, s[0], s[1], signs)

    size_of = lambda c: e if c[0] == -1 else A.space(*c).dim
    trusted = {n for n in degrees if window.trusted(max(n, 0))}
    cx = _assemble(A, cells, degrees, block, trusted, f"{g.name} UTC", size_of)
    checks = {}
    for q in range(len(col) - 1):
        if (0, q + 1) not in window:
            continue
        lhs = compose(A.d0(0, q), unit_column_d1(A, q)) + compose(unit_column_d1(A, q + 1), unit_column_d0(A, q))
        checks[f"d0d1+d1d0 q={q}"] = {"zero": lhs.is_zero(), "nnz": lhs.nnz}
    for q in range(len(col)):
        if (1, q) not in window:
            continue
        sq = compose(A.d1(0, q), unit_column_d1(A, q))
        checks[f"d1d1 q={q}"] = {"zero": sq.is_zero(), "nnz": sq.nnz}
    return UnitalResult(cx, e, checks)


# ------------------------------------------------------- spectral sequence

def _complement_reps(Z, B, F):
    """Columns of ``Z`` completing the column span of ``B`` to that of ``[B | Z]``."""
    M = hstack([B, Z])
    pcols, _ = rref_rows(M)
    pick = [c - B.shape[1] for c in pcols if c >= B.shape[1]]
    return Z.select_cols(pick)


@dataclass
class SpectralPages:
    """Dimension tables ``{(p, q): dim}`` of the ``F``-filtration pages, with flags."""

    E0: dict
    E1: dict
    E2: dict
    flags1: dict
    flags2: dict
    d1: dict

    def trusted(self, page=2):
        E, fl = (self.E1, self.flags1) if page == 1 else (self.E2, self.flags2)
        return {c: v for c, v in E.items() if fl[c] == "ok"}

    def total(self, n, page=2):
        """``sum_{p+q=n} E_page^{pq}``, or None if some cell is untrusted."""
        E, fl = (self.E1, self.flags1) if page == 1 else (self.E2, self.flags2)
        cells = [c for c in E if c[0] + c[1] == n]
        if any(fl[c] != "ok" for c in cells):
            return None
        return sum(E[c] for c in cells)

    def to_json(self):
        def tab(E, fl=None):
            return [{"p": p, "q": q, "dim": v, **({"flag": fl[(p, q)]} if fl else {})}
                    for (p, q), v in sorted(E.items())]
        return {"E0": tab(self.E0), "E1": tab(self.E1, self.flags1), "E2": tab(self.E2, self.flags2)}


def spectral_sequence_F(g, window, signs=None, assembler=None):
    """``E0``, ``E1`` and ``E2`` of the vertical filtration ``F_p = (+)_{p' >= p} C^{p'q}``.

    ``E1^{pq} = H^q(C^{p*}, d0)``; the ``E1`` differential is ``d1`` applied
    to chosen representatives and read off modulo boundaries.  ``E2`` cells
    are flagged ``edge`` unless every cell they depend on is in the window.
    """
    A = assembler or Assembler(g)
    F = A.F
    cells = window.cells()
    E0 = {c: A.space(*c).dim for c in cells}
    dz = {}
    for p, q in cells:
        dz[(p, q)] = A.d0(p, q) if (p, q + 1) in window else None
    reps, bnd, E1, flags1 = {}, {}, {}, {}
    for p, q in cells:
        d_out = dz[(p, q)]
        B = dz[(p, q - 1)] if q > 0 else SparseMatrix.zeros((E0[(p, q)], 0), F)
        if d_out is None:
            flags1[(p, q)] = "edge"
            Z = SparseMatrix.identity(E0[(p, q)], F)
        else:
            flags1[(p, q)] = "ok"
            Z, _ = kernel_basis(d_out)
        R = _complement_reps(Z, B, F)
        reps[(p, q)], bnd[(p, q)] = R, B
        E1[(p, q)] = R.shape[1]
    d1 = {}
    for p, q in cells:
        if (p + 1, q) not in window:
            continue
        img = compose(A.d1(p, q), reps[(p, q)])
        B2, R2 = bnd[(p + 1, q)], reps[(p + 1, q)]
        x = solve_columns(hstack([B2, R2]), img)
        d1[(p, q)] = x.select_rows(list(range(B2.shape[1], B2.shape[1] + R2.shape[1])))
    E2, flags2 = {}, {}
    for p, q in cells:
        out = d1.get((p, q))
        inn = d1.get((p - 1, q))
        r_out = rank(out) if out is not None else 0
        r_in = rank(inn) if inn is not None else 0
        E2[(p, q)] = E1[(p, q)] - r_out - r_in
        ok = flags1[(p, q)] == "ok" and out is not None
        if p > 0:
            ok = ok and inn is not None and flags1[(p - 1, q)] == "ok"
        ok = ok and flags1.get((p + 1, q)) == "ok"
        flags2[(p, q)] = "ok" if ok else "edge"
    return SpectralPages(E0, E1, E2, flags1, flags2, d1)


# ------------------------------------------------------------- reporting

def report_header(g, window, signs):
    """Reproducibility header shared by every report."""
    return {
        "presentation": {"name": g.P.name, "hash": g.P.hash, "generator": g.name},
        "field": g.F.tag,
        "window": window.to_json(),
        "signs": {"hash": signs.hash, "source": signs.source},
    }


def cohomology_report(g, window, signs, assembler=None, check=True, cache=None):
    """JSON-ready summary of ``TC`` on a window.

    No timings are included, so reruns with the same inputs give identical output.
    """
    A = assembler or Assembler(g)
    d2 = verify_d_squared(g, window, signs, A) if check else None
    tc = total_complex(g, window, signs, A, cache=cache)
    rep = cohomology(tc, check=False)
    out = report_header(g, window, signs)
    out.update({
        "cells": [{"p": p, "q": q, "dim": A.space(p, q).dim} for p, q in window.cells()],
        "differential_checks": d2.to_json() if d2 is not None else None,
        "cohomology": rep.to_json()["cohomology"],
    })
    return out
