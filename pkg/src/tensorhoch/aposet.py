"""Posets with admissible paths: simplices, Stasheff associahedra and products.

Binary trees are nested 2-tuples with the string ``"."`` as leaf; their
canonical serialization is a balanced-parenthesis string such as
``"((..).)"``.  Associahedron vertices are these strings, so every vertex list
sorts deterministically and the left comb (the source) sorts first.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

LEAF = "."


# ------------------------------------------------------------------ trees

def serialize(t):
    return LEAF if t == LEAF else "(" + serialize(t[0]) + serialize(t[1]) + ")"


def parse(s):
    """Inverse of :func:`serialize`."""
    pos = 0

    def rec():
        nonlocal pos
        ch = s[pos]
        pos += 1
        if ch == LEAF:
            return LEAF
        if ch != "(":
            raise ValueError(f"bad tree string {s!r}")
        left = rec()
        right = rec()
        if s[pos] != ")":
            raise ValueError(f"bad tree string {s!r}")
        pos += 1
        return (left, right)

    t = rec()
    if pos != len(s):
        raise ValueError(f"trailing characters in {s!r}")
    return t


def n_leaves(t):
    return 1 if t == LEAF else n_leaves(t[0]) + n_leaves(t[1])


@lru_cache(maxsize=None)
def all_trees(n):
    """Full binary trees with ``n`` leaves, sorted by serialization."""
    if n == 1:
        return (LEAF,)
    out = []
    for k in range(1, n):
        for a in all_trees(k):
            for b in all_trees(n - k):
                out.append((a, b))
    return tuple(sorted(out, key=serialize))


def left_comb(n):
    t = LEAF
    for _ in range(n - 1):
        t = (t, LEAF)
    return t


def right_comb(n):
    t = LEAF
    for _ in range(n - 1):
        t = (LEAF, t)
    return t


def rotations(t):
    """Trees reachable by one move (uv)w -> u(vw) at some subterm."""
    if t == LEAF:
        return []
    out = []
    a, b = t
    if a != LEAF:
        out.append((a[0], (a[1], b)))
    out += [(x, b) for x in rotations(a)]
    out += [(a, x) for x in rotations(b)]
    return out


def rotation_site(s, t):
    """Locate the single rotation turning ``s`` into ``t``.

    Returns ``(offset, (u, v, w))``: the leaf offset of the rotated subterm and
    its three parts, so the move is ``(uv)w -> u(vw)`` there.
    """
    def rec(x, y, off):
        if x == LEAF or y == LEAF:
            return None
        if x[0] != LEAF and y == (x[0][0], (x[0][1], x[1])):
            return off, (x[0][0], x[0][1], x[1])
        if x[1] == y[1]:
            return rec(x[0], y[0], off)
        if x[0] == y[0]:
            return rec(x[1], y[1], off + n_leaves(x[0]))
        return None
    r = rec(s, t, 0)
    if r is None:
        raise ValueError(f"{serialize(s)} -> {serialize(t)} is not a single rotation")
    return r


@lru_cache(maxsize=None)
def rotation_path(s, t):
    """Shortest rotation sequence from ``s`` up to ``t`` (trees), ties broken by serialization.

    Coherence makes every such sequence give the same associator composite,
    so any deterministic choice will do.
    """
    if s == t:
        return (s,)
    prev = {s: None}
    frontier = [s]
    while frontier:
        nxt = []
        for x in frontier:
            for y in sorted(rotations(x), key=serialize):
                if y not in prev:
                    prev[y] = x
                    if y == t:
                        out = [y]
                        while prev[out[-1]] is not None:
                            out.append(prev[out[-1]])
                        return tuple(reversed(out))
                    nxt.append(y)
        frontier = nxt
    raise ValueError(f"{serialize(t)} is not above {serialize(s)} in the rotation order")


def subtree_blocks(t, off=0):
    """Leaf blocks ``(start, length)`` of all internal nodes."""
    if t == LEAF:
        return []
    nl = n_leaves(t[0])
    return ([(off, n_leaves(t))] + subtree_blocks(t[0], off) + subtree_blocks(t[1], off + nl))


def substitute(outer, pos, inner):
    """Replace leaf number ``pos`` of ``outer`` by ``inner``."""
    def rec(t, off):
        if t == LEAF:
            return (inner if off == pos else LEAF), off + 1
        a, off = rec(t[0], off)
        b, off = rec(t[1], off)
        return (a, b), off
    return rec(outer, 0)[0]


def contract(t, start, length):
    """Collapse the subtree on leaf block ``[start, start+length)`` to a leaf.

    Returns ``(outer, inner)``.
    """
    found = []

    def rec(x, off):
        n = n_leaves(x)
        if off == start and n == length:
            found.append(x)
            return LEAF
        if x == LEAF:
            return LEAF
        nl = n_leaves(x[0])
        return (rec(x[0], off), rec(x[1], off + nl))
    outer = rec(t, 0)
    if not found:
        raise ValueError("tree does not contain the block")
    return outer, found[0]


# ------------------------------------------------------------------ aposets

@dataclass(frozen=True)
class Path:
    vertices: tuple
    tags: tuple | None = None

    def __len__(self):
        return len(self.vertices) - 1

    @property
    def steps(self):
        return list(zip(self.vertices[:-1], self.vertices[1:]))


@dataclass(frozen=True, eq=False)
class Aposet:
    name: str
    vertices: tuple
    payload: dict
    edges: tuple
    paths: tuple
    dimension: int
    factors: tuple = ()
    _below: dict = field(default_factory=dict, repr=False)

    def less(self, u, v):
        """Strict order: ``u < v``."""
        if not self._below:
            self._below.update(_closure(self.vertices, self.edges))
        return u in self._below[v]

    def comparable(self, u, v):
        return self.less(u, v) or self.less(v, u)

    @property
    def source(self):
        return self.vertices[0] if self.factors == () else tuple(f.source for f in self.factors)

    @property
    def terminal(self):
        return self.vertices[-1] if self.factors == () else tuple(f.terminal for f in self.factors)

    def to_json(self):
        return {"name": self.name, "dimension": self.dimension,
                "vertices": [_jsonable(v) for v in self.vertices],
                "edges": [[_jsonable(u), _jsonable(v)] for u, v in self.edges],
                "admissible_paths": [{"vertices": [_jsonable(v) for v in p.vertices],
                                      "tags": list(p.tags) if p.tags else None} for p in self.paths]}


def _jsonable(v):
    return list(map(_jsonable, v)) if isinstance(v, tuple) else v


def _closure(vertices, edges):
    up = {v: [] for v in vertices}
    for a, b in edges:
        up[a].append(b)
    below = {v: set() for v in vertices}
    for v in vertices:
        stack = list(up[v])
        seen = set()
        while stack:
            w = stack.pop()
            if w in seen:
                continue
            seen.add(w)
            below[w].add(v)
            stack.extend(up[w])
    return below


@lru_cache(maxsize=None)
def simplex_aposet(n):
    """I_n: the chain 0 < 1 < ... < n with its unique maximal path."""
    if n < 0:
        raise ValueError("n must be >= 0")
    vs = tuple(range(n + 1))
    return Aposet(f"I_{n}", vs, {v: v for v in vs}, tuple((i, i + 1) for i in range(n)),
                  (Path(vs),), n)


def product(a, b):
    """Cartesian product; admissible paths are shuffles of factor paths."""
    vs = tuple(sorted(itertools.product(a.vertices, b.vertices), key=_vkey))
    edges = [((u, w), (u2, w)) for (u, u2) in a.edges for w in b.vertices]
    edges += [((u, w), (u, w2)) for u in a.vertices for (w, w2) in b.edges]
    seen = {}
    for q in a.paths:
        for r in b.paths:
            for p in shuffle_paths(q.vertices, r.vertices):
                seen.setdefault(p.vertices, p)
    paths = tuple(sorted(seen.values(), key=lambda p: tuple(map(_vkey, p.vertices))))
    return Aposet(f"({a.name} x {b.name})", vs, {v: v for v in vs}, tuple(sorted(edges, key=_vkey)),
                  paths, a.dimension + b.dimension, factors=(a, b))


def shuffle_paths(q, r):
    """All interleavings of step sequences of ``q`` (tag H) and ``r`` (tag V)."""
    m, n = len(q) - 1, len(r) - 1
    out = []
    for hpos in itertools.combinations(range(m + n), m):
        hs = set(hpos)
        i = j = 0
        verts = [(q[0], r[0])]
        tags = []
        for s in range(m + n):
            if s in hs:
                i += 1
                tags.append("H")
            else:
                j += 1
                tags.append("V")
            verts.append((q[i], r[j]))
        out.append(Path(tuple(verts), tuple(tags)))
    return out


def _vkey(v):
    if isinstance(v, tuple):
        return tuple(_vkey(x) for x in v)
    return (0, v, "") if isinstance(v, int) else (1, 0, v)


@dataclass(frozen=True, eq=False)
class Facet:
    parent: str
    block: tuple  # (start, length)
    vertices: tuple
    inner: Aposet
    outer: Aposet
    bijection: dict  # (inner vertex, outer vertex) -> parent vertex
    terminal: bool

    def paths(self):
        """Admissible paths of the facet, pushed into the parent."""
        prod = product(self.inner, self.outer)
        return [Path(tuple(self.bijection[v] for v in p.vertices), p.tags) for p in prod.paths]


@lru_cache(maxsize=None)
def associahedron(n):
    """A_n: bracketings of n+2 letters under the rotation order."""
    if n < 0:
        raise ValueError("n must be >= 0")
    L = n + 2
    trees = all_trees(L)
    vs = tuple(serialize(t) for t in trees)
    payload = dict(zip(vs, trees))
    edges = tuple(sorted((serialize(t), serialize(u)) for t in trees for u in rotations(t)))
    if n == 0:
        paths = (Path(vs),)
    else:
        term = serialize(right_comb(L))
        acc = set()
        for f in facets_of(n):
            if f.terminal:
                continue
            for q in f.paths():
                acc.add(q.vertices + (term,))
        paths = tuple(Path(p) for p in sorted(acc))
    return Aposet(f"A_{n}", vs, payload, edges, paths, n)


@lru_cache(maxsize=None)
def facets_of(n):
    if n < 1:
        raise ValueError("facets need n >= 1")
    L = n + 2
    term = serialize(right_comb(L))
    out = []
    for k in range(2, L):
        for s in range(0, L - k + 1):
            inner = associahedron(k - 2)
            outer = associahedron(L - k - 1)
            bij = {}
            for iv in inner.vertices:
                for ov in outer.vertices:
                    bij[(iv, ov)] = serialize(substitute(parse(ov), s, parse(iv)))
            verts = tuple(sorted(set(bij.values())))
            out.append(Facet(f"A_{n}", (s, k), verts, inner, outer, bij, term in verts))
    out.sort(key=lambda f: f.block)
    return tuple(out)


def facets(a):
    """Codimension-one faces of an associahedron, indexed by (block start, length)."""
    if not a.name.startswith("A_"):
        raise ValueError("facets() expects an associahedron")
    return list(facets_of(a.dimension))


def vertex_deletions(p):
    """The paths obtained by removing one vertex, in vertex order."""
    vs = p.vertices if isinstance(p, Path) else tuple(p)
    if len(vs) < 2:
        raise ValueError("need at least 2 vertices")
    return [Path(vs[:k] + vs[k + 1:]) for k in range(len(vs))]


def canonical_path(n):
    """The path of A_n that rotates at the root each time (the first-facet recursion)."""
    L = n + 2
    t = left_comb(L)
    out = [serialize(t)]
    for _ in range(n):
        t = (t[0][0], (t[0][1], t[1]))
        out.append(serialize(t))
    return tuple(out)


# ------------------------------------------------------------ the lemma

def cancelling_pairs(n):
    """Pairs ``((P, k), (P', k'))`` of admissible paths of A_n and deleted positions
    giving the same path, for every deleted path that is not a facet path."""
    paths = [p.vertices for p in associahedron(n).paths]
    facet_paths = {q.vertices for f in facets_of(n) for q in f.paths()} if n >= 1 else set()
    occ = {}
    for p in paths:
        for k in range(len(p)):
            occ.setdefault(p[:k] + p[k + 1:], []).append((p, k))
    out = []
    for q, lst in occ.items():
        if q in facet_paths:
            continue
        if len(lst) != 2:
            raise ValueError(f"deletion path {q} occurs {len(lst)} times")
        out.append(tuple(lst))
    return out


def path_signs(n):
    """Signs on admissible paths of A_n making the signed boundary identity hold.

    Each path pair produced by vertex deletion that is not a facet path must
    cancel; with signed deletion ``(-1)^k`` this is a linear system over GF(2)
    in the sign exponents.  The canonical (root-rotation) path gets sign +1
    and remaining freedom, if any, is fixed to the lexicographically smallest
    exponent vector.
    """
    paths = [p.vertices for p in associahedron(n).paths]
    idx = {p: i for i, p in enumerate(paths)}
    rows = []
    for (p1, k1), (p2, k2) in cancelling_pairs(n):
        i1, i2 = idx[p1], idx[p2]
        # (-1)^(e1 + k1) + (-1)^(e2 + k2) = 0  <=>  e1 + e2 = 1 + k1 + k2
        rows.append(({i1, i2} if i1 != i2 else set(), (1 + k1 + k2) % 2))
    anchor = idx[canonical_path(n)]
    rows.append(({anchor}, 0))
    sol = _solve_gf2(rows, len(paths))
    if sol is None:
        raise ValueError(f"no consistent path signs on A_{n}")
    return {p: (-1) ** sol[i] for p, i in idx.items()}


def _solve_gf2(rows, nvars):
    """Lexicographically smallest solution of a GF(2) system (sets of variables, rhs)."""
    piv = {}
    for vars_, rhs in rows:
        v = 0
        for x in vars_:
            v ^= 1 << (nvars - 1 - x)  # leftmost variable = highest bit
        r = rhs
        while v:
            top = v.bit_length() - 1
            if top in piv:
                pv, pr = piv[top]
                v ^= pv
                r ^= pr
            else:
                piv[top] = (v, r)
                break
        else:
            if r:
                return None
    # back-substitute with free variables = 0, highest bit first
    val = [0] * nvars
    for top in sorted(piv):
        pv, pr = piv[top]
        acc = pr
        rest = pv & ~(1 << top)
        while rest:
            b = rest.bit_length() - 1
            acc ^= val[nvars - 1 - b]
            rest &= ~(1 << b)
        val[nvars - 1 - top] = acc
    return val


@dataclass
class LemmaReport:
    n: int
    holds_mod2: bool
    holds_signed: bool
    mismatch_witness: tuple | None
    lhs_terms: int
    facet_terms: int


def boundary_lemma_check(n, signs=None):
    """Compare the deletion boundary of all admissible paths with the facet paths.

    ``signs`` maps each admissible path (vertex tuple) of A_n to +1/-1; by
    default :func:`path_signs` is used.  The signed check asks that after
    cancellation every facet path survives with coefficient +-1 and nothing
    else survives.
    """
    if not 1 <= n <= 5:
        raise ValueError("boundary_lemma_check supports 1 <= n <= 5")
    a = associahedron(n)
    if signs is None:
        signs = path_signs(n)
    elif hasattr(signs, "path_signs"):
        signs = signs.path_signs(n)
    lhs2, lhs = Counter(), Counter()
    for p in a.paths:
        vs = p.vertices
        for k in range(len(vs)):
            q = vs[:k] + vs[k + 1:]
            lhs2[q] += 1
            lhs[q] += signs[vs] * (-1) ** k
    facet_paths = Counter(q.vertices for f in facets_of(n) for q in f.paths())
    odd = {q for q, c in lhs2.items() if c % 2}
    fodd = {q for q, c in facet_paths.items() if c % 2}
    mod2 = odd == fodd
    witness = None
    if not mod2:
        witness = sorted(odd ^ fodd)[0]
    support = {q for q, c in lhs.items() if c}
    signed = support == set(facet_paths) and all(abs(lhs[q]) == 1 for q in support)
    if signed is False and witness is None:
        bad = sorted((support ^ set(facet_paths)) | {q for q in support if abs(lhs[q]) != 1})
        witness = bad[0] if bad else None
    return LemmaReport(n, mod2, signed, witness, sum(lhs2.values()), sum(facet_paths.values()))
