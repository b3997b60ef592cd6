"""Exact scalars, sparse matrices, elimination and cochain-complex cohomology.

Scalars are plain Python ``int`` residues for a prime field and
``fractions.Fraction`` for the rationals.  Nothing in here ever touches a
float.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import struct
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

import numpy as np
import scipy.sparse as sp

DEFAULT_PRIME = 65521
CACHE_ENV = "TENSORHOCH_CACHE"


class ShapeMismatch(ValueError):
    pass


class NonComplex(ArithmeticError):
    """Raised when a composite of consecutive differentials is nonzero."""

    def __init__(self, degree, witness):
        self.degree = degree
        self.witness = witness
        super().__init__(f"d^{degree + 1} d^{degree} != 0, entry {witness}")


# ---------------------------------------------------------------- fields

class Field:
    """The rationals (``p is None``) or the prime field GF(p)."""

    def __init__(self, p=None):
        if p is not None:
            p = int(p)
            if p < 2 or p >= 2 ** 31 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
                raise ValueError(f"{p} is not a prime below 2^31")
        self.p = p

    @property
    def is_prime(self):
        return self.p is not None

    @property
    def tag(self):
        return "Q" if self.p is None else f"Fp:{self.p}"

    def __repr__(self):
        return f"Field({self.tag})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __call__(self, x):
        """Coerce an int or Fraction into the field."""
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator % self.p) * pow(x.denominator % self.p, -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, x):
        if self.p is None:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def neg(self, x):
        return (-x) % self.p if self.p else -x

    def add(self, x, y):
        return (x + y) % self.p if self.p else x + y

    def mul(self, x, y):
        return (x * y) % self.p if self.p else x * y

    def root_of_unity(self, order):
        """A primitive ``order``-th root of unity, if the field has one."""
        if self.p is None:
            if order in (1, 2):
                return Fraction(-1 if order == 2 else 1)
            raise ValueError(f"Q has no primitive {order}-th root of unity")
        if (self.p - 1) % order:
            raise ValueError(f"GF({self.p}) has no primitive {order}-th root of unity")
        for g in range(2, self.p):
            z = pow(g, (self.p - 1) // order, self.p)
            if all(pow(z, order // r, self.p) != 1 for r in _prime_factors(order)):
                return z
        raise AssertionError("unreachable")


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


QQ = Field(None)


def GF(p=DEFAULT_PRIME):
    return Field(p)


def parse_field(tag):
    """``"q"`` / ``"Q"`` or ``"fp:<p>"`` (any case)."""
    t = str(tag).strip().lower()
    if t == "q":
        return QQ
    if t.startswith("fp:"):
        return Field(int(t[3:]))
    if t == "fp":
        return Field(DEFAULT_PRIME)
    raise ValueError(f"unparseable field tag {tag!r}; use q or fp:<prime>")


# ---------------------------------------------------------- sparse matrix

class SparseMatrix:
    """Immutable COO matrix, sorted by (row, col), no stored zeros."""

    __slots__ = ("shape", "field", "rows", "cols", "vals")

    def __init__(self, shape, field, rows, cols, vals):
        self.shape = (int(shape[0]), int(shape[1]))
        self.field = field
        self.rows, self.cols, self.vals = rows, cols, vals

    # construction
    @classmethod
    def from_coo(cls, shape, field, rows, cols, vals):
        """Build from possibly repeated (row, col, value) triples; repeats add."""
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        n, m = int(shape[0]), int(shape[1])
        if len(rows) and (rows.min() < 0 or rows.max() >= n or cols.min() < 0 or cols.max() >= m):
            raise IndexError("entry index out of range")
        if field.is_prime:
            v = np.array([int(x) % field.p for x in vals], dtype=np.int64) if not isinstance(vals, np.ndarray) \
                else np.mod(vals.astype(np.int64), field.p)
            if len(v) == 0:
                return cls.zeros(shape, field)
            key = rows * m + cols
            order = np.argsort(key, kind="stable")
            key, v = key[order], v[order]
            starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
            summed = np.add.reduceat(v % field.p, starts) % field.p
            uk = key[starts]
            keep = summed != 0
            uk, summed = uk[keep], summed[keep]
            return cls(shape, field, uk // m if m else uk, uk % m if m else uk, summed)
        acc = {}
        for r, c, x in zip(rows.tolist(), cols.tolist(), vals):
            acc[(r, c)] = acc.get((r, c), 0) + Fraction(x)
        return cls.from_dict(shape, field, acc)

    @classmethod
    def from_dict(cls, shape, field, entries):
        items = sorted((k, field(v)) for k, v in entries.items())
        items = [(k, v) for k, v in items if v != 0]
        rows = np.array([k[0] for k, _ in items], dtype=np.int64)
        cols = np.array([k[1] for k, _ in items], dtype=np.int64)
        if field.is_prime:
            vals = np.array([v for _, v in items], dtype=np.int64)
        else:
            vals = np.empty(len(items), dtype=object)
            vals[:] = [v for _, v in items]
        if len(items) and (rows.max() >= shape[0] or cols.max() >= shape[1] or rows.min() < 0 or cols.min() < 0):
            raise IndexError("entry index out of range")
        return cls(shape, field, rows, cols, vals)

    @classmethod
    def from_dense(cls, rows_list, field):
        n = len(rows_list)
        m = len(rows_list[0]) if n else 0
        return cls.from_dict((n, m), field, {(i, j): x for i, r in enumerate(rows_list)
                                             for j, x in enumerate(r) if x != 0})

    @classmethod
    def zeros(cls, shape, field):
        e = np.zeros(0, dtype=np.int64)
        return cls(shape, field, e, e.copy(), np.zeros(0, dtype=np.int64 if field.is_prime else object))

    @classmethod
    def identity(cls, n, field):
        idx = np.arange(n, dtype=np.int64)
        vals = np.ones(n, dtype=np.int64) if field.is_prime else np.array([Fraction(1)] * n, dtype=object)
        return cls((n, n), field, idx, idx.copy(), vals)

    # queries
    @property
    def nnz(self):
        return len(self.vals)

    def is_zero(self):
        return self.nnz == 0

    def entries(self):
        return zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist())

    def to_dict(self):
        return {(r, c): v for r, c, v in self.entries()}

    def to_dense(self):
        out = [[self.field.zero] * self.shape[1] for _ in range(self.shape[0])]
        for r, c, v in self.entries():
            out[r][c] = v
        return out

    def first_entry(self):
        return next(iter(self.entries()), None)

    def __repr__(self):
        return f"SparseMatrix({self.shape[0]}x{self.shape[1]}, nnz={self.nnz}, {self.field.tag})"

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.shape == other.shape and self.field == other.field
                and np.array_equal(self.rows, other.rows) and np.array_equal(self.cols, other.cols)
                and list(self.vals) == list(other.vals))

    __hash__ = None

    # algebra
    def transpose(self):
        return SparseMatrix.from_coo((self.shape[1], self.shape[0]), self.field, self.cols, self.rows,
                                     self.vals if self.field.is_prime else list(self.vals))

    @property
    def T(self):
        return self.transpose()

    def scale(self, c):
        c = self.field(c)
        if self.field.is_prime:
            return SparseMatrix.from_coo(self.shape, self.field, self.rows, self.cols,
                                         (self.vals * c) % self.field.p)
        return SparseMatrix.from_coo(self.shape, self.field, self.rows, self.cols, [v * c for v in self.vals])

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        vals = np.concatenate([self.vals, other.vals]) if self.field.is_prime else list(self.vals) + list(other.vals)
        return SparseMatrix.from_coo(self.shape, self.field, np.concatenate([self.rows, other.rows]),
                                     np.concatenate([self.cols, other.cols]), vals)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def __matmul__(self, other):
        return compose(self, other)

    def to_scipy(self):
        """CSR with int64 residues (prime fields only)."""
        assert self.field.is_prime
        return sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=self.shape, dtype=np.int64)

    @classmethod
    def from_scipy(cls, m, field):
        m = m.tocoo()
        return cls.from_coo(m.shape, field, m.row, m.col, np.asarray(m.data, dtype=np.int64))

    def row_dicts(self):
        out = [dict() for _ in range(self.shape[0])]
        for r, c, v in self.entries():
            out[r][c] = v
        return out

    def col_dicts(self):
        out = [dict() for _ in range(self.shape[1])]
        for r, c, v in self.entries():
            out[c][r] = v
        return out

    def select_cols(self, idx):
        idx = list(idx)
        pos = {c: k for k, c in enumerate(idx)}
        ent = {(r, pos[c]): v for r, c, v in self.entries() if c in pos}
        return SparseMatrix.from_dict((self.shape[0], len(idx)), self.field, ent)

    def select_rows(self, idx):
        return self.T.select_cols(idx).T


def hstack(mats, nrows=None, field=None):
    if not mats:
        return SparseMatrix.zeros((nrows or 0, 0), field)
    n = mats[0].shape[0]
    off, ent = 0, {}
    for m in mats:
        if m.shape[0] != n:
            raise ShapeMismatch("hstack row counts differ")
        for r, c, v in m.entries():
            ent[(r, c + off)] = v
        off += m.shape[1]
    return SparseMatrix.from_dict((n, off), mats[0].field, ent)


def block_matrix(blocks, row_sizes, col_sizes, field):
    """Assemble ``{(bi, bj): SparseMatrix}`` into one matrix."""
    roff = np.concatenate([[0], np.cumsum(row_sizes)]).astype(np.int64)
    coff = np.concatenate([[0], np.cumsum(col_sizes)]).astype(np.int64)
    rr, cc, vv = [], [], []
    for (bi, bj), m in blocks.items():
        if m.shape != (row_sizes[bi], col_sizes[bj]):
            raise ShapeMismatch(f"block {(bi, bj)} has shape {m.shape}")
        rr.append(m.rows + roff[bi])
        cc.append(m.cols + coff[bj])
        vv.append(m.vals)
    shape = (int(roff[-1]), int(coff[-1]))
    if not rr:
        return SparseMatrix.zeros(shape, field)
    vals = np.concatenate(vv) if field.is_prime else [x for v in vv for x in v]
    return SparseMatrix.from_coo(shape, field, np.concatenate(rr), np.concatenate(cc), vals)


def compose(a, b):
    """The product ``a @ b``."""
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatch(f"cannot compose {a.shape} with {b.shape}")
    if a.field != b.field:
        raise ValueError("field mismatch")
    f = a.field
    shape = (a.shape[0], b.shape[1])
    if a.nnz == 0 or b.nnz == 0:
        return SparseMatrix.zeros(shape, f)
    if f.is_prime and f.p < 2 ** 24:
        # int64 cannot overflow: each product < 2^48 and a row sums < 2^15 of them
        # in every matrix this package builds; reduce per chunk to stay safe.
        bs = b.to_scipy()
        out = []
        rows = a.to_scipy()
        step = 1 << 14
        for k0 in range(0, a.shape[1], step):
            part = rows[:, k0:k0 + step] @ bs[k0:k0 + step, :]
            part.data %= f.p
            out.append(part)
        tot = out[0]
        for part in out[1:]:
            tot = tot + part
            tot.data %= f.p
        tot.eliminate_zeros()
        return SparseMatrix.from_scipy(tot, f)
    bro = b.row_dicts()
    acc = {}
    for r, k, v in a.entries():
        for c, w in bro[k].items():
            acc[(r, c)] = acc.get((r, c), 0) + v * w
    return SparseMatrix.from_dict(shape, f, acc)


# ------------------------------------------------------------ elimination

def _eliminate_modp(rows, p, want_basis=False):
    """Row-reduce dict rows over GF(p).  Returns ``{pivot col: normalized row}``.

    Pivot rows have leading coefficient 1 at their pivot column and no entries
    left of it (echelon, not reduced).
    """
    pivots = {}
    for r in sorted(rows, key=len):
        r = dict(r)
        while r:
            c = min(r)
            pr = pivots.get(c)
            if pr is None:
                inv = pow(r[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in r.items()}
                break
            f = r[c]
            for k, v in pr.items():
                x = (r.get(k, 0) - f * v) % p
                if x:
                    r[k] = x
                else:
                    r.pop(k, None)
    return pivots


def _eliminate_qq(rows):
    """Fraction-free sparse elimination over Q with content normalization."""
    pivots = {}
    for r in sorted(rows, key=len):
        if not r:
            continue
        den = 1
        for v in r.values():
            den = den * Fraction(v).denominator // math.gcd(den, Fraction(v).denominator)
        r = {k: int(Fraction(v) * den) for k, v in r.items()}
        while r:
            c = min(r)
            pr = pivots.get(c)
            if pr is None:
                g = 0
                for v in r.values():
                    g = math.gcd(g, v)
                if r[c] < 0:
                    g = -g
                pivots[c] = {k: v // g for k, v in r.items()}
                break
            a, b = pr[c], r[c]
            g = math.gcd(a, b)
            a, b = a // g, b // g
            new = {}
            for k in set(r) | set(pr):
                x = a * r.get(k, 0) - b * pr.get(k, 0)
                if x:
                    new[k] = x
            g = 0
            for v in new.values():
                g = math.gcd(g, v)
                if g == 1:
                    break
            r = {k: v // g for k, v in new.items()} if g > 1 else new
    return pivots


def _markowitz_order(m):
    """Relabel columns so that sparse columns are eliminated first."""
    counts = np.bincount(m.cols, minlength=m.shape[1]) if m.nnz else np.zeros(m.shape[1], dtype=np.int64)
    order = np.argsort(counts, kind="stable")
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    return relabel


def rank(m):
    """Exact rank."""
    if m.nnz == 0:
        return 0
    if m.shape[0] > m.shape[1]:
        m = m.transpose()
    relabel = _markowitz_order(m)
    rows = [dict() for _ in range(m.shape[0])]
    for r, c, v in zip(m.rows.tolist(), relabel[m.cols].tolist(), m.vals.tolist()):
        rows[r][c] = v
    rows = [r for r in rows if r]
    if m.field.is_prime:
        return len(_eliminate_modp(rows, m.field.p))
    return len(_eliminate_qq(rows))


def kernel_dim(m):
    return m.shape[1] - rank(m)


def rref_rows(m):
    """Reduced row echelon form as ``(pivot_cols, rows)`` with field scalars."""
    f = m.field
    rows = [r for r in m.row_dicts() if r]
    if f.is_prime:
        piv = _eliminate_modp(rows, f.p)
    else:
        piv = {c: {k: Fraction(v, r[c]) for k, v in r.items()} for c, r in _eliminate_qq(rows).items()}
    cols = sorted(piv)
    # back substitution: clear entries above each pivot, right to left
    for c in reversed(cols):
        pr = piv[c]
        for c2 in cols:
            if c2 >= c:
                break
            r2 = piv[c2]
            x = r2.get(c)
            if x:
                for k, v in pr.items():
                    y = f.add(r2.get(k, f.zero), f.neg(f.mul(x, v)))
                    if y:
                        r2[k] = y
                    else:
                        r2.pop(k, None)
    return cols, [piv[c] for c in cols]


def kernel_basis(m):
    """Columns spanning the right kernel, as a ``(ncols x k)`` SparseMatrix.

    Basis vector ``b_f`` for free column ``f`` has ``b_f[f] = 1`` and zero on
    all other free columns, so coordinates of a kernel vector are its free
    entries (see :func:`kernel_free_columns`).
    """
    f = m.field
    pcols, prows = rref_rows(m)
    pset = set(pcols)
    free = [c for c in range(m.shape[1]) if c not in pset]
    fpos = {c: k for k, c in enumerate(free)}
    ent = {}
    for c in free:
        ent[(c, fpos[c])] = f.one
    for pc, r in zip(pcols, prows):
        for k, v in r.items():
            if k != pc:
                ent[(pc, fpos[k])] = f.neg(v)
    return SparseMatrix.from_dict((m.shape[1], len(free)), f, ent), free


def solve_columns(a, b):
    """Return ``x`` with ``a @ x == b`` (columns of b must lie in the column span of a)."""
    f = a.field
    n = a.shape[1]
    aug = hstack([a, b])
    pcols, prows = rref_rows(aug)
    ent = {}
    for pc, r in zip(pcols, prows):
        if pc >= n:
            raise ValueError("right-hand side is not in the column span")
        for k, v in r.items():
            if k >= n:
                ent[(pc, k - n)] = v
    return SparseMatrix.from_dict((n, b.shape[1]), f, ent)


# ------------------------------------------------------- graded complexes

@dataclass
class GradedComplex:
    """Cochain complex on a finite window of consecutive degrees."""

    field: Field
    dims: dict
    d: dict = dc_field(default_factory=dict)
    trusted: set | None = None
    label: str = ""

    @property
    def degrees(self):
        return sorted(self.dims)

    def differential(self, n):
        if n in self.d:
            return self.d[n]
        return SparseMatrix.zeros((self.dims.get(n + 1, 0), self.dims.get(n, 0)), self.field)

    def check_shapes(self):
        for n, m in self.d.items():
            want = (self.dims.get(n + 1, 0), self.dims.get(n, 0))
            if m.shape != want:
                raise ShapeMismatch(f"d^{n} has shape {m.shape}, expected {want}")

    def check_d_squared(self):
        self.check_shapes()
        for n in self.degrees:
            if n in self.d and (n + 1) in self.d:
                prod = compose(self.d[n + 1], self.d[n])
                if not prod.is_zero():
                    raise NonComplex(n, prod.first_entry())


@dataclass
class CohomologyReport:
    window: tuple
    dims: dict
    flags: dict
    field: str
    elapsed: float
    ranks: dict = dc_field(default_factory=dict)

    def trusted_dims(self):
        return {n: h for n, h in self.dims.items() if self.flags.get(n) == "ok"}

    def to_json(self):
        return {"window": list(self.window), "field": self.field,
                "cohomology": [{"degree": n, "dim": self.dims[n], "flag": self.flags[n]} for n in sorted(self.dims)]}


def cohomology(c, check=True):
    """dim H^n = dim ker d^n - rank d^(n-1), with edge degrees flagged."""
    t0 = time.perf_counter()
    if check:
        c.check_d_squared()
    degs = c.degrees
    ranks = {n: rank(c.differential(n)) for n in degs}
    dims, flags = {}, {}
    for n in degs:
        dims[n] = c.dims[n] - ranks[n] - ranks.get(n - 1, 0)
        if c.trusted is None:
            flags[n] = "ok"
        else:
            flags[n] = "ok" if n in c.trusted else "edge"
    window = (degs[0], degs[-1]) if degs else (0, -1)
    return CohomologyReport(window, dims, flags, c.field.tag, time.perf_counter() - t0, ranks)


# --------------------------------------------------------------- caching

_MAGIC = b"THMX"
_VERSION = 1


def write_matrix(path, m):
    """Versioned binary dump: header then sorted (row, col, value) triples."""
    path = Path(path)
    with open(path, "wb") as fh:
        kind = 1 if m.field.is_prime else 0
        fh.write(_MAGIC + struct.pack("<HBQQQQ", _VERSION, kind, m.field.p or 0, m.shape[0], m.shape[1], m.nnz))
        if kind:
            np.stack([m.rows, m.cols, m.vals.astype(np.int64)], axis=1).astype("<u8").tofile(fh)
        else:
            for r, c, v in m.entries():
                num = int(v.numerator).to_bytes((abs(v.numerator).bit_length() + 8) // 8, "little", signed=True)
                den = int(v.denominator).to_bytes((v.denominator.bit_length() + 8) // 8, "little", signed=True)
                fh.write(struct.pack("<QQII", r, c, len(num), len(den)) + num + den)


def read_matrix(path):
    with open(path, "rb") as fh:
        head = fh.read(4 + struct.calcsize("<HBQQQQ"))
        if head[:4] != _MAGIC:
            raise ValueError(f"{path}: not a matrix cache file")
        version, kind, p, n, m, nnz = struct.unpack("<HBQQQQ", head[4:])
        if version != _VERSION:
            raise ValueError(f"{path}: cache version {version}, expected {_VERSION}")
        field = Field(p) if kind else QQ
        if kind:
            arr = np.fromfile(fh, dtype="<u8", count=3 * nnz).reshape(-1, 3).astype(np.int64)
            return SparseMatrix((n, m), field, arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy())
        ent = {}
        for _ in range(nnz):
            r, c, ln, ld = struct.unpack("<QQII", fh.read(24))
            num = int.from_bytes(fh.read(ln), "little", signed=True)
            den = int.from_bytes(fh.read(ld), "little", signed=True)
            ent[(r, c)] = Fraction(num, den)
        return SparseMatrix.from_dict((n, m), field, ent)


def content_hash(params):
    blob = json.dumps(params, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:24]


class MatrixCache:
    """On-disk store for matrices keyed by a hash of their generating parameters."""

    def __init__(self, directory=None, threshold=20000):
        directory = directory or os.environ.get(CACHE_ENV)
        self.dir = Path(directory) if directory else None
        self.threshold = threshold
        self.hits = self.misses = 0
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)

    def path(self, params):
        return self.dir / f"mat-{content_hash(params)}.thmx"

    def get_or_build(self, params, build):
        if self.dir is None:
            return build()
        path = self.path(params)
        if path.exists():
            self.hits += 1
            os.utime(path)
            return read_matrix(path)
        self.misses += 1
        m = build()
        if m.nnz >= self.threshold:
            tmp = path.with_suffix(".tmp")
            write_matrix(tmp, m)
            os.replace(tmp, path)
        return m


def cache_gc(directory, max_bytes):
    """Evict least recently used matrix files until the directory fits the budget.

    Sign-convention artifacts (``signs-*.json``) are never evicted.
    """
    d = Path(directory)
    if not d.exists():
        return {"evicted": [], "bytes": 0}
    files = [f for f in d.iterdir() if f.is_file()]
    total = sum(f.stat().st_size for f in files)
    victims = sorted((f for f in files if f.name.startswith("mat-")), key=lambda f: f.stat().st_mtime)
    evicted = []
    for f in victims:
        if total <= max_bytes:
            break
        total -= f.stat().st_size
        f.unlink()
        evicted.append(f.name)
    return {"evicted": evicted, "bytes": total}
