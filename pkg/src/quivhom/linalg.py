"""Exact sparse linear algebra over Q, F_p and Z.

Vectors are plain dicts {index: scalar} without stored zeros.  Matrices are
stored by columns, since every differential in the package is assembled one
basis element (= one column) at a time.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd
from typing import Iterable


class Field:
    """Q (p == 0), F_p (p prime) or the integers (kind == 'ZZ').

    ZZ is not a field; it is accepted where integer matrices are needed
    (Smith normal form, simplicial complexes) and behaves like Q for ranks.
    """

    def __init__(self, p: int = 0, kind: str | None = None):
        self.p = p
        self.kind = kind or ("QQ" if p == 0 else "GF")

    def __repr__(self):
        return "GF(%d)" % self.p if self.p else self.kind

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.kind) == (other.p, other.kind)

    def __hash__(self):
        return hash((self.p, self.kind))

    @property
    def char(self) -> int:
        return self.p

    def __call__(self, x):
        """Coerce an int, Fraction or 'p/q' string into this field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p:
            x = Fraction(x)
            num, den = x.numerator % self.p, x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError("denominator divisible by %d" % self.p)
            return num * pow(den, -1, self.p) % self.p
        if self.kind == "ZZ":
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError("non-integer entry %s over ZZ" % x)
            return int(x)
        x = Fraction(x)
        return int(x) if x.denominator == 1 else x

    def norm(self, x):
        if self.p:
            return x % self.p
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x)
        return x

    def div(self, a, b):
        if self.p:
            return a * pow(b, -1, self.p) % self.p
        q = Fraction(a) / b
        return int(q) if q.denominator == 1 else q

    def to_str(self, x) -> str:
        return str(x)


QQ = Field(0)
ZZ = Field(0, "ZZ")


_GF_CACHE: dict[int, Field] = {}


def GF(p: int) -> Field:
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError("%d is not prime" % p)
    if p not in _GF_CACHE:
        _GF_CACHE[p] = Field(p)
    return _GF_CACHE[p]


# ---------------------------------------------------------------- vectors

def vec_axpy(y: dict, a, x: dict, p: int = 0) -> None:
    """y += a*x in place, dropping zeros."""
    if p:
        for k, v in x.items():
            s = (y.get(k, 0) + a * v) % p
            if s:
                y[k] = s
            else:
                y.pop(k, None)
    else:
        for k, v in x.items():
            s = y.get(k, 0) + a * v
            if s:
                y[k] = s
            else:
                y.pop(k, None)


def vec_scale(x: dict, a, p: int = 0) -> dict:
    if p:
        return {k: v * a % p for k, v in x.items() if v * a % p}
    return {k: v * a for k, v in x.items() if v * a}


# ---------------------------------------------------------------- matrices

class SparseMatrix:
    """rows x cols matrix, column-major dict storage."""

    __slots__ = ("nrows", "ncols", "cols", "field")

    def __init__(self, nrows: int, ncols: int, cols: list[dict] | None = None, field: Field = QQ):
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        if cols is None:
            cols = [{} for _ in range(ncols)]
        if len(cols) != ncols:
            raise ValueError("expected %d columns, got %d" % (ncols, len(cols)))
        self.cols = cols

    @classmethod
    def from_entries(cls, nrows, ncols, entries, field: Field = QQ):
        """entries: iterable of (row, col, value) or a {(row, col): value} dict.
        Repeated positions are summed."""
        if isinstance(entries, dict):
            entries = ((r, c, v) for (r, c), v in entries.items())
        cols = [{} for _ in range(ncols)]
        for r, c, v in entries:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError("entry (%d, %d) outside %dx%d" % (r, c, nrows, ncols))
            v = field.norm(cols[c].get(r, 0) + field(v))
            if v:
                cols[c][r] = v
            else:
                cols[c].pop(r, None)
        return cls(nrows, ncols, cols, field)

    @classmethod
    def from_dense(cls, rows: list[list], field: Field = QQ):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls.from_entries(nrows, ncols, ((i, j, v) for i, row in enumerate(rows)
                                               for j, v in enumerate(row) if v), field)

    @classmethod
    def identity(cls, n, field: Field = QQ):
        return cls(n, n, [{i: 1} for i in range(n)], field)

    @classmethod
    def zero(cls, nrows, ncols, field: Field = QQ):
        return cls(nrows, ncols, None, field)

    def __repr__(self):
        return "SparseMatrix(%dx%d, nnz=%d, %r)" % (self.nrows, self.ncols, self.nnz(), self.field)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def entries(self):
        """(row, col, value) triplets sorted by (col, row)."""
        for j, col in enumerate(self.cols):
            for i in sorted(col):
                yield i, j, col[i]

    def to_dense(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, j, v in self.entries():
            out[i][j] = v
        return out

    def rows(self) -> list[dict]:
        rows = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    @property
    def T(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows, self.rows(), self.field)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.cols == other.cols

    def apply(self, vec: dict) -> dict:
        p = self.field.p
        out: dict = {}
        for j, a in vec.items():
            if a:
                vec_axpy(out, a, self.cols[j], p)
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %dx%d @ %dx%d" % (self.nrows, self.ncols, other.nrows, other.ncols))
        return SparseMatrix(self.nrows, other.ncols, [self.apply(c) for c in other.cols], self.field)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        p = self.field.p
        cols = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            vec_axpy(c, 1, b, p)
            cols.append(c)
        return SparseMatrix(self.nrows, self.ncols, cols, self.field)

    def scale(self, a) -> "SparseMatrix":
        p = self.field.p
        return SparseMatrix(self.nrows, self.ncols, [vec_scale(c, a, p) for c in self.cols], self.field)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def change_field(self, field: Field) -> "SparseMatrix":
        """Base change; from Q/Z to F_p entries must have p-free denominators."""
        cols = []
        for col in self.cols:
            c = {}
            for i, v in col.items():
                w = field(v)
                if w:
                    c[i] = w
            cols.append(c)
        return SparseMatrix(self.nrows, self.ncols, cols, field)

    def submatrix(self, rows: list[int], cols: list[int]) -> "SparseMatrix":
        rpos = {r: k for k, r in enumerate(rows)}
        out = []
        for j in cols:
            out.append({rpos[i]: v for i, v in self.cols[j].items() if i in rpos})
        return SparseMatrix(len(rows), len(cols), out, self.field)

    @staticmethod
    def block_diag(mats: list["SparseMatrix"], field: Field = QQ) -> "SparseMatrix":
        cols, r0 = [], 0
        for m in mats:
            for c in m.cols:
                cols.append({i + r0: v for i, v in c.items()})
            r0 += m.nrows
        return SparseMatrix(r0, len(cols), cols, mats[0].field if mats else field)

    @staticmethod
    def hstack(mats: list["SparseMatrix"]) -> "SparseMatrix":
        cols = [dict(c) for m in mats for c in m.cols]
        return SparseMatrix(mats[0].nrows, len(cols), cols, mats[0].field)

    @staticmethod
    def vstack(mats: list["SparseMatrix"]) -> "SparseMatrix":
        ncols = mats[0].ncols
        cols = [{} for _ in range(ncols)]
        r0 = 0
        for m in mats:
            for j, c in enumerate(m.cols):
                for i, v in c.items():
                    cols[j][i + r0] = v
            r0 += m.nrows
        return SparseMatrix(r0, ncols, cols, mats[0].field)


# ---------------------------------------------------------------- rank

def _content(row: dict) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


def _integer_rows(rows: list[dict]) -> list[dict]:
    """Scale each rational row to a primitive integer row."""
    out = []
    for r in rows:
        if not r:
            continue
        den = 1
        for v in r.values():
            if isinstance(v, Fraction):
                den = den * v.denominator // gcd(den, v.denominator)
        if den != 1:
            r = {k: int(v * den) for k, v in r.items()}
        else:
            r = {k: int(v) for k, v in r.items()}
        g = _content(r)
        if g > 1:
            r = {k: v // g for k, v in r.items()}
        out.append(r)
    return out


def _eliminate(rows: list[dict], p: int) -> int:
    """Rank of the row set by sparse Gaussian elimination.

    Pivot choice: shortest remaining row, then the column in it with the
    fewest occurrences (a cheap Markowitz approximation), ties broken by
    index.  Over Q the elimination is fraction-free with content removal.
    """
    rows = [dict(r) for r in rows if r]
    col_rows: dict[int, set] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    heap = [(len(r), i) for i, r in enumerate(rows)]
    heapq.heapify(heap)
    alive = [True] * len(rows)
    rank = 0
    while heap:
        ln, i = heapq.heappop(heap)
        if not alive[i] or ln != len(rows[i]):
            continue
        piv = rows[i]
        alive[i] = False
        if not piv:
            continue
        c = min(piv, key=lambda k: (len(col_rows[k]), k))
        rank += 1
        a = piv[c]
        for k in piv:
            col_rows[k].discard(i)
        others = sorted(col_rows[c])
        for j in others:
            row = rows[j]
            b = row[c]
            if p:
                f = b * pow(a, -1, p) % p
                for k, v in piv.items():
                    s = (row.get(k, 0) - f * v) % p
                    if s:
                        if k not in row:
                            col_rows[k].add(j)
                        row[k] = s
                    elif k in row:
                        del row[k]
                        col_rows[k].discard(j)
            else:
                g = gcd(a, b)
                aa, bb = a // g, b // g
                if aa != 1:
                    for k in row:
                        row[k] *= aa
                for k, v in piv.items():
                    s = row.get(k, 0) - bb * v
                    if s:
                        if k not in row:
                            col_rows[k].add(j)
                        row[k] = s
                    elif k in row:
                        del row[k]
                        col_rows[k].discard(j)
                cg = _content(row) if row else 1
                if cg > 1:
                    for k in row:
                        row[k] //= cg
            heapq.heappush(heap, (len(row), j))
    return rank


def rank(M: SparseMatrix) -> int:
    """Exact rank over M.field (ZZ matrices are ranked over Q)."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    # eliminate along the shorter side
    rows = M.rows() if M.nrows <= M.ncols else [dict(c) for c in M.cols]
    p = M.field.p
    if not p:
        rows = _integer_rows(rows)
    return _eliminate(rows, p)


# ---------------------------------------------------------------- echelon

class Echelon:
    """Incrementally built echelon basis of a subspace.

    Every stored vector has its largest key as pivot, normalised to 1.
    Optionally each stored vector carries a tag vector that is transported
    linearly through the reductions; this is what makes kernels, preimages
    and homology-class coordinates fall out of one structure.
    """

    def __init__(self, field: Field = QQ):
        self.field = field
        self.piv: dict[int, tuple[dict, dict]] = {}

    def __len__(self):
        return len(self.piv)

    def reduce(self, vec: dict, tag: dict | None = None) -> tuple[dict, dict]:
        """Return (vec - sum c_i v_i, tag - sum c_i t_i)."""
        p = self.field.p
        v = dict(vec)
        t = dict(tag) if tag else {}
        if not self.piv:
            return v, t
        heap = [-k for k in v if k in self.piv]
        heapq.heapify(heap)
        queued = set(-k for k in heap)
        while heap:
            k = -heapq.heappop(heap)
            c = v.get(k)
            if not c:
                continue
            pv, pt = self.piv[k]
            for kk, x in pv.items():
                s = v.get(kk, 0) - c * x
                if p:
                    s %= p
                if s:
                    v[kk] = s
                    if kk in self.piv and kk not in queued:
                        queued.add(kk)
                        heapq.heappush(heap, -kk)
                else:
                    v.pop(kk, None)
            if pt:
                vec_axpy(t, -c, pt, p)
        return v, t

    def add(self, vec: dict, tag: dict | None = None) -> bool:
        """Insert vec (with tag).  Returns False if vec was dependent."""
        v, t = self.reduce(vec, tag)
        if not v:
            return False
        self._insert(v, t)
        return True

    def _insert(self, v: dict, t: dict) -> int:
        k = max(v)
        a = v[k]
        if a != 1:
            f = self.field
            v = {kk: f.div(x, a) for kk, x in v.items()}
            t = {kk: f.div(x, a) for kk, x in t.items()}
        self.piv[k] = (v, t)
        return k

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]


def kernel_basis(M: SparseMatrix) -> SparseMatrix:
    """Columns spanning ker M (ncols x (ncols - rank))."""
    ech = Echelon(M.field)
    kern = []
    for j, col in enumerate(M.cols):
        v, t = ech.reduce(col, {j: 1})
        if v:
            ech._insert(v, t)
        else:
            kern.append(t)
    return SparseMatrix(M.ncols, len(kern), kern, M.field)


def image_basis(M: SparseMatrix) -> Echelon:
    ech = Echelon(M.field)
    for col in M.cols:
        ech.add(col)
    return ech


class Solver:
    """Repeated solves of M x = y with a column echelon built once."""

    def __init__(self, M: SparseMatrix):
        self.M = M
        self.ech = Echelon(M.field)
        for j, col in enumerate(M.cols):
            self.ech.add(col, {j: 1})

    def solve(self, y: dict) -> dict | None:
        """Some x with M x = y, or None.  Deterministic choice."""
        r, t = self.ech.reduce(y, {})
        if r:
            return None
        p = self.M.field.p
        return vec_scale(t, -1, p)


def solve(M: SparseMatrix, y: dict) -> dict | None:
    return Solver(M).solve(y)


# ---------------------------------------------------------------- Smith form

class SnfResult:
    def __init__(self, factors: list[int]):
        self.factors = factors

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.factors if d > 1]

    def __repr__(self):
        return "SnfResult(factors=%r)" % (self.factors,)

    def __eq__(self, other):
        return isinstance(other, SnfResult) and self.factors == other.factors


def _snf_dense(A: list[list[int]]) -> list[int]:
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            piv = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // piv
                    if q:
                        A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // piv
                    if q:
                        for row in A:
                            row[j] -= q * row[t]
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest nonzero of row/column t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cands)
                A[t], A[i] = A[i], A[t]
                for row in A:
                    row[t], row[j] = row[j], row[t]
                continue
            # pivot must divide the rest of the block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def smith_normal_form(M: SparseMatrix) -> SnfResult:
    """Invariant factors d_1 | d_2 | ... of an integer matrix."""
    rows = [{k: int(v) for k, v in r.items()} for r in M.rows() if r]
    for r in rows:
        for v in r.values():
            if v != int(v):
                raise ValueError("non-integer matrix")
    ones = 0
    # sparse phase: peel off unit pivots
    col_rows: dict[int, set] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    alive = set(range(len(rows)))
    changed = True
    while changed:
        changed = False
        for i in sorted(alive):
            r = rows[i]
            unit = [c for c, v in r.items() if v in (1, -1)]
            if not unit:
                continue
            c = min(unit, key=lambda k: (len(col_rows[k]), k))
            a = r[c]
            alive.discard(i)
            for k in r:
                col_rows[k].discard(i)
            for j in sorted(col_rows[c]):
                row = rows[j]
                f = row[c] * a  # a = +-1 so a^-1 = a
                for k, v in r.items():
                    s = row.get(k, 0) - f * v
                    if s:
                        if k not in row:
                            col_rows[k].add(j)
                        row[k] = s
                    elif k in row:
                        del row[k]
                        col_rows[k].discard(j)
            # column ops then clear the rest of row i; nothing else changes
            ones += 1
            changed = True
    rest = [rows[i] for i in sorted(alive) if rows[i]]
    if not rest:
        return SnfResult([1] * ones)
    cols = sorted({c for r in rest for c in r})
    cpos = {c: k for k, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rest]
    for i, r in enumerate(rest):
        for c, v in r.items():
            dense[i][cpos[c]] = v
    diag = _snf_dense(dense)
    return SnfResult(sorted([1] * ones + diag))


def integer_homology(d_in: SparseMatrix | None, d_out: SparseMatrix | None, dim: int) -> tuple[int, list[int]]:
    """(free rank, torsion factors) of ker d_out / im d_in over Z."""
    r_out = rank(d_out) if d_out is not None else 0
    if d_in is None:
        return dim - r_out, []
    snf = smith_normal_form(d_in)
    return dim - r_out - snf.rank, snf.torsion


def rank_profile(mats: Iterable[SparseMatrix]) -> list[int]:
    return [rank(m) for m in mats]
