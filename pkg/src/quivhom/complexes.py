"""Chain complexes, bicomplexes and long exact sequences of homology.

A complex stores one matrix per source degree.  `step` is -1 for chain
complexes (d_n : C_n -> C_{n-1}) and +1 for cochain complexes.  A complex
built up to degree `top` gives reliable homology in degrees lo..top-1.
"""
from __future__ import annotations

from .errors import TruncationError, ComputationError, ValidationError
from .linalg import QQ, ZZ, Field, SparseMatrix, Echelon, Solver, rank, kernel_basis, smith_normal_form


class ChainComplex:
    def __init__(self, dims: dict, diffs: dict, step: int = -1, field: Field = QQ,
                 name: str = "", basis: dict | None = None, check: bool = True):
        self.dims = dict(dims)
        self.diffs = dict(diffs)
        self.step = step
        self.field = field
        self.name = name
        self.basis = basis or {}
        self.lo = min(self.dims) if self.dims else 0
        self.top = max(self.dims) if self.dims else 0
        self._ranks: dict = {}
        for n, m in self.diffs.items():
            tgt = n + step
            if m.ncols != self.dims.get(n, 0) or m.nrows != self.dims.get(tgt, 0):
                raise ComputationError("%s: differential at degree %d has shape %dx%d, expected %dx%d"
                                       % (name, n, m.nrows, m.ncols, self.dims.get(tgt, 0), self.dims.get(n, 0)))
        if check:
            self.check_d2()

    def __repr__(self):
        kind = "chain" if self.step < 0 else "cochain"
        return "ChainComplex(%s %s, dims=%s)" % (self.name, kind, [self.dims[n] for n in sorted(self.dims)])

    @property
    def is_cochain(self) -> bool:
        return self.step > 0

    def dim(self, n) -> int:
        return self.dims.get(n, 0)

    def d(self, n) -> SparseMatrix:
        """Differential leaving degree n (zero matrix if absent)."""
        m = self.diffs.get(n)
        if m is None:
            m = SparseMatrix.zero(self.dim(n + self.step), self.dim(n), self.field)
        return m

    def rank_d(self, n) -> int:
        if n not in self._ranks:
            m = self.diffs.get(n)
            self._ranks[n] = 0 if m is None else rank(m)
        return self._ranks[n]

    def check_d2(self) -> None:
        for n in self.diffs:
            nxt = n + self.step
            if nxt in self.diffs:
                prod = self.diffs[nxt] @ self.diffs[n]
                if not prod.is_zero():
                    raise ComputationError("%s: d∘d != 0 at degree %d" % (self.name, n))

    def reliable(self, n) -> bool:
        return self.lo <= n <= self.top - 1

    def _check_range(self, n):
        if not self.reliable(n):
            raise TruncationError("%s: degree %d outside reliable range %d..%d"
                                  % (self.name, n, self.lo, self.top - 1))

    def homology(self, n):
        """dim H_n over a field; (free rank, torsion list) over ZZ."""
        self._check_range(n)
        if self.field == ZZ:
            r_out = self.rank_d(n)
            m_in = self.diffs.get(n - self.step)
            snf = smith_normal_form(m_in) if m_in is not None else None
            r_in = snf.rank if snf else 0
            return self.dim(n) - r_out - r_in, (snf.torsion if snf else [])
        return self.dim(n) - self.rank_d(n) - self.rank_d(n - self.step)

    def betti(self, upto: int | None = None) -> list:
        hi = self.top - 1 if upto is None else upto
        return [self.homology(n) for n in range(self.lo, hi + 1)]

    def euler_characteristic_check(self) -> bool:
        """Sum (-1)^n dim C_n == sum (-1)^n dim H_n on the full (bounded) complex.

        Only meaningful when the complex is really bounded, i.e. the top
        differential is not truncated; callers pass complete complexes.
        """
        chi_c = sum((-1) ** n * self.dim(n) for n in self.dims)
        chi_h = 0
        for n in self.dims:
            h = self.dim(n) - self.rank_d(n) - self.rank_d(n - self.step)
            chi_h += (-1) ** n * h
        return chi_c == chi_h

    def dual(self) -> "ChainComplex":
        """Hom(-, k): transposed differentials, opposite direction."""
        if self.field == ZZ:
            raise ValidationError("dualization is reserved for field coefficients")
        diffs = {n + self.step: m.T for n, m in self.diffs.items()}
        return ChainComplex(self.dims, diffs, -self.step, self.field, "D(%s)" % self.name, check=False)

    def hom_dual(self) -> "ChainComplex":
        """Transposed complex over the same ring (Hom(-, Z) for integer complexes)."""
        diffs = {n + self.step: m.T for n, m in self.diffs.items()}
        return ChainComplex(self.dims, diffs, -self.step, self.field, "Hom(%s)" % self.name, check=False)

    def change_field(self, field: Field) -> "ChainComplex":
        diffs = {n: m.change_field(field) for n, m in self.diffs.items()}
        return ChainComplex(self.dims, diffs, self.step, field, self.name, self.basis)

    def truncate(self, top: int) -> "ChainComplex":
        dims = {n: d for n, d in self.dims.items() if n <= top}
        diffs = {n: m for n, m in self.diffs.items() if n <= top and n + self.step <= top}
        return ChainComplex(dims, diffs, self.step, self.field, self.name, self.basis, check=False)

    def dump(self) -> str:
        """Plain-text matrix dump: a header per degree then COO triplets."""
        lines = ["# complex %s step %d field %s" % (self.name, self.step, self.field)]
        for n in sorted(self.dims):
            m = self.diffs.get(n)
            tgt = n + self.step
            lines.append("degree %d dim %d -> degree %d dim %d nnz %d"
                         % (n, self.dim(n), tgt, self.dim(tgt), m.nnz() if m is not None else 0))
            if m is not None:
                for i, j, v in m.entries():
                    lines.append("%d %d %s" % (i, j, v))
        return "\n".join(lines) + "\n"


def direct_sum(X: ChainComplex, Y: ChainComplex, name: str = "") -> ChainComplex:
    if X.step != Y.step:
        raise ValidationError("direct sum of complexes of different direction")
    degs = sorted(set(X.dims) | set(Y.dims))
    dims = {n: X.dim(n) + Y.dim(n) for n in degs}
    diffs = {}
    for n in degs:
        if n + X.step in dims and (n in X.diffs or n in Y.diffs):
            diffs[n] = SparseMatrix.block_diag([X.d(n), Y.d(n)])
    top = min(X.top, Y.top)
    out = ChainComplex(dims, diffs, X.step, X.field, name or "%s+%s" % (X.name, Y.name), check=False)
    out.top = top
    return out


# ---------------------------------------------------------------- chain maps

class ChainMap:
    """Per-degree matrices f_n : src_n -> tgt_n."""

    def __init__(self, src: ChainComplex, tgt: ChainComplex, maps: dict, name: str = "", check: bool = True):
        self.src, self.tgt, self.maps, self.name = src, tgt, dict(maps), name
        for n, m in self.maps.items():
            if (m.nrows, m.ncols) != (tgt.dim(n), src.dim(n)):
                raise ComputationError("%s: map at degree %d has wrong shape" % (name, n))
        if check:
            self.check()

    def f(self, n) -> SparseMatrix:
        m = self.maps.get(n)
        if m is None:
            m = SparseMatrix.zero(self.tgt.dim(n), self.src.dim(n), self.src.field)
        return m

    def check(self) -> None:
        st = self.src.step
        for n in self.maps:
            nxt = n + st
            if nxt not in self.maps:
                continue
            left = self.tgt.d(n) @ self.f(n)
            right = self.f(nxt) @ self.src.d(n)
            if left != right:
                raise ComputationError("%s does not commute with the differentials at degree %d" % (self.name, n))

    def compose(self, other: "ChainMap", name: str = "") -> "ChainMap":
        """self ∘ other."""
        maps = {n: self.f(n) @ other.f(n) for n in self.maps if n in other.maps}
        return ChainMap(other.src, self.tgt, maps, name, check=False)


# ---------------------------------------------------------------- homology data

class HomologyClasses:
    """Representatives for a basis of H_n and a map cycles -> class coordinates."""

    def __init__(self, C: ChainComplex, n: int):
        C._check_range(n)
        if C.field == ZZ:
            raise ValidationError("class coordinates need field coefficients")
        self.C, self.n = C, n
        self.ech = Echelon(C.field)
        m_in = C.diffs.get(n - C.step)
        if m_in is not None:
            for col in m_in.cols:
                self.ech.add(col)
        self.reps: list[dict] = []
        p = C.field.p
        expected = C.homology(n)
        if expected:
            K = kernel_basis(C.d(n))
            for z in K.cols:
                v, t = self.ech.reduce(z, {})
                if not v:
                    continue
                k = len(self.reps)
                self.reps.append(z)
                t[k] = 1
                self.ech._insert(v, t)
                if len(self.reps) == expected:
                    break
        if len(self.reps) != expected:
            raise ComputationError("homology representatives disagree with rank count")
        self.dim = expected

    def coords(self, cycle: dict) -> dict:
        if not self.dim:
            return {}
        v, t = self.ech.reduce(cycle, {})
        if v:
            raise ComputationError("vector is not a cycle of %s in degree %d" % (self.C.name, self.n))
        p = self.C.field.p
        return {k: (-c) % p if p else -c for k, c in t.items()}


def induced_map(f: ChainMap, n: int, hs: HomologyClasses | None = None,
                ht: HomologyClasses | None = None) -> SparseMatrix:
    hs = hs or HomologyClasses(f.src, n)
    ht = ht or HomologyClasses(f.tgt, n)
    m = f.f(n)
    cols = [ht.coords(m.apply(z)) for z in hs.reps]
    return SparseMatrix(ht.dim, hs.dim, cols, f.src.field)


def connecting_map(i: ChainMap, p: ChainMap, n: int, hC: HomologyClasses, hA: HomologyClasses,
                   solvers: dict | None = None) -> SparseMatrix:
    """Snake map H_n(C) -> H_{n+step}(A) for 0 -> A -> B -> C -> 0."""
    B = i.tgt
    nxt = n + B.step
    solvers = solvers if solvers is not None else {}
    if ("p", n) not in solvers:
        solvers[("p", n)] = Solver(p.f(n))
    if ("i", nxt) not in solvers:
        solvers[("i", nxt)] = Solver(i.f(nxt))
    cols = []
    for z in hC.reps:
        b = solvers[("p", n)].solve(z)
        if b is None:
            raise ComputationError("lift failed: p not surjective in degree %d" % n)
        db = B.d(n).apply(b)
        a = solvers[("i", nxt)].solve(db)
        if a is None:
            raise ComputationError("boundary of lift not in the image of i in degree %d" % nxt)
        cols.append(hA.coords(a))
    return SparseMatrix(hA.dim, hC.dim, cols, B.field)


# ---------------------------------------------------------------- SES / LES

class SesCheck:
    def __init__(self):
        self.ok = True
        self.failures: list[str] = []

    def fail(self, msg):
        self.ok = False
        self.failures.append(msg)


def check_ses(i: ChainMap, p: ChainMap, degrees) -> SesCheck:
    """Per degree: i injective, p surjective, p∘i = 0, dims add up."""
    out = SesCheck()
    for n in degrees:
        fi, fp = i.f(n), p.f(n)
        a, b, c = i.src.dim(n), i.tgt.dim(n), p.tgt.dim(n)
        if rank(fi) != a:
            out.fail("degree %d: i not injective" % n)
        if rank(fp) != c:
            out.fail("degree %d: p not surjective" % n)
        if not (fp @ fi).is_zero():
            out.fail("degree %d: p∘i != 0" % n)
        if a + c != b:
            out.fail("degree %d: dim A + dim C != dim B (%d + %d != %d)" % (n, a, c, b))
    try:
        i.check()
        p.check()
    except ComputationError as exc:
        out.fail(str(exc))
    return out


class LesReport:
    """Long exact sequence data on a degree window.

    positions: list of (label, dim); maps[k] goes from positions[k] to
    positions[k+1] (None where it cannot be computed inside the window).
    exact[k] is the verdict at positions[k] (None when not checkable).
    """

    def __init__(self):
        self.positions: list[tuple[str, int]] = []
        self.maps: list[SparseMatrix | None] = []
        self.exact: list[bool | None] = []
        self.ses: SesCheck | None = None
        self.dims: dict[str, dict[int, int]] = {"A": {}, "B": {}, "C": {}}
        self.map_ranks: dict[str, dict[int, int]] = {"i": {}, "p": {}, "delta": {}}
        self.degrees: list[int] = []

    @property
    def verdict(self) -> bool:
        return bool(self.ses and self.ses.ok) and all(e is not False for e in self.exact)

    def checked_positions(self) -> int:
        return sum(1 for e in self.exact if e is not None)

    def as_dict(self) -> dict:
        return {
            "degrees": self.degrees,
            "dims": {k: [v[n] for n in self.degrees] for k, v in self.dims.items()},
            "ranks": {k: {str(n): r for n, r in sorted(v.items())} for k, v in self.map_ranks.items()},
            "ses_ok": bool(self.ses and self.ses.ok),
            "exact": self.verdict,
            "checked_positions": self.checked_positions(),
        }

    def sequence_str(self) -> str:
        return " -> ".join("%s=%d" % (lab, d) for lab, d in self.positions)


def les_from_ses(i: ChainMap, p: ChainMap, lo: int | None = None, hi: int | None = None,
                 labels=("A", "B", "C")) -> LesReport:
    """Verify the SES and the exactness of its long exact homology sequence."""
    A, B, C = i.src, i.tgt, p.tgt
    if i.tgt is not p.src and (i.tgt.dims != p.src.dims):
        raise ValidationError("maps do not form a sequence")
    top = min(A.top, B.top, C.top)
    lo = max(A.lo, B.lo, C.lo) if lo is None else lo
    hi = top - 1 if hi is None else hi
    if hi > top - 1:
        raise TruncationError("LES window exceeds reliable range (top degree %d)" % top)
    rep = LesReport()
    rep.degrees = list(range(lo, hi + 1))
    rep.ses = check_ses(i, p, range(lo, min(hi + 1, top) + 1))
    if not rep.ses.ok:
        return rep
    step = B.step
    hA = {n: HomologyClasses(A, n) for n in rep.degrees}
    hB = {n: HomologyClasses(B, n) for n in rep.degrees}
    hC = {n: HomologyClasses(C, n) for n in rep.degrees}
    solvers: dict = {}
    la, lb, lc = labels
    order = rep.degrees[::-1] if step < 0 else rep.degrees
    for n in order:
        rep.dims["A"][n], rep.dims["B"][n], rep.dims["C"][n] = hA[n].dim, hB[n].dim, hC[n].dim
        mi = induced_map(i, n, hA[n], hB[n])
        mp = induced_map(p, n, hB[n], hC[n])
        rep.map_ranks["i"][n] = rank(mi)
        rep.map_ranks["p"][n] = rank(mp)
        nxt = n + step
        if nxt in hA:
            md = connecting_map(i, p, n, hC[n], hA[nxt], solvers)
            rep.map_ranks["delta"][n] = rank(md)
        elif nxt < A.lo:
            md = SparseMatrix.zero(0, hC[n].dim, B.field)
        else:
            md = None
        rep.positions += [("%s%d" % (la, n), hA[n].dim), ("%s%d" % (lb, n), hB[n].dim), ("%s%d" % (lc, n), hC[n].dim)]
        rep.maps += [mi, mp, md]
    # exactness at each position from its neighbouring maps
    for k, (lab, d) in enumerate(rep.positions):
        f = rep.maps[k - 1] if k > 0 else None
        g = rep.maps[k]
        if k == 0:
            # incoming map unknown unless the sequence starts at zero
            first_deg = order[0]
            prev = first_deg - step
            if (step > 0 and prev < A.lo):
                f = SparseMatrix.zero(d, 0, B.field)
        if f is None or g is None:
            rep.exact.append(None)
            continue
        ok = (g @ f).is_zero() and rank(f) + rank(g) == d
        rep.exact.append(ok)
    return rep


# ---------------------------------------------------------------- bicomplexes

class Bicomplex:
    """First-quadrant bicomplex truncated to p + q <= bound.

    dims[(p, q)]; dh[(p, q)] : (p, q) -> (p-1, q); dv[(p, q)] : (p, q) -> (p, q-1).
    """

    def __init__(self, dims: dict, dh: dict, dv: dict, bound: int, field: Field = QQ,
                 name: str = "", check: bool = True):
        self.dims, self.dh, self.dv = dict(dims), dict(dh), dict(dv)
        self.bound, self.field, self.name = bound, field, name
        if check:
            self.check()

    def dim(self, p, q) -> int:
        return self.dims.get((p, q), 0)

    def _h(self, p, q):
        m = self.dh.get((p, q))
        return m if m is not None else SparseMatrix.zero(self.dim(p - 1, q), self.dim(p, q), self.field)

    def _v(self, p, q):
        m = self.dv.get((p, q))
        return m if m is not None else SparseMatrix.zero(self.dim(p, q - 1), self.dim(p, q), self.field)

    def check(self) -> None:
        for (p, q) in self.dims:
            if (p, q) in self.dv and (p, q - 1) in self.dv:
                if not (self._v(p, q - 1) @ self._v(p, q)).is_zero():
                    raise ComputationError("%s: dv dv != 0 at (%d,%d)" % (self.name, p, q))
            if (p, q) in self.dh and (p - 1, q) in self.dh:
                if not (self._h(p - 1, q) @ self._h(p, q)).is_zero():
                    raise ComputationError("%s: dh dh != 0 at (%d,%d)" % (self.name, p, q))
            if p >= 1 and q >= 1:
                s = self._v(p - 1, q) @ self._h(p, q) + self._h(p, q - 1) @ self._v(p, q)
                if not s.is_zero():
                    raise ComputationError("%s: dv dh + dh dv != 0 at (%d,%d)" % (self.name, p, q))

    def columns(self, keep) -> "Bicomplex":
        """Sub/quotient bicomplex on the columns p in `keep`, shifted so the
        first kept column becomes column 0 when shift=True is wanted by caller."""
        keep = set(keep)
        dims = {k: v for k, v in self.dims.items() if k[0] in keep}
        dh = {k: v for k, v in self.dh.items() if k[0] in keep and k[0] - 1 in keep}
        dv = {k: v for k, v in self.dv.items() if k[0] in keep}
        return Bicomplex(dims, dh, dv, self.bound, self.field, self.name, check=False)

    def shift_columns(self, s: int) -> "Bicomplex":
        """Move column p to p - s (columns p < s dropped)."""
        dims = {(p - s, q): v for (p, q), v in self.dims.items() if p >= s}
        dh = {(p - s, q): m for (p, q), m in self.dh.items() if p - 1 >= s}
        dv = {(p - s, q): m for (p, q), m in self.dv.items() if p >= s}
        return Bicomplex(dims, dh, dv, self.bound - s, self.field, self.name, check=False)


def tot_offsets(B: Bicomplex, n: int) -> list[tuple[int, int, int]]:
    """[(p, q, offset)] of the summands of Tot_n, ordered by p."""
    out, off = [], 0
    for p in range(0, n + 1):
        q = n - p
        if (p, q) in B.dims:
            out.append((p, q, off))
            off += B.dims[(p, q)]
    return out


def total_complex(B: Bicomplex, top: int | None = None) -> ChainComplex:
    """Tot_n = sum_{p+q=n} B_{p,q}, d = dh + dv, for n <= top (default bound)."""
    top = B.bound if top is None else top
    if top > B.bound:
        raise TruncationError("bicomplex truncated at %d, Tot_%d requested" % (B.bound, top))
    dims, diffs = {}, {}
    offs = {n: tot_offsets(B, n) for n in range(0, top + 1)}
    for n in range(0, top + 1):
        dims[n] = sum(B.dims[(p, q)] for p, q, _ in offs[n])
    for n in range(1, top + 1):
        tgt = {(p, q): o for p, q, o in offs[n - 1]}
        cols = []
        for p, q, _ in offs[n]:
            h = B.dh.get((p, q))
            v = B.dv.get((p, q))
            for j in range(B.dims[(p, q)]):
                col = {}
                if h is not None:
                    o = tgt[(p - 1, q)]
                    for i, x in h.cols[j].items():
                        col[i + o] = x
                if v is not None:
                    o = tgt[(p, q - 1)]
                    for i, x in v.cols[j].items():
                        col[i + o] = x
                cols.append(col)
        diffs[n] = SparseMatrix(dims[n - 1], dims[n], cols, B.field)
    return ChainComplex(dims, diffs, -1, B.field, "Tot(%s)" % B.name)


def bicomplex_map_to_tot(maps: dict, src: Bicomplex, tgt: Bicomplex, top: int, field: Field = QQ) -> dict:
    """Per-degree Tot matrices of a bicomplex morphism given on cells.

    maps[(p, q)] : src(p, q) -> tgt(p', q) where the target column is given by
    maps[(p, q)][0]; entries (target_column, matrix).
    """
    out = {}
    for n in range(0, top + 1):
        so = tot_offsets(src, n)
        to = {(p, q): o for p, q, o in tot_offsets(tgt, n)}
        tdim = sum(tgt.dims[(p, q)] for p, q, _ in tot_offsets(tgt, n))
        cols = []
        for p, q, _ in so:
            item = maps.get((p, q))
            if item is None:
                cols.extend({} for _ in range(src.dims[(p, q)]))
                continue
            tp, m = item
            o = to[(tp, q)]
            for j in range(src.dims[(p, q)]):
                cols.append({i + o: x for i, x in m.cols[j].items()})
        ssize = sum(src.dims[(p, q)] for p, q, _ in so)
        out[n] = SparseMatrix(tdim, ssize, cols, field)
    return out
