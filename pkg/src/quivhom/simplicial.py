"""Simplicial (co)homology of algebras with a semi-normed basis.

SC_0 is free on the vertices, SC_1 on the whole basis (stationary paths
included, so d_1(e_x) = 0), and SC_n (n >= 2) on the n-tuples of
non-stationary basis paths with nonzero product.  Complexes are built over ZZ.
"""
from __future__ import annotations

from math import gcd

from .complexes import ChainComplex, ChainMap, direct_sum, les_from_ses
from .errors import ValidationError
from .hochschild import check_budget
from .linalg import GF, QQ, ZZ, SparseMatrix, Field, smith_normal_form
from .oriented import CornerSystem, MvReport, OrientationWitness
from .quiver_core import BoundQuiverAlgebra, semi_normed_basis

LES_FIELDS = (QQ, GF(2), GF(3), GF(5))


class SimplicialComplex:
    """Bases of SC_n(A) and the integer differential."""

    def __init__(self, A: BoundQuiverAlgebra, N: int):
        self.A = A
        self.table = semi_normed_basis(A)
        self.N = N
        self.nonstat = [i for i in range(A.dim) if not A.basis[i].is_stationary()]
        self.bases: dict[int, list] = {0: list(A.vertices), 1: [(i,) for i in range(A.dim)]}
        self._prod: dict[tuple, int] = {}
        if N + 1 >= 2:
            layer = []
            for i in self.nonstat:
                for j in self.nonstat:
                    if (i, j) in self.table:
                        layer.append((i, j))
                        self._prod[(i, j)] = self.table[(i, j)][0]
            self.bases[2] = layer
            for n in range(3, N + 2):
                nxt = []
                for tup in self.bases[n - 1]:
                    b = self._prod[tup]
                    for j in self.nonstat:
                        if (b, j) in self.table:
                            t2 = tup + (j,)
                            nxt.append(t2)
                            self._prod[t2] = self.table[(b, j)][0]
                check_budget(len(nxt), "simplicial chains degree %d" % n)
                self.bases[n] = nxt
        self.index = {n: {t: k for k, t in enumerate(bs)} for n, bs in self.bases.items()}

    def dim(self, n: int) -> int:
        return len(self.bases.get(n, ()))

    def d(self, n: int) -> SparseMatrix:
        A = self.A
        if n == 1:
            vpos = self.index[0]
            cols = []
            for (i,) in self.bases[1]:
                col: dict = {}
                col[vpos[A.tgt[i]]] = col.get(vpos[A.tgt[i]], 0) + 1
                col[vpos[A.src[i]]] = col.get(vpos[A.src[i]], 0) - 1
                cols.append({k: c for k, c in col.items() if c})
            return SparseMatrix(self.dim(0), self.dim(1), cols, ZZ)
        idx = self.index[n - 1]
        cols = []
        for tup in self.bases[n]:
            col: dict = {}

            def add(t, c):
                k = idx[t]
                v = col.get(k, 0) + c
                if v:
                    col[k] = v
                else:
                    col.pop(k, None)

            add(tup[1:], 1)
            for j in range(1, n):
                merged = tup[:j - 1] + (self.table[(tup[j - 1], tup[j])][0],) + tup[j + 1:]
                add(merged, -1 if j % 2 else 1)
            add(tup[:-1], -1 if n % 2 else 1)
            cols.append(col)
        return SparseMatrix(self.dim(n - 1), self.dim(n), cols, ZZ)

    def complex(self) -> ChainComplex:
        top = self.N + 1
        dims = {n: self.dim(n) for n in range(top + 1)}
        diffs = {n: self.d(n) for n in range(1, top + 1)}
        return ChainComplex(dims, diffs, -1, ZZ, "SC(%s)" % self.A.name, basis=self.bases)


def simplicial_complex(A: BoundQuiverAlgebra, N: int = 3) -> ChainComplex:
    return SimplicialComplex(A, N).complex()


def simplicial_homology(A: BoundQuiverAlgebra, N: int = 3) -> list[tuple[int, list[int]]]:
    C = simplicial_complex(A, N)
    return [C.homology(n) for n in range(N + 1)]


# ---------------------------------------------------------------- cohomology

def parse_coefficients(G, A: BoundQuiverAlgebra | None = None):
    """'Z' | 'Z/m' | 'k' -> ('Z', 0) | ('Z/m', m) | ('k', characteristic)."""
    if isinstance(G, tuple):
        return G
    g = str(G).strip()
    if g in ("Z", "ZZ"):
        return ("Z", 0)
    if g.startswith("Z/"):
        try:
            m = int(g[2:])
        except ValueError:
            raise ValidationError("bad coefficient group %r" % G) from None
        if m < 2:
            raise ValidationError("Z/m needs m >= 2")
        return ("Z/m", m)
    if g in ("k", "k+"):
        return ("k", A.field.p if A is not None else 0)
    raise ValidationError("unsupported coefficient group %r (use Z, Z/m or k)" % G)


def _uct(h_n: tuple, h_prev: tuple | None, kind: str, m: int) -> dict:
    """H^n(Hom(C, G)) from integral homology by universal coefficients."""
    rank, tors = h_n
    ptors = h_prev[1] if h_prev else []
    if kind == "Z":
        return {"rank": rank, "torsion": sorted(ptors)}
    if kind == "Z/m":
        parts = [m] * rank + [gcd(t, m) for t in tors] + [gcd(t, m) for t in ptors]
        return {"cyclic": sorted(x for x in parts if x > 1)}
    p = m
    if p == 0:
        return {"dim": rank}
    return {"dim": rank + sum(1 for t in tors if t % p == 0) + sum(1 for t in ptors if t % p == 0)}


def _dual_route(C: ChainComplex, n: int, kind: str, m: int) -> dict | None:
    """Same group computed from the transposed complex directly."""
    if kind == "Z":
        r, t = C.hom_dual().homology(n)
        return {"rank": r, "torsion": sorted(t)}
    if kind == "k" or (kind == "Z/m" and _is_prime(m)):
        F = QQ if m == 0 else GF(m)
        d = C.change_field(F).dual().homology(n)
        return {"dim": d} if kind == "k" else {"cyclic": [m] * d}
    return None


def _is_prime(m: int) -> bool:
    return m >= 2 and all(m % q for q in range(2, int(m ** 0.5) + 1))


def simplicial_cohomology(A: BoundQuiverAlgebra, G="Z", N: int = 3) -> list[dict]:
    """Per degree: the group from universal coefficients, plus the dual-route value."""
    kind, m = parse_coefficients(G, A)
    C = simplicial_complex(A, N)
    H = [C.homology(n) for n in range(N + 1)]
    out = []
    for n in range(N + 1):
        val = _uct(H[n], H[n - 1] if n else None, kind, m)
        other = _dual_route(C, n, kind, m)
        out.append({"degree": n, "group": val, "dual_route": other,
                    "agree": other is None or other == val})
    return out


# ---------------------------------------------------------------- Mayer-Vietoris

def _zero_complex(top: int) -> ChainComplex:
    return ChainComplex({n: 0 for n in range(top + 1)}, {}, -1, ZZ, "0")


class SimplicialMv:
    """0 -> SC(C) -i-> SC(A1) + SC(A2) -p-> SC(R) -> 0 with i(c) = (c, c), p(b, g) = b - g."""

    def __init__(self, A: BoundQuiverAlgebra, w: OrientationWitness, N: int):
        self.cs = CornerSystem(A, w)
        self.N = N
        top = N + 1
        self.sc = {lab: SimplicialComplex(X, N) for lab, X in self.cs.algebras() if X is not None}
        self.cx = {lab: s.complex() for lab, s in self.sc.items()}
        if "C" not in self.cx:
            self.cx["C"] = _zero_complex(top)
        self.mid = direct_sum(self.cx["A1"], self.cx["A2"], "A1+A2")
        imaps, pmaps = {}, {}
        for n in range(top + 1):
            i1 = self._incl("C", "A1", n)
            i2 = self._incl("C", "A2", n)
            imaps[n] = SparseMatrix.vstack([i1, i2])
            pmaps[n] = SparseMatrix.hstack([self._incl("A1", "R", n, 1), self._incl("A2", "R", n, -1)])
        self.i = ChainMap(self.cx["C"], self.mid, imaps, "i")
        self.p = ChainMap(self.mid, self.cx["R"], pmaps, "p")

    def _translate(self, small: str, big: str, n: int, elt):
        X, Y = self.sc[small].A, self.sc[big].A
        if n == 0:
            return elt
        return tuple(Y.index[X.basis[k]] for k in elt)

    def _incl(self, small: str, big: str, n: int, sign: int = 1) -> SparseMatrix:
        tgt = self.cx[big]
        if small not in self.sc:
            return SparseMatrix.zero(tgt.dim(n), 0, ZZ)
        src_basis = self.sc[small].bases.get(n, [])
        idx = self.sc[big].index.get(n, {})
        cols = [{idx[self._translate(small, big, n, b)]: sign} for b in src_basis]
        return SparseMatrix(tgt.dim(n), len(src_basis), cols, ZZ)

    def basis_identities(self) -> dict:
        """B_R = B_1 ∪ B_2 and B_C = B_1 ∩ B_2 as sets of paths."""
        b = {lab: set(s.A.basis) for lab, s in self.sc.items()}
        c = b.get("C", set())
        return {"union": b["A1"] | b["A2"] == b["R"], "intersection": b["A1"] & b["A2"] == c}

    def integral_ses(self) -> dict:
        """Exactness and splitting of the SES over ZZ, degree by degree."""
        ok_inj = ok_comp = ok_ker = ok_split = True
        for n in range(self.N + 2):
            im, pm = self.i.f(n), self.p.f(n)
            if not (pm @ im).is_zero():
                ok_comp = False
            snf = smith_normal_form(im)
            # injective with torsion-free cokernel
            if snf.rank != im.ncols or snf.torsion:
                ok_inj = False
            if im.ncols + self.cx["R"].dim(n) != self.mid.dim(n):
                ok_ker = False
            # explicit section of p: an R-tuple comes from A1 (sign +) or else A2 (sign -)
            entries = []
            off = self.cx["A1"].dim(n)
            for k, b in enumerate(self.sc["R"].bases.get(n, [])):
                got = False
                for lab, o, s in (("A1", 0, 1), ("A2", off, -1)):
                    X = self.sc[lab].A
                    R = self.sc["R"].A
                    try:
                        t = b if n == 0 else tuple(X.index[R.basis[q]] for q in b)
                    except KeyError:
                        continue
                    j = self.sc[lab].index.get(n, {}).get(t)
                    if j is not None:
                        entries.append((o + j, k, s))
                        got = True
                        break
                if not got:
                    ok_split = False
            sec = SparseMatrix.from_entries(self.mid.dim(n), self.cx["R"].dim(n), entries, ZZ)
            if pm @ sec != SparseMatrix.identity(self.cx["R"].dim(n), ZZ):
                ok_split = False
        return {"injective": ok_inj, "composition_zero": ok_comp, "ranks_add_up": ok_ker, "split": ok_split,
                "ok": ok_inj and ok_comp and ok_ker and ok_split}


def _field_maps(f: ChainMap, F: Field, src: ChainComplex, tgt: ChainComplex) -> ChainMap:
    return ChainMap(src, tgt, {n: m.change_field(F) for n, m in f.maps.items()}, f.name)


def mv_simplicial(A: BoundQuiverAlgebra, w: OrientationWitness, N: int = 3, variant: str = "homology",
                  G="Z") -> MvReport:
    """Mayer-Vietoris for simplicial (co)homology; condition (2) on the witness suffices."""
    mv = SimplicialMv(A, w, N)
    ses = mv.integral_ses()
    les_by_field = {}
    for F in LES_FIELDS:
        C, M, R = (mv.cx["C"].change_field(F), mv.mid.change_field(F), mv.cx["R"].change_field(F))
        i, p = _field_maps(mv.i, F, C, M), _field_maps(mv.p, F, M, R)
        if variant == "homology":
            les_by_field[str(F)] = les_from_ses(i, p, 0, N, ("C", "A", "R"))
        elif variant == "cohomology":
            Rd, Md, Cd = R.dual(), M.dual(), C.dual()
            pd = ChainMap(Rd, Md, {n: m.T for n, m in p.maps.items()}, "p*")
            idl = ChainMap(Md, Cd, {n: m.T for n, m in i.maps.items()}, "i*")
            les_by_field[str(F)] = les_from_ses(pd, idl, 0, N, ("R", "A", "C"))
        else:
            raise ValidationError("variant must be homology or cohomology")
    les = les_by_field[str(QQ)]
    if variant == "homology":
        dims = {lab: [list(c.homology(n)) for n in range(N + 1)] for lab, c in
                (("C", mv.cx["C"]), ("A", mv.mid), ("R", mv.cx["R"]))}
    else:
        dims = {lab: [e["group"] for e in _cohom_of(c, G, A, N)] for lab, c in
                (("C", mv.cx["C"]), ("A", mv.mid), ("R", mv.cx["R"]))}
    rep = MvReport("sh", variant, N, w.as_dict(), dims, les)
    bid = mv.basis_identities()
    verdicts = {k: v.verdict for k, v in les_by_field.items()}
    rep.extra = {"integral_ses": ses, "les_by_field": verdicts, "basis_identities": bid,
                 "ok": ses["ok"] and all(verdicts.values()) and all(bid.values())}
    return rep


def _cohom_of(C: ChainComplex, G, A: BoundQuiverAlgebra, N: int) -> list[dict]:
    kind, m = parse_coefficients(G, A)
    H = [C.homology(n) for n in range(N + 1)]
    return [{"degree": n, "group": _uct(H[n], H[n - 1] if n else None, kind, m)} for n in range(N + 1)]
