"""Oriented algebras: witnesses, Mayer-Vietoris sequences, core algebras.

An orientation is a split 1 = e'_1 + e + e'_2 into vertex idempotents with
  (2) e'_1 R e'_2 = e'_2 R e'_1 = 0
and one of
  (3) e R e'_1 = e R e'_2 = 0,  (4) e'_1 R e = e'_2 R e = 0,  (5) e'_1 R e = e R e'_2 = 0.
Since paths compose left to right, e_X R e_Y is spanned by the basis paths
from a vertex of X to a vertex of Y.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

from .complexes import ChainComplex, ChainMap, direct_sum, les_from_ses, LesReport
from .errors import ValidationError, BudgetExceeded
from .hochschild import Blocks, Bimodule, HochschildComplexes, Cochains, hochschild_dims
from .linalg import SparseMatrix, kernel_basis, vec_axpy
from .quiver_core import BoundQuiverAlgebra, corner_algebra, convexity_violations


CONDITIONS = {
    3: (("e", "e1p"), ("e", "e2p")),
    4: (("e1p", "e"), ("e2p", "e")),
    5: (("e1p", "e"), ("e", "e2p")),
}


@dataclass
class OrientationWitness:
    e1p: tuple
    e: tuple
    e2p: tuple
    satisfied: tuple = ()          # every condition among 3, 4, 5 that holds
    condition: int | None = None   # first of them, None for a glued witness

    @property
    def kind(self) -> str:
        return "full" if self.condition is not None else "glued"

    @property
    def e1(self) -> tuple:
        return self.e1p + self.e

    @property
    def e2(self) -> tuple:
        return self.e2p + self.e

    def as_dict(self) -> dict:
        return {"e1": list(self.e1p), "e": list(self.e), "e2": list(self.e2p),
                "kind": self.kind, "condition": self.condition, "satisfied": list(self.satisfied)}


def _block_zero(A: BoundQuiverAlgebra, X, Y) -> bool:
    """e_X R e_Y == 0, i.e. no basis path from X to Y."""
    X, Y = set(X), set(Y)
    return not any(A.src[i] in X and A.tgt[i] in Y for i in range(A.dim))


def verify_orientation(A: BoundQuiverAlgebra, e1p, e, e2p, require_full: bool = True) -> OrientationWitness:
    order = {v: k for k, v in enumerate(A.vertices)}
    sets = {}
    for key, s in (("e1p", e1p), ("e", e), ("e2p", e2p)):
        s = [str(v) for v in s]
        for v in s:
            if v not in order:
                raise ValidationError("unknown vertex %r in %s" % (v, key))
        sets[key] = tuple(sorted(set(s), key=order.get))
    allv = sets["e1p"] + sets["e"] + sets["e2p"]
    if len(allv) != len(set(allv)) or set(allv) != set(A.vertices):
        raise ValidationError("e'_1, e, e'_2 must be disjoint and cover all vertices")
    if not (_block_zero(A, sets["e1p"], sets["e2p"]) and _block_zero(A, sets["e2p"], sets["e1p"])):
        raise ValidationError("condition (2) fails: a nonzero path joins e'_1 and e'_2")
    sat = tuple(c for c, pairs in CONDITIONS.items()
                if all(_block_zero(A, sets[x], sets[y]) for x, y in pairs))
    for label, S in (("A1", sets["e1p"] + sets["e"]), ("A2", sets["e2p"] + sets["e"]), ("C", sets["e"])):
        if S and convexity_violations(A, S):
            raise ValidationError("corner %s is not convex" % label)
    w = OrientationWitness(sets["e1p"], sets["e"], sets["e2p"], sat, sat[0] if sat else None)
    if require_full and w.condition is None:
        raise ValidationError("witness satisfies only condition (2); none of (3), (4), (5) holds")
    return w


def witness_from_options(A: BoundQuiverAlgebra, orient: dict, require_full: bool = True) -> OrientationWitness:
    return verify_orientation(A, orient.get("e1", []), orient.get("e", []), orient.get("e2", []), require_full)


def find_orientations(A: BoundQuiverAlgebra, budget: int = 3 ** 12, include_glued: bool = False,
                      nontrivial: bool = False) -> list[OrientationWitness]:
    """All witnesses over the 3-colourings of the vertices.

    nontrivial=True keeps only witnesses with all three sets nonempty.
    """
    n = len(A.vertices)
    if 3 ** n > budget:
        raise BudgetExceeded("orientation search over 3^%d colourings exceeds budget %d" % (n, budget))
    out, seen = [], set()
    # pairs joined by a nonzero path can never be split between e'_1 and e'_2
    linked = {(A.src[i], A.tgt[i]) for i in range(A.dim)}
    for colours in itertools.product((0, 1, 2), repeat=n):
        parts = ([], [], [])
        for v, c in zip(A.vertices, colours):
            parts[c].append(v)
        if nontrivial and not all(parts):
            continue
        s1, s2 = set(parts[0]), set(parts[2])
        if any((x in s1 and y in s2) or (x in s2 and y in s1) for x, y in linked):
            continue
        key = tuple(tuple(p) for p in parts)
        if key in seen:
            continue
        try:
            w = verify_orientation(A, parts[0], parts[1], parts[2], require_full=not include_glued)
        except ValidationError:
            continue
        seen.add(key)
        out.append(w)
    return out


# ---------------------------------------------------------------- corners

class CornerSystem:
    """R, A1, A2 and C with index embeddings into R."""

    def __init__(self, A: BoundQuiverAlgebra, w: OrientationWitness):
        self.R = A
        self.w = w
        self.A1 = corner_algebra(A, w.e1, (A.name or "R") + ".A1")
        self.A2 = corner_algebra(A, w.e2, (A.name or "R") + ".A2")
        self.C = corner_algebra(A, w.e, (A.name or "R") + ".C") if w.e else None

    def algebras(self):
        return [("R", self.R), ("A1", self.A1), ("A2", self.A2), ("C", self.C)]


def _emb(small: BoundQuiverAlgebra, big: BoundQuiverAlgebra) -> list[int]:
    return [big.index[p] for p in small.basis]


def _module(X: BoundQuiverAlgebra, coefficients: str) -> Bimodule:
    M = Bimodule.regular(X)
    if coefficients == "dual":
        return M.dual()
    if coefficients != "self":
        raise ValidationError("coefficients must be 'self' or 'dual'")
    return M


def _blocks_for(cs: CornerSystem, X: BoundQuiverAlgebra, mode: str) -> Blocks:
    if mode == "vertex":
        base = Blocks.vertex(cs.R)
    elif mode == "witness":
        base = Blocks.from_sets(cs.R, [s for s in (cs.w.e1p, cs.w.e, cs.w.e2p) if s])
    else:
        raise ValidationError("blocks must be 'vertex' or 'witness'")
    return base.restrict(X.vertices)


def _map_chain(ch: tuple, emb: list[int]) -> tuple:
    lb, rb, ps = ch
    return (lb, rb, tuple(emb[p] for p in ps))


def inclusion_matrix(small: HochschildComplexes, big: HochschildComplexes, n: int, emb: list[int],
                     sign: int = 1) -> SparseMatrix:
    """Chains of a corner into chains of the bigger algebra (homology side)."""
    sb, _ = small.homology_basis(n)
    bb, bidx = big.homology_basis(n)
    cols = [{bidx[(emb[m], _map_chain(ch, emb))]: sign} for m, ch in sb]
    return SparseMatrix(len(bb), len(sb), cols, small.A.field)


def restriction_matrix(big: HochschildComplexes, small: HochschildComplexes, n: int, emb: list[int],
                       sign: int = 1) -> SparseMatrix:
    """Restriction of cochains of the bigger algebra to chains of a corner."""
    sb, _ = small.cochain_basis(n)
    bb, bidx = big.cochain_basis(n)
    rows = {}
    for r, (ch, m) in enumerate(sb):
        rows[bidx[(_map_chain(ch, emb), emb[m])]] = r
    cols = [({rows[j]: sign} if j in rows else {}) for j in range(len(bb))]
    return SparseMatrix(len(sb), len(bb), cols, small.A.field)


def _zero_complex(step: int, top: int, field) -> ChainComplex:
    return ChainComplex({n: 0 for n in range(top + 1)}, {}, step, field, "0")


@dataclass
class MvReport:
    theory: str
    variant: str
    N: int
    witness: dict
    dims: dict                 # algebra label -> list of dims for 0..N
    les: LesReport | None = None
    notes: list = dc_field(default_factory=list)
    extra: dict = dc_field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return bool(self.les and self.les.verdict)

    @property
    def ok(self) -> bool:
        return self.exact and self.extra.get("ok", True)

    def as_dict(self) -> dict:
        return {"theory": self.theory, "variant": self.variant, "N": self.N, "witness": self.witness,
                "dims": self.dims, "les": self.les.as_dict() if self.les else None,
                "exact": self.exact, "ok": self.ok, "notes": self.notes, "extra": self.extra}


def _sum_dims(a, b):
    return [x + y for x, y in zip(a, b)]


def mv_hochschild(A: BoundQuiverAlgebra, w: OrientationWitness, coefficients: str = "self", N: int = 3,
                  variant: str = "cohomology", blocks: str = "vertex") -> MvReport:
    """Mayer-Vietoris SES of Hochschild (co)chain complexes and its LES.

    homology:   0 -> C.(C) -a-> C.(A1) + C.(A2) -b-> C.(R) -> 0,
                a = (incl, incl), b(x1, x2) = -x1 + x2.
    cohomology: 0 -> C^(R) -a-> C^(A1) + C^(A2) -b-> C^(C) -> 0,
                a = (res, res), b(f1, f2) = -f1|C + f2|C.
    """
    if w.condition is None:
        raise ValidationError("witness satisfies only condition (2); Hochschild Mayer-Vietoris needs (3), (4) or (5)")
    cs = CornerSystem(A, w)
    top = N + 1
    hcs = {}
    for lab, X in cs.algebras():
        if X is not None:
            hcs[lab] = HochschildComplexes(X, _module(X, coefficients), _blocks_for(cs, X, blocks))
    cx = {}
    for lab, h in hcs.items():
        cx[lab] = h.chain_complex(top) if variant == "homology" else h.cochain_complex(top)
    step = -1 if variant == "homology" else 1
    F = A.field
    if "C" not in cx:
        cx["C"] = _zero_complex(step, top, F)
    mid = direct_sum(cx["A1"], cx["A2"], "A1+A2")
    emb = {lab: _emb(X, A) for lab, X in cs.algebras() if X is not None}
    inv = {lab: {j: i for i, j in enumerate(e)} for lab, e in emb.items()}
    # corner C inside A_i: compose the embeddings through R
    embC = {k: ([inv[k][j] for j in emb["C"]] if "C" in emb else []) for k in ("A1", "A2")}
    maps_a, maps_b = {}, {}
    for n in range(top + 1):
        if variant == "homology":
            if "C" in hcs:
                a1 = inclusion_matrix(hcs["C"], hcs["A1"], n, embC["A1"])
                a2 = inclusion_matrix(hcs["C"], hcs["A2"], n, embC["A2"])
                maps_a[n] = SparseMatrix.vstack([a1, a2])
            else:
                maps_a[n] = SparseMatrix.zero(mid.dim(n), 0, F)
            b1 = inclusion_matrix(hcs["A1"], hcs["R"], n, emb["A1"], -1)
            b2 = inclusion_matrix(hcs["A2"], hcs["R"], n, emb["A2"], 1)
            maps_b[n] = SparseMatrix.hstack([b1, b2])
        else:
            a1 = restriction_matrix(hcs["R"], hcs["A1"], n, emb["A1"])
            a2 = restriction_matrix(hcs["R"], hcs["A2"], n, emb["A2"])
            maps_a[n] = SparseMatrix.vstack([a1, a2])
            if "C" in hcs:
                b1 = restriction_matrix(hcs["A1"], hcs["C"], n, embC["A1"], -1)
                b2 = restriction_matrix(hcs["A2"], hcs["C"], n, embC["A2"], 1)
                maps_b[n] = SparseMatrix.hstack([b1, b2])
            else:
                maps_b[n] = SparseMatrix.zero(0, mid.dim(n), F)
    if variant == "homology":
        first, last = cx["C"], cx["R"]
        labels = ("C", "A", "R")
    else:
        first, last = cx["R"], cx["C"]
        labels = ("R", "A", "C")
    alpha = ChainMap(first, mid, maps_a, "alpha")
    beta = ChainMap(mid, last, maps_b, "beta")
    les = les_from_ses(alpha, beta, 0, N, labels)
    dims = {lab: [c.homology(n) for n in range(N + 1)] for lab, c in cx.items()}
    rep = MvReport("hh", variant, N, w.as_dict(), dims, les)
    rep.notes.append("coefficients=%s blocks=%s" % (coefficients, blocks))
    return rep


# ---------------------------------------------------------------- center, core, Hochart

def center_basis(A: BoundQuiverAlgebra) -> tuple[list[dict], bool]:
    """Basis of Z(A), plus whether every central element splits as
    (scalar per component) * 1 + radical part supported on cycles."""
    F = A.field
    gens = [A.unit[v] for v in A.vertices] + [A.index[A.quiver.path((a.name,))] for a in A.quiver.arrows
                                              if A.quiver.path((a.name,)) in A.index]
    cols = []
    n = A.dim
    for i in range(n):
        col = {}
        for g_pos, g in enumerate(gens):
            diff = A.multiply({i: 1}, {g: 1})
            vec_axpy(diff, -1, A.multiply({g: 1}, {i: 1}), F.p)
            for k, c in diff.items():
                col[g_pos * n + k] = c
        cols.append(col)
    M = SparseMatrix(len(gens) * n, n, cols, F)
    K = kernel_basis(M)
    basis = [dict(c) for c in K.cols]
    comps = A.quiver.components()
    ok = True
    for z in basis:
        for comp in comps:
            coeffs = {z.get(A.unit[v], 0) for v in comp}
            if len(coeffs) > 1:
                ok = False
        for k in z:
            if not A.basis[k].is_stationary() and A.src[k] != A.tgt[k]:
                ok = False
    return basis, ok


def is_core(C: BoundQuiverAlgebra, N: int = 4) -> dict:
    acyclic = not C.quiver.has_oriented_cycle()
    dims = hochschild_dims(C, N=N) if acyclic else None
    vanish = bool(dims) and all(d == 0 for d in dims[1:])
    return {"core": acyclic and vanish, "acyclic": acyclic, "dims": dims, "up_to_degree": N}


def hochart_check(A: BoundQuiverAlgebra, w: OrientationWitness, N: int = 4) -> dict:
    """dim H^0 R = H^0 A1 + H^0 A2 - 1; dim H^1 R = H^1 A1 + H^1 A2 + H^0 C - 1;
    dim H^i R = H^i A1 + H^i A2 for 2 <= i <= N."""
    if w.condition is None:
        raise ValidationError("witness satisfies only condition (2)")
    if not w.e:
        raise ValidationError("core identity needs a nonempty C")
    if not A.is_connected():
        raise ValidationError("R must be connected")
    cs = CornerSystem(A, w)
    core = is_core(cs.C, N)
    if not core["core"]:
        raise ValidationError("C is not a core algebra up to degree %d" % N)
    h = {lab: hochschild_dims(X, N=N) for lab, X in cs.algebras()}
    R, A1, A2, C = h["R"], h["A1"], h["A2"], h["C"]
    checks = {
        "a": R[0] == A1[0] + A2[0] - 1,
        "b": R[1] == A1[1] + A2[1] + C[0] - 1,
        "c": all(R[i] == A1[i] + A2[i] for i in range(2, N + 1)),
    }
    return {"dims": h, "checks": checks, "ok": all(checks.values()), "up_to_degree": N,
            "center_dim_C": C[0], "components_C": len(cs.C.quiver.components())}


# ---------------------------------------------------------------- Gerstenhaber compatibility

def gerstenhaber_compat_check(A: BoundQuiverAlgebra, w: OrientationWitness | None = None, samples: int = 20,
                              N: int = 3, seed: int = 0, corners=None) -> dict:
    """Restriction of cochains to A1, A2 and C commutes with ∪, every ∘_j and [,].

    Checked on seeded random cochains f, g of degrees n, m with n + m <= N.
    The signed maps beta_i = (-1)^i res differ from res by a global sign, so
    the unsigned restriction is what is compared.  Without a witness, pass
    corners: a list of convex vertex sets.
    """
    if w is not None:
        algs = [(lab, X) for lab, X in CornerSystem(A, w).algebras() if X is not None and lab != "R"]
    elif corners:
        algs = [(",".join(S), corner_algebra(A, list(S), "%s[%s]" % (A.name, ",".join(S)))) for S in corners]
    else:
        raise ValidationError("need a witness or a list of corners")
    rng = random.Random(seed)
    big = Cochains(A)
    smalls = {lab: Cochains(X, Blocks.vertex(A).restrict(X.vertices)) for lab, X in algs}
    emb = {lab: _emb(c.A, A) for lab, c in smalls.items()}
    res_cache: dict = {}

    def res(lab, n, f):
        key = (lab, n)
        if key not in res_cache:
            res_cache[key] = restriction_matrix(big.hc, smalls[lab].hc, n, emb[lab])
        return res_cache[key].apply(f)

    failures = []
    pairs = [(n, m) for n in range(0, N + 1) for m in range(0, N + 1) if n + m <= N]
    for s in range(samples):
        n, m = pairs[rng.randrange(len(pairs))]
        f = big.random(n, rng)
        g = big.random(m, rng)
        fg = big.cup(n, f, m, g)
        comps = {j: big.insert(n, f, m, g, j) for j in range(1, n + 1)} if n + m - 1 >= 0 else {}
        br = big.bracket(n, f, m, g) if n + m >= 1 else None
        for lab, sm in smalls.items():
            rf, rg = res(lab, n, f), res(lab, m, g)
            if res(lab, n + m, fg) != sm.cup(n, rf, m, rg):
                failures.append((s, lab, "cup", n, m))
            for j, val in comps.items():
                if res(lab, n + m - 1, val) != sm.insert(n, rf, m, rg, j):
                    failures.append((s, lab, "o_%d" % j, n, m))
            if br is not None and res(lab, n + m - 1, br) != sm.bracket(n, rf, m, rg):
                failures.append((s, lab, "bracket", n, m))
    return {"samples": samples, "N": N, "seed": seed, "failures": failures, "ok": not failures}


# ---------------------------------------------------------------- tensor powers over E

def _chain_count(A: BoundQuiverAlgebra, blocks: Blocks, n: int, X, Y) -> int:
    """dim e_X R^{⊗_E n} e_Y: chains whose first path starts in X and last ends in Y."""
    from .hochschild import TensorChains
    X, Y = set(X), set(Y)
    T = TensorChains(A, blocks)
    return sum(1 for _, _, ps in T.chains(n) if A.src[ps[0]] in X and A.tgt[ps[-1]] in Y)


def tensor_corner_check(A: BoundQuiverAlgebra, w: OrientationWitness, n_max: int = 4) -> dict:
    """Corner identities for tensor powers over E = k e'_1 + k e + k e'_2:
    e R^{⊗n} e = C^{⊗n}, e_i R^{⊗n} e_i = A_i^{⊗n}, and the splitting of
    A_i^{⊗n} when e R e'_i = 0 or e'_i R e = 0."""
    cs = CornerSystem(A, w)
    E = Blocks.from_sets(A, [s for s in (w.e1p, w.e, w.e2p) if s])
    rows, ok = [], True
    corners = [("C", w.e, cs.C), ("A1", w.e1, cs.A1), ("A2", w.e2, cs.A2)]
    for n in range(1, n_max + 1):
        for lab, S, X in corners:
            if X is None:
                continue
            lhs = _chain_count(A, E, n, S, S)
            rhs = _chain_count(X, E.restrict(X.vertices), n, S, S)
            rows.append((n, lab, lhs, rhs))
            ok &= lhs == rhs
        for i, (ep, Ai) in enumerate(((w.e1p, cs.A1), (w.e2p, cs.A2)), 1):
            if not ep:
                continue
            whole = _chain_count(Ai, E.restrict(Ai.vertices), n, Ai.vertices, Ai.vertices)
            cdim = _chain_count(A, E, n, w.e, w.e) if w.e else 0
            if _block_zero(A, w.e, ep):
                parts = _chain_count(A, E, n, ep, ep) + _chain_count(A, E, n, ep, w.e) + cdim
                rows.append((n, "A%d:eRe'=0" % i, whole, parts))
                ok &= whole == parts
            if _block_zero(A, ep, w.e):
                parts = _chain_count(A, E, n, ep, ep) + _chain_count(A, E, n, w.e, ep) + cdim
                rows.append((n, "A%d:e'Re=0" % i, whole, parts))
                ok &= whole == parts
    return {"ok": ok, "rows": rows}
