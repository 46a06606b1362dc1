"""Fundamental groups of bound quivers.

Homotopy is generated by the minimal relations of I: a relation
sum λ_i ω_i (at least two parallel paths, no proper sub-sum in I) makes all
its paths homotopic.  Minimal relations are the circuits of the linear
matroid formed by the normal forms of the nonzero parallel paths.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field as dc_field

from .errors import BudgetExceeded, ValidationError
from .linalg import SparseMatrix, ZZ, kernel_basis, rank, smith_normal_form
from .oriented import OrientationWitness, _block_zero
from .quiver_core import BoundQuiverAlgebra, Quiver, corner_algebra

CIRCUIT_CAP = 2 ** 16


# ---------------------------------------------------------------- walks

@dataclass(frozen=True)
class Walk:
    """Signed arrows (name, +1 | -1) chained head to tail."""
    quiver: Quiver
    steps: tuple

    def __post_init__(self):
        pos = None
        for a, s in self.steps:
            arr = self.quiver.arrow.get(a)
            if arr is None or s not in (1, -1):
                raise ValidationError("bad walk step %r" % ((a, s),))
            start, end = (arr.src, arr.tgt) if s == 1 else (arr.tgt, arr.src)
            if pos is not None and start != pos:
                raise ValidationError("walk steps do not chain at %r" % a)
            pos = end

    def reduced(self) -> "Walk":
        return Walk(self.quiver, tuple(free_reduce(self.steps)))


def free_reduce(word) -> list:
    out: list = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return out


def _cyclic_reduce(word) -> list:
    w = free_reduce(word)
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return w


def _inverse(word) -> list:
    return [(g, -e) for g, e in reversed(word)]


# ---------------------------------------------------------------- minimal relations

@dataclass
class MinimalRelation:
    source: str
    target: str
    terms: list             # [(word, coeff)]
    fundamental: bool = True

    @property
    def paths(self) -> list:
        return [w for w, _ in self.terms]

    def __str__(self):
        return " + ".join("%s*%s" % (c, "*".join(w)) for w, c in self.terms)


def _paths_from(Q: Quiver, x: str, max_len: int):
    """All paths of Q starting at x with 1 <= length <= max_len, as arrow words."""
    out = []
    stack = [((a.name,), a.tgt) for a in Q.out_arrows[x]]
    while stack:
        w, end = stack.pop()
        out.append((w, end))
        if len(w) < max_len:
            for a in Q.out_arrows[end]:
                stack.append((w + (a.name,), a.tgt))
    return out


def _nf_vector(A: BoundQuiverAlgebra, word) -> dict:
    return A.element(word)


def _in_ideal(A: BoundQuiverAlgebra, terms) -> bool:
    acc: dict = {}
    p = A.field.p
    for w, c in terms:
        if not w:
            return False
        for k, v in _nf_vector(A, w).items():
            s = acc.get(k, 0) + c * v
            if p:
                s %= p
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
    return not acc


def minimal_relations(A: BoundQuiverAlgebra, cap: int = CIRCUIT_CAP) -> list[MinimalRelation]:
    Q = A.quiver
    m = A.system.nilpotency_bound
    F = A.field
    rels = []
    for x in Q.vertices:
        by_target: dict = {}
        for w, y in _paths_from(Q, x, max(m - 1, 1)):
            if len(w) >= 2:
                nf = _nf_vector(A, w)
                if nf:
                    by_target.setdefault(y, []).append((w, nf))
        for y in Q.vertices:
            cand = by_target.get(y, [])
            if len(cand) < 2:
                continue
            if 2 ** len(cand) > cap:
                raise BudgetExceeded("circuit enumeration over %d parallel paths %s->%s exceeds cap"
                                     % (len(cand), x, y))
            cand.sort(key=lambda t: Q.key(t[0]))
            found: list[frozenset] = []
            for size in range(2, len(cand) + 1):
                for S in itertools.combinations(range(len(cand)), size):
                    fs = frozenset(S)
                    if any(c <= fs for c in found):
                        continue
                    M = SparseMatrix(A.dim, size, [dict(cand[i][1]) for i in S], F)
                    if rank(M) != size - 1:
                        continue
                    K = kernel_basis(M)
                    vec = K.cols[0]
                    if len(vec) != size:
                        continue        # dependency misses a column: a smaller circuit is inside
                    found.append(fs)
                    lead = vec[size - 1]
                    terms = [(cand[i][0], F.div(vec[j], lead)) for j, i in enumerate(S)]
                    rels.append(MinimalRelation(x, y, terms))
    for r in rels:
        r.fundamental = not _factors(A, r)
    return rels


def _factors(A: BoundQuiverAlgebra, r: MinimalRelation) -> bool:
    """r = αρ' or ρ'α with ρ' in I (then ρ' is minimal as well)."""
    ws = r.paths
    if len({w[0] for w in ws}) == 1 and all(len(w) >= 2 for w in ws):
        if _in_ideal(A, [(w[1:], c) for w, c in r.terms]):
            return True
    if len({w[-1] for w in ws}) == 1 and all(len(w) >= 2 for w in ws):
        if _in_ideal(A, [(w[:-1], c) for w, c in r.terms]):
            return True
    return False


# ---------------------------------------------------------------- presentations

@dataclass
class GroupPresentation:
    generators: list
    relators: list                # words: lists of (generator, ±1)
    basepoint: str = ""
    tree: list = dc_field(default_factory=list)

    def abelianization(self) -> tuple[int, list[int]]:
        return abelianization(self)

    def as_text(self) -> str:
        def word(w):
            return "*".join(g if e == 1 else g + "^-1" for g, e in w) or "1"
        rank_, tors = self.abelianization()
        lines = ["generators: " + (", ".join(self.generators) or "(none)")]
        lines += ["relator: " + word(r) for r in self.relators]
        lines.append("abelianization: " + ab_string(rank_, tors))
        return "\n".join(lines)

    def as_dict(self) -> dict:
        r, t = self.abelianization()
        return {"generators": self.generators, "basepoint": self.basepoint, "tree": self.tree,
                "relators": [[[g, e] for g, e in w] for w in self.relators],
                "abelianization": {"rank": r, "torsion": t}}


def ab_string(rank_: int, torsion) -> str:
    parts = (["Z" if rank_ == 1 else "Z^%d" % rank_] if rank_ else []) + ["Z/%d" % t for t in torsion]
    return " + ".join(parts) or "0"


def spanning_tree(Q: Quiver, root: str | None = None, start_forest=(), vertices=None) -> list[str]:
    """BFS spanning forest on the underlying graph, arrows in declaration order.

    start_forest arrows are kept; further arrows only join different components.
    """
    vs = list(Q.vertices) if vertices is None else [v for v in Q.vertices if v in set(vertices)]
    keep = set(vs)
    parent = {v: v for v in vs}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree = []
    for name in start_forest:
        a = Q.arrow[name]
        ra, rb = find(a.src), find(a.tgt)
        if ra == rb:
            raise ValidationError("start forest contains a cycle")
        parent[ra] = rb
        tree.append(name)
    order = ([root] if root is not None else []) + sorted(vs)
    seen = set()
    for r in order:
        if r in seen:
            continue
        queue = deque([r])
        seen.add(r)
        while queue:
            v = queue.popleft()
            for a in Q.arrows:
                if a.src not in keep or a.tgt not in keep or v not in (a.src, a.tgt):
                    continue
                u = a.tgt if a.src == v else a.src
                if find(a.src) != find(a.tgt):
                    parent[find(a.src)] = find(a.tgt)
                    tree.append(a.name)
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    return tree


def pi1_presentation(A: BoundQuiverAlgebra, basepoint: str | None = None, use: str = "fundamental",
                     tree: list | None = None, relations: list | None = None) -> GroupPresentation:
    Q = A.quiver
    if len(Q.components()) > 1:
        raise ValidationError("quiver is disconnected; compute the group per component")
    base = basepoint if basepoint is not None else min(Q.vertices)
    T = set(tree if tree is not None else spanning_tree(Q, base))
    gens = [a.name for a in Q.arrows if a.name not in T]
    rels = relations if relations is not None else minimal_relations(A)
    if use == "fundamental":
        rels = [r for r in rels if r.fundamental]
    elif use != "minimal":
        raise ValidationError("use must be 'fundamental' or 'minimal'")
    relators = []
    for r in rels:
        words = [[(a, 1) for a in w if a not in T] for w in r.paths]
        for w in words[1:]:
            rel = _cyclic_reduce(words[0] + _inverse(w))
            if rel and rel not in relators:
                relators.append(rel)
    return GroupPresentation(gens, relators, base, sorted(T, key=lambda n: Q.arrow_pos[n]))


def abelianization(P: GroupPresentation) -> tuple[int, list[int]]:
    pos = {g: i for i, g in enumerate(P.generators)}
    cols = []
    for r in P.relators:
        col: dict = {}
        for g, e in r:
            col[pos[g]] = col.get(pos[g], 0) + e
        cols.append({k: v for k, v in col.items() if v})
    M = SparseMatrix(len(P.generators), len(cols), cols, ZZ)
    snf = smith_normal_form(M)
    return len(P.generators) - snf.rank, snf.torsion


def tietze_simplify(P: GroupPresentation, max_steps: int = 200, max_len: int = 200) -> GroupPresentation:
    """Drop generators that occur exactly once in some relator (bounded)."""
    gens = list(P.generators)
    rels = [_cyclic_reduce(r) for r in P.relators]
    rels = [r for r in rels if r]
    for _ in range(max_steps):
        done = True
        for ri, r in enumerate(rels):
            counts: dict = {}
            for g, _e in r:
                counts[g] = counts.get(g, 0) + 1
            once = [g for g in counts if counts[g] == 1]
            if not once:
                continue
            g = once[0]
            k = next(i for i, (h, _e) in enumerate(r) if h == g)
            e = r[k][1]
            # r = u g^e v  =>  g = (v u)^{-1} if e = 1, g = v u if e = -1
            rest = r[k + 1:] + r[:k]
            sub = _inverse(rest) if e == 1 else rest
            new = []
            for j, s in enumerate(rels):
                if j == ri:
                    continue
                w = []
                for h, f in s:
                    if h == g:
                        w.extend(sub if f == 1 else _inverse(sub))
                    else:
                        w.append((h, f))
                w = _cyclic_reduce(w)
                if len(w) > max_len:
                    break
                if w:
                    new.append(w)
            else:
                gens.remove(g)
                rels = new
                done = False
                break
        if done:
            break
    return GroupPresentation(gens, rels, P.basepoint, P.tree)


def pi1_is_trivial(P: GroupPresentation) -> bool | None:
    """True when Tietze moves kill every generator; None when undecided."""
    S = tietze_simplify(P)
    if not S.generators:
        return True
    r, t = abelianization(S)
    if r or t:
        return False
    return None


# ---------------------------------------------------------------- Van Kampen

def vk_hypothesis(A: BoundQuiverAlgebra, C_vertices, relations=None) -> tuple[bool, list]:
    """Every path of every fundamental minimal relation lies in Q_C or has no arrow of Q_C."""
    cset = set(C_vertices)
    carrows = {a.name for a in A.quiver.arrows if a.src in cset and a.tgt in cset}
    bad = []
    for r in (relations if relations is not None else minimal_relations(A)):
        if not r.fundamental:
            continue
        for w in r.paths:
            inside = sum(1 for a in w if a in carrows)
            if 0 < inside < len(w):
                bad.append((str(r), "*".join(w)))
                break
    return not bad, bad


def _abelian_quotient(n_gens: int, relation_cols: list[dict]) -> tuple[int, list[int]]:
    M = SparseMatrix(n_gens, len(relation_cols), relation_cols, ZZ)
    snf = smith_normal_form(M)
    return n_gens - snf.rank, snf.torsion


def vk_check(A: BoundQuiverAlgebra, w: OrientationWitness | None = None, e1p=None, e=None, e2p=None) -> dict:
    """Compare ab(π1(Q_R, I_R)) with the abelianized gluing formula.

    Takes a witness or bare vertex sets; condition (2) is checked and reported,
    the group computation is done either way.
    """
    if w is not None:
        e1p, e, e2p = w.e1p, w.e, w.e2p
    e1p, e, e2p = tuple(e1p or ()), tuple(e or ()), tuple(e2p or ())
    cond2 = _block_zero(A, e1p, e2p) and _block_zero(A, e2p, e1p)
    offending = [A.label(i) for i in range(A.dim)
                 if (A.src[i] in e1p and A.tgt[i] in e2p) or (A.src[i] in e2p and A.tgt[i] in e1p)]
    rels = minimal_relations(A)
    hyp, bad = vk_hypothesis(A, e, rels)
    report = {"witness": {"e1": list(e1p), "e": list(e), "e2": list(e2p)}, "orientation_ok": cond2,
              "condition2_violations": offending, "hypothesis": hyp, "hypothesis_violations": bad}
    A1 = corner_algebra(A, e1p + e, A.name + ".A1")
    A2 = corner_algebra(A, e2p + e, A.name + ".A2")
    Q = A.quiver
    comps = Q.components(e) if e else []
    m = len(comps)
    TC = []
    for comp in comps:
        TC += spanning_tree(Q, None, (), comp)
    T1 = spanning_tree(Q, None, TC, e1p + e)
    T2 = spanning_tree(Q, None, TC, e2p + e)
    report["trees"] = {"C": TC, "A1": T1, "A2": T2, "intersection_is_TC": set(T1) & set(T2) == set(TC)}
    # per-corner presentations on these trees
    P1 = pi1_presentation(A1, tree=T1)
    P2 = pi1_presentation(A2, tree=T2)
    PC = []
    for comp in comps:
        Cj = corner_algebra(A, comp, A.name + ".C")
        PC.append(pi1_presentation(Cj, tree=[a for a in TC if Q.arrow[a].src in set(comp)]))
    # right side: gens(P1) + gens(P2) + (m-1) free; relators of P1, P2; i1(c) - i2(c)
    g1, g2 = P1.generators, P2.generators
    off2 = len(g1)
    n = len(g1) + len(g2) + max(m - 1, 0)
    cols = []
    for P, off in ((P1, 0), (P2, off2)):
        pos = {g: i for i, g in enumerate(P.generators)}
        for r in P.relators:
            col: dict = {}
            for g, s in r:
                col[off + pos[g]] = col.get(off + pos[g], 0) + s
            cols.append({k: v for k, v in col.items() if v})
    pos1 = {g: i for i, g in enumerate(g1)}
    pos2 = {g: off2 + i for i, g in enumerate(g2)}
    for P in PC:
        for g in P.generators:
            col = {}
            if g in pos1:
                col[pos1[g]] = 1
            if g in pos2:
                col[pos2[g]] = col.get(pos2[g], 0) - 1
            cols.append({k: v for k, v in col.items() if v})
    right = _abelian_quotient(n, cols)
    left_p = pi1_presentation(A)
    left = left_p.abelianization()
    report.update({
        "m": m, "left": {"rank": left[0], "torsion": left[1]}, "right": {"rank": right[0], "torsion": right[1]},
        "A1": dict(zip(("rank", "torsion"), P1.abelianization())),
        "A2": dict(zip(("rank", "torsion"), P2.abelianization())),
        "C": [dict(zip(("rank", "torsion"), P.abelianization())) for P in PC],
        "left_trivial": pi1_is_trivial(left_p),
        # trivial factors and at most one component of Q_C: the amalgam itself is trivial
        "right_trivial": (True if m <= 1 and pi1_is_trivial(P1) and pi1_is_trivial(P2)
                          else (False if right != (0, []) else None)),
        "agree": left == right,
    })
    report["verdict"] = ("inapplicable" if not hyp else ("agree" if left == right else "disagree"))
    return report


def h1_schurian(A: BoundQuiverAlgebra) -> int:
    """dim Hom(π1(Q, I), k+) for a schurian algebra."""
    if not A.is_schurian():
        raise ValidationError("algebra is not schurian")
    total = 0
    for comp in A.quiver.components():
        X = A if len(comp) == len(A.vertices) else _component(A, comp)
        r, tors = pi1_presentation(X).abelianization()
        p = A.field.p
        total += r + (sum(1 for t in tors if t % p == 0) if p else 0)
    return total


def _component(A: BoundQuiverAlgebra, comp) -> BoundQuiverAlgebra:
    return corner_algebra(A, comp, A.name)
