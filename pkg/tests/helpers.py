"""Shared test helpers: cached corpus loading and seeded random quiver documents."""
import functools
import itertools
import random

from sympy import QQ as SQQ
from sympy.polys.matrices import DomainMatrix

from quivhom import corpus_doc, load_algebra


@functools.lru_cache(maxsize=None)
def corpus(name):
    return load_algebra(corpus_doc(name), name)


def _doc(vertices, arrows, relations, orientation=None):
    d = {"field": {"kind": "rational"}, "vertices": vertices,
         "arrows": [{"name": n, "src": s, "tgt": t} for n, s, t in arrows],
         "relations": [[{"coeff": c, "path": list(w)} for w, c in rel] for rel in relations]}
    if orientation:
        d["orientation"] = orientation
    return d


def _tree(rng, names, prefix):
    arrows = []
    for i in range(1, len(names)):
        j = rng.randrange(i)
        a, b = (names[j], names[i]) if rng.random() < 0.5 else (names[i], names[j])
        arrows.append(("%s%d" % (prefix, i), a, b))
    return arrows


def _paths(arrows, start_set, max_len=8):
    out = {}
    for a in arrows:
        out.setdefault(a[1], []).append(a)
    res = []
    stack = [((a[0],), a[2]) for a in arrows if a[1] in start_set]
    while stack:
        w, end = stack.pop()
        res.append((w, end))
        if len(w) < max_len:
            for a in out.get(end, []):
                stack.append((w + (a[0],), a[2]))
    return res


def oriented_tree_core(seed: int, condition: int):
    """Oriented algebra whose core C is a tree quiver with monomial relations.

    condition 3: arrows only e'_i -> C; 4: only C -> e'_i;
    5: C -> e'_1 and e'_2 -> C, with every path e'_2 -> ... -> e'_1 killed.
    Returns (doc, (e1', e, e2')).
    """
    rng = random.Random(seed)
    nC, n1, n2 = rng.randint(1, 3), rng.randint(1, 2), rng.randint(1, 2)
    C = ["c%d" % i for i in range(nC)]
    P = ["p%d" % i for i in range(n1)]
    S = ["s%d" % i for i in range(n2)]
    arrows = _tree(rng, C, "g") + _tree(rng, P, "x") + _tree(rng, S, "y")
    for side, verts, tag in ((1, P, "u"), (2, S, "v")):
        for k in range(rng.randint(1, 2)):
            c, q = rng.choice(C), rng.choice(verts)
            into_c = {3: True, 4: False, 5: side == 2}[condition]
            arrows.append(("%s%d" % (tag, k), q, c) if into_c else ("%s%d" % (tag, k), c, q))
    relations = []
    # random monomial relations of length 2
    for a in arrows:
        for b in arrows:
            if a[2] == b[1] and rng.random() < 0.3:
                relations.append([((a[0], b[0]), "1")])
    if condition == 5:
        killed = {w for rel in relations for (w, _c) in rel}
        for w, end in _paths(arrows, set(S)):
            if end in P and not any(tuple(w[i:i + len(k)]) == k for k in killed for i in range(len(w))):
                relations.append([(w, "1")])
                killed.add(w)
    doc = _doc(C + P + S, arrows, relations, {"e1": P, "e": C, "e2": S})
    return doc, (P, C, S)


def _rank(rows, nrows, ncols):
    if not nrows or not ncols:
        return 0
    return DomainMatrix([[SQQ(x) for x in r] for r in rows], (nrows, ncols), SQQ).rank()


def connes_lambda_dims(A, N):
    """HC_n as the homology of C^λ = C/(1-t) on the absolute tensor powers A^{⊗ n+1}.

    Dimensions only, from ranks:  dim C^λ_n = dim C_n - rk(1-t)_n and
    rk(b̄_n) = rk[b_n | (1-t)_{n-1}] - rk(1-t)_{n-1}.
    """
    d = A.dim
    mult = {}
    for (i, j), terms in A.mul.items():
        mult[(i, j)] = terms

    def chains(n):
        return list(itertools.product(range(d), repeat=n + 1))

    def one_minus_t(n):
        idx = {c: k for k, c in enumerate(chains(n))}
        size = len(idx)
        M = [[0] * size for _ in range(size)]
        sign = (-1) ** n
        for c, k in idx.items():
            M[k][k] += 1
            M[idx[(c[-1],) + c[:-1]]][k] -= sign
        return M, size

    def b(n):
        src, tgt = chains(n), {c: k for k, c in enumerate(chains(n - 1))}
        M = [[0] * len(src) for _ in range(len(tgt))]
        for k, c in enumerate(src):
            for i in range(n):
                for r, x in mult.get((c[i], c[i + 1]), ()):
                    M[tgt[c[:i] + (r,) + c[i + 2:]]][k] += (-1) ** i * x
            for r, x in mult.get((c[n], c[0]), ()):
                M[tgt[(r,) + c[1:n]]][k] += (-1) ** n * x
        return M, len(tgt), len(src)

    rk_t = {}
    for n in range(N + 2):
        M, s = one_minus_t(n)
        rk_t[n] = _rank(M, s, s)
    rk_bbar = {0: 0}
    for n in range(1, N + 2):
        B, r, c = b(n)
        T, s = one_minus_t(n - 1)
        joined = [B[i] + T[i] for i in range(r)]
        rk_bbar[n] = _rank(joined, r, c + s) - rk_t[n - 1]
    out = []
    for n in range(N + 1):
        dim_lambda = d ** (n + 1) - rk_t[n]
        out.append(dim_lambda - rk_bbar[n] - rk_bbar[n + 1])
    return out
