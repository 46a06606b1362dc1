"""Quivers, admissible relations and the bound quiver algebra kQ/I.

Paths compose left to right: the word (a, b) means "a then b" and needs
target(a) == source(b).  Relations are completed into a rewriting system
under the degree-lex order (length first, then arrow declaration order).
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import NamedTuple

from .errors import ValidationError
from .linalg import QQ, GF, Field, Echelon


class Arrow(NamedTuple):
    name: str
    src: str
    tgt: str


class Path(NamedTuple):
    source: str
    target: str
    arrows: tuple

    @property
    def length(self) -> int:
        return len(self.arrows)

    def is_stationary(self) -> bool:
        return not self.arrows

    def __str__(self):
        if not self.arrows:
            return "e%s" % self.source
        return "".join(self.arrows) if all(len(a) == 1 for a in self.arrows) else "*".join(self.arrows)


class Quiver:
    def __init__(self, vertices, arrows):
        self.vertices = [str(v) for v in vertices]
        self.arrows = [Arrow(str(a[0]), str(a[1]), str(a[2])) for a in arrows]
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("duplicate vertex id")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate arrow name")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.src not in vs or a.tgt not in vs:
                raise ValidationError("arrow %s references unknown vertex" % a.name)
        self.arrow = {a.name: a for a in self.arrows}
        self.arrow_pos = {a.name: i for i, a in enumerate(self.arrows)}
        self.vertex_pos = {v: i for i, v in enumerate(self.vertices)}
        self.out_arrows = {v: [a for a in self.arrows if a.src == v] for v in self.vertices}

    def __repr__(self):
        return "Quiver(%d vertices, %d arrows)" % (len(self.vertices), len(self.arrows))

    def path(self, word) -> Path:
        word = tuple(word)
        if not word:
            raise ValueError("use stationary() for the empty path")
        for a in word:
            if a not in self.arrow:
                raise ValidationError("unknown arrow %r" % a)
        for a, b in zip(word, word[1:]):
            if self.arrow[a].tgt != self.arrow[b].src:
                raise ValidationError("arrows %s, %s do not compose" % (a, b))
        return Path(self.arrow[word[0]].src, self.arrow[word[-1]].tgt, word)

    def stationary(self, v) -> Path:
        return Path(str(v), str(v), ())

    def key(self, word) -> tuple:
        """Degree-lex sort key (length, then arrow positions)."""
        return (len(word),) + tuple(self.arrow_pos[a] for a in word)

    def subquiver(self, vertices) -> "Quiver":
        vs = [v for v in self.vertices if v in set(vertices)]
        keep = set(vs)
        return Quiver(vs, [a for a in self.arrows if a.src in keep and a.tgt in keep])

    def components(self, vertices=None) -> list[list[str]]:
        """Connected components of the underlying graph, in declaration order."""
        vs = self.vertices if vertices is None else [v for v in self.vertices if v in set(vertices)]
        keep = set(vs)
        parent = {v: v for v in vs}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for a in self.arrows:
            if a.src in keep and a.tgt in keep:
                ra, rb = find(a.src), find(a.tgt)
                if ra != rb:
                    parent[max(ra, rb, key=self.vertex_pos.get)] = min(ra, rb, key=self.vertex_pos.get)
        groups: dict[str, list] = {}
        for v in vs:
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def has_oriented_cycle(self) -> bool:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.tgt] += 1
        todo = [v for v in self.vertices if indeg[v] == 0]
        seen = 0
        while todo:
            v = todo.pop()
            seen += 1
            for a in self.out_arrows[v]:
                indeg[a.tgt] -= 1
                if indeg[a.tgt] == 0:
                    todo.append(a.tgt)
        return seen < len(self.vertices)


# ---------------------------------------------------------------- documents

@dataclass
class Options:
    field: Field = QQ
    cap: int = 12
    orientation: dict | None = None


def _parse_field(desc) -> Field:
    if desc is None:
        return QQ
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ValidationError("field must be an object with a 'kind'")
    if desc["kind"] == "rational":
        return QQ
    if desc["kind"] == "prime":
        try:
            return GF(int(desc["p"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError("bad prime field: %s" % exc) from None
    raise ValidationError("unknown field kind %r" % desc["kind"])


def parse_quiver_doc(doc):
    """Parse a quiver document (JSON text, bytes or an already decoded dict).

    Returns (quiver, relations, options).  Each relation is a dict
    {word tuple: coefficient}.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ValidationError("malformed JSON: %s" % exc) from None
    if not isinstance(doc, dict):
        raise ValidationError("document must be a JSON object")
    for key in ("vertices", "arrows"):
        if key not in doc:
            raise ValidationError("missing field %r" % key)
    fld = _parse_field(doc.get("field"))
    try:
        arrows = [(a["name"], a["src"], a["tgt"]) for a in doc["arrows"]]
    except (KeyError, TypeError):
        raise ValidationError("arrows must be objects with name, src, tgt") from None
    Q = Quiver(doc["vertices"], arrows)
    relations = []
    for n, rel in enumerate(doc.get("relations", [])):
        poly: dict = {}
        ends = set()
        if not isinstance(rel, list) or not rel:
            raise ValidationError("relation %d must be a nonempty list of terms" % n)
        for term in rel:
            try:
                word = tuple(str(a) for a in term["path"])
                coeff = fld(Fraction(str(term.get("coeff", "1"))))
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise ValidationError("relation %d: bad term (%s)" % (n, exc)) from None
            if len(word) < 2:
                raise ValidationError("relation %d contains a path of length < 2" % n)
            p = Q.path(word)
            ends.add((p.source, p.target))
            c = fld.norm(poly.get(word, 0) + coeff)
            if c:
                poly[word] = c
            else:
                poly.pop(word, None)
        if len(ends) > 1:
            raise ValidationError("relation %d mixes non-parallel paths" % n)
        if poly:
            relations.append(poly)
    cap = doc.get("cap", 12)
    if not isinstance(cap, int) or cap < 1:
        raise ValidationError("cap must be a positive integer")
    orient = doc.get("orientation")
    if orient is not None:
        try:
            orient = {k: [str(v) for v in orient.get(k, [])] for k in ("e1", "e", "e2")}
        except AttributeError:
            raise ValidationError("orientation must be an object") from None
        for k, vs in orient.items():
            for v in vs:
                if v not in Q.vertex_pos:
                    raise ValidationError("orientation set %s names unknown vertex %r" % (k, v))
    return Q, relations, Options(fld, cap, orient)


# ---------------------------------------------------------------- rewriting

class CompletionError(ValidationError):
    pass


class ReductionSystem:
    """Reduced noncommutative Groebner basis of I, truncated at `cap`.

    rules: {leading word: tail}, where tail is a dict {word: coeff} of
    strictly smaller words and leading word == tail in kQ/I.
    """

    def __init__(self, quiver: Quiver, field: Field, rules: dict, cap: int):
        self.quiver = quiver
        self.field = field
        self.rules = rules
        self.cap = cap
        self.nilpotency_bound: int | None = None
        self._lead_lengths = sorted({len(w) for w in rules})
        self._nf_cache: dict = {}

    def find_lead(self, word):
        for ln in self._lead_lengths:
            for i in range(len(word) - ln + 1):
                sub = word[i:i + ln]
                if sub in self.rules:
                    return i, sub
        return None

    def reduce(self, poly: dict) -> dict:
        """Normal form of a linear combination of words."""
        F = self.field
        key = self.quiver.key
        m = self.nilpotency_bound
        work = {}
        for w, c in poly.items():
            if m is not None and len(w) >= m:
                continue
            if c:
                work[w] = c
        out = {}
        heap = [(tuple(-x for x in key(w)), w) for w in work]
        heapq.heapify(heap)
        while heap:
            _, w = heapq.heappop(heap)
            c = work.pop(w, 0)
            if not c:
                continue
            hit = self.find_lead(w)
            if hit is None:
                out[w] = c
                continue
            i, lead = hit
            pre, post = w[:i], w[i + len(lead):]
            for tw, tc in self.rules[lead].items():
                nw = pre + tw + post
                if m is not None and len(nw) >= m:
                    continue
                nc = F.norm(work.get(nw, 0) + c * tc)
                if nw not in work and nc:
                    heapq.heappush(heap, (tuple(-x for x in key(nw)), nw))
                if nc:
                    work[nw] = nc
                else:
                    work.pop(nw, None)
        return out

    def normal_form(self, word) -> dict:
        word = tuple(word)
        hit = self._nf_cache.get(word)
        if hit is None:
            hit = self.reduce({word: 1})
            self._nf_cache[word] = hit
        return hit

    def is_irreducible(self, word) -> bool:
        return self.find_lead(tuple(word)) is None

    def restrict(self, quiver: Quiver) -> "ReductionSystem":
        """Rules whose leading word lives in a subquiver."""
        names = set(quiver.arrow)
        rules = {w: t for w, t in self.rules.items() if all(a in names for a in w)}
        rs = ReductionSystem(quiver, self.field, rules, self.cap)
        rs.nilpotency_bound = self.nilpotency_bound
        return rs


def _poly_key(Q, poly):
    return max(poly, key=Q.key)


def complete_rewriting(quiver: Quiver, relations: list[dict], cap: int = 12,
                       field: Field = QQ, max_rules: int = 20000) -> ReductionSystem:
    """Buchberger-style completion of the relations, overlaps up to length cap.

    Afterwards the irreducible words are enumerated and the nilpotency bound
    m (smallest L such that the arrow ideal satisfies F^L in I) is found;
    errors if it is not reached within cap.
    """
    Q, F = quiver, field
    key = Q.key
    rules: dict = {}          # lead -> tail
    rid: dict = {}            # lead -> serial, to invalidate stale pairs
    serial = [0]
    pairs: list = []

    def reduce(poly):
        rs = ReductionSystem(Q, F, rules, cap)
        return rs.reduce(poly)

    def monic(poly):
        lead = _poly_key(Q, poly)
        c = poly[lead]
        tail = {w: F.norm(-F.div(v, c)) for w, v in poly.items() if w != lead}
        return lead, {w: v for w, v in tail.items() if v}

    def as_poly(lead, tail):
        d = dict(tail)
        d = {w: F.norm(-v) for w, v in d.items()}
        d[lead] = 1
        return d

    def push_pairs(lead):
        for other in list(rules):
            for a, b in ((lead, other), (other, lead)):
                for k in range(1, min(len(a), len(b))):
                    if a[-k:] == b[:k]:
                        W = a + b[k:]
                        if len(W) <= cap:
                            heapq.heappush(pairs, (key(W), a, b, k, rid[a], rid[b]))

    pending = [dict(r) for r in relations]
    while True:
        while pending:
            poly = reduce(pending.pop())
            if not poly:
                continue
            lead, tail = monic(poly)
            # rules whose lead contains the new lead get re-reduced
            stale = [w for w in rules if w != lead and any(w[i:i + len(lead)] == lead for i in range(len(w) - len(lead) + 1))]
            for w in stale:
                pending.append(as_poly(w, rules.pop(w)))
                rid.pop(w)
            rules[lead] = tail
            serial[0] += 1
            rid[lead] = serial[0]
            if len(rules) > max_rules:
                raise CompletionError("completion diverges: more than %d rules within cap %d" % (max_rules, cap))
            push_pairs(lead)
        if not pairs:
            break
        _, a, b, k, ra, rb = heapq.heappop(pairs)
        if rid.get(a) != ra or rid.get(b) != rb:
            continue
        # overlap word a + b[k:]: (a - tail_a) b[k:] - a[:-k] (b - tail_b)
        s = {}
        for w, c in rules[a].items():
            s[w + b[k:]] = F.norm(s.get(w + b[k:], 0) + c)
        for w, c in rules[b].items():
            nw = a[:-k] + w
            s[nw] = F.norm(s.get(nw, 0) - c)
        s = {w: c for w, c in s.items() if c}
        if s:
            pending.append(s)

    # fully reduce tails
    rs = ReductionSystem(Q, F, dict(rules), cap)
    rs.rules = {lead: rs.reduce(tail) for lead, tail in rules.items()}
    rs = ReductionSystem(Q, F, rs.rules, cap)
    _find_nilpotency(rs)
    return rs


def _irreducible_words(rs: ReductionSystem, limit: int) -> list[list[tuple]]:
    """Irreducible words grouped by length 1..limit (length 0 omitted)."""
    Q = rs.quiver
    layers = [[(a.name,) for a in Q.arrows]]
    while layers[-1] and len(layers) < limit:
        nxt = []
        for w in layers[-1]:
            for a in Q.out_arrows[Q.arrow[w[-1]].tgt]:
                nw = w + (a.name,)
                # only suffixes can be new leads
                if not any(nw[len(nw) - ln:] in rs.rules for ln in rs._lead_lengths if ln <= len(nw)):
                    nxt.append(nw)
        layers.append(nxt)
    return layers


def _find_nilpotency(rs: ReductionSystem) -> None:
    cap = rs.cap
    layers = _irreducible_words(rs, cap + 1)
    if layers[-1]:
        raise CompletionError("irreducible paths of length %d exist: nilpotency not reached within cap %d "
                              "(ideal possibly not admissible)" % (len(layers), cap))
    m_irr = next(i + 1 for i, l in enumerate(layers) if not l)
    # image of F^L in kQ/I, via normal forms of L-fold arrow products
    Q = rs.quiver
    F = rs.field
    irr = [w for layer in layers for w in layer]
    pos = {w: i for i, w in enumerate(irr)}
    current = [{(a.name,): 1} for a in Q.arrows]
    L = 1
    while current:
        if L > cap:
            raise CompletionError("arrow ideal not nilpotent within cap %d (ideal not admissible)" % cap)
        L += 1
        ech = Echelon(F)
        nxt = []
        for v in current:
            for a in Q.arrows:
                prod = {}
                for w, c in v.items():
                    if Q.arrow[w[-1]].tgt == a.src:
                        prod[w + (a.name,)] = c
                if not prod:
                    continue
                nf = rs.reduce(prod)
                if nf and ech.add({pos[w]: c for w, c in nf.items()}):
                    nxt.append(nf)
        current = nxt
    rs.nilpotency_bound = L
    rs.irreducible_length_bound = m_irr
    rs._nf_cache.clear()


# ---------------------------------------------------------------- algebra

class BoundQuiverAlgebra:
    """kQ/I with the irreducible-path basis and its structure constants.

    basis[i] is a Path; mul[(i, j)] is a tuple of (k, coeff) pairs giving the
    normal form of basis[i]*basis[j] (absent when the product is zero).
    """

    def __init__(self, quiver: Quiver, system: ReductionSystem, basis: list[Path], name: str = "",
                 parent: "BoundQuiverAlgebra | None" = None):
        self.quiver = quiver
        self.system = system
        self.field = system.field
        self.basis = basis
        self.index = {p: i for i, p in enumerate(basis)}
        self.name = name
        self.parent = parent
        self.vertices = quiver.vertices
        self.unit = {v: self.index[quiver.stationary(v)] for v in quiver.vertices}
        self.src = [p.source for p in basis]
        self.tgt = [p.target for p in basis]
        self.from_vertex: dict[str, list[int]] = {v: [] for v in quiver.vertices}
        self.to_vertex: dict[str, list[int]] = {v: [] for v in quiver.vertices}
        for i, p in enumerate(basis):
            self.from_vertex[p.source].append(i)
            self.to_vertex[p.target].append(i)
        self.mul: dict = {}
        F = self.field
        for i, p in enumerate(basis):
            for j in self.from_vertex[p.target]:
                q = basis[j]
                if not p.arrows:
                    self.mul[(i, j)] = ((j, 1),)
                    continue
                if not q.arrows:
                    self.mul[(i, j)] = ((i, 1),)
                    continue
                nf = system.normal_form(p.arrows + q.arrows)
                if nf:
                    terms = []
                    for w, c in nf.items():
                        k = self.index.get(Path(p.source, q.target, w))
                        if k is None:
                            raise ValidationError("normal form left the basis: %r" % (w,))
                        terms.append((k, F.norm(c)))
                    self.mul[(i, j)] = tuple(sorted(terms))

    def __repr__(self):
        return "BoundQuiverAlgebra(%s, dim=%d)" % (self.name or "?", self.dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def nilpotency_bound(self) -> int:
        return self.system.nilpotency_bound

    def label(self, i: int) -> str:
        return str(self.basis[i])

    def product(self, i: int, j: int) -> tuple:
        return self.mul.get((i, j), ())

    def multiply(self, u: dict, v: dict) -> dict:
        """Product of two elements given as {basis index: coeff}."""
        p = self.field.p
        out: dict = {}
        for i, a in u.items():
            tgt = self.tgt[i]
            for j, b in v.items():
                if self.src[j] != tgt:
                    continue
                for k, c in self.mul.get((i, j), ()):
                    s = out.get(k, 0) + a * b * c
                    if p:
                        s %= p
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def one(self) -> dict:
        return {self.unit[v]: 1 for v in self.vertices}

    def element(self, word_or_path) -> dict:
        """Normal form of a path given as arrow words (or a vertex for e_x)."""
        if isinstance(word_or_path, str) and word_or_path in self.unit:
            return {self.unit[word_or_path]: 1}
        p = self.quiver.path(word_or_path)
        nf = self.system.normal_form(p.arrows)
        return {self.index[Path(p.source, p.target, w)]: c for w, c in nf.items()}

    def paths_between(self, x: str, y: str) -> list[int]:
        return [i for i in self.from_vertex[x] if self.tgt[i] == y]

    def corner_dim(self, xs, ys) -> int:
        xs, ys = set(xs), set(ys)
        return sum(1 for i in range(self.dim) if self.src[i] in xs and self.tgt[i] in ys)

    def is_schurian(self) -> bool:
        seen = set()
        for i in range(self.dim):
            key = (self.src[i], self.tgt[i])
            if key in seen:
                return False
            seen.add(key)
        return True

    def is_connected(self) -> bool:
        return len(self.quiver.components()) <= 1

    def check_associativity(self) -> bool:
        n = self.dim
        for i in range(n):
            for j in self.from_vertex[self.tgt[i]]:
                ij = dict(self.mul.get((i, j), ()))
                for k in self.from_vertex[self.tgt[j]]:
                    left = self.multiply(ij, {k: 1})
                    right = self.multiply({i: 1}, dict(self.mul.get((j, k), ())))
                    if left != right:
                        return False
        return True


def algebra_from(quiver: Quiver, system: ReductionSystem, name: str = "") -> BoundQuiverAlgebra:
    """Algebra whose basis is all irreducible paths, ordered by vertex, then degree-lex."""
    if system.nilpotency_bound is None:
        _find_nilpotency(system)
    basis = [quiver.stationary(v) for v in quiver.vertices]
    layers = _irreducible_words(system, system.cap + 1)
    for layer in layers:
        for w in sorted(layer, key=quiver.key):
            if len(w) < system.nilpotency_bound and system.normal_form(w) == {w: 1}:
                basis.append(quiver.path(w))
    return BoundQuiverAlgebra(quiver, system, basis, name)


def load_algebra(doc, name: str = "", cap: int | None = None) -> tuple[BoundQuiverAlgebra, Options]:
    """Document -> (algebra, options) in one call."""
    Q, rels, opts = parse_quiver_doc(doc)
    if cap is not None:
        opts.cap = cap
    rs = complete_rewriting(Q, rels, opts.cap, opts.field)
    if not name and isinstance(doc, dict):
        name = doc.get("name", "")
    return algebra_from(Q, rs, name), opts


def convexity_violations(A: BoundQuiverAlgebra, S) -> list[Path]:
    """Basis paths with both ends in S that pass through a vertex outside S."""
    S = set(S)
    bad = []
    for p in A.basis:
        if p.source in S and p.target in S:
            for a in p.arrows:
                if A.quiver.arrow[a].tgt not in S:
                    bad.append(p)
                    break
    return bad


def corner_algebra(A: BoundQuiverAlgebra, S, name: str = "") -> BoundQuiverAlgebra:
    """e_S A e_S as a bound quiver algebra on the full subquiver on S."""
    S = [v for v in A.vertices if v in set(str(s) for s in S)]
    if not S:
        raise ValidationError("corner of an empty vertex set")
    bad = convexity_violations(A, S)
    if bad:
        raise ValidationError("vertex set %s is not convex: path %s leaves it" % (S, bad[0]))
    sub = A.quiver.subquiver(S)
    rs = A.system.restrict(sub)
    keep = set(S)
    basis = [p for p in A.basis if p.source in keep and p.target in keep]
    C = BoundQuiverAlgebra(sub, rs, basis, name or "%s[%s]" % (A.name, ",".join(S)), parent=A)
    C.embedding = [A.index[p] for p in basis]
    return C


def semi_normed_basis(A: BoundQuiverAlgebra) -> dict:
    """Product table {(i, j): (k, lambda)} if the path basis is semi-normed.

    Stationary paths and arrows are always in the basis; what can fail is
    condition (c): some product of two basis paths having two or more terms.
    """
    table = {}
    for (i, j), terms in A.mul.items():
        if len(terms) > 1:
            raise ValidationError("basis is not semi-normed: %s*%s has %d terms"
                                  % (A.label(i), A.label(j), len(terms)))
        k, c = terms[0]
        table[(i, j)] = (k, c)
    return table


# ---------------------------------------------------------------- corpus

def corpus_names() -> list[str]:
    from importlib import resources
    files = resources.files("quivhom") / "corpus"
    return sorted(f.name[:-5] for f in files.iterdir() if f.name.endswith(".json"))


def corpus_doc(name: str) -> dict:
    from importlib import resources
    f = resources.files("quivhom") / "corpus" / (name + ".json")
    if not f.is_file():
        raise ValidationError("no corpus document named %r" % name)
    return json.loads(f.read_text(encoding="utf-8"))


def load_corpus(name: str) -> BoundQuiverAlgebra:
    return load_algebra(corpus_doc(name), name)[0]
