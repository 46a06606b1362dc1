import itertools

import pytest
import sympy

from helpers import corpus
from quivhom import (
    BudgetExceeded, ValidationError, abelianization, h1_schurian, hochschild_dims, load_algebra, minimal_relations,
    pi1_presentation, vk_check,
)
from quivhom.pi1 import GroupPresentation, Walk, free_reduce, pi1_is_trivial, tietze_simplify, vk_hypothesis


def doc(vertices, arrows, relations=()):
    return {"vertices": vertices, "arrows": [{"name": n, "src": s, "tgt": t} for n, s, t in arrows],
            "relations": [[{"coeff": c, "path": w} for w, c in r] for r in relations]}


def supports(rels):
    return {frozenset(r.paths) for r in rels}


def test_fundamental_relations_of_fund_example():
    rels = minimal_relations(corpus("ex_fund")[0])
    fund = {frozenset(r.paths) for r in rels if r.fundamental}
    assert fund == {frozenset({("beta1", "alpha1"), ("beta2", "alpha2")}),
                    frozenset({("epsilon1", "delta1"), ("epsilon2", "delta2")})}
    others = [r for r in rels if not r.fundamental]
    assert others and all("gamma" in w for r in others for w in r.paths)


def test_pi_b_relations():
    rels = minimal_relations(corpus("ex_pi_b")[0])
    assert supports(rels) == {frozenset({("alpha1", "beta"), ("alpha1", "gamma")}),
                              frozenset({("alpha2", "beta"), ("alpha2", "gamma")})}
    assert all(r.fundamental and len(r.paths) == 2 for r in rels)


def _circuit_oracle(A):
    """Brute-force circuits: minimal dependent subsets of parallel nonzero paths (sympy ranks)."""
    Q = A.quiver
    m = A.nilpotency_bound
    paths = []
    for length in range(2, m):
        for word in itertools.product([a.name for a in Q.arrows], repeat=length):
            if all(Q.arrow[x].tgt == Q.arrow[y].src for x, y in zip(word, word[1:])):
                nf = A.element(word)
                if nf:
                    paths.append((word, nf))
    groups = {}
    for w, nf in paths:
        groups.setdefault((Q.arrow[w[0]].src, Q.arrow[w[-1]].tgt), []).append((w, nf))
    found = set()
    for cand in groups.values():
        for size in range(2, len(cand) + 1):
            for S in itertools.combinations(cand, size):
                mat = sympy.Matrix([[nf.get(i, 0) for _, nf in S] for i in range(A.dim)])
                if mat.rank() == size - 1 and all(
                        sympy.Matrix([[nf.get(i, 0) for k, (_, nf) in enumerate(S) if k != j]
                                      for i in range(A.dim)]).rank() == size - 1 for j in range(size)):
                    found.add(frozenset(w for w, _ in S))
    return found


@pytest.mark.parametrize("name", ["ex_pi_b", "ex_fund", "sec25_b", "tournicoti_b"])
def test_circuits_against_oracle(name):
    A = corpus(name)[0]
    assert supports(minimal_relations(A)) == _circuit_oracle(A)


def test_three_path_circuit():
    d = doc(["1", "2", "3", "4", "5"], [("a", "1", "2"), ("b", "2", "5"), ("c", "1", "3"), ("d", "3", "5"),
                                        ("e", "1", "4"), ("f", "4", "5")],
            [[(["a", "b"], "1"), (["c", "d"], "1"), (["e", "f"], "1")]])
    A, _ = load_algebra(d)
    rels = minimal_relations(A)
    assert supports(rels) == {frozenset({("a", "b"), ("c", "d"), ("e", "f")})}
    P = pi1_presentation(A)
    assert len(P.generators) == 2
    assert abelianization(P) == (0, [])


def test_monomial_has_no_minimal_relations():
    assert minimal_relations(corpus("tournicoti_b")[0]) == []
    assert minimal_relations(corpus("sec25_a")[0]) == []


def test_circuit_budget():
    with pytest.raises(BudgetExceeded):
        minimal_relations(corpus("ex_pi_b")[0], cap=2)


@pytest.mark.parametrize("name", ["point", "tournicoti_a", "tournicoti_b", "sec25_a", "sec25_b", "ex_fund",
                                  "ex_pi_b"])
def test_generator_count_is_euler_characteristic(name):
    A = corpus(name)[0]
    P = pi1_presentation(A)
    assert len(P.generators) == len(A.quiver.arrows) - len(A.vertices) + 1
    assert len(P.tree) == len(A.vertices) - 1


@pytest.mark.parametrize("name", ["ex_fund", "ex_pi_b", "sec25_b"])
def test_minimal_vs_fundamental_same_abelianization(name):
    A = corpus(name)[0]
    assert abelianization(pi1_presentation(A, use="minimal")) == \
        abelianization(pi1_presentation(A, use="fundamental"))


def test_tree_quiver_trivial():
    A, _ = load_algebra(doc(["1", "2", "3"], [("a", "1", "2"), ("b", "3", "2")]))
    P = pi1_presentation(A)
    assert P.generators == [] and pi1_is_trivial(P)


def test_disconnected_rejected():
    A, _ = load_algebra(doc(["1", "2", "3"], [("a", "1", "2")]))
    with pytest.raises(ValidationError, match="disconnected"):
        pi1_presentation(A)


def test_abelianization_examples():
    assert abelianization(GroupPresentation(["a", "b"], [])) == (2, [])
    assert abelianization(GroupPresentation(["a"], [[("a", 1), ("a", 1)]])) == (0, [2])
    assert abelianization(GroupPresentation(["a", "b"], [[("a", 1), ("b", 1), ("a", -1), ("b", -1)]])) == (2, [])


def test_tietze():
    P = GroupPresentation(["a", "b"], [[("a", 1), ("b", -1)], [("b", 1)]])
    assert tietze_simplify(P).generators == []
    assert pi1_is_trivial(P)
    assert pi1_is_trivial(GroupPresentation(["a"], [[("a", 1), ("a", 1)]])) is False


def test_walks():
    Q = corpus("tournicoti_b")[0].quiver
    w = Walk(Q, (("alpha", 1), ("beta", 1), ("beta", -1)))
    assert w.reduced().steps == (("alpha", 1),)
    with pytest.raises(ValidationError):
        Walk(Q, (("alpha", 1), ("gamma", 1)))
    assert free_reduce([("a", 1), ("b", 1), ("b", -1), ("a", -1)]) == []


def _vk(name):
    A, opts = corpus(name)
    o = opts.orientation
    return vk_check(A, None, o["e1"], o["e"], o["e2"])


def test_vk_pi_a_both_sides_trivial():
    r = _vk("ex_pi_a")
    assert r["hypothesis"] and r["verdict"] == "agree"
    assert r["left_trivial"] is True and r["right_trivial"] is True
    assert not r["orientation_ok"]            # the declared partition violates condition (2)


def test_vk_pi_b_inapplicable():
    r = _vk("ex_pi_b")
    assert not r["hypothesis"] and r["verdict"] == "inapplicable"
    assert r["C"] == [{"rank": 1, "torsion": []}]


def test_vk_tournicoti_b():
    r = _vk("tournicoti_b")
    assert r["m"] == 2 and r["verdict"] == "agree"
    assert r["left"] == r["right"] == {"rank": 1, "torsion": []}
    assert r["trees"]["intersection_is_TC"]


def test_vk_sec25():
    for name in ("sec25_a", "sec25_b"):
        assert _vk(name)["verdict"] == "agree"


def test_vk_hypothesis_monotone():
    A, opts = corpus("ex_pi_b")
    e = opts.orientation["e"]
    rels = minimal_relations(A)
    cset = set(e)
    touching = [r for r in rels if any(A.quiver.arrow[a].src in cset and A.quiver.arrow[a].tgt in cset
                                       for w in r.paths for a in w)]
    kept = [r for r in rels if r not in touching]
    assert not vk_hypothesis(A, e, rels)[0]
    for k in range(len(kept) + 1):
        for sub in itertools.combinations(kept, k):
            assert vk_hypothesis(A, e, list(sub))[0]


def test_h1_schurian():
    assert h1_schurian(corpus("tournicoti_b")[0]) == 1
    assert h1_schurian(corpus("sec25_a")[0]) == 4 == hochschild_dims(corpus("sec25_a")[0], N=1)[1]
    A, _ = load_algebra(doc(["1", "2"], [("a", "1", "2")]))
    assert h1_schurian(A) == 0
    with pytest.raises(ValidationError, match="not schurian"):
        h1_schurian(corpus("sec25_b")[0])
