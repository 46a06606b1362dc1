import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from helpers import corpus
from quivhom import ValidationError, load_algebra, mv_simplicial, simplicial_cohomology, simplicial_homology
from quivhom.oriented import witness_from_options
from quivhom.simplicial import SimplicialComplex, parse_coefficients


def sympy_homology(A, N):
    """(rank, torsion) per degree from sympy Smith forms of the same boundary matrices."""
    S = SimplicialComplex(A, N)
    mats = {n: S.d(n) for n in range(1, N + 2)}

    def snf_diag(m):
        if m.nrows == 0 or m.ncols == 0:
            return []
        D = sympy_snf(sympy.Matrix(m.to_dense()), domain=sympy.ZZ)
        return [abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0]

    out = []
    for n in range(N + 1):
        out_rank = len(snf_diag(mats[n])) if n in mats else 0
        incoming = snf_diag(mats[n + 1])
        out.append((S.dim(n) - out_rank - len(incoming), sorted(d for d in incoming if d > 1)))
    return out


@pytest.mark.parametrize("name", ["point", "tournicoti_a", "tournicoti_b", "sec25_a", "ex_pi_b", "ex_fund"])
def test_homology_matches_sympy(name):
    A = corpus(name)[0]
    ours = [(r, sorted(t)) for r, t in simplicial_homology(A, 3)]
    assert ours == sympy_homology(A, 3)


def test_chain_dimensions():
    assert [SimplicialComplex(corpus("tournicoti_a")[0], 2).dim(n) for n in range(3)] == [2, 4, 0]
    assert [SimplicialComplex(corpus("sec25_a")[0], 2).dim(n) for n in range(3)] == [6, 15, 0]
    assert [SimplicialComplex(corpus("ex_fund")[0], 3).dim(n) for n in range(5)] == [8, 27, 18, 6, 0]


def test_point_and_stationary_paths():
    # stationary paths are 1-chains with zero boundary
    assert simplicial_homology(corpus("point")[0], 2) == [(1, []), (1, []), (0, [])]


@pytest.mark.parametrize("name", ["tournicoti_b", "sec25_a", "ex_pi_b"])
@pytest.mark.parametrize("G", ["Z", "Z/2", "Z/6", "k"])
def test_cohomology_routes_agree(name, G):
    for entry in simplicial_cohomology(corpus(name)[0], G, 3):
        assert entry["agree"], entry


@pytest.mark.parametrize("bad", ["Q", "Z/1", "Z/x"])
def test_bad_coefficients(bad):
    with pytest.raises(ValidationError):
        parse_coefficients(bad)


def test_not_semi_normed():
    d = {"vertices": ["1", "2", "3", "4", "5"],
         "arrows": [{"name": n, "src": s, "tgt": t} for n, s, t in
                    [("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4"), ("e", "1", "5"),
                     ("f", "5", "4")]],
         "relations": [[{"coeff": "1", "path": ["a", "b"]}, {"coeff": "-1", "path": ["c", "d"]},
                        {"coeff": "-1", "path": ["e", "f"]}]]}
    A, _ = load_algebra(d)
    with pytest.raises(ValidationError, match="semi-normed"):
        simplicial_homology(A, 2)


@pytest.mark.parametrize("name", ["tournicoti_b", "sec25_a", "sec25_b", "ex_pi_b"])
@pytest.mark.parametrize("variant,G", [("homology", "Z"), ("cohomology", "Z"), ("cohomology", "k")])
def test_mayer_vietoris(name, variant, G):
    A, opts = corpus(name)
    w = witness_from_options(A, opts.orientation, require_full=False)
    rep = mv_simplicial(A, w, 3, variant, G)
    assert rep.ok, rep.extra
    assert rep.extra["integral_ses"]["ok"]
    assert set(rep.extra["les_by_field"]) == {"QQ", "GF(2)", "GF(3)", "GF(5)"}


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.data())
def test_random_monomial_algebras(nv, data):
    vertices = [str(i) for i in range(nv)]
    arrows = []
    for k in range(data.draw(st.integers(1, 6))):
        s = data.draw(st.integers(0, nv - 2))
        t = data.draw(st.integers(s + 1, nv - 1))
        arrows.append({"name": "a%d" % k, "src": str(s), "tgt": str(t)})
    rels = [[{"coeff": "1", "path": [a["name"], b["name"]]}] for a in arrows for b in arrows
            if a["tgt"] == b["src"] and data.draw(st.booleans())]
    A, _ = load_algebra({"vertices": vertices, "arrows": arrows, "relations": rels})
    ours = [(r, sorted(t)) for r, t in simplicial_homology(A, 3)]
    assert ours == sympy_homology(A, 3)
    assert all(e["agree"] for e in simplicial_cohomology(A, "Z", 3))
