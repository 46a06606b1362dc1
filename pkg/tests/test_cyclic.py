import pytest

from helpers import connes_lambda_dims, corpus
from quivhom import Blocks, connes_check, connes_mv_grid, corpus_names, cyclic_dims, load_algebra, mv_cyclic
from quivhom.cyclic import CyclicSpaces, cyclic_chain_count
from quivhom.oriented import witness_from_options


def doc(vertices, arrows, relations=()):
    return {"vertices": vertices, "arrows": [{"name": n, "src": s, "tgt": t} for n, s, t in arrows],
            "relations": [[{"coeff": c, "path": w} for w, c in r] for r in relations]}


DUAL_NUMBERS = doc(["1"], [("x", "1", "1")], [[(["x", "x"], "1")]])
A2_LINEAR = doc(["1", "2"], [("a", "1", "2")])


def test_point_staircase():
    A = corpus("point")[0]
    assert cyclic_dims(A, 4) == [1, 0, 1, 0, 1]
    assert connes_lambda_dims(A, 4) == [1, 0, 1, 0, 1]


@pytest.mark.parametrize("source", ["tournicoti_a", DUAL_NUMBERS, A2_LINEAR])
def test_against_connes_lambda_oracle(source):
    A = corpus(source)[0] if isinstance(source, str) else load_algebra(source)[0]
    assert cyclic_dims(A, 3) == connes_lambda_dims(A, 3)


@pytest.mark.parametrize("name,expected", [
    ("tournicoti_a", [2, 1, 2, 1, 2]),
    ("tournicoti_b", [4, 0, 4, 1, 4]),
    ("sec25_a", [6, 0, 6, 0, 6]),
    ("ex_pi_b", [4, 0, 4, 0, 4]),
])
def test_corpus_values(name, expected):
    assert cyclic_dims(corpus(name)[0], 4) == expected


@pytest.mark.parametrize("name", ["tournicoti_a", "sec25_b"])
def test_cohomology_dims_match_homology(name):
    A = corpus(name)[0]
    assert cyclic_dims(A, 3, "cohomology") == cyclic_dims(A, 3)


@pytest.mark.parametrize("name", ["tournicoti_a", "tournicoti_b"])
def test_absolute_vs_relative(name):
    A = corpus(name)[0]
    assert cyclic_dims(A, 3, blocks=Blocks.absolute(A)) == cyclic_dims(A, 3)


@pytest.mark.parametrize("name", ["tournicoti_b", "sec25_a", "ex_pi_b"])
def test_quotient_dims_and_identities(name):
    A = corpus(name)[0]
    sp = CyclicSpaces(A)
    sp.check_identities(4)
    for n in range(5):
        assert sp.dim(n) == cyclic_chain_count(A, sp.blocks, n)


@pytest.mark.parametrize("name", corpus_names())
@pytest.mark.parametrize("variant", ["homology", "cohomology"])
def test_connes_sequence(name, variant):
    res = connes_check(corpus(name)[0], 3, variant=variant)
    assert res["ok"], res["checks"]


@pytest.mark.parametrize("name", ["sec25_a", "sec25_b"])
@pytest.mark.parametrize("variant", ["homology", "cohomology"])
def test_mv_cyclic(name, variant):
    A, opts = corpus(name)
    rep = mv_cyclic(A, witness_from_options(A, opts.orientation), 3, variant)
    assert rep.exact


def test_mv_cyclic_witness_blocks():
    A, opts = corpus("sec25_b")
    assert mv_cyclic(A, witness_from_options(A, opts.orientation), 2, blocks="witness").exact


@pytest.mark.parametrize("name", ["sec25_a", "sec25_b"])
@pytest.mark.parametrize("variant", ["homology", "cohomology"])
def test_grid(name, variant):
    A, opts = corpus(name)
    res = connes_mv_grid(A, witness_from_options(A, opts.orientation), 3, variant)
    assert res["ok"]
