import pytest

from helpers import corpus, oriented_tree_core
from quivhom import (
    ValidationError, find_orientations, gerstenhaber_compat_check, hochart_check, load_algebra, mv_hochschild,
    verify_orientation,
)
from quivhom.oriented import center_basis, is_core, tensor_corner_check, witness_from_options


def witness(corpus_pair, require_full=True):
    A, opts = corpus_pair
    return witness_from_options(A, opts.orientation, require_full)


@pytest.fixture
def pair():
    return corpus


def test_declared_witnesses(pair):
    w = witness(pair("sec25_a"))
    assert 3 in w.satisfied and w.kind == "full"
    w = witness(pair("sec25_b"))
    assert w.satisfied == (5,)
    w = witness(pair("tournicoti_b"), require_full=False)
    assert w.kind == "glued"


def test_glued_only_rejected_when_full_required(pair):
    with pytest.raises(ValidationError, match="witness satisfies only condition \\(2\\)"):
        witness(pair("tournicoti_b"))


def test_condition_two_failure(pair):
    # the partition declared for the Van Kampen example joins e'_2 to e'_1 by nonzero paths
    with pytest.raises(ValidationError, match="condition \\(2\\) fails"):
        witness(pair("ex_pi_a"), require_full=False)


def test_partition_errors(load):
    A = load("sec25_a")
    with pytest.raises(ValidationError, match="disjoint and cover"):
        verify_orientation(A, ["5"], ["1", "2", "3"], ["6"])
    with pytest.raises(ValidationError, match="disjoint and cover"):
        verify_orientation(A, ["5", "1"], ["1", "2", "3", "4"], ["6"])
    with pytest.raises(ValidationError, match="unknown vertex"):
        verify_orientation(A, ["9"], [], [])


@pytest.mark.parametrize("name,count", [("sec25_a", 5), ("sec25_b", 2), ("tournicoti_a", 0),
                                        ("tournicoti_b", 0), ("point", 0), ("ex_pi_b", 2)])
def test_nontrivial_full_witness_counts(load, name, count):
    ws = find_orientations(load(name), nontrivial=True)
    assert len(ws) == count
    for w in ws:
        assert w.condition in (3, 4, 5) and w.e1p and w.e and w.e2p


def test_search_includes_glued(load):
    ws = find_orientations(load("tournicoti_b"), include_glued=True, nontrivial=True)
    assert any(w.kind == "glued" for w in ws)


@pytest.mark.parametrize("name", ["sec25_a", "sec25_b"])
@pytest.mark.parametrize("variant", ["cohomology", "homology"])
@pytest.mark.parametrize("coefficients", ["self", "dual"])
def test_mv_exact(pair, name, variant, coefficients):
    A, _ = pair(name)
    rep = mv_hochschild(A, witness(pair(name)), coefficients, 3, variant)
    assert rep.exact, rep.les.sequence_str()


def test_mv_dims_sec25(pair):
    A, _ = pair("sec25_a")
    rep = mv_hochschild(A, witness(pair("sec25_a")), N=3)
    assert rep.dims == {"R": [1, 4, 0, 0], "A1": [1, 2, 0, 0], "A2": [1, 2, 0, 0], "C": [1, 0, 0, 0]}
    A, _ = pair("sec25_b")
    rep = mv_hochschild(A, witness(pair("sec25_b")), N=3)
    assert rep.dims["R"] == [3, 2, 2, 2]


def test_mv_witness_blocks(pair):
    A, _ = pair("sec25_b")
    rep = mv_hochschild(A, witness(pair("sec25_b")), N=2, blocks="witness")
    assert rep.exact


def test_mv_every_found_witness(load):
    A = load("sec25_a")
    for w in find_orientations(A, nontrivial=True):
        assert mv_hochschild(A, w, N=2).exact


def test_mv_rejects_glued(pair):
    A, _ = pair("tournicoti_b")
    with pytest.raises(ValidationError, match="only condition \\(2\\)"):
        mv_hochschild(A, witness(pair("tournicoti_b"), require_full=False))


def test_center(load):
    assert len(center_basis(load("sec25_a"))[0]) == 1
    assert len(center_basis(load("sec25_b"))[0]) == 3


def test_core_detection(load):
    assert is_core(load("point"))["core"]
    assert not is_core(load("tournicoti_a"))["core"]


@pytest.mark.parametrize("name", ["sec25_a", "sec25_b"])
def test_hochart_on_corpus(pair, name):
    A, _ = pair(name)
    assert hochart_check(A, witness(pair(name)), 4)["ok"]


@pytest.mark.parametrize("seed", range(6))
def test_hochart_random(seed):
    cond = 3 + seed % 3
    doc, (P, C, S) = oriented_tree_core(seed, cond)
    A, _ = load_algebra(doc, "rand%d" % seed)
    w = verify_orientation(A, P, C, S)
    assert cond in w.satisfied
    assert hochart_check(A, w, 4)["ok"]


@pytest.mark.parametrize("name", ["sec25_a", "sec25_b"])
def test_gerstenhaber_compat(pair, name):
    A, _ = pair(name)
    res = gerstenhaber_compat_check(A, witness(pair(name)), samples=20, N=3, seed=7)
    assert res["ok"], res["failures"]


def test_gerstenhaber_needs_corners(load):
    with pytest.raises(ValidationError):
        gerstenhaber_compat_check(load("point"))


@pytest.mark.parametrize("name", ["sec25_a", "sec25_b", "ex_pi_b"])
def test_tensor_corners(load, name):
    A = load(name)
    for w in find_orientations(A, nontrivial=True):
        assert tensor_corner_check(A, w, 3)["ok"]
