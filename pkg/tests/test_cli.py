import json
import subprocess
import sys

import pytest

from quivhom import corpus_doc
from quivhom.cli import BEGIN, END, Report, main, parse_report


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hh_table(capsys):
    code, out, _ = run(capsys, "hh", "sec25_a", "--degree", "3")
    assert code == 0
    assert "dims     1 4 0 0" in out
    rep = parse_report(out)
    assert rep["schema"] == "v1" and rep["command"] == "hh"
    assert rep["sections"]["hh"]["dims"] == [1, 4, 0, 0]


def test_hh_point_and_nonvanishing(capsys):
    assert parse_report(run(capsys, "hh", "point", "-N", "2")[1])["sections"]["hh"]["dims"] == [1, 0, 0]
    dims = parse_report(run(capsys, "hh", "tournicoti_a", "-N", "4")[1])["sections"]["hh"]["dims"]
    assert all(d > 0 for d in dims)


def test_hh_dual_and_homology(capsys):
    a = parse_report(run(capsys, "hh", "sec25_b", "--coefficients", "dual")[1])["sections"]["hh"]["dims"]
    b = parse_report(run(capsys, "hh", "sec25_b", "--variant", "homology")[1])["sections"]["hh"]["dims"]
    assert a == b


def test_mv_hh_exact(capsys):
    code, out, _ = run(capsys, "mv", "sec25_a", "--theory", "hh")
    assert code == 0 and "exact: yes" in out
    rep = parse_report(out)["sections"]["mv"]
    assert rep["dims"]["R"] == [1, 4, 0, 0] and rep["exact"]


def test_mv_glued_witness(capsys):
    code, _, err = run(capsys, "mv", "tournicoti_b", "--theory", "hh")
    assert code == 2 and "witness satisfies only condition (2)" in err
    code, _, err = run(capsys, "mv", "tournicoti_b", "--theory", "hc")
    assert code == 2 and "witness satisfies only condition (2)" in err
    code, out, _ = run(capsys, "mv", "tournicoti_b", "--theory", "sh")
    assert code == 0 and parse_report(out)["sections"]["mv"]["ok"]


def test_mv_auto_orient(capsys):
    code, out, _ = run(capsys, "mv", "sec25_b", "--theory", "hc", "--auto-orient", "-N", "2")
    assert code == 0 and parse_report(out)["sections"]["mv"]["exact"]
    code, _, err = run(capsys, "mv", "tournicoti_a", "--theory", "hh", "--auto-orient")
    assert code == 2 and "no valid witness" in err


def test_mv_without_orientation(capsys):
    code, _, err = run(capsys, "mv", "point", "--theory", "sh")
    assert code == 2 and "orientation" in err


def test_pi1_corner(capsys):
    code, out, _ = run(capsys, "pi1", "ex_pi_b", "--part", "C")
    assert code == 0 and "group: Z (abelianized)" in out
    comp = parse_report(out)["sections"]["pi1"]["components"][0]
    assert comp["abelianization_str"] == "Z"


def test_pi1_vk_and_h1(capsys):
    code, out, _ = run(capsys, "pi1", "tournicoti_b", "--vk", "--h1")
    rep = parse_report(out)["sections"]
    assert code == 0 and rep["h1"]["dim"] == 1 and rep["vk"]["verdict"] == "agree"
    code, out, _ = run(capsys, "pi1", "ex_pi_b", "--vk")
    assert code == 0 and parse_report(out)["sections"]["vk"]["verdict"] == "inapplicable"


def test_orient(capsys):
    code, out, _ = run(capsys, "orient", "tournicoti_a")
    assert code == 0 and "no full witness" in out
    code, out, _ = run(capsys, "orient", "ex_pi_a")
    assert "declared orientation rejected: condition (2) fails" in out


def test_hc_connes(capsys):
    code, out, _ = run(capsys, "hc", "point", "-N", "4", "--connes")
    assert code == 0
    rep = parse_report(out)["sections"]
    assert rep["hc"]["dims"] == [1, 0, 1, 0, 1]
    assert rep["connes"]["ok"] and rep["connes"]["checks"]["exact"]


def test_hc_grid(capsys):
    code, out, _ = run(capsys, "hc", "sec25_b", "-N", "2", "--grid")
    assert code == 0 and parse_report(out)["sections"]["grid"]["ok"]


def test_sh(capsys):
    code, out, _ = run(capsys, "sh", "sec25_a")
    assert code == 0 and "H_1 = Z^10" in out
    code, out, _ = run(capsys, "sh", "tournicoti_b", "--variant", "cohomology", "--G", "Z/2")
    assert code == 0


def test_document_from_file(tmp_path, capsys):
    f = tmp_path / "square.json"
    f.write_text(json.dumps(corpus_doc("sec25_b")))
    code, out, _ = run(capsys, "hh", str(f), "-N", "2")
    assert code == 0 and parse_report(out)["input"]["source"] == "square"
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "hh", str(bad))[0] == 2
    assert run(capsys, "hh", "no_such_document")[0] == 2


def test_dump_complex(tmp_path, capsys):
    f = tmp_path / "dump.txt"
    assert run(capsys, "hh", "tournicoti_a", "-N", "2", "--dump-complex", str(f))[0] == 0
    text = f.read_text()
    assert text.startswith("# complex") and "degree 0 dim 2" in text


def test_budget_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("QUIVHOM_BUDGET_MB", "0")
    code, _, err = run(capsys, "hh", "sec25_a")
    assert code == 3 and "budget" in err


def test_verdict_failure_exit_code(capsys, monkeypatch):
    import quivhom.oriented as oriented
    real = oriented.mv_hochschild

    def broken(*a, **k):
        rep = real(*a, **k)
        rep.extra["ok"] = False
        return rep
    monkeypatch.setattr(oriented, "mv_hochschild", broken)
    code, out, _ = run(capsys, "mv", "sec25_a", "--theory", "hh")
    assert code == 4 and parse_report(out)["verdict"] == "fail"


def test_determinism_and_roundtrip(capsys):
    a = run(capsys, "mv", "sec25_b", "--theory", "sh")[1]
    b = run(capsys, "mv", "sec25_b", "--theory", "sh")[1]
    assert a == b
    rep = parse_report(a)
    again = Report("x", "", "")
    again.data = rep
    assert parse_report(again.render()) == rep
    block = a[a.index(BEGIN) + len(BEGIN):a.index(END)]
    assert block.strip() == json.dumps(rep, sort_keys=True, indent=2, ensure_ascii=False)


def test_parse_report_missing_block():
    from quivhom import ValidationError
    with pytest.raises(ValidationError):
        parse_report("nothing here")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "quivhom", "corpus"], capture_output=True, text=True)
    assert out.returncode == 0 and "sec25_a" in out.stdout
