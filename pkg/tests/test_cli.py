import pytest

from khcob import corpus
from khcob.cli import BUDGET, MISMATCH, OK, PARSE, main

ROOT = corpus.CORPUS_DIR


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_kh_trefoil(capsys):
    code, out, _ = run(capsys, "kh", ROOT / "trefoil" / "knot.braid")
    assert code == OK
    assert out.splitlines()


def test_kh_euler_matches(capsys):
    code, out, _ = run(capsys, "kh", ROOT / "unknot" / "knot.diagram", "--euler")
    assert code == OK and out.rstrip().endswith("MATCH")


def test_kh_grading_window(capsys):
    code, out, _ = run(capsys, "kh", ROOT / "trefoil" / "knot.braid", "--grading", "0,1")
    assert code == OK and "(0,3)" not in out


def test_kh_budget(capsys):
    code, _, err = run(capsys, "kh", ROOT / "m9_46" / "knot.diagram", "--budget", "3")
    assert code == BUDGET and "budget" in err


def test_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.diagram"
    bad.write_text("crossings 1\nX 1 2\n")
    code, _, err = run(capsys, "kh", bad)
    assert code == PARSE and "parse error" in err
    code, _, err = run(capsys, "kh", tmp_path / "absent.diagram")
    assert code == PARSE


def test_apply_value(capsys):
    code, out, _ = run(capsys, "apply", ROOT / "m9_46" / "B.movie", "corpus:phi")
    assert code == OK and out.strip() == "0"


def test_apply_trace(capsys):
    code, out, _ = run(capsys, "apply", ROOT / "m9_46" / "A.movie", "corpus:m9_46/phi", "--trace")
    assert code == OK and out.startswith("-- 0: start")
    assert out.splitlines()[-1] in ("1", "-1")


def test_apply_missing_chain_key(capsys):
    code, _, err = run(capsys, "apply", ROOT / "m9_46" / "A.movie", "corpus:nope")
    assert code == PARSE and "nope" in err


def test_apply_unknown_corpus_entry(capsys):
    code, _, err = run(capsys, "apply", ROOT / "m9_46" / "A.movie", "corpus:nowhere/phi")
    assert code == PARSE and "nowhere" in err


def test_band_eval_and_compat(capsys):
    left = ROOT / "10_148" / "left.bands"
    code, out, _ = run(capsys, "band", left, "--eval", "corpus:phi", "--compat", "corpus:phi")
    assert code == OK
    lines = out.splitlines()
    assert lines[0].startswith("chi -1")
    assert lines[1].endswith(" compatible")
    assert lines[-1] in ("1", "-1")


def test_band_script_kills_phi(capsys):
    right = ROOT / "10_148" / "right.bands"
    code, out, _ = run(capsys, "band", right, "--script", ROOT / "10_148" / "rewrite.script",
                       "--letter", "3", "--eval", "corpus:phi")
    assert code == OK
    assert "letter 3 -> crossing 3" in out and out.splitlines()[-1] == "0"


def test_distinguish(capsys):
    e = ROOT / "m9_46"
    code, out, _ = run(capsys, "distinguish", e / "knot.diagram", e / "A.movie", e / "B.movie")
    assert code == OK and out.startswith("certificate")


def test_distinguish_budget(capsys):
    e = ROOT / "m9_46"
    code, out, _ = run(capsys, "distinguish", e / "knot.diagram", e / "A.movie", e / "A.movie",
                       "--budget", "2")
    assert code == BUDGET and "none within budget" in out


def test_corpus_list_and_verify(capsys):
    code, out, _ = run(capsys, "corpus", "list")
    assert code == OK and "J" in out and "unavailable" in out
    code, out, _ = run(capsys, "corpus", "verify", "unknot", "trefoil", "J")
    assert code == OK
    assert out.splitlines()[-1] == "5 checks, 0 mismatched, 1 unavailable"


def test_corpus_verify_mismatch(capsys, monkeypatch):
    real = corpus.verify_entry

    def flip(entry):
        rs = real(entry)
        rs[0].ok = False
        return rs

    monkeypatch.setattr(corpus, "verify_entry", flip)
    code, _, _ = run(capsys, "corpus", "verify", "unknot")
    assert code == MISMATCH


def test_bands(capsys):
    code, out, _ = run(capsys, "bands", ROOT / "m9_46" / "knot.diagram")
    assert code == OK and "1 5" in out.splitlines()


def test_report_writes_images(capsys, tmp_path):
    e = ROOT / "m9_46"
    code, out, _ = run(capsys, "report", e / "knot.diagram", "--movie", e / "A.movie",
                       "--chain", "corpus:phi", "--out", tmp_path)
    assert code == OK
    paths = out.split()
    assert len(paths) == 2
    for p in paths:
        with open(p, "rb") as fh:
            assert fh.read(8) == b"\x89PNG\r\n\x1a\n"
