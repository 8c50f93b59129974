import json

import pytest

from khcob import corpus

AVAILABLE = [e.name for e in corpus.entries() if e.available]


def test_entries_listed():
    names = {e.name for e in corpus.entries()}
    assert {"unknot", "trefoil", "m9_46", "15n103488", "10_148", "J", "J_braided"} <= names


@pytest.mark.parametrize("name", AVAILABLE)
def test_entry_verifies(name):
    results = corpus.verify_entry(corpus.load(name))
    assert results
    bad = [r.line() for r in results if not r.ok]
    assert not bad, "\n".join(bad)


@pytest.mark.parametrize("name", ["J", "J_braided"])
def test_unavailable_entry_is_reported_not_run(name):
    (r,) = corpus.verify_entry(corpus.load(name))
    assert r.ok is None and "unavailable" in r.line()


def test_crash_counts_as_mismatch(tmp_path):
    (tmp_path / "broken").mkdir()
    manifest = {"diagram": "missing.diagram", "checks": [{"check": "euler"}]}
    (tmp_path / "broken" / "entry.json").write_text(json.dumps(manifest))
    (r,) = corpus.verify_entry(corpus.load("broken", tmp_path))
    assert r.ok is False and "FileNotFoundError" in r.detail


def test_unknown_entry():
    with pytest.raises(KeyError):
        corpus.load("no-such-knot")
