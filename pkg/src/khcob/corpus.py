"""Bundled example data and its re-verification.

Each entry is a directory holding ``entry.json`` plus the text files it
names.  ``entry.json`` lists the files and a list of checks; ``verify``
recomputes every check from scratch.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .bracket import unnormalized_jones
from .braid import (BandFactorization, BraidWord, closure, compile_braided_surface, is_compatible,
                    parse_script, psi_chain, rewrite_movie, rewrite_tracked)
from .cobordism import Movie, evaluate_movie, parse_movie, resolve_crossing_event
from .complex import (Chain, classes_agree_up_to_sign, differential,
                      graded_euler_characteristic, homology, is_cycle, parse_chain)
from .diagram import Diagram, parse_diagram
from .search import distinguish

CORPUS_DIR = Path(__file__).parent / "corpus"


@dataclass
class CheckResult:
    entry: str
    check: str
    ok: bool | None  # None: not run (data unavailable)
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = {True: "ok", False: "MISMATCH", None: "unavailable"}[self.ok]
        tail = f"  {self.detail}" if self.detail else ""
        return f"{self.entry:<12} {self.check:<28} {status}{tail}"


@dataclass
class CorpusEntry:
    name: str
    root: Path
    manifest: dict = field(repr=False)

    @property
    def available(self) -> bool:
        return self.manifest.get("status", "available") == "available"

    @property
    def reason(self) -> str:
        return self.manifest.get("reason", "")

    def path(self, rel: str) -> Path:
        return self.root / rel

    @cached_property
    def diagram(self) -> Diagram:
        if "diagram" in self.manifest:
            return parse_diagram(self.path(self.manifest["diagram"]).read_text())
        if "braid" in self.manifest:
            return closure(BraidWord.parse(self.path(self.manifest["braid"]).read_text()))
        raise KeyError(f"{self.name} has no diagram")

    def movie(self, key: str) -> Movie:
        cache = self.__dict__.setdefault("_movies", {})
        if key not in cache:
            rel = self.manifest["movies"][key]
            cache[key] = parse_movie(self.path(rel).read_text(), self.path(rel).parent)
        return cache[key]

    def factorization(self, key: str) -> BandFactorization:
        return BandFactorization.parse(self.path(self.manifest["factorizations"][key]).read_text())

    def chain(self, key: str, d: Diagram | None = None) -> Chain:
        d = self.diagram if d is None else d
        return parse_chain(d, self.path(self.manifest["chains"][key]).read_text())

    def script(self, key: str):
        return parse_script(self.path(self.manifest["scripts"][key]).read_text())


def entries(root: Path = CORPUS_DIR) -> list[CorpusEntry]:
    out = []
    for p in sorted(root.iterdir()):
        if (p / "entry.json").is_file():
            out.append(CorpusEntry(p.name, p, json.loads((p / "entry.json").read_text())))
    return out


def load(name: str, root: Path = CORPUS_DIR) -> CorpusEntry:
    p = root / name
    if not (p / "entry.json").is_file():
        raise KeyError(f"no corpus entry {name!r}")
    return CorpusEntry(name, p, json.loads((p / "entry.json").read_text()))


def _matches(got: int, check: dict) -> bool:
    if "value" in check:
        return got == check["value"]
    return abs(got) == check["abs"]


def _bits(state: int, n: int) -> tuple[int, ...]:
    return tuple((state >> i) & 1 for i in range(n))


def _scalar(c: Chain) -> int:
    return c.scalar() if c else 0


def _run(entry: CorpusEntry, check: dict) -> tuple[bool, str]:
    kind = check["check"]
    if kind == "cycle":
        c = entry.chain(check["chain"])
        single = len(c) != 1 or is_cycle(entry.diagram, next(iter(c.terms)))
        return single and not differential(entry.diagram, c), f"{len(c)} term(s)"
    if kind == "euler":
        got = graded_euler_characteristic(entry.diagram)
        return got == unnormalized_jones(entry.diagram), "bracket oracle"
    if kind == "homology":
        g = homology(entry.diagram)
        want = {tuple(json.loads(f"[{k.strip('()')}]")): v for k, v in check["ranks"].items()}
        got = {(b.h, b.q): r for b, (r, _) in g.groups.items() if r}
        return got == want, " ".join(f"({h},{q}):{r}" for (h, q), r in sorted(got.items()))
    if kind == "value":
        m = entry.movie(check["movie"])
        v = _scalar(evaluate_movie(m, entry.chain(check["chain"], m.source)))
        return _matches(v, check), f"value {v}"
    if kind == "band_value":
        f = entry.factorization(check["factorization"])
        m = compile_braided_surface(f)
        c = psi_chain(f.word()) if check["chain"] == "psi" else entry.chain(check["chain"], m.source)
        v = _scalar(evaluate_movie(m, c))
        return _matches(v, check), f"value {v}"
    if kind == "compatible":
        f = entry.factorization(check["factorization"])
        c = entry.chain(check["chain"], closure(f.word()))
        verdicts = {is_compatible(_bits(s, len(f.word())), f) for s, _ in c.terms}
        return verdicts == {check["value"]}, f"compatible {sorted(verdicts)}"
    if kind == "tracked_resolution":
        src = entry.factorization(check["from"]).word()
        dst = entry.factorization(check["to"]).word()
        rw = rewrite_tracked(src, entry.script(check["script"]))
        if rw.result.letters != dst.letters:
            return False, "rewrite does not reach the target word"
        k = rw.tracking()[check["letter"]]
        d = closure(dst)
        c = entry.chain(check["chain"], d)
        out = evaluate_movie(resolve_crossing_event(d, k), c)
        return (not out) == check["zero"], \
            f"letter {check['letter']} -> crossing {k}, image {'zero' if not out else 'nonzero'}"
    if kind == "rewrite_psi":
        src = entry.factorization(check["from"]).word()
        rw = rewrite_tracked(src, entry.script(check["script"]))
        out = evaluate_movie(rewrite_movie(rw), psi_chain(rw.start))
        target = psi_chain(rw.result)
        ok = classes_agree_up_to_sign(target.diagram, out, target)
        return ok, f"{len(out)} term(s), agrees up to sign: {ok}"
    if kind == "distinguish":
        a, b = entry.movie(check["movies"][0]), entry.movie(check["movies"][1])
        cert = distinguish(entry.diagram, a, b)
        if cert is None:
            return False, "none found within budget"
        return cert.verify(), f"values {cert.value_a} and {cert.value_b}"
    raise ValueError(f"unknown check {kind!r}")


def verify_entry(entry: CorpusEntry) -> list[CheckResult]:
    if not entry.available:
        return [CheckResult(entry.name, "data", None, entry.reason)]
    out = []
    for check in entry.manifest.get("checks", []):
        label = check.get("label", check["check"])
        t = time.perf_counter()
        try:
            ok, detail = _run(entry, check)
        except Exception as err:  # a crash is a mismatch, reported with its message
            ok, detail = False, f"{type(err).__name__}: {err}"
        out.append(CheckResult(entry.name, label, ok, detail, time.perf_counter() - t))
    return out
