"""Command-line front end.

Exit codes: 0 success, 2 verification mismatch, 3 budget exhausted, 4 parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import corpus as corpus_mod
from .bracket import unnormalized_jones
from .braid import (BandFactorization, BraidWord, closure, compile_braided_surface, is_compatible,
                    parse_script, psi_chain, rewrite_tracked)
from .cobordism import evaluate_movie, parse_movie, resolve_crossing_event
from .complex import (Bigrading, BudgetExceeded, Chain, DEFAULT_BUDGET, format_chain, format_groups,
                      format_polynomial, graded_euler_characteristic, homology, parse_chain)
from .diagram import Diagram, DiagramError, parse_diagram
from .search import CandidateStream, distinguish, slice_bands, target_of

OK, MISMATCH, BUDGET, PARSE = 0, 2, 3, 4


class ParseFailure(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise ParseFailure(f"{path}: {err.strerror}") from None


def _parsed(path: str, fn):
    text = _read(path)
    try:
        return fn(text)
    except DiagramError as err:
        raise ParseFailure(f"{path}: {err}") from None


def load_diagram(path: str) -> Diagram:
    """A diagram file, or a braid word file (``.braid``) taken by its closure."""
    if path.endswith(".braid"):
        return closure(_parsed(path, BraidWord.parse))
    return _parsed(path, parse_diagram)


def load_movie(path: str):
    return _parsed(path, lambda t: parse_movie(t, Path(path).parent))


def load_chain(ref_text: str, d: Diagram, near: str | None = None) -> Chain:
    """A chain file, or ``corpus:KEY`` (entry next to ``near``) / ``corpus:ENTRY/KEY``."""
    if not ref_text.startswith("corpus:"):
        return _parsed(ref_text, lambda t: parse_chain(d, t))
    ref = ref_text[len("corpus:"):]
    if "/" in ref:
        name, key = ref.split("/", 1)
        try:
            entry = corpus_mod.load(name)
        except KeyError as err:
            raise ParseFailure(f"{ref_text}: {err.args[0]}") from None
    else:
        root = Path(near).parent if near else Path.cwd()
        try:
            manifest = json.loads((root / "entry.json").read_text())
        except OSError:
            raise ParseFailure(f"{ref_text}: no entry.json beside {near or 'the working directory'}") from None
        entry = corpus_mod.CorpusEntry(root.name, root, manifest)
        key = ref
    if key not in entry.manifest.get("chains", {}):
        raise ParseFailure(f"{ref_text}: entry {entry.name} has no chain {key!r}")
    return _parsed(str(entry.path(entry.manifest["chains"][key])), lambda t: parse_chain(d, t))


def _grading(text: str) -> Bigrading:
    try:
        h, q = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected h,q") from None
    return Bigrading(h, q)


def _print_chain(c: Chain) -> None:
    if not (c.diagram.n or c.diagram.loops):
        print(c.scalar())
    else:
        print(format_chain(c).rstrip("\n") or "0")


def cmd_kh(args) -> int:
    d = load_diagram(args.diagram)
    if args.euler:
        got, want = graded_euler_characteristic(d), unnormalized_jones(d)
        print(f"euler   {format_polynomial(got)}")
        print(f"bracket {format_polynomial(want)}")
        print("MATCH" if got == want else "MISMATCH")
        return OK if got == want else MISMATCH
    window = None
    if args.grading is not None:
        g = args.grading
        window = ((g.h, g.h), (g.q, g.q))
    groups = homology(d, window, budget=args.budget)
    print(format_groups(groups).rstrip("\n") or "0")
    return OK


def cmd_apply(args) -> int:
    m = load_movie(args.movie)
    c = load_chain(args.chain, m.source, args.movie)

    def trace(step, ev, cur):
        what = "start" if ev is None else ev.text()
        print(f"-- {step}: {what} ({cur.diagram.n} crossings, {len(cur)} terms)")
        print(format_chain(cur).rstrip("\n") or "0")

    out = evaluate_movie(m, c, trace=trace if args.trace else None)
    _print_chain(out)
    return OK


def cmd_band(args) -> int:
    f = _parsed(args.factorization, BandFactorization.parse)
    if args.script:
        rw = rewrite_tracked(f, _parsed(args.script, parse_script))
        letter = f.cores()[0] if args.letter is None else args.letter
        k = rw.tracking()[letter]
        if k is None:
            print(f"letter {letter} is cancelled by the rewrite")
            return MISMATCH
        d = closure(rw.result)
        m = resolve_crossing_event(d, k)
        print(f"word {rw.result}")
        print(f"letter {letter} -> crossing {k}")
    else:
        m = compile_braided_surface(f)
        d = m.source
    print(f"chi {m.chi} census " + " ".join(f"{k}:{v}" for k, v in sorted(m.census().items())))
    if args.compat:
        c = load_chain(args.compat, closure(f.word()), args.factorization)
        for (s, l), v in sorted(c.terms.items()):
            bits = tuple((s >> i) & 1 for i in range(len(f.word())))
            verdict = "compatible" if is_compatible(bits, f) else "incompatible"
            print(f"{''.join(map(str, bits))} {verdict}")
    if args.eval:
        c = psi_chain(f.word() if not args.script else rw.result) if args.eval == "psi" \
            else load_chain(args.eval, d, args.factorization)
        _print_chain(evaluate_movie(m, c))
    return OK


def cmd_distinguish(args) -> int:
    d = load_diagram(args.diagram)
    a, b = load_movie(args.movie_a), load_movie(args.movie_b)
    target = args.grading or target_of(a)
    stream = CandidateStream(d, target, args.budget)
    cert = distinguish(d, a, b, candidates=stream, jobs=args.jobs)
    if cert is None:
        print("none within budget")
        return BUDGET if stream.exhausted else OK
    print(cert.text(), end="")
    return OK if cert.verify() else MISMATCH


def _verify_one(name: str):
    return corpus_mod.verify_entry(corpus_mod.load(name))


def cmd_corpus(args) -> int:
    every = corpus_mod.entries()
    names = args.names or [e.name for e in every]
    if args.action == "list":
        for e in every:
            if e.name in names:
                print(f"{e.name:<12} {'available' if e.available else 'unavailable'}")
        return OK
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = [r for rs in pool.map(_verify_one, names) for r in rs]
    else:
        results = [r for n in names for r in _verify_one(n)]
    for r in results:
        print(r.line())
    bad = sum(r.ok is False for r in results)
    missing = sum(r.ok is None for r in results)
    print(f"{len(results)} checks, {bad} mismatched, {missing} unavailable")
    return MISMATCH if bad else OK


def cmd_bands(args) -> int:
    for p, q in slice_bands(load_diagram(args.diagram), args.depth):
        print(p, q)
    return OK


def cmd_report(args) -> int:
    from . import report

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    d = load_diagram(args.diagram)
    stem = Path(args.diagram).stem
    written = [report.homology_table(homology(d, budget=args.budget), out / f"{stem}_kh.png", stem)]
    if args.movie:
        m = load_movie(args.movie)
        c = load_chain(args.chain, m.source, args.movie) if args.chain else _induced_chain(m.source)
        written.append(report.movie_trace(m, c, out / f"{Path(args.movie).stem}_trace.png"))
    for p in written:
        print(p)
    return OK


def _induced_chain(d: Diagram) -> Chain:
    from .search import orientation_induced_generator

    return Chain.from_labeled(d, orientation_induced_generator(d))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="khcob", description="Khovanov homology and cobordism maps")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("kh", help="homology of a diagram")
    s.add_argument("diagram")
    s.add_argument("--euler", action="store_true", help="compare with the bracket oracle")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum crossings")
    s.add_argument("--grading", type=_grading, help="only this h,q")
    s.set_defaults(fn=cmd_kh)

    s = sub.add_parser("apply", help="evaluate a movie on a chain")
    s.add_argument("movie")
    s.add_argument("chain", help="chain file or corpus:KEY")
    s.add_argument("--trace", action="store_true")
    s.set_defaults(fn=cmd_apply)

    s = sub.add_parser("band", help="compile a band factorization")
    s.add_argument("factorization")
    s.add_argument("--eval", help="psi, a chain file, or corpus:KEY")
    s.add_argument("--compat", help="chain whose generators are checked for compatibility")
    s.add_argument("--script", help="rewrite script; evaluates the translated first resolution")
    s.add_argument("--letter", type=int, help="letter to track (default: first core)")
    s.set_defaults(fn=cmd_band)

    s = sub.add_parser("distinguish", help="search for a cycle the two movies treat differently")
    s.add_argument("diagram")
    s.add_argument("movie_a")
    s.add_argument("movie_b")
    s.add_argument("--budget", type=int, default=100000, help="candidates to examine")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--grading", type=_grading)
    s.set_defaults(fn=cmd_distinguish)

    s = sub.add_parser("corpus", help="list or re-verify the bundled examples")
    s.add_argument("action", choices=("list", "verify"))
    s.add_argument("names", nargs="*")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(fn=cmd_corpus)

    s = sub.add_parser("bands", help="bands giving ribbon disks the simplifier can finish")
    s.add_argument("diagram")
    s.add_argument("--depth", type=int, default=4)
    s.set_defaults(fn=cmd_bands)

    s = sub.add_parser("report", help="render figures to files")
    s.add_argument("diagram")
    s.add_argument("--movie")
    s.add_argument("--chain")
    s.add_argument("--out", default="report")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.set_defaults(fn=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseFailure as err:
        print(f"parse error: {err}", file=sys.stderr)
        return PARSE
    except BudgetExceeded as err:
        print(f"budget: {err}", file=sys.stderr)
        return BUDGET


if __name__ == "__main__":
    sys.exit(main())
