"""Regenerate the bundled corpus under src/khcob/corpus.

Knot diagrams come from published PD tables (shifted to 1-based arcs).  The
bands and cycles were found with khcob.search and are recomputed here, so
rerunning this script reproduces the shipped files exactly.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

from khcob import planar
from khcob.braid import BandFactorization, BraidWord, closure, compile_braided_surface
from khcob.cobordism import emit_movie, evaluate_movie
from khcob.complex import Chain, format_chain
from khcob.diagram import Diagram, emit_diagram
from khcob.search import band_movie, cycles_at, target_of

OUT = Path(__file__).resolve().parents[1] / "src" / "khcob" / "corpus"

# 0-based PD codes as printed by the standard census tables
PD_9_46 = [(10, 17, 11, 0), (0, 9, 1, 10), (8, 1, 9, 2), (13, 3, 14, 2), (3, 13, 4, 12),
           (11, 5, 12, 4), (16, 5, 17, 6), (6, 15, 7, 16), (14, 7, 15, 8)]
PD_15N = [(3, 1, 4, 0), (1, 14, 2, 15), (13, 2, 14, 3), (19, 5, 20, 4), (26, 6, 27, 5),
          (6, 26, 7, 25), (7, 19, 8, 18), (17, 9, 18, 8), (9, 17, 10, 16), (15, 11, 16, 10),
          (24, 12, 25, 11), (12, 24, 13, 23), (20, 27, 21, 28), (28, 21, 29, 22), (22, 29, 23, 0)]

LEFT_10_148 = "strands 3\n[ -1 -1 ; 2 ; + ]\n[ 1 ; 2 ; + ]\n[ ; 2 ; + ]\n[ ; 2 ; + ]\n"
RIGHT_10_148 = "strands 3\n[ -1 -1 -1 ; 2 ; + ]\n[ ; 2 ; + ]\n[ ; 1 ; + ]\n[ -2 -2 -2 ; 1 ; + ]\n"
SCRIPT_10_148 = """\
# relation steps taking the right factorization's word to the left one
mixed 11
mixed 2
insert 6 2
mixed 4
mixed 7
cancel 6
cancel 7
cancel 6
cancel 5
"""
# the smoothing of the distinguishing cycle on the left closure, letter by letter
PHI_10_148_STATE = "0001110000"


def from_pd(pd) -> Diagram:
    return Diagram.from_pd([tuple(a + 1 for a in x) for x in pd])


def write(entry: str, files: dict[str, str], manifest: dict) -> None:
    root = OUT / entry
    root.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (root / name).write_text(text)
    (root / "entry.json").write_text(json.dumps(manifest, indent=2) + "\n")


def movie_file(m, header: str) -> str:
    body = emit_movie(m).split("end\n", 1)[1]
    return f"# {header}\ndiagram knot.diagram\n{body}"


def band_pair_entry(entry: str, d: Diagram, note: str, a: tuple[int, int], b: tuple[int, int]):
    ma, mb = band_movie(d, *a, depth=5), band_movie(d, *b, depth=5)
    for g in cycles_at(d, target_of(ma)):
        c = Chain(d, {g: 1})
        va, vb = evaluate_movie(ma, c).scalar(), evaluate_movie(mb, c).scalar()
        if abs(va) == 1 and vb == 0:
            break
    else:
        sys.exit(f"{entry}: no distinguishing cycle")
    files = {
        "knot.diagram": f"# {note}\n" + emit_diagram(d),
        "A.movie": movie_file(ma, f"ribbon disk: band between arcs {a[0]} and {a[1]}, then simplify"),
        "B.movie": movie_file(mb, f"ribbon disk: band between arcs {b[0]} and {b[1]}, then simplify"),
        "phi.chain": f"# single-generator cycle at bigrading {target_of(ma)}\n" + format_chain(c),
    }
    manifest = {
        "name": entry,
        "diagram": "knot.diagram",
        "movies": {"A": "A.movie", "B": "B.movie"},
        "chains": {"phi": "phi.chain"},
        "source": note,
        "checks": [
            {"check": "cycle", "chain": "phi"},
            {"check": "euler"},
            {"check": "value", "label": "A(phi) = +-1", "movie": "A", "chain": "phi", "abs": 1},
            {"check": "value", "label": "B(phi) = 0", "movie": "B", "chain": "phi", "value": 0},
            {"check": "distinguish", "movies": ["A", "B"]},
        ],
    }
    write(entry, files, manifest)
    print(entry, a, b, va, vb)


def main():
    write("unknot", {"knot.diagram": "# one-crossing unknot\ncrossings 1\n+ 1 1 2 2\n"}, {
        "name": "unknot", "diagram": "knot.diagram",
        "checks": [{"check": "euler"},
                   {"check": "homology", "ranks": {"(0,1)": 1, "(0,-1)": 1}}]})
    write("trefoil", {"knot.braid": "# right-handed trefoil as a 2-braid closure\nstrands 2\n1 1 1\n"}, {
        "name": "trefoil", "braid": "knot.braid",
        "checks": [{"check": "euler"},
                   {"check": "homology",
                    "ranks": {"(0,1)": 1, "(0,3)": 1, "(2,5)": 1, "(3,9)": 1}}]})

    band_pair_entry("m9_46", planar.mirror(from_pd(PD_9_46)),
                    "mirror of the census 9_46; slice with two ribbon disks", (1, 5), (1, 11))
    band_pair_entry("15n103488", from_pd(PD_15N),
                    "census 15n103488; slice with two ribbon disks", (12, 26), (3, 25))

    left = BandFactorization.parse(LEFT_10_148)
    d = closure(left.word())
    m = compile_braided_surface(left)
    state = int(PHI_10_148_STATE[::-1], 2)
    phi = None
    for g in cycles_at(d, target_of(m)):
        if g[0] == state and evaluate_movie(m, Chain(d, {g: 1})):
            phi = Chain(d, {g: 1})
            break
    value = evaluate_movie(m, phi).scalar()
    write("10_148", {
        "left.bands": "# quasipositive factorization compiled to a disk\n" + LEFT_10_148,
        "right.bands": "# a second factorization of a conjugate word\n" + RIGHT_10_148,
        "rewrite.script": SCRIPT_10_148,
        "knot.braid": "# closure of the left factorization's word\n" + left.word().text(),
        "phi.chain": "# cycle compatible with the left factorization\n" + format_chain(phi),
    }, {
        "name": "10_148", "braid": "knot.braid",
        "factorizations": {"left": "left.bands", "right": "right.bands"},
        "scripts": {"rewrite": "rewrite.script"},
        "chains": {"phi": "phi.chain"},
        "checks": [
            {"check": "cycle", "chain": "phi"},
            {"check": "euler"},
            {"check": "band_value", "label": "left(phi) = +-1", "factorization": "left",
             "chain": "phi", "abs": 1},
            {"check": "band_value", "label": "left(psi) = +-1", "factorization": "left",
             "chain": "psi", "abs": 1},
            {"check": "compatible", "factorization": "left", "chain": "phi", "value": True},
            {"check": "tracked_resolution", "label": "right resolution kills phi", "from": "right",
             "to": "left", "script": "rewrite", "letter": 3, "chain": "phi", "zero": True},
            {"check": "rewrite_psi", "label": "psi transported by rewrite", "from": "right",
             "script": "rewrite"},
        ],
    })
    print("10_148 value", value)

    reason = ("diagram, bands and cycles are only available as drawings; "
              "no machine-readable source exists to transcribe them from")
    write("J", {}, {"name": "J", "status": "unavailable", "reason": reason})
    write("J_braided", {}, {"name": "J_braided", "status": "unavailable", "reason": reason})


if __name__ == "__main__":
    main()
