"""Figures for a diagram's homology and a movie evaluation, written to files."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .cobordism import Movie, evaluate_movie  # noqa: E402
from .complex import Chain, GradedGroups  # noqa: E402


def homology_table(groups: GradedGroups, path: Path, title: str = "") -> Path:
    """Rank table: h across, q down, torsion marked with a star."""
    cells = groups.groups
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if cells:
        hs = sorted({g.h for g in cells})
        qs = sorted({g.q for g in cells})
        hs = list(range(hs[0], hs[-1] + 1))
        qs = list(range(qs[0], qs[-1] + 1))
        grid = [[0] * len(hs) for _ in qs]
        for g, (r, tors) in cells.items():
            grid[qs.index(g.q)][hs.index(g.h)] = r
            text = (str(r) if r else "") + ("*" * len(tors))
            ax.text(hs.index(g.h), qs.index(g.q), text, ha="center", va="center", fontsize=9)
        ax.imshow(grid, cmap="Blues", origin="lower", aspect="auto", vmin=0)
        ax.set_xticks(range(len(hs)), [str(h) for h in hs])
        ax.set_yticks(range(len(qs)), [str(q) for q in qs])
    ax.set_xlabel("h")
    ax.set_ylabel("q")
    ax.set_title(title or "Khovanov homology ranks")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def movie_trace(m: Movie, c: Chain, path: Path, title: str = "") -> Path:
    """Crossings and chain size after each event of ``m`` applied to ``c``."""
    steps, crossings, terms, kinds = [], [], [], []

    def record(step, ev, cur):
        steps.append(step)
        crossings.append(cur.diagram.n)
        terms.append(len(cur))
        kinds.append("start" if ev is None else ev.kind)

    out = evaluate_movie(m, c, trace=record)
    fig, (top, low) = plt.subplots(2, 1, sharex=True, figsize=(max(6, len(steps) * 0.25), 5))
    top.step(steps, crossings, where="post")
    top.set_ylabel("crossings")
    low.bar(steps, terms)
    low.set_ylabel("chain terms")
    low.set_xlabel("event")
    low.set_xticks(steps, kinds, rotation=90, fontsize=7)
    value = out.scalar() if not (out.diagram.n or out.diagram.loops) else None
    top.set_title(title or (f"movie evaluation, value {value}" if value is not None else "movie evaluation"))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
