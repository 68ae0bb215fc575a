"""Hasse diagrams rendered to image files with matplotlib."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .algebra import AlgebraStructure  # noqa: E402
from .lattice import FiniteLattice  # noqa: E402


def hasse_layout(L: FiniteLattice) -> dict[int, tuple[float, float]]:
    """Elements on horizontal rows by rank; each row centred, ordered by
    the mean position of lower covers to cut down on crossings."""
    ranks = L.ranks
    rows: dict[int, list[int]] = {}
    for x, r in enumerate(ranks):
        rows.setdefault(r, []).append(x)
    below: dict[int, list[int]] = {x: [] for x in range(L.size)}
    for a, b in L.covers:
        below[b].append(a)
    pos: dict[int, tuple[float, float]] = {}
    for r in sorted(rows):
        row = rows[r]
        if r > 0:
            row.sort(key=lambda x: (sum(pos[a][0] for a in below[x]) / max(1, len(below[x])), x))
        width = len(row)
        for i, x in enumerate(row):
            pos[x] = (i - (width - 1) / 2.0, float(r))
    return pos


def draw_hasse(A: AlgebraStructure | FiniteLattice, path: str, title: str = "", dpi: int = 150) -> str:
    """Write the Hasse diagram of ``A`` to ``path``; the format follows the suffix."""
    L = A.lattice if isinstance(A, AlgebraStructure) else A
    # spread rows apart enough for the longest label
    gap = max(1.0, 0.12 * max(len(n) for n in L.names))
    pos = {x: (gap * px, py) for x, (px, py) in hasse_layout(L).items()}
    height = max(y for _, y in pos.values()) + 1
    width = max(abs(x) for x, _ in pos.values()) * 2 + gap
    fig, ax = plt.subplots(figsize=(max(3.0, 0.9 * width + 1.5), max(3.0, 0.9 * height)))
    for a, b in L.covers:
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax.plot([x0, x1], [y0, y1], color="0.35", lw=1.0, zorder=1)
    for x, (px, py) in pos.items():
        ax.scatter([px], [py], s=36, color="k", zorder=2)
        ax.annotate(L.names[x], (px, py), xytext=(6, 2), textcoords="offset points", fontsize=8)
    if title:
        ax.set_title(title, fontsize=10)
    ax.set_axis_off()
    ax.margins(0.2)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return path
