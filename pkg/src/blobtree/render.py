"""SVG drawings of blob-trees: blobs blue, tree-edges green, other MST edges black."""

from __future__ import annotations

from typing import Optional

from .geometry import PointSet
from .mst import RootedMst, build_mst
from .solver import BlobTreeSolution

SIZE = 800
MARGIN = 0.05
BLOB_COLOR = "#1f6feb"
TREE_COLOR = "#2da44e"
MST_COLOR = "#000000"


def _mapper(ps: PointSet):
    xy = ps.coords
    lo = xy.min(axis=0)
    span = float((xy.max(axis=0) - lo).max()) or 1.0
    scale = SIZE * (1 - 2 * MARGIN) / span
    off = SIZE * MARGIN

    def to_screen(i: int) -> tuple[str, str]:
        x, y = xy[i]
        sx = off + (x - lo[0]) * scale
        sy = SIZE - (off + (y - lo[1]) * scale)
        return f"{sx:.3f}", f"{sy:.3f}"

    return to_screen


def render_svg(ps: PointSet, sol: BlobTreeSolution, mst: Optional[RootedMst] = None) -> str:
    mst = mst or build_mst(ps)
    at = _mapper(ps)
    used = {tuple(sorted(e)) for e in sol.tree_edges}
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>',
        f'<g stroke="{MST_COLOR}" stroke-width="1" fill="none">',
    ]
    for u, p in sorted(mst.edges):
        if tuple(sorted((u, p))) in used:
            continue
        (x1, y1), (x2, y2) = at(u), at(p)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    out.append(f'<g stroke="{BLOB_COLOR}" stroke-width="3" fill="none">')
    for blob in sorted(sol.blobs, key=lambda b: b.canonical()):
        pts = " ".join(",".join(at(v)) for v in blob.canonical())
        out.append(f'<polygon points="{pts}"/>')
    out.append("</g>")
    out.append(f'<g stroke="{TREE_COLOR}" stroke-width="3" fill="none">')
    for i, j in sorted(used):
        (x1, y1), (x2, y2) = at(i), at(j)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    out.append('<g fill="#000000">')
    for i in range(len(ps)):
        x, y = at(i)
        out.append(f'<circle cx="{x}" cy="{y}" r="3"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
