"""Composite Gauss-Legendre rules with geometric grading at endpoint singularities."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["gl_rule", "panels", "graded_edges", "line_nodes"]


@lru_cache(maxsize=8)
def _gl(order: int):
    return np.polynomial.legendre.leggauss(order)


def gl_rule(lo: float, hi: float, order: int = 20) -> tuple[np.ndarray, np.ndarray]:
    t, w = _gl(order)
    half = 0.5 * (hi - lo)
    return lo + half * (t + 1.0), half * w


def panels(edges, order: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a composite rule over consecutive ``edges``."""
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            x, w = gl_rule(lo, hi, order)
            xs.append(x)
            ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def graded_edges(start: float, stop: float, ratio: float = 0.15, depth: float = 1e-24,
                 toward: str = "start") -> np.ndarray:
    """Edges between ``start`` and ``stop`` refined geometrically towards one end."""
    length = stop - start
    k = int(np.ceil(np.log(depth) / np.log(ratio)))
    offsets = length * ratio ** np.arange(k, -1, -1)
    if toward == "start":
        return np.concatenate([[start], start + offsets])
    return np.concatenate([stop - offsets[::-1], [stop]])


def line_nodes(lo: float, hi: float, singular_points=(), width: float = 0.5, grade: float = 1.0,
               order: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule on ``[lo, hi]``.

    Panels have at most ``width``; within ``grade`` of each singular point the
    mesh is graded geometrically so integrable ``log`` and power
    singularities converge exponentially.
    """
    sing = sorted(s for s in singular_points if lo <= s <= hi)
    cuts = sorted({lo, hi, *sing, *(s - grade for s in sing if s - grade > lo), *(s + grade for s in sing if s + grade < hi)})
    edges: list[float] = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        left_sing = a in sing
        right_sing = b in sing
        if left_sing and not right_sing:
            seg = graded_edges(a, b)
        elif right_sing and not left_sing:
            seg = graded_edges(a, b, toward="stop")
        elif left_sing and right_sing:
            mid = 0.5 * (a + b)
            seg = np.concatenate([graded_edges(a, mid), graded_edges(mid, b, toward="stop")[1:]])
        else:
            n = max(1, int(np.ceil((b - a) / width)))
            seg = np.linspace(a, b, n + 1)
        if edges:
            seg = seg[1:]
        edges.extend(seg.tolist())
    return panels(np.asarray(edges), order)
