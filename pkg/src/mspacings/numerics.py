"""Small deterministic numeric helpers (quadrature, cumulative sums)."""

from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = ["composite_simpson", "cumulative_trapezoid"]


def composite_simpson(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, panels: int = 4096) -> float:
    """Composite Simpson rule for a vectorized integrand on [a, b]."""
    if b <= a:
        return 0.0
    if panels % 2:
        panels += 1
    x = np.linspace(a, b, panels + 1)
    y = np.asarray(f(x), dtype=float)
    h = (b - a) / panels
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum()))


def cumulative_trapezoid(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Cumulative trapezoid integral of samples y over abscissae x, starting at 0."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    steps = 0.5 * (y[1:] + y[:-1]) * np.diff(x)
    out = np.empty_like(y)
    out[0] = 0.0
    np.cumsum(steps, out=out[1:])
    return out
