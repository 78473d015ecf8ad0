"""Shared numerical utilities: quadrature nodes, 1-d search, interpolation, RNG streams."""

from __future__ import annotations

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.random import Generator, Philox
from scipy.interpolate import PchipInterpolator

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0

#: Fixed path-block width; keeps Monte Carlo reductions independent of worker count.
MC_BLOCK = 16384


class NoInteriorMax(RuntimeError):
    """Golden-section search terminated at a bracket endpoint."""


def gauss_hermite_normal(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights such that E[f(Z)] ~ sum w_i f(x_i) for Z ~ N(0, 1)."""
    x, w = hermgauss(order)
    return x * np.sqrt(2.0), w / np.sqrt(np.pi)


def golden_section_max(f, a: float, b: float, tol: float = 1e-10,
                       edge_tol: float | None = None) -> tuple[float, float]:
    """Maximize a unimodal scalar function on [a, b].

    Returns ``(x_max, f(x_max))``.  Raises :class:`NoInteriorMax` when the
    maximizer lands within ``edge_tol`` of either bracket endpoint, which
    signals that the objective is not unimodal-interior on the bracket.
    """
    if edge_tol is None:
        edge_tol = 10.0 * tol
    lo, hi = a, b
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    x = 0.5 * (lo + hi)
    if x - a < edge_tol or b - x < edge_tol:
        raise NoInteriorMax(f"maximizer {x} sits on the bracket edge [{a}, {b}]")
    return x, f(x)


class TailedInterpolant:
    """Monotone piecewise-cubic interpolant with a linear tail beyond the last node.

    Data are interpolated in a transformed space (caller supplies already
    transformed values); queries past ``x[-1]`` continue linearly with slope
    ``tail_slope``, which callers set to the known asymptotic slope.  Queries
    below ``x[0]`` are a hard error (the grid always starts at the domain edge).
    """

    def __init__(self, x: np.ndarray, y: np.ndarray, tail_slope: np.ndarray | float):
        self._x_max = x[-1]
        self._pchip = PchipInterpolator(x, y, axis=-1, extrapolate=False)
        self._tail_slope = tail_slope

    def __call__(self, xq: np.ndarray) -> np.ndarray:
        xq = np.asarray(xq, dtype=float)
        out = self._pchip(np.minimum(xq, self._x_max))
        excess = np.where(xq > self._x_max, xq - self._x_max, 0.0)
        slope = np.asarray(self._tail_slope)
        if slope.ndim:  # per-row slopes broadcast over the trailing query axis
            slope = slope.reshape(slope.shape + (1,) * xq.ndim)
        return out + slope * excess


def block_rng(seed: int, block_index: int) -> Generator:
    """Counter-based stream for one path block; independent across indices."""
    return Generator(Philox(key=[np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
                                 np.uint64(block_index)]))


def block_bounds(n_paths: int, block: int = MC_BLOCK) -> list[tuple[int, int, int]]:
    """(block_index, start, stop) triples covering ``n_paths`` in fixed-width blocks."""
    out = []
    start = 0
    idx = 0
    while start < n_paths:
        stop = min(start + block, n_paths)
        out.append((idx, start, stop))
        start = stop
        idx += 1
    return out


def simpson_weights(n_intervals: int, h: float) -> np.ndarray:
    """Composite Simpson weights on a uniform grid with an even interval count."""
    if n_intervals % 2 != 0:
        raise ValueError("composite Simpson needs an even number of intervals")
    w = np.ones(n_intervals + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)
