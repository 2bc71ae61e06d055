"""Deterministic numerical kernels used by the capacity solvers.

Three self-contained pieces: an adaptive Gauss-Legendre quadrature for
smooth integrands on a finite interval, a dense symmetric eigensolver
front end, and a coarse-to-fine grid maximizer.  All of them are pure
functions with fixed evaluation order, so repeated calls with identical
inputs give bit-identical results.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "QuadratureConfig",
    "EigenConfig",
    "IntegrationError",
    "integrate",
    "symmetric_eigen",
    "grid_maximize",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for :func:`integrate`.

    ``abs_tol`` is the absolute error target for the whole interval,
    ``max_subdivisions`` caps the number of panel splits, and
    ``rule_order`` is the number of Gauss-Legendre nodes per panel.
    """

    abs_tol: float = 1e-10
    max_subdivisions: int = 2**14
    rule_order: int = 16

    def __post_init__(self) -> None:
        if self.abs_tol <= 0:
            raise ValueError("abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")
        if self.rule_order < 2:
            raise ValueError("rule_order must be at least 2")


@dataclass(frozen=True)
class EigenConfig:
    """Validation tolerances for :func:`symmetric_eigen`.

    ``off_diag_tol`` bounds the accepted asymmetry of the input,
    relative to its largest entry (floored at 1).  ``max_sweeps`` is an
    iteration guard kept for interface stability; the LAPACK backend
    converges internally and does not consult it.
    """

    off_diag_tol: float = 1e-12
    max_sweeps: int = 64

    def __post_init__(self) -> None:
        if self.off_diag_tol <= 0:
            raise ValueError("off_diag_tol must be positive")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")


class IntegrationError(RuntimeError):
    """Raised when adaptive quadrature runs out of subdivisions.

    Carries the best available ``estimate`` of the integral and the
    accumulated ``error_bound`` at the point of failure.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


_gl_cache: dict[int, tuple[list[float], list[float]]] = {}


def _gl_rule(order: int) -> tuple[list[float], list[float]]:
    if order not in _gl_cache:
        nodes, weights = np.polynomial.legendre.leggauss(order)
        _gl_cache[order] = (nodes.tolist(), weights.tolist())
    return _gl_cache[order]


def _panel(f, lo: float, hi: float, nodes: list[float], weights: list[float]) -> float:
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    acc = 0.0
    for x, w in zip(nodes, weights):
        acc += w * f(mid + half * x)
    return half * acc


def _refine(f, lo: float, hi: float, whole: float, nodes, weights):
    """Bisect a segment: (error vs whole, bisected estimate, left, right)."""
    mid = 0.5 * (lo + hi)
    left = _panel(f, lo, mid, nodes, weights)
    right = _panel(f, mid, hi, nodes, weights)
    refined = left + right
    return abs(refined - whole), refined, left, right


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    config: QuadratureConfig | None = None,
) -> float:
    """Integrate ``f`` over ``[a, b]`` with globally adaptive Gauss-Legendre panels.

    Each segment carries the estimate from its bisection and the change
    the bisection produced as the local error.  Segments are refined
    worst-error-first (leftmost wins ties) until the summed error meets
    ``abs_tol``; the refinement order is fully deterministic.  Raises
    :class:`IntegrationError`, carrying the best estimate and its error
    bound, when ``max_subdivisions`` splits are not enough or a segment
    shrinks to the rounding limit while the target is still missed.
    """
    cfg = config or QuadratureConfig()
    a = float(a)
    b = float(b)
    if a == b:
        return 0.0
    if b < a:
        return -integrate(f, b, a, cfg)

    nodes, weights = _gl_rule(cfg.rule_order)
    whole = _panel(f, a, b, nodes, weights)
    err, est, left, right = _refine(f, a, b, whole, nodes, weights)
    # Worst-first queue; entries: (-error, lo, hi, estimate, left, right).
    segments = [(-err, a, b, est, left, right)]
    total_err = err
    splits = 0

    def _finalize() -> tuple[float, float]:
        ordered = sorted(segments, key=lambda seg: seg[1])
        return sum(seg[3] for seg in ordered), sum(-seg[0] for seg in ordered)

    while total_err > cfg.abs_tol:
        neg_err, lo, hi, est, left, right = heapq.heappop(segments)
        mid = 0.5 * (lo + hi)
        splits += 1
        if splits > cfg.max_subdivisions or mid <= lo or mid >= hi:
            heapq.heappush(segments, (neg_err, lo, hi, est, left, right))
            estimate, bound = _finalize()
            reason = (
                "a segment shrank to the rounding limit"
                if splits <= cfg.max_subdivisions
                else f"{cfg.max_subdivisions} subdivisions were not enough"
            )
            raise IntegrationError(
                f"quadrature missed abs_tol={cfg.abs_tol:g}: {reason} "
                f"(estimate {estimate:.12g}, bound {bound:.3g})",
                estimate=estimate,
                error_bound=bound,
            )
        total_err += neg_err  # remove this segment's error from the budget
        for c_lo, c_hi, c_whole in ((lo, mid, left), (mid, hi, right)):
            c_err, c_est, c_left, c_right = _refine(f, c_lo, c_hi, c_whole, nodes, weights)
            heapq.heappush(segments, (-c_err, c_lo, c_hi, c_est, c_left, c_right))
            total_err += c_err
    return _finalize()[0]


def symmetric_eigen(
    m: np.ndarray, config: EigenConfig | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors of a symmetric matrix.

    Eigenvectors are returned as columns, so ``m ~= V @ diag(w) @ V.T``.
    Backed by the LAPACK symmetric solver via ``numpy.linalg.eigh``.
    """
    cfg = config or EigenConfig()
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if float(np.max(np.abs(m - m.T))) > cfg.off_diag_tol * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    values, vectors = np.linalg.eigh(0.5 * (m + m.T))
    return values[::-1].copy(), vectors[:, ::-1].copy()


def grid_maximize(
    objective: Callable[..., float],
    box: Sequence[tuple[float, float]],
    resolution: int = 65,
    refinements: int = 2,
) -> tuple[tuple[float, ...], float]:
    """Maximize ``objective`` on a box by deterministic coarse-to-fine search.

    Every pass evaluates the full cartesian grid (``resolution`` points
    per axis); each refinement shrinks the box four-fold around the
    incumbent, clipped to the original bounds.  Ties go to the
    lexicographically smallest coordinates.  The objective is called as
    ``objective(x1, ..., xk)`` and must return finite values everywhere
    in the box.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if refinements < 0:
        raise ValueError("refinements must be non-negative")
    original = [(float(lo), float(hi)) for lo, hi in box]
    for lo, hi in original:
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("box bounds must be finite")
        if hi < lo:
            raise ValueError("box bounds must satisfy lo <= hi")

    current = list(original)
    best_point: tuple[float, ...] | None = None
    best_value = -math.inf
    for _ in range(refinements + 1):
        axes = [np.linspace(lo, hi, resolution).tolist() for lo, hi in current]
        for point in itertools.product(*axes):
            value = float(objective(*point))
            if not math.isfinite(value):
                raise ValueError(f"objective returned a non-finite value at {point}")
            if value > best_value or (value == best_value and point < best_point):
                best_value = value
                best_point = point
        shrunk = []
        for (olo, ohi), (lo, hi), x in zip(original, current, best_point):
            width = (hi - lo) / 4.0
            shrunk.append((max(olo, x - width / 2.0), min(ohi, x + width / 2.0)))
        current = shrunk
    return best_point, best_value
