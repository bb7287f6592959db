"""Legendre polynomial evaluation and least-squares series projection.

Target functions here are even characteristics re-expressed on [0, 1], so
only even-order polynomials P_0, P_2, P_4, ... carry nonzero projections;
a series stores one coefficient per even order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import math

import numpy as np

from .numerics import gauss_legendre

__all__ = [
    "LegendreSeries",
    "eval_legendre",
    "project",
    "eval_series",
    "integrated_squared_error",
]

# Slack on the |x| <= 1 domain so quadrature nodes mapped to the endpoints pass.
DOMAIN_SLACK = 1e-12


def eval_legendre(order: int, x):
    """Evaluate the Legendre polynomial P_order at x (scalar or array).

    Uses the three-term Bonnet recurrence; exact for orders 0 and 1.
    Arguments must satisfy |x| <= 1 up to a small slack.
    """
    if order < 0:
        raise ValueError(f"polynomial order must be non-negative, got {order}")
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0 + DOMAIN_SLACK):
        raise ValueError("argument outside [-1, 1]")
    if order == 0:
        result = np.ones_like(arr)
    elif order == 1:
        result = arr.copy()
    else:
        p_prev = np.ones_like(arr)
        result = arr.copy()
        for k in range(2, order + 1):
            p_prev, result = result, ((2 * k - 1) * arr * result - (k - 1) * p_prev) / k
    return float(result) if np.isscalar(x) or arr.ndim == 0 else result


@dataclass(frozen=True)
class LegendreSeries:
    """Coefficients over even-order Legendre polynomials.

    ``coeffs[n]`` multiplies P_{2n}(x / domain_max).  The abscissa bound
    ``domain_max`` is carried explicitly even though it is 1 for the Legendre
    basis, so the frequency transform stays visible in the data.
    """

    coeffs: tuple[float, ...]
    domain_max: float = 1.0

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("series needs at least one coefficient")
        if not all(math.isfinite(c) for c in coeffs):
            raise ValueError("series coefficients must be finite")
        if not (self.domain_max > 0 and math.isfinite(self.domain_max)):
            raise ValueError(f"domain_max must be positive, got {self.domain_max}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "domain_max", float(self.domain_max))

    def __len__(self) -> int:
        return len(self.coeffs)


def _sample(fn: Callable[[float], float], points: np.ndarray) -> np.ndarray:
    """Evaluate a target function on quadrature points, vectorized if it can be."""
    try:
        values = np.asarray(fn(points), dtype=float)
        if values.shape != points.shape:
            raise TypeError
    except (TypeError, ValueError):
        values = np.array([float(fn(p)) for p in points])
    if not np.all(np.isfinite(values)):
        bad = points[~np.isfinite(values)][0]
        raise ValueError(f"target function returned a non-finite value at x={bad!r}")
    return values


def _panel_nodes(quad_order: int, breakpoints: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes/weights on [0, 1], split at interior breakpoints.

    Splitting keeps each panel's integrand smooth when the target has kinks
    (band-edge images), so the Gauss rule converges at full speed.
    """
    edges = [0.0]
    for b in sorted(set(float(b) for b in breakpoints)):
        if 0.0 < b < 1.0:
            edges.append(b)
    edges.append(1.0)
    rule = gauss_legendre(quad_order)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        xs, ws = rule.mapped(a, b)
        nodes.append(xs)
        weights.append(ws)
    return np.concatenate(nodes), np.concatenate(weights)


def _legendre_even_table(num_terms: int, x: np.ndarray) -> np.ndarray:
    """Rows P_0(x), P_2(x), ..., P_{2(num_terms-1)}(x)."""
    top = 2 * (num_terms - 1)
    table = np.empty((num_terms, x.size))
    p_prev = np.ones_like(x)
    table[0] = p_prev
    if top == 0:
        return table
    p = x.copy()
    for k in range(2, top + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
        if k % 2 == 0:
            table[k // 2] = p
    return table


def project(
    fn: Callable[[float], float],
    num_terms: int,
    quad_order: int | None = None,
    breakpoints: Sequence[float] = (),
) -> LegendreSeries:
    """Least-squares projection of ``fn`` onto even Legendre polynomials on [0, 1].

    Coefficient n is the ratio of Gauss-Legendre quadratures of fn*P_{2n} and
    P_{2n}^2 over [0, 1]; the denominator uses the same rule as the numerator
    (rather than the closed form 1/(4n+1)) so systematic node error cancels.

    Parameters
    ----------
    fn : callable
        Real-valued target on [0, 1]; may accept arrays.
    num_terms : int
        Number of even-order coefficients to compute.
    quad_order : int, optional
        Per-panel quadrature order; must be at least 4 * num_terms so the
        denominator integrals are exact.  Defaults to that bound (with a
        floor of 32).
    breakpoints : sequence of float, optional
        Interior points of [0, 1] where fn is not smooth; the integration is
        split there.
    """
    if num_terms < 1:
        raise ValueError(f"num_terms must be positive, got {num_terms}")
    minimum_order = 4 * num_terms
    if quad_order is None:
        quad_order = max(minimum_order, 32)
    elif quad_order < minimum_order:
        raise ValueError(
            f"quad_order {quad_order} is below the exactness bound {minimum_order} "
            f"for {num_terms} terms"
        )
    nodes, weights = _panel_nodes(quad_order, breakpoints)
    values = _sample(fn, nodes)
    table = _legendre_even_table(num_terms, nodes)
    numerators = table @ (weights * values)
    denominators = (table * table) @ weights
    return LegendreSeries(tuple(numerators / denominators))


def eval_series(series: LegendreSeries, x):
    """Evaluate the series at x in [0, domain_max] (scalar or array)."""
    arr = np.asarray(x, dtype=float)
    bound = series.domain_max
    if np.any(arr < -DOMAIN_SLACK * bound) or np.any(arr > bound * (1.0 + DOMAIN_SLACK)):
        raise ValueError(f"argument outside [0, {bound}]")
    t = np.clip(arr / bound, 0.0, 1.0)
    flat = np.atleast_1d(t).ravel()
    table = _legendre_even_table(len(series.coeffs), flat)
    total = np.asarray(series.coeffs) @ table
    if np.isscalar(x) or arr.ndim == 0:
        return float(total[0])
    return total.reshape(arr.shape)


def integrated_squared_error(
    fn: Callable[[float], float],
    series: LegendreSeries,
    quad_order: int | None = None,
    breakpoints: Sequence[float] = (),
) -> float:
    """Integral over [0, 1] of (fn - series)^2, by panel-split quadrature."""
    minimum_order = 4 * len(series.coeffs)
    if quad_order is None:
        quad_order = max(minimum_order, 32)
    elif quad_order < minimum_order:
        raise ValueError(
            f"quad_order {quad_order} is below the exactness bound {minimum_order}"
        )
    nodes, weights = _panel_nodes(quad_order, breakpoints)
    residual = _sample(fn, nodes) - eval_series(series, nodes)
    return float(np.dot(weights, residual * residual))
