"""Shared numerical kernels: Gauss-Legendre quadrature and polynomial roots."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["QuadratureRule", "gauss_legendre", "poly_roots"]

MAX_QUADRATURE_ORDER = 512

# Relative threshold below which leading coefficients are treated as noise.
TRIM_RTOL = 1e-12


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on the reference interval [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, values: np.ndarray) -> float:
        """Integrate from samples taken at ``nodes``."""
        return float(np.dot(self.weights, values))

    def mapped(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights transplanted to the interval [a, b]."""
        half = 0.5 * (b - a)
        return half * self.nodes + 0.5 * (a + b), half * self.weights


def _legendre_with_derivative(order: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate P_order and P'_order at the points x, |x| < 1."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, order + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = order * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


# Per-process memo of rules by order; dict access is atomic under CPython, so
# concurrent readers at worst recompute a rule.
_rule_cache: dict[int, QuadratureRule] = {}


def gauss_legendre(order: int) -> QuadratureRule:
    """Build the Gauss-Legendre rule of the given order.

    Nodes are the roots of the Legendre polynomial of that order, found by
    Newton iteration from Chebyshev-angle starting points; the weights are
    2 / ((1 - x^2) P'(x)^2).  The rule integrates polynomials up to degree
    2*order - 1 exactly.
    """
    if not 1 <= order <= MAX_QUADRATURE_ORDER:
        raise ValueError(f"quadrature order must be in [1, {MAX_QUADRATURE_ORDER}], got {order}")
    cached = _rule_cache.get(order)
    if cached is not None:
        return cached
    if order == 1:
        rule = QuadratureRule(np.array([0.0]), np.array([2.0]), 1)
        _rule_cache[order] = rule
        return rule

    k = np.arange(order)
    x = np.cos(np.pi * (k + 0.75) / (order + 0.5))
    for _ in range(100):
        p, dp = _legendre_with_derivative(order, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) < 1e-15:
            break
    else:
        raise RuntimeError(f"Gauss-Legendre Newton iteration failed to converge at order {order}")

    _, dp = _legendre_with_derivative(order, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    idx = np.argsort(x)
    nodes, weights = x[idx], w[idx]
    nodes.flags.writeable = False
    weights.flags.writeable = False
    rule = QuadratureRule(nodes, weights, order)
    _rule_cache[order] = rule
    return rule


def poly_roots(coeffs) -> np.ndarray:
    """All complex roots of a real polynomial given in ascending powers.

    Leading coefficients smaller than ``TRIM_RTOL`` times the largest
    coefficient magnitude are trimmed before building the companion matrix;
    the returned root count equals the trimmed degree.  Eigenvalues are
    computed by LAPACK (which balances the matrix internally).
    """
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficient sequence must be a non-empty 1-d array")
    scale = np.max(np.abs(c))
    if scale == 0.0:
        raise ValueError("zero polynomial")
    degree = c.size - 1
    while degree > 0 and abs(c[degree]) <= TRIM_RTOL * scale:
        degree -= 1
    if degree == 0:
        raise ValueError("constant polynomial after trimming; no roots")

    monic = c[:degree + 1] / c[degree]
    companion = np.zeros((degree, degree))
    companion[1:, :-1] = np.eye(degree - 1)
    companion[:, -1] = -monic[:-1]
    return np.linalg.eigvals(companion)
