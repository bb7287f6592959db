"""FIR prototype synthesis: truncated series fit, roots in x, zeros in z.

A prototype is the zero-phase characteristic f(x) = sum p_k x^(2k) obtained
by projecting an object function onto even Legendre polynomials.  Its roots
are found in u = x^2 (halving the degree), then mapped to z-plane zeros
through cos(omega) = 2x^2 - 1, which reduces to z = exp(+-j*omega) for real
roots in [-1, 1] and yields reciprocal pairs otherwise.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .bandspec import FilterSpec, ObjectFunction, omega_to_x
from .legendre import LegendreSeries, eval_series, project
from .numerics import TRIM_RTOL, poly_roots

__all__ = [
    "FirPrototype",
    "ZeroSet",
    "synthesize_fir",
    "eval_fir_response",
    "find_x_roots",
    "x_roots_to_z_zeros",
    "fir_zero_set",
]

# Working precision (decimal digits) for root polishing on the exact
# coefficient polynomial.  The monomial form of a degree ~40 series is too
# ill-conditioned for double-precision roots to reproduce the response to the
# contract tolerances, so companion-matrix seeds are refined here.
POLISH_DPS = 60


@dataclass(frozen=True)
class ZeroSet:
    """Multiset of z-plane points with multiplicities.

    Real-coefficient provenance keeps the set closed under conjugation, and
    zero-phase symmetry keeps it closed under z -> 1/z except for points on
    the unit circle, which pair with their own conjugates.
    """

    points: tuple[complex, ...]
    multiplicities: tuple[int, ...]

    @classmethod
    def from_points(cls, values) -> "ZeroSet":
        """Group exactly-equal points into multiplicities, preserving order."""
        grouped: dict[complex, int] = {}
        for v in values:
            z = complex(v)
            grouped[z] = grouped.get(z, 0) + 1
        return cls(tuple(grouped), tuple(grouped.values()))

    def expand(self) -> np.ndarray:
        """Each point repeated by its multiplicity."""
        if not self.points:
            return np.empty(0, dtype=complex)
        return np.repeat(np.array(self.points, dtype=complex), self.multiplicities)

    def total(self) -> int:
        return int(sum(self.multiplicities))

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class FirPrototype:
    """Truncated-series filter characteristic and its power-basis form.

    ``power_coeffs[k]`` multiplies x^(2k); the same numbers read as a
    polynomial in u = x^2 drive root extraction.
    """

    series: LegendreSeries
    spec: FilterSpec
    power_coeffs: tuple[float, ...]


@functools.lru_cache(maxsize=None)
def _monomial_table(max_order: int) -> tuple[tuple[Fraction, ...], ...]:
    """Exact monomial coefficients of P_0 ... P_max_order (ascending powers)."""
    table = [(Fraction(1),), (Fraction(0), Fraction(1))]
    for n in range(1, max_order):
        current, previous = table[n], table[n - 1]
        nxt = [Fraction(0)] * (n + 2)
        for k, c in enumerate(current):
            nxt[k + 1] += Fraction(2 * n + 1, n + 1) * c
        for k, c in enumerate(previous):
            nxt[k] -= Fraction(n, n + 1) * c
        table.append(tuple(nxt))
    return tuple(table[: max_order + 1])


def _power_fractions(series: LegendreSeries) -> list[Fraction]:
    """Exact coefficients of u^k in the series (floats are dyadic, so exact)."""
    top = 2 * (len(series.coeffs) - 1)
    table = _monomial_table(max(top, 1))
    out = [Fraction(0)] * len(series.coeffs)
    for n, coeff in enumerate(series.coeffs):
        c = Fraction(coeff)
        for k, entry in enumerate(table[2 * n]):
            if entry:
                out[k // 2] += c * entry
    return out


def synthesize_fir(
    obj: ObjectFunction, num_terms: int, quad_order: int | None = None
) -> FirPrototype:
    """Project an object function and derive its power-basis coefficients.

    Projection runs on the normalized abscissa x / x0, so the stored series
    reports the spec's x0 as its domain bound.
    """
    x0 = obj.provenance.x0
    if x0 == 1.0:
        target, breaks = obj.eval, obj.breakpoints
    else:
        target = lambda t: obj.eval(t * x0)  # noqa: E731
        breaks = tuple(b / x0 for b in obj.breakpoints)
    series = project(target, num_terms, quad_order, breakpoints=breaks)
    if x0 != 1.0:
        series = LegendreSeries(series.coeffs, domain_max=x0)
    powers = tuple(float(p) for p in _power_fractions(series))
    return FirPrototype(series, obj.provenance, powers)


def eval_fir_response(proto: FirPrototype, omega):
    """Zero-phase amplitude at omega: the series evaluated at x0*cos(omega/2).

    The omega = pi endpoint maps to x = 0 exactly rather than the rounded
    cos(pi/2).
    """
    x = omega_to_x(omega, proto.series.domain_max)
    x = np.where(np.asarray(omega) == math.pi, 0.0, x)
    if np.ndim(omega) == 0:
        x = float(x)
    return eval_series(proto.series, x)


def _trimmed_degree(powers: tuple[float, ...]) -> int:
    scale = max(abs(p) for p in powers)
    if scale == 0.0:
        raise ValueError("prototype coefficients are all zero")
    degree = len(powers) - 1
    while degree > 0 and abs(powers[degree]) <= TRIM_RTOL * scale:
        degree -= 1
    return degree


@functools.lru_cache(maxsize=64)
def _u_roots(proto: FirPrototype) -> tuple[np.ndarray, float, int]:
    """Roots of the prototype's polynomial in u = x^2, plus leading coeff/degree.

    Companion-matrix eigenvalues seed a Newton refinement on the exact
    rational coefficients; a polished root is kept only when its residual
    improves on the seed's.
    """
    degree = _trimmed_degree(proto.power_coeffs)
    if degree == 0:
        return np.empty(0, dtype=complex), proto.power_coeffs[0], 0
    seeds = poly_roots(proto.power_coeffs[: degree + 1])

    exact = _power_fractions(proto.series)[: degree + 1]
    with mpmath.workdps(POLISH_DPS):
        poly = [mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator) for c in exact]
        deriv = [k * poly[k] for k in range(1, degree + 1)]

        def horner(cs, z):
            acc = mpmath.mpc(0)
            for c in reversed(cs):
                acc = acc * z + c
            return acc

        polished = []
        for seed in seeds:
            z = mpmath.mpc(seed)
            best = z
            best_res = abs(horner(poly, z))
            for _ in range(50):
                dz = horner(deriv, z)
                if dz == 0:
                    break
                step = horner(poly, z) / dz
                z = z - step
                res = abs(horner(poly, z))
                if res < best_res:
                    best, best_res = z, res
                if abs(step) < mpmath.mpf(10) ** (-POLISH_DPS + 10) * max(1, abs(z)):
                    break
            polished.append(complex(best))
    roots = np.array(polished)
    roots.flags.writeable = False  # cached and shared between callers
    return roots, proto.power_coeffs[degree], degree


def find_x_roots(proto: FirPrototype) -> np.ndarray:
    """All roots in x of the even prototype polynomial (sign pairs included)."""
    u_roots, _, degree = _u_roots(proto)
    if degree == 0:
        return np.empty(0, dtype=complex)
    principal = np.sqrt(u_roots.astype(complex))
    return np.stack([principal, -principal], axis=1).ravel()


def _quadratic_pair(c: complex) -> tuple[complex, complex]:
    """Both solutions of z^2 - 2cz + 1 = 0 (reciprocal pair with product 1)."""
    s = np.sqrt(complex(c * c - 1.0))
    return complex(c + s), complex(c - s)


def x_roots_to_z_zeros(x_roots) -> ZeroSet:
    """Map each x-root through cos(omega) = 2x^2 - 1 to its pair of z-points."""
    zs: list[complex] = []
    for x in np.asarray(x_roots, dtype=complex):
        zs.extend(_quadratic_pair(2.0 * x * x - 1.0))
    return ZeroSet.from_points(zs)


def fir_zero_set(proto: FirPrototype) -> tuple[ZeroSet, float]:
    """z-plane zeros of the prototype, one quadratic per u-root, with gain.

    ``gain * prod(z - z_i)`` reproduces ``z**degree * f(x(z))`` exactly, where
    degree is the trimmed degree in u; feeding both members of each +-x root
    pair through the mapping would double-count every quadratic.
    """
    u_roots, lead, degree = _u_roots(proto)
    zs: list[complex] = []
    for u in u_roots:
        zs.extend(_quadratic_pair(2.0 * u - 1.0))
    return ZeroSet.from_points(zs), lead / (4.0 ** degree)
