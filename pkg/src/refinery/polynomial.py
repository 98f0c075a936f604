"""Polynomial maximal rewards built from J'' = (eta (1 - eta))^n.

The construction runs in exact rational arithmetic end to end: expand the
second derivative binomially, antidifferentiate twice, pin the slope at 1/2
with k1 and rescale with k2 so that J(1/2) = -1/2 exactly.  Floating point
enters only at evaluation time.  Raising n (even) walks the family toward
the zero-one reward, which is what makes these useful as arbitrarily tight
Bayes-error bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import CapacityError, DomainError, ParameterError
from .rewards import BOUND, MaximalReward

MAX_ORDER = 32


@dataclass(frozen=True)
class PolynomialReward:
    """Exact-coefficient polynomial reward of construction order n.

    ``r_coefficients[p]`` is the rational coefficient of eta**p in R, the
    second antiderivative of (eta (1 - eta))**n.  The reward itself is
    J(eta) = k2 * (R(eta) + k1 * eta).
    """

    n: int
    r_coefficients: tuple[Fraction, ...]
    k1: Fraction
    k2: Fraction

    @property
    def q_coefficients(self) -> tuple[Fraction, ...]:
        """Coefficients of Q = R', the first antiderivative of J''/k2."""
        return tuple(c * p for p, c in enumerate(self.r_coefficients))[1:]

    def value_exact(self, eta: Fraction) -> Fraction:
        """Evaluate J at a rational point without rounding."""
        acc = Fraction(0)
        for c in reversed(self.r_coefficients):
            acc = acc * eta + c
        return self.k2 * (acc + self.k1 * eta)

    @property
    def as_reward(self) -> MaximalReward:
        """Float-evaluating view registered under the name ``poly-<n>``."""
        k2 = float(self.k2)
        vc = np.array([float(c) for c in self.r_coefficients])
        vc[1] += float(self.k1)
        dc = np.array([float(c) for c in self.q_coefficients])

        def value(e):
            return k2 * npoly.polyval(e, vc)

        def derivative(e):
            return k2 * (npoly.polyval(e, dc) + float(self.k1))

        return MaximalReward(name=f"poly-{self.n}", family=BOUND,
                             value=value, derivative=derivative)


@lru_cache(maxsize=None)
def _build(n: int) -> PolynomialReward:
    half = Fraction(1, 2)
    # J''(eta) = sum_j (-1)^j C(n, j) eta^(n+j); antidifferentiate termwise.
    q = {n + j + 1: Fraction((-1) ** j * comb(n, j), n + j + 1)
         for j in range(n + 1)}
    k1 = -sum(c * half ** p for p, c in q.items())
    r = {p + 1: c / (p + 1) for p, c in q.items()}
    r_half = sum(c * half ** p for p, c in r.items())
    k2 = Fraction(-1, 2) / (r_half + k1 * half)
    degree = 2 * n + 2
    coeffs = tuple(r.get(p, Fraction(0)) for p in range(degree + 1))
    return PolynomialReward(n=n, r_coefficients=coeffs, k1=k1, k2=k2)


def build_poly_reward(n: int, max_order: int = MAX_ORDER) -> PolynomialReward:
    """Construct the order-n polynomial reward with exact constants.

    n must be even and nonnegative; orders above ``max_order`` are refused
    because the binomial coefficients grow quickly.
    """
    if not isinstance(n, (int, np.integer)) or n < 0 or n % 2:
        raise ParameterError(
            f"construction order must be an even nonnegative integer, got {n!r}")
    if n > max_order:
        raise CapacityError(f"order {n} exceeds the configured maximum {max_order}")
    return _build(int(n))


def eval_poly(poly: PolynomialReward, eta):
    """Evaluate k2 * (R(eta) + k1 * eta) in floating point (Horner)."""
    arr = np.asarray(eta, dtype=float)
    if np.any(np.isnan(arr)) or np.any((arr < 0.0) | (arr > 1.0)):
        raise DomainError("eta must lie in [0, 1]")
    out = poly.as_reward.value(arr)
    return float(out) if np.ndim(eta) == 0 else out


def k2_given_k1(poly: PolynomialReward, k1_value: float) -> float:
    """Recompute the k2 normalization for an externally rounded k1.

    Published tables sometimes round k1 before normalizing; feeding the
    rounded value back through the k2 formula reproduces those figures.
    """
    r_half = float(sum(c * Fraction(1, 2) ** p
                       for p, c in enumerate(poly.r_coefficients)))
    return -0.5 / (r_half + k1_value / 2.0)
