"""Expected Euler characteristic of a Poisson Rips complex on the flat torus.

The analytic expressions assume the uniform (max) norm on the torus
``[0, a)^d`` and the strict connection rule ``d(x, y) < r``.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .geometry import ParameterError, PointCloud
from .rips import count_simplices_full


class SeriesDivergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ChiParams:
    lam: float
    r: float
    side_a: float
    dim_d: int = 2
    series_terms: int = 200

    def __post_init__(self):
        if not self.lam >= 0:
            raise ParameterError(f"lambda must be non-negative, got {self.lam!r}")
        if not (self.r > 0 and self.side_a > 0):
            raise ParameterError("r and side_a must be positive")
        if self.dim_d < 1 or self.series_terms < 1:
            raise ParameterError("dim_d and series_terms must be positive integers")


_EPS = sys.float_info.epsilon


def expected_chi_series(p: ChiParams, rtol: float = 1e-12) -> float:
    """Partial sum of ``-(a/r)^d * sum_k (-lam r^d)^k k^d / k!``.

    Terms come from the ratio recurrence ``u_k = u_{k-1} * (-x) / k`` so no
    factorial is ever formed. Summation stops once the terms are decreasing
    and the latest one is below ``rtol`` times the larger of the running sum
    and the biggest term seen (the sum itself may be exactly zero).
    """
    x = p.lam * p.r ** p.dim_d
    if x == 0.0:
        return 0.0
    d = p.dim_d
    terms = []
    u = 1.0
    biggest = 0.0
    for k in range(1, 10 * p.series_terms + 1):
        u *= -x / k
        term = u * k ** d
        terms.append(term)
        biggest = max(biggest, abs(term))
        if not math.isfinite(term):
            break
        if k > x + d and abs(term) < max(rtol * abs(math.fsum(terms)), _EPS * biggest):
            return -((p.side_a / p.r) ** d) * math.fsum(terms)
    raise SeriesDivergenceError(
        f"series did not converge within {10 * p.series_terms} terms (lam r^d = {x})")


def expected_chi_2d(lam: float, r: float, side_a: float) -> float:
    """``a^2 lam (1 - lam r^2) exp(-lam r^2)``."""
    if not (lam >= 0 and r > 0 and side_a > 0):
        raise ParameterError("need lam >= 0, r > 0, side_a > 0")
    x = lam * r * r
    return side_a * side_a * lam * (1.0 - x) * math.exp(-x)


def chi_2d_stationary_lambdas(r: float) -> tuple[float, float]:
    """Intensities where d/dlam of the 2D closed form vanishes (max, min).

    With ``x = lam r^2`` the derivative is proportional to
    ``(1 - 3x + x^2) e^{-x}``.
    """
    s5 = math.sqrt(5.0)
    return (3 - s5) / 2 / (r * r), (3 + s5) / 2 / (r * r)


def empirical_chi(cloud: PointCloud, r: float, size_cap: int = 16) -> int:
    counts = count_simplices_full(cloud, r, size_cap)
    return sum(c if k % 2 == 0 else -c for k, c in enumerate(counts))
