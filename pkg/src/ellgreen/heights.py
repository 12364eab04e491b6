"""Arithmetic constants and height formulas.

Counts of cyclic subgroups, the prime-power constants governing averaged
Green values over torsion, the averaged quotient-height identity, and the
explicit Faltings-height formula (the finite, minimal-discriminant part is
consumed as user input; only the archimedean part is computed here).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .green import green
from .lattice import (
    TauPoint,
    cyclic_subgroups,
    exact_order_points,
    quotient,
    subgroup_points,
)
from .modular import DEFAULT_TOL, SeriesTolerance, log_norm_delta

_TWO_PI = 2.0 * math.pi


def _prime_factorization(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            r = 0
            while n % d == 0:
                n //= d
                r += 1
            out.append((d, r))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def cyclic_subgroup_count(n: int) -> int:
    """Number of cyclic order-n subgroups of (Z/n)^2: n * prod_{p|n} (1 + 1/p)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    count = n
    for p, _ in _prime_factorization(n):
        count = count // p * (p + 1)
    return count


def cyclic_log_green_constant(n: int) -> float:
    """The closed-form average of summed log-Green values over the cyclic
    order-n subgroups: sum over p^r || n of (p^r - 1)/(p^(r-1)(p^2 - 1)) log p.

    Coefficients stay exact rationals until the final multiply by log p.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    terms = []
    for p, r in _prime_factorization(n):
        coeff = Fraction(p ** r - 1, p ** (r - 1) * (p * p - 1))
        terms.append(float(coeff) * math.log(p))
    return math.fsum(terms)


def exact_order_log_green_expected(m: int) -> float:
    """Closed form of the log-Green sum over exact-order-m points:
    log p when m is a power of the prime p, else 0 (0 for m = 1)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    factors = _prime_factorization(m)
    if len(factors) == 1:
        return math.log(factors[0][0])
    return 0.0


def exact_order_log_green(tau: TauPoint, m: int,
                          tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """Numeric sum of log G(Q, 0) over the points of exact order m (the zero
    point, the only point of exact order 1, is excluded by convention)."""
    logs = [
        green(tau, p, tol).log_value
        for p in exact_order_points(m)
        if not p.is_zero
    ]
    return math.fsum(logs)


def average_height_increment(n: int) -> float:
    """Predicted average height change of the order-n cyclic quotients:
    (1/2) log n minus the cyclic log-Green constant."""
    return 0.5 * math.log(n) - cyclic_log_green_constant(n)


@dataclass(frozen=True)
class AverageHeightReport:
    """Both sides of the averaged quotient identities at one (tau, n).

    green_average should equal green_predicted (the closed-form constant);
    delta_average, built from quotient discriminant norms, should equal
    delta_predicted = (1/2) log n - green_predicted.
    """

    n: int
    green_average: float
    green_predicted: float
    delta_average: float
    delta_predicted: float

    @property
    def green_residual(self) -> float:
        return abs(self.green_average - self.green_predicted)

    @property
    def delta_residual(self) -> float:
        return abs(self.delta_average - self.delta_predicted)


def average_green_over_cyclic(tau: TauPoint, n: int,
                              tol: SeriesTolerance = DEFAULT_TOL) -> AverageHeightReport:
    """Average, over all cyclic order-n subgroups, of the summed log-Green
    values over nonzero subgroup points, together with the discriminant-norm
    route through the quotient tori."""
    subs = cyclic_subgroups(n)
    count = len(subs)
    log_delta_src = log_norm_delta(tau, tol)
    green_sums = []
    delta_drops = []
    for sub in subs:
        logs = [
            green(tau, p, tol).log_value
            for p in subgroup_points(sub)
            if not p.is_zero
        ]
        green_sums.append(math.fsum(logs))
        iso = quotient(tau, sub)
        delta_drops.append((log_delta_src - log_norm_delta(iso.target, tol)) / 12.0)
    return AverageHeightReport(
        n=n,
        green_average=math.fsum(green_sums) / count,
        green_predicted=cyclic_log_green_constant(n),
        delta_average=math.fsum(delta_drops) / count,
        delta_predicted=average_height_increment(n),
    )


@dataclass(frozen=True)
class CurveHeightInput:
    """Inputs of the explicit height formula for a curve over a number field:
    the field degree, log of the minimal-discriminant norm (nats), and one
    tau per complex embedding."""

    degree: int
    log_norm_min_disc: float
    embeddings: tuple[TauPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "embeddings", tuple(self.embeddings))
        if self.degree < 1:
            raise ValueError(f"field degree must be >= 1, got {self.degree}")
        if self.log_norm_min_disc < 0:
            raise ValueError(
                f"log of a discriminant norm cannot be negative, got {self.log_norm_min_disc!r}"
            )
        if not self.embeddings:
            raise ValueError("at least one complex embedding is required")


def faltings_height(inp: CurveHeightInput,
                    tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """The (stable) Faltings height from the minimal-discriminant norm and
    the normalised discriminants of the complex embeddings:

        h = (1/deg) * ( (1/12) log|N(disc)| - (1/12) sum_s log((2 pi)^12 ||delta||_s) )

    The embedding sum is compensated and taken in input order.
    """
    terms = [
        12.0 * math.log(_TWO_PI) + log_norm_delta(tau_s, tol)
        for tau_s in inp.embeddings
    ]
    return (inp.log_norm_min_disc / 12.0 - math.fsum(terms) / 12.0) / inp.degree
