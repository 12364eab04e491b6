"""Bridge between the algebraic model y^2 = 4x^3 - p*x - q and the torus.

Forward direction: Eisenstein q-series give (p, q) for the lattice
Z + tau*Z, and theta constants give the half-period roots.  Inverse
direction: periods of a curve are recovered by the optimal arithmetic-
geometric mean on square roots of root differences.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import SeriesConvergenceError
from .lattice import TauPoint, TorusPoint, reduce_tau
from .modular import DEFAULT_TOL, SeriesTolerance, delta, theta
from .green import green

_PI = math.pi
_PI_SQ = math.pi * math.pi


@dataclass(frozen=True)
class WeierstrassCurve:
    """A curve y^2 = 4x^3 - p*x - q with nonzero discriminant p^3 - 27q^2.

    Near the cusp the two terms of the discriminant agree to many digits,
    so series producers (eisenstein) pass a cancellation-free value through
    `disc`; for hand-built curves it defaults to the direct difference.
    """

    p: complex
    q: complex
    disc: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "p", complex(self.p))
        object.__setattr__(self, "q", complex(self.q))
        if self.disc is None:
            object.__setattr__(self, "disc", self.p ** 3 - 27.0 * self.q ** 2)
        else:
            object.__setattr__(self, "disc", complex(self.disc))
        if self.disc == 0:
            raise ValueError("degenerate curve: p^3 - 27 q^2 = 0")

    @property
    def discriminant(self) -> complex:
        return self.disc


@dataclass(frozen=True)
class PeriodData:
    """An oriented period basis (omega1, omega2) with tau = omega2/omega1."""

    omega1: complex
    omega2: complex
    tau: TauPoint

    def __post_init__(self):
        ratio = self.omega2 / self.omega1
        if abs(ratio - self.tau.z) > 1e-9 * (1.0 + abs(ratio)):
            raise ValueError("tau does not match omega2/omega1")


@dataclass(frozen=True)
class RootTriple:
    """Roots of 4x^3 - p*x - q, ordered by the theta-difference convention:
    alpha1 - alpha3 = pi^2 theta(0)^4, alpha1 - alpha2 = pi^2 theta(1/2)^4."""

    alpha1: complex
    alpha2: complex
    alpha3: complex

    def __post_init__(self):
        total = self.alpha1 + self.alpha2 + self.alpha3
        scale = max(abs(self.alpha1), abs(self.alpha2), abs(self.alpha3), 1.0)
        if abs(total) > 1e-8 * scale:
            raise ValueError("roots of a depressed cubic must sum to zero")

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.alpha1, self.alpha2, self.alpha3)


def _sigma_power(n: int, k: int) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def eisenstein(tau: TauPoint, tol: SeriesTolerance = DEFAULT_TOL) -> WeierstrassCurve:
    """The invariants (g2, g3) of the lattice Z + tau*Z via Eisenstein q-series."""
    q = cmath.exp(2j * _PI * tau.z)
    aq = abs(q)
    a = 0j  # E4 - 1
    b = 0j  # E6 - 1
    qn = 1.0 + 0j
    # the discriminant depends on the cusp tails a, b alone, so the cut must
    # hold relative to their leading size 240|q|, not to the constant term 1
    threshold = tol.rel_tol * 240.0 * aq * (1.0 - aq)
    for n in range(1, tol.max_terms + 1):
        qn *= q
        a += 240.0 * _sigma_power(n, 3) * qn
        b -= 504.0 * _sigma_power(n, 5) * qn
        # sigma_5(n) < n^6 bounds both tails; <= so that an underflowed |q|
        # (threshold and bound both 0.0) stops immediately
        if 504.0 * (n + 1) ** 6 * aq ** (n + 1) <= threshold:
            break
    else:
        raise SeriesConvergenceError(
            f"Eisenstein series did not converge within {tol.max_terms} terms"
        )
    g2 = (4.0 * _PI ** 4 / 3.0) * (1.0 + a)
    g3 = (8.0 * _PI ** 6 / 27.0) * (1.0 + b)
    # g2^3 - 27 g3^2 = C ((1+a)^3 - (1+b)^2); the expanded form below has no
    # cancellation between the leading 1's, which the direct difference loses
    # entirely once |q| is small
    disc = (64.0 * _PI ** 12 / 27.0) * (
        3.0 * a - 2.0 * b + 3.0 * a * a + a ** 3 - b * b
    )
    return WeierstrassCurve(g2, g3, disc)


def _theta_constants(tau: TauPoint, tol: SeriesTolerance) -> tuple[complex, complex, complex]:
    # (theta(0), theta(1/2), exp(pi*i*tau/4) * theta(tau/2)); the phased third
    # constant is the natural one for fourth-power identities.
    t3 = theta(0.0, tau, tol)
    t4 = theta(0.5, tau, tol)
    t2 = cmath.exp(1j * _PI * tau.z / 4.0) * theta(tau.z / 2.0, tau, tol)
    return t3, t4, t2


def half_period_roots(tau: TauPoint, tol: SeriesTolerance = DEFAULT_TOL) -> RootTriple:
    """Half-period roots for the lattice Z + tau*Z, built from theta constants.

    The differences satisfy alpha1 - alpha3 = pi^2 theta(0)^4,
    alpha1 - alpha2 = pi^2 theta(1/2)^4 and (by the Jacobi quartic relation)
    alpha2 - alpha3 = pi^2 exp(pi*i*tau) theta(tau/2)^4; together with
    sum(alpha) = 0 this pins the triple.
    """
    t3, t4, _ = _theta_constants(tau, tol)
    d13 = _PI_SQ * t3 ** 4
    d12 = _PI_SQ * t4 ** 4
    alpha1 = (d12 + d13) / 3.0
    return RootTriple(alpha1, alpha1 - d12, alpha1 - d13)


def _cubic_roots(curve: WeierstrassCurve) -> list[complex]:
    # roots of 4x^3 - p*x - q with one Newton polish per root
    raw = np.roots([4.0, 0.0, -curve.p, -curve.q])
    polished = []
    for r in raw:
        r = complex(r)
        df = 12.0 * r * r - curve.p
        if df != 0:
            r -= (4.0 * r ** 3 - curve.p * r - curve.q) / df
        polished.append(r)
    return polished


def _match_roots(computed: list[complex],
                 predicted: tuple[complex, complex, complex]) -> tuple[complex, ...]:
    best = None
    best_cost = math.inf
    for perm in permutations(computed):
        cost = sum(abs(c - t) for c, t in zip(perm, predicted))
        if cost < best_cost:
            best_cost = cost
            best = perm
    return best


def _root_differences(a1: complex, a2: complex, a3: complex,
                      disc: complex) -> tuple[complex, complex, complex]:
    """(a1-a2, a1-a3, a2-a3) with the smallest difference recomputed from the
    discriminant.

    A nearly degenerate pair is resolved by the cubic solver only to about
    sqrt(eps); since disc = 16 (d12 d13 d23)^2, the small difference follows
    from the two well-conditioned ones at full precision.
    """
    diffs = [a1 - a2, a1 - a3, a2 - a3]
    idx = min(range(3), key=lambda i: abs(diffs[i]))
    others = [diffs[i] for i in range(3) if i != idx]
    rescued = cmath.sqrt(disc / (16.0 * others[0] ** 2 * others[1] ** 2))
    if abs(rescued - diffs[idx]) > abs(-rescued - diffs[idx]):
        rescued = -rescued
    diffs[idx] = rescued
    return tuple(diffs)


def thomae_residuals(tau: TauPoint, tol: SeriesTolerance = DEFAULT_TOL
                     ) -> tuple[float, float, float]:
    """Relative residuals of the three half-period/theta-constant identities.

    The root side comes from the Eisenstein-series curve (an independent
    series), matched to the theta ordering; comparisons are in absolute
    value, which sidesteps the square-root branch choices.
    """
    curve = eisenstein(tau, tol)
    a1, a2, a3 = _match_roots(
        _cubic_roots(curve), half_period_roots(tau, tol).as_tuple()
    )
    d12, d13, d23 = _root_differences(a1, a2, a3, curve.discriminant)
    t3, t4, t2 = _theta_constants(tau, tol)
    rhs13 = _PI_SQ * abs(t3) ** 4
    rhs12 = _PI_SQ * abs(t4) ** 4
    rhs23 = _PI_SQ * abs(t2) ** 4
    return (
        abs(abs(d13) - rhs13) / rhs13,
        abs(abs(d12) - rhs12) / rhs12,
        abs(abs(d23) - rhs23) / rhs23,
    )


def discriminant_relation_residual(periods: PeriodData, curve: WeierstrassCurve,
                                   tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """Relative residual of p^3 - 27q^2 = (2*pi)^12 omega1^(-12) delta(tau)."""
    # delta transforms with weight 12, so the identity can be evaluated at
    # the reduced marking with omega1 rescaled by the same cocycle factor
    red, mat = reduce_tau(periods.tau)
    (_, _), (mc, md) = mat
    omega1_eff = periods.omega1 * (mc * periods.tau.z + md)
    rhs = (2.0 * _PI) ** 12 * omega1_eff ** -12 * delta(red, tol)
    lhs = curve.discriminant
    return abs(lhs - rhs) / abs(rhs)


def root_product_discriminant(roots: RootTriple) -> complex:
    """The discriminant via 16 * prod of squared root differences."""
    a1, a2, a3 = roots.as_tuple()
    return 16.0 * (a1 - a2) ** 2 * (a1 - a3) ** 2 * (a2 - a3) ** 2


_HALF_PERIOD_COORDS = (
    (1, 0),  # z1 = 1/2        <-> alpha1
    (1, 1),  # z2 = (1+tau)/2  <-> alpha2
    (0, 1),  # z3 = tau/2      <-> alpha3
)


def two_torsion_green_check(tau: TauPoint, tol: SeriesTolerance = DEFAULT_TOL
                            ) -> tuple[float, float, float]:
    """Residuals of the two-torsion Green values against the root formulas.

    For the half-period points P_i matched to the roots alpha_i,
    G(P_i, P_j)^12 = 16 |alpha_i - alpha_j|^2 / (|alpha_i - alpha_k| |alpha_j - alpha_k|).
    Returns the relative residuals for (1,2), (1,3), (2,3).
    """
    from fractions import Fraction

    t3, t4, t2 = _theta_constants(tau, tol)
    # pairwise root distances straight from the theta constants (subtracting
    # stored roots would lose the small distance near the cusp)
    dist = {
        (0, 1): _PI_SQ * abs(t4) ** 4,
        (0, 2): _PI_SQ * abs(t3) ** 4,
        (1, 2): _PI_SQ * abs(t2) ** 4,
    }
    pts = [
        TorusPoint(Fraction(ca, 2), Fraction(cb, 2))
        for ca, cb in _HALF_PERIOD_COORDS
    ]
    out = []
    for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        g = green(tau, pts[j] - pts[i], tol)
        lhs = g.value ** 12
        rhs = 16.0 * dist[(i, j)] ** 2 / (
            dist[tuple(sorted((i, k)))] * dist[tuple(sorted((j, k)))]
        )
        out.append(abs(lhs - rhs) / rhs)
    return tuple(out)


def optimal_agm(a: complex, b: complex, rel_tol: float = 1e-15,
                max_iter: int = 64) -> tuple[complex, int]:
    """Arithmetic-geometric mean with the optimal branch rule: at each step
    take the square root closer to the running arithmetic mean.

    Returns (limit, iterations); quadratic convergence makes the count small.
    """
    a = complex(a)
    b = complex(b)
    for it in range(max_iter):
        if abs(a - b) <= rel_tol * abs(a):
            return (a + b) / 2.0, it
        mean = (a + b) / 2.0
        geo = cmath.sqrt(a * b)
        if abs(geo - mean) > abs(-geo - mean):
            geo = -geo
        a, b = mean, geo
    raise ArithmeticError(
        f"AGM did not converge within {max_iter} iterations (pathological branch flips?)"
    )


def _curve_scale(roots: list[complex]) -> float:
    return max(abs(roots[0] - roots[1]), abs(roots[0] - roots[2]),
               abs(roots[1] - roots[2]))


def _j_invariant_series(tau: TauPoint, tol: SeriesTolerance) -> complex:
    curve = eisenstein(tau, tol)
    return 1728.0 * curve.p ** 3 / curve.discriminant


def _polish_tau(red: TauPoint, j_target: complex,
                tol: SeriesTolerance) -> TauPoint:
    # Newton on the j-invariant.  The AGM can land a period ratio that is
    # off by O(|q|) when a branch step leaves the theta-duplication
    # trajectory near the cusp; one or two Newton steps remove that.
    z = red.z
    h = 1e-5
    for _ in range(2):
        j0 = _j_invariant_series(TauPoint.from_complex(z), tol)
        jp = (_j_invariant_series(TauPoint(z.real + h, z.imag), tol)
              - _j_invariant_series(TauPoint(z.real - h, z.imag), tol)) / (2.0 * h)
        if abs(jp) < 1e-6 * (1.0 + abs(j0)):
            break  # near a critical point of j; nothing to gain
        step = (j0 - j_target) / jp
        if abs(step) > 1e-3:
            break  # wrong basin; keep the unpolished value
        z -= step
    return TauPoint.from_complex(z)


def periods_from_curve(curve: WeierstrassCurve, tol: SeriesTolerance = DEFAULT_TOL
                       ) -> PeriodData:
    """Recover an oriented period basis of a curve by the optimal AGM.

    With roots ordered (a1, a2, a3), omega1 = pi / AGM(sqrt(a1-a3), sqrt(a1-a2))
    and omega2 = i*pi / AGM(sqrt(a1-a3), sqrt(a2-a3)).  Each candidate root
    ordering is validated by a round trip through the Eisenstein series of
    the reduced period ratio; the first ordering reproducing (p, q) wins.
    """
    if curve.discriminant == 0:
        raise ValueError("degenerate curve: zero discriminant")
    roots = _cubic_roots(curve)
    scale = _curve_scale(roots)
    last_residual = math.inf
    for perm in permutations(range(3)):
        a1, a2, a3 = (roots[perm[0]], roots[perm[1]], roots[perm[2]])
        d12, d13, d23 = _root_differences(a1, a2, a3, curve.discriminant)
        sa = cmath.sqrt(d13)
        sb = cmath.sqrt(d12)
        sc = cmath.sqrt(d23)
        if (sb / sa).real < 0:
            sb = -sb
        if (sc / sa).real < 0:
            sc = -sc
        try:
            m1, _ = optimal_agm(sa, sb)
            m2, _ = optimal_agm(sa, sc)
        except ArithmeticError:
            continue
        omega1 = _PI / m1
        omega2 = 1j * _PI / m2
        ratio = omega2 / omega1
        if ratio.imag == 0.0:
            continue
        if ratio.imag < 0.0:
            omega2 = -omega2
            ratio = -ratio
        tau = TauPoint.from_complex(ratio)
        red, mat = reduce_tau(tau)
        (ma, mb), (mc, md) = mat
        omega1_eff = omega1 * (mc * ratio + md)
        ref = eisenstein(red, tol)
        residual = (
            abs(ref.p / omega1_eff ** 4 - curve.p) / scale ** 2
            + abs(ref.q / omega1_eff ** 6 - curve.q) / scale ** 3
        )
        if residual < 1e-6:
            polished = _polish_tau(red, 1728.0 * curve.p ** 3 / curve.discriminant, tol)
            # map the polished reduced point back through the inverse of the
            # reduction and rebuild omega2 = omega1 * tau
            raw = (md * polished.z - mb) / (-mc * polished.z + ma)
            omega2 = omega1 * raw
            return PeriodData(omega1, omega2, TauPoint.from_complex(raw))
        last_residual = min(last_residual, residual)
    raise ArithmeticError(
        f"period recovery failed for every root ordering "
        f"(best residual {last_residual:.3e})"
    )
