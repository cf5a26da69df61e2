"""Cut-and-project model for the box sets built in :mod:`.brs`.

The ambient space is a pair of adelic vectors (x, y).  The physical
line is E = {(x, -x*alpha)}, the internal line is F = {(0, y)}; the two
projections below split every pair accordingly.  Selecting the lattice
pairs (gamma1, gamma2) whose internal part gamma2 + gamma1*alpha lands
inside a window box reproduces, with multiplicity, exactly the lift
counts that the brs module computes for the projected set.

The counting here is deliberately implemented on a different code path
from brs.box_lift_count (pieced-together p-adic fractional parts and a
linear scan instead of CRT plus a ceiling formula), so the agreement of
the two is a meaningful end-to-end check rather than a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import brs
from .brs import AdelicBox, WeightedBoxSet
from .errors import ConditionViolated
from .exact import ExactReal, RationalLike, padic_fractional_part
from .solenoid import AdeleVector, orbit, reduce_to_fundamental, zero_point

Pair = tuple[AdeleVector, AdeleVector]


def project_physical(pair: Pair, alpha: AdeleVector) -> Pair:
    """Projection onto E = {(x, -x*alpha)} along F."""
    x, _ = pair
    return (x, -(x.mul_pointwise(alpha)))


def project_internal(pair: Pair, alpha: AdeleVector) -> Pair:
    """Projection onto F = {(0, y)} along E."""
    x, y = pair
    zero = AdeleVector(x.primes, ExactReal(0))
    return (zero, y + x.mul_pointwise(alpha))


@dataclass(frozen=True, slots=True)
class CutProjectConfig:
    """Strip data for a fixed rational lam: the strip is the window
    translated along E, and beta = 1/(lam + alpha) componentwise maps
    internal displacements back to strip coordinates."""

    alpha: AdeleVector
    lam: Fraction
    beta: AdeleVector

    def __init__(self, alpha: AdeleVector, lam: RationalLike):
        lam = Fraction(lam)
        parts = {}
        for p, ap in alpha.parts:
            if lam + ap == 0:
                raise ConditionViolated(f"lambda = -alpha_{p}")
            parts[p] = 1 / (lam + ap)
        if alpha.real.is_rational() and alpha.real.as_fraction() == -lam:
            raise ConditionViolated("lambda = -alpha_real")
        beta = AdeleVector(alpha.primes, (lam + alpha.real).inverse(), parts)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "beta", beta)


def window_companion(config: CutProjectConfig, sigma: RationalLike) -> Fraction:
    """The unique lattice rational sigma' such that sigma' + sigma*beta
    lies in the fundamental domain, i.e. such that the lattice pair
    (sigma', sigma'*lam) falls inside the strip shifted by (0, sigma)."""
    v = config.beta.scale(Fraction(sigma))
    _, g = reduce_to_fundamental(v)
    return -g.value


def window_multiplicity(window: AdelicBox, alpha: AdeleVector,
                        gamma1: RationalLike) -> int:
    """Number of lattice rationals gamma2 with gamma2 + gamma1*alpha in
    the window box.

    The p-adic conditions say (gamma2 + w_p)/s is p-integral for every p,
    where s = prod_p p**(-f_p) collects the ball radii; summing the
    fractional parts of w_p/s produces one admissible base point, and
    admissible gamma2 form base + s*Z.  The real edge is then counted by
    stepping through the coset.
    """
    g1 = Fraction(gamma1)
    s = Fraction(1)
    for ball in window.balls:
        s *= Fraction(ball.p) ** (-ball.radius_exponent)
    eta = Fraction(0)
    for ball in window.balls:
        w = g1 * alpha.part(ball.p) - ball.center
        eta -= padic_fractional_part(w / s, ball.p)
    base = s * eta

    shift = alpha.real * g1
    lo = window.lo - shift
    hi = window.hi - shift
    j = ((lo - base) / s).floor()
    while base + j * s < lo:
        j += 1
    count = 0
    while base + j * s < hi:
        count += 1
        j += 1
    return count


@dataclass(frozen=True, slots=True)
class CutPoint:
    gamma1: Fraction
    multiplicity: int


def generate_cutproject(alpha: AdeleVector, window: AdelicBox,
                        candidates: Iterable[RationalLike]) -> list[CutPoint]:
    """Scan candidate gamma1 values and keep those selected by the
    window, with multiplicity."""
    out = []
    for g1 in candidates:
        g1 = Fraction(g1)
        m = window_multiplicity(window, alpha, g1)
        if m > 0:
            out.append(CutPoint(g1, m))
    return out


def correspondence_check(boxset: WeightedBoxSet, alpha: AdeleVector,
                         n: int) -> bool:
    """Compare, for gamma1 = 0..n-1 and every box of the set, the
    cut-and-project multiplicity against the lift count brs computes at
    the projected orbit point.  True iff they agree everywhere."""
    points = orbit(alpha, zero_point(alpha.primes), n)
    for g1, x in enumerate(points):
        for box, _ in boxset.terms:
            if window_multiplicity(box, alpha, g1) != brs.box_lift_count(box, x):
                return False
    return True
