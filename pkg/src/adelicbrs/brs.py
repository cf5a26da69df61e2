"""Construction and certification of bounded remainder sets (BRS) on a
p-adic solenoid.

The allowable volumes for a rotation alpha are the nonnegative numbers

    xi = -gamma * alpha_real + sum_p {gamma * alpha_p}_p + n

with gamma a lattice rational and n an integer.  For each such volume
this module builds a finite weighted union of adelic boxes whose orbit
discrepancy stays bounded, together with exact witnesses: the associated
rational lambda, the integer scale M tying the real and p-adic box sizes
together, and a pointwise-nonnegativity certificate when a full-domain
box enters with negative weight.

Everything is exact; the only floating point in the whole pipeline lives
in rendering and plotting.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (CertificateFailure, ConditionViolated, NegativeIndicator,
                     NegativeVolume, UnsupportedCoordinate, ZeroGamma)
from .exact import (ExactReal, PrimeSet, RationalLike, ceil_exact, crt_coset,
                    factorize, padic_abs, padic_fractional_part,
                    padic_valuation)
from .solenoid import (AdeleVector, SolenoidPoint, as_lattice, is_minimal,
                       orbit)


# --- geometry -------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PAdicBall(object):
    """Closed ball {x in Q_p : v_p(x - center) >= -radius_exponent}.

    Radius p**radius_exponent; exponent 0 gives Z_p translates, negative
    exponents give congruence conditions, positive exponents allow
    denominators.  Haar measure is p**radius_exponent.
    """

    p: int
    center: Fraction
    radius_exponent: int

    def __post_init__(self):
        object.__setattr__(self, "center", Fraction(self.center))

    def contains(self, x: RationalLike) -> bool:
        return padic_valuation(Fraction(x) - self.center,
                               self.p) >= -self.radius_exponent

    def measure(self) -> Fraction:
        return Fraction(self.p) ** self.radius_exponent


@dataclass(frozen=True, slots=True)
class AdelicBox:
    """Product of a half-open real interval [lo, hi) and one p-adic ball
    per prime, ordered by prime."""

    lo: ExactReal
    hi: ExactReal
    balls: tuple[PAdicBall, ...]

    def __post_init__(self):
        ps = [ball.p for ball in self.balls]
        if ps != sorted(set(ps)):
            raise ValueError("balls must be sorted by distinct primes")
        if not self.lo < self.hi:
            raise ValueError("real interval must be nonempty")

    @property
    def primes(self) -> PrimeSet:
        return PrimeSet(ball.p for ball in self.balls)

    def volume(self) -> ExactReal:
        v = self.hi - self.lo
        for ball in self.balls:
            v = v * ball.measure()
        return v

    @classmethod
    def full_domain(cls, primes: Iterable[int]) -> "AdelicBox":
        balls = tuple(PAdicBall(p, Fraction(0), 0) for p in PrimeSet(primes))
        return cls(ExactReal(0), ExactReal(1), balls)

    def with_extra_primes(self, primes: Iterable[int]) -> "AdelicBox":
        """Same box seen inside a larger solenoid: new primes get the
        unit ball Z_p, which changes neither volume nor lift counts."""
        extra = [p for p in PrimeSet(primes) if p not in self.primes]
        balls = self.balls + tuple(
            PAdicBall(p, Fraction(0), 0) for p in extra)
        return AdelicBox(self.lo, self.hi,
                         tuple(sorted(balls, key=lambda b: b.p)))

    def serialize(self, weight: int) -> str:
        ball_part = " ".join(
            f"{b.p}:{b.center}:{b.radius_exponent}" for b in self.balls)
        return f"{weight} | {self.lo.exact_str()} | {self.hi.exact_str()} | {ball_part}"


@dataclass(frozen=True, slots=True)
class WeightedBoxSet:
    """Finite formal sum of adelic boxes with integer weights, plus the
    volume it claims to realize and a nonnegativity certificate.

    The certificate is an integer lower bound on the lift count of the
    positive terms wherever a negative term applies; it must dominate
    the total magnitude of negative weights.
    """

    terms: tuple[tuple[AdelicBox, int], ...]
    claimed_volume: ExactReal
    certificate: int = 0
    source_gamma: Fraction | None = None
    source_n: int | None = None

    def __post_init__(self):
        neg = sum(-w for _, w in self.terms if w < 0)
        if self.certificate < neg:
            raise CertificateFailure(
                f"certificate {self.certificate} below negative mass {neg}")
        if self.claimed_volume < 0:
            raise NegativeVolume(f"claimed volume {self.claimed_volume}")

    @property
    def primes(self) -> PrimeSet:
        for box, _ in self.terms:
            return box.primes
        return PrimeSet()

    def volume_consistent(self) -> bool:
        total = ExactReal(0)
        for box, w in self.terms:
            total = total + box.volume() * w
        return total == self.claimed_volume

    def with_extra_primes(self, primes: Iterable[int]) -> "WeightedBoxSet":
        return WeightedBoxSet(
            tuple((box.with_extra_primes(primes), w) for box, w in self.terms),
            self.claimed_volume, self.certificate,
            self.source_gamma, self.source_n)

    def serialize(self) -> str:
        return "\n".join(box.serialize(w) for box, w in self.terms)


@dataclass(frozen=True, slots=True)
class VolumeElement:
    """One allowable volume together with the (gamma, n) that realizes it."""

    gamma: Fraction
    n: int
    value: ExactReal


@dataclass(frozen=True, slots=True)
class BRSConstruction:
    """Full witness of one construction run.

    gamma is the reduced index +-(p_1*...*p_k)**(-ell); the target index
    gamma_input = copies * gamma.  lam = lam1/lam2 drives the box shape,
    box_scale is the integer M with prod_p |lam1 + lam2*alpha_p|_p = 1/M,
    and surplus counts the full-domain boxes added (negatively if the
    base boxes overshoot the target volume).
    """

    alpha: AdeleVector
    gamma_input: Fraction
    n_input: int
    xi_input: ExactReal
    sign: int
    ell: int
    gamma: Fraction
    n: int
    lam1: Fraction
    lam2: Fraction
    lam: Fraction
    box_scale: int
    xi: ExactReal
    base_box: AdelicBox
    copies: int
    surplus: int
    result: WeightedBoxSet


# --- volumes --------------------------------------------------------------


def allowable_volume(alpha: AdeleVector, gamma: RationalLike,
                     n: int) -> ExactReal:
    """xi = -gamma*alpha_real + sum_p {gamma*alpha_p}_p + n, exact."""
    g = as_lattice(gamma, alpha.primes).value
    xi = alpha.real * (-g) + n
    for p, ap in alpha.parts:
        xi = xi + padic_fractional_part(g * ap, p)
    return xi


def choose_n(alpha: AdeleVector, gamma: RationalLike) -> int:
    """Smallest integer n with xi(alpha, gamma, n) >= 0 that also keeps
    lambda distinct from every -alpha_p.

    For irrational alpha_real at most one n is excluded per prime, so
    the scan below terminates after at most |Q| + 1 candidates.
    """
    g = as_lattice(gamma, alpha.primes).value
    base = allowable_volume(alpha, g, 0)
    n = (-base).ceil()
    while _lambda_veto(alpha, g, n):
        n += 1
    return n


def _lambda_veto(alpha: AdeleVector, g: Fraction, n: int) -> bool:
    # lambda = -lam1/gamma equals -alpha_p iff lam1 = gamma * alpha_p
    if g == 0:
        return False
    lam1 = Fraction(n)
    for p, ap in alpha.parts:
        lam1 += padic_fractional_part(g * ap, p)
    return any(lam1 == g * ap for _, ap in alpha.parts)


def special_gamma(primes: PrimeSet, sign: int, ell: int) -> Fraction:
    """The reduced lattice index +-(p_1*...*p_k)**(-ell)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if ell < 1:
        raise ValueError("ell must be >= 1")
    radical = 1
    for p in primes:
        radical *= p
    return Fraction(sign, radical ** ell)


def enumerate_volumes(alpha: AdeleVector, bound: int) -> list[VolumeElement]:
    """All allowable volumes xi in [0, bound] whose index gamma has
    numerator magnitude <= bound and denominator exponents <= bound.

    Sorted by volume; exact comparisons throughout.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    out: list[VolumeElement] = []
    exps = range(bound + 1)
    for combo in itertools.product(exps, repeat=len(alpha.primes)):
        den = 1
        for p, e in zip(alpha.primes, combo):
            den *= p ** e
        for num in range(-bound, bound + 1):
            g = Fraction(num, den)
            if g.denominator != den:
                continue  # not in lowest terms; seen at a smaller exponent
            base = allowable_volume(alpha, g, 0)
            n = (-base).ceil()
            while True:
                xi = base + n
                if xi > bound:
                    break
                out.append(VolumeElement(g, n, xi))
                n += 1
    out.sort(key=lambda v: (v.value, v.gamma, v.n))
    return out


# --- construction ---------------------------------------------------------


def construct_base(alpha: AdeleVector, sign: int, ell: int,
                   n: int) -> BRSConstruction:
    """Build the single-box BRS for the reduced index
    gamma = +-(p_1*...*p_k)**(-ell) and offset n.

    The box is [0, M*|lam + alpha_real|) x prod_p Ball(0, |lam + alpha_p|_p)
    where lam = lam1/lam2, lam1 = sum_p {gamma*alpha_p}_p + n,
    lam2 = -gamma, and M is the integer with
    prod_p |lam1 + lam2*alpha_p|_p = 1/M.  Its volume is exactly xi and
    the product identity |lam + alpha_real| * prod_p |lam + alpha_p|_p
    = xi / M is checked before returning.
    """
    if not is_minimal(alpha):
        raise ValueError("rotation is not minimal; no BRS theory applies")
    g = special_gamma(alpha.primes, sign, ell)
    xi = allowable_volume(alpha, g, n)
    if xi < 0:
        raise NegativeVolume(f"xi = {xi} for n = {n}")
    lam1 = Fraction(n)
    for p, ap in alpha.parts:
        lam1 += padic_fractional_part(g * ap, p)
    lam2 = -g
    lam = lam1 / lam2

    box_scale = 1
    balls = []
    for p, ap in alpha.parts:
        z = lam1 + lam2 * ap
        if z == 0:
            raise ConditionViolated(f"lambda = -alpha_{p}")
        v = padic_valuation(z, p)
        if v < 0:
            raise ConditionViolated(
                f"lam1 + lam2*alpha_{p} is not {p}-integral")
        box_scale *= p ** v
        f = -padic_valuation(lam + ap, p)
        balls.append(PAdicBall(p, Fraction(0), f))

    real_len = abs(lam + alpha.real) * box_scale
    box = AdelicBox(ExactReal(0), real_len, tuple(balls))

    # exact consistency of the two volume formulas
    window = abs(lam + alpha.real)
    for p, ap in alpha.parts:
        window = window * padic_abs(lam + ap, p)
    if not window * box_scale == xi:
        raise ConditionViolated("volume identity failed")  # pragma: no cover

    result = WeightedBoxSet(((box, 1),), xi, 0, g, n)
    return BRSConstruction(
        alpha=alpha, gamma_input=g, n_input=n, xi_input=xi,
        sign=sign, ell=ell, gamma=g, n=n, lam1=lam1, lam2=lam2, lam=lam,
        box_scale=box_scale, xi=xi, base_box=box, copies=1, surplus=0,
        result=result)


def decompose_volume(alpha: AdeleVector, gamma: RationalLike,
                     n: int) -> tuple[int, int, int, int, int]:
    """Express the target volume xi' for (gamma, n) through the reduced
    index: returns (sign, ell, n0, copies, surplus) with

        gamma = copies * sign * (p_1*...*p_k)**(-ell),
        xi'  = copies * xi(sign, ell, n0) + surplus,  surplus an integer.

    ell is the smallest uniform exponent clearing every denominator of
    gamma (at least 1), and n0 = choose_n for the reduced index.
    """
    g = as_lattice(gamma, alpha.primes).value
    if g == 0:
        raise ZeroGamma("gamma = 0 has no reduced index")
    xi_target = allowable_volume(alpha, g, n)
    if xi_target < 0:
        raise NegativeVolume(f"xi' = {xi_target}")
    sign = 1 if g > 0 else -1
    ell = 1
    for p in alpha.primes:
        v = padic_valuation(g, p)
        if isinstance(v, int):
            ell = max(ell, -v)
    g0 = special_gamma(alpha.primes, sign, ell)
    copies = g / g0
    assert copies.denominator == 1 and copies > 0
    n0 = choose_n(alpha, g0)
    xi0 = allowable_volume(alpha, g0, n0)
    surplus_exact = xi_target - xi0 * int(copies)
    assert surplus_exact.is_integer()
    return sign, ell, n0, int(copies), surplus_exact.floor()


def construct_brs(alpha: AdeleVector, gamma: RationalLike,
                  n: int) -> WeightedBoxSet:
    """Bounded remainder set of volume xi(alpha, gamma, n) as a weighted
    box set; see construct_witness for the full audit trail."""
    g = as_lattice(gamma, alpha.primes).value
    if g == 0:
        if n < 0:
            raise NegativeVolume(f"xi' = {n} < 0")
        if n == 0:
            return WeightedBoxSet((), ExactReal(0), 0, g, n)
        full = AdelicBox.full_domain(alpha.primes)
        return WeightedBoxSet(((full, n),), ExactReal(n), 0, g, n)
    return construct_witness(alpha, g, n).result


def construct_witness(alpha: AdeleVector, gamma: RationalLike,
                      n: int) -> BRSConstruction:
    """Like construct_brs but returns the full construction witness.

    copies base boxes are fused into one box with the real edge scaled
    by copies; a (possibly negative) number of full-domain boxes tops
    the volume up to the target.  Negative full-box weight is certified
    by the exact floor of the fused box volume, which lower-bounds its
    lift count at every point of the solenoid.
    """
    g = as_lattice(gamma, alpha.primes).value
    sign, ell, n0, copies, surplus = decompose_volume(alpha, g, n)
    base = construct_base(alpha, sign, ell, n0)
    fused = AdelicBox(base.base_box.lo,
                      base.base_box.lo
                      + (base.base_box.hi - base.base_box.lo) * copies,
                      base.base_box.balls)
    xi_target = allowable_volume(alpha, g, n)
    terms: list[tuple[AdelicBox, int]] = [(fused, 1)]
    certificate = 0
    if surplus != 0:
        terms.append((AdelicBox.full_domain(alpha.primes), surplus))
    if surplus < 0:
        certificate = fused.volume().floor()
        if certificate < -surplus:  # pragma: no cover
            raise CertificateFailure(
                f"floor(|B'|) = {certificate} < {-surplus}")
    result = WeightedBoxSet(tuple(terms), xi_target, certificate, g, n)
    return BRSConstruction(
        alpha=alpha, gamma_input=g, n_input=n, xi_input=xi_target,
        sign=sign, ell=ell, gamma=base.gamma, n=n0, lam1=base.lam1,
        lam2=base.lam2, lam=base.lam, box_scale=base.box_scale, xi=base.xi,
        base_box=base.base_box, copies=copies, surplus=surplus, result=result)


# --- counting and certification -------------------------------------------


def count_coset_in_interval(c: RationalLike, delta: RationalLike,
                            lo, hi) -> int:
    """Number of lattice translates c + a*delta, a in Z, falling in the
    half-open real interval [lo, hi).  Endpoints may be ExactReal."""
    c, delta = Fraction(c), Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    return max(0, ceil_exact((hi - c) / delta) - ceil_exact((lo - c) / delta))


def box_lift_count(box: AdelicBox, x: SolenoidPoint) -> int:
    """Number of lattice elements gamma with x + gamma inside the box.

    The p-adic ball conditions pin gamma to a single rational coset,
    found by modular-inverse CRT; the real interval then counts it.
    """
    cons = [(ball.p, ball.radius_exponent, ball.center - x.part(ball.p))
            for ball in box.balls]
    c, delta = crt_coset(cons)
    return count_coset_in_interval(c, delta, box.lo - x.real,
                                   box.hi - x.real)


def multiplicity(boxset: WeightedBoxSet, x: SolenoidPoint) -> int:
    """Weighted lift count of the point across all terms; this is the
    multiset indicator the discrepancy sums."""
    total = 0
    for box, w in boxset.terms:
        total += w * box_lift_count(box, x)
    if total < 0:
        raise NegativeIndicator(f"indicator {total} at {x!r}")
    return total


@dataclass(frozen=True, slots=True)
class DiscrepancyRecord:
    n: int
    value: ExactReal
    running_sup: ExactReal


@dataclass(frozen=True, slots=True)
class DiscrepancySummary:
    records: tuple[DiscrepancyRecord, ...]
    sup: ExactReal
    sup_at: int


def discrepancy_series(boxset: WeightedBoxSet, alpha: AdeleVector,
                       x0: SolenoidPoint,
                       checkpoints: Sequence[int]) -> DiscrepancySummary:
    """Exact discrepancy D_N = sum_{k<N} chi(x_k) - N*|A| along the
    orbit of x0, reported at the given checkpoints.

    running_sup is the maximum of |D_M| over all M <= N, not only over
    checkpoints, and sup_at records where it was attained.
    """
    checkpoints = sorted(set(checkpoints))
    if not checkpoints or checkpoints[0] < 1:
        raise ValueError("checkpoints must be positive integers")
    goal = checkpoints[-1]
    marks = set(checkpoints)
    vol = boxset.claimed_volume
    acc = 0
    sup = ExactReal(0)
    sup_at = 0
    records = []
    for k, x in enumerate(orbit(alpha, x0, goal)):
        acc += multiplicity(boxset, x)
        n = k + 1
        d = vol * (-n) + acc
        ad = abs(d)
        if ad > sup:
            sup, sup_at = ad, n
        if n in marks:
            records.append(DiscrepancyRecord(n, d, sup))
    return DiscrepancySummary(tuple(records), sup, sup_at)


def character_volume_identity(boxset: WeightedBoxSet,
                              alpha: AdeleVector) -> bool:
    """Exact check that the claimed volume is allowable for the indices
    the set was built from: |A| + gamma*alpha_real - sum_p
    {gamma*alpha_p}_p must be an integer."""
    if boxset.source_gamma is None:
        raise ValueError("box set carries no construction indices")
    g = boxset.source_gamma
    z = boxset.claimed_volume + alpha.real * g
    for p, ap in alpha.parts:
        z = z - padic_fractional_part(g * ap, p)
    return z.is_integer()


# --- reduction from infinite prime sets ------------------------------------


@dataclass(frozen=True, slots=True)
class SparseAdele:
    """A rotation on the full adelic torus (all primes), given by its
    real coordinate, the finitely many non-integral or otherwise
    explicit p-adic coordinates, and a pledge that every remaining
    coordinate is p-integral (taken to be 0)."""

    real: ExactReal
    support: tuple[tuple[int, Fraction], ...]
    default_integral: bool = True

    def __init__(self, real, support=(), default_integral=True):
        if not isinstance(real, ExactReal):
            real = ExactReal.from_rational(real)
        items = dict(support)
        packed = tuple(
            (p, Fraction(items[p])) for p in PrimeSet(items))
        object.__setattr__(self, "real", real)
        object.__setattr__(self, "support", packed)
        object.__setattr__(self, "default_integral", default_integral)

    def coordinate(self, p: int) -> Fraction:
        for q, x in self.support:
            if q == p:
                return x
        return Fraction(0)


def reduce_to_finite(alpha: SparseAdele, gamma: RationalLike) -> PrimeSet:
    """The finite prime set that carries all of the construction data
    for (alpha, gamma): primes where either |alpha_p|_p > 1 or
    |gamma|_p > 1.  Outside it every fractional part in the volume
    series vanishes, so the BRS problem restricts losslessly."""
    if not alpha.default_integral:
        raise UnsupportedCoordinate(
            "cannot certify undeclared coordinates without the "
            "integrality pledge")
    g = Fraction(gamma)
    candidates = {p for p, _ in alpha.support}
    candidates.update(factorize(g.denominator) if g.denominator > 1 else {})
    keep = [p for p in candidates
            if padic_abs(alpha.coordinate(p), p) > 1 or padic_abs(g, p) > 1]
    return PrimeSet(keep)


def restrict(alpha: SparseAdele, primes: Iterable[int]) -> AdeleVector:
    """Finite-dimensional view of a sparse rotation."""
    ps = PrimeSet(primes)
    return AdeleVector(ps, alpha.real, {p: alpha.coordinate(p) for p in ps})
