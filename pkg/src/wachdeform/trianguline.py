"""Character-side machinery: the psi interpolation map, evaluation of the
trianguline parameter characters, hypothesis (*), the weight-direction first
reduction, and the Lipschitz estimate for ball-norm-bounded series.

Everything here is exact p-adic arithmetic at a tracked cap.  The two maps
that matter are

  psi_alpha(s) = alpha^s = exp_p(s log_p alpha)      (alpha in 1 + pZ_p, s in Z_p)

evaluated redundantly (exp/log route and binomial route, compared digit for
digit), and the rank-one parameter character

  delta^(s)(x) = mu_{1/a_p}(x) * omega(x)^(1-k) * psi_{<x>}(s)

whose specialization at s = 1 - k collapses to mu_{1/a_p} * chi^(1-k) -- the
identity the weight-side argument pivots on.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .deform import deform_trace, DeformCertificate
from .errors import (
    DomainError,
    InexactDivision,
    NonpositiveValuation,
    NormViolation,
    PreconditionFails,
    PrecisionExhausted,
    ZeroInput,
)
from .padics import (
    PadicElt,
    PadicParams,
    QpMultChar,
    ScaledElt,
    binom_coeffs,
    pexp,
    plog,
    teichmuller_decompose,
    val,
)
from .wach import WachData

__all__ = [
    "CoeffBoundReport",
    "LipschitzReport",
    "PsiMap",
    "TriCharacter",
    "char_eval",
    "coeff_bound_check",
    "hypothesis_star",
    "lipschitz_check",
    "psi_eval",
    "radius_to_level",
    "sample_ball_pairs",
    "weight_step",
]


def _require_angle(alpha: PadicElt) -> None:
    """alpha must lie in 1 + pZ_p (valuation of alpha - 1 at least 1)."""
    z = alpha - PadicElt.one(alpha.params, alpha.cap)
    v = z.valpi()
    if v is not None and v < alpha.params.e:
        raise DomainError(
            f"argument not in 1 + pZ_p: v(alpha - 1) = {Fraction(v, alpha.params.e)}"
        )


def _as_zp(params: PadicParams, s) -> PadicElt:
    """Coerce an exponent (element, integer, or rational in Z_p) to an element."""
    if isinstance(s, PadicElt):
        return s
    q = Fraction(s)
    try:
        return ScaledElt.from_rational(params, q).to_padic()
    except InexactDivision:
        raise DomainError(f"exponent {q} is not in Z_p (denominator divisible by p)")


# --------------------------------------------------------------------------- #
# psi_alpha
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class PsiMap:
    """alpha^s as the entire series sum c_n s^n with c_n = (log_p alpha)^n / n!."""

    alpha: PadicElt
    log_alpha: PadicElt
    coeffs: tuple[PadicElt, ...]

    @classmethod
    def build(cls, alpha: PadicElt, n_max: int) -> "PsiMap":
        _require_angle(alpha)
        la = plog(alpha)
        coeffs = [PadicElt.one(alpha.params)]
        cur = ScaledElt(PadicElt.one(alpha.params))
        for n in range(1, n_max + 1):
            cur = cur.mul(ScaledElt(la)).div_int(n)
            if not cur.is_zero_at_floor() and cur.exp < 0:
                raise NormViolation(
                    f"|c_{n}| > 1: the interpolation series leaves the unit ball"
                )
            coeffs.append(cur.to_padic())
        return cls(alpha=alpha, log_alpha=la, coeffs=tuple(coeffs))

    def eval_at(self, s: PadicElt) -> PadicElt:
        acc = PadicElt.zero(s.params)
        spow = PadicElt.one(s.params)
        for n, c in enumerate(self.coeffs):
            if n:
                spow = spow * s
            acc = acc + c * spow
        return acc


def psi_eval(alpha: PadicElt, s) -> PadicElt:
    """alpha^s by both the exp/log route and the binomial series.

    The two evaluations must agree at the shared cap; the returned element
    carries that cap.  alpha must lie in 1 + pZ_p and s in Z_p.
    """
    params = alpha.params
    _require_angle(alpha)
    s = _as_zp(params, s)

    la = plog(alpha)
    exp_path = pexp(s * la)

    z = alpha - PadicElt.one(params, alpha.cap)
    t = z.valpi()
    if t is None:
        bin_path = PadicElt.one(params, z.cap)
    else:
        n_terms = params.prec_pi // t + 1
        bc = binom_coeffs(s, n_terms)
        acc = PadicElt.one(params)
        zpow = PadicElt.one(params)
        for n in range(1, n_terms + 1):
            zpow = zpow * z
            acc = acc + bc[n] * zpow
        bin_path = acc

    if not exp_path.same_at_cap(bin_path):
        raise PrecisionExhausted(
            "exp/log and binomial evaluations of alpha^s disagree at cap"
        )
    out = exp_path.reduce_cap(min(exp_path.cap, bin_path.cap))
    one = PadicElt.one(params, out.cap)
    if (out - one).is_unit():
        raise PrecisionExhausted("alpha^s drifted outside 1 + pZ_p")
    return out


@dataclass(frozen=True)
class CoeffBoundReport:
    """Outcome of the unit-ball estimate on the interpolation coefficients."""

    alpha_lift: int
    n_max: int
    min_coeff_val: Fraction
    nonneg: bool
    strict_from_1: bool
    gouvea_ok: bool
    samples: int
    seed: int

    @property
    def ok(self) -> bool:
        return self.nonneg and self.gouvea_ok


def coeff_bound_check(
    alpha: PadicElt, n_max: int, samples: int = 8, seed: int = 0
) -> CoeffBoundReport:
    """Verify v(c_n) >= 0 up to n_max, plus the term-versus-sum domination
    |c_n s^n| <= |psi_alpha(s)| on sampled s in Z_p (composition criterion)."""
    params = alpha.params
    psi = PsiMap.build(alpha, n_max)
    vals = []
    for n, c in enumerate(psi.coeffs):
        v = c.valpi()
        vals.append(Fraction(v if v is not None else c.cap, params.e))
    nonneg = all(v >= 0 for v in vals)
    strict = all(v >= 1 for v in vals[1:])

    rng = random.Random(seed)
    gouvea_ok = True
    for _ in range(samples):
        s = PadicElt.from_int(params, rng.randrange(params.p ** (params.prec_pi // params.e)))
        g_val = val(psi.eval_at(s)) or Fraction(0)
        spow = PadicElt.one(params)
        for n, c in enumerate(psi.coeffs):
            if n:
                spow = spow * s
            term = c * spow
            tv = term.valpi()
            if tv is not None and Fraction(tv, params.e) < g_val:
                gouvea_ok = False
    return CoeffBoundReport(
        alpha_lift=alpha.lift_int(),
        n_max=n_max,
        min_coeff_val=min(vals),
        nonneg=nonneg,
        strict_from_1=strict,
        gouvea_ok=gouvea_ok,
        samples=samples,
        seed=seed,
    )


# --------------------------------------------------------------------------- #
# the parameter character delta^(s)
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class TriCharacter:
    """delta^(s) = mu_{1/a_p} * omega^(1-k) * psi_{< . >}(s) on Q_p^x."""

    k: int
    a_p: PadicElt
    s: PadicElt

    def __post_init__(self) -> None:
        if self.k < 2:
            raise DomainError(f"weight must be at least 2, got {self.k}")
        if self.a_p.is_zero_at_cap():
            raise ZeroInput("mu_{1/a_p} undefined for a_p = 0")

    @property
    def mu(self) -> QpMultChar:
        inv = ScaledElt(PadicElt.one(self.a_p.params)).div(ScaledElt(self.a_p))
        return QpMultChar(kind="mu", z=inv)

    @property
    def omega_power(self) -> QpMultChar:
        return QpMultChar(kind="omega_power", exponent=1 - self.k)


def char_eval(chr_: TriCharacter, x: PadicElt, vp_shift: int = 0) -> ScaledElt:
    """Evaluate delta^(s) at x * p^vp_shift (the shift encodes denominators).

    The value lives in E^x, not O_E, whenever x carries a p-power and a_p is
    not a unit, so the result is a scaled element.
    """
    params = x.params
    vx = x.valpi()
    if vx is None:
        raise ZeroInput("character undefined at zero")
    if vx % params.e:
        raise DomainError("argument is not in Q_p (fractional valuation)")
    t = vx // params.e + vp_shift
    _, omega, angle = teichmuller_decompose(x)
    inv_ap = ScaledElt(PadicElt.one(params)).div(ScaledElt(chr_.a_p))
    mu_val = inv_ap.power(t)
    om_val = omega ** ((1 - chr_.k) % (params.p - 1))
    psi_val = psi_eval(angle, chr_.s)
    return mu_val.mul(ScaledElt(om_val)).mul(ScaledElt(psi_val))


# --------------------------------------------------------------------------- #
# hypothesis (*) and the weight-direction step
# --------------------------------------------------------------------------- #

def hypothesis_star(p: int, v_ap, m) -> int:
    """Smallest weight k with k >= (3 v(a_p) + m)(1 - p/(p-1)^2)^{-1} + 1."""
    v_ap, m = Fraction(v_ap), Fraction(m)
    if v_ap <= 0:
        raise NonpositiveValuation(f"(*) needs v(a_p) > 0, got {v_ap}")
    if m <= 0:
        raise NonpositiveValuation(f"(*) needs m > 0, got {m}")
    denom = 1 - Fraction(p, (p - 1) ** 2)
    if denom <= 0:
        raise DomainError(f"(*) is vacuous for p = {p}: 1 - p/(p-1)^2 <= 0")
    threshold = (3 * v_ap + m) / denom + 1
    return math.ceil(threshold)


def weight_step(w: WachData, m) -> tuple[WachData, DeformCertificate]:
    """One step along the weight direction: deform a_p to a_p + p^(k-1)/a_p.

    Refused outright unless hypothesis (*) holds for (k, v(a_p), m); under (*)
    the perturbation has v(eps) = k - 1 - v(a_p), which the delegated
    deformation re-checks against its own bound.
    """
    params = w.params
    v_ap = val(w.a_p)
    if v_ap is None:
        raise ZeroInput("weight step undefined at a_p = 0 (v(eps) would be infinite)")
    k_min = hypothesis_star(params.p, v_ap, Fraction(m))
    if w.k < k_min:
        raise PreconditionFails(
            f"(*) fails: k = {w.k} < {k_min} for (p, v(a_p), m) = "
            f"({params.p}, {v_ap}, {m})"
        )
    pk = ScaledElt(PadicElt.one(params), params.e * (w.k - 1))
    eps = pk.div(ScaledElt(w.a_p)).to_padic()
    return deform_trace(w, w.a_p + eps, m)


# --------------------------------------------------------------------------- #
# Lipschitz estimate on the ball |x| <= p^(-r)
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class LipschitzReport:
    """Sampled verification of |g(x) - g(y)| <= p^r |g|_r |x - y|."""

    r: int
    norm_val: Fraction        # v-adic reading of |g|_r (>= 0 means norm <= 1)
    pairs: int
    degenerate_pairs: int     # x = y at cap: inequality vacuous
    sharpest: Fraction | None  # min of v(g(x)-g(y)) - (v(x-y) - r); None if all vacuous
    equality_attained: bool

    @property
    def ok(self) -> bool:
        return self.sharpest is None or self.sharpest >= 0


def sample_ball_pairs(
    params: PadicParams, r: int, count: int, seed: int = 0
) -> list[tuple[PadicElt, PadicElt]]:
    """Random pairs in p^r Z_p for feeding lipschitz_check."""
    rng = random.Random(seed)
    span = params.p ** max(params.prec_pi // params.e - r, 1)
    out = []
    for _ in range(count):
        x = PadicElt.from_int(params, params.p ** r * rng.randrange(span))
        y = PadicElt.from_int(params, params.p ** r * rng.randrange(span))
        out.append((x, y))
    return out


def lipschitz_check(
    params: PadicParams,
    coeffs,
    r: int,
    samples,
) -> LipschitzReport:
    """Check v(g(x) - g(y)) >= v(x - y) - r over the sampled pairs.

    g is given by finitely many exact rational coefficients a_n (a_0 first)
    subject to the ball-norm bound |g|_r <= 1, i.e. v(a_n) + r n >= 0 for all
    n; the sample points must lie in p^r Z_p.
    """
    if r < 0:
        raise DomainError(f"ball exponent must be nonnegative, got {r}")
    scaled = [ScaledElt.from_rational(params, Fraction(a)) for a in coeffs]
    weighted: list[Fraction] = []
    for n, a in enumerate(scaled):
        if a.is_zero_at_floor():
            continue
        va = Fraction(a.valpi(), params.e)
        if va + r * n < 0:
            raise NormViolation(
                f"|g|_r > 1: coefficient a_{n} has v = {va} < {-r * n}"
            )
        weighted.append(va + Fraction(r * n))
    norm_val = min(weighted) if weighted else Fraction(0)

    def g_at(x: PadicElt) -> PadicElt:
        acc = PadicElt.zero(params)
        xpow = ScaledElt(PadicElt.one(params))
        for n, a in enumerate(scaled):
            if n:
                xpow = xpow.mul(ScaledElt(x))
            if a.is_zero_at_floor():
                continue
            acc = acc + a.mul(xpow).to_padic()
        return acc

    sharpest: Fraction | None = None
    degenerate = 0
    total = 0
    equality = False
    for x, y in samples:
        for pt in (x, y):
            vpt = pt.valpi()
            if vpt is not None and vpt < params.e * r:
                raise DomainError(
                    f"sample point has |.| > p^-{r}: v = {Fraction(vpt, params.e)}"
                )
        total += 1
        diff_in = x - y
        v_in = diff_in.valpi()
        if v_in is None:
            degenerate += 1
            continue
        diff_out = g_at(x) - g_at(y)
        v_out = diff_out.valpi_or_cap()
        slack = Fraction(v_out - v_in, params.e) + r
        if sharpest is None or slack < sharpest:
            sharpest = slack
        if slack == 0 and not diff_out.is_zero_at_cap():
            equality = True
    return LipschitzReport(
        r=r,
        norm_val=norm_val,
        pairs=total,
        degenerate_pairs=degenerate,
        sharpest=sharpest,
        equality_attained=equality,
    )


# --------------------------------------------------------------------------- #
# radius-to-level bookkeeping
# --------------------------------------------------------------------------- #

def radius_to_level(r: int, m) -> Fraction:
    """The level n = m + r: weights k' = k mod p^(m+r)(p-1) land mod p^m."""
    if r < 1:
        raise DomainError(f"radius exponent must be a positive integer, got {r}")
    m = Fraction(m)
    if m <= 0:
        raise NonpositiveValuation(f"level must be positive, got {m}")
    return m + r
