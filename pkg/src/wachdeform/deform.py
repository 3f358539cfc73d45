"""Trace deformation of Wach-module data with machine-checkable certificates.

The pipeline implemented here takes a verified module (P, G), a target trace
a'_p congruent to a_p deep enough p-adically, and produces a deformed pair
(P', G') together with a certificate recording every valuation the congruence
argument leans on:

  1. ``alpha`` tabulates the precision tax of the Gamma-recursion,
     alpha(r) = sum_{j<=r} v(1 - chi(gamma)^j).
  2. ``build_h0`` finds a constant H0 with det(Id + H0) = 1 and
     Tr(H0 P(0)) = a'_p - a_p.
  3. ``extend_h`` grows H0 to a polynomial H of degree < k with
     H G = G gamma(H) mod x^k.
  4. ``correct_gamma`` repairs the Gamma-matrix so that (P', G') with
     P' = (Id + H) P satisfies the commutation relation to full x-precision.

Every division is exact with tracked caps; when a theoretical valuation floor
cannot be certified at the working precision the pipeline aborts rather than
emit an under-precise verdict.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BoundViolated,
    DefectNotDivisible,
    DomainError,
    InexactDivision,
    NeumannDivergence,
    NotAGenerator,
    PreconditionFails,
    PrecisionExhausted,
    SlopesNotDistinct,
    ValuationFloorUnreachable,
)
from .padics import PadicElt, hensel_root, val_or_cap
from .series import Mat2, MatrixSeries, cyclotomic_q, mat_frobenius, mat_gamma
from .wach import WachData, check_axioms

__all__ = [
    "AlphaTable",
    "DeformCertificate",
    "alpha",
    "build_h0",
    "converse_bound",
    "correct_gamma",
    "default_chi",
    "deform_trace",
    "diagonalize",
    "extend_h",
    "is_generator",
    "precision_default",
    "precision_floor",
]


# --------------------------------------------------------------------------- #
# the alpha function
# --------------------------------------------------------------------------- #

def is_generator(p: int, chi_gamma: int) -> bool:
    """chi generates Z_p^x: full order mod p and no premature triviality mod p^2."""
    if chi_gamma < 2 or chi_gamma % p == 0:
        return False
    order = 1
    acc = chi_gamma % p
    while acc != 1:
        acc = acc * chi_gamma % p
        order += 1
        if order > p:
            return False
    if order != p - 1:
        return False
    return pow(chi_gamma, p - 1, p * p) != 1


def default_chi(p: int) -> int:
    """Smallest integer generator of Z_p^x (2 for p = 3 and 5, 3 for p = 7)."""
    c = 2
    while not is_generator(p, c):
        c += 1
        if c > p * p:  # unreachable for prime p, defensive only
            raise NotAGenerator(f"no generator below {p * p} for p = {p}")
    return c


def _vp_int(n: int, p: int) -> int:
    if n == 0:
        raise ZeroDivisionError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class AlphaTable:
    """alpha(1..r_max) with the per-step valuations v(1 - chi^j)."""

    p: int
    chi_gamma: int
    steps: tuple[int, ...]   # steps[j-1] = v(1 - chi^j)
    values: tuple[int, ...]  # values[j-1] = alpha(j)

    @property
    def r_max(self) -> int:
        return len(self.values)

    def value(self, r: int) -> int:
        if r == 0:
            return 0
        if not 1 <= r <= self.r_max:
            raise DomainError(f"alpha({r}) outside tabulated range 1..{self.r_max}")
        return self.values[r - 1]


def _alpha_floor_formula(p: int, r: int) -> int:
    total, modulus = 0, p - 1
    while modulus <= r:
        total += r // modulus
        modulus *= p
    return total


def alpha(p: int, r: int, chi_gamma: int) -> AlphaTable:
    """Tabulate alpha(1..r), cross-checking the product and floor formulas."""
    if r < 1:
        raise DomainError(f"alpha needs r >= 1, got {r}")
    if not is_generator(p, chi_gamma):
        raise NotAGenerator(
            f"chi(gamma) = {chi_gamma} does not topologically generate Z_{p}^x"
        )
    steps: list[int] = []
    values: list[int] = []
    total = 0
    chi_pow = 1
    for j in range(1, r + 1):
        chi_pow *= chi_gamma
        step = _vp_int(chi_pow - 1, p)
        total += step
        steps.append(step)
        values.append(total)
        floor_total = _alpha_floor_formula(p, j)
        if floor_total != total:
            raise DomainError(
                f"alpha({j}) mismatch: product form {total}, floor form {floor_total}"
            )
        if Fraction(total) > Fraction(j * p, (p - 1) ** 2):
            raise DomainError(f"alpha({j}) = {total} exceeds {j}p/(p-1)^2")
    return AlphaTable(p=p, chi_gamma=chi_gamma, steps=tuple(steps), values=tuple(values))


# --------------------------------------------------------------------------- #
# precision budget
# --------------------------------------------------------------------------- #

def precision_floor(e: int, k: int, m: Fraction, alpha_k1: int) -> int:
    """Minimum admissible cap: e * (m + 2 alpha(k-1) + k + 8)."""
    return math.ceil(e * (m + 2 * alpha_k1 + k + 8))


def precision_default(
    p: int, e: int, k: int, m: Fraction, alpha_k1: int, nx: int
) -> int:
    """Floor plus headroom for the per-order drift of the solvers."""
    drift = 2 * (k - 1) ** 2 + math.ceil(nx / (p - 1)) + 8
    return precision_floor(e, k, m, alpha_k1) + e * drift


# --------------------------------------------------------------------------- #
# eigenbasis machinery
# --------------------------------------------------------------------------- #

def diagonalize(p0: Mat2) -> tuple[Mat2, PadicElt, PadicElt, PadicElt]:
    """Split P0 into eigenvalues of distinct slope: returns (Y, lambda, mu, delta).

    Y has a unit entry in each column and det(Y) of valuation <= v(delta), so
    Y^{-1} = adj(Y)/det(Y) has entries of valuation >= -v(delta).
    """
    t, d = p0.trace(), p0.det()
    vt, vd = t.valpi(), d.valpi_or_cap()
    if vt is None or 2 * vt >= vd:
        raise SlopesNotDistinct(
            f"char poly slopes not separated: 2 v(tr) = {2 * vt if vt is not None else 'inf'}"
            f" vs v(det) = {vd} (pi-units)"
        )
    lam = hensel_root(-t, d, t)
    mu = t - lam
    delta = lam - mu

    def eigencol(theta: PadicElt) -> tuple[PadicElt, PadicElt]:
        candidates = [
            (p0.b, theta - p0.a),
            (theta - p0.d, p0.c),
        ]
        for e1, e2 in candidates:
            if e1.is_zero_at_cap() and e2.is_zero_at_cap():
                continue
            pivot = e1 if e1.valpi_or_cap() <= e2.valpi_or_cap() else e2
            return e1.divide_exact(pivot), e2.divide_exact(pivot)
        raise PrecisionExhausted("eigenvector entries all vanish at cap")

    y1a, y1c = eigencol(lam)
    y2a, y2c = eigencol(mu)
    y = Mat2(y1a, y2a, y1c, y2c)
    dy = y.det()
    if dy.valpi_or_cap() > delta.valpi_or_cap():
        raise PrecisionExhausted(
            f"eigenbasis determinant too small: v = {dy.valpi_or_cap()} pi-units"
        )
    # conjugation check: adj(Y) P0 Y / det(Y) must be diag(lambda, mu)
    conj = y.adj() * p0 * y
    lam_chk = conj.a.divide_exact(dy) - lam
    mu_chk = conj.d.divide_exact(dy) - mu
    off = [conj.b, conj.c]
    if not (lam_chk.is_zero_at_cap() and mu_chk.is_zero_at_cap()):
        raise PrecisionExhausted("conjugation drifted off the eigenvalues")
    if not all(x.divide_exact(dy).is_zero_at_cap() for x in off):
        raise PrecisionExhausted("conjugation left off-diagonal residue")
    return y, lam, mu, delta


def _is_companion(p0: Mat2) -> bool:
    one = PadicElt.from_int(p0.a.params, 1)
    return p0.a.is_zero_at_cap() and (p0.b + one).is_zero_at_cap()


def build_h0(p0: Mat2, eps: PadicElt, floor: Fraction) -> Mat2:
    """Constant seed of the deformation: det(Id+H0) = 1, Tr(H0 P0) = eps.

    Companion P0 admits the loss-free triangular solution ((0,0),(-eps,0));
    otherwise the equation is solved in the eigenbasis, where it becomes a
    quadratic in one diagonal entry, and conjugated back.
    """
    params = eps.params
    if eps.is_zero_at_cap():
        return Mat2.zero(params)
    v_eps = val_or_cap(eps)

    if _is_companion(p0):
        if v_eps < floor:
            raise ValuationFloorUnreachable(
                f"v(eps) = {v_eps} below the floor {floor}"
            )
        h0 = Mat2(
            PadicElt.zero(params), PadicElt.zero(params),
            -eps, PadicElt.zero(params),
        )
    else:
        y, lam, mu, delta = diagonalize(p0)
        if v_eps < 2 * val_or_cap(delta) + floor:
            raise ValuationFloorUnreachable(
                f"v(eps) = {v_eps} below 2 v(delta) + floor = "
                f"{2 * val_or_cap(delta) + floor}"
            )
        # diagonal ansatz diag(a, b), b = -a/(1+a): with u = lambda a the trace
        # condition becomes u^2 + (delta - eps) u - eps lambda = 0
        c1 = delta - eps
        c0 = -(eps * lam)
        seed = (-c0).divide_exact(c1)
        u = hensel_root(c1, c0, seed)
        a = u.divide_exact(lam)
        one = PadicElt.from_int(params, 1)
        b = (-a).div_unit(one + a)
        m = y * Mat2(a, PadicElt.zero(params), PadicElt.zero(params), b) * y.adj()
        dy = y.det()
        try:
            h0 = Mat2(*(x.divide_exact(dy) for x in m.entries()))
        except InexactDivision as exc:  # theory says this cannot happen
            raise PrecisionExhausted(f"eigenbasis descent lost integrality: {exc}")

    one = PadicElt.from_int(params, 1)
    identity = Mat2.identity(params)
    if not ((identity + h0).det() - one).is_zero_at_cap():
        raise PrecisionExhausted("det(Id + H0) - 1 does not vanish at cap")
    if not ((h0 * p0).trace() - eps).is_zero_at_cap():
        raise PrecisionExhausted("Tr(H0 P0) - eps does not vanish at cap")
    got = Fraction(h0.min_val_or_cap(), params.e)
    if got < floor:
        raise ValuationFloorUnreachable(
            f"H0 valuation {got} below the required floor {floor}"
        )
    return h0


# --------------------------------------------------------------------------- #
# the Gamma-recursion mod x^k
# --------------------------------------------------------------------------- #

def _gamma_x_coeffs(chi_gamma: int, k: int) -> list[list[int]]:
    """Integer coefficient table g[n][h] = [x^h] ((1+x)^chi - 1)^n for n, h < k."""
    base = [math.comb(chi_gamma, j) if 1 <= j <= chi_gamma else 0 for j in range(k)]
    table = [[1] + [0] * (k - 1)]
    for _ in range(1, k):
        prev = table[-1]
        nxt = [0] * k
        for i, ci in enumerate(prev):
            if ci == 0:
                continue
            for j in range(1, k - i):
                if base[j]:
                    nxt[i + j] += ci * base[j]
        table.append(nxt)
    return table


def extend_h(
    h0: Mat2,
    g: MatrixSeries,
    k: int,
    m: Fraction,
    table: AlphaTable,
) -> MatrixSeries:
    """Grow H0 to H = H0 + x H_1 + ... + x^{k-1} H_{k-1} with HG = G gamma(H) mod x^k.

    Each step divides by (1 - chi^r), spending exactly table.steps[r-1] of
    precision; the output is checked against the asserted per-step floors
    v(H_r) >= alpha(k-1) - alpha(r) + m and re-verified by brute expansion.
    """
    params = g.params
    chi = table.chi_gamma
    alpha_k1 = table.value(k - 1)
    if Fraction(h0.min_val_or_cap(), params.e) < alpha_k1 + m:
        raise ValuationFloorUnreachable(
            f"H0 must sit above p^(alpha(k-1)+m) = p^{alpha_k1 + m}"
        )
    if not (g.eval0() - Mat2.identity(params)).is_zero_at_cap():
        raise DomainError("gamma-matrix must be Id mod x")

    gx = _gamma_x_coeffs(chi, k)
    hs: list[Mat2] = [h0]
    for r in range(1, k):
        rhs = Mat2.zero(params)
        for h in range(r):
            inner = Mat2.zero(params)
            for n in range(h + 1):
                if gx[n][h]:
                    inner = inner + hs[n].scale(PadicElt.from_int(params, gx[n][h]))
            rhs = rhs + g.coeff(r - h) * inner
        for n in range(r):
            if gx[n][r]:
                rhs = rhs + hs[n].scale(PadicElt.from_int(params, gx[n][r]))
        for i in range(r):
            rhs = rhs - hs[i] * g.coeff(r - i)
        divisor = PadicElt.from_int(params, 1 - chi**r)
        try:
            hr = Mat2(*(x.divide_exact(divisor) for x in rhs.entries()))
        except InexactDivision as exc:
            raise PrecisionExhausted(
                f"step {r}: division by 1 - chi^{r} left the integral ring: {exc}"
            )
        hs.append(hr)
        floor_r = Fraction(alpha_k1 - table.value(r)) + m
        got = Fraction(hr.min_val_or_cap(), params.e)
        if Fraction(hr.min_cap(), params.e) < floor_r:
            raise PrecisionExhausted(
                f"step {r}: cap {Fraction(hr.min_cap(), params.e)} cannot certify "
                f"the floor {floor_r}"
            )
        if got < floor_r:
            raise ValuationFloorUnreachable(
                f"step {r}: v(H_{r}) = {got} below the floor {floor_r}"
            )
    hs.extend(Mat2.zero(params) for _ in range(g.nx - k))
    h = MatrixSeries.from_mats(params, hs[: g.nx], g.nx)

    # brute re-expansion: the defining congruence must vanish below x^k
    defect = h * g - g * mat_gamma(h, chi)
    for j in range(min(k, g.nx)):
        if not defect.coeff(j).is_zero_at_cap():
            raise PrecisionExhausted(
                f"recursion output fails HG = G gamma(H) at order {j}"
            )
    return h


# --------------------------------------------------------------------------- #
# Gamma-matrix correction to full x-precision
# --------------------------------------------------------------------------- #

def correct_gamma(
    pp: MatrixSeries,
    g: MatrixSeries,
    k: int,
    chi_gamma: int,
    m: Fraction,
    nx: int | None = None,
) -> tuple[MatrixSeries, tuple[tuple[int, Fraction], ...]]:
    """Repair G order by order so that (P', G') commute to full x-precision.

    Carries the defect D = P' phi(G') - G' gamma(P'), which lives in the
    integral ring (no series inversion anywhere); zeroing its x^j coefficient
    is the constant Sylvester problem S P0 - p^j P0 S = D[x^j], solved through
    the contraction S = R0 + p^{j-k+1} P0 S adj(P0) with
    R0 = D[x^j] adj(P0) / p^{k-1}.  Returns the corrected matrix and the log
    of (order, v(S_j)) for the certificate.
    """
    params = pp.params
    if nx is None:
        nx = pp.nx
    elif nx > pp.nx:
        raise DomainError(f"cannot extend x-precision {pp.nx} to {nx}")
    else:
        pp = pp.reduce_nx(nx)
        g = g.reduce_nx(nx)
    p0 = pp.eval0()
    adj0 = p0.adj()
    gamma_pp = mat_gamma(pp, chi_gamma)
    q = cyclotomic_q(params, nx)

    defect = pp * mat_frobenius(g) - g * mat_gamma(pp, chi_gamma)
    for j in range(min(k, nx)):
        if not defect.coeff(j).is_zero_at_cap():
            raise DefectNotDivisible(
                f"defect has a nonzero x^{j} term below x^{k}"
            )

    gp = g
    log: list[tuple[int, Fraction]] = []
    qpow = q ** k
    max_sweeps = params.prec_pi + 2
    for j in range(k, nx):
        cj = defect.coeff(j)
        if cj.is_zero_at_cap():
            log.append((j, Fraction(cj.min_cap(), params.e)))
            qpow = qpow * q
            continue
        try:
            r0 = Mat2(
                *(x.pi_div_exact(params.e * (k - 1)) for x in (cj * adj0).entries())
            )
        except InexactDivision as exc:
            raise NeumannDivergence(
                f"order {j}: defect coefficient not divisible by p^{k - 1} "
                f"(det condition violated): {exc}"
            )
        scale = PadicElt.from_int(params, params.p ** (j - k + 1))
        s = r0
        for _ in range(max_sweeps):
            s_next = r0 + (p0 * s * adj0).scale(scale)
            if s_next.same_at_cap(s):
                s = s_next
                break
            s = s_next
        else:
            raise NeumannDivergence(
                f"order {j}: affine iteration did not stabilize in "
                f"{max_sweeps} sweeps"
            )
        log.append((j, Fraction(s.min_val_or_cap(), params.e)))
        gp = gp + MatrixSeries.from_mats(params, [s], nx).shift_up(j)
        # defect update for G -> G + x^j S:  D += x^j Q^j (P' S) - x^j (S gamma(P'))
        bump = pp.right_mul_mat(s).scale_series(qpow).shift_up(j)
        drop = gamma_pp.left_mul_mat(s).shift_up(j)
        defect = defect + bump - drop
        if not defect.coeff(j).is_zero_at_cap():
            raise PrecisionExhausted(f"order {j}: correction failed to close")
        qpow = qpow * q
    if not defect.is_zero_at_cap():
        raise PrecisionExhausted("corrected pair still has visible defect")
    return gp, tuple(log)


# --------------------------------------------------------------------------- #
# the deformation pipeline and its certificate
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class DeformCertificate:
    """Audit trail of one trace deformation a_p -> a'_p at level m."""

    p: int
    e: int
    k: int
    chi_gamma: int
    prec_pi: int
    prec_x: int
    a_p_lift: int
    ap_new_lift: int
    m: Fraction
    bound_required: Fraction
    bound_observed: Fraction
    bound_ok: bool
    h_valuations: tuple[Fraction, ...]
    h_floors: tuple[Fraction, ...]
    iteration_log: tuple[tuple[int, Fraction], ...]
    p_congruent: bool
    g_congruent: bool
    charpoly_ok: bool
    axioms_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.bound_ok
            and self.p_congruent
            and self.g_congruent
            and self.charpoly_ok
            and self.axioms_ok
        )

    def as_obj(self) -> dict:
        """JSON-ready rendering (fractions as strings, log as pairs)."""
        return {
            "p": self.p,
            "e": self.e,
            "k": self.k,
            "chi_gamma": self.chi_gamma,
            "prec_pi": self.prec_pi,
            "prec_x": self.prec_x,
            "a_p": str(self.a_p_lift),
            "ap_new": str(self.ap_new_lift),
            "m": str(self.m),
            "bound_required": str(self.bound_required),
            "bound_observed": str(self.bound_observed),
            "bound_ok": self.bound_ok,
            "h_valuations": [str(v) for v in self.h_valuations],
            "h_floors": [str(v) for v in self.h_floors],
            "iteration_log": [[j, str(v)] for j, v in self.iteration_log],
            "p_congruent": self.p_congruent,
            "g_congruent": self.g_congruent,
            "charpoly_ok": self.charpoly_ok,
            "axioms_ok": self.axioms_ok,
            "pass": self.ok,
        }


def _series_min_val(ms: MatrixSeries) -> Fraction:
    return Fraction(ms.min_val_or_cap(), ms.params.e)


def _as_level(m, e: int) -> Fraction:
    m = Fraction(m)
    if m * e < 1 or (m * e).denominator != 1:
        raise DomainError(f"congruence level must lie in (1/{e})Z_(>=1), got {m}")
    return m


def deform_trace(
    w: WachData, ap_new: PadicElt, m
) -> tuple[WachData, DeformCertificate]:
    """Deform (P, G) to trace a'_p, certifying P = P' and G = G' mod p^m.

    Refuses with BoundViolated before touching the matrices unless
    v(a_p - a'_p) >= 2 v(a_p) + alpha(k-1) + m.  On success the returned
    module carries P' = (Id + H) P and the repaired gamma-matrix; all
    valuation floors the congruence argument uses are logged in the
    certificate, which re-verifies the deformed module from scratch.
    """
    params = w.params
    m = _as_level(m, params.e)
    k, chi = w.k, w.chi_gamma
    table = alpha(params.p, k - 1, chi)
    alpha_k1 = table.value(k - 1)

    eps = ap_new - w.a_p
    v_ap = w.a_p.valpi()
    if v_ap is None:
        if not eps.is_zero_at_cap():
            raise BoundViolated(
                "a_p vanishes to cap: no finite bound 2v(a_p)+alpha+m exists"
            )
        bound = Fraction(alpha_k1) + m  # degenerate: only identity deformation
    else:
        bound = 2 * Fraction(v_ap, params.e) + alpha_k1 + m
    v_eps = val_or_cap(eps)
    if v_eps < bound:
        if eps.is_zero_at_cap():
            raise PrecisionExhausted(
                f"cap {v_eps} cannot certify the hypothesis v(eps) >= {bound}"
            )
        raise BoundViolated(
            f"v(a_p - a'_p) = {v_eps} < 2 v(a_p) + alpha(k-1) + m = {bound}"
        )

    report = check_axioms(w)
    if not report.ok:
        raise DomainError("input module fails its axioms; refusing to deform")

    floor = Fraction(alpha_k1) + m
    h0 = build_h0(w.P.eval0(), eps, floor)
    h = extend_h(h0, w.G, k, m, table)
    pp = w.P + h * w.P
    gp, log = correct_gamma(pp, w.G, k, chi, m)

    wp = WachData(params=params, k=k, a_p=ap_new, chi_gamma=chi, P=pp, G=gp)
    report_p = check_axioms(wp)

    p0p = pp.eval0()
    qk = PadicElt.from_int(params, params.p ** (k - 1))
    h_vals = tuple(
        Fraction(h.coeff(r).min_val_or_cap(), params.e) for r in range(k)
    )
    h_floors = tuple(
        Fraction(alpha_k1 - table.value(r)) + m for r in range(k)
    )
    cert = DeformCertificate(
        p=params.p,
        e=params.e,
        k=k,
        chi_gamma=chi,
        prec_pi=params.prec_pi,
        prec_x=w.P.nx,
        a_p_lift=w.a_p.lift_int(),
        ap_new_lift=ap_new.lift_int(),
        m=m,
        bound_required=bound,
        bound_observed=v_eps,
        bound_ok=True,
        h_valuations=h_vals,
        h_floors=h_floors,
        iteration_log=log,
        p_congruent=_series_min_val(w.P - pp) >= m,
        g_congruent=_series_min_val(w.G - gp) >= m,
        charpoly_ok=(
            (p0p.trace() - ap_new).is_zero_at_cap()
            and (p0p.det() - qk).is_zero_at_cap()
        ),
        axioms_ok=report_p.ok,
    )
    return wp, cert


def converse_bound(k: int, m, table: AlphaTable) -> Fraction:
    """Necessary valuation of a_p - a'_p for a mod-p^m isomorphism: m - alpha(k-1).

    Only informative when m >= alpha(k-1); refuses otherwise.
    """
    m = Fraction(m)
    alpha_k1 = table.value(k - 1)
    if m < alpha_k1:
        raise PreconditionFails(
            f"converse bound needs m >= alpha(k-1) = {alpha_k1}, got {m}"
        )
    return m - alpha_k1
