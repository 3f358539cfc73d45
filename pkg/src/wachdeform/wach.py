"""Wach-module data: construction from a companion seed, verification, storage.

A module is carried as a pair of 2x2 matrices over the truncated series ring:
P (the Frobenius matrix) and G (the matrix of the chosen Gamma-generator),
subject to

    G == Id mod x,
    det(P) = unit * Q^(k-1),
    P phi(G) = G gamma(P)        (checked to (x^nx, caps)),
    charpoly of P(0) = T^2 - a_p T + p^(k-1).

`seed_companion` builds (P, G) for the companion-form P order by order; the
order-j unknown satisfies a Sylvester-type equation G_j P(0) - p^j P(0) G_j =
C_j which is solved by a contraction for j >= k and by direct elimination
below that, with no fallback when the low-order system is singular.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import (
    DivisionByNonUnit,
    DomainError,
    InexactDivision,
    MalformedFile,
    ParamMismatch,
    PrecisionExhausted,
    SeedSingular,
    VersionMismatch,
)
from .padics import PadicElt, PadicParams
from .series import (
    Mat2,
    MatrixSeries,
    PadicSeries,
    cyclotomic_q,
    div_distinguished,
    mat_frobenius,
    mat_gamma,
)

__all__ = [
    "WachData",
    "AxiomReport",
    "check_axioms",
    "seed_companion",
    "seed_ap_zero",
    "default_nx",
    "save_wach",
    "load_wach",
    "FORMAT_VERSION",
]

FORMAT_VERSION = 1


# --------------------------------------------------------------------------- #
# data
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class WachData:
    """A candidate Wach module in a fixed basis."""

    params: PadicParams
    k: int
    a_p: PadicElt
    chi_gamma: int
    P: MatrixSeries
    G: MatrixSeries

    def __post_init__(self) -> None:
        if self.k < 2:
            raise DomainError(f"weight must be >= 2, got {self.k}")
        if self.chi_gamma < 2:
            raise DomainError("chi(gamma) must be an integer >= 2")
        if self.a_p.params != self.params:
            raise ParamMismatch("a_p over a different ring")
        if self.P.nx != self.G.nx:
            raise ParamMismatch("P and G have different x-precision")

    @property
    def nx(self) -> int:
        return self.P.nx


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of the four structural checks, with honest defect levels.

    commutation_defect_val is the smallest valuation (v(p) = 1 units) seen in
    any coefficient of P phi(G) - G gamma(P); when every coefficient vanishes
    at its own cap this equals commutation_defect_cap and the check passes.
    """

    commutation_defect_val: Fraction
    commutation_defect_cap: Fraction
    commutation_ok: bool
    det_unit_ok: bool
    gamma_trivial_ok: bool
    charpoly_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.commutation_ok
            and self.det_unit_ok
            and self.gamma_trivial_ok
            and self.charpoly_ok
        )


# --------------------------------------------------------------------------- #
# verification
# --------------------------------------------------------------------------- #

def check_axioms(w: WachData) -> AxiomReport:
    """Brute-force re-verification of all module axioms at current precision."""
    params, k = w.params, w.k
    e = params.e

    gamma_trivial_ok = (w.G.eval0() - Mat2.identity(params)).is_zero_at_cap()

    defect = w.P * mat_frobenius(w.G) - w.G * mat_gamma(w.P, w.chi_gamma)
    defect_val = Fraction(defect.min_val_or_cap(), e)
    defect_cap = Fraction(defect.min_cap(), e)
    commutation_ok = defect.is_zero_at_cap()

    det_unit_ok = _det_is_unit_times_qpow(w)

    p0 = w.P.eval0()
    q = PadicElt.from_int(params, params.p ** (k - 1))
    charpoly_ok = (p0.trace() - w.a_p).is_zero_at_cap() and (
        p0.det() - q
    ).is_zero_at_cap()

    return AxiomReport(
        commutation_defect_val=defect_val,
        commutation_defect_cap=defect_cap,
        commutation_ok=commutation_ok,
        det_unit_ok=det_unit_ok,
        gamma_trivial_ok=gamma_trivial_ok,
        charpoly_ok=charpoly_ok,
    )


def _det_is_unit_times_qpow(w: WachData) -> bool:
    """det(P) = u * Q^(k-1) with u a unit of the series ring."""
    params, k = w.params, w.k
    d = (params.p - 1) * (w.k - 1)
    det = w.P.det()
    qpow = cyclotomic_q(params, w.nx) ** (k - 1)
    try:
        u, r = div_distinguished(det, qpow, d)
    except PrecisionExhausted:
        return False
    if not r.is_zero_at_cap():
        return False
    if not u.eval0().is_unit():
        return False
    try:  # residual structure: adj(P) * u^(-1) must live in the integral ring
        w.P.adj().scale_series(u.invert().reduce_nx(w.nx))
    except DivisionByNonUnit:
        return False
    return True


# --------------------------------------------------------------------------- #
# companion seed
# --------------------------------------------------------------------------- #

def default_nx(params: PadicParams, k: int) -> int:
    """x-precision default: enough for 2k orders and for det/Q^(k-1) division."""
    return max(2 * k, 32, (params.p - 1) * (k - 1) + 2)


def _companion_p(params: PadicParams, k: int, a_p: PadicElt, nx: int) -> MatrixSeries:
    one = PadicSeries.one(params, nx)
    zero = PadicSeries.zero(params, nx)
    qpow = cyclotomic_q(params, nx) ** (k - 1)
    ap_series = PadicSeries(params, [a_p], nx)
    return MatrixSeries(zero, -one, qpow, ap_series)


def _solve_dense(
    params: PadicParams,
    m: list[list[PadicElt]],
    b: list[PadicElt],
    order: int,
) -> tuple[PadicElt, PadicElt]:
    """2x2 exact-division Gaussian solve with min-valuation pivoting."""
    pivot_val, pr, pc = min(
        (m[r][c].valpi_or_cap(), r, c) for r in (0, 1) for c in (0, 1)
    )
    if m[pr][pc].is_zero_at_cap():
        raise SeedSingular(order, f"system matrix vanishes at cap (order {order})")
    r1, c1 = 1 - pr, 1 - pc
    try:
        factor = m[r1][pc].divide_exact(m[pr][pc])
        coeff = m[r1][c1] - factor * m[pr][c1]
        rhs = b[r1] - factor * b[pr]
        if coeff.is_zero_at_cap():
            raise SeedSingular(order, f"eliminated system singular at order {order}")
        x_c1 = rhs.divide_exact(coeff)
        x_pc = (b[pr] - m[pr][c1] * x_c1).divide_exact(m[pr][pc])
    except InexactDivision as exc:
        raise SeedSingular(order, f"no integral solution at order {order}: {exc}") from exc
    sol = [None, None]
    sol[pc], sol[c1] = x_pc, x_c1
    return sol[0], sol[1]


def _solve_order_low(
    params: PadicParams, k: int, a_p: PadicElt, j: int, c: Mat2
) -> Mat2:
    """Solve S P0 - p^j P0 S = C for companion P0, order j < k.

    The companion shape makes two unknowns loss-free substitutions
    (S11, S21), leaving a 2x2 system in (S12, S22).
    """
    p = params.p
    q = p ** (k - 1)
    pj = p ** j

    def fi(n: int) -> PadicElt:
        return PadicElt.from_int(params, n)

    m = [
        [fi(q * (1 - pj * pj)), a_p.scale_int(pj * (1 - pj))],
        [a_p.scale_int(pj * q * (pj - 1)),
         fi(q * (1 - pj * pj)) - (a_p * a_p).scale_int(pj * (1 - pj))],
    ]
    b = [c.a + c.d.scale_int(pj), c.c - c.b.scale_int(pj * q) - (a_p * c.d).scale_int(pj)]
    s12, s22 = _solve_dense(params, m, b, j)
    s11 = a_p * s12 + s22.scale_int(pj) - c.b
    s21 = s22 * a_p.scale_int(1 - pj) - s12.scale_int(pj * q) - c.d
    return Mat2(s11, s12, s21, s22)


def _solve_order_high(
    params: PadicParams, k: int, p0: Mat2, j: int, c: Mat2
) -> Mat2:
    """Solve S P0 - p^j P0 S = C by contraction, valid once p^j/p^(k-1) < 1."""
    q_elt = PadicElt.from_int(params, params.p ** (k - 1))
    adj = p0.adj()
    try:
        base = Mat2(*( (x).divide_exact(q_elt) for x in (c * adj).entries() ))
    except InexactDivision as exc:
        raise SeedSingular(j, f"order {j}: C adj(P0) not divisible by p^(k-1)") from exc
    scale = params.p ** (j - k + 1)
    s = base
    for _ in range(params.prec_pi + 2):
        s_next = base + ((p0 * s) * adj).scale(PadicElt.from_int(params, scale))
        if s_next == s:
            break
        s = s_next
    else:
        raise PrecisionExhausted(f"contraction failed to stabilize at order {j}")
    return s


def seed_companion(
    params: PadicParams,
    k: int,
    a_p: PadicElt,
    chi_gamma: int,
    nx: int | None = None,
) -> WachData:
    """Build (P, G) with P in companion form for T^2 - a_p T + p^(k-1).

    G is solved order by order from P phi(G) = G gamma(P) starting at
    G_0 = Id; a singular or non-integral low-order system raises
    SeedSingular with the failing order and no fallback is attempted.
    The result is re-verified with check_axioms before being returned.
    """
    nx = default_nx(params, k) if nx is None else nx
    P = _companion_p(params, k, a_p, nx)
    p0 = P.eval0()
    q_series = cyclotomic_q(params, nx)
    gamma_p = mat_gamma(P, chi_gamma)

    # P * Q^n, coefficients reused across all orders
    pq: list[MatrixSeries] = [P]
    for _ in range(1, nx):
        pq.append(pq[-1].scale_series(q_series))

    mats: list[Mat2] = [Mat2.identity(params)]
    for j in range(1, nx):
        c = Mat2.zero(params)
        for n in range(j):
            c = c + pq[n].coeff(j - n) * mats[n] - mats[n] * gamma_p.coeff(j - n)
        if j >= k:
            s = _solve_order_high(params, k, p0, j, c)
        else:
            s = _solve_order_low(params, k, a_p, j, c)
        mats.append(s)

    G = MatrixSeries.from_mats(params, mats, nx)
    w = WachData(params=params, k=k, a_p=a_p, chi_gamma=chi_gamma, P=P, G=G)
    report = check_axioms(w)
    if not report.ok:
        raise PrecisionExhausted(
            "seed construction did not re-verify; raise the working precision "
            f"(defect {report.commutation_defect_val} < cap {report.commutation_defect_cap})"
        )
    return w


def seed_ap_zero(
    params: PadicParams, k: int, chi_gamma: int, nx: int | None = None
) -> WachData:
    """The a_p = 0 module (supersingular-extreme seed)."""
    return seed_companion(params, k, PadicElt.zero(params), chi_gamma, nx)


# --------------------------------------------------------------------------- #
# persistence
# --------------------------------------------------------------------------- #

def _elt_obj(x: PadicElt) -> dict:
    return {"digits": [str(d) for d in x.digits], "cap": str(x.cap)}

def _series_obj(s: PadicSeries) -> list:
    return [_elt_obj(c) for c in s.coeffs]

def _matrix_obj(m: MatrixSeries) -> list:
    return [
        [_series_obj(m.m11), _series_obj(m.m12)],
        [_series_obj(m.m21), _series_obj(m.m22)],
    ]


def save_wach(w: WachData, path: str | Path) -> None:
    """Write module data as deterministic structured text (sorted keys)."""
    obj = {
        "format_version": str(FORMAT_VERSION),
        "p": str(w.params.p),
        "e": str(w.params.e),
        "k": str(w.k),
        "prec_pi": str(w.params.prec_pi),
        "prec_x": str(w.nx),
        "chi_gamma": _elt_obj(PadicElt.from_int(w.params, w.chi_gamma)),
        "a_p": _elt_obj(w.a_p),
        "P": _matrix_obj(w.P),
        "G": _matrix_obj(w.G),
    }
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n")


def _req_int(obj: dict, key: str) -> int:
    try:
        return int(obj[key])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedFile(f"field {key!r} missing or not an integer string") from exc


def _elt_from(obj, params: PadicParams, where: str) -> PadicElt:
    try:
        digits = [int(d) for d in obj["digits"]]
        cap = int(obj["cap"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedFile(f"{where}: bad element encoding") from exc
    if len(digits) != params.e:
        raise MalformedFile(f"{where}: expected {params.e} digits, got {len(digits)}")
    if not 1 <= cap <= params.prec_pi:
        raise MalformedFile(f"{where}: cap {cap} outside [1, {params.prec_pi}]")
    return PadicElt(params, digits, cap)


def _series_from(arr, params: PadicParams, nx: int, where: str) -> PadicSeries:
    if not isinstance(arr, list) or len(arr) != nx:
        raise MalformedFile(f"{where}: expected {nx} coefficients")
    return PadicSeries(
        params, [_elt_from(o, params, f"{where}[{i}]") for i, o in enumerate(arr)], nx
    )


def _matrix_from(arr, params: PadicParams, nx: int, where: str) -> MatrixSeries:
    if (
        not isinstance(arr, list)
        or len(arr) != 2
        or any(not isinstance(row, list) or len(row) != 2 for row in arr)
    ):
        raise MalformedFile(f"{where}: expected a 2x2 array")
    return MatrixSeries(
        _series_from(arr[0][0], params, nx, f"{where}[0][0]"),
        _series_from(arr[0][1], params, nx, f"{where}[0][1]"),
        _series_from(arr[1][0], params, nx, f"{where}[1][0]"),
        _series_from(arr[1][1], params, nx, f"{where}[1][1]"),
    )


def load_wach(path: str | Path) -> WachData:
    """Load and structurally validate module data; inverse of save_wach."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedFile(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(
            f"invalid structured text at line {exc.lineno} column {exc.colno}"
        ) from exc
    if not isinstance(obj, dict):
        raise MalformedFile("top level is not an object")
    version = obj.get("format_version")
    if version != str(FORMAT_VERSION):
        raise VersionMismatch(f"format_version {version!r}, supported: {FORMAT_VERSION!r}")
    p = _req_int(obj, "p")
    e = _req_int(obj, "e")
    prec_pi = _req_int(obj, "prec_pi")
    nx = _req_int(obj, "prec_x")
    k = _req_int(obj, "k")
    try:
        params = PadicParams(p, e, prec_pi)
    except (DomainError, PrecisionExhausted) as exc:
        raise MalformedFile(f"bad ring parameters: {exc}") from exc
    if k < 2:
        raise MalformedFile(f"weight k must be >= 2, got {k}")
    if nx < 2:
        raise MalformedFile(f"prec_x must be >= 2, got {nx}")
    chi_elt = _elt_from(obj.get("chi_gamma"), params, "chi_gamma")
    chi = chi_elt.digits[0]
    if chi < 2:
        raise MalformedFile(f"chi_gamma must encode an integer >= 2, got {chi}")
    a_p = _elt_from(obj.get("a_p"), params, "a_p")
    P = _matrix_from(obj.get("P"), params, nx, "P")
    G = _matrix_from(obj.get("G"), params, nx, "G")
    return WachData(params=params, k=k, a_p=a_p, chi_gamma=chi, P=P, G=G)
