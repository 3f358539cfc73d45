"""Tests for the deformation engine: alpha, H0, the H recursion, the
Gamma-correction loop, and the end-to-end trace deformation with certificate."""
import json
import random
from fractions import Fraction

import pytest

from wachdeform.deform import (
    alpha,
    build_h0,
    converse_bound,
    correct_gamma,
    default_chi,
    deform_trace,
    diagonalize,
    extend_h,
    is_generator,
    precision_default,
    precision_floor,
)
from wachdeform.errors import (
    BoundViolated,
    DefectNotDivisible,
    DomainError,
    NotAGenerator,
    PreconditionFails,
    SlopesNotDistinct,
    ValuationFloorUnreachable,
)
from wachdeform.padics import PadicElt, PadicParams, val
from wachdeform.series import Mat2, MatrixSeries, mat_gamma
from wachdeform.wach import check_axioms, seed_companion

P3 = PadicParams(3, 1, 24)


def elt(n: int, params: PadicParams = P3) -> PadicElt:
    return PadicElt.from_int(params, n)


def mat(a: int, b: int, c: int, d: int, params: PadicParams = P3) -> Mat2:
    return Mat2(elt(a, params), elt(b, params), elt(c, params), elt(d, params))


def seed_k2(a: int = 3, nx: int = 16, prec: int = 24):
    params = PadicParams(3, 1, prec)
    return seed_companion(params, k=2, a_p=PadicElt.from_int(params, a), chi_gamma=2, nx=nx)


# --------------------------------------------------------------------------- #
# alpha
# --------------------------------------------------------------------------- #

def test_alpha_small_table_p3():
    t = alpha(3, 6, 2)
    assert t.values == (0, 1, 1, 2, 2, 4)
    assert t.steps == (0, 1, 0, 1, 0, 2)
    assert t.value(0) == 0
    assert t.value(6) == 4
    assert t.value(3) == 1   # bound ingredient for the weight-4 desk example


def test_alpha_other_primes():
    assert alpha(5, 20, 2).value(20) == 6       # floor(20/4) + floor(20/20)
    assert alpha(7, 6, 3).value(6) == 1
    assert alpha(3, 16, 2).value(16) == 10      # 8 + 2


@pytest.mark.parametrize("p", [3, 5, 7])
def test_alpha_floor_formula_to_300(p):
    # the constructor cross-checks product vs floor form at every r; surviving
    # construction to r = 300 is the assertion
    t = alpha(p, 300, default_chi(p))
    assert len(t.values) == 300
    # non-decreasing with nonnegative steps
    assert all(s >= 0 for s in t.steps)
    assert all(b >= a for a, b in zip(t.values, t.values[1:]))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_alpha_upper_bound(p):
    t = alpha(p, 300, default_chi(p))
    for r in range(1, 301):
        assert Fraction(t.value(r)) <= Fraction(r * p, (p - 1) ** 2)


def test_alpha_rejects_non_generators():
    with pytest.raises(NotAGenerator):
        alpha(3, 6, 4)          # 4 = 2^2 is a square mod 3
    with pytest.raises(NotAGenerator):
        alpha(3, 6, 1)
    with pytest.raises(NotAGenerator):
        alpha(3, 6, 3)          # divisible by p
    with pytest.raises(NotAGenerator):
        alpha(5, 6, 7)          # generates mod 5 but 7^4 = 2401 = 1 mod 25


def test_alpha_argument_validation():
    with pytest.raises(DomainError):
        alpha(3, 0, 2)
    t = alpha(3, 4, 2)
    with pytest.raises(DomainError):
        t.value(5)


def test_default_chi_smallest_generator():
    assert default_chi(3) == 2
    assert default_chi(5) == 2
    assert default_chi(7) == 3
    assert is_generator(7, 3) and not is_generator(7, 2)


# --------------------------------------------------------------------------- #
# precision budget
# --------------------------------------------------------------------------- #

def test_precision_floor_weight17():
    # m + 2 alpha(16) + k + 8 = 1 + 20 + 17 + 8
    assert precision_floor(1, 17, Fraction(1), 10) == 46
    assert precision_floor(2, 17, Fraction(1), 10) == 92


def test_precision_default_exceeds_floor():
    f = precision_floor(1, 4, Fraction(1), 1)
    d = precision_default(3, 1, 4, Fraction(1), 1, 32)
    assert d > f


# --------------------------------------------------------------------------- #
# diagonalize
# --------------------------------------------------------------------------- #

def test_diagonalize_diagonal_matrix():
    y, lam, mu, delta = diagonalize(mat(1, 0, 0, 3))
    assert y.same_at_cap(Mat2.identity(P3))
    assert lam.same_at_cap(elt(1))
    assert mu.same_at_cap(elt(3))
    assert delta.same_at_cap(elt(-2))


def test_diagonalize_companion_weight4():
    p0 = mat(0, -1, 27, 3)
    y, lam, mu, delta = diagonalize(p0)
    assert val(lam) == 1 and val(mu) == 2
    assert (lam + mu - elt(3)).is_zero_at_cap()
    assert (lam * mu - elt(27)).is_zero_at_cap()
    assert val(delta) == 1
    # column for lam really is an eigenvector
    col = (y.a, y.c)
    img = (p0.a * col[0] + p0.b * col[1], p0.c * col[0] + p0.d * col[1])
    assert (img[0] - lam * col[0]).is_zero_at_cap()
    assert (img[1] - lam * col[1]).is_zero_at_cap()


@pytest.mark.parametrize("entries", [(1, 0, 0, 1), (0, -1, 9, 3), (1, 0, 0, 1 + 9)])
def test_diagonalize_equal_slopes_refused(entries):
    with pytest.raises(SlopesNotDistinct):
        diagonalize(mat(*entries))


# --------------------------------------------------------------------------- #
# build_h0
# --------------------------------------------------------------------------- #

def test_build_h0_zero_eps_is_zero():
    h0 = build_h0(mat(0, -1, 3, 3), PadicElt.zero(P3), Fraction(1))
    assert h0.is_zero_at_cap()


def test_build_h0_companion_is_triangular():
    eps = elt(27)
    h0 = build_h0(mat(0, -1, 3, 3), eps, Fraction(1))
    assert h0.a.is_zero_at_cap() and h0.b.is_zero_at_cap() and h0.d.is_zero_at_cap()
    assert (h0.c + eps).is_zero_at_cap()
    one = elt(1)
    assert ((Mat2.identity(P3) + h0).det() - one).is_zero_at_cap()
    assert ((h0 * mat(0, -1, 3, 3)).trace() - eps).is_zero_at_cap()


def test_build_h0_diagonal_pins_mod_27():
    # P0 = diag(1, 3), eps = 9: the quadratic is a^2 - 11a - 9 = 0 and the
    # integral solution pair is (a, b) = (9, 18) mod 27
    h0 = build_h0(mat(1, 0, 0, 3), elt(9), Fraction(1))
    assert h0.b.is_zero_at_cap() and h0.c.is_zero_at_cap()
    assert (h0.a.lift_int() - 9) % 27 == 0
    assert (h0.d.lift_int() - 18) % 27 == 0
    assert ((h0 * mat(1, 0, 0, 3)).trace() - elt(9)).is_zero_at_cap()


def test_build_h0_general_conjugated():
    # upper-triangular conjugate of diag(1, 3): same eigenvalues, dense H0
    p0 = mat(1, 2, 0, 3)
    eps = elt(9)
    h0 = build_h0(p0, eps, Fraction(1))
    assert ((h0 * p0).trace() - eps).is_zero_at_cap()
    one = elt(1)
    assert ((Mat2.identity(P3) + h0).det() - one).is_zero_at_cap()
    assert Fraction(h0.min_val_or_cap(), P3.e) >= 1


def test_build_h0_floor_refused():
    with pytest.raises(ValuationFloorUnreachable):
        build_h0(mat(0, -1, 3, 3), elt(3), Fraction(2))


# --------------------------------------------------------------------------- #
# extend_h
# --------------------------------------------------------------------------- #

def _gamma_table(k: int):
    return alpha(3, max(k - 1, 1), 2)


def _const_series(m: Mat2, nx: int) -> MatrixSeries:
    return MatrixSeries.from_mats(m.a.params, [m], nx)


def test_extend_h_zero_seed_stays_zero():
    w = seed_k2()
    h = extend_h(Mat2.zero(P3), w.G, 2, Fraction(1), _gamma_table(2))
    assert h.is_zero_at_cap()


def test_extend_h_identity_gamma_keeps_constant():
    h0 = mat(9, 0, 27, 9)
    g = MatrixSeries.identity(P3, 12)
    h = extend_h(h0, g, 4, Fraction(1), _gamma_table(4))
    assert h.coeff(0).same_at_cap(h0)
    for r in range(1, 4):
        assert h.coeff(r).is_zero_at_cap()


def test_extend_h_first_order_commutator():
    # G = Id + x G_1 with G_1 = ((0,1),(0,0)) and H0 = ((0,0),(c,0)):
    # (1 - chi) H_1 = G_1 H0 - H0 G_1, so H_1 = H0 G_1 - G_1 H0 = ((-c,0),(0,c))
    c = 3
    h0 = mat(0, 0, c, 0)
    g = MatrixSeries.identity(P3, 12) + _const_series(mat(0, 1, 0, 0), 12).shift_up(1)
    h = extend_h(h0, g, 2, Fraction(1), _gamma_table(2))
    assert h.coeff(0).same_at_cap(h0)
    assert h.coeff(1).same_at_cap(mat(-c, 0, 0, c))


def test_extend_h_rejects_shallow_seed():
    w = seed_k2()
    with pytest.raises(ValuationFloorUnreachable):
        extend_h(mat(1, 0, 0, 0), w.G, 2, Fraction(1), _gamma_table(2))


def test_extend_h_rejects_gamma_not_identity_at_zero():
    h0 = mat(9, 0, 0, 9)
    g = _const_series(mat(1, 1, 0, 1), 8)
    with pytest.raises(DomainError):
        extend_h(h0, g, 3, Fraction(1), _gamma_table(3))


def test_extend_h_randomized_floors_and_congruence():
    # 100 random (H0, G): each output must clear every valuation floor
    # v(H_r) >= alpha(k-1) - alpha(r) + m and kill the congruence
    # H G = G gamma(H) below x^k
    rng = random.Random(23)
    params = PadicParams(3, 1, 26)
    m = Fraction(1)
    for trial in range(100):
        k = rng.randrange(2, 9)
        table = alpha(3, k - 1, 2)
        ak1 = table.value(k - 1)
        nx = k + 4
        scale = 3 ** (ak1 + 1)
        h0 = Mat2(*(PadicElt.from_int(params, scale * rng.randrange(-20, 21))
                    for _ in range(4)))
        g = MatrixSeries.identity(params, nx)
        for i in range(1, nx):
            tail = Mat2(*(PadicElt.from_int(params, rng.randrange(-40, 41))
                          for _ in range(4)))
            g = g + MatrixSeries.from_mats(params, [tail], nx).shift_up(i)
        h = extend_h(h0, g, k, m, table)
        for r in range(k):
            got = Fraction(h.coeff(r).min_val_or_cap(), params.e)
            assert got >= ak1 - table.value(r) + m, (trial, k, r)
        defect = h * g - g * mat_gamma(h, 2)
        for j in range(k):
            assert defect.coeff(j).is_zero_at_cap(), (trial, k, j)


# --------------------------------------------------------------------------- #
# correct_gamma
# --------------------------------------------------------------------------- #

def test_correct_gamma_zero_defect_is_identity_map():
    w = seed_k2()
    gp, log = correct_gamma(w.P, w.G, 2, 2, Fraction(1))
    assert gp.same_at_cap(w.G)
    assert all(j >= 2 for j, _ in log)


def test_correct_gamma_single_step_removes_planted_defect():
    w = seed_k2()
    t = mat(3, 6, 0, 3)
    g_bad = w.G + _const_series(t, w.G.nx).shift_up(2)
    gp, log = correct_gamma(w.P, g_bad, 2, 2, Fraction(1))
    # the unique order-2 correction is exactly -T, restoring the original G
    assert gp.same_at_cap(w.G)
    assert log[0][0] == 2 and log[0][1] == 1


def test_correct_gamma_rejects_low_order_defect():
    w = seed_k2()
    g_bad = w.G + _const_series(mat(3, 0, 0, 3), w.G.nx).shift_up(1)
    with pytest.raises(DefectNotDivisible):
        correct_gamma(w.P, g_bad, 2, 2, Fraction(1))


# --------------------------------------------------------------------------- #
# deform_trace
# --------------------------------------------------------------------------- #

def test_deform_identity_certificate():
    w = seed_k2()
    wp, cert = deform_trace(w, w.a_p, 1)
    assert cert.ok
    assert wp.P.same_at_cap(w.P)
    assert wp.G.same_at_cap(w.G)


def test_deform_weight2_desk_run():
    w = seed_k2()
    wp, cert = deform_trace(w, elt(30), 1)
    assert cert.ok
    assert cert.bound_required == 3          # 2 v(3) + alpha(1) + 1
    assert cert.bound_observed == 3          # v(27)
    assert cert.h_floors == (Fraction(1), Fraction(1))
    assert all(v >= 1 for _, v in cert.iteration_log)
    assert (wp.P - w.P).min_val_or_cap() >= 1
    assert (wp.G - w.G).min_val_or_cap() >= 1
    p0 = wp.P.eval0()
    assert (p0.trace() - elt(30)).is_zero_at_cap()
    assert (p0.det() - elt(3)).is_zero_at_cap()
    assert check_axioms(wp).ok


def test_deform_bound_refused():
    w = seed_k2()
    with pytest.raises(BoundViolated):
        deform_trace(w, elt(12), 1)          # v(9) = 2 < 3


def test_deform_round_trip_congruence():
    w = seed_k2()
    wp, cert = deform_trace(w, elt(30), 1)
    assert cert.ok
    back, cert2 = deform_trace(wp, elt(3), 1)
    assert cert2.ok
    assert (back.P - w.P).min_val_or_cap() >= 1
    assert (back.G - w.G).min_val_or_cap() >= 1


def test_deform_level_validation():
    w = seed_k2()
    with pytest.raises(DomainError):
        deform_trace(w, elt(30), 0)
    with pytest.raises(DomainError):
        deform_trace(w, elt(30), Fraction(2, 3))


def test_deform_other_prime():
    params = PadicParams(5, 1, 24)
    w = seed_companion(params, k=2, a_p=PadicElt.from_int(params, 5),
                       chi_gamma=2, nx=12)
    wp, cert = deform_trace(w, PadicElt.from_int(params, 5 + 125), 1)
    assert cert.ok
    assert cert.bound_required == 3


def test_deform_random_weight2_family():
    rng = random.Random(7)
    for _ in range(5):
        a = 3 * rng.randrange(1, 40)
        if a % 9 == 0:
            a += 3                            # keep v(a_p) = 1
        w = seed_k2(a=a, nx=12, prec=26)
        ap_new = a + 27 * rng.randrange(1, 10)
        wp, cert = deform_trace(w, elt(ap_new, w.params), 1)
        assert cert.ok, (a, ap_new)


def test_deform_rejects_broken_module():
    from wachdeform.wach import WachData

    w = seed_k2()
    broken = WachData(params=w.params, k=w.k, a_p=elt(4), chi_gamma=w.chi_gamma,
                      P=w.P, G=w.G)
    with pytest.raises(DomainError):
        deform_trace(broken, elt(31), 1)


def test_certificate_serializes():
    w = seed_k2()
    _, cert = deform_trace(w, elt(30), 1)
    obj = cert.as_obj()
    text = json.dumps(obj)
    assert json.loads(text)["pass"] is True
    assert obj["bound_required"] == "3"
    assert obj["h_valuations"] == ["3", "3"]


# --------------------------------------------------------------------------- #
# converse bound
# --------------------------------------------------------------------------- #

def test_converse_bound_examples():
    assert converse_bound(4, 3, alpha(3, 3, 2)) == 2
    assert converse_bound(2, 1, alpha(3, 1, 2)) == 1


def test_converse_bound_precondition():
    with pytest.raises(PreconditionFails):
        converse_bound(7, 3, alpha(3, 6, 2))  # alpha(6) = 4 > 3


def test_converse_consistent_with_passing_certificate():
    w = seed_k2()
    _, cert = deform_trace(w, elt(30), 1)
    threshold = converse_bound(2, 1, alpha(3, 1, 2))
    assert cert.bound_observed >= threshold
