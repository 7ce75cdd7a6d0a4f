import random
from fractions import Fraction

import pytest

from ffcircle.algebra import FieldCtx, Laurent, NormValue, Poly, polys_below_degree, rational_to_laurent
from ffcircle.character import (
    Ball,
    LinearPsiPhase,
    ball_psi_integral,
    haar_average,
    psi_eval,
    psi_fraction,
    psi_fraction_exponent,
    required_resolution,
)
from ffcircle.cyc import CycValue
from ffcircle.errors import BudgetError, PrecisionError

F5 = FieldCtx(5)


def test_cyc_canonicalisation():
    z = CycValue.zeta(5)
    total = CycValue.zero(5)
    for k in range(5):
        total = total + CycValue.zeta(5, k)
    assert total.is_zero
    assert CycValue.zeta(5, 5) == CycValue.one(5)
    assert (z * CycValue.zeta(5, 4)) == CycValue.one(5)


def test_cyc_rational_detection_and_scale():
    v = CycValue.from_fraction(5, Fraction(3, 7))
    assert v.as_rational() == Fraction(3, 7)
    z = CycValue.zeta(5)
    assert z.as_rational() is None
    w = (z + z.conjugate()).scale(Fraction(1, 2))
    assert w.as_rational() is None
    assert abs(w.complex_value().imag) < 1e-12


def test_cyc_conjugation():
    z = CycValue.zeta(5, 2)
    assert z.conjugate() == CycValue.zeta(5, 3)
    v = CycValue(5, (1, 2, 3, 4), 7)
    prod = v * v.conjugate()
    assert abs(prod.complex_value().imag) < 1e-12


def test_cyc_embedding_accuracy():
    import cmath

    z = CycValue.zeta(5)
    assert abs(z.complex_value() - cmath.exp(2j * cmath.pi / 5)) < 1e-12


def test_cyc_text_roundtrip():
    vals = [
        CycValue.zero(5),
        CycValue.one(5),
        CycValue(5, (2, -4, 6, 0), 9),
        CycValue.from_fraction(5, Fraction(-7, 3)),
    ]
    for v in vals:
        assert CycValue.from_text(5, v.to_text()) == v


# -- psi ------------------------------------------------------------------------


def test_psi_examples():
    assert psi_eval(F5, Laurent.zero(F5)) == CycValue.one(5)
    assert psi_eval(F5, Laurent(F5, -1, [3], None)) == CycValue.zeta(5, 3)
    assert psi_eval(F5, Laurent.t_pow(F5, -2)) == CycValue.one(5)


def test_psi_needs_window_at_minus_one():
    with pytest.raises(PrecisionError):
        psi_eval(F5, Laurent(F5, 0, [1], 0))


def test_psi_is_additive_randomised():
    rng = random.Random(7)
    for _ in range(300):
        a = Laurent(F5, -4, [rng.randrange(5) for _ in range(6)], None)
        b = Laurent(F5, -4, [rng.randrange(5) for _ in range(6)], None)
        assert psi_eval(F5, a) * psi_eval(F5, b) == psi_eval(F5, a + b)


def test_psi_fraction_matches_expansion():
    t = Poly.t(F5)
    r = Poly(F5, [1, 2, 1]) * t
    for a in list(polys_below_degree(F5, r.deg))[::5]:
        via_expansion = psi_eval(F5, rational_to_laurent(a, r, -1))
        assert psi_fraction(a, r) == via_expansion


# -- required_resolution -----------------------------------------------------------


def test_resolution_examples():
    one = NormValue.one()
    assert required_resolution(one, [NormValue.zero(), NormValue.zero()], one) == 2
    assert (
        required_resolution(NormValue.q_pow(2), [NormValue.q_pow(3)], NormValue.zero())
        == 3 + 2 + 2
    )
    assert required_resolution(NormValue.zero(), [], NormValue.zero()) == 0


def test_resolution_soundness_on_random_instances():
    # perturbing inside one cell never changes psi of the phase
    rng = random.Random(11)
    gamma = Laurent.from_poly(Poly(F5, [0, 0, 2]))  # |gamma| = q^2
    h = NormValue.q_pow(1)
    m = required_resolution(h, [gamma.norm()])
    coeff = Poly(F5, [0, 3])  # height q^1

    def phase(x):
        return gamma * Laurent.from_poly(coeff) * x * x

    for _ in range(50):
        digits = [rng.randrange(5) for _ in range(m)]
        x = Laurent(F5, -m, digits, None)
        base_val = psi_eval(F5, phase(x))
        for _ in range(5):
            deeper = [rng.randrange(5) for _ in range(3)]
            x2 = x + Laurent(F5, -m - 3, deeper, None)
            assert psi_eval(F5, phase(x2)) == base_val


# -- haar averages -------------------------------------------------------------------


def test_haar_average_constant_one():
    torus = Ball.torus(F5)
    val = haar_average(lambda pt: CycValue.one(5), [torus, torus], m=1)
    assert val == CycValue.one(5)


def test_orthogonality_closed_form_and_enumeration():
    torus = Ball.torus(F5)
    t = Poly.t(F5)
    for x, expected in [
        (Poly.zero(F5), CycValue.one(5)),
        (t, CycValue.zero(5)),
        (Poly(F5, [3, 2, 1]), CycValue.zero(5)),
    ]:
        closed = haar_average(
            LinearPsiPhase((Laurent.from_poly(x),)), [torus], m=0
        )
        m = x.deg + 2
        brute = haar_average(
            lambda pt: psi_eval(F5, Laurent.from_poly(x) * pt[0]),
            [torus],
            m=max(m, 1),
        )
        assert closed == expected
        assert brute == expected


def test_theta_ball_integral_indicator():
    # integral over |theta| < q^-Z of psi(x theta): q^-Z if |x| < q^Z else 0
    for z in (1, 2, 3):
        ball = Ball(Laurent.zero(F5), -z)
        for x in [Poly.one(F5), Poly.t(F5), Poly(F5, [0, 0, 1]), Poly(F5, [1, 2, 0, 4])]:
            got = ball_psi_integral(Laurent.from_poly(x), ball)
            if x.deg < z:
                assert got == CycValue.from_fraction(5, Fraction(1, 5**z))
            else:
                assert got.is_zero


def test_offcenter_ball_picks_up_phase():
    # int over |theta - c| < q^-2 of psi(x theta) = psi(x c) * q^-2 for |x| < q^2
    c = Laurent(F5, -2, [3], None)  # 3 t^-2
    ball = Ball(c, -2)
    x = Laurent.from_poly(Poly(F5, [0, 2]))  # 2t; x*c = 6 t^-1 = t^-1
    got = ball_psi_integral(x, ball)
    assert got == CycValue.zeta(5, 1).scale(Fraction(1, 25))


def test_resolution_doubling_invariance():
    torus = Ball.torus(F5)
    x = Poly(F5, [2, 1])

    def f(pt):
        return psi_eval(F5, Laurent.from_poly(x) * pt[0])

    v1 = haar_average(f, [torus], m=3)
    v2 = haar_average(f, [torus], m=6)
    assert v1 == v2


def test_budget_is_hard():
    torus = Ball.torus(F5)
    with pytest.raises(BudgetError):
        haar_average(lambda pt: CycValue.one(5), [torus, torus], m=4, budget=10)
