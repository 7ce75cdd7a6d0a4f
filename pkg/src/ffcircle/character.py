"""The additive character psi on K_oo and exact Haar integration.

psi(alpha) = e_p(Tr(alpha_{-1})) where alpha_{-1} is the coefficient of
t^(-1).  Its values are p-th roots of unity, kept exact as CycValue.

Haar measure is normalised so that the unit torus T = {|alpha| < 1} has
measure 1.  A locally constant integrand is integrated exactly as
(measure of one cell) * (sum over cell representatives); the caller obtains
a sound resolution from ``required_resolution``.  Integrands that are
psi of a phase *linear* in the integration variables integrate in closed
form (indicator times measure), which cuts the cell count by orders of
magnitude and is the workhorse of the major-arc computations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Callable, Optional, Sequence, Union

from .algebra import FieldCtx, Laurent, NormValue, Poly
from .cyc import CycValue
from .errors import BudgetError, PrecisionError

DEFAULT_CELL_BUDGET = 10**8


def psi_eval(ctx: FieldCtx, alpha: Laurent) -> CycValue:
    """psi(alpha) = zeta_p^(Tr(alpha_{-1})); needs t^-1 inside the window."""
    c = alpha.coeff(-1)
    return CycValue.zeta(ctx.p, ctx.trace(c))


def psi_exponent(ctx: FieldCtx, alpha: Laurent) -> int:
    """The integer j in [0, p) with psi(alpha) = zeta_p^j."""
    return ctx.trace(alpha.coeff(-1))


def psi_fraction_exponent(a: Poly, r: Poly) -> int:
    """Exponent of psi(a/r) without building the Laurent expansion.

    Only the coefficient of t^(-1) of (a mod r)/r matters: it is
    lead(b)/lead(r) when deg(b) = deg(r) - 1 (b = a mod r), else 0.
    """
    ctx = a.ctx
    b = a % r
    if b.deg == r.deg - 1:
        c = ctx.div(b.coeffs[-1], r.coeffs[-1])
    else:
        c = 0
    return ctx.trace(c)


def psi_fraction(a: Poly, r: Poly) -> CycValue:
    return CycValue.zeta(a.ctx.p, psi_fraction_exponent(a, r))


def required_resolution(
    phase_height: NormValue,
    gamma_norms: Sequence[NormValue],
    w_norm: NormValue = NormValue.zero(),
) -> int:
    """Resolution m making x -> psi(sum gamma_i G_i(x) + w.x) constant on
    balls of radius q^(-m) in the unit torus.

    Perturbing x by |delta| <= q^(-m) changes each G_i by at most
    H * q^(-m) and the linear part by |w| * q^(-m), so the phase moves by
    at most q^(E - m) with E the largest relevant exponent.  Choosing
    m >= E + 2 keeps the change at norm <= q^(-2), which cannot touch the
    t^(-1) coefficient.  A constant phase needs no resolution at all.
    """
    exps = []
    for g in gamma_norms:
        prod = g * phase_height
        if prod.exp is not None:
            exps.append(prod.exp)
    if w_norm.exp is not None:
        exps.append(w_norm.exp)
    if not exps:
        return 0
    return max(0, ceil(max(exps)) + 2)


@dataclass(frozen=True)
class Ball:
    """{theta : |theta - center| < q^radius_exp}; the torus is Ball(0, 0)."""

    center: Laurent
    radius_exp: int

    @classmethod
    def torus(cls, ctx: FieldCtx) -> "Ball":
        return cls(Laurent.zero(ctx), 0)

    def measure(self) -> Fraction:
        q = self.center.ctx.q
        e = self.radius_exp
        return Fraction(q**e) if e >= 0 else Fraction(1, q**-e)


@dataclass(frozen=True)
class LinearPsiPhase:
    """Integrand theta -> psi(sum multipliers[i] * theta_i + offset).

    Declaring linearity in the integration variables lets haar_average use
    the closed form instead of enumerating cells.
    """

    multipliers: tuple[Laurent, ...]
    offset: Optional[Laurent] = None


Integrand = Union[LinearPsiPhase, Callable[[tuple[Laurent, ...]], CycValue]]


def ball_psi_integral(x: Laurent, ball: Ball) -> CycValue:
    """Closed form for int_{|theta - c| < q^s} psi(x * theta) d theta.

    Equals psi(x*c) * q^s when |x| < q^(-s) and 0 otherwise: substituting
    theta = c + delta reduces to the orthogonality of psi on a ball, and
    averaging psi over any full digit range kills the term unless every
    digit multiplier vanishes.
    """
    ctx = x.ctx
    p = ctx.p
    s = ball.radius_exp
    if not x.norm_less_than(-s):
        return CycValue.zero(p)
    measure = Fraction(ctx.q**s) if s >= 0 else Fraction(1, ctx.q**-s)
    return psi_eval(ctx, x * ball.center).scale(measure)


def _cell_digit_indices(ball: Ball, m: int) -> range:
    # digit positions that enumerate the cells of radius q^-m inside the ball
    return range(max(-m, -10**9), ball.radius_exp)  # [-m, radius_exp)


def haar_average(
    f: Integrand,
    domain: Sequence[Ball],
    m: int,
    budget: int = DEFAULT_CELL_BUDGET,
) -> CycValue:
    """Exact Haar integral of a locally constant integrand over a product
    of balls.

    The caller certifies (via required_resolution) that f is constant on
    cells of radius q^(-m).  For a LinearPsiPhase the closed form is used
    and m is irrelevant.  Exceeding the cell budget is a hard error, never
    a silent subsample.
    """
    if not domain:
        raise ValueError("empty domain")
    ctx = domain[0].center.ctx
    p = ctx.p

    if isinstance(f, LinearPsiPhase):
        if len(f.multipliers) != len(domain):
            raise ValueError("one multiplier per coordinate required")
        out = CycValue.one(p)
        for x, ball in zip(f.multipliers, domain):
            out = out * ball_psi_integral(x, ball)
            if out.is_zero:
                return out
        if f.offset is not None:
            out = out * psi_eval(ctx, f.offset)
        return out

    digit_ranges = [range(-m, ball.radius_exp) for ball in domain]
    n_cells = 1
    for dr in digit_ranges:
        n_cells *= ctx.q ** max(0, len(dr))
    if n_cells > budget:
        raise BudgetError(f"{n_cells} cells exceed the budget of {budget}")

    cell_measure = Fraction(1)
    for ball, dr in zip(domain, digit_ranges):
        width = len(dr)
        e = ball.radius_exp - width
        cell_measure *= Fraction(ctx.q**e) if e >= 0 else Fraction(1, ctx.q**-e)

    total = CycValue.zero(p)
    coords_digit_choices = [
        list(itertools.product(ctx.elements(), repeat=len(dr))) for dr in digit_ranges
    ]
    for combo in itertools.product(*coords_digit_choices):
        point = []
        for ball, dr, digits in zip(domain, digit_ranges, combo):
            tail = Laurent(ctx, dr.start, digits, None) if digits else Laurent.zero(ctx)
            point.append(ball.center + tail)
        total = total + f(tuple(point))
    return total.scale(cell_measure)
