"""Generalised lines, rectangle Dirichlet approximation and the lopsided
two-dimensional Farey dissection of the unit torus squared.

A *generalised line* L(d*c) collects the rationals a/r in T^2 (a a pair,
(a, r) = 1, r monic) with d*c . a = k*r for some k coprime to d; this
forces d | r.  The pair c is *primitive*: gcd(c1, c2) = 1 and either c1 is
monic, or c1 = 0 and c2 is monic.  c_perp denotes (-c2, c1).

The dissection theorem partitions T^2 exactly into rectangles of sides
q^(-deg r - R1) x q^(-deg r - R2) centered at rationals a/r lying on lines
of controlled height, for any integer parameters R1 >= R2 >= 1 and the
lopsidedness parameter T = (R1 - R2)/2 (kept as an exact Fraction; R1 - R2
may be odd).  ``verify_partition`` checks the partition cell-exhaustively
on the grid at the finest rectangle scale.

Point sets on lines are generated from their prime-power description
(separate shapes for v_pi(d) = 0, 0 < v_pi(d) < v_pi(r) and = v_pi(r))
glued by CRT, vectorised with numpy so that the million-rectangle grids
stay tractable; a direct membership-predicate oracle lives in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .algebra import (
    FieldCtx,
    Laurent,
    NormValue,
    Poly,
    factor_monic,
    poly_gcd,
    poly_gcd_many,
    poly_xgcd,
    polys_below_degree,
)
from .errors import BudgetError, PrecisionError

PARTITION_CELL_BUDGET = 10**9


def c_perp(c: tuple[Poly, Poly]) -> tuple[Poly, Poly]:
    """The perpendicular vector (-c2, c1) with c . c_perp = 0."""
    return (-c[1], c[0])


def is_primitive(c: tuple[Poly, Poly]) -> bool:
    c1, c2 = c
    if c1.is_zero and c2.is_zero:
        return False
    if not (c1.is_monic or (c1.is_zero and c2.is_monic)):
        return False
    return poly_gcd(c1, c2).is_one


@dataclass(frozen=True)
class GenLine:
    """A generalised line L(d*c) with d monic and c primitive."""

    d: Poly
    c: tuple[Poly, Poly]

    def __post_init__(self):
        if not self.d.is_monic:
            raise ValueError("d must be monic")
        if not is_primitive(self.c):
            raise ValueError("c must be primitive")

    @property
    def height(self) -> NormValue:
        return max((self.d * self.c[0]).norm(), (self.d * self.c[1]).norm())

    def sort_key(self):
        return (self.d.sort_key(), self.c[0].sort_key(), self.c[1].sort_key())


@dataclass(frozen=True)
class RationalPair:
    """A rational point a/r in T^2: |a_i| < |r|, gcd(a1, a2, r) = 1, r monic."""

    a: tuple[Poly, Poly]
    r: Poly

    def __post_init__(self):
        if not self.r.is_monic:
            raise ValueError("r must be monic")
        if any(ai.deg >= self.r.deg for ai in self.a):
            raise ValueError("numerators must satisfy |a_i| < |r|")
        if not poly_gcd_many([self.a[0], self.a[1], self.r]).is_one:
            raise ValueError("gcd(a1, a2, r) must be 1")

    @classmethod
    def normalised(cls, a1: Poly, a2: Poly, r: Poly) -> "RationalPair":
        """Reduce (a1, a2, r) to canonical form: a_i mod r, common gcd out,
        r monic (numerators rescaled by the same unit)."""
        if r.is_zero:
            raise ZeroDivisionError("zero denominator")
        ctx = r.ctx
        u = ctx.inv(r.coeffs[-1])
        r = r.scale(u)
        a1, a2 = a1.scale(u) % r, a2.scale(u) % r
        g = poly_gcd_many([a1, a2, r])
        if not g.is_one:
            a1, a2, r = a1 // g, a2 // g, r // g
            a1, a2 = a1 % r, a2 % r
        return cls((a1, a2), r)

    def sort_key(self):
        return (self.a[0].sort_key(), self.a[1].sort_key())

    def to_laurent(self, lo: int) -> tuple[Laurent, Laurent]:
        from .algebra import rational_to_laurent

        return tuple(rational_to_laurent(ai, self.r, lo) for ai in self.a)


@dataclass(frozen=True)
class Rect:
    """Rectangle {theta : |theta_i - a_i/r| < q^side_exps[i]} around a rational."""

    center: RationalPair
    side_exps: tuple[int, int]

    def __post_init__(self):
        if any(s > 0 for s in self.side_exps):
            raise ValueError("rectangle sides must be <= 1")

    def contains(self, theta: tuple[Laurent, Laurent]) -> bool:
        from .algebra import rational_to_laurent

        for i in (0, 1):
            c = rational_to_laurent(self.center.a[i], self.center.r, self.side_exps[i] - 1)
            if not (theta[i] - c).norm_less_than(self.side_exps[i]):
                return False
        return True

    def measure(self) -> Fraction:
        q = self.center.r.ctx.q
        e = self.side_exps[0] + self.side_exps[1]
        return Fraction(1, q**-e) if e < 0 else Fraction(q**e)


def rational_distance_norm(p1: RationalPair, p2: RationalPair, i: int) -> NormValue:
    """|a_i/r - a'_i/r'| computed exactly as |a_i r' - a'_i r| / |r r'|."""
    num = p1.a[i] * p2.r - p2.a[i] * p1.r
    return num.norm() / (p1.r * p2.r).norm()


# -- membership and covering ------------------------------------------------------


def line_membership(pt: RationalPair, line: GenLine) -> Optional[Poly]:
    """The witness k with d*c . a = k*r and (k, d) = 1, or None.

    A Some answer implies d | r.
    """
    w = line.d * (line.c[0] * pt.a[0] + line.c[1] * pt.a[1])
    if not pt.r.divides(w):
        return None
    k = w // pt.r
    if k.is_zero:
        ok = line.d.is_one
    else:
        ok = poly_gcd(k, line.d).is_one
    return k if ok else None


def _box_degree_bounds(T: Fraction, deg_r: int, deg_d: int = 0) -> tuple[int, int]:
    """Largest degrees (D1, D2) with |d c1| <= q^(T + deg_r/2) and
    |d c2| < q^(-T + deg_r/2)."""
    d1 = math.floor(T + Fraction(deg_r, 2)) - deg_d
    d2 = math.ceil(-T + Fraction(deg_r, 2)) - 1 - deg_d
    return d1, d2


def find_line(pt: RationalPair, T) -> GenLine:
    """A line containing pt with |d c1| <= q^T |r|^(1/2) and
    |d c2| < q^(-T) |r|^(1/2), by the pigeonhole construction: the box of
    candidate vectors has more than |r| members, so two of them collide
    modulo r; their difference lies on the line through pt.
    """
    T = Fraction(T)
    ctx = pt.r.ctx
    r = pt.r
    d1, d2 = _box_degree_bounds(T, r.deg)
    seen: dict[tuple, tuple[Poly, Poly]] = {}
    collision = None
    for c1 in _all_polys_upto(ctx, d1):
        for c2 in _all_polys_upto(ctx, d2):
            key = ((c1 * pt.a[0] + c2 * pt.a[1]) % r).coeffs
            if key in seen:
                collision = (seen[key], (c1, c2))
                break
            seen[key] = (c1, c2)
        if collision:
            break
    if collision is None:
        raise RuntimeError("pigeonhole failed: box not larger than |r|?")
    (b1, b2), (c1, c2) = collision
    cp1, cp2 = b1 - c1, b2 - c2
    dprime = poly_gcd(cp1, cp2)
    kprime = (cp1 * pt.a[0] + cp2 * pt.a[1]) // r
    if kprime.is_zero:
        g = dprime
    else:
        g = poly_gcd(dprime, kprime)
    d = (dprime // g).monic()
    c1n, c2n = cp1 // dprime, cp2 // dprime
    # unit normalisation of c
    lead_src = c1n if not c1n.is_zero else c2n
    u = ctx.inv(lead_src.coeffs[-1])
    return GenLine(d, (c1n.scale(u), c2n.scale(u)))


@lru_cache(maxsize=None)
def _all_polys_upto_cached(ctx: FieldCtx, maxdeg: int) -> tuple[Poly, ...]:
    out = [f for f in polys_below_degree(ctx, maxdeg + 1)]
    return tuple(sorted(out, key=Poly.sort_key))


def _all_polys_upto(ctx: FieldCtx, maxdeg: int) -> tuple[Poly, ...]:
    """All polynomials of degree <= maxdeg (just 0 when maxdeg < 0), canonical order."""
    if maxdeg < 0:
        return (Poly.zero(ctx),)
    return _all_polys_upto_cached(ctx, maxdeg)


@lru_cache(maxsize=None)
def _monic_upto_cached(ctx: FieldCtx, maxdeg: int) -> tuple[Poly, ...]:
    from .algebra import monic_polys_up_to

    return tuple(sorted(monic_polys_up_to(ctx, maxdeg), key=Poly.sort_key))


def monic_divisors(r: Poly) -> list[Poly]:
    """All monic divisors of monic r, in canonical order."""
    import itertools as it

    fac = factor_monic(r)
    divs = [Poly.one(r.ctx)]
    for p, k in fac.items():
        powers = [Poly.one(r.ctx)]
        for _ in range(k):
            powers.append(powers[-1] * p)
        divs = [d * pw for d in divs for pw in powers]
    return sorted(divs, key=Poly.sort_key)


# -- vectorised residue tables ---------------------------------------------------------


class ResidueCtx:
    """numpy tables for the residues of O modulo a monic r.

    Residues are indexed by the base-q fold of their coefficient vector
    (constant digit least significant).  Provides multiplication-by-poly
    permutations, unit masks, canonical sort ranks and the digit streams of
    the expansions a/r (most significant digit = coefficient of t^-1).
    """

    def __init__(self, r: Poly):
        ctx = r.ctx
        self.r = r
        self.ctx = ctx
        q, w = ctx.q, r.deg
        self.q, self.deg = q, w
        self.N = q**w
        if ctx.e != 1:
            # digitwise numpy arithmetic below assumes a prime field
            raise NotImplementedError("vectorised residue tables need e = 1")
        idx = np.arange(self.N, dtype=np.int64)
        self.rows = np.empty((self.N, w), dtype=np.int64)
        for j in range(w):
            self.rows[:, j] = (idx // q**j) % q
        self.qpow = q ** np.arange(w, dtype=np.int64)
        # multiplication by t: shift digits, reduce the escaping top digit
        rlow = np.array([r[j] for j in range(w)], dtype=np.int64)
        shifted = np.zeros_like(self.rows)
        if w > 1:
            shifted[:, 1:] = self.rows[:, :-1]
        top = self.rows[:, w - 1 : w] if w else np.zeros((self.N, 0), dtype=np.int64)
        digits_t = (shifted - top * rlow[None, :]) % q if w else shifted
        self.t_perm = digits_t @ self.qpow if w else idx
        self._t_perms = {0: idx, 1: self.t_perm}
        self._fac = factor_monic(r) if w > 0 else {}
        self._div_masks = self._divisibility_masks()
        self._unit = np.ones(self.N, dtype=bool)
        for mask in self._div_masks.values():
            self._unit &= ~mask
        self._rank = self._canonical_ranks()
        self._mulc_cache: dict[tuple, np.ndarray] = {}
        self._prefix_cache: dict[int, np.ndarray] = {}
        self._lift_cache: dict[tuple, np.ndarray] = {}

    def crt_lift(self, prime: Poly, k: int) -> np.ndarray:
        """Index map (residue mod prime^k) -> (CRT idempotent lift mod r)."""
        key = (prime.coeffs, k)
        cached = self._lift_cache.get(key)
        if cached is None:
            ppk = _poly_pow(prime, k)
            cof = self.r // ppk
            _, u, _ = poly_xgcd(cof, ppk)
            e_i = (cof * u) % self.r
            cached = self.mulc(e_i)[: self.q ** (k * prime.deg)].copy()
            self._lift_cache[key] = cached
        return cached

    # t^j multiplication permutation
    def t_pow_perm(self, j: int) -> np.ndarray:
        if j not in self._t_perms:
            prev = self.t_pow_perm(j - 1)
            self._t_perms[j] = self.t_perm[prev]
        return self._t_perms[j]

    def fold(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self.qpow if self.deg else np.zeros(digits.shape[:-1], dtype=np.int64)

    def mulc(self, c: Poly) -> np.ndarray:
        """Permutation-like map: index of (c * a mod r) for every residue a."""
        key = c.coeffs
        cached = self._mulc_cache.get(key)
        if cached is not None:
            return cached
        if self.deg == 0:
            out = np.zeros(1, dtype=np.int64)
        else:
            acc = np.zeros((self.N, self.deg), dtype=np.int64)
            for j, cj in enumerate(c.coeffs):
                if cj:
                    acc += cj * self.rows[self.t_pow_perm(j)]
            out = self.fold(acc % self.q)
        if len(self._mulc_cache) > 64:
            self._mulc_cache.clear()
        self._mulc_cache[key] = out
        return out

    def add_idx(self, i1: np.ndarray, i2: np.ndarray) -> np.ndarray:
        if self.deg == 0:
            return np.broadcast_arrays(i1, i2)[0] * 0
        return self.fold((self.rows[i1] + self.rows[i2]) % self.q)

    def _divisibility_masks(self) -> dict[Poly, np.ndarray]:
        """For each prime of r: boolean mask of residues divisible by it."""
        out: dict[Poly, np.ndarray] = {}
        for prime in self._fac:
            dp = prime.deg
            acc = np.zeros((self.N, dp), dtype=np.int64)
            tmod = Poly.one(self.ctx)
            for j in range(self.deg):
                col = self.rows[:, j]
                for i in range(dp):
                    acc[:, i] += col * tmod[i]
                tmod = (tmod * Poly.t(self.ctx)) % prime
            acc %= self.q
            out[prime] = ~acc.any(axis=1)
        return out

    @property
    def unit_mask(self) -> np.ndarray:
        return self._unit

    def pair_coprime_mask(self, i1: np.ndarray, i2: np.ndarray) -> np.ndarray:
        """gcd(a1, a2, r) = 1: at no prime of r do both components vanish."""
        ok = np.ones(np.broadcast_shapes(i1.shape, i2.shape), dtype=bool)
        for mask in self._div_masks.values():
            ok &= ~(mask[i1] & mask[i2])
        return ok

    def _canonical_ranks(self) -> np.ndarray:
        if self.deg == 0:
            return np.zeros(1, dtype=np.int64)
        degs = np.zeros(self.N, dtype=np.int64) - 1
        for j in range(self.deg):
            degs[self.rows[:, j] != 0] = j
        keys = [self.rows[:, j] for j in range(self.deg)] + [degs]
        order = np.lexsort(tuple(keys))
        ranks = np.empty(self.N, dtype=np.int64)
        ranks[order] = np.arange(self.N)
        return ranks

    @property
    def canonical_rank(self) -> np.ndarray:
        return self._rank

    def poly_of(self, idx: int) -> Poly:
        digits = [(idx // self.q**j) % self.q for j in range(self.deg)]
        return Poly(self.ctx, digits)

    def idx_of(self, a: Poly) -> int:
        a = a % self.r if self.deg else Poly.zero(self.ctx)
        return sum(c * self.q**j for j, c in enumerate(a.coeffs))

    def expansion_prefix(self, depth: int) -> np.ndarray:
        """For every residue a: the base-q fold of the first ``depth`` digits
        of the expansion of a/r (digit of t^-1 most significant)."""
        cached = self._prefix_cache.get(depth)
        if cached is not None:
            return cached
        out = np.zeros(self.N, dtype=np.int64)
        cur = np.arange(self.N, dtype=np.int64)
        for _ in range(depth):
            digit = self.rows[cur, self.deg - 1] if self.deg else np.zeros(self.N, dtype=np.int64)
            out = out * self.q + digit
            if self.deg:
                cur = self.t_perm[cur]
        if len(self._prefix_cache) > 8:
            self._prefix_cache.clear()
        self._prefix_cache[depth] = out
        return out


@lru_cache(maxsize=None)
def residue_ctx(r: Poly) -> ResidueCtx:
    return ResidueCtx(r)


@lru_cache(maxsize=8192)
def _local_line_pairs_cached(ppk: Poly, prime: Poly, k: int, m: int, cp1: Poly, cp2: Poly):
    return _local_line_pairs(residue_ctx(ppk), prime, k, m, cp1, cp2)


def _local_line_pairs(lctx: ResidueCtx, prime: Poly, k: int, m: int, cp1: Poly, cp2: Poly):
    """Index arrays (a1, a2) of the residues mod prime^k on L(prime^m * c),
    from the prime-power set description (cases m = 0, 0 < m < k, m = k).
    cp1, cp2 are the components of c_perp = (-c2, c1) reduced mod prime^k."""
    q = lctx.q
    M = lctx.N
    dp = prime.deg
    mul1, mul2 = lctx.mulc(cp1), lctx.mulc(cp2)
    units = lctx.unit_mask

    def param_pairs(mm: int):
        # { a*c_perp + prime^(k-mm) * dvec : a unit mod prime^(k-mm), |dvec| < |prime|^mm }
        a_sub = np.arange(q ** ((k - mm) * dp), dtype=np.int64)
        a_sub = a_sub[units[a_sub]]
        shift_tab = lctx.mulc(_poly_pow(prime, k - mm))
        d_sub = shift_tab[np.arange(q ** (mm * dp), dtype=np.int64)]
        b1 = lctx.add_idx(mul1[a_sub][:, None], d_sub[None, :])
        b2 = lctx.add_idx(mul2[a_sub][:, None], d_sub[None, :])
        enc = (b1[:, :, None] * M + b2[:, None, :]).ravel()
        return enc

    if m == 0:
        a_idx = np.nonzero(units)[0]
        return mul1[a_idx], mul2[a_idx]
    if m < k:
        enc = np.setdiff1d(param_pairs(m), param_pairs(m - 1), assume_unique=False)
    else:
        grid = np.arange(M, dtype=np.int64)
        nonunit = ~units
        bad = nonunit[grid[:, None]] & nonunit[grid[None, :]]
        all_pairs = (grid[:, None] * M + grid[None, :])[~bad].ravel()
        enc = np.setdiff1d(all_pairs, param_pairs(k - 1), assume_unique=False)
    return enc // M, enc % M


@lru_cache(maxsize=65536)
def _poly_pow(p: Poly, k: int) -> Poly:
    out = Poly.one(p.ctx)
    for _ in range(k):
        out = out * p
    return out


@lru_cache(maxsize=262144)
def _reduce_cached(a: Poly, mod: Poly) -> Poly:
    return a % mod


def line_point_indices(r: Poly, line: GenLine) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays of all numerators a (mod r) with a/r on the line,
    obtained by CRT-combining the prime-power descriptions."""
    rctx = residue_ctx(r)
    fac = rctx._fac
    d_fac = factor_monic(line.d) if not line.d.is_one else {}
    for p in d_fac:
        if p not in fac or d_fac[p] > fac[p]:
            raise ValueError("d does not divide r")
    if r.deg == 0:
        z = np.zeros(1, dtype=np.int64)
        return z, z
    a1: Optional[np.ndarray] = None
    a2: Optional[np.ndarray] = None
    primes = sorted(fac.items(), key=lambda kv: kv[0].sort_key())
    for prime, k in primes:
        m = d_fac.get(prime, 0)
        ppk = _poly_pow(prime, k)
        cp1 = _reduce_cached(-line.c[1], ppk)
        cp2 = _reduce_cached(line.c[0], ppk)
        l1, l2 = _local_line_pairs_cached(ppk, prime, k, m, cp1, cp2)
        if len(primes) == 1:
            return l1, l2
        lift = rctx.crt_lift(prime, k)
        g1, g2 = lift[l1], lift[l2]
        if a1 is None:
            a1, a2 = g1, g2
        else:
            a1 = rctx.add_idx(a1[:, None], g1[None, :]).ravel()
            a2 = rctx.add_idx(a2[:, None], g2[None, :]).ravel()
    return a1, a2


def line_points(line: GenLine, r: Poly) -> list[tuple[Poly, Poly]]:
    """The numerators {a : |a| < |r|, a/r in L(d*c)}, canonically ordered.

    Cardinality is at most |d| |r|.
    """
    if not r.is_monic:
        raise ValueError("r must be monic")
    i1, i2 = line_point_indices(r, line)
    rctx = residue_ctx(r)
    order = np.lexsort((rctx.canonical_rank[i2], rctx.canonical_rank[i1]))
    out = [(rctx.poly_of(int(i1[j])), rctx.poly_of(int(i2[j]))) for j in order]
    assert len(out) <= line.d.norm().float_value(rctx.q) * r.norm().float_value(rctx.q)
    return out


# -- Dirichlet approximation --------------------------------------------------------------


def dirichlet_approx(x: tuple[Laurent, Laurent], R1: int, R2: int) -> RationalPair:
    """A rational a/r with r monic, |r| <= q^(R1+R2) and
    |x_i - a_i/r| < |r|^-1 q^(-R_i), i = 1, 2.

    Existence is the rectangle pigeonhole: there are more polynomials of
    norm <= q^(R1+R2) than rectangles of sides q^-R1 x q^-R2 in the unit
    square.  Scanning candidate denominators in canonical order makes the
    output deterministic and minimal in (deg r, canonical order); the first
    hit is automatically in lowest terms.
    """
    if not (R1 >= R2 >= 1):
        raise ValueError("need R1 >= R2 >= 1")
    ctx = x[0].ctx
    need = 2 * (R1 + R2) + 2
    for xi in x:
        if xi.lo is not None and xi.lo > -need:
            raise PrecisionError(f"need certified window down to t^-{need}")
        if not xi.is_torus_point():
            raise ValueError("x must lie in the unit torus")
    for r in _monic_upto_cached(ctx, R1 + R2):
        rl = Laurent.from_poly(r)
        ok = True
        a = []
        for xi, Ri in zip(x, (R1, R2)):
            prod = rl * xi
            ai = prod.integer_part()
            if not (prod - Laurent.from_poly(ai)).norm_less_than(-Ri):
                ok = False
                break
            a.append(ai)
        if ok:
            return RationalPair.normalised(a[0], a[1], r)
    raise RuntimeError("unreachable: Dirichlet box must contain a collision")


# -- dissection enumeration ------------------------------------------------------------------


@dataclass(frozen=True)
class DissectionRect:
    line: GenLine
    rect: Rect

    @property
    def r(self) -> Poly:
        return self.rect.center.r


@lru_cache(maxsize=None)
def _primitive_pairs_cached(ctx: FieldCtx, D1: int, D2: int) -> tuple[tuple[Poly, Poly], ...]:
    """Primitive pairs (c1, c2) with deg c1 <= D1 and deg c2 <= D2, in
    canonical (c1, c2) order.  c1 is monic or zero by the normalisation."""
    c1s = [Poly.zero(ctx)]
    if D1 >= 0:
        c1s += list(_monic_upto_cached(ctx, D1))
    c2s = _all_polys_upto(ctx, D2)
    out = []
    for c1 in c1s:
        for c2 in c2s:
            if is_primitive((c1, c2)):
                out.append((c1, c2))
    return tuple(out)


def dissection_lines(ctx: FieldCtx, r: Poly, R1: int, R2: int, require_height: bool) -> Iterator[GenLine]:
    """The (d, c) pairs attached to r: d | r monic, c primitive,
    |d c1| <= q^T |r|^(1/2), |d c2| < q^(-T) |r|^(1/2) and, when
    ``require_height`` (the dissection's pruning condition),
    max(q^R1 |d c2|, q^R2 |d c1|) >= |r|."""
    T = Fraction(R1 - R2, 2)
    for d in monic_divisors(r):
        D1, D2 = _box_degree_bounds(T, r.deg, d.deg)
        if D1 < 0 and D2 < 0:
            continue
        for c1, c2 in _primitive_pairs_cached(ctx, D1, D2):
            if require_height:
                h1 = -1 if c2.is_zero else R1 + d.deg + c2.deg
                h2 = -1 if c1.is_zero else R2 + d.deg + c1.deg
                if max(h1, h2) < r.deg:
                    continue
            yield _mk_line(d, c1, c2)


@lru_cache(maxsize=65536)
def _mk_line(d: Poly, c1: Poly, c2: Poly) -> GenLine:
    return GenLine(d, (c1, c2))


def enumerate_dissection(ctx: FieldCtx, R1: int, R2: int) -> Iterator[DissectionRect]:
    """All rectangles of the lopsided dissection with parameters (R1, R2),
    in the deterministic order (deg r, r, d, c, a) under canonical
    polynomial ordering.  Each rational center is emitted exactly once."""
    if not (R1 >= R2 >= 1):
        raise ValueError("need R1 >= R2 >= 1")
    for r in _monic_upto_cached(ctx, R1 + R2):
        side = (-(r.deg + R1), -(r.deg + R2))
        for line in dissection_lines(ctx, r, R1, R2, require_height=True):
            for a1, a2 in line_points(line, r):
                center = RationalPair((a1, a2), r)
                yield DissectionRect(line, Rect(center, side))


def dissection_measure_total(ctx: FieldCtx, R1: int, R2: int) -> Fraction:
    """Exact sum of rectangle measures over the whole dissection."""
    total = Fraction(0)
    for r in _monic_upto_cached(ctx, R1 + R2):
        n_rects = 0
        for line in dissection_lines(ctx, r, R1, R2, require_height=True):
            i1, _ = line_point_indices(r, line)
            n_rects += len(i1)
        total += n_rects * Fraction(1, ctx.q ** (2 * r.deg + R1 + R2))
    return total


# -- exhaustive partition verification -----------------------------------------------------------


def verify_partition(
    ctx: FieldCtx,
    R1: int,
    R2: int,
    mode: str = "full",
    budget: int = PARTITION_CELL_BUDGET,
) -> dict:
    """Exhaustively verify the dissection on the grid at the finest
    rectangle scale: q^(2R1+R2) x q^(R1+2R2) cells for mode "full".

    mode "full": every cell lies in exactly one rectangle (0 gaps, 0
    overlaps).  mode "major": the rectangles of the lines with |r| <= q^R2
    (no height pruning) tile the same set, cell for cell, as the plain
    rectangles around *all* rationals with |r| <= q^R2, and each side is
    overlap-free.

    Cell counters are uint8 and wrap mod 256, but the report also carries
    the exact rectangle-cell incidence total; "all cells read 1" together
    with "incidences == cells" is equivalent to an exact partition because
    counts are non-negative integers.

    Returns a JSON-ready report {cells, covered, overlaps, gaps,
    incidences, per_degree: {...}, ok}.
    """
    if not (R1 >= R2 >= 1):
        raise ValueError("need R1 >= R2 >= 1")
    if mode not in ("full", "major"):
        raise ValueError(f"unknown mode {mode!r}")
    q = ctx.q
    max_deg = R1 + R2 if mode == "full" else R2
    G1, G2 = max_deg + R1, max_deg + R2
    n_cells = q ** (G1 + G2)
    if n_cells > budget:
        raise BudgetError(f"{n_cells} cells exceed the budget of {budget}")

    def run_side(height_pruning: bool, all_numerators: bool):
        total = np.zeros((q**G1, q**G2), dtype=np.uint8)
        per_degree: dict[str, int] = {}
        incidences = 0
        for r in _monic_upto_cached(ctx, max_deg):
            rctx = residue_ctx(r)
            w1, w2 = r.deg + R1, r.deg + R2
            E1 = rctx.expansion_prefix(w1)
            E2 = rctx.expansion_prefix(w2)
            block = q ** ((G1 - w1) + (G2 - w2))
            if r.deg == max_deg:
                level = total
            else:
                level = np.zeros((q**w1, q**w2), dtype=np.int64)

            u1_parts: list[np.ndarray] = []
            u2_parts: list[np.ndarray] = []

            def emit(i1: np.ndarray, i2: np.ndarray, key: str):
                nonlocal incidences
                u1_parts.append(E1[i1])
                u2_parts.append(E2[i2])
                per_degree[key] = per_degree.get(key, 0) + len(i1)
                incidences += len(i1) * block

            if all_numerators:
                if r.deg == 0:
                    emit(np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64), "0/-")
                else:
                    idx = np.arange(rctx.N)
                    g1 = np.repeat(idx, rctx.N)
                    g2 = np.tile(idx, rctx.N)
                    keep = rctx.pair_coprime_mask(g1, g2)
                    emit(g1[keep], g2[keep], f"{r.deg}/-")
            else:
                for line in dissection_lines(ctx, r, R1, R2, require_height=height_pruning):
                    i1, i2 = line_point_indices(r, line)
                    emit(i1, i2, f"{r.deg}/{line.d.deg}")
            if u1_parts:
                np.add.at(level, (np.concatenate(u1_parts), np.concatenate(u2_parts)), 1)
            if level is not total:
                b1, b2 = q ** (G1 - w1), q ** (G2 - w2)
                view = total.reshape(q**w1, b1, q**w2, b2)
                np.add(
                    view,
                    (level % 256).astype(np.uint8)[:, None, :, None],
                    out=view,
                    casting="unsafe",
                )
        return total, per_degree, incidences

    if mode == "full":
        total, per_degree, incidences = run_side(height_pruning=True, all_numerators=False)
        covered = int(np.count_nonzero(total))
        overlaps = int(np.count_nonzero(total >= 2))
        gaps = n_cells - covered
        return {
            "mode": "full",
            "R1": R1,
            "R2": R2,
            "q": q,
            "cells": n_cells,
            "covered": covered,
            "overlaps": overlaps,
            "gaps": gaps,
            "incidences": incidences,
            "per_degree": per_degree,
            "ok": overlaps == 0 and gaps == 0 and incidences == n_cells,
        }

    lhs, per_degree, inc_l = run_side(height_pruning=False, all_numerators=False)
    rhs, per_degree_rhs, inc_r = run_side(height_pruning=False, all_numerators=True)
    overlaps = int(np.count_nonzero(lhs >= 2)) + int(np.count_nonzero(rhs >= 2))
    mismatch = int(np.count_nonzero(lhs != rhs))
    covered = int(np.count_nonzero(lhs))
    return {
        "mode": "major",
        "R1": R1,
        "R2": R2,
        "q": q,
        "cells": n_cells,
        "covered": covered,
        "overlaps": overlaps,
        "gaps": mismatch,
        "incidences": inc_l,
        "incidences_rhs": inc_r,
        "per_degree": per_degree,
        "per_degree_rhs": per_degree_rhs,
        "ok": overlaps == 0 and mismatch == 0 and inc_l == inc_r,
    }


# -- structure of rationals on a line (for the distance lemmas) ---------------------------------


def structure_decompose(pt: RationalPair, c: tuple[Poly, Poly]) -> tuple[Poly, tuple[Poly, Poly]]:
    """Write a/r on L(c) (d = 1) as (a0/r) c_perp + dvec with |a0| < |r|,
    (a0, r) = 1 and |dvec| < |c| componentwise against c_perp's shape;
    raises if pt is not on the line."""
    r = pt.r
    cp = c_perp(c)
    g, u, v = poly_xgcd(cp[0], cp[1])
    if not g.is_one:
        raise ValueError("c_perp is not primitive")
    a0 = (u * pt.a[0] + v * pt.a[1]) % r
    d1, rem1 = divmod(pt.a[0] - a0 * cp[0], r)
    d2, rem2 = divmod(pt.a[1] - a0 * cp[1], r)
    if not (rem1.is_zero and rem2.is_zero):
        raise ValueError("point is not on L(c)")
    return a0, (d1, d2)
