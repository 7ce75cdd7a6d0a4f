"""Exact arithmetic for F_q, O = F_q[t] and truncated K_oo = F_q((1/t)).

Conventions used throughout the package:

* Field elements are integers in ``[0, q)``.  For a prime field they are
  plain residues mod p; for ``q = p^e`` the integer is the base-p digit
  encoding of a polynomial in ``u`` reduced modulo an irreducible modulus
  of degree e.
* ``Poly`` stores a dense coefficient tuple, constant term first, with no
  trailing zeros.  The zero polynomial is the empty tuple and has degree
  ``-1``; its norm is the zero ``NormValue``.
* ``|f| = q^deg(f)``.  Norms are carried on a logarithmic scale by
  ``NormValue`` whose exponent is an exact ``Fraction`` (half-integer
  thresholds like ``q^(T + deg(r)/2)`` compare exactly, no floats).
* ``Laurent`` is a truncated element of K_oo: coefficients are exact on
  ``[lo, oo)`` (zero above the stored window) and *unknown* below ``lo``.
  Reading an uncertified index raises ``PrecisionError``; it is never a
  silent zero.  ``lo = None`` marks an exact element, known everywhere.

All values are immutable after construction and every operation is pure.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .errors import PrecisionError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FieldCtx:
    """Arithmetic context for F_q with q = p^e, char(F_q) = p > 3.

    Elements are integers in [0, q).  For e > 1 they encode polynomials in
    u over F_p (base-p digits, constant digit first) reduced modulo an
    irreducible ``modulus`` of degree e; when no modulus is supplied the
    canonically smallest irreducible of degree e is used, so two contexts
    with equal (p, e) are interchangeable.
    """

    __slots__ = ("p", "e", "q", "modulus", "_mul_table", "_inv_table")

    def __init__(self, p: int, e: int = 1, modulus: Optional[Sequence[int]] = None):
        if not _is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if p <= 3:
            raise ValueError("characteristic must exceed 3")
        if e < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.e = e
        self.q = p**e
        if e == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = _default_modulus(p, e)
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree e")
            if not _fp_irreducible(modulus, p):
                raise ValueError("modulus is reducible")
            self.modulus = modulus
        self._mul_table = None
        self._inv_table = None

    # -- encoding helpers -------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        d = []
        for _ in range(self.e):
            d.append(a % self.p)
            a //= self.p
        return d

    def _encode(self, digits: Sequence[int]) -> int:
        n = 0
        for c in reversed(digits):
            n = n * self.p + (c % self.p)
        return n

    # -- arithmetic --------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        da, db = self._digits(a), self._digits(b)
        return self._encode([(x + y) % self.p for x, y in zip(da, db)])

    def sub(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a - b) % self.p
        da, db = self._digits(a), self._digits(b)
        return self._encode([(x - y) % self.p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return self._encode([(-x) % self.p for x in self._digits(a)])

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        if self._mul_table is None and self.q <= 4096:
            self._build_tables()
        if self._mul_table is not None:
            return self._mul_table[a * self.q + b]
        return self._mul_slow(a, b)

    def _mul_slow(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce mod the modulus
        for i in range(len(prod) - 1, e - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(e):
                    prod[i - e + j] = (prod[i - e + j] - c * self.modulus[j]) % p
        return self._encode(prod[:e])

    def _build_tables(self) -> None:
        q = self.q
        table = [0] * (q * q)
        for a in range(q):
            for b in range(a, q):
                v = self._mul_slow(a, b)
                table[a * q + b] = v
                table[b * q + a] = v
        self._mul_table = table
        inv = [0] * q
        for a in range(1, q):
            if inv[a]:
                continue
            for b in range(1, q):
                if table[a * q + b] == 1:
                    inv[a], inv[b] = b, a
                    break
        self._inv_table = inv

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        if self._inv_table is None and self.q <= 4096:
            self._build_tables()
        if self._inv_table is not None:
            return self._inv_table[a]
        return self.pow_(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow_(self, a: int, k: int) -> int:
        r, base = 1, a
        while k:
            if k & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            k >>= 1
        return r

    def trace(self, a: int) -> int:
        """Absolute trace Tr_{F_q/F_p}(a), an element of F_p.

        For a prime field the trace is the identity.
        """
        if self.e == 1:
            return a
        s, x = 0, a
        for _ in range(self.e):
            s = self.add(s, x)
            x = self.pow_(x, self.p)
        # the trace lies in the prime subfield: only digit 0 survives
        return s % self.p

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    # -- interop -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldCtx)
            and self.p == other.p
            and self.e == other.e
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    def __repr__(self) -> str:
        if self.e == 1:
            return f"FieldCtx(q={self.p})"
        return f"FieldCtx(q={self.p}^{self.e})"


def _fp_poly_mod(a: tuple, b: tuple, p: int) -> tuple:
    # remainder of a by b over F_p, coefficient tuples, constant first
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < db:
            break
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - db
        for j in range(db + 1):
            a[shift + j] = (a[shift + j] - c * b[j]) % p
        while a and a[-1] == 0:
            a.pop()
    return tuple(a)


def _fp_irreducible(f: tuple, p: int) -> bool:
    deg = len(f) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for g in _fp_monic_polys(p, d):
            if not _fp_poly_mod(f, g, p):
                return False
    return True


def _fp_monic_polys(p: int, deg: int) -> Iterator[tuple]:
    for lower in itertools.product(range(p), repeat=deg):
        yield tuple(lower) + (1,)


@lru_cache(maxsize=None)
def _default_modulus(p: int, e: int) -> tuple:
    for f in _fp_monic_polys(p, e):
        if _fp_irreducible(f, p):
            return f
    raise RuntimeError("unreachable: irreducible polynomials exist in every degree")


class NormValue:
    """Absolute value on a logarithmic scale: the value q^exponent.

    ``exponent`` is an exact Fraction, or None for the zero value (norm 0,
    exponent -oo).  Products add exponents; comparisons compare exponents.
    Half-integer exponents such as T + deg(r)/2 are exact.
    """

    __slots__ = ("exp",)

    def __init__(self, exp: Optional[Fraction]):
        self.exp = None if exp is None else Fraction(exp)

    @classmethod
    def zero(cls) -> "NormValue":
        return cls(None)

    @classmethod
    def one(cls) -> "NormValue":
        return cls(Fraction(0))

    @classmethod
    def q_pow(cls, exp) -> "NormValue":
        return cls(Fraction(exp))

    @property
    def is_zero(self) -> bool:
        return self.exp is None

    def __mul__(self, other: "NormValue") -> "NormValue":
        if self.exp is None or other.exp is None:
            return NormValue(None)
        return NormValue(self.exp + other.exp)

    def __truediv__(self, other: "NormValue") -> "NormValue":
        if other.exp is None:
            raise ZeroDivisionError("division by zero norm")
        if self.exp is None:
            return NormValue(None)
        return NormValue(self.exp - other.exp)

    def __pow__(self, k) -> "NormValue":
        if self.exp is None:
            if k == 0:
                return NormValue.one()
            return NormValue(None)
        return NormValue(self.exp * Fraction(k))

    def _cmp(self, other: "NormValue") -> int:
        a, b = self.exp, other.exp
        if a is None and b is None:
            return 0
        if a is None:
            return -1
        if b is None:
            return 1
        return (a > b) - (a < b)

    def __eq__(self, other) -> bool:
        return isinstance(other, NormValue) and self._cmp(other) == 0

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __hash__(self) -> int:
        return hash(("NormValue", self.exp))

    def float_value(self, q: int) -> float:
        if self.exp is None:
            return 0.0
        return float(q) ** float(self.exp)

    def __repr__(self) -> str:
        if self.exp is None:
            return "NormValue(0)"
        return f"NormValue(q^{self.exp})"


class Poly:
    """Element of O = F_q[t]: dense coefficient tuple, constant term first.

    The zero polynomial is the empty tuple with ``deg == -1``.  The leading
    coefficient of a nonzero polynomial is nonzero.
    """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Sequence[int] = ()):
        self.ctx = ctx
        cs = [c % ctx.q for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, (1,))

    @classmethod
    def const(cls, ctx: FieldCtx, c: int) -> "Poly":
        return cls(ctx, (c,))

    @classmethod
    def t(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, (0, 1))

    @classmethod
    def t_pow(cls, ctx: FieldCtx, k: int) -> "Poly":
        return cls(ctx, (0,) * k + (1,))

    # -- basic queries -------------------------------------------------------

    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial (whose norm is still 0 = q^-oo)."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_one(self) -> bool:
        return self.coeffs == (1,)

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def norm(self) -> NormValue:
        if self.is_zero:
            return NormValue.zero()
        return NormValue.q_pow(self.deg)

    def __getitem__(self, i: int) -> int:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    # -- ring operations ------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        add = self.ctx.add
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add(out[i], c)
        return Poly(self.ctx, out)

    def __neg__(self) -> "Poly":
        neg = self.ctx.neg
        return Poly(self.ctx, [neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.ctx)
        ctx = self.ctx
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
        return Poly(ctx, out)

    def scale(self, c: int) -> "Poly":
        mul = self.ctx.mul
        return Poly(self.ctx, [mul(c, x) for x in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by t^k (k >= 0)."""
        if self.is_zero:
            return self
        return Poly(self.ctx, (0,) * k + self.coeffs)

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        ctx = self.ctx
        rem = list(self.coeffs)
        db = other.deg
        inv_lead = ctx.inv(other.coeffs[-1])
        quot = [0] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db:
            if rem[-1] == 0:
                rem.pop()
                continue
            c = ctx.mul(rem[-1], inv_lead)
            shift = len(rem) - 1 - db
            quot[shift] = c
            for j in range(db + 1):
                rem[shift + j] = ctx.sub(rem[shift + j], ctx.mul(c, other.coeffs[j]))
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(ctx, quot), Poly(ctx, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        if self.is_zero:
            return other.is_zero
        return (other % self).is_zero

    def monic(self) -> "Poly":
        if self.is_zero or self.is_monic:
            return self
        return self.scale(self.ctx.inv(self.coeffs[-1]))

    def pow_mod(self, k: int, mod: "Poly") -> "Poly":
        r = Poly.one(self.ctx) % mod
        base = self % mod
        while k:
            if k & 1:
                r = (r * base) % mod
            base = (base * base) % mod
            k >>= 1
        return r

    def evaluate(self, x: int) -> int:
        """Evaluate at a field element (Horner)."""
        ctx = self.ctx
        acc = 0
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    # -- comparisons / hashing --------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.ctx == other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.ctx.q, self.coeffs))

    def sort_key(self) -> tuple:
        """Canonical order: by degree, then lexicographic from leading
        coefficient down to the constant term."""
        return (self.deg, tuple(reversed(self.coeffs)))

    # -- text encoding ------------------------------------------------------------

    def to_text(self) -> str:
        """Encode as "c0,c1,...,cd"; the zero polynomial encodes as ""."""
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def from_text(cls, ctx: FieldCtx, text: str) -> "Poly":
        if text == "":
            return cls.zero(ctx)
        coeffs = [int(part) for part in text.split(",")]
        if any(not 0 <= c < ctx.q for c in coeffs):
            raise ValueError(f"coefficient out of range in {text!r}")
        p = cls(ctx, coeffs)
        if len(p.coeffs) != len(coeffs):
            raise ValueError(f"non-canonical encoding (trailing zeros): {text!r}")
        return p

    def __repr__(self) -> str:
        if self.is_zero:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}t" if c != 1 else "t")
            else:
                terms.append(f"{c}t^{i}" if c != 1 else f"t^{i}")
        return "Poly(" + " + ".join(reversed(terms)) + ")"


def poly_norm(f: Poly) -> NormValue:
    """|f| = q^deg(f); the zero polynomial has norm 0."""
    return f.norm()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor; gcd(a, 0) = monic(a).  Both zero is an error."""
    if a.is_zero and b.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Extended gcd: returns monic g and (u, v) with u*a + v*b = g."""
    ctx = a.ctx
    r0, r1 = a, b
    s0, s1 = Poly.one(ctx), Poly.zero(ctx)
    t0, t1 = Poly.zero(ctx), Poly.one(ctx)
    while not r1.is_zero:
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if r0.is_zero:
        raise ValueError("xgcd(0, 0) is undefined")
    lead = ctx.inv(r0.coeffs[-1])
    return r0.scale(lead), s0.scale(lead), t0.scale(lead)


def poly_inverse_mod(a: Poly, mod: Poly) -> Poly:
    """Inverse of a modulo mod; requires gcd(a, mod) = 1."""
    g, u, _ = poly_xgcd(a, mod)
    if not g.is_one:
        raise ValueError(f"{a!r} is not invertible modulo {mod!r}")
    return u % mod


def poly_gcd_many(polys: Sequence[Poly]) -> Poly:
    nonzero = [f for f in polys if not f.is_zero]
    if not nonzero:
        raise ValueError("gcd of all-zero family is undefined")
    g = nonzero[0]
    for f in nonzero[1:]:
        g = poly_gcd(g, f)
        if g.is_one:
            break
    return g.monic()


def crt_pair(a1: Poly, r1: Poly, a2: Poly, r2: Poly) -> Poly:
    """The residue x mod r1*r2 with x = a1 (r1), x = a2 (r2); (r1, r2) = 1."""
    g, u, v = poly_xgcd(r1, r2)
    if not g.is_one:
        raise ValueError("moduli are not coprime")
    # x = a1*v*r2 + a2*u*r1
    x = a1 * v * r2 + a2 * u * r1
    return x % (r1 * r2)


def crt_list(residues: Sequence[Poly], moduli: Sequence[Poly]) -> Poly:
    x, m = residues[0], moduli[0]
    for a, r in zip(residues[1:], moduli[1:]):
        x = crt_pair(x, m, a, r)
        m = m * r
    return x


# -- enumeration -----------------------------------------------------------------


def polys_below_degree(ctx: FieldCtx, d: int) -> Iterator[Poly]:
    """All q^d polynomials of degree < d (i.e. |f| < q^d), in canonical order."""
    if d <= 0:
        yield Poly.zero(ctx)
        return
    yield Poly.zero(ctx)
    for deg in range(d):
        yield from polys_of_degree(ctx, deg)


def polys_of_degree(ctx: FieldCtx, deg: int) -> Iterator[Poly]:
    """Nonzero polynomials of exact degree deg, in canonical order."""
    for lead in ctx.units():
        for lower in itertools.product(ctx.elements(), repeat=deg):
            yield Poly(ctx, tuple(lower) + (lead,))


def monic_polys_of_degree(ctx: FieldCtx, deg: int) -> Iterator[Poly]:
    if deg < 0:
        return
    for lower in itertools.product(ctx.elements(), repeat=deg):
        yield Poly(ctx, tuple(lower) + (1,))


def monic_polys_up_to(ctx: FieldCtx, maxdeg: int) -> Iterator[Poly]:
    for deg in range(maxdeg + 1):
        yield from monic_polys_of_degree(ctx, deg)


def _canonical_iter(polys: Iterator[Poly]) -> list[Poly]:
    return sorted(polys, key=Poly.sort_key)


@lru_cache(maxsize=None)
def _primes_by_degree_cached(ctx: FieldCtx, maxdeg: int) -> tuple[Poly, ...]:
    primes: list[Poly] = []
    for deg in range(1, maxdeg + 1):
        for f in monic_polys_of_degree(ctx, deg):
            if all(not p.divides(f) for p in primes if 2 * p.deg <= deg):
                primes.append(f)
    return tuple(sorted(primes, key=Poly.sort_key))


def primes_by_degree(ctx: FieldCtx, maxdeg: int) -> tuple[Poly, ...]:
    """All monic irreducibles of degree <= maxdeg, sorted by (degree, lex)."""
    if maxdeg < 1:
        raise ValueError("maxdeg must be >= 1")
    return _primes_by_degree_cached(ctx, maxdeg)


def is_irreducible(f: Poly) -> bool:
    if f.deg < 1:
        return False
    if f.deg == 1:
        return True
    for p in primes_by_degree(f.ctx, f.deg // 2):
        if p.divides(f):
            return False
    return True


def factor_monic(f: Poly) -> dict[Poly, int]:
    """Factor a nonzero monic polynomial into monic irreducibles with exponents."""
    if f.is_zero:
        raise ValueError("cannot factor 0")
    f = f.monic()
    out: dict[Poly, int] = {}
    if f.is_one:
        return out
    for p in primes_by_degree(f.ctx, f.deg):
        while p.divides(f):
            out[p] = out.get(p, 0) + 1
            f = f // p
        if f.is_one:
            break
    return out


# -- Laurent series ---------------------------------------------------------------


class Laurent:
    """Truncated element of K_oo = F_q((1/t)) with a certified window.

    The value is sum(coeffs[i] * t^(base+i)); indices above the window are
    exactly zero.  ``lo`` is the certified lower bound: coefficients at
    indices >= lo are exact, indices < lo are unknown.  ``lo = None`` marks
    an exact element.  Every operation propagates ``lo`` pessimistically.
    """

    __slots__ = ("ctx", "base", "coeffs", "lo")

    def __init__(self, ctx: FieldCtx, base: int, coeffs: Sequence[int], lo: Optional[int]):
        cs = [c % ctx.q for c in coeffs]
        # trim exact zeros above the leading term
        while cs and cs[-1] == 0:
            cs.pop()
        if lo is None:
            # exact: trim zeros below as well
            k = 0
            while k < len(cs) and cs[k] == 0:
                k += 1
            base += k
            cs = cs[k:]
        else:
            if base < lo:
                # stored digits below the certification line are meaningless
                cs = cs[lo - base :]
                base = lo
            elif base > lo:
                # indices in [lo, base) are known to be zero
                cs = [0] * (base - lo) + cs
                base = lo
        self.ctx = ctx
        self.base = base
        self.coeffs = tuple(cs)
        self.lo = lo

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "Laurent":
        return cls(ctx, 0, (), None)

    @classmethod
    def from_poly(cls, f: Poly) -> "Laurent":
        return cls(f.ctx, 0, f.coeffs, None)

    @classmethod
    def t_pow(cls, ctx: FieldCtx, k: int) -> "Laurent":
        return cls(ctx, k, (1,), None)

    @classmethod
    def from_digits(cls, ctx: FieldCtx, base: int, coeffs: Sequence[int]) -> "Laurent":
        """Exact value with the given window (zero outside)."""
        return cls(ctx, base, coeffs, None)

    # -- queries ---------------------------------------------------------------

    @property
    def hi(self) -> int:
        """Index of the highest (possibly) nonzero coefficient."""
        if self.coeffs:
            return self.base + len(self.coeffs) - 1
        return (self.lo if self.lo is not None else 0) - 1

    @property
    def is_exact(self) -> bool:
        return self.lo is None

    @property
    def is_zero(self) -> bool:
        """Exactly zero (requires an exact value or an all-zero window plus
        certainty below, i.e. only exact values can be declared zero)."""
        return self.lo is None and not self.coeffs

    def coeff(self, i: int) -> int:
        """Certified coefficient of t^i; PrecisionError below the window."""
        if self.lo is not None and i < self.lo:
            raise PrecisionError(f"coefficient t^{i} below certified window lo={self.lo}")
        j = i - self.base
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return 0

    def norm(self) -> NormValue:
        """|alpha| = q^(leading index).  Raises PrecisionError when the whole
        certified window is zero but the tail below lo is unknown."""
        for j in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[j]:
                return NormValue.q_pow(self.base + j)
        if self.lo is None:
            return NormValue.zero()
        raise PrecisionError(
            f"norm undetermined: all certified coefficients (>= t^{self.lo}) vanish"
        )

    def norm_less_than(self, exp: int) -> bool:
        """Decide |alpha| < q^exp.  Decidable iff exp >= lo."""
        if self.lo is not None and exp < self.lo:
            raise PrecisionError(f"|alpha| < q^{exp} undecidable with lo={self.lo}")
        for j in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[j]:
                return self.base + j < exp
        return True

    # -- arithmetic --------------------------------------------------------------

    def _out_lo(self, other: "Laurent") -> Optional[int]:
        if self.lo is None:
            return other.lo
        if other.lo is None:
            return self.lo
        return max(self.lo, other.lo)

    def __add__(self, other: "Laurent") -> "Laurent":
        lo = self._out_lo(other)
        bases = [src.base for src in (self, other) if src.coeffs]
        if not bases:
            return Laurent(self.ctx, 0, (), lo)
        base = min(bases)
        hi = max(src.hi for src in (self, other) if src.coeffs)
        add = self.ctx.add
        out = [0] * (hi - base + 1)
        for src in (self, other):
            for j, c in enumerate(src.coeffs):
                out[src.base + j - base] = add(out[src.base + j - base], c)
        return Laurent(self.ctx, base, out, lo)

    def __neg__(self) -> "Laurent":
        neg = self.ctx.neg
        return Laurent(self.ctx, self.base, [neg(c) for c in self.coeffs], self.lo)

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def __mul__(self, other: "Laurent") -> "Laurent":
        ctx = self.ctx
        if (self.is_exact and not self.coeffs) or (other.is_exact and not other.coeffs):
            return Laurent.zero(ctx)
        if self.lo is None and other.lo is None:
            lo = None
        elif self.lo is None:
            lo = other.lo + self.hi
        elif other.lo is None:
            lo = self.lo + other.hi
        else:
            lo = max(self.lo + other.hi, other.lo + self.hi)
        if not self.coeffs or not other.coeffs:
            return Laurent(ctx, 0, (), lo)
        base = self.base + other.base
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        mul, add = ctx.mul, ctx.add
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return Laurent(ctx, base, out, lo)

    def scale(self, c: int) -> "Laurent":
        mul = self.ctx.mul
        return Laurent(self.ctx, self.base, [mul(c, x) for x in self.coeffs], self.lo)

    def shift(self, k: int) -> "Laurent":
        """Multiply by t^k (any integer k)."""
        lo = None if self.lo is None else self.lo + k
        return Laurent(self.ctx, self.base + k, self.coeffs, lo)

    def truncate(self, lo: int) -> "Laurent":
        """Weaken certification to [lo, oo); lo must not undercut the window."""
        if self.lo is not None and lo < self.lo:
            raise PrecisionError("cannot tighten a certification by truncation")
        return Laurent(self.ctx, self.base, self.coeffs, lo)

    def mul_poly(self, f: Poly) -> "Laurent":
        return self * Laurent.from_poly(f)

    # -- split -----------------------------------------------------------------

    def integer_part(self) -> Poly:
        """[alpha]: the polynomial part.  Requires lo <= 0 (exact above t^-1)."""
        if self.lo is not None and self.lo > 0:
            raise PrecisionError("integer part needs the window to reach t^0")
        if self.hi < 0:
            return Poly.zero(self.ctx)
        out = [0] * (self.hi + 1)
        for j, c in enumerate(self.coeffs):
            i = self.base + j
            if i >= 0:
                out[i] = c
        return Poly(self.ctx, out)

    def fractional_part(self) -> "Laurent":
        """{alpha}: coefficients at t^i, i <= -1, same certification."""
        if self.hi < 0:
            return self
        keep = [c for j, c in enumerate(self.coeffs) if self.base + j < 0]
        return Laurent(self.ctx, self.base, keep, self.lo)

    def is_torus_point(self) -> bool:
        """|alpha| < 1, i.e. no nonzero coefficient at t^i for i >= 0."""
        return all(c == 0 for j, c in enumerate(self.coeffs) if self.base + j >= 0)

    # -- comparisons / encoding ---------------------------------------------------

    def __eq__(self, other) -> bool:
        """Equality of certified data (same window semantics)."""
        if not isinstance(other, Laurent):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.lo == other.lo
            and self.base == other.base
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.ctx.q, self.base, self.coeffs, self.lo))

    def to_text(self) -> str:
        """Encode as "lo:hi:c_lo,...,c_hi" ("*" marks an exact value)."""
        lo_mark = "*" if self.lo is None else str(self.lo)
        if not self.coeffs:
            return f"{lo_mark}:{self.hi}:"
        return f"{lo_mark}:{self.hi}:" + ",".join(str(c) for c in self.coeffs)

    @classmethod
    def from_text(cls, ctx: FieldCtx, text: str) -> "Laurent":
        lo_part, hi_part, data = text.split(":")
        lo = None if lo_part == "*" else int(lo_part)
        hi = int(hi_part)
        coeffs = [int(c) for c in data.split(",")] if data else []
        base = hi - len(coeffs) + 1 if coeffs else (lo if lo is not None else 0)
        val = cls(ctx, base, coeffs, lo)
        if val.to_text() != text:
            raise ValueError(f"non-canonical Laurent encoding: {text!r}")
        return val

    def __repr__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*t^{self.base + j}")
        body = " + ".join(reversed(terms)) if terms else "0"
        tail = "" if self.lo is None else f" + O(t^{self.lo - 1})"
        return f"Laurent({body}{tail})"


def laurent_split(alpha: Laurent) -> tuple[Poly, Laurent]:
    """Split alpha = [alpha] + {alpha} with |{alpha}| < 1.

    The window must certify every index >= -1 with lo <= -1 (an exact value
    always qualifies).
    """
    if alpha.lo is not None and alpha.lo > -1:
        raise PrecisionError("laurent_split needs certification down to t^-1")
    return alpha.integer_part(), alpha.fractional_part()


def rational_to_laurent(a: Poly, r: Poly, lo: int) -> Laurent:
    """Expansion of a/r in K_oo, certified on [lo, oo).

    Uses exact long division: a*t^(-lo) = quot*r + rem with |rem| < |r|, so
    a/r agrees with quot*t^lo on all indices >= lo.
    """
    if r.is_zero:
        raise ZeroDivisionError("denominator is zero")
    if a.is_zero:
        return Laurent(a.ctx, 0, (), lo)
    shift = -lo
    if shift < 0:
        raise ValueError("lo must be <= 0 for a rational expansion")
    quot = (a.shift(shift)) // r
    return Laurent(a.ctx, lo, quot.coeffs, lo)


def irreducible_count(q: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_q (Moebius/necklace count)."""

    def mobius(n: int) -> int:
        out, m = 1, n
        f = 2
        while f * f <= m:
            if m % f == 0:
                m //= f
                if m % f == 0:
                    return 0
                out = -out
            f += 1
        if m > 1:
            out = -out
        return out

    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += mobius(d // e) * q**e
    return total // d
