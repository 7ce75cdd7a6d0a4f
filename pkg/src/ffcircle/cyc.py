"""Exact elements of Z[zeta_p] with a rational scale.

A value is ``(1/den) * sum(coeffs[j] * zeta^j, j = 0..p-2)`` where zeta is a
primitive p-th root of unity, ``coeffs`` are integers and ``den`` is a
positive integer with ``gcd(den, content(coeffs)) = 1``.  The basis
1, zeta, ..., zeta^(p-2) is a Z-basis of Z[zeta_p]; the relation
``1 + zeta + ... + zeta^(p-1) = 0`` is applied on construction, so equality
is decidable componentwise.  Complex embeddings exist for reports only.

Every character sum and Haar integral in this package is a CycValue, so the
acceptance checks are exact identities, never float comparisons.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence


class CycValue:
    __slots__ = ("p", "coeffs", "den")

    def __init__(self, p: int, coeffs: Sequence[int], den: int = 1):
        if len(coeffs) != p - 1:
            raise ValueError(f"need {p - 1} coefficients for Z[zeta_{p}]")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            den, coeffs = -den, [-c for c in coeffs]
        g = den
        for c in coeffs:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            coeffs = [c // g for c in coeffs]
            den //= g
        self.p = p
        self.coeffs = tuple(coeffs)
        self.den = den

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "CycValue":
        return cls(p, (0,) * (p - 1))

    @classmethod
    def one(cls, p: int) -> "CycValue":
        return cls.from_int(p, 1)

    @classmethod
    def from_int(cls, p: int, n: int) -> "CycValue":
        return cls(p, (n,) + (0,) * (p - 2))

    @classmethod
    def from_fraction(cls, p: int, x: Fraction) -> "CycValue":
        x = Fraction(x)
        return cls(p, (x.numerator,) + (0,) * (p - 2), x.denominator)

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> "CycValue":
        """zeta_p^k as an exact value."""
        return cls.from_exponent_counts(p, {k % p: 1})

    @classmethod
    def from_exponent_counts(cls, p: int, counts) -> "CycValue":
        """sum of counts[j] * zeta^j over j in [0, p); accepts dict or sequence.

        This is the workhorse for character sums: accumulate an integer
        histogram of psi-exponents, then convert once.
        """
        vec = [0] * p
        if isinstance(counts, dict):
            for j, c in counts.items():
                vec[j % p] += c
        else:
            for j, c in enumerate(counts):
                vec[j % p] += c
        # zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))
        top = vec[p - 1]
        return cls(p, [vec[j] - top for j in range(p - 1)])

    # -- queries ------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def as_rational(self) -> Optional[Fraction]:
        """The value as an exact rational if it lies in Q, else None.

        Rational iff coeffs[1] = ... = coeffs[p-2]; then the value is
        (coeffs[0] - coeffs[1]) / den  (using the vanishing of the zeta-sum).
        """
        tail = self.coeffs[1:]
        if tail and any(c != tail[0] for c in tail):
            return None
        t = tail[0] if tail else 0
        return Fraction(self.coeffs[0] - t, self.den)

    def as_int(self) -> Optional[int]:
        r = self.as_rational()
        if r is None or r.denominator != 1:
            return None
        return r.numerator

    # -- arithmetic ------------------------------------------------------------------

    def _check(self, other: "CycValue") -> None:
        if self.p != other.p:
            raise ValueError("mixed cyclotomic orders")

    def __add__(self, other: "CycValue") -> "CycValue":
        self._check(other)
        da, db = self.den, other.den
        return CycValue(
            self.p,
            [db * a + da * b for a, b in zip(self.coeffs, other.coeffs)],
            da * db,
        )

    def __neg__(self) -> "CycValue":
        return CycValue(self.p, [-c for c in self.coeffs], self.den)

    def __sub__(self, other: "CycValue") -> "CycValue":
        return self + (-other)

    def __mul__(self, other: "CycValue") -> "CycValue":
        self._check(other)
        p = self.p
        conv = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        conv[(i + j) % p] += a * b
        top = conv[p - 1]
        return CycValue(p, [conv[j] - top for j in range(p - 1)], self.den * other.den)

    def scale(self, x) -> "CycValue":
        """Multiply by an exact rational (int or Fraction)."""
        x = Fraction(x)
        return CycValue(
            self.p, [x.numerator * c for c in self.coeffs], self.den * x.denominator
        )

    def conjugate(self) -> "CycValue":
        """Complex conjugation zeta -> zeta^(-1)."""
        p = self.p
        vec = [0] * p
        for j, c in enumerate(self.coeffs):
            vec[(-j) % p] += c
        top = vec[p - 1]
        return CycValue(p, [vec[j] - top for j in range(p - 1)], self.den)

    # -- comparisons / reports ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycValue):
            return NotImplemented
        return self.p == other.p and self.den == other.den and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs, self.den))

    def complex_value(self) -> complex:
        """Embedding zeta = exp(2*pi*i/p); for human-readable reports only."""
        z = 0j
        for j, c in enumerate(self.coeffs):
            if c:
                z += c * cmath.exp(2j * cmath.pi * j / self.p)
        return z / self.den

    def magnitude(self) -> float:
        return abs(self.complex_value())

    # -- text encoding --------------------------------------------------------------------

    def to_text(self) -> str:
        """Encode as "scale_num/scale_den;[c0,...,c_{p-2}]" with a primitive
        integer vector (the content is pulled into the scale)."""
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        if g == 0:
            return f"0/1;[{','.join('0' for _ in self.coeffs)}]"
        vec = [c // g for c in self.coeffs]
        return f"{g}/{self.den};[" + ",".join(str(c) for c in vec) + "]"

    @classmethod
    def from_text(cls, p: int, text: str) -> "CycValue":
        scale_part, vec_part = text.split(";")
        num, den = (int(x) for x in scale_part.split("/"))
        if not (vec_part.startswith("[") and vec_part.endswith("]")):
            raise ValueError(f"malformed vector in {text!r}")
        vec = [int(x) for x in vec_part[1:-1].split(",")]
        return cls(p, [num * c for c in vec], den)

    def __repr__(self) -> str:
        return f"CycValue({self.to_text()})"
