"""Exact arithmetic in the cyclotomic field Q(zeta_N).

Elements are stored in the power basis ``1, zeta, ..., zeta^(phi(N)-1)``,
reduced modulo the N-th cyclotomic polynomial, so two elements are equal
exactly when their coefficient tuples are equal.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

from .errors import CyclotomicDivisionError, StructuralError, UnsupportedEmbeddingError


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # den is monic up to sign (+-1 leading coefficient)
    num = list(num)
    lead = den[-1]
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // lead
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first (Mobius product formula)."""
    numer, denom = [1], [1]
    for d in range(1, n + 1):
        if n % d:
            continue
        mu = _mobius(n // d)
        factor = [-1] + [0] * (d - 1) + [1]  # x^d - 1
        if mu == 1:
            numer = _poly_mul(numer, factor)
        elif mu == -1:
            denom = _poly_mul(denom, factor)
    return tuple(_poly_divexact(numer, denom))


class _Field:
    """Per-order tables: phi(N) and the reduced form of zeta^e for 0 <= e < N."""

    def __init__(self, n: int):
        self.n = n
        phi_poly = cyclotomic_polynomial(n)
        self.phi = len(phi_poly) - 1
        self.poly = phi_poly
        table = []
        cur = [0] * self.phi
        cur[0] = 1
        for _ in range(n):
            table.append(tuple(cur))
            # multiply by x and reduce with the monic Phi_N
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(self.phi):
                    cur[j] -= top * phi_poly[j]
        self.reduce_table = tuple(table)


@lru_cache(maxsize=None)
def field(n: int) -> _Field:
    if n < 1:
        raise StructuralError("cyclotomic order must be positive")
    return _Field(n)


def euler_phi(n: int) -> int:
    return field(n).phi


_ZERO = Fraction(0)


def _normalize(nums: list, den: int) -> tuple[tuple, int]:
    if den < 0:
        nums, den = [-a for a in nums], -den
    g = math.gcd(den, *nums)
    if g != 1:
        nums, den = [a // g for a in nums], den // g
    return tuple(nums), den


class Cyclotomic:
    """An element of Q(zeta_N), immutable and hashable.

    Stored as integer numerators over one positive common denominator, in
    lowest terms. Arithmetic with ``int`` and ``Fraction`` operands coerces
    them into the field; mixing two different orders raises
    :class:`StructuralError` (use :meth:`to_order` to lift explicitly).
    """

    __slots__ = ("order", "nums", "den", "_hash")

    def __init__(self, order: int, coeffs: Iterable):
        f = field(order)
        cs = [Fraction(c) for c in coeffs]
        if len(cs) != f.phi:
            raise StructuralError(f"Q(zeta_{order}) elements need {f.phi} coefficients, got {len(cs)}")
        den = math.lcm(*(c.denominator for c in cs))
        self.order = order
        self.nums, self.den = _normalize([c.numerator * (den // c.denominator) for c in cs], den)
        self._hash = None

    @classmethod
    def _make(cls, order: int, nums, den: int) -> Cyclotomic:
        obj = object.__new__(cls)
        obj.order = order
        obj.nums, obj.den = _normalize(nums, den)
        obj._hash = None
        return obj

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.den) for a in self.nums)

    # -- constructors -------------------------------------------------------

    @classmethod
    def rational(cls, q, order: int) -> Cyclotomic:
        q = Fraction(q)
        phi = field(order).phi
        return cls._make(order, [q.numerator] + [0] * (phi - 1), q.denominator)

    @classmethod
    def zero(cls, order: int) -> Cyclotomic:
        return cls.rational(0, order)

    @classmethod
    def one(cls, order: int) -> Cyclotomic:
        return cls.rational(1, order)

    @classmethod
    def zeta(cls, order: int, k: int = 1) -> Cyclotomic:
        """zeta_N^k for the fixed primitive root zeta_N = exp(2 pi i / N)."""
        f = field(order)
        return cls._make(order, list(f.reduce_table[k % order]), 1)

    @classmethod
    def coerce(cls, value, order: int) -> Cyclotomic:
        if isinstance(value, Cyclotomic):
            if value.order != order:
                raise StructuralError(f"scalar of Q(zeta_{value.order}) used in Q(zeta_{order})")
            return value
        if isinstance(value, (int, Rational)):
            return cls.rational(value, order)
        raise TypeError(f"cannot coerce {type(value).__name__} to Cyclotomic")

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.nums)

    def __bool__(self) -> bool:
        return any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def is_one(self) -> bool:
        return self.den == 1 and self.nums[0] == 1 and self.is_rational()

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.nums[0], self.den)

    # -- arithmetic -----------------------------------------------------------

    def _other(self, other):
        if isinstance(other, Cyclotomic):
            if other.order != self.order:
                raise StructuralError(
                    f"cannot combine Q(zeta_{self.order}) with Q(zeta_{other.order})"
                )
            return other
        if isinstance(other, (int, Rational)):
            return Cyclotomic.rational(other, self.order)
        return None

    def _addsub(self, o: Cyclotomic, sign: int) -> Cyclotomic:
        if not any(o.nums):
            return self
        if not any(self.nums):
            return o if sign > 0 else -o
        d1, d2 = self.den, o.den
        if d1 == d2:
            nums = [a + sign * b for a, b in zip(self.nums, o.nums)]
            return Cyclotomic._make(self.order, nums, d1)
        nums = [a * d2 + sign * b * d1 for a, b in zip(self.nums, o.nums)]
        return Cyclotomic._make(self.order, nums, d1 * d2)

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._addsub(o, 1)

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(Cyclotomic)
        obj.order, obj.nums, obj.den, obj._hash = self.order, tuple(-a for a in self.nums), self.den, None
        return obj

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._addsub(o, -1)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o._addsub(self, -1)

    def scale(self, q) -> Cyclotomic:
        q = Fraction(q)
        return Cyclotomic._make(self.order, [a * q.numerator for a in self.nums], self.den * q.denominator)

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return Cyclotomic._make(self.order, [a * other for a in self.nums], self.den)
        if isinstance(other, Rational) and not isinstance(other, Cyclotomic):
            return self.scale(other)
        o = self._other(other)
        if o is None:
            return NotImplemented
        an, bn = self.nums, o.nums
        if not any(an) or not any(bn):
            return Cyclotomic.zero(self.order)
        if not any(bn[1:]):
            b0 = bn[0]
            return Cyclotomic._make(self.order, [a * b0 for a in an], self.den * o.den)
        if not any(an[1:]):
            a0 = an[0]
            return Cyclotomic._make(self.order, [a0 * b for b in bn], self.den * o.den)
        n = self.order
        f = field(n)
        phi = f.phi
        acc = [0] * (2 * phi - 1)
        for i, a in enumerate(an):
            if a:
                for j, b in enumerate(bn):
                    if b:
                        acc[i + j] += a * b
        out = acc[:phi]
        table = f.reduce_table
        for e in range(phi, 2 * phi - 1):
            c = acc[e]
            if c:
                for j, t in enumerate(table[e % n]):
                    if t:
                        out[j] += c * t
        return Cyclotomic._make(n, out, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> Cyclotomic:
        if self.is_zero():
            raise CyclotomicDivisionError("division by zero in Q(zeta_N)")
        if self.is_rational():
            return Cyclotomic.rational(Fraction(self.den, self.nums[0]), self.order)
        return Cyclotomic(self.order, _inverse_coeffs(self.order, self.coeffs))

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> Cyclotomic:
        if not isinstance(k, int):
            return NotImplemented
        base = self
        if k < 0:
            base, k = self.inverse(), -k
        result = Cyclotomic.one(self.order)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conjugate(self) -> Cyclotomic:
        """Complex conjugation zeta -> zeta^-1."""
        f = field(self.order)
        out = [0] * f.phi
        for j, a in enumerate(self.nums):
            if a:
                for i, t in enumerate(f.reduce_table[(-j) % self.order]):
                    if t:
                        out[i] += a * t
        return Cyclotomic._make(self.order, out, self.den)

    def to_order(self, new_order: int) -> Cyclotomic:
        """Embed Q(zeta_N) into Q(zeta_M) for N | M via zeta_N = zeta_M^(M/N)."""
        if new_order == self.order:
            return self
        if new_order % self.order:
            raise UnsupportedEmbeddingError(f"Q(zeta_{self.order}) does not embed in Q(zeta_{new_order})")
        step = new_order // self.order
        f = field(new_order)
        out = [0] * f.phi
        for j, a in enumerate(self.nums):
            if a:
                for i, t in enumerate(f.reduce_table[(j * step) % new_order]):
                    if t:
                        out[i] += a * t
        return Cyclotomic._make(new_order, out, self.den)

    def to_complex(self) -> complex:
        n = self.order
        return sum(
            (a / self.den * cmath.exp(2j * math.pi * j / n) for j, a in enumerate(self.nums) if a),
            0j,
        )

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Cyclotomic):
            return self.order == other.order and self.den == other.den and self.nums == other.nums
        if isinstance(other, (int, Rational)):
            return self.is_rational() and Fraction(self.nums[0], self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self.nums[0], self.den))
            else:
                self._hash = hash((self.order, self.nums, self.den))
        return self._hash

    def sort_key(self) -> tuple:
        return self.coeffs

    def __repr__(self) -> str:
        return f"Cyclotomic({self.order}, {[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_cyclotomic(self)


@lru_cache(maxsize=4096)
def _inverse_coeffs(order: int, coeffs: tuple) -> tuple:
    # Solve (multiplication-by-a matrix) * c = e_0 over Q.
    f = field(order)
    phi = f.phi
    a = Cyclotomic(order, coeffs)
    cols = [(a * Cyclotomic.zeta(order, j)).coeffs for j in range(phi)]
    m = [[cols[j][i] for j in range(phi)] + [Fraction(int(i == 0))] for i in range(phi)]
    for c in range(phi):
        p = next(r for r in range(c, phi) if m[r][c])
        m[c], m[p] = m[p], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for r in range(phi):
            if r != c and m[r][c]:
                fac = m[r][c]
                m[r] = [x - fac * y for x, y in zip(m[r], m[c])]
    return tuple(m[r][phi] for r in range(phi))


def root_of_unity(n: int, k: int, order: int) -> Cyclotomic:
    """zeta_n^k inside Q(zeta_N); requires n | N."""
    if n < 1 or order % n:
        raise UnsupportedEmbeddingError(f"zeta_{n} does not live in Q(zeta_{order})")
    return Cyclotomic.zeta(order, (k % n) * (order // n))


def pack(c: Cyclotomic) -> tuple[int, tuple[tuple[int, int], ...]]:
    """(denominator, nonzero (power, numerator) pairs), the form :func:`dot_packed` consumes."""
    return c.den, tuple((i, a) for i, a in enumerate(c.nums) if a)


def dot_packed(order: int, pairs) -> Cyclotomic:
    """sum x*y over pairs of packed elements, reduced once at the end.

    Products are accumulated as unreduced integer polynomials grouped by
    denominator, which avoids building an object per term.
    """
    f = field(order)
    phi = f.phi
    width = 2 * phi - 1
    acc: dict[int, list[int]] = {}
    for (da, xa), (db, xb) in pairs:
        if not xa or not xb:
            continue
        d = da * db
        row = acc.get(d)
        if row is None:
            row = acc[d] = [0] * width
        for i, a in xa:
            for j, b in xb:
                row[i + j] += a * b
    if not acc:
        return Cyclotomic.zero(order)
    den = math.lcm(*acc)
    total = [0] * width
    for d, row in acc.items():
        s = den // d
        for k, v in enumerate(row):
            if v:
                total[k] += v * s
    out = total[:phi]
    for e in range(phi, width):
        c = total[e]
        if c:
            for j, t in enumerate(f.reduce_table[e % order]):
                if t:
                    out[j] += c * t
    return Cyclotomic._make(order, out, den)


def cyc_dot(order: int, xs: Sequence[Cyclotomic], ys: Sequence[Cyclotomic]) -> Cyclotomic:
    """sum x_i * y_i computed exactly with a single reduction."""
    for c in (*xs, *ys):
        if c.order != order:
            raise StructuralError(f"cyc_dot over Q(zeta_{order}) got an element of Q(zeta_{c.order})")
    return dot_packed(order, [(pack(x), pack(y)) for x, y in zip(xs, ys)])


def cyc_arith(a: Cyclotomic, b: Cyclotomic, op: str) -> Cyclotomic:
    ops = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
    }
    return ops[op]()


def cyc_to_float(a: Cyclotomic) -> tuple[float, float]:
    z = a.to_complex()
    return (z.real, z.imag)


def default_order(torsion_orders: Sequence[int] = (), extra: Sequence[int] = ()) -> int:
    """lcm(4, torsion orders, requested orders): i and every torsion root must embed."""
    return math.lcm(4, *torsion_orders, *extra)


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_cyclotomic(a: Cyclotomic) -> str:
    """Text form accepted by the expression parser, e.g. ``(1/2 - 3*zeta(12)^2)``."""
    if a.is_rational():
        return _fmt_fraction(a.coeffs[0])
    parts = []
    for j, c in enumerate(a.coeffs):
        if not c:
            continue
        if j == 0:
            body = _fmt_fraction(abs(c))
        else:
            atom = f"zeta({a.order})^{j}"
            body = atom if abs(c) == 1 else f"{_fmt_fraction(abs(c))}*{atom}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return f"({text})"


cyc_root_of_unity = root_of_unity
