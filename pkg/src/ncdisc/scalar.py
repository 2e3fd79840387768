"""Exact arithmetic in the rationals and in cyclotomic fields Q(zeta_m).

An element of Q(zeta_m) is stored as an integer coefficient vector of length
phi(m) together with one positive common denominator, i.e. the residue of a
rational polynomial modulo the m-th cyclotomic polynomial.  Operands of
different orders are embedded into Q(zeta_lcm) before combining.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

__all__ = [
    "Cyclo",
    "ScalarError",
    "as_scalar",
    "cyclotomic_polynomial",
    "euler_phi",
    "primitive_root",
    "zeta",
    "ZERO",
    "ONE",
]


class ScalarError(ArithmeticError):
    """Raised for invalid scalar operations such as division by zero."""


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficients low -> high)


def _poly_divexact(num: list[int], den: tuple[int, ...]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    out = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c == 0:
            continue
        q, r = divmod(c, lead)
        if r:
            raise ScalarError("inexact cyclotomic division")
        out[k - dd] = q
        for i, d in enumerate(den):
            num[k - dd + i] -= q * d
    if any(num[:dd]):
        raise ScalarError("inexact cyclotomic division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Return the m-th cyclotomic polynomial as integer coefficients, low degree first.

    Computed by dividing X^m - 1 by every Phi_d with d | m, d < m.

    >>> cyclotomic_polynomial(6)
    (1, -1, 1)
    """
    if m < 1:
        raise ValueError("order must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


@lru_cache(maxsize=None)
def _xpow_table(m: int, top: int) -> tuple[tuple[int, ...], ...]:
    """X^k mod Phi_m for k = 0..top, as integer vectors of length phi(m)."""
    phi = cyclotomic_polynomial(m)
    n = len(phi) - 1
    rows = []
    cur = [0] * n
    cur[0] = 1
    for _ in range(top + 1):
        rows.append(tuple(cur))
        # multiply by X, reduce using the monic relation X^n = -sum phi_i X^i
        carry = cur[-1]
        cur = [0] + cur[:-1]
        if carry:
            for i in range(n):
                cur[i] -= carry * phi[i]
    return tuple(rows)


def _xpow(m: int, k: int) -> tuple[int, ...]:
    k %= m
    return _xpow_table(m, m - 1)[k]


@lru_cache(maxsize=None)
def _reduction(m: int) -> tuple[tuple[int, ...], ...]:
    n = euler_phi(m)
    return _xpow_table(m, max(2 * n - 2, 0))


@lru_cache(maxsize=None)
def _embedding(m: int, big: int) -> tuple[tuple[int, ...], ...]:
    """Images of zeta_m^k (k < phi(m)) inside Q(zeta_big)."""
    step = big // m
    return tuple(_xpow(big, k * step) for k in range(euler_phi(m)))


def _normalize(num: list[int] | tuple[int, ...], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = math.gcd(den, *num)
    if g != 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


# ---------------------------------------------------------------------------


class Cyclo:
    """Element of Q(zeta_m); immutable.

    ``num`` holds integer coefficients of 1, zeta, zeta^2, ... and ``den`` is a
    shared positive denominator in lowest terms.
    """

    __slots__ = ("m", "num", "den", "_key")

    def __init__(self, m: int, num, den: int = 1, *, normalized: bool = False):
        if not normalized:
            if len(num) != euler_phi(m):
                raise ValueError(f"expected {euler_phi(m)} coefficients for order {m}")
            num, den = _normalize(num, den)
        self.m = m
        self.num = num
        self.den = den
        self._key = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def rational(cls, value: Union[int, Fraction]) -> "Cyclo":
        if isinstance(value, int):
            return cls(1, (value,), 1, normalized=True)
        value = Fraction(value)
        return cls(1, (value.numerator,), value.denominator, normalized=True)

    @classmethod
    def from_coeffs(cls, m: int, coeffs) -> "Cyclo":
        """Build from rational coefficients of 1, zeta_m, ..., zeta_m^(phi-1)."""
        fr = [Fraction(c) for c in coeffs]
        den = math.lcm(*(c.denominator for c in fr)) if fr else 1
        return cls(m, [int(c * den) for c in fr], den)

    # -- basic predicates -------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return any(self.num)

    def is_rational(self) -> bool:
        return self.descend().m == 1

    def is_one(self) -> bool:
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def to_fraction(self) -> Fraction:
        d = self.descend()
        if d.m != 1:
            raise ScalarError(f"{self} is not rational")
        return Fraction(d.num[0], d.den)

    def to_complex(self) -> complex:
        """Numeric value under zeta_m = exp(2 pi i / m); only for testing."""
        import cmath

        z = cmath.exp(2j * cmath.pi / self.m)
        return sum(c * z**k for k, c in enumerate(self.num)) / self.den

    # -- field embedding --------------------------------------------------

    def embed(self, big: int) -> "Cyclo":
        if big == self.m:
            return self
        if big % self.m:
            raise ValueError(f"Q(zeta_{self.m}) does not embed in Q(zeta_{big})")
        n = euler_phi(big)
        if self.m == 1:
            return Cyclo(big, (self.num[0],) + (0,) * (n - 1), self.den, normalized=True)
        out = [0] * n
        for c, img in zip(self.num, _embedding(self.m, big)):
            if c:
                for i, v in enumerate(img):
                    if v:
                        out[i] += c * v
        return Cyclo(big, tuple(out), self.den, normalized=True)

    def descend(self) -> "Cyclo":
        """Return the same element written over the smallest Q(zeta_d) containing it."""
        if self.m == 1:
            return self
        for d in _divisors(self.m):
            if d == self.m:
                return self
            sol = _solve_embedding(d, self.m, self.num)
            if sol is not None:
                num, den = _normalize(sol[0], sol[1] * self.den)
                return Cyclo(d, num, den, normalized=True)
        return self

    # -- arithmetic -------------------------------------------------------

    def _align(self, other: "Cyclo") -> tuple["Cyclo", "Cyclo"]:
        if self.m == other.m:
            return self, other
        if other.m == 1:
            return self, other.embed(self.m)
        if self.m == 1:
            return self.embed(other.m), other
        big = math.lcm(self.m, other.m)
        return self.embed(big), other.embed(big)

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._align(other)
        if a.den == b.den:
            num = [x + y for x, y in zip(a.num, b.num)]
            den = a.den
        else:
            num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
            den = a.den * b.den
        num, den = _normalize(num, den)
        return Cyclo(a.m, num, den, normalized=True)

    __radd__ = __add__

    def __neg__(self) -> "Cyclo":
        return Cyclo(self.m, tuple(-c for c in self.num), self.den, normalized=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.m == 1:
            c = other.num[0]
            if c == 0:
                return ZERO
            num, den = _normalize([x * c for x in self.num], self.den * other.den)
            return Cyclo(self.m, num, den, normalized=True)
        if self.m == 1:
            return other * self
        a, b = self._align(other)
        n = len(a.num)
        conv = [0] * (2 * n - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        conv[i + j] += x * y
        out = list(conv[:n])
        red = _reduction(a.m)
        for k in range(n, 2 * n - 1):
            c = conv[k]
            if c:
                for i, v in enumerate(red[k]):
                    if v:
                        out[i] += c * v
        num, den = _normalize(out, a.den * b.den)
        return Cyclo(a.m, num, den, normalized=True)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclo":
        if self.is_zero():
            raise ScalarError("division by zero")
        if self.m == 1:
            n = self.num[0]
            return Cyclo(1, (self.den,), n, normalized=False)
        inv = _poly_inverse_mod(list(self.coeffs), self.m)
        return Cyclo.from_coeffs(self.m, inv)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "Cyclo":
        if not isinstance(k, int):
            return NotImplemented
        base = self
        if k < 0:
            base = base.inverse()
            k = -k
        result = ONE
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison, hashing, printing -----------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.m == other.m:
            return self.den == other.den and self.num == other.num
        a, b = self._align(other)
        return a.den == b.den and a.num == b.num

    def __hash__(self) -> int:
        if self._key is None:
            d = self.descend()
            self._key = (d.m, d.num, d.den)
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Cyclo({self})"

    def __str__(self) -> str:
        d = self.descend()
        if d.m == 1:
            return _fmt_fraction(Fraction(d.num[0], d.den))
        parts = []
        for k, c in enumerate(d.num):
            if not c:
                continue
            q = Fraction(c, d.den)
            if k == 0:
                parts.append(_fmt_fraction(q))
                continue
            z = f"zeta({d.m},{k})"
            if q == 1:
                parts.append(z)
            elif q == -1:
                parts.append("-" + z)
            else:
                parts.append(f"{_fmt_fraction(q)}*{z}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def is_compound(self) -> bool:
        """True if the printed form is a sum and needs parentheses in a product."""
        d = self.descend()
        return sum(1 for c in d.num if c) > 1


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@lru_cache(maxsize=None)
def _divisors(m: int) -> tuple[int, ...]:
    return tuple(d for d in range(1, m + 1) if m % d == 0)


def _galois(m: int, num: tuple[int, ...], k: int) -> list[int]:
    """Image of sum num[j] zeta_m^j under zeta_m -> zeta_m^k."""
    out = [0] * len(num)
    for j, c in enumerate(num):
        if c:
            for i, v in enumerate(_xpow(m, j * k)):
                if v:
                    out[i] += c * v
    return out


def _maybe_in_subfield(d: int, m: int, num: tuple[int, ...], probes: int = 2) -> bool:
    """Cheap necessary test: fixed by a few automorphisms that fix Q(zeta_d)."""
    seen = 0
    for k in range(1 + d, m, d):
        if math.gcd(k, m) != 1:
            continue
        if _galois(m, num, k) != list(num):
            return False
        seen += 1
        if seen == probes:
            break
    return True


def _solve_embedding(d: int, m: int, target: tuple[int, ...]):
    """Find integer vector y and denominator with sum y_k * embed(zeta_d^k) = target, else None."""
    if not _maybe_in_subfield(d, m, target):
        return None
    cols = _embedding(d, m)
    n_rows = euler_phi(m)
    n_cols = len(cols)
    rows = [[Fraction(cols[j][i]) for j in range(n_cols)] + [Fraction(target[i])] for i in range(n_rows)]
    piv_cols = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n_rows):
        if rows[i][-1] != 0:
            return None
    y = [Fraction(0)] * n_cols
    for i, c in enumerate(piv_cols):
        y[c] = rows[i][-1]
    den = math.lcm(*(v.denominator for v in y))
    return [int(v * den) for v in y], den


def _poly_inverse_mod(a: list[Fraction], m: int) -> list[Fraction]:
    """Inverse of a(X) modulo Phi_m(X) via the extended Euclidean algorithm over Q."""
    f = [Fraction(c) for c in cyclotomic_polynomial(m)]

    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    def divmod_poly(num, den):
        num = list(num)
        q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
        while len(trim(num)) >= len(den):
            shift = len(num) - len(den)
            c = num[-1] / den[-1]
            q[shift] = c
            for i, d in enumerate(den):
                num[shift + i] -= c * d
        return trim(q), num

    def sub(p, q):
        n = max(len(p), len(q))
        return trim([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)])

    def mul(p, q):
        if not p or not q:
            return []
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            for j, y in enumerate(q):
                out[i + j] += x * y
        return trim(out)

    r0, r1 = trim(list(f)), trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
    if len(r0) != 1:
        raise ScalarError("element not invertible modulo the cyclotomic polynomial")
    c = r0[0]
    inv = [v / c for v in s0]
    n = euler_phi(m)
    _, rem = divmod_poly(inv, f) if len(inv) > n else ([], inv)
    rem = list(rem) + [Fraction(0)] * (n - len(rem))
    return rem[:n]


def _coerce(x):
    if isinstance(x, Cyclo):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclo.rational(x)
    return None


def as_scalar(x) -> Cyclo:
    """Coerce an int, Fraction or Cyclo into a Cyclo."""
    c = _coerce(x)
    if c is None:
        raise TypeError(f"cannot interpret {x!r} as a scalar")
    return c


def zeta(m: int, k: int = 1) -> Cyclo:
    """zeta_m^k with zeta_m = exp(2 pi i / m)."""
    if m < 1:
        raise ValueError("order must be positive")
    return Cyclo(m, _xpow(m, k), 1, normalized=True)


def primitive_root(m: int, k: int = 1) -> Cyclo:
    """Return zeta_m^k reduced modulo Phi_m."""
    return zeta(m, k)


ZERO = Cyclo(1, (0,), 1, normalized=True)
ONE = Cyclo(1, (1,), 1, normalized=True)
