"""
Exact arithmetic in cyclotomic fields, specialised to the real numbers that
show up as Laplacian eigenvalues of cycles, tori and circulants.

An element of Q(zeta_N) is stored as a sparse map ``exponent -> rational``
over a fixed basis of the field.  The basis is the CRT basis: write
N = k * r with r the radical of N, so that Q(zeta_N) is free over Q(zeta_r)
on 1, zeta_N, ..., zeta_N^(k-1), and Q(zeta_r) is the tensor product of the
Q(zeta_p) for p | r.  A power zeta_N^(q + k*s) is a basis element when every
residue ``s mod p`` is at most p - 2; otherwise the relation
1 + w + ... + w^(p-1) = 0 rewrites it.  Eigenvalues 2 - zeta^a - zeta^-a stay
sparse in this basis, and sums of reduced elements are already reduced, which
is what makes exact torus spectra cheap.

Keys (sorted tuples of ``(exponent, coefficient)`` pairs) are the internal
currency; :class:`CycloReal` wraps a key with its conductor.
"""
from __future__ import annotations

import functools
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, NamedTuple

import mpmath
from mpmath import iv

from .errors import InvalidParameter, PrecisionExhausted

Key = tuple  # tuple[tuple[int, int | Fraction], ...], sorted by exponent

ZERO_KEY: Key = ()

# interval-evaluation schedule for ordering
START_PRECISION = 64
MAX_PRECISION = 4096

_EPS = 2.0 ** -52


# ---------------------------------------------------------------------------
# integer helpers

@functools.lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of ``n`` as ``((p, e), ...)`` with p increasing."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def totient(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


# ---------------------------------------------------------------------------
# cyclotomic polynomials

class CyclotomicPolynomial(NamedTuple):
    """Phi_N with integer coefficients, constant term first."""

    n: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def _poly_divexact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic
    num = list(num)
    dq = len(num) - len(den)
    quot = [0] * (dq + 1)
    for i in range(dq, -1, -1):
        c = num[i + len(den) - 1]
        quot[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return quot


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> CyclotomicPolynomial:
    """The n-th cyclotomic polynomial, by exact division of x^n - 1.

    >>> cyclotomic_poly(4).coeffs
    (1, 0, 1)
    """
    if n < 1:
        raise InvalidParameter(f"cyclotomic_poly needs n >= 1, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_poly(d).coeffs)
    return CyclotomicPolynomial(n, tuple(poly))


# ---------------------------------------------------------------------------
# the CRT basis and reduction

class _Basis(NamedTuple):
    k: int
    r: int
    primes: tuple[int, ...]
    idempotents: tuple[int, ...]


@functools.lru_cache(maxsize=None)
def _basis(n: int) -> _Basis:
    primes = tuple(p for p, _ in factorize(n))
    r = math.prod(primes)
    idem = []
    for p in primes:
        cofactor = r // p
        idem.append(cofactor * pow(cofactor, -1, p) % r if p > 1 else 0)
    return _Basis(n // r, r, primes, tuple(idem))


@functools.lru_cache(maxsize=1 << 15)
def reduce_monomial(n: int, a: int) -> Key:
    """zeta_n^a written in the CRT basis of Q(zeta_n)."""
    a %= n
    b = _basis(n)
    k, r = b.k, b.r
    q, s = a % k, a // k
    bad = [(p, e) for p, e in zip(b.primes, b.idempotents) if s % p == p - 1]
    if not bad:
        return ((a, 1),)
    # move every bad residue to 0, then add back c * e for c in 0..p-2
    base = (s - sum((p - 1) * e for p, e in bad)) % r
    offsets = [0]
    for p, e in bad:
        offsets = [(o + c * e) % r for o in offsets for c in range(p - 1)]
    sign = -1 if len(bad) % 2 else 1
    return tuple(sorted((q + k * ((base + o) % r), sign) for o in offsets))


def reduce_terms(n: int, items: Iterable[tuple[int, Rational]]) -> Key:
    """Reduce an arbitrary combination sum(c * zeta_n^a) to its canonical key."""
    acc: dict[int, Rational] = {}
    for a, c in items:
        if not c:
            continue
        for idx, sgn in reduce_monomial(n, a):
            acc[idx] = acc.get(idx, 0) + sgn * c
    return tuple(sorted((i, c) for i, c in acc.items() if c))


def add_keys(k1: Key, k2: Key) -> Key:
    if not k1:
        return k2
    if not k2:
        return k1
    acc = dict(k1)
    for i, c in k2:
        v = acc.get(i, 0) + c
        if v:
            acc[i] = v
        else:
            del acc[i]
    return tuple(sorted(acc.items()))


def scale_key(key: Key, factor: Rational) -> Key:
    if not factor:
        return ZERO_KEY
    return tuple((i, c * factor) for i, c in key)


@functools.lru_cache(maxsize=1 << 15)
def _lifted_monomial(m: int, n: int, a: int) -> Key:
    return reduce_monomial(n, a * (n // m))


def lift_key(key: Key, m: int, n: int) -> Key:
    """Re-express an element of Q(zeta_m) inside Q(zeta_n); requires m | n."""
    if m == n or not key:
        return key
    if n % m:
        raise InvalidParameter(f"cannot lift conductor {m} into {n}")
    if key[0][0] == 0 and len(key) == 1:
        return key
    acc: dict[int, Rational] = {}
    for a, c in key:
        for idx, sgn in _lifted_monomial(m, n, a):
            acc[idx] = acc.get(idx, 0) + sgn * c
    return tuple(sorted((i, c) for i, c in acc.items() if c))


def is_rational_key(key: Key) -> bool:
    return not key or (len(key) == 1 and key[0][0] == 0)


@functools.lru_cache(maxsize=256)
def _cos_table(n: int) -> tuple[float, ...]:
    return tuple(math.cos(2.0 * math.pi * a / n) for a in range(n))


def key_float(n: int, key: Key) -> tuple[float, float]:
    """Double-precision value of a real key together with a rigorous-enough error bound."""
    if not key:
        return 0.0, 0.0
    table = _cos_table(n) if n <= 1 << 16 else None
    total = 0.0
    weight = 0.0
    for a, c in key:
        cos = table[a] if table is not None else math.cos(2.0 * math.pi * a / n)
        cf = float(c)
        total += cf * cos
        weight += abs(cf)
    return total, weight * (len(key) + 8) * _EPS


def key_interval(n: int, key: Key, prec: int):
    """An mpmath interval enclosing the real value of ``key`` at ``prec`` bits."""
    saved = iv.prec
    iv.prec = prec
    try:
        total = iv.mpf(0)
        for a, c in key:
            c = Fraction(c)
            coef = iv.mpf(c.numerator) / c.denominator
            total += coef * iv.cos(2 * iv.pi * a / n)
        return total
    finally:
        iv.prec = saved


def key_trace(n: int, key: Key) -> Fraction:
    """Average of the Galois conjugates; independent of the conductor used."""
    total = Fraction(0)
    for a, c in key:
        g = math.gcd(a, n)
        total += Fraction(c) * Fraction(mobius(n // g), totient(n // g))
    return total


def compare_keys(n: int, k1: Key, k2: Key) -> int:
    """Exact three-way comparison of two real keys at the same conductor."""
    if k1 == k2:
        return 0
    diff = add_keys(k1, scale_key(k2, -1))
    f, err = key_float(n, diff)
    if f > err:
        return 1
    if f < -err:
        return -1
    prec = START_PRECISION
    while prec <= MAX_PRECISION:
        box = key_interval(n, diff, prec)
        if box.a > 0:
            return 1
        if box.b < 0:
            return -1
        prec *= 2
    raise PrecisionExhausted(f"could not separate values within {MAX_PRECISION} bits")


# ---------------------------------------------------------------------------
# public value type

class Approximation(NamedTuple):
    value: mpmath.mpf
    error: mpmath.mpf


class CycloReal:
    """A real number in a cyclotomic field, held exactly.

    Instances are immutable.  Arithmetic between values with different
    conductors happens in the compositum Q(zeta_lcm).

    >>> eig_value(1, 4) + eig_value(1, 2) == 6
    True
    """

    __slots__ = ("conductor", "key")

    def __init__(self, conductor: int, key: Key = ZERO_KEY, *, check: bool = True):
        if conductor < 1:
            raise InvalidParameter("conductor must be positive")
        if check:
            key = reduce_terms(conductor, key)
        if is_rational_key(key):
            conductor = 1
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "key", key)
        if check and not self.is_real():
            raise InvalidParameter(f"{self!s} is not fixed by complex conjugation")

    def __setattr__(self, name, value):
        raise AttributeError("CycloReal is immutable")

    @classmethod
    def rational(cls, value) -> CycloReal:
        value = Fraction(value)
        if value.denominator == 1:
            value = value.numerator
        return cls(1, ((0, value),) if value else ZERO_KEY, check=False)

    @classmethod
    def from_power_coeffs(cls, conductor: int, coeffs: Iterable) -> CycloReal:
        """Build from coefficients of 1, zeta, zeta^2, ... (any length)."""
        items = [(i, _as_rational(c)) for i, c in enumerate(coeffs)]
        return cls(conductor, items)

    @classmethod
    def parse(cls, text: str) -> CycloReal:
        """Inverse of ``str``: ``"cyclo(N; c0, c1, ...)"``."""
        text = text.strip()
        if not (text.startswith("cyclo(") and text.endswith(")")):
            raise InvalidParameter(f"not a cyclo literal: {text!r}")
        body = text[len("cyclo("):-1]
        head, _, tail = body.partition(";")
        try:
            n = int(head)
            coeffs = [Fraction(c.strip()) for c in tail.split(",") if c.strip()]
        except ValueError as exc:
            raise InvalidParameter(f"malformed cyclo literal: {text!r}") from exc
        return cls.from_power_coeffs(n, coeffs)

    # -- coercion helpers

    def _coerce(self, other) -> CycloReal | None:
        if isinstance(other, CycloReal):
            return other
        if isinstance(other, (int, Fraction)):
            return CycloReal.rational(other)
        return None

    def _common(self, other: CycloReal) -> tuple[int, Key, Key]:
        n = math.lcm(self.conductor, other.conductor)
        return (
            n,
            lift_key(self.key, self.conductor, n),
            lift_key(other.key, other.conductor, n),
        )

    # -- arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n, a, b = self._common(other)
        return CycloReal(n, add_keys(a, b), check=False)

    __radd__ = __add__

    def __neg__(self):
        return CycloReal(self.conductor, scale_key(self.key, -1), check=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloReal(self.conductor, scale_key(self.key, other), check=False)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of a CycloReal by zero")
            return self * (Fraction(1) / other)
        return NotImplemented

    # -- comparison

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        _, a, b = self._common(other)
        return a == b

    def __hash__(self):
        return hash(key_trace(self.conductor, self.key))

    def cmp(self, other) -> int:
        other = self._coerce(other)
        n, a, b = self._common(other)
        return compare_keys(n, a, b)

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    # -- inspection

    def is_zero(self) -> bool:
        return not self.key

    def is_rational(self) -> bool:
        return is_rational_key(self.key)

    def conjugate(self) -> CycloReal:
        items = [(-a, c) for a, c in self.key]
        return CycloReal(self.conductor, reduce_terms(self.conductor, items), check=False)

    def is_real(self) -> bool:
        return self.conjugate().key == self.key

    def power_coeffs(self) -> list[Fraction]:
        """Coefficients in the power basis 1, zeta, ..., zeta^(phi(N)-1)."""
        n = self.conductor
        phi = cyclotomic_poly(n).coeffs
        deg = len(phi) - 1
        top = max((a for a, _ in self.key), default=0)
        poly = [Fraction(0)] * max(top + 1, deg)
        for a, c in self.key:
            poly[a] += c
        for i in range(len(poly) - 1, deg - 1, -1):
            c = poly[i]
            if c:
                for j, d in enumerate(phi):
                    poly[i - deg + j] -= c * d
        return poly[:deg]

    def __float__(self):
        return key_float(self.conductor, self.key)[0]

    def to_float(self, precision: int = 53) -> Approximation:
        """Value and error bound at ``precision`` bits (at least 53)."""
        if precision < 53:
            raise InvalidParameter("precision must be at least 53 bits")
        if not self.key:
            return Approximation(mpmath.mpf(0), mpmath.mpf(0))
        box = key_interval(self.conductor, self.key, precision + 8)
        with mpmath.workprec(precision + 8):
            lo, hi = mpmath.mpf(box.a), mpmath.mpf(box.b)
            mid = (lo + hi) / 2
            rad = (hi - lo) / 2
        with mpmath.workprec(precision):
            value = +mid
            error = rad + abs(value - mid)
        return Approximation(value, error)

    def decimal(self, digits: int = 12) -> str:
        if not self.key:
            return "0"
        if self.is_rational():
            c = Fraction(self.key[0][1])
            if c.denominator == 1:
                return str(c.numerator)
        bits = max(53, int(digits * 3.33) + 16)
        value = self.to_float(bits).value
        return mpmath.nstr(value, digits)

    def __str__(self):
        coeffs = self.power_coeffs() if self.key else [Fraction(0)]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        return f"cyclo({self.conductor}; {', '.join(str(c) for c in coeffs)})"

    def __repr__(self):
        return f"CycloReal({self!s} ~ {self.decimal(8)})"

    def __reduce__(self):
        return (_rebuild, (self.conductor, self.key))


def _rebuild(conductor, key):
    return CycloReal(conductor, key, check=False)


def _as_rational(c):
    if isinstance(c, (int, Fraction)):
        return c
    return Fraction(c)


@functools.lru_cache(maxsize=1 << 16)
def eig_key(j: int, m: int) -> tuple[int, Key]:
    """Reduced (conductor, key) for 4 sin^2(pi j / m)."""
    j %= m
    if j == 0:
        return 1, ZERO_KEY
    g = math.gcd(j, m)
    j, m = j // g, m // g
    key = reduce_terms(m, [(0, 2), (j, -1), (m - j, -1)])
    if is_rational_key(key):
        return 1, key
    return m, key


def eig_value(j: int, m: int) -> CycloReal:
    """4 sin^2(pi j / m) = 2 - zeta_m^j - zeta_m^-j, exactly."""
    if m < 2:
        raise InvalidParameter(f"eig_value needs m >= 2, got {m}")
    if not 0 <= j < m:
        raise InvalidParameter(f"eig_value needs 0 <= j < m, got j={j}, m={m}")
    n, key = eig_key(j, m)
    return CycloReal(n, key, check=False)


def cmp(a: CycloReal, b: CycloReal) -> int:
    """-1, 0 or 1 according to the real order of ``a`` and ``b``."""
    return a.cmp(b)
