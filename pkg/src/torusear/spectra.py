"""
Exact Laplacian spectra as multisets of cyclotomic reals.

Closed forms cover cycles, tori and circulants; ``spectrum_sum`` is the
sumset that realises the Cartesian product and ``spectrum_quotient`` undoes
it.  ``char_poly`` and ``numeric_spectrum`` work from a matrix and give two
routes that are independent of the closed forms.
"""
from __future__ import annotations

import functools
import hashlib
import json
import math
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import cyclo
from .cyclo import CycloReal, Key, add_keys, compare_keys, eig_key, key_float, lift_key
from .errors import DegenerateSpectrum, InvalidParameter, NotAProduct


_EPS = 2.0 ** -52


class Spectrum:
    """A multiset of exact real eigenvalues, sorted ascending.

    All values are stored as keys at a single conductor ``N`` so that sums
    and equality tests need no further reduction.  Two spectra compare equal
    exactly when they are the same multiset.
    """

    __slots__ = ("conductor", "_mults", "_order", "_approx")

    def __init__(self, conductor: int, mults: dict[Key, int], approx=None):
        if any(m <= 0 for m in mults.values()):
            raise InvalidParameter("multiplicities must be positive")
        self.conductor = conductor
        self._mults = mults
        # approx maps key -> (double value, error bound)
        if approx is None:
            approx = {k: key_float(conductor, k) for k in mults}
        self._approx = approx
        self._order = _sorted_keys(conductor, approx)

    @classmethod
    def from_values(cls, values: Iterable[tuple[CycloReal, int]]) -> Spectrum:
        values = [(v if isinstance(v, CycloReal) else CycloReal.rational(v), m) for v, m in values]
        n = math.lcm(1, *(v.conductor for v, _ in values))
        mults: dict[Key, int] = {}
        for v, m in values:
            if m < 0:
                raise InvalidParameter("multiplicities must be non-negative")
            if m:
                k = lift_key(v.key, v.conductor, n)
                mults[k] = mults.get(k, 0) + m
        return cls(n, mults)

    @classmethod
    def from_mapping(cls, mapping: dict) -> Spectrum:
        """Convenience constructor: ``{value: multiplicity}``."""
        return cls.from_values(mapping.items())

    # -- access

    @property
    def total_count(self) -> int:
        return sum(self._mults.values())

    def __len__(self):
        return len(self._order)

    def keys(self) -> tuple[Key, ...]:
        return self._order

    def items(self) -> list[tuple[Key, int]]:
        return [(k, self._mults[k]) for k in self._order]

    @property
    def entries(self) -> list[tuple[CycloReal, int]]:
        n = self.conductor
        return [(CycloReal(n, k, check=False), self._mults[k]) for k in self._order]

    def multiplicity(self, value) -> int:
        if not isinstance(value, CycloReal):
            value = CycloReal.rational(value)
        n = math.lcm(self.conductor, value.conductor)
        if n != self.conductor:
            return self.lift(n).multiplicity(value)
        return self._mults.get(lift_key(value.key, value.conductor, n), 0)

    def approx(self, key: Key) -> tuple[float, float]:
        return self._approx[key]

    def floats(self) -> np.ndarray:
        """All eigenvalues as doubles, repeated by multiplicity, ascending."""
        vals = [self._approx[k][0] for k in self._order]
        reps = [self._mults[k] for k in self._order]
        return np.repeat(np.array(vals, dtype=float), reps)

    def trace(self) -> CycloReal:
        acc: Key = ()
        for k, m in self._mults.items():
            acc = add_keys(acc, cyclo.scale_key(k, m))
        return CycloReal(self.conductor, acc, check=False)

    def lift(self, n: int) -> Spectrum:
        if n == self.conductor:
            return self
        mults: dict[Key, int] = {}
        for k, m in self._mults.items():
            k2 = lift_key(k, self.conductor, n)
            mults[k2] = mults.get(k2, 0) + m
        return Spectrum(n, mults)

    # -- equality

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return _spectra_equal(self, other)

    def __hash__(self):
        return hash((self.total_count, len(self._order)))

    # -- serialisation

    def to_dict(self, digits: int = 12) -> dict:
        return {
            "entries": [
                {"value_decimal": v.decimal(digits), "value_exact": str(v), "mult": m}
                for v, m in self.entries
            ]
        }

    def to_json(self, digits: int = 12) -> str:
        return json.dumps(self.to_dict(digits))

    @classmethod
    def from_dict(cls, data: dict, value_field: str = "value") -> Spectrum:
        try:
            raw = data["entries"]
            values = [(_parse_value(e, value_field), int(e["mult"])) for e in raw]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameter(f"malformed spectrum JSON: {exc}") from exc
        return cls.from_values(values)

    @classmethod
    def from_json(cls, text: str) -> Spectrum:
        try:
            data = json.loads(text)
        except ValueError as exc:
            raise InvalidParameter(f"malformed spectrum JSON: {exc}") from exc
        return cls.from_dict(data)

    def __repr__(self):
        body = ", ".join(f"{v.decimal(6)}:{m}" for v, m in self.entries)
        return f"Spectrum({{{body}}})"


def _parse_value(entry: dict, field: str) -> CycloReal:
    exact = entry.get(f"{field}_exact")
    if exact is not None:
        return CycloReal.parse(exact)
    # decimal-only input is read as an exact rational
    return CycloReal.rational(Fraction(entry[f"{field}_decimal"]))


def _sorted_keys(n: int, approx: dict[Key, tuple[float, float]]) -> tuple[Key, ...]:
    order = sorted(approx, key=lambda k: approx[k][0])
    # float enclosures that overlap are ordered exactly
    i = 0
    while i < len(order) - 1:
        j = i
        while j < len(order) - 1:
            f1, e1 = approx[order[j]]
            f2, e2 = approx[order[j + 1]]
            if f2 - f1 > e1 + e2:
                break
            j += 1
        if j > i:
            order[i:j + 1] = sorted(order[i:j + 1], key=functools.cmp_to_key(
                lambda a, b: compare_keys(n, a, b)))
        i = j + 1
    return tuple(order)


def _spectra_equal(a: Spectrum, b: Spectrum) -> bool:
    if len(a) != len(b) or a.total_count != b.total_count:
        return False
    for ka, kb in zip(a._order, b._order):
        if a._mults[ka] != b._mults[kb]:
            return False
        fa, ea = a._approx[ka]
        fb, eb = b._approx[kb]
        if abs(fa - fb) > ea + eb:
            return False
    n = math.lcm(a.conductor, b.conductor)
    a, b = a.lift(n), b.lift(n)
    return a._mults == b._mults


# ---------------------------------------------------------------------------
# closed forms

@functools.lru_cache(maxsize=512)
def _cycle_spectrum_at(m: int, n: int) -> Spectrum:
    # 4 sin^2(pi j/m) = 2 - zeta_n^a - zeta_n^-a with a = j n/m; j and m - j agree
    step = n // m
    mults: dict[Key, int] = {}
    approx = {}
    for j in range(m // 2 + 1):
        a = j * step
        key = cyclo.reduce_terms(n, ((0, 2), (a, -1), (n - a, -1))) if j else ()
        mults[key] = mults.get(key, 0) + (1 if j == 0 or 2 * j == m else 2)
        if key not in approx:
            approx[key] = key_float(n, key)
    return Spectrum(n, mults, approx)


def cycle_spectrum(m: int, conductor: int | None = None) -> Spectrum:
    """{4 sin^2(pi j / m) : j = 0..m-1}.

    ``conductor`` (a multiple of m) only changes the internal representation;
    passing the conductor of a spectrum you intend to combine with saves a lift.
    """
    if m < 2:
        raise InvalidParameter(f"cycle length must be at least 2, got {m}")
    if conductor is None:
        conductor = m
    elif conductor % m:
        raise InvalidParameter(f"conductor {conductor} is not a multiple of {m}")
    return _cycle_spectrum_at(m, conductor)


def _sum_at(n: int, s1: Spectrum, s2: Spectrum) -> Spectrum:
    items2 = [(k2, m2, s2._approx[k2]) for k2, m2 in s2._mults.items()]
    acc: dict[Key, int] = {}
    approx: dict[Key, tuple[float, float]] = {}
    get = acc.get
    for k1, m1 in s1._mults.items():
        f1, e1 = s1._approx[k1]
        base = dict(k1)
        for k2, m2, (f2, e2) in items2:
            if not k2:
                k = k1
            elif not k1:
                k = k2
            else:
                d = base.copy()
                for i, c in k2:
                    v = d.get(i, 0) + c
                    if v:
                        d[i] = v
                    else:
                        del d[i]
                k = tuple(sorted(d.items()))
            prev = get(k)
            if prev is None:
                acc[k] = m1 * m2
                f = f1 + f2
                approx[k] = (f, e1 + e2 + abs(f) * _EPS)
            else:
                acc[k] = prev + m1 * m2
    return Spectrum(n, acc, approx)


def spectrum_sum(s1: Spectrum, s2: Spectrum) -> Spectrum:
    """All pairwise sums a + b with multiplicities multiplied: the spectrum of a Cartesian product."""
    n = math.lcm(s1.conductor, s2.conductor)
    return _sum_at(n, s1.lift(n), s2.lift(n))


@functools.lru_cache(maxsize=64)
def _torus_spectrum(shape: tuple[int, ...]) -> Spectrum:
    n = math.lcm(*shape)
    spec = _cycle_spectrum_at(shape[0], n)
    for m in shape[1:]:
        spec = _sum_at(n, spec, _cycle_spectrum_at(m, n))
    return spec


def torus_spectrum(shape: Sequence[int]) -> Spectrum:
    """Spectrum of C_{m_1} x ... x C_{m_p}: sums of one cycle eigenvalue per factor."""
    shape = tuple(shape)
    if not shape:
        raise InvalidParameter("a torus needs at least one factor")
    if any(m < 2 for m in shape):
        raise InvalidParameter(f"cycle lengths must be at least 2: {shape}")
    return _torus_spectrum(shape)


def validate_jumps(n: int, jumps: Sequence[int]) -> tuple[int, ...]:
    jumps = tuple(jumps)
    if n < 3:
        raise InvalidParameter(f"circulant needs n >= 3, got {n}")
    if not jumps:
        raise InvalidParameter("circulant needs at least one jump")
    if any(b <= a for a, b in zip(jumps, jumps[1:])):
        raise InvalidParameter(f"jumps must be strictly increasing: {jumps}")
    if jumps[0] <= 0 or 2 * jumps[-1] >= n:
        raise InvalidParameter(f"jumps must satisfy 0 < s < n/2: {jumps}")
    return jumps


def circulant_spectrum(n: int, jumps: Sequence[int]) -> Spectrum:
    """{sum_i 4 sin^2(pi s_i j / n) : j = 0..n-1}."""
    jumps = validate_jumps(n, jumps)
    mults: dict[Key, int] = {}
    for j in range(n):
        k: Key = ()
        for s in jumps:
            c, ek = eig_key(s * j % n, n)
            k = add_keys(k, lift_key(ek, c, n))
        mults[k] = mults.get(k, 0) + 1
    return Spectrum(n, mults)


def algebraic_connectivity(s: Spectrum) -> CycloReal:
    """Smallest nonzero eigenvalue."""
    if s.total_count < 2:
        raise DegenerateSpectrum("algebraic connectivity needs at least two eigenvalues")
    for k in s.keys():
        if k:
            return CycloReal(s.conductor, k, check=False)
    raise DegenerateSpectrum("every eigenvalue is zero")


def spectrum_quotient(num: Spectrum, den: Spectrum) -> Spectrum:
    """The multiset Q with spectrum_sum(Q, den) == num, by leading-term elimination.

    ``den`` must contain 0.  Raises :class:`NotAProduct` when no such Q exists.
    """
    n = math.lcm(num.conductor, den.conductor)
    num, den = num.lift(n), den.lift(n)
    den_items = den.items()
    if not den_items or den_items[0][0]:
        raise InvalidParameter("divisor must have 0 as its smallest value")
    c0 = den_items[0][1]
    rest = den_items[1:]
    remaining = dict(num._mults)
    quotient: dict[Key, int] = {}
    for mu in num.keys():
        c = remaining.pop(mu)
        if c == 0:
            continue
        if c < 0:
            raise NotAProduct("negative intermediate coefficient")
        q, r = divmod(c, c0)
        if r:
            raise NotAProduct(f"multiplicity {c} not divisible by {c0}")
        quotient[mu] = q
        for nu, d in rest:
            target = add_keys(mu, nu)
            have = remaining.get(target)
            if have is None or have < q * d:
                raise NotAProduct("numerator lacks a required term")
            remaining[target] = have - q * d
    if remaining:
        raise NotAProduct("leftover remainder")
    return Spectrum(n, quotient, {k: num._approx[k] for k in quotient})


# ---------------------------------------------------------------------------
# matrix routes

class CharPoly(NamedTuple):
    """det(L - x I) with integer coefficients, constant term first."""

    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def digest(self) -> str:
        text = ",".join(str(c) for c in self.coeffs)
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def to_json(self) -> str:
        return json.dumps({"coeffs": [str(c) for c in self.coeffs]})

    @classmethod
    def from_json(cls, text: str) -> CharPoly:
        return cls(tuple(int(c) for c in json.loads(text)["coeffs"]))

    @classmethod
    def from_spectrum(cls, s: Spectrum) -> CharPoly:
        """prod (value - x)^mult, for spectra whose values are integers."""
        poly = [1]
        for v, m in s.entries:
            if not v.is_rational() or Fraction(v.key[0][1] if v.key else 0).denominator != 1:
                raise InvalidParameter("from_spectrum needs integer eigenvalues")
            root = int(v.key[0][1]) if v.key else 0
            for _ in range(m):
                poly = _mul_linear(poly, root)
        return cls(tuple(poly))


def _mul_linear(poly: list[int], root: int) -> list[int]:
    # poly * (root - x)
    out = [0] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i] += root * c
        out[i + 1] -= c
    return out


def _as_matrix(L) -> np.ndarray:
    A = np.array(L, dtype=object)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidParameter("expected a square matrix")
    return A


def char_poly(L) -> CharPoly:
    """Characteristic polynomial det(L - x I) by the Faddeev-LeVerrier recurrence.

    Every division in the recurrence is exact over the integers, so the
    computation stays in Python ints throughout.
    """
    A = _as_matrix(L)
    n = A.shape[0]
    c = [0] * (n + 1)
    c[n] = 1
    eye = np.zeros((n, n), dtype=object)
    eye[:, :] = 0
    for i in range(n):
        eye[i, i] = 1
    M = eye.copy()
    for k in range(1, n + 1):
        AM = A.dot(M)
        tr = sum(AM[i, i] for i in range(n))
        q, r = divmod(-tr, k)
        if r:
            raise ArithmeticError("Faddeev-LeVerrier division was not exact")
        c[n - k] = q
        M = AM + q * eye
    sign = -1 if n % 2 else 1
    return CharPoly(tuple(int(sign * x) for x in c))


def numeric_spectrum(L, tolerance: float | None = None) -> list[float]:
    """Eigenvalues of a symmetric matrix in double precision, ascending.

    Values within ``tolerance`` (default ``1e-10 * ||L||``) of zero are
    reported as exactly 0.
    """
    A = np.array(L, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidParameter("expected a square matrix")
    if not np.array_equal(A, A.T):
        raise InvalidParameter("numeric_spectrum needs a symmetric matrix")
    if tolerance is None:
        tolerance = 1e-10 * max(1.0, float(np.linalg.norm(A)))
    vals = np.linalg.eigvalsh(A)
    vals[np.abs(vals) < tolerance] = 0.0
    return sorted(float(v) for v in vals)


def isospectral(a, b) -> bool:
    """Exact isospectrality of two spectra, two characteristic polynomials,
    or two Laplacian matrices (via char_poly)."""
    for kind in (Spectrum, CharPoly):
        if isinstance(a, kind) and isinstance(b, kind):
            return a == b
        if isinstance(a, kind) or isinstance(b, kind):
            raise InvalidParameter("isospectral compares two objects of the same kind")
    A, B = _as_matrix(a), _as_matrix(b)
    if A.shape != B.shape:
        return False
    return char_poly(A) == char_poly(B)
