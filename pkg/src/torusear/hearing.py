"""
Recovering a discrete rectangular torus from its Laplacian spectrum.

The largest cycle length is read off the algebraic connectivity,
a(T) = 4 sin^2(pi / m_max); its cycle spectrum is then divided out of the
theta function and the process repeats on the quotient.  The result is
checked by multiplying the recovered cycles back together.
"""
from __future__ import annotations

import json
import math
from typing import Iterable

from .cyclo import CycloReal, eig_value
from .errors import DegenerateSpectrum, InvalidParameter, NotAProduct, NotATorusSpectrum
from .spectra import Spectrum, algebraic_connectivity, cycle_spectrum, isospectral, torus_spectrum
from .theta import theta_divide, theta_from_spectrum


class TorusShape(tuple):
    """Sorted cycle lengths (m_1 <= ... <= m_p), every m_i >= 2.

    This is the canonical name of C_{m_1} x ... x C_{m_p}.  A TorusShape is a
    tuple, so it compares equal to the plain tuple of its dims.
    """

    def __new__(cls, dims: Iterable[int]):
        dims = tuple(int(m) for m in dims)
        if not dims:
            raise InvalidParameter("a torus needs at least one factor")
        if any(m < 2 for m in dims):
            raise InvalidParameter(f"cycle lengths must be at least 2: {dims}")
        if any(b < a for a, b in zip(dims, dims[1:])):
            raise InvalidParameter(f"dims must be sorted ascending: {dims}; use canonical_shape")
        return super().__new__(cls, dims)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def dimension(self) -> int:
        return len(self)

    @property
    def vertex_count(self) -> int:
        return math.prod(self)

    def to_json(self) -> str:
        return json.dumps({"shape": list(self)})

    def __repr__(self):
        return f"TorusShape({list(self)})"


def canonical_shape(dims: Iterable[int]) -> TorusShape:
    """Sort the cycle lengths.  4 and (2, 2) stay distinct: C_4 is not C_2 x C_2."""
    dims = [int(m) for m in dims]
    if any(m < 2 for m in dims):
        raise InvalidParameter(f"cycle lengths must be at least 2: {dims}")
    return TorusShape(sorted(dims))


def hear_m_max(s: Spectrum) -> int:
    """The m with algebraic_connectivity(s) == 4 sin^2(pi / m)."""
    try:
        a = algebraic_connectivity(s)
    except DegenerateSpectrum as exc:
        raise NotATorusSpectrum(str(exc)) from exc
    if s.total_count < 2 or not s.multiplicity(0):
        raise NotATorusSpectrum("spectrum must contain 0 and at least two eigenvalues")
    x = float(a)
    if not 0 < x <= 4 + 1e-12:
        raise NotATorusSpectrum(f"algebraic connectivity {x} is not 4 sin^2(pi/m)")
    # m -> 4 sin^2(pi/m) is strictly decreasing, so the float bracket leaves
    # at most two candidates; the nearer one is confirmed exactly
    guess = math.pi / math.asin(min(1.0, math.sqrt(x) / 2))
    candidates = [m for m in {math.floor(guess), math.ceil(guess)} if 2 <= m <= s.total_count]
    candidates.sort(key=lambda m: abs(4 * math.sin(math.pi / m) ** 2 - x))
    for m in candidates:
        if a == eig_value(1, m):
            return m
    raise NotATorusSpectrum(f"algebraic connectivity {x:.12g} matches no cycle length")


def hear_torus(s: Spectrum) -> TorusShape:
    """Reconstruct the unique torus whose spectrum is ``s``.

    Raises :class:`NotATorusSpectrum` (with the factors found so far) if
    ``s`` is not a torus spectrum.
    """
    found: list[int] = []
    current = theta_from_spectrum(s)
    while not (current.spectrum.total_count == 1 and current.spectrum.multiplicity(0) == 1):
        spec = current.spectrum
        try:
            m = hear_m_max(spec)
        except NotATorusSpectrum as exc:
            raise NotATorusSpectrum(str(exc), partial=found) from exc
        if found and m > found[-1]:
            raise NotATorusSpectrum(f"peeled {m} after {found[-1]}", partial=found)
        if spec.total_count % m:
            raise NotATorusSpectrum(f"{spec.total_count} eigenvalues cannot contain C_{m}",
                                    partial=found)
        try:
            current = theta_divide(current, theta_from_spectrum(cycle_spectrum(m, math.lcm(spec.conductor, m))))
        except NotAProduct as exc:
            raise NotATorusSpectrum(f"dividing out C_{m} failed: {exc}", partial=found) from exc
        found.append(m)
    if not found:
        raise NotATorusSpectrum("a one-vertex spectrum is not a torus (tori have >= 2 vertices)")
    shape = TorusShape(reversed(found))
    if not isospectral(torus_spectrum(shape), s):
        raise NotATorusSpectrum("re-multiplied factors do not reproduce the spectrum",
                                partial=found)
    return shape


def hear_dimension(s: Spectrum) -> int:
    """Number of cycle factors of the torus with spectrum ``s``."""
    return len(hear_torus(s))


def tori_isomorphic(a: Iterable[int], b: Iterable[int]) -> bool:
    """Two tori are isomorphic exactly when their canonical shapes agree."""
    return canonical_shape(a) == canonical_shape(b)


def enumerate_shapes(max_vertices: int, min_factor: int = 2) -> list[TorusShape]:
    """All canonical shapes with product of dims at most ``max_vertices``."""
    out: list[TorusShape] = []

    def rec(prefix: tuple[int, ...], prod: int, lo: int):
        for m in range(lo, max_vertices // prod + 1):
            shape = prefix + (m,)
            out.append(TorusShape(shape))
            rec(shape, prod * m, m)

    rec((), 1, min_factor)
    return out
