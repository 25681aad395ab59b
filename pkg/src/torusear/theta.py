"""
Theta functions of graphs, Theta_G(t) = sum over eigenvalues of exp(-lambda t).

The exact side is a thin view over :class:`~torusear.spectra.Spectrum`:
a theta function is its list of (exponent, multiplicity) terms, products
are spectrum sums and quotients are spectrum deconvolutions.

The numeric side recovers the terms from nothing but point evaluations of
Theta, by repeatedly finding the slowest-decaying part of the residual and
peeling it off.
"""
from __future__ import annotations

import json
import math
from typing import Callable, Iterable, NamedTuple, Sequence

import mpmath

from .cyclo import CycloReal
from .errors import InvalidParameter, InvalidSampler, NotAProduct, RecoveryFailure
from .spectra import Spectrum, spectrum_quotient, spectrum_sum


class ThetaFunction:
    """sum_j c_j exp(-mu_j t) with exact exponents mu_1 < mu_2 < ...

    >>> from torusear.spectra import cycle_spectrum
    >>> theta_from_spectrum(cycle_spectrum(4))
    ThetaFunction(1 + 2 e^(-2 t) + 1 e^(-4 t))
    """

    __slots__ = ("spectrum",)

    def __init__(self, spectrum: Spectrum):
        self.spectrum = spectrum

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[CycloReal, int]]) -> ThetaFunction:
        return cls(Spectrum.from_values(terms))

    @property
    def terms(self) -> list[tuple[CycloReal, int]]:
        return self.spectrum.entries

    def __len__(self):
        return len(self.spectrum)

    def __eq__(self, other):
        if not isinstance(other, ThetaFunction):
            return NotImplemented
        return self.spectrum == other.spectrum

    def __hash__(self):
        return hash(self.spectrum)

    def __mul__(self, other):
        if not isinstance(other, ThetaFunction):
            return NotImplemented
        return theta_product(self, other)

    def __truediv__(self, other):
        if not isinstance(other, ThetaFunction):
            return NotImplemented
        return theta_divide(self, other)

    def __call__(self, t):
        """Evaluate at ``t`` with the current mpmath precision."""
        t = mpmath.mpf(t)
        total = mpmath.mpf(0)
        for mu, c in self.terms:
            total += c * mpmath.exp(-mu.to_float(mpmath.mp.prec + 10).value * t)
        return total

    def sampler(self) -> Callable:
        """A callable t -> Theta(t) suitable for :func:`spectrum_from_theta_samples`."""
        return self.__call__

    def to_dict(self, digits: int = 12) -> dict:
        return {
            "entries": [
                {"exponent_decimal": v.decimal(digits), "exponent_exact": str(v), "mult": m}
                for v, m in self.terms
            ]
        }

    def to_json(self, digits: int = 12) -> str:
        return json.dumps(self.to_dict(digits))

    @classmethod
    def from_json(cls, text: str) -> ThetaFunction:
        try:
            data = json.loads(text)
        except ValueError as exc:
            raise InvalidParameter(f"malformed theta JSON: {exc}") from exc
        return cls(Spectrum.from_dict(data, value_field="exponent"))

    def __repr__(self):
        parts = []
        for mu, c in self.terms:
            parts.append(str(c) if mu.is_zero() else f"{c} e^(-{mu.decimal(6)} t)")
        return f"ThetaFunction({' + '.join(parts)})"


def theta_from_spectrum(s: Spectrum) -> ThetaFunction:
    return ThetaFunction(s)


def spectrum_from_theta(theta: ThetaFunction) -> Spectrum:
    return theta.spectrum


def theta_product(f: ThetaFunction, g: ThetaFunction) -> ThetaFunction:
    """Theta of a Cartesian product: exponents add, multiplicities multiply."""
    return ThetaFunction(spectrum_sum(f.spectrum, g.spectrum))


def theta_divide(numerator: ThetaFunction, divisor: ThetaFunction) -> ThetaFunction:
    """The unique q with theta_product(q, divisor) == numerator.

    Raises :class:`NotAProduct` when the numerator does not factor through
    the divisor.
    """
    return ThetaFunction(spectrum_quotient(numerator.spectrum, divisor.spectrum))


def theta_divide_numeric(
    numerator: Sequence[tuple[float, int]],
    divisor: Sequence[tuple[float, int]],
    tol: float = 1e-9,
) -> list[tuple[float, int]]:
    """Float-exponent variant of :func:`theta_divide`.

    Exponents closer than ``tol`` are treated as equal.
    """
    num = _cluster(numerator, tol)
    div = _cluster(divisor, tol)
    if not div or abs(div[0][0]) > tol:
        raise InvalidParameter("divisor must have 0 as its smallest exponent")
    c0 = div[0][1]
    remaining = [[mu, c] for mu, c in num]
    quotient = []
    i = 0
    while i < len(remaining):
        mu, c = remaining[i]
        i += 1
        if c == 0:
            continue
        if c < 0:
            raise NotAProduct("negative intermediate coefficient")
        q, r = divmod(c, c0)
        if r:
            raise NotAProduct(f"multiplicity {c} not divisible by {c0}")
        quotient.append((mu, q))
        for nu, d in div[1:]:
            target = mu + nu
            for entry in remaining[i:]:
                if abs(entry[0] - target) <= tol:
                    if entry[1] < q * d:
                        raise NotAProduct("numerator lacks a required term")
                    entry[1] -= q * d
                    break
            else:
                raise NotAProduct("numerator lacks a required term")
    return quotient


def _cluster(terms, tol):
    out: list[list] = []
    for mu, c in sorted(terms):
        if out and abs(mu - out[-1][0]) <= tol:
            out[-1][1] += c
        else:
            out.append([float(mu), int(c)])
    return [(mu, c) for mu, c in out]


# ---------------------------------------------------------------------------
# numeric recovery

class RecoveredTerm(NamedTuple):
    exponent: float
    multiplicity: int
    error: float


_BASE_HORIZON = 24.0      # contamination exp(-24) at the smallest sample time
_SCALE_SPACING = 30.0     # sample-time separation between successive terms, in units of 1/gap
_HEADROOM = 4.0           # initial allowance for the next exponent above the last one found
_MAX_CEILING = 512.0
_MAX_ATTEMPTS = 3
_MAX_SWEEPS = 60


def spectrum_from_theta_samples(
    sampler: Callable, degree_bound: int, min_gap: float = 0.5
) -> list[RecoveredTerm]:
    """Recover (exponent, multiplicity) pairs of a finite exponential sum.

    ``sampler(t)`` must return sum_j c_j exp(-mu_j t) at the current mpmath
    precision, with at most ``degree_bound`` terms, exponents >= 0 and
    positive integer multiplicities.

    Each term is found as the slowest decay of the residual left after
    subtracting the terms already found: the exponent comes from a log-ratio
    of two large-t samples and the multiplicity is rounded to an integer.
    Term j is sampled around t_j = (24 + 30 (D - 1 - j)) / gap, so earlier
    terms live at larger t, where the later ones are negligible; they are
    re-estimated each time a new term is known.  Working precision follows
    the size of the next exponent.  ``min_gap`` is the assumed separation of
    exponents; it is halved and the recovery repeated if the result does
    not reproduce the sampler.  ``error`` is the size of the last correction
    applied to each exponent.
    """
    if degree_bound < 1:
        raise InvalidParameter("degree_bound must be at least 1")
    if min_gap <= 0:
        raise InvalidParameter("min_gap must be positive")
    with mpmath.workdps(30):
        total = sampler(mpmath.mpf(0))
        total_count = int(mpmath.nint(total))
        if abs(total - total_count) > 1e-6 or total_count < 1:
            raise InvalidSampler(f"Theta(0) = {mpmath.nstr(total, 12)} is not a positive integer")
    gap = min_gap
    last_error: RecoveryFailure | None = None
    for _ in range(_MAX_ATTEMPTS):
        try:
            terms = _peel(sampler, degree_bound, gap, total_count)
            _check_reconstruction(sampler, terms)
            return terms
        except RecoveryFailure as exc:
            last_error = exc
            gap /= 2
    raise last_error


def _dps(span: float) -> int:
    # decimal digits to resolve a term exp(-span) below the sampler's leading term
    return int(max(span, 0.0) / 2.3) + 40


def _peel(sampler, degree_bound: int, gap: float, total_count: int) -> list[RecoveredTerm]:
    times = [(_BASE_HORIZON + _SCALE_SPACING * (degree_bound - 1 - j)) / gap for j in range(degree_bound)]
    mus: list = []
    counts: list[int] = []
    for j in range(degree_bound):
        remaining = total_count - sum(counts)
        if remaining == 0:
            break
        t = times[j]
        floor = mus[-1] if mus else mpmath.mpf(0)
        ceiling = float(floor) + _HEADROOM
        while True:
            if mus:
                _polish(sampler, mus, counts, times, ceiling, t)
            estimate = _extract(sampler, mus, counts, t, ceiling, floor if mus else None)
            if estimate is not None and estimate[0] <= ceiling - 1:
                break
            # polluted or too close to the ceiling: the earlier exponents were not
            # resolved finely enough for a term this fast, so raise the ceiling
            if estimate is not None:
                ceiling = float(estimate[0]) + _HEADROOM
            else:
                ceiling = float(floor) + 2 * (ceiling - float(floor))
            if ceiling - float(floor) > _MAX_CEILING:
                raise RecoveryFailure("could not isolate the next term", {"term": j, "t": t})
        mu_hat, c = estimate
        c_int = int(mpmath.nint(c))
        if abs(c - c_int) >= 0.25 or c_int < 1 or c_int > remaining:
            raise RecoveryFailure(
                "multiplicity does not round cleanly",
                {"term": j, "estimate": float(c), "exponent": float(mu_hat)},
            )
        if j == 0 and abs(mu_hat) < 1e-12:
            mu_hat = mpmath.mpf(0)
        mus.append(mu_hat)
        counts.append(c_int)

    if sum(counts) != total_count:
        raise RecoveryFailure(
            f"recovered {sum(counts)} of {total_count} eigenvalues within degree_bound",
            {"found": len(counts)},
        )
    errors = _polish(sampler, mus, counts, times, float(mus[-1]), times[len(mus) - 1])
    for a, b in zip(mus, mus[1:]):
        if b <= a:
            raise RecoveryFailure("recovered exponents are not increasing")
    return [RecoveredTerm(float(mu), c, e) for mu, c, e in zip(mus, counts, errors)]


def _extract(sampler, mus, counts, t, ceiling, floor):
    """(exponent, coefficient) of the slowest decay left in the residual, or None if polluted."""
    lowest = float(mus[0]) if mus else 0.0
    t1, t2 = mpmath.mpf(t), mpmath.mpf(t + 1)
    with mpmath.workdps(_dps((ceiling - lowest) * (t + 1))):
        r1 = _residual(sampler, mus, counts, t1)
        r2 = _residual(sampler, mus, counts, t2)
        if r1 <= 0 or r2 <= 0:
            return None
        mu_hat = mpmath.log(r1 / r2)
        if floor is None and mu_hat < -1e-20:
            raise InvalidSampler("residual grows with t: negative exponent")
        if floor is not None and mu_hat <= floor:
            return None
        c = r1 * mpmath.exp(mu_hat * t1)
        if c < 0.5:
            return None
        return mu_hat, c


def _residual(sampler, mus, counts, t, skip=None):
    t = mpmath.mpf(t)
    r = sampler(t)
    for i, (mu, c) in enumerate(zip(mus, counts)):
        if i != skip:
            r -= c * mpmath.exp(-mu * t)
    return r


def _polish(sampler, mus, counts, times, ceiling, t_next):
    """Gauss-Seidel re-estimation of each known exponent with its multiplicity held exact.

    Term i is refit at its own sample time t_i.  Its error is amplified by
    exp((mu_j - mu_i) t_j) when a later term j is refit, which passes it on
    down the chain, and by up to exp((ceiling - mu_i) t_next) when the next
    term is extracted, so the working precision covers the worst chain.  Sweeps continue
    until the corrections stop shrinking.
    """
    errors = [0.0] * len(mus)
    lowest = float(mus[0])
    floats = [float(mu) for mu in mus]
    # reach[i]: log of the largest factor by which an error in mu_i is magnified,
    # directly or through the later terms it perturbs
    reach = [0.0] * len(mus)
    for i in reversed(range(len(mus))):
        reach[i] = max([(ceiling - floats[i]) * t_next]
                       + [(floats[j] - floats[i]) * times[j] + reach[j] for j in range(i + 1, len(mus))])
    previous = None
    for _ in range(_MAX_SWEEPS):
        change = mpmath.mpf(0)
        for i in range(len(mus)):
            if i == 0 and mus[0] == 0:
                continue
            t = mpmath.mpf(times[i])
            with mpmath.workdps(_dps((floats[i] - lowest) * times[i] + reach[i])):
                r = _residual(sampler, mus, counts, t, skip=i)
                if r <= 0:
                    raise RecoveryFailure("residual is not positive while polishing", {"term": i})
                new = mpmath.log(counts[i] / r) / t
                step = abs(new - mus[i])
                errors[i] = float(step)
                change = max(change, step)
                mus[i] = new
        if change == 0 or (previous is not None and change > previous * 1e-6):
            break
        previous = change
    return errors


def _check_reconstruction(sampler, terms: Sequence[RecoveredTerm]) -> None:
    """The recovered sum must reproduce fresh samples at moderate t."""
    with mpmath.workdps(40):
        for t in (mpmath.mpf("0.125"), mpmath.mpf(1), mpmath.mpf(4)):
            want = sampler(t)
            got = sum(c * mpmath.exp(-mpmath.mpf(mu) * t) for mu, c, _ in terms)
            if abs(got - want) > 1e-9 * abs(want):
                raise RecoveryFailure("recovered terms do not reproduce the sampler",
                                      {"t": float(t), "relative_error": float(abs(got - want) / want)})
