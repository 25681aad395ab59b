"""
Theta functions
===============

Theta(t) = sum over eigenvalues of exp(-lambda t).  Products of graphs
multiply theta functions, exact division undoes it, and a finite sum of
exponentials can be recovered from samples alone.
"""
import mpmath

from torusear import (
    spectrum_from_theta_samples,
    theta_divide,
    theta_from_spectrum,
    torus_spectrum,
)

f = theta_from_spectrum(torus_spectrum((3,)))
g = theta_from_spectrum(torus_spectrum((4,)))
fg = theta_from_spectrum(torus_spectrum((3, 4)))
print(f)
print(g)
print(f * g == fg, theta_divide(fg, g) == f)

with mpmath.workdps(30):
    print(fg(0), fg(mpmath.mpf("0.5")))

# recovery from a black-box sampler: exponents 0, 0.8, 2.5 with multiplicities 2, 5, 1
terms = [(0.0, 2), (0.8, 5), (2.5, 1)]


def sampler(t):
    return sum(c * mpmath.exp(-mpmath.mpf(mu) * t) for mu, c in terms)


for term in spectrum_from_theta_samples(sampler, degree_bound=4):
    print(f"exponent {term.exponent:.12f}  multiplicity {term.multiplicity}  correction {term.error:.1e}")
