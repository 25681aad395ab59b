"""
Exact spectra of cycles and tori
================================

Cycle eigenvalues live in cyclotomic fields, so they can be added and
compared without rounding.  The spectrum of a torus is the sumset of the
spectra of its cycles.
"""
from torusear import (
    algebraic_connectivity,
    cycle_spectrum,
    laplacian,
    numeric_spectrum,
    spectrum_sum,
    torus_graph,
    torus_spectrum,
)

# the 5-cycle: eigenvalues 4 sin^2(pi j / 5), stored exactly
c5 = cycle_spectrum(5)
for value, mult in c5.entries:
    print(f"{float(value):.12f}  x{mult}   {value}")

# C5 x C3 two ways: sumset of the cycle spectra, and the direct torus routine
product = spectrum_sum(c5, cycle_spectrum(3))
print(product == torus_spectrum((3, 5)))

# a floating-point check against the dense Laplacian
L = laplacian(torus_graph((3, 5)))
exact = sorted(float(v) for v, m in product.entries for _ in range(m))
print(max(abs(a - b) for a, b in zip(exact, numeric_spectrum(L))))

# the product is only as well connected as its weakest factor
print(algebraic_connectivity(torus_spectrum((4, 9))) == algebraic_connectivity(cycle_spectrum(9)))
