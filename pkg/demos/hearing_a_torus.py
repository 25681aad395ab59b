"""
Hearing the shape of a torus
============================

Given only an eigenvalue multiset, recover the cycle lengths of the torus
that produced it, or report why no torus fits.
"""
from torusear import (
    NotATorusSpectrum,
    Spectrum,
    circulant_spectrum,
    hear_dimension,
    hear_torus,
    torus_spectrum,
)

for shape in [(2, 4, 4), (4, 4), (2, 8), (2, 2, 2, 2), (3, 5, 7)]:
    s = torus_spectrum(shape)
    print(shape, "->", tuple(hear_torus(s)), "dimension", hear_dimension(s))

# (2, 8) and (4, 4) have 16 vertices each but different spectra
print(torus_spectrum((2, 8)) == torus_spectrum((4, 4)))

# spectra survive a trip through JSON with plain decimal strings
text = '{"entries":[{"value_decimal":"0","mult":1},{"value_decimal":"3","mult":4},{"value_decimal":"6","mult":4}]}'
print(tuple(hear_torus(Spectrum.from_json(text))))

# a circulant that is not a torus is rejected
try:
    hear_torus(circulant_spectrum(20, (2, 3, 4, 7)))
except NotATorusSpectrum as exc:
    print("rejected:", exc, "partial", exc.partial)
