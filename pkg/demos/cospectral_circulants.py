"""
Cospectral circulants
=====================

Circulant graphs sharing a Laplacian spectrum are usually related by a
multiplier and hence isomorphic.  The smallest exception has 20 vertices.
"""
from torusear import CirculantSpec, circulant_isomorphic, search_cospectral, verify_counterexample

a = CirculantSpec.parse("20:2,3,4,7")
b = CirculantSpec.parse("20:3,6,7,8")
print(a, b, "same spectrum:", a.spectrum() == b.spectrum())
verdict = circulant_isomorphic(a, b)
print("isomorphic:", verdict.isomorphic, verdict.certificate["kind"], verdict.certificate.get("name"))

# a multiplier-related pair for contrast
print(circulant_isomorphic(CirculantSpec(13, (1, 5)), CirculantSpec(13, (2, 3))).certificate)

print(verify_counterexample()["ok"])

# sweep small orders; takes a few seconds
report = search_cospectral(3, 14)
print(report.to_table())
