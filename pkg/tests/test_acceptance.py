"""
Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Exact claims are checked exactly.  Wherever a quantity can be produced by
two routes, the test uses the one that does not share code with the routine
under test.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from collections import defaultdict

import mpmath
import networkx as nx
import numpy as np

from torusear.circulants import (
    ORDER_20_PAIR,
    CirculantSpec,
    circulant_isomorphic,
    search_cospectral,
)
from torusear.cyclo import CycloReal, cmp, eig_value
from torusear.graphs import circulant_graph, laplacian, torus_graph
from torusear.hearing import enumerate_shapes, hear_dimension, hear_torus
from torusear.spectra import (
    Spectrum,
    algebraic_connectivity,
    char_poly,
    circulant_spectrum,
    cycle_spectrum,
    isospectral,
    numeric_spectrum,
    spectrum_sum,
    torus_spectrum,
)
from torusear.theta import spectrum_from_theta_samples, theta_from_spectrum, theta_product


def _shapes_by_vertex_count(limit):
    groups = defaultdict(list)
    for shape in enumerate_shapes(limit):
        groups[math.prod(shape)].append(shape)
    return groups


def _brute_force_product_spectrum(shape1, shape2) -> Spectrum:
    """Sum of eigenvalues over every index tuple, using only CycloReal addition."""
    dims = tuple(shape1) + tuple(shape2)
    counts = defaultdict(int)
    per_factor = [[eig_value(j, m) for j in range(m)] for m in dims]
    for combo in itertools.product(*per_factor):
        total = CycloReal.rational(0)
        for v in combo:
            total = total + v
        counts[total] += 1
    return Spectrum.from_mapping(counts)


def _rooted_wl_differs(a: CirculantSpec, b: CirculantSpec) -> bool:
    # circulants are vertex-transitive, so distinguishing the graphs rooted at 0 proves non-isomorphism
    graphs = []
    for spec in (a, b):
        g = nx.circulant_graph(spec.n, spec.jumps)
        nx.set_node_attributes(g, {v: int(v == 0) for v in g}, "root")
        graphs.append(nx.weisfeiler_lehman_graph_hash(g, node_attr="root", iterations=6))
    return graphs[0] != graphs[1]


def test_criterion_1_round_trip_all_shapes_up_to_5000(verdict):
    start = time.perf_counter()
    shapes = enumerate_shapes(5000)
    failures = [s for s in shapes if hear_torus(torus_spectrum(s)) != s]
    verdict(1, "round trip hear_torus(torus_spectrum(shape)) == shape, all shapes <= 5000 vertices",
            not failures, f"{len(shapes)} shapes, {len(failures)} failures, {time.perf_counter() - start:.0f}s")
    assert not failures, failures[:10]


def test_criterion_2_injectivity_up_to_2000(verdict):
    start = time.perf_counter()
    pairs = 0
    collisions = []
    for n, shapes in sorted(_shapes_by_vertex_count(2000).items()):
        if len(shapes) < 2:
            continue
        spectra = [torus_spectrum(s) for s in shapes]
        for i, j in itertools.combinations(range(len(shapes)), 2):
            pairs += 1
            if isospectral(spectra[i], spectra[j]):
                collisions.append((shapes[i], shapes[j]))
    verdict(2, "distinct shapes with equal vertex count <= 2000 are never isospectral",
            not collisions, f"{pairs} pairs, {len(collisions)} collisions, {time.perf_counter() - start:.0f}s")
    assert pairs > 300_000
    assert not collisions


def test_criterion_3_dimension_is_heard(verdict):
    rng = random.Random(20240603)
    groups = {n: shapes for n, shapes in _shapes_by_vertex_count(3000).items()
              if len({len(s) for s in shapes}) > 1}
    counts = sorted(groups)
    bad = []
    for _ in range(200):
        n = rng.choice(counts)
        a = rng.choice(groups[n])
        b = rng.choice([s for s in groups[n] if len(s) != len(a)])
        sa, sb = torus_spectrum(a), torus_spectrum(b)
        if sa == sb or hear_dimension(sa) != len(a) or hear_dimension(sb) != len(b):
            bad.append((a, b))
    verdict(3, "equal vertex count, different dimension: spectra differ and hear_dimension is right",
            not bad, f"200 pairs, {len(bad)} failures")
    assert not bad


def test_criterion_4_order_20_counterexample(verdict):
    a, b = ORDER_20_PAIR
    pa = char_poly(laplacian(circulant_graph(a.n, a.jumps)))
    pb = char_poly(laplacian(circulant_graph(b.n, b.jumps)))
    result = circulant_isomorphic(a, b)
    independent = _rooted_wl_differs(a, b)
    ok = pa == pb and not result.isomorphic and result.certificate["kind"] in ("invariant", "exhaustive")
    verdict(4, f"{a} and {b}: identical char_poly, not isomorphic",
            ok and independent, f"charpoly {pa.digest()}, certificate {result.certificate['kind']}")
    assert pa == pb
    assert a.spectrum() == b.spectrum()
    assert not result.isomorphic
    assert independent


def test_criterion_5_no_cospectral_circulants_below_20(verdict):
    start = time.perf_counter()
    below = search_cospectral(3, 19)
    at20 = search_cospectral(20, 20)
    pairs20 = {frozenset(p) for p in at20.non_isomorphic_pairs}
    found = frozenset(ORDER_20_PAIR) in pairs20
    confirmed = all(_rooted_wl_differs(x, y) for x, y in at20.non_isomorphic_pairs)
    ok = not below.non_isomorphic_pairs and found and confirmed
    verdict(5, "sweep 3..19 finds no cospectral non-isomorphic circulants; n=20 finds the known pair", ok,
            f"{below.total_specs} specs below 20, {len(pairs20)} non-isomorphic pairs at 20,"
            f" {time.perf_counter() - start:.0f}s")
    assert below.non_isomorphic_pairs == []
    assert found and confirmed


def test_criterion_6_theta_is_multiplicative(verdict):
    rng = random.Random(6)
    bad = 0
    for _ in range(500):
        shapes = []
        for _ in range(2):
            k = rng.choice([1, 1, 2])
            shapes.append(tuple(rng.randint(2, 12) for _ in range(k)))
        if math.prod(shapes[0]) * math.prod(shapes[1]) > 1500:
            shapes[1] = (rng.randint(2, 12),)
        s1, s2 = torus_spectrum(shapes[0]), torus_spectrum(shapes[1])
        product = theta_product(theta_from_spectrum(s1), theta_from_spectrum(s2))
        via_sumset = theta_from_spectrum(spectrum_sum(s1, s2))
        expected = theta_from_spectrum(_brute_force_product_spectrum(*shapes))
        if product != via_sumset or product != expected:
            bad += 1
    verdict(6, "theta(G1) * theta(G2) == theta(G1 x G2) exactly", not bad, f"500 pairs, {bad} failures")
    assert not bad


def test_criterion_7_exact_matches_numeric(verdict):
    rng = random.Random(7)
    graphs = []
    shapes = [s for s in enumerate_shapes(300) if math.prod(s) >= 4]
    for _ in range(25):
        shape = rng.choice(shapes)
        graphs.append((str(shape), torus_spectrum(shape), laplacian(torus_graph(shape))))
    for _ in range(25):
        n = rng.randint(5, 300)
        top = (n - 1) // 2
        jumps = tuple(sorted(rng.sample(range(1, top + 1), rng.randint(1, min(6, top)))))
        graphs.append((f"C{n}{jumps}", circulant_spectrum(n, jumps), laplacian(circulant_graph(n, jumps))))
    worst = 0.0
    for _, exact, L in graphs:
        values = np.array([float(v.to_float(64).value) for v, m in exact.entries for _ in range(m)])
        worst = max(worst, float(np.max(np.abs(values - np.array(numeric_spectrum(L))))))
    verdict(7, "numeric_spectrum agrees with exact spectra within 1e-9", worst <= 1e-9,
            f"50 graphs, max deviation {worst:.2e}")
    assert worst <= 1e-9


def test_criterion_8_numeric_theta_recovery(verdict):
    rng = random.Random(8)
    failures = 0
    worst = 0.0
    for _ in range(100):
        k = rng.randint(1, 8)
        mus = []
        x = 0.0 if rng.random() < 0.5 else rng.uniform(0, 3)
        for _ in range(k):
            mus.append(x)
            x += rng.uniform(0.5, 3)
        cs = [rng.randint(1, 10) for _ in mus]

        def sampler(t, mus=mus, cs=cs):
            return sum(c * mpmath.exp(-mpmath.mpf(mu) * t) for mu, c in zip(mus, cs))

        rec = spectrum_from_theta_samples(sampler, 8)
        if [r.multiplicity for r in rec] != cs:
            failures += 1
            continue
        err = max(abs(r.exponent - mu) for r, mu in zip(rec, mus))
        worst = max(worst, err)
        failures += err > 1e-6
    verdict(8, "exponential sums recovered from samples: multiplicities exact, exponents within 1e-6",
            not failures, f"100 sums, {failures} failures, max exponent error {worst:.1e}")
    assert not failures


def test_criterion_9_connectivity_of_sum_is_min(verdict):
    rng = random.Random(9)
    bad = 0
    for _ in range(500):
        m1, m2 = rng.randint(2, 400), rng.randint(2, 400)
        s1, s2 = cycle_spectrum(m1), cycle_spectrum(m2)
        a = algebraic_connectivity(spectrum_sum(s1, s2))
        a1, a2 = algebraic_connectivity(s1), algebraic_connectivity(s2)
        smaller = a1 if cmp(a1, a2) <= 0 else a2
        if a != smaller or a != eig_value(1, max(m1, m2)):
            bad += 1
    verdict(9, "a(G1 x G2) == min(a(G1), a(G2)) exactly for cycles", not bad, f"500 pairs, {bad} failures")
    assert not bad
