"""
Circulant graphs: exhaustive cospectrality sweeps and isomorphism certificates.

Circulants C_n(S) are grouped by their exact Laplacian characteristic
polynomial; members of a group are then compared pairwise.  Isomorphism is
decided first by multiplier equivalence (a unit r with r*S = S'), which is
sufficient, and otherwise by a complete individualisation-refinement search.
Since circulants are vertex-transitive, the search may assume 0 maps to 0.
"""
from __future__ import annotations

import itertools
import json
import math
import time
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidParameter
from .graphs import MultiGraph, circulant_graph, laplacian
from .spectra import CharPoly, Spectrum, char_poly, circulant_spectrum, validate_jumps

MAX_SEARCH_N = 24


@dataclass(frozen=True, order=True)
class CirculantSpec:
    n: int
    jumps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "jumps", validate_jumps(self.n, tuple(self.jumps)))

    @classmethod
    def parse(cls, text: str) -> CirculantSpec:
        """``"20:2,3,4,7"`` -> C_20(2, 3, 4, 7)."""
        try:
            n, _, rest = text.partition(":")
            return cls(int(n), tuple(int(s) for s in rest.split(",")))
        except ValueError as exc:
            raise InvalidParameter(f"cannot parse circulant {text!r}") from exc

    @property
    def connected(self) -> bool:
        return math.gcd(self.n, *self.jumps) == 1

    @property
    def connection_set(self) -> frozenset[int]:
        return frozenset(x for s in self.jumps for x in (s, self.n - s))

    def graph(self) -> MultiGraph:
        return circulant_graph(self.n, self.jumps)

    def spectrum(self) -> Spectrum:
        return circulant_spectrum(self.n, self.jumps)

    def char_poly(self) -> CharPoly:
        return char_poly(laplacian(self.graph()))

    def __str__(self):
        return f"C{self.n}({','.join(map(str, self.jumps))})"


def enumerate_circulants(n: int, connected_only: bool = False) -> list[CirculantSpec]:
    """Every jump set 0 < s_1 < ... < s_k < n/2, in lexicographic order of the jump tuple."""
    if n < 3:
        raise InvalidParameter(f"circulants need n >= 3, got {n}")
    top = (n - 1) // 2
    out = []
    for k in range(1, top + 1):
        for jumps in itertools.combinations(range(1, top + 1), k):
            spec = CirculantSpec(n, jumps)
            if not connected_only or spec.connected:
                out.append(spec)
    out.sort()
    return out


# ---------------------------------------------------------------------------
# isomorphism

@dataclass(frozen=True)
class IsomorphismVerdict:
    """Outcome of :func:`circulant_isomorphic`.

    ``certificate`` is a JSON-able dict whose ``kind`` is one of
    ``multiplier``, ``bijection``, ``invariant`` or ``exhaustive``.
    """

    isomorphic: bool
    certificate: dict

    def __bool__(self):
        return self.isomorphic


def multiplier(a: CirculantSpec, b: CirculantSpec) -> int | None:
    """Smallest unit r mod n with r * S_a = S_b, if any."""
    sa, sb = a.connection_set, b.connection_set
    if len(sa) != len(sb):
        return None
    for r in range(1, a.n):
        if math.gcd(r, a.n) == 1 and {r * x % a.n for x in sa} == sb:
            return r
    return None


def _distance_profile(g: MultiGraph, source: int = 0) -> tuple[int, ...]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return tuple(sorted(Counter(dist).items()))


def _common_neighbour_profile(g: MultiGraph, v: int = 0) -> tuple[int, ...]:
    nv = set(g.adjacency[v])
    return tuple(sorted(len(nv & set(g.adjacency[u])) for u in g.adjacency[v]))


def _refine(adj1, adj2, c1: list[int], c2: list[int]):
    """Joint colour refinement; returns refined colourings or None if they diverge."""
    while True:
        sig1 = [(c1[v], tuple(sorted((c1[u], m) for u, m in adj1[v].items()))) for v in range(len(c1))]
        sig2 = [(c2[v], tuple(sorted((c2[u], m) for u, m in adj2[v].items()))) for v in range(len(c2))]
        palette = {s: i for i, s in enumerate(sorted(set(sig1) | set(sig2)))}
        n1 = [palette[s] for s in sig1]
        n2 = [palette[s] for s in sig2]
        if Counter(n1) != Counter(n2):
            return None
        if len(set(n1)) == len(set(c1)):
            return n1, n2
        c1, c2 = n1, n2


def find_isomorphism(g1: MultiGraph, g2: MultiGraph, fixed: tuple[int, int] | None = None):
    """Complete search for a vertex bijection g1 -> g2 preserving edge multiplicities.

    Returns ``(mapping or None, nodes_explored, root_separated)``.  With
    ``fixed=(v, w)`` the search only considers bijections sending v to w.
    """
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return None, 0, True
    adj1, adj2 = g1.adjacency, g2.adjacency
    c1 = g1.degrees()
    c2 = g2.degrees()
    if fixed is not None:
        top = max(c1 + c2) + 1
        c1 = list(c1)
        c2 = list(c2)
        c1[fixed[0]] = top
        c2[fixed[1]] = top
    nodes = 0

    def search(c1, c2):
        nonlocal nodes
        nodes += 1
        refined = _refine(adj1, adj2, c1, c2)
        if refined is None:
            return None
        c1, c2 = refined
        cells = Counter(c1)
        target = min((size, col) for col, size in cells.items() if size > 1) if len(cells) < len(c1) else None
        if target is None:
            inverse = {col: w for w, col in enumerate(c2)}
            mapping = [inverse[col] for col in c1]
            if all(adj2[mapping[u]].get(mapping[v], 0) == m for u, v, m in g1.edges):
                return mapping
            return None
        col = target[1]
        v = c1.index(col)
        top = max(c1) + 1
        for w in [x for x in range(len(c2)) if c2[x] == col]:
            d1 = list(c1)
            d2 = list(c2)
            d1[v] = top
            d2[w] = top
            result = search(d1, d2)
            if result is not None:
                return result
        return None

    root = _refine(adj1, adj2, c1, c2)
    if root is None:
        return None, 1, True
    return search(c1, c2), nodes, False


def circulant_isomorphic(a: CirculantSpec, b: CirculantSpec) -> IsomorphismVerdict:
    """Decide whether C_n(S_a) and C_n(S_b) are isomorphic, with a certificate."""
    if a.n != b.n:
        raise InvalidParameter(f"orders differ: {a.n} vs {b.n}")
    r = multiplier(a, b)
    if r is not None:
        return IsomorphismVerdict(True, {"kind": "multiplier", "multiplier": r})
    ga, gb = a.graph(), b.graph()
    if len(a.connection_set) != len(b.connection_set):
        return IsomorphismVerdict(False, {
            "kind": "invariant", "name": "degree",
            "values": [len(a.connection_set), len(b.connection_set)]})
    for name, fn in (("distance_profile", _distance_profile),
                     ("common_neighbour_profile", _common_neighbour_profile)):
        va, vb = fn(ga), fn(gb)
        if va != vb:
            # both graphs are vertex-transitive, so the profile of vertex 0 is a graph invariant
            return IsomorphismVerdict(False, {
                "kind": "invariant", "name": name, "values": [list(va), list(vb)]})
    mapping, nodes, separated = find_isomorphism(ga, gb, fixed=(0, 0))
    if mapping is not None:
        return IsomorphismVerdict(True, {"kind": "bijection", "mapping": mapping})
    if separated:
        return IsomorphismVerdict(False, {
            "kind": "invariant", "name": "refinement_after_fixing_vertex_0"})
    return IsomorphismVerdict(False, {"kind": "exhaustive", "nodes": nodes})


# ---------------------------------------------------------------------------
# sweeps

@dataclass
class CospectralClass:
    n: int
    charpoly_digest: str
    members: list[CirculantSpec]
    verdicts: list[tuple[int, int, bool, str]] = field(default_factory=list)

    @property
    def non_isomorphic_pairs(self) -> list[tuple[CirculantSpec, CirculantSpec]]:
        return [(self.members[i], self.members[j]) for i, j, iso, _ in self.verdicts if not iso]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "charpoly": self.charpoly_digest,
            "members": [str(m) for m in self.members],
            "verdicts": [
                {"a": str(self.members[i]), "b": str(self.members[j]), "isomorphic": iso, "certificate": kind}
                for i, j, iso, kind in self.verdicts
            ],
        }


@dataclass
class SearchReport:
    n_min: int
    n_max: int
    connected_only: bool
    total_specs: int
    classes: list[CospectralClass]
    cross_checked_up_to: int
    elapsed: float = 0.0

    @property
    def non_isomorphic_pairs(self) -> list[tuple[CirculantSpec, CirculantSpec]]:
        return [p for c in self.classes for p in c.non_isomorphic_pairs]

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "n_range": [self.n_min, self.n_max],
            "connected_only": self.connected_only,
            "total_specs": self.total_specs,
            "cross_checked_up_to": self.cross_checked_up_to,
            "cospectral_classes": [c.to_dict() for c in self.classes],
            "non_isomorphic_pairs": [[str(a), str(b)] for a, b in self.non_isomorphic_pairs],
        }
        if include_timing:
            out["elapsed_seconds"] = round(self.elapsed, 3)
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2)

    def to_table(self) -> str:
        lines = [
            f"circulants n={self.n_min}..{self.n_max}"
            f"{' (connected only)' if self.connected_only else ''}: {self.total_specs} specs,"
            f" {len(self.classes)} cospectral classes",
        ]
        for c in self.classes:
            tag = "NON-ISOMORPHIC" if c.non_isomorphic_pairs else "all isomorphic"
            lines.append(f"  n={c.n:<3} {c.charpoly_digest}  {' '.join(map(str, c.members))}  [{tag}]")
        pairs = self.non_isomorphic_pairs
        if pairs:
            lines.append("cospectral non-isomorphic pairs:")
            lines.extend(f"  {a}  ~  {b}" for a, b in pairs)
        else:
            lines.append("no cospectral non-isomorphic pairs")
        return "\n".join(lines)


def _poly_of(spec: CirculantSpec) -> tuple[int, ...]:
    return spec.char_poly().coeffs


def search_cospectral(
    n_min: int,
    n_max: int,
    connected_only: bool = False,
    workers: int = 1,
    cross_check_up_to: int = 12,
) -> SearchReport:
    """Group all circulants with n_min <= n <= n_max by characteristic polynomial.

    For n up to ``cross_check_up_to`` the grouping is recomputed from exact
    closed-form spectra and must agree.
    """
    if not 3 <= n_min <= n_max <= MAX_SEARCH_N:
        raise InvalidParameter(f"need 3 <= n_min <= n_max <= {MAX_SEARCH_N}, got {n_min}..{n_max}")
    start = time.perf_counter()
    specs = [s for n in range(n_min, n_max + 1) for s in enumerate_circulants(n, connected_only)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            polys = list(pool.map(_poly_of, specs, chunksize=16))
    else:
        polys = [_poly_of(s) for s in specs]

    groups: dict[tuple[int, tuple[int, ...]], list[CirculantSpec]] = {}
    for spec, poly in zip(specs, polys):
        groups.setdefault((spec.n, poly), []).append(spec)

    for n in range(n_min, min(n_max, cross_check_up_to) + 1):
        by_poly = sorted(sorted(g) for (gn, _), g in groups.items() if gn == n)
        by_spec: dict[Spectrum, list[CirculantSpec]] = {}
        for s in specs:
            if s.n == n:
                spectrum = s.spectrum()
                for known in by_spec:
                    if known == spectrum:
                        by_spec[known].append(s)
                        break
                else:
                    by_spec[spectrum] = [s]
        if sorted(sorted(g) for g in by_spec.values()) != by_poly:
            raise AssertionError(f"exact spectra and characteristic polynomials disagree at n={n}")

    classes = []
    for (n, poly), members in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[1][0])):
        if len(members) < 2:
            continue
        cls = CospectralClass(n, CharPoly(poly).digest(), sorted(members))
        for i, j in itertools.combinations(range(len(cls.members)), 2):
            verdict = circulant_isomorphic(cls.members[i], cls.members[j])
            cls.verdicts.append((i, j, verdict.isomorphic, verdict.certificate["kind"]))
        classes.append(cls)
    return SearchReport(
        n_min, n_max, connected_only, len(specs), classes,
        min(n_max, cross_check_up_to) if n_min <= cross_check_up_to else 0,
        time.perf_counter() - start,
    )


ORDER_20_PAIR = (CirculantSpec(20, (2, 3, 4, 7)), CirculantSpec(20, (3, 6, 7, 8)))


def verify_counterexample(pair: Sequence[CirculantSpec] = ORDER_20_PAIR) -> dict:
    """Check that the two circulants share a characteristic polynomial yet are not isomorphic."""
    a, b = pair
    pa, pb = a.char_poly(), b.char_poly()
    verdict = circulant_isomorphic(a, b)
    return {
        "pair": [str(a), str(b)],
        "charpoly_equal": pa == pb,
        "charpoly": pa.digest(),
        "charpoly_b": pb.digest(),
        "isomorphic": verdict.isomorphic,
        "certificate": verdict.certificate,
        "ok": pa == pb and not verdict.isomorphic,
    }
