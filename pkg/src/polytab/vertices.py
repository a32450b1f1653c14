"""Construction of the irreducible vertex sets, degree by degree.

Degree 1 comes straight from inf-inf-inf points.  Degree 2 runs the
w-triple parametrization: for each square-free class delta, triples
(w0, w1, winf) from the class (with the sentinel 1 allowed) satisfying

    (w1 - w0 - winf)^2 - 4 w0 winf = -4 w0 w1 winf

produce every degree <= 2 polynomial of that discriminant class.  Instead of
scanning all triples, winf is solved from (w0, w1): the quadratic relation
gives winf = w0 + w1 - 2 w0 w1 +- 2 sqrt(w0 w1 (1-w0)(1-w1)), and the square
root is exact inside a class.  Degree 3 runs the two-root parametrization
s^{m,n} indexed by a j-invariant and roots m, n of the resolvents F(j, j0)
and F(j, j1).  Degree >= 4 is ingestion only: candidate characteristic
polynomials are re-verified, expanded to full orbits and deduplicated, so a
candidate file can never inject a wrong vertex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .abc_search import (
    VARIANT_32I,
    VARIANT_I2I,
    VARIANT_III,
    cubic_classes,
    delta_classes,
    reference_cubic_partition,
    roots_of_F,
    search_abc,
)
from .budget import Budget
from .poly import (
    INF,
    NormalizedPoly,
    check_membership,
    is_irreducible,
    normalize,
    poly_mul,
    s3_orbit,
    special_values,
)
from .smooth import PrimeSet

VERTEX_SCHEMA = "polytab.vertices/1"

__all__ = [
    "Vertex", "VertexSet", "build_degree1", "build_degree2", "build_degree3",
    "roots_of_F", "ingest_units", "cross_validate", "build_vertex_set",
    "TABLE5_REPRESENTATIVES", "write_vertex_set", "read_vertex_set",
    "parse_candidate_file", "poly_height",
]


@dataclass(frozen=True)
class Vertex:
    poly: NormalizedPoly
    class_datum: object = None
    provenance: str = "built"

    @property
    def degree(self) -> int:
        return self.poly.degree

    def sort_key(self):
        return self.poly.sort_key()


@dataclass
class VertexSet:
    P: PrimeSet
    by_degree: dict = field(default_factory=dict)   # degree -> sorted [Vertex]
    certificates: dict = field(default_factory=dict)  # degree -> status str

    def add_degree(self, degree: int, vertices, certificate: str) -> None:
        vs = sorted(set(vertices), key=Vertex.sort_key)
        self.by_degree[degree] = vs
        self.certificates[degree] = certificate

    def degree_slice(self, degree: int):
        return self.by_degree.get(degree, [])

    def all_vertices(self):
        """Fixed total order: ascending degree, then coefficient order."""
        out = []
        for d in sorted(self.by_degree):
            out.extend(self.by_degree[d])
        return out

    def max_degree(self) -> int:
        return max(self.by_degree, default=0)

    def counts(self) -> dict:
        return {d: len(v) for d, v in sorted(self.by_degree.items())}


def poly_height(s: NormalizedPoly) -> int:
    """max(|s(0)|, |s(1)|, |s(inf)|): constant on S3 orbits."""
    v0, v1, vinf = special_values(s)
    return max(abs(v0), abs(v1), abs(vinf))


# ---------------------------------------------------------------------------
# degree 1


def build_degree1(points, P: PrimeSet):
    """One normalized linear polynomial per inf-inf-inf point."""
    vertices = []
    for pt in points:
        if pt.variant != VARIANT_III:
            raise ValueError("degree-1 build expects inf-inf-inf points")
        u = pt.u
        s = NormalizedPoly((-u.numerator, u.denominator))
        rep = check_membership(s, P)
        if not rep.ok:
            raise AssertionError(f"search produced a non-member point {u}")
        vertices.append(Vertex(s))
    return sorted(set(vertices), key=Vertex.sort_key)


# ---------------------------------------------------------------------------
# degree 2


def _sqrt_exact(q: Fraction):
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def build_degree2(P: PrimeSet, points):
    """All degree-2 members: (irreducible vertices, split polynomials, stats).

    Split polynomials are the products of two linear members (square
    discriminant); they are returned normalized but are not vertices.
    """
    if 2 not in P:
        raise ValueError("degree-2 parametrization requires 2 in P")
    classes = delta_classes(points)
    one = Fraction(1)
    irreducible = {}
    split = {}
    stats = {"triples": 0, "discarded": 0}
    for delta, members in sorted(classes.items()):
        ws = [one] + sorted(pt.u for pt in members)
        wset = set(ws)
        for w0 in ws:
            for w1 in ws:
                root = _sqrt_exact(w0 * w1 * (1 - w0) * (1 - w1))
                if root is None:
                    raise AssertionError(
                        f"class {delta} is not closed under the triple relation")
                base = w0 + w1 - 2 * w0 * w1
                for winf in {base + 2 * root, base - 2 * root}:
                    if winf == 0 or winf not in wset:
                        continue
                    stats["triples"] += 1
                    s, _ = normalize([w0, w1 - w0 - winf, winf])
                    if s.degree != 2 or s.discriminant() == 0:
                        stats["discarded"] += 1
                        continue
                    rep = check_membership(s, P)
                    if not rep.ok:
                        raise AssertionError(
                            f"triple ({w0},{w1},{winf}) produced non-member {s}")
                    d = s.discriminant()
                    r = isqrt(abs(d))
                    if d > 0 and r * r == d:
                        split[s.coeffs] = s
                    else:
                        irreducible[s.coeffs] = Vertex(s, class_datum=delta)
    vertices = sorted(irreducible.values(), key=Vertex.sort_key)
    split_polys = sorted(split.values(), key=NormalizedPoly.sort_key)
    return vertices, split_polys, stats


def recovered_w_triple(s: NormalizedPoly):
    """(w0, w1, winf) = -disc/(4 u0 u1 uinf) * (u0, u1, uinf) for degree 2."""
    u0, u1, uinf = (Fraction(v) for v in special_values(s))
    disc = Fraction(s.discriminant())
    scale = -disc / (4 * u0 * u1 * uinf)
    return (scale * u0, scale * u1, scale * uinf)


# ---------------------------------------------------------------------------
# degree 3


def _cube(lin):
    sq = poly_mul(lin, lin)
    return poly_mul(sq, lin)


def _smn_coeffs(j: Fraction, m, n):
    """Monic cubic s^{m,n} for a j-invariant and resolvent roots m, n.

    Roots may be 'inf'; the two limiting forms below are the n -> inf and
    m -> inf limits of the generic expression.
    """
    if m == INF and n == INF:
        raise ValueError("m and n cannot both be infinite")
    if m == INF:
        return [j * (j - 2) * n ** 3, 3 * j * n * n, -3 * j * n, Fraction(1)]
    if n == INF:
        # j (t + m - 1)^3 - (j - 1)(t - 1)^3 - j (j - 1) m^3
        c = [j * x for x in _cube([m - 1, Fraction(1)])]
        d = [(j - 1) * x for x in _cube([Fraction(-1), Fraction(1)])]
        out = [a - b for a, b in zip(c, d)]
        out[0] -= j * (j - 1) * m ** 3
        return out
    t1 = [(j - 1) * x for x in _cube([-n, n - m])]
    t3 = [j * x for x in _cube([m * n - n, n - m])]
    out = [a - b for a, b in zip(t1, t3)]
    out[0] += (j - 1) * j * m ** 3 * n ** 3
    den = (m - n) ** 3
    return [x / den for x in out]


def candidate_grid(j: Fraction, j0: Fraction, j1: Fraction):
    """The (m, n) candidate polynomials for one invariant triple (j0, j1, j).

    Yields (m, n, candidate) with m != n, candidates normalized; inseparable
    or degree-degenerate entries come through so callers can report them.
    """
    ms = sorted(set(roots_of_F(j, j0)), key=lambda r: (r == INF, r))
    ns = sorted(set(roots_of_F(j, j1)), key=lambda r: (r == INF, r))
    for m in ms:
        for n in ns:
            if m == n:
                continue
            coeffs = _smn_coeffs(j, m, n)
            yield m, n, normalize(coeffs)[0]


def build_degree3(P: PrimeSet, classes: dict, stats: dict | None = None):
    """Vertices of degree 3 from the class decomposition of 3-2-inf points.

    For every class, every j in the class and every pair (j0, j1) from the
    class together with 0, candidates s^{m,n} are built from resolvent root
    pairs, kept if separable with unit values, then the whole class is closed
    under the marked-point action (which also recovers the j = 0 members).
    """
    if 2 not in P or 3 not in P:
        raise ValueError("degree-3 parametrization requires 2 and 3 in P")
    if stats is None:
        stats = {}
    stats.setdefault("candidates", 0)
    stats.setdefault("rejected", 0)
    out = {}
    zero = Fraction(0)
    for rep, members in sorted(classes.items()):
        js = sorted(pt.u for pt in members)
        jext = [zero] + js
        accepted = {}
        root_cache = {}

        def roots_cached(j, k):
            key = (j, k)
            if key not in root_cache:
                root_cache[key] = sorted(set(roots_of_F(j, k)),
                                         key=lambda r: (r == INF, r))
            return root_cache[key]

        for j in js:
            for j0 in jext:
                ms = roots_cached(j, j0)
                if not ms:
                    continue
                for j1 in jext:
                    ns = roots_cached(j, j1)
                    for m in ms:
                        for n in ns:
                            if m == n:
                                continue
                            stats["candidates"] += 1
                            s = normalize(_smn_coeffs(j, m, n))[0]
                            if s.degree != 3 or s.discriminant() == 0:
                                stats["rejected"] += 1
                                continue
                            if not check_membership(s, P).ok:
                                stats["rejected"] += 1
                                continue
                            accepted[s.coeffs] = s
        closed = {}
        for s in accepted.values():
            for t in s3_orbit(s):
                closed[t.coeffs] = t
        for s in closed.values():
            if not check_membership(s, P).ok:
                raise AssertionError(f"orbit closure broke membership: {s}")
            out[s.coeffs] = Vertex(s, class_datum=f"cubic:{rep}")
    return sorted(out.values(), key=Vertex.sort_key)


# ---------------------------------------------------------------------------
# ingestion of excellent-unit candidates (degree >= 4, plus cross-checks)


# Published orbit representatives of the known vertex sets over {2}
# (degrees 1, 2 and 4), coefficient lists constant term first.
TABLE5_REPRESENTATIVES = {
    1: ((1, 1),),
    2: ((1, 6, 1), (1, -6, 1), (-1, -2, 1), (1, 0, 1)),
    4: (
        (1, 0, 0, 0, 1), (1, 0, 6, 0, 1),
        (1, -4, -26, -4, 1), (1, 4, -26, 4, 1),
        (1, 28, 70, 28, 1), (1, -28, 70, -28, 1),
        (1, 4, -6, -4, 1), (1, 12, -2, -4, 1), (1, -12, -2, 4, 1),
        (-1, 4, -2, -4, 1), (-1, -4, -2, 4, 1),
        (1, -20, 102, -148, 1), (1, -12, 34, -20, 1),
        (1, 12, 6, 12, 1), (1, -12, 6, -12, 1), (-1, -4, 6, -4, 1),
        (1, -4, -2, -4, 1), (1, 4, -2, 4, 1),
        (1, 20, -26, 20, 1), (1, -20, -26, -20, 1),
        (-1, 0, -2, 0, 1), (1, -4, 10, -12, 1),
        (1, -4, 22, -4, 1), (1, 4, 22, 4, 1), (1, -4, 4, 0, 1),
    ),
}


@dataclass
class IngestReport:
    accepted: int = 0
    rejected: list = field(default_factory=list)   # (coeffs, reason)


def ingest_units(candidates, P: PrimeSet):
    """Verify candidate polynomials and expand them into full vertex orbits.

    Every candidate is re-checked for irreducibility and membership, so bad
    rows in a candidate file are reported and skipped, never admitted.
    Returns ({degree: [Vertex]}, IngestReport).
    """
    report = IngestReport()
    out = {}
    for cand in candidates:
        if isinstance(cand, NormalizedPoly):
            s = cand
        else:
            s, _ = normalize(list(cand))
        if s.degree < 1:
            report.rejected.append((s.coeffs, "constant"))
            continue
        if not is_irreducible(s):
            report.rejected.append((s.coeffs, "reducible"))
            continue
        if not check_membership(s, P).ok:
            report.rejected.append((s.coeffs, "membership"))
            continue
        report.accepted += 1
        for t in s3_orbit(s):
            if not check_membership(t, P).ok:
                raise AssertionError(f"orbit of {s} broke membership at {t}")
            out.setdefault(t.degree, {})[t.coeffs] = Vertex(
                t, provenance="ingested")
    return (
        {d: sorted(vs.values(), key=Vertex.sort_key) for d, vs in sorted(out.items())},
        report,
    )


def parse_candidate_file(path):
    """One polynomial per line, integer coefficients constant term first."""
    cands = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            cands.append(tuple(int(x) for x in parts))
    return cands


def cross_validate(vsA: VertexSet, vsB: VertexSet, degree: int):
    """Symmetric difference of the degree slices of two vertex sets."""
    if vsA.P != vsB.P:
        raise ValueError("vertex sets live over different prime sets")
    a = {v.poly.coeffs for v in vsA.degree_slice(degree)}
    b = {v.poly.coeffs for v in vsB.degree_slice(degree)}
    return sorted(a - b), sorted(b - a)


# ---------------------------------------------------------------------------
# orchestration


DEFAULT_HEIGHTS = {
    VARIANT_III: 10 ** 9,
    VARIANT_I2I: 10 ** 9,
    VARIANT_32I: 10 ** 11,
}


def build_vertex_set(P: PrimeSet, max_degree: int,
                     points_by_variant: dict | None = None,
                     candidates=None,
                     heights: dict | None = None,
                     budget: Budget | None = None) -> VertexSet:
    """Run the per-degree builders up to max_degree and assemble a VertexSet.

    points_by_variant may supply pre-searched point lists (as read back from
    point-set files); missing variants are searched at the default heights.
    Degrees >= 4 are filled from ingestion candidates when provided.
    """
    budget = budget or Budget.from_env()
    heights = {**DEFAULT_HEIGHTS, **(heights or {})}
    points_by_variant = dict(points_by_variant or {})
    certs = {}

    def get_points(variant, classify=False):
        if variant in points_by_variant:
            pts, cert = points_by_variant[variant]
            return pts, cert
        pts, cert = search_abc(P, variant, heights[variant], budget=budget,
                               classify=classify)
        points_by_variant[variant] = (pts, cert)
        return pts, cert

    vs = VertexSet(P)
    if max_degree >= 1:
        pts, cert = get_points(VARIANT_III)
        vs.add_degree(1, build_degree1(pts, P),
                      "complete" if cert.complete else "search-bounded")
    if max_degree >= 2:
        if 2 in P:
            pts, cert = get_points(VARIANT_I2I)
            verts, split, _ = build_degree2(P, pts)
            vs.add_degree(2, verts,
                          "complete" if cert.complete else "search-bounded")
            vs.split_degree2 = split
        else:
            vs.add_degree(2, [], "unsupported: 2 not in prime set")
    if max_degree >= 3:
        if 2 in P and 3 in P:
            pts, cert = get_points(VARIANT_32I)
            irr = [pt for pt in pts if reference_cubic_partition(pt.u) == (3,)]
            classes = cubic_classes(irr)
            vs.add_degree(3, build_degree3(P, classes),
                          "complete" if cert.complete else "search-bounded")
        else:
            vs.add_degree(3, [], "unsupported: needs 2 and 3 in prime set")
    if max_degree >= 4:
        if candidates is None and P.primes == (2,):
            candidates = [c for d, cs in TABLE5_REPRESENTATIVES.items()
                          for c in cs if d >= 4]
        if candidates:
            ingested, _ = ingest_units(candidates, P)
            for d, verts in ingested.items():
                if 4 <= d <= max_degree:
                    vs.add_degree(d, verts, "conditional (ingested)")
    return vs


# ---------------------------------------------------------------------------
# vertex-set files


def write_vertex_set(path, vs: VertexSet) -> None:
    payload = {
        "schema": VERTEX_SCHEMA,
        "primes": list(vs.P.primes),
        "max_degree": vs.max_degree(),
        "degrees": {
            str(d): {
                "certificate": vs.certificates.get(d, ""),
                "vertices": [
                    {
                        "coeffs": [str(c) for c in v.poly.coeffs],
                        "class": None if v.class_datum is None else str(v.class_datum),
                        "provenance": v.provenance,
                    }
                    for v in verts
                ],
            }
            for d, verts in sorted(vs.by_degree.items())
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def read_vertex_set(path) -> VertexSet:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("schema") != VERTEX_SCHEMA:
        raise ValueError(f"not a vertex-set file: {path}")
    vs = VertexSet(PrimeSet(payload["primes"]))
    for d_str, block in payload["degrees"].items():
        verts = []
        for rec in block["vertices"]:
            poly = NormalizedPoly(tuple(int(c) for c in rec["coeffs"]))
            datum = rec.get("class")
            if datum is not None and datum.lstrip("-").isdigit():
                datum = int(datum)
            verts.append(Vertex(poly, class_datum=datum,
                                provenance=rec.get("provenance", "built")))
        vs.add_degree(int(d_str), verts, block.get("certificate", ""))
    return vs
