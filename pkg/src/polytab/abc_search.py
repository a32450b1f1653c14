"""Height-bounded searches for the three ABC-triple variant sets.

A triple is a pairwise coprime (A, B, C) with A + B + C = 0 and ABC < 0,
encoded by the rational u = -A/C.  The three variants relax which slots must
be smooth outright versus smooth times a square or cube:

    inf-inf-inf : A, B, C all smooth
    inf-2-inf   : A, C smooth, B = b y^2 with b smooth
    3-2-inf     : C smooth, A = a x^3, B = b y^2 with a, b smooth

The searches enumerate the structured sides from smooth generators and test
the remaining side by stripping the prime set and checking the cofactor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .budget import Budget
from .poly import NormalizedPoly, normalize, rational_roots
from .smooth import PrimeSet, smooth_numbers_up_to, squarefree_class

VARIANT_III = "inf-inf-inf"
VARIANT_I2I = "inf-2-inf"
VARIANT_32I = "3-2-inf"
VARIANTS = (VARIANT_III, VARIANT_I2I, VARIANT_32I)

POINTS_SCHEMA = "polytab.points/1"

# (prime superset, proven-complete height, source) per variant: a search is
# certifiably complete when its primes lie inside a superset and its height
# bound reaches the corresponding cutoff
COMPLETENESS_SOURCES = {
    VARIANT_III: (
        (frozenset({2, 3, 5, 7}), 4375, "de Weger, Algorithms for diophantine equations, Thm 5.4"),
        (frozenset({2, 3, 5, 7, 11}), 18255, "de Weger, Algorithms for diophantine equations, Thm 5.4"),
        (frozenset({2, 3, 5, 7, 11, 13}), 1771561, "de Weger, Algorithms for diophantine equations, Thm 5.4"),
    ),
    VARIANT_I2I: (
        (frozenset({2, 3, 5}), 64000, "Cremona, elliptic curve tables"),
    ),
    VARIANT_32I: (
        (frozenset({2, 3}), 67867385039, "Coghlan (j-invariants over {2,3}); Cremona"),
    ),
}


@dataclass(frozen=True)
class AbcPoint:
    variant: str
    A: int
    B: int
    C: int
    u: Fraction
    class_datum: object = None  # None | squarefree delta | class id string

    @property
    def height(self) -> int:
        return max(abs(self.A), abs(self.C))

    def sort_key(self):
        return (self.height, self.u)


@dataclass(frozen=True)
class SearchCertificate:
    primes: tuple
    variant: str
    height_bound: int
    complete: bool
    citation: str | None = None


def canonical_triple(u: Fraction):
    """The unique pairwise coprime (A, B, C), sum 0 and ABC < 0, with u = -A/C."""
    if u == 0 or u == 1:
        raise ValueError("u must avoid 0 and 1")
    n, d = u.numerator, u.denominator
    A, B, C = -n, n - d, d
    if A * B * C > 0:
        A, B, C = -A, -B, -C
    return A, B, C


def _delta_of(u: Fraction) -> int:
    return squarefree_class(u * (1 - u))


def reference_cubic(j: Fraction) -> NormalizedPoly:
    """Normalized integer model of the cubic 4(j-1)t^3 - 27j t - 27j."""
    p, q = j.numerator, j.denominator
    return normalize([-27 * p, -27 * p, 0, 4 * (p - q)])[0]


def reference_cubic_partition(j: Fraction) -> tuple:
    """Factorization partition of the reference cubic: (3,), (2,1) or (1,1,1)."""
    s = reference_cubic(j)
    nroots = len(rational_roots(s.coeffs))
    return {0: (3,), 1: (2, 1), 3: (1, 1, 1)}[nroots]


# ---------------------------------------------------------------------------
# the F-resolvent attached to a pair of j-invariants (used for class splitting
# and for the degree-3 parametrization)


def f_resolvent_coeffs(j: Fraction, k: Fraction) -> list:
    """Coefficients (constant first, Fractions) of the degree-6 resolvent

        F(j,k,y) = k (j^2 y^3 - 2 j y^3 + 3 j y^2 - 3 j y + 1)^2
                   - j (j y^2 - 2 y + 1)^3
    """
    j2 = j * j
    return [
        k - j,
        -6 * j * (k - 1),
        3 * j * (3 * j * k - j + 2 * k - 4),
        -4 * j * (4 * j * k - 3 * j + k - 2),
        -3 * j2 * (2 * j * k + j - 7 * k + 4),
        6 * j2 * (j * k + j - 2 * k),
        j2 * (j2 * k - j2 - 4 * j * k + 4 * k),
    ]


def roots_of_F(j: Fraction, k: Fraction) -> list:
    """Rational roots of F(j,k,y) in Q union {'inf'}, with multiplicity.

    'inf' counts as a root (with multiplicity 6 - deg) when the y^6
    coefficient vanishes.  Requires j outside {0, 1}.
    """
    from .poly import INF

    j, k = Fraction(j), Fraction(k)
    if j in (0, 1):
        raise ValueError("j must avoid 0 and 1")
    coeffs = f_resolvent_coeffs(j, k)
    ipoly, _ = normalize(coeffs)
    roots = list(rational_roots(ipoly.coeffs))
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    roots.extend([INF] * (6 - (len(coeffs) - 1)))
    return roots


def has_rational_root_F(j: Fraction, k: Fraction) -> bool:
    return bool(roots_of_F(j, k))


# ---------------------------------------------------------------------------
# searches


def _emptiness_certificate(P, variant, H, complete, citation):
    return [], SearchCertificate(P.primes, variant, H, complete, citation)


def _certify(P, variant, H):
    for superset, cutoff, source in COMPLETENESS_SOURCES.get(variant, ()):
        if set(P.primes) <= superset and H >= cutoff:
            return True, source
    return False, None


def _iii_chunk(chunk, smooth, sset, H):
    us = set()
    n = len(smooth)
    for i in chunk:
        a = smooth[i]
        for jdx in range(i, n):
            b = smooth[jdx]
            if a + b in sset and gcd(a, b) == 1:
                c = a + b
                for A, C in ((a, b), (b, a), (a, -c), (-c, a), (b, -c), (-c, b)):
                    if max(abs(A), abs(C)) <= H:
                        us.add(Fraction(-A, C))
    return us


def _pair_chunk(chunk, acands, smooth, primes):
    """Shared inner loop for inf-2-inf and 3-2-inf: test B = -A - C for the
    square-times-smooth shape for both signs of C."""
    us = set()
    for i in chunk:
        a = acands[i]
        for c in smooth:
            if gcd(a, c) != 1:
                continue
            b = a + c
            for p in primes:
                while b % p == 0:
                    b //= p
            r = isqrt(b)
            if r * r == b:
                us.add(Fraction(-a, c))
            if a != c:
                b = abs(a - c)
                for p in primes:
                    while b % p == 0:
                        b //= p
                r = isqrt(b)
                if r * r == b:
                    us.add(Fraction(a, c))
    return us


def _run_chunked(worker, nitems, workers, budget, *args):
    """Deterministic union over index chunks, serial or via a process pool."""
    budget.check()
    if workers <= 1 or nitems < 64:
        return worker(range(nitems), *args)
    import multiprocessing as mp

    chunks = [range(i, nitems, workers) for i in range(workers)]
    with mp.get_context("fork").Pool(workers) as pool:
        parts = pool.starmap(worker, [(c,) + args for c in chunks])
    us = set()
    for part in parts:
        us |= part
    return us


def _search_iii(P: PrimeSet, H: int, budget: Budget, workers: int = 1):
    smooth = smooth_numbers_up_to(P, H)
    sset = set(smooth_numbers_up_to(P, 2 * H))
    return _run_chunked(_iii_chunk, len(smooth), workers, budget,
                        smooth, sset, H)


def _search_i2i(P: PrimeSet, H: int, budget: Budget, workers: int = 1):
    smooth = smooth_numbers_up_to(P, H)
    return _run_chunked(_pair_chunk, len(smooth), workers, budget,
                        smooth, smooth, P.primes)


def _cube_candidates(P: PrimeSet, H: int) -> list:
    """All positive n <= H whose rough part is a perfect cube (n = a x^3)."""
    out = []
    for s in smooth_numbers_up_to(P, H):
        lim = H // s
        x = 1
        while x * x * x <= lim:
            if all(x % p for p in P.primes):
                out.append(s * x * x * x)
            x += 1
    return sorted(set(out))


def _search_32i(P: PrimeSet, H: int, budget: Budget, workers: int = 1):
    cands = _cube_candidates(P, H)
    smooth = smooth_numbers_up_to(P, H)
    return _run_chunked(_pair_chunk, len(cands), workers, budget,
                        cands, smooth, P.primes)


def search_abc(P: PrimeSet, variant: str, H: int, budget: Budget | None = None,
               classify: bool = True, workers: int = 1):
    """All variant points of height <= H, sorted by (height, u), plus certificate.

    inf-inf-inf and inf-2-inf return empty immediately when 2 is outside P:
    the former is genuinely empty (three odd numbers cannot sum to zero), the
    latter is excluded from this package's contract because the degree-2
    parametrization downstream requires 2 in P.

    classify=False skips the pairwise cubic-class resolution for 3-2-inf
    points (each class_datum is then just the reference-cubic partition);
    delta classes for inf-2-inf are cheap and always attached.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if H < 1:
        raise ValueError("height bound must be >= 1")
    budget = budget or Budget.from_env()
    budget.require_height(H)

    if variant == VARIANT_III and 2 not in P:
        return _emptiness_certificate(
            P, variant, H, True, "empty: odd smooth numbers cannot sum to zero")
    if variant == VARIANT_I2I and 2 not in P:
        return _emptiness_certificate(
            P, variant, H, False, "unsupported: degree-2 parametrization needs 2 in P")

    if variant == VARIANT_III:
        us = _search_iii(P, H, budget, workers)
    elif variant == VARIANT_I2I:
        us = _search_i2i(P, H, budget, workers)
    else:
        us = _search_32i(P, H, budget, workers)

    points = []
    for u in us:
        A, B, C = canonical_triple(u)
        if variant == VARIANT_I2I:
            datum = _delta_of(u)
        elif variant == VARIANT_32I:
            datum = "".join(str(d) for d in reference_cubic_partition(u))
        else:
            datum = None
        points.append(AbcPoint(variant, A, B, C, u, datum))
    points.sort(key=AbcPoint.sort_key)

    if variant == VARIANT_32I and classify:
        points = _attach_cubic_classes(points)

    complete, citation = _certify(P, variant, H)
    return points, SearchCertificate(P.primes, variant, H, complete, citation)


def _attach_cubic_classes(points):
    irreducible = [pt for pt in points if pt.class_datum == "3"]
    classes = cubic_classes(irreducible)
    label = {}
    for rep, members in classes.items():
        for pt in members:
            label[pt.u] = f"cubic:{rep}"
    out = []
    for pt in points:
        if pt.u in label:
            out.append(AbcPoint(pt.variant, pt.A, pt.B, pt.C, pt.u, label[pt.u]))
        else:
            out.append(pt)
    return out


# ---------------------------------------------------------------------------
# class decompositions


def delta_classes(points) -> dict:
    """Partition inf-2-inf points by the square class of u(1-u)."""
    out = {}
    for pt in points:
        if pt.variant != VARIANT_I2I:
            raise ValueError("delta_classes expects inf-2-inf points")
        out.setdefault(_delta_of(pt.u), []).append(pt)
    return out


def cubic_classes(points) -> dict:
    """Group 3-2-inf points with irreducible reference cubic into classes.

    j ~ k when the resolvent F(j,k,y) has a root in Q union {inf}; the map is
    keyed by the class representative of minimal (height, u).
    """
    pts = list(points)
    for pt in pts:
        if reference_cubic_partition(pt.u) != (3,):
            raise ValueError(f"reference cubic of {pt.u} is not irreducible")
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # isomorphic cubic fields share the square class of the discriminant,
    # so only same-class pairs need the resolvent test
    dclass = [squarefree_class(Fraction(reference_cubic(pt.u).discriminant()))
              for pt in pts]
    for i in range(len(pts)):
        for k in range(i + 1, len(pts)):
            if dclass[i] == dclass[k] and find(i) != find(k) \
                    and has_rational_root_F(pts[i].u, pts[k].u):
                parent[find(i)] = find(k)
    groups = {}
    for i, pt in enumerate(pts):
        groups.setdefault(find(i), []).append(pt)
    out = {}
    for members in groups.values():
        members.sort(key=AbcPoint.sort_key)
        rep = members[0].u
        out[f"{rep.numerator}/{rep.denominator}"] = members
    return out


# ---------------------------------------------------------------------------
# JSON point-set files


def write_points(path, points, cert: SearchCertificate) -> None:
    payload = {
        "schema": POINTS_SCHEMA,
        "variant": cert.variant,
        "primes": list(cert.primes),
        "height_bound": str(cert.height_bound),
        "complete": cert.complete,
        "citation": cert.citation,
        "points": [
            {
                "A": str(pt.A),
                "B": str(pt.B),
                "C": str(pt.C),
                "u": f"{pt.u.numerator}/{pt.u.denominator}",
                "class": None if pt.class_datum is None else str(pt.class_datum),
            }
            for pt in points
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def read_points(path):
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("schema") != POINTS_SCHEMA:
        raise ValueError(f"not a point-set file: {path}")
    variant = payload["variant"]
    points = []
    for rec in payload["points"]:
        num, den = rec["u"].split("/")
        u = Fraction(int(num), int(den))
        datum = rec.get("class")
        if variant == VARIANT_I2I and datum is not None:
            datum = int(datum)
        points.append(AbcPoint(variant, int(rec["A"]), int(rec["B"]),
                               int(rec["C"]), u, datum))
    cert = SearchCertificate(
        tuple(payload["primes"]), variant, int(payload["height_bound"]),
        payload["complete"], payload.get("citation"))
    return points, cert
