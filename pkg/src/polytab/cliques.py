"""Compatibility graph, clique tabulation, specialization counts, packets.

Two vertices are adjacent when their resultant is smooth.  Cliques are
enumerated by the lesser-neighbor recursion: every clique has a unique
maximal vertex in the fixed total order, so walking candidate sets
restricted to lesser-neighbor masks counts each clique exactly once.
Neighbor sets are bitmasks (Python ints), which makes the intersection in
the inner loop a single AND even for a few thousand vertices.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

from .budget import Budget, BudgetExceededError
from .poly import (
    INF,
    mobius_on_point,
    rational_roots,
    resultant_fast,
)
from .smooth import PrimeSet
from .vertices import VertexSet

TABLE_SCHEMA = "polytab.table/1"


# ---------------------------------------------------------------------------
# graph


@dataclass
class CompatGraph:
    vertices: list            # [Vertex], the fixed total order
    degrees: list             # per-vertex degree
    lesser: list              # per-vertex bitmask of neighbors with lower index
    P: PrimeSet

    def neighbor_counts(self, idx: int) -> dict:
        """Full-neighborhood degree profile of one vertex."""
        out = {}
        for jdx in range(len(self.vertices)):
            if jdx == idx:
                continue
            lo, hi = min(idx, jdx), max(idx, jdx)
            if (self.lesser[hi] >> lo) & 1:
                d = self.degrees[jdx]
                out[d] = out.get(d, 0) + 1
        return out

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.lesser)


def build_graph(vs: VertexSet, P: PrimeSet | None = None,
                budget: Budget | None = None) -> CompatGraph:
    """Adjacency by resultant smoothness over the vertex set's primes."""
    P = P or vs.P
    budget = budget or Budget.from_env()
    verts = vs.all_vertices()
    coeffs = [v.poly.coeffs for v in verts]
    degrees = [v.poly.degree for v in verts]
    primes = P.primes
    n = len(verts)
    lesser = [0] * n
    for i in range(n):
        budget.check()
        ci = coeffs[i]
        mask = 0
        for j in range(i):
            r = resultant_fast(ci, coeffs[j])
            if r == 0:
                continue
            r = abs(r)
            for p in primes:
                while r % p == 0:
                    r //= p
            if r == 1:
                mask |= 1 << j
        lesser[i] = mask
    return CompatGraph(verts, degrees, lesser, P)


# ---------------------------------------------------------------------------
# partition tables


def partition_label(expts: tuple) -> str:
    """Human form of an exponent vector, e.g. (1, 0, 2) -> '3^2 1'.

    The empty partition (the constant polynomial) prints as '-'.
    """
    parts = []
    for d in range(len(expts), 0, -1):
        e = expts[d - 1]
        if e == 1:
            parts.append(str(d))
        elif e > 1:
            parts.append(f"{d}^{e}")
    return " ".join(parts) if parts else "-"


def parse_kappa(text: str, f: int) -> tuple:
    """Parse '2^15,1' or '3 3 2 1^4' into an exponent vector of length f."""
    expts = [0] * f
    for chunk in text.replace(",", " ").split():
        if "^" in chunk:
            d, e = chunk.split("^")
        else:
            d, e = chunk, 1
        d, e = int(d), int(e)
        if not 1 <= d <= f:
            raise ValueError(f"partition part {d} outside 1..{f}")
        expts[d - 1] += e
    return tuple(expts)


@dataclass
class PartitionTable:
    f: int                      # largest vertex degree in the graph
    counts: dict = field(default_factory=dict)  # exponent vector -> count

    def count(self, expts) -> int:
        return self.counts.get(tuple(expts), 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def grid(self, row_degrees: tuple, col_degree: int):
        """Regroup counts: {(row exponents): {col exponent: count}}."""
        out = {}
        for expts, cnt in self.counts.items():
            rows = tuple(expts[d - 1] for d in row_degrees)
            out.setdefault(rows, {})[expts[col_degree - 1]] = cnt
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kappa", "count"])
        for expts in sorted(self.counts,
                            key=lambda e: (sum((d + 1) * x for d, x in enumerate(e)), e)):
            w.writerow([partition_label(expts), self.counts[expts]])
        return buf.getvalue()

    def to_json_payload(self, P: PrimeSet) -> dict:
        return {
            "schema": TABLE_SCHEMA,
            "primes": list(P.primes),
            "max_vertex_degree": self.f,
            "counts": [
                {"kappa": partition_label(expts),
                 "exponents": list(expts),
                 "count": cnt}
                for expts, cnt in sorted(self.counts.items())
            ],
        }


_FIELD_BITS = 24  # per-degree exponent field inside the packed key


def _count_cliques_from(start_indices, lesser, degunit, budget,
                        max_size=None):
    """Clique counts keyed by packed degree-exponent vectors.

    start_indices chunks the work by the clique's maximal vertex, which is
    what makes worker partitions merge deterministically by plain addition.
    """
    table = {}
    check = budget.check

    def rec(P, key, depth):
        Q = P
        while Q:
            b = Q & -Q
            Q ^= b
            v = b.bit_length() - 1
            k2 = key + degunit[v]
            if k2 in table:
                table[k2] += 1
            else:
                table[k2] = 1
            if depth + 1 != max_size:
                S = P & lesser[v]
                if S:
                    rec(S, k2, depth + 1)

    for i in start_indices:
        check()
        k = degunit[i]
        if k in table:
            table[k] += 1
        else:
            table[k] = 1
        if max_size != 1 and lesser[i]:
            rec(lesser[i], k, 1)
    return table


def _decode_key(key: int, f: int) -> tuple:
    return tuple((key >> (_FIELD_BITS * d)) & ((1 << _FIELD_BITS) - 1)
                 for d in range(f))


def tabulate(g: CompatGraph, max_size: int | None = None,
             kappa: tuple | None = None, workers: int = 1,
             budget: Budget | None = None) -> PartitionTable:
    """Count cliques of the graph grouped by factorization partition.

    kappa restricts the output to one partition (with degree-aware pruning);
    max_size caps the number of irreducible factors.  Counting never
    materializes cliques.  The empty product contributes the '1' cell.
    """
    budget = budget or Budget.from_env()
    f = max(g.degrees, default=1)
    degunit = [1 << (_FIELD_BITS * (d - 1)) for d in g.degrees]
    n = len(g.vertices)
    if kappa is not None:
        return _tabulate_filtered(g, kappa, budget)

    if workers <= 1 or n < 64:
        raw = _count_cliques_from(range(n), g.lesser, degunit, budget, max_size)
    else:
        chunks = [list(range(i, n, workers)) for i in range(workers)]
        raw = {}
        for part in _map_workers(chunks, g.lesser, degunit, max_size, workers):
            for k, v in part.items():
                raw[k] = raw.get(k, 0) + v
    table = PartitionTable(f)
    table.counts[(0,) * f] = 1
    for key, cnt in raw.items():
        table.counts[_decode_key(key, f)] = cnt
    return table


def _map_workers(chunks, lesser, degunit, max_size, workers):
    import multiprocessing as mp

    args = [(chunk, lesser, degunit, max_size) for chunk in chunks]
    with mp.get_context("fork").Pool(workers) as pool:
        return pool.starmap(_worker_entry, args)


def _worker_entry(chunk, lesser, degunit, max_size):
    return _count_cliques_from(chunk, lesser, degunit, Budget(), max_size)


def _tabulate_filtered(g: CompatGraph, kappa: tuple, budget: Budget):
    f = max(g.degrees, default=1)
    target = tuple(kappa) + (0,) * (f - len(kappa))
    count = 0
    for _ in enumerate_cliques(g, kappa=target, budget=budget):
        count += 1
    table = PartitionTable(f)
    table.counts[target] = count
    return table


def enumerate_cliques(g: CompatGraph, kappa: tuple | None = None,
                      max_size: int | None = None,
                      budget: Budget | None = None,
                      limit: int | None = None):
    """Yield cliques as tuples of vertex indices (ascending).

    With kappa, only cliques of exactly that partition are yielded and
    exhausted degree classes prune the walk early.
    """
    budget = budget or Budget.from_env()
    n = len(g.vertices)
    degrees = g.degrees
    lesser = g.lesser
    f = max(degrees, default=1)
    remaining = None
    if kappa is not None:
        remaining = list(kappa) + [0] * (f - len(kappa))
        if all(e == 0 for e in remaining):
            yield ()
            return
    produced = 0

    def allowed(v):
        return remaining is None or remaining[degrees[v] - 1] > 0

    stack = []

    def rec(P, chosen):
        nonlocal produced
        budget.check()
        Q = P
        while Q:
            b = Q & -Q
            Q ^= b
            v = b.bit_length() - 1
            if not allowed(v):
                continue
            chosen.append(v)
            if remaining is not None:
                remaining[degrees[v] - 1] -= 1
                if not any(remaining):
                    yield tuple(sorted(chosen))
                elif max_size is None or len(chosen) < max_size:
                    yield from rec(P & lesser[v], chosen)
            else:
                yield tuple(sorted(chosen))
                if max_size is None or len(chosen) < max_size:
                    yield from rec(P & lesser[v], chosen)
            if remaining is not None:
                remaining[degrees[v] - 1] += 1
            chosen.pop()

    if kappa is None:
        yield ()
    full = (1 << n) - 1
    for clique in rec(full, stack):
        yield clique
        produced += 1
        if limit is not None and produced >= limit:
            raise BudgetExceededError(f"clique stream exceeds limit {limit}")


# ---------------------------------------------------------------------------
# specialization-set counts


def _ordered_partition_count(kappa_expts: tuple, nu_blocks: tuple) -> int:
    """Ordered set-partition count of a degree multiset into blocks.

    kappa_expts[d-1] items of degree d must fill ordered blocks whose degree
    sums are nu_blocks; items are distinct, so choices multiply binomially.
    """
    degs = [d + 1 for d, e in enumerate(kappa_expts) for _ in range(e)]
    if sum(degs) != sum(nu_blocks):
        return 0

    @lru_cache(maxsize=None)
    def solve(remaining: tuple, block: int) -> int:
        if block == len(nu_blocks):
            return 1 if not any(remaining) else 0
        total = 0
        target = nu_blocks[block]

        def assign(d, left, ways, rem):
            nonlocal total
            if left == 0:
                total += ways * solve(tuple(rem), block + 1)
                return
            if d > len(rem):
                return
            avail = rem[d - 1]
            maxtake = min(avail, left // d)
            for take in range(maxtake + 1):
                if take * d <= left:
                    rem2 = list(rem)
                    rem2[d - 1] -= take
                    assign(d + 1, left - take * d, ways * comb(avail, take), rem2)

        assign(1, target, 1, list(remaining))
        return total

    return solve(tuple(kappa_expts), 0)


def count_u_nu(g: CompatGraph, nu: tuple, workers: int = 1,
               budget: Budget | None = None) -> int:
    """Number of tuples of monic polynomials with prescribed degrees whose
    product times t(t-1) has unit discriminant.

    nu must end with three 1s (the marked points); those slots are passive.
    Computed as sum over cliques of ordered set-partition counts, i.e. from
    the partition table and a combinatorial factor per partition.
    """
    nu = tuple(nu)
    if len(nu) < 3 or nu[-3:] != (1, 1, 1):
        raise ValueError("nu must end with (1, 1, 1)")
    blocks = nu[:-3]
    if not blocks:
        return 1  # only the empty tuple
    fmax = max(g.degrees, default=1)
    if max(blocks) < fmax:
        pass  # vertices of larger degree simply never fit a block
    table = tabulate(g, max_size=sum(blocks), workers=workers, budget=budget)
    total = 0
    for expts, cnt in table.counts.items():
        if sum((d + 1) * e for d, e in enumerate(expts)) == sum(blocks):
            ways = _ordered_partition_count(expts, blocks)
            if ways:
                total += ways * cnt
    return total


# ---------------------------------------------------------------------------
# reduction bound


def _moebius(n: int) -> int:
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def reduction_bound(p: int, f: int) -> int:
    """Packing bound N(p, f): projective points of degree <= f, minus 3."""
    if f < 1:
        raise ValueError("f must be >= 1")
    total = 1  # the point at infinity
    for d in range(1, f + 1):
        total += sum(_moebius(d // e) * p ** e for e in range(1, d + 1) if d % e == 0)
    return total - 3


# ---------------------------------------------------------------------------
# fractional-linear packets of fully split polynomials


def _triple_to_matrix(p, q, r):
    """The unique map sending (p, q, r) to (0, 1, inf), as an integer matrix."""
    def lin(x):
        # returns (a, b) meaning a*z + b, with inf handled by the caller
        return x

    if p == INF:
        a, b, c, d = 0, q - r, 1, -r
    elif q == INF:
        a, b, c, d = 1, -p, 1, -r
    elif r == INF:
        a, b, c, d = 1, -p, 0, q - p
    else:
        a, b = q - r, -p * (q - r)
        c, d = q - p, -r * (q - p)
    den = 1
    for x in (a, b, c, d):
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    mat = tuple(int(x * den) for x in (a, b, c, d))
    g = 0
    for x in mat:
        g = gcd(g, x)
    return tuple(x // g for x in mat)


def _mat_mul(m1, m2):
    a1, b1, c1, d1 = m1
    a2, b2, c2, d2 = m2
    m = (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2,
         c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)
    g = 0
    for x in m:
        g = gcd(g, x)
    m = tuple(x // g for x in m)
    for x in m:
        if x:
            return m if x > 0 else tuple(-y for y in m)
    return m


_IDENT = (1, 0, 0, 1)


def _mat_order(m, cap=16):
    acc = m
    for k in range(1, cap + 1):
        if acc == _IDENT:
            return k
        acc = _mat_mul(acc, m)
    return None


def _group_label(mats) -> str:
    order = len(mats)
    maxord = max(_mat_order(m) or 10 ** 9 for m in mats)
    if maxord == order:
        return f"C{order}"
    if order == 2 * maxord:
        if maxord == 2:
            return "V"
        if maxord == 3:
            return "S3"
        return f"D{maxord}"
    return f"order{order}"


@dataclass
class Packet:
    members: list               # polynomials (or clique ids) in the packet
    stabilizer_order: int
    stabilizer_label: str


def pgl2_packets(polys, roots=None, budget: Budget | None = None):
    """Group fully split polynomials into fractional-linear packets.

    Each polynomial's root set together with the marked points 0, 1, inf is
    carried around the projective line by the maps sending ordered triples of
    the set to (0, 1, inf); polynomials landing on each other join a packet.
    Returns (packets, mass) where mass = sum of 1/|stabilizer| and must equal
    len(polys) / ((a+3)(a+2)(a+1)) with a the root count.
    """
    budget = budget or Budget.from_env()
    polys = list(polys)
    if roots is None:
        roots = []
        for s in polys:
            rr = rational_roots(s.coeffs)
            if len(rr) != s.degree:
                raise ValueError(f"{s} does not split into linear factors")
            roots.append(rr)
    a = len(roots[0])
    index = {}
    for i, rr in enumerate(roots):
        if len(set(rr)) != len(rr):
            raise ValueError("split polynomials here must be separable")
        key = frozenset(rr) | {Fraction(0), Fraction(1), INF}
        if len(key) != a + 3:
            raise ValueError("roots must avoid the marked points")
        index[key] = i
    if len(index) != len(polys):
        raise ValueError("duplicate polynomials in packet input")

    packets = []
    seen = set()
    denom = (a + 3) * (a + 2) * (a + 1)
    for key, i in index.items():
        if i in seen:
            continue
        budget.check()
        pts = sorted(key, key=lambda x: (x == INF, x))
        orbit = set()
        stab_mats = []
        for p in pts:
            for q in pts:
                if q == p:
                    continue
                for r in pts:
                    if r == p or r == q:
                        continue
                    mat = _triple_to_matrix(p, q, r)
                    image = frozenset(mobius_on_point(mat, x) for x in key)
                    if image not in index:
                        raise AssertionError(
                            "packet image leaves the input set; input is not "
                            "closed under the marked-point maps")
                    orbit.add(index[image])
                    if image == key:
                        stab_mats.append(_mat_mul(mat, _IDENT))
        size = len(orbit)
        if size * len(stab_mats) != denom:
            raise AssertionError("orbit-stabilizer mismatch in packet")
        for m in orbit:
            seen.add(m)
        packets.append(Packet(sorted(orbit), len(stab_mats),
                              _group_label(stab_mats)))
    mass = sum(Fraction(1, p.stabilizer_order) for p in packets)
    assert mass == Fraction(len(polys), denom)
    return packets, mass
