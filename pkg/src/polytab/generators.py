"""Large-degree constructions: cyclotomic counts, three-point covers, pullbacks.

The generating-function route counts products of distinct cyclotomic
polynomials indexed by smooth integers; the pullback route composes rational
maps with critical values among the marked points, which multiplies degrees
while keeping bad reduction inside the prime set.  Every polynomial emitted
here is re-verified by the membership predicate before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .budget import Budget, BudgetExceededError
from .poly import (
    NormalizedPoly,
    check_membership,
    derivative_coeffs,
    normalize,
    poly_mul,
    resultant_coeffs,
    special_values,
)
from .smooth import PrimeSet, is_smooth, is_unit_in, smooth_numbers_up_to


# ---------------------------------------------------------------------------
# cyclotomic generating function


@dataclass(frozen=True)
class SeriesCoefficients:
    P: PrimeSet
    kmax: int
    coeffs: tuple  # c_0 .. c_kmax


def _phi_of_smooth(i: int, P: PrimeSet) -> int:
    phi = i
    for p in P:
        if i % p == 0:
            phi = phi // p * (p - 1)
    return phi


def cyclo_series(P: PrimeSet, kmax: int, budget: Budget | None = None) -> SeriesCoefficients:
    """Counts of degree-k products of distinct cyclotomic polynomials with
    smooth index, as the truncated product of (1 + x^phi(i)).

    Indices run over the smooth integers > 1; phi(i) >= i * prod(1 - 1/p)
    bounds the enumeration.
    """
    if 2 not in P:
        raise ValueError("the cyclotomic count needs 2 in the prime set")
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    budget = budget or Budget.from_env()
    scale_num = 1
    scale_den = 1
    for p in P:
        scale_num *= p
        scale_den *= p - 1
    bound = kmax * scale_num // scale_den + 1
    degrees = []
    for i in smooth_numbers_up_to(P, bound):
        if i == 1:
            continue
        phi = _phi_of_smooth(i, P)
        if phi <= kmax:
            degrees.append(phi)
    degrees.sort()
    coeffs = [0] * (kmax + 1)
    coeffs[0] = 1
    for d in degrees:
        budget.check()
        for k in range(kmax, d - 1, -1):
            if coeffs[k - d]:
                coeffs[k] += coeffs[k - d]
    return SeriesCoefficients(P, kmax, tuple(coeffs))


# ---------------------------------------------------------------------------
# recursive three-point covers


def _radical(coeffs):
    """Primitive polynomial with the same roots, multiplicities dropped."""
    c = list(coeffs)
    d = derivative_coeffs(c)
    if not any(d):
        return normalize(c)[0].coeffs
    g = _poly_gcd(c, d)
    if len(g) == 1:
        return normalize(c)[0].coeffs
    q = _exact_div(c, g)
    return normalize(q)[0].coeffs


def _poly_gcd(a, b):
    """gcd of integer polynomials, primitive, by fraction-free remainders."""
    from .poly import _content, _prem, _trim

    a = _trim(list(a))
    b = _trim(list(b))
    while b:
        r = _prem(a, b)
        a, b = b, r
        if b:
            g = _content(b)
            b = [x // g for x in b]
    g = _content(a)
    a = [x // g for x in a]
    if a[-1] < 0:
        a = [-x for x in a]
    return a


def _exact_div(a, b):
    from .poly import _poly_divmod_exact

    q = _poly_divmod_exact(a, b)
    if q is None:
        raise ValueError("inexact polynomial division")
    return q


@dataclass(frozen=True)
class RationalCover:
    """F(t) = scalar * numer(t) / denom(t), a self-map of the projective line."""

    name: str
    numer: NormalizedPoly
    denom: NormalizedPoly
    scalar: Fraction

    @property
    def degree(self) -> int:
        return max(self.numer.degree, self.denom.degree)

    def value_at_infinity(self):
        from .poly import INF

        dn, dd = self.numer.degree, self.denom.degree
        if dn > dd:
            return INF
        if dn < dd:
            return Fraction(0)
        return self.scalar * Fraction(self.numer.coeffs[-1], self.denom.coeffs[-1])

    def evaluate(self, x):
        from .poly import INF, poly_eval

        if x == INF:
            return self.value_at_infinity()
        num = self.scalar * poly_eval(self.numer.coeffs, Fraction(x))
        den = poly_eval(self.denom.coeffs, Fraction(x))
        if den == 0:
            return INF
        return num / den


class CoverValidationError(ValueError):
    pass


def validate_cover(cover: RationalCover, P: PrimeSet) -> None:
    """Cover sanity for the pullback construction.

    Exact checks: numerator/denominator coprime; the three marked points map
    into the marked points; the fibers over the marked points carry exactly
    degree + 2 distinct projective points (so no critical value escapes
    them); unit scalar and smooth fiber data over P.
    """
    from .poly import INF

    f, g, u = cover.numer, cover.denom, cover.scalar
    m = cover.degree
    if len(_poly_gcd(f.coeffs, g.coeffs)) > 1:
        raise CoverValidationError("numerator and denominator share a factor")
    if not is_unit_in(u, P):
        raise CoverValidationError("scalar is not a unit over the prime set")
    for x in (Fraction(0), Fraction(1), INF):
        if cover.evaluate(x) not in (Fraction(0), Fraction(1), INF):
            raise CoverValidationError(f"marked point {x} escapes the marked set")
    # fiber polynomials over 0, 1 and infinity
    fiber0 = f.coeffs
    one_fiber = _fiber_one(cover)
    fiberinf = g.coeffs
    points = 1  # the point at infinity always lies in exactly one fiber
    for fib in (fiber0, one_fiber, fiberinf):
        rad = _radical(fib)
        points += len(rad) - 1
        d = _disc_or_none(rad)
        if d is not None and not is_smooth(d, P):
            raise CoverValidationError("fiber has bad reduction outside the primes")
    if points != m + 2:
        raise CoverValidationError(
            f"critical values escape the marked points ({points} != {m + 2})")
    r0, r1, rinf = (_radical(x) for x in (fiber0, one_fiber, fiberinf))
    for a, b in ((r0, r1), (r0, rinf), (r1, rinf)):
        r = resultant_coeffs(a, b)
        if r == 0 or not is_smooth(r, P):
            raise CoverValidationError("fibers meet or separate non-smoothly")


def _disc_or_none(rad):
    s = NormalizedPoly(rad)
    if s.degree < 2:
        return None
    return s.discriminant()


def _fiber_one(cover: RationalCover):
    """Integer polynomial whose roots are the finite preimages of 1."""
    u, f, g = cover.scalar, cover.numer.coeffs, cover.denom.coeffs
    top = max(len(f), len(g))
    num = [Fraction(0)] * top
    for i, x in enumerate(f):
        num[i] += u * x
    for i, x in enumerate(g):
        num[i] -= x
    while num and num[-1] == 0:
        num.pop()
    if not num:
        raise CoverValidationError("cover is constant 1")
    return normalize(num)[0].coeffs


def pullback(cover: RationalCover, s: NormalizedPoly, P: PrimeSet,
             verify: bool = True) -> NormalizedPoly:
    """Normalized s(F(t)) * denom(t)^deg(s); degree multiplies exactly.

    With verify=True (default) the output must pass the membership predicate;
    a failure means the cover is not a valid three-point cover for P.
    """
    k = s.degree
    u, f, g = cover.scalar, cover.numer.coeffs, cover.denom.coeffs
    acc = [Fraction(0)]
    fpow = [1]
    gpows = [[1]]
    for _ in range(k):
        gpows.append(poly_mul(gpows[-1], list(g)))
    for i, si in enumerate(s.coeffs):
        if si:
            term = poly_mul(fpow, gpows[k - i])
            coef = si * u ** i
            for idx, x in enumerate(term):
                if idx == len(acc):
                    acc.append(Fraction(0))
                acc[idx] += coef * x
        if i < k:
            fpow = poly_mul(fpow, list(f))
    while len(acc) > 1 and acc[-1] == 0:
        acc.pop()
    out = normalize(acc)[0]
    if out.degree != cover.degree * k:
        raise CoverValidationError(
            f"pullback degree {out.degree} != {cover.degree * k}")
    if verify:
        rep = check_membership(out, P)
        if not rep.ok:
            raise CoverValidationError(
                f"pullback of {s} failed membership: {rep.failures}")
    return out


def builtin_covers() -> dict:
    """The stock covers: the marked-point group, power maps, trinomials, and
    the degree-4 map used by the fractal family."""
    covers = {}
    ident = NormalizedPoly((0, 1))
    one = NormalizedPoly((1,))
    tm1 = NormalizedPoly((-1, 1))
    covers["identity"] = RationalCover("identity", ident, one, Fraction(1))
    covers["s3:(01)"] = RationalCover("s3:(01)", tm1, one, Fraction(-1))   # 1-t
    covers["s3:(0inf)"] = RationalCover("s3:(0inf)", one, ident, Fraction(1))
    covers["s3:(1inf)"] = RationalCover("s3:(1inf)", ident, tm1, Fraction(1))
    covers["s3:(01inf)"] = RationalCover("s3:(01inf)", one, tm1, Fraction(-1))
    covers["s3:(0inf1)"] = RationalCover("s3:(0inf1)", tm1, ident, Fraction(1))
    for p in (2, 3, 5, 7):
        coeffs = (0,) * p + (1,)
        covers[f"power:{p}"] = RationalCover(
            f"power:{p}", NormalizedPoly(coeffs), one, Fraction(1))
    for m in (2, 3, 4, 5):
        covers[f"trinomial:{m}"] = RationalCover(
            f"trinomial:{m}", NormalizedPoly((0,) * m + (1,)),
            NormalizedPoly((1 - m, m)), Fraction(1))
    covers["quartic-fractal"] = RationalCover(
        "quartic-fractal",
        NormalizedPoly(poly_mul((-1, 0, 1), (-1, 0, 1))),  # (t^2-1)^2
        NormalizedPoly((0, 0, 1)),
        Fraction(-1, 4))
    return covers


BAD_REDUCTION = {
    "identity": (), "s3:(01)": (), "s3:(0inf)": (),
    "s3:(1inf)": (), "s3:(01inf)": (), "s3:(0inf1)": (),
    "power:2": (2,), "power:3": (3,), "power:5": (5,), "power:7": (7,),
    "trinomial:2": (2,), "trinomial:3": (2, 3), "trinomial:4": (2, 3),
    "trinomial:5": (2, 5),
    "quartic-fractal": (2,),
}


# ---------------------------------------------------------------------------
# the fractal family over {2}


FRACTAL_SEEDS = {
    -1: NormalizedPoly((-1, 2, 1)),   # roots -1 +- sqrt(2)
    0: NormalizedPoly((1, 0, 1)),     # roots +- i
    1: NormalizedPoly((-1, -2, 1)),   # roots 1 +- sqrt(2)
}


def fractal_family(i_max: int, verify: bool = True,
                   budget: Budget | None = None) -> dict:
    """The iterated-preimage polynomials s_{i,j} for i <= i_max, j in {-1,0,1}.

    s_{1,j} are the seeds above; s_{i+1,j} pulls s_{i,j} back through the
    degree-4 cover, so deg s_{i,j} = 2 * 4^(i-1).  verify=False skips the
    discriminant check (the values at the marked points are always checked),
    which is what makes very large i feasible for coefficient export.
    """
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    budget = budget or Budget.from_env()
    if verify and i_max > 6:
        raise BudgetExceededError(
            "full verification above i = 6 is out of budget; "
            "pass verify=False for coefficient export")
    P2 = PrimeSet([2])
    cover = builtin_covers()["quartic-fractal"]
    out = {}
    for j, seed in FRACTAL_SEEDS.items():
        out[(1, j)] = seed
        if verify:
            rep = check_membership(seed, P2)
            assert rep.ok, (j, rep.failures)
    for i in range(1, i_max):
        for j in FRACTAL_SEEDS:
            budget.check()
            s = pullback(cover, out[(i, j)], P2, verify=verify)
            if not verify:
                v0, v1, vinf = special_values(s)
                if not (is_smooth(v0, P2) and is_smooth(v1, P2)
                        and is_smooth(vinf, P2)):
                    raise AssertionError(f"marked values of s_({i+1},{j}) not smooth")
            out[(i + 1, j)] = s
    return out


# ---------------------------------------------------------------------------
# named extremal polynomials


def _product(factors):
    c = [1]
    for fc in factors:
        c = poly_mul(c, list(fc))
    return NormalizedPoly(c)


NAMED_REGISTRY = {
    "big23": {
        "primes": (2, 3),
        "factors": (
            (-2, 0, 0, 1), (1, -3, 3, 1), (-1, 6, -6, 2), (4, -3, 0, 1),
            (-1, 3, 0, 2), (-2, 6, -9, 4), (-2, 6, -3, 1), (2, -3, 0, 2),
            (-1, 0, -3, 2), (1, -3, 0, 1), (1, 0, -3, 1), (1, -1, 1),
        ),
        "disc": 2 ** 105 * 3 ** 533,
        "published_disc": "2^105 3^533",
        "partition": (3,) * 11 + (2,),
    },
    "big235": {
        "primes": (2, 3, 5),
        "factors": (
            (3, 6, 1), (1, 6, 3), (3, -6, 1), (1, -6, 3),
            (-5, -2, 1), (-1, 2, 5), (-5, 2, 1), (-1, -2, 5),
            (-1, -2, 1), (-1, 2, 1), (-1, -6, 1), (-1, 6, 1),
            (-3, -2, 3), (-3, 2, 3), (1, 0, 1), (1, 1),
        ),
        # published unsigned as 2^1046 3^80 5^104; the exact value is negative
        "disc": -(2 ** 1046) * 3 ** 80 * 5 ** 104,
        "published_disc": "2^1046 3^80 5^104 (sign: negative)",
        "partition": (2,) * 15 + (1,),
    },
    "quartic-extremal": {
        "primes": (2,),
        "factors": (
            (1, 1), (1, 0, 1), (-1, -2, 1), (-1, 2, 1),
            (1, 4, -6, -4, 1), (1, -4, -6, 4, 1),
        ),
        "disc": -(2 ** 184),
        "published_disc": "-2^184",
        "partition": (4, 4, 2, 2, 2, 1),
    },
    "clique-2311": {
        "primes": (2,),
        "factors": ((2, -2, 1), (-2, 0, 1), (2, -4, 1), (-2, 1)),
        "disc": -(2 ** 34),
        "published_disc": "(element of the degree-2 graph example)",
        "partition": (2, 2, 2, 1),
    },
}


@dataclass(frozen=True)
class NamedReport:
    name: str
    poly: NormalizedPoly
    membership_ok: bool
    disc: int
    disc_matches: bool
    partition: tuple
    partition_matches: bool

    @property
    def ok(self) -> bool:
        return self.membership_ok and self.disc_matches and self.partition_matches


def verify_named(name: str) -> NamedReport:
    """Rebuild a registry polynomial from its factors and check everything.

    Factors are checked irreducible and pairwise compatible implicitly by
    the membership predicate on the product (the discriminant contains every
    pairwise resultant squared).
    """
    if name not in NAMED_REGISTRY:
        raise KeyError(f"unknown name {name!r}; known: {sorted(NAMED_REGISTRY)}")
    entry = NAMED_REGISTRY[name]
    P = PrimeSet(entry["primes"])
    factors = [NormalizedPoly(fc) for fc in entry["factors"]]
    poly = _product(entry["factors"])
    rep = check_membership(poly, P)
    disc = poly.discriminant()
    partition = tuple(sorted((f.degree for f in factors), reverse=True))
    return NamedReport(
        name=name,
        poly=poly,
        membership_ok=rep.ok,
        disc=disc,
        disc_matches=disc == entry["disc"],
        partition=partition,
        partition_matches=partition == entry["partition"],
    )
