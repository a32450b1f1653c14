"""Exact dense integer/rational polynomials.

Coefficient lists are always constant-term first.  The central class is
NormalizedPoly: a primitive integer polynomial with positive leading
coefficient.  Resultants use the subresultant pseudo-remainder sequence
(exact, no modular arithmetic) with the sign fixed to the Sylvester
determinant convention, so that e.g. disc(t^2 - 2) = 8.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .smooth import PrimeSet, SmoothFactorization, ZeroValueError, factor_over


class FactorSearchError(ValueError):
    """Raised when factor_small cannot handle the input (degree/coefficients)."""


# ---------------------------------------------------------------------------
# raw coefficient-list helpers (constant-first)


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _content(c) -> int:
    g = 0
    for x in c:
        g = gcd(g, x)
        if g == 1:
            break
    return g


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_eval(c, x):
    v = 0
    for coeff in reversed(c):
        v = v * x + coeff
    return v


def _prem(a: list, b: list):
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b, exactly."""
    a = list(a)
    da, db = len(a) - 1, len(b) - 1
    lb = b[-1]
    for top in range(da, db - 1, -1):
        la = a[top]
        for i in range(top + 1):
            a[i] *= lb
        if la:
            shift = top - db
            for i in range(db + 1):
                a[shift + i] -= la * b[i]
        a.pop()
    return _trim(a)


def resultant_coeffs(f, g) -> int:
    """Resultant of two nonzero integer polynomials, Sylvester sign convention.

    Subresultant PRS (Collins); coefficient growth stays proportional to the
    result, which is what makes the degree-35 discriminants here tractable.
    """
    f = _trim(list(f))
    g = _trim(list(g))
    if not f or not g:
        raise ZeroValueError("resultant of the zero polynomial")
    df, dg = len(f) - 1, len(g) - 1
    if df == 0 and dg == 0:
        return 1
    if df == 0:
        return f[0] ** dg
    if dg == 0:
        return g[0] ** df
    sign = 1
    if df < dg:
        f, g = g, f
        df, dg = dg, df
        if df * dg % 2:
            sign = -sign
    h = 1
    gg = 1
    while True:
        delta = df - dg
        if df % 2 and dg % 2:
            sign = -sign
        r = _prem(f, g)
        if not r:
            return 0
        f, df = g, dg
        denom = gg * h ** delta
        g = [x // denom for x in r]
        dg = len(g) - 1
        gg = f[-1]
        if delta:
            h = gg ** delta // h ** (delta - 1)
        if dg == 0:
            break
    return sign * (g[0] ** df // h ** (df - 1))


def _res_11(f, g):
    return f[1] * g[0] - f[0] * g[1]


def _res_22(f, g):
    a0, a1, a2 = f
    b0, b1, b2 = g
    return (a2 * b0 - a0 * b2) ** 2 - (a2 * b1 - a1 * b2) * (a1 * b0 - a0 * b1)


def _res_1k(f, g):
    # Res(f1 t + f0, g) = f1^deg(g) * g(-f0/f1), expanded to stay in Z
    f0, f1 = f
    dg = len(g) - 1
    acc = 0
    p = 1  # (-f0)^i
    for i in range(dg + 1):
        acc += g[i] * p * f1 ** (dg - i)
        p *= -f0
    return acc


def resultant_fast(f, g) -> int:
    """resultant_coeffs with closed forms for the tiny degrees hit in bulk."""
    df, dg = len(f) - 1, len(g) - 1
    if df == 1:
        return _res_1k(f, g)
    if dg == 1:
        s = -1 if (df * dg) % 2 else 1
        return s * _res_1k(g, f)
    if df == 2 and dg == 2:
        return _res_22(f, g)
    return resultant_coeffs(f, g)


# ---------------------------------------------------------------------------
# normalized polynomials


class NormalizedPoly:
    """Primitive integer polynomial with positive leading coefficient."""

    __slots__ = ("coeffs", "_disc")

    def __init__(self, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if not coeffs or coeffs[-1] <= 0:
            raise ValueError("leading coefficient must be positive")
        if _content(coeffs) != 1:
            raise ValueError("content must be 1")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_disc", None)

    def __setattr__(self, name, value):
        raise AttributeError("NormalizedPoly is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, NormalizedPoly) and self.coeffs == other.coeffs

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return hash(self.coeffs)

    def sort_key(self):
        return (self.degree, self.coeffs)

    def __repr__(self):
        return f"NormalizedPoly({self.format()})"

    def format(self, var: str = "t") -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                head = "" if mag == 1 else str(mag)
                body = f"{head}{var}" if i == 1 else f"{head}{var}^{i}"
            if not terms:
                terms.append(body if c > 0 else "-" + body)
            else:
                terms.append(("+ " if c > 0 else "- ") + body)
        return " ".join(terms) if terms else "0"

    def eval(self, x):
        return poly_eval(self.coeffs, x)

    def monic_coeffs(self) -> tuple:
        """Coefficients of s(t)/s(inf) as Fractions (the monic variant)."""
        lead = self.coeffs[-1]
        return tuple(Fraction(c, lead) for c in self.coeffs)

    def discriminant(self) -> int:
        if self._disc is None:
            object.__setattr__(self, "_disc", discriminant(self))
        return self._disc


def normalize(coeffs):
    """Unique (NormalizedPoly, scalar) with input = scalar * normalized.

    Accepts int/Fraction coefficient lists, constant term first.
    Idempotent on already-normalized input (scalar 1).
    """
    fracs = [Fraction(c) for c in coeffs]
    while fracs and fracs[-1] == 0:
        fracs.pop()
    if not fracs:
        raise ZeroValueError("cannot normalize the zero polynomial")
    den = 1
    for f in fracs:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in fracs]
    cont = _content(ints)
    if ints[-1] < 0:
        cont = -cont
    return NormalizedPoly([c // cont for c in ints]), Fraction(cont, den)


def from_roots(roots) -> NormalizedPoly:
    """Normalized polynomial with the given rational roots (multiset)."""
    c = [1]
    for r in roots:
        r = Fraction(r)
        c = poly_mul(c, [-r.numerator, r.denominator])
    return normalize(c)[0]


def special_values(s: NormalizedPoly):
    """(s(0), s(1), s(inf)); s(inf) is the leading coefficient."""
    return s.coeffs[0], sum(s.coeffs), s.coeffs[-1]


def resultant(a: NormalizedPoly, b: NormalizedPoly) -> int:
    return resultant_coeffs(a.coeffs, b.coeffs)


def derivative_coeffs(c):
    return [i * c[i] for i in range(1, len(c))]


def discriminant(s: NormalizedPoly) -> int:
    """(-1)^(k(k-1)/2) Res(s, s') / s(inf); 0 exactly when s is inseparable."""
    k = s.degree
    if k < 1:
        raise ValueError("degree must be >= 1")
    if k == 1:
        return 1
    r = resultant_coeffs(s.coeffs, derivative_coeffs(s.coeffs))
    if k % 4 in (2, 3):
        r = -r
    return r // s.coeffs[-1]


class MonicPoly:
    """Monic polynomial with rational coefficients whose denominators are
    smooth over an ambient prime set (the monic variant of a member)."""

    __slots__ = ("coeffs", "P")

    def __init__(self, coeffs, P):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if not coeffs or coeffs[-1] != 1:
            raise ValueError("leading coefficient must be 1")
        from .smooth import is_smooth

        for c in coeffs:
            if c.denominator != 1 and not is_smooth(c.denominator, P):
                raise ValueError(f"denominator of {c} is not smooth over {P}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "P", P)

    def __setattr__(self, name, value):
        raise AttributeError("MonicPoly is immutable")

    def __eq__(self, other):
        return isinstance(other, MonicPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_normalized(cls, s: NormalizedPoly, P) -> "MonicPoly":
        return cls(s.monic_coeffs(), P)

    def normalized(self) -> NormalizedPoly:
        return normalize(self.coeffs)[0]


# ---------------------------------------------------------------------------
# the S3 action permuting the marked points 0, 1, infinity

INF = "inf"

# group element -> permutation image of (0, 1, inf)
S3_ELEMENTS = {
    "e": (0, 1, INF),
    "(01)": (1, 0, INF),
    "(0inf)": (INF, 1, 0),
    "(1inf)": (0, INF, 1),
    "(01inf)": (1, INF, 0),   # 0 -> 1 -> inf -> 0
    "(0inf1)": (INF, 0, 1),   # 0 -> inf -> 1 -> 0
}

# integer matrices (a, b, c, d) of the fractional-linear map (a t + b)/(c t + d)
# realizing each permutation on the marked points
_MATS = {
    (0, 1, INF): (1, 0, 0, 1),
    (1, 0, INF): (-1, 1, 0, 1),    # 1 - t
    (INF, 1, 0): (0, 1, 1, 0),     # 1/t
    (0, INF, 1): (1, 0, 1, -1),    # t/(t-1)
    (1, INF, 0): (0, 1, -1, 1),    # 1/(1-t)
    (INF, 0, 1): (1, -1, 1, 0),    # (t-1)/t
}


def _perm_name(perm):
    for name, p in S3_ELEMENTS.items():
        if p == perm:
            return name
    raise ValueError(f"not an S3 element: {perm}")


def s3_compose(g: str, h: str) -> str:
    """Group law: (g h) acts as g after h."""
    pg, ph = S3_ELEMENTS[g], S3_ELEMENTS[h]
    idx = {0: 0, 1: 1, INF: 2}
    return _perm_name(tuple(pg[idx[ph[i]]] for i in range(3)))


def s3_inverse(g: str) -> str:
    p = S3_ELEMENTS[g]
    idx = {0: 0, 1: 1, INF: 2}
    inv = [None, None, None]
    src = (0, 1, INF)
    for i in range(3):
        inv[idx[p[i]]] = src[i]
    return _perm_name(tuple(inv))


def substitute_mobius(coeffs, mat, degree=None):
    """(c t + d)^k * s((a t + b)/(c t + d)) as an integer coefficient list."""
    a, b, c, d = mat
    k = degree if degree is not None else len(coeffs) - 1
    pow_num = [[1]]
    pow_den = [[1]]
    for _ in range(k):
        pow_num.append(poly_mul(pow_num[-1], [b, a]))
        pow_den.append(poly_mul(pow_den[-1], [d, c]))
    out = [0] * (k + 1)
    for i, s_i in enumerate(coeffs):
        if s_i:
            for j, v in enumerate(poly_mul(pow_num[i], pow_den[k - i])):
                out[j] += s_i * v
    return out


def s3_transform(s: NormalizedPoly, g: str) -> NormalizedPoly:
    """Image of s under the group element g, re-normalized.

    g moves the marked points (and the roots of s) by its fractional-linear
    map, so the polynomial substitution uses the inverse matrix.
    """
    mat = _MATS[S3_ELEMENTS[s3_inverse(g)]]
    return normalize(substitute_mobius(s.coeffs, mat))[0]


def s3_orbit(s: NormalizedPoly) -> frozenset:
    return frozenset(s3_transform(s, g) for g in S3_ELEMENTS)


def orbit_representative(s: NormalizedPoly) -> NormalizedPoly:
    """Canonical orbit member: lexicographically smallest coefficient vector."""
    return min(s3_orbit(s), key=lambda p: p.coeffs)


def mobius_on_point(mat, x):
    """Apply (a t + b)/(c t + d) to x in Q union {inf}."""
    a, b, c, d = mat
    if x == INF:
        return Fraction(a, c) if c else INF
    x = Fraction(x)
    num = a * x + b
    den = c * x + d
    if den == 0:
        return INF
    return num / den


# ---------------------------------------------------------------------------
# membership predicate


@dataclass(frozen=True)
class MembershipReport:
    ok: bool
    s0: SmoothFactorization
    s1: SmoothFactorization
    sinf: SmoothFactorization
    disc: SmoothFactorization | None  # None exactly when disc == 0
    failures: tuple


def check_membership(s: NormalizedPoly, P: PrimeSet) -> MembershipReport:
    """Test disc(s), s(0), s(1), s(inf) for membership in the smooth monoid.

    Separability is part of the contract: disc = 0 is a failure.
    """
    v0, v1, vinf = special_values(s)
    failures = []
    f0 = f1 = finf = fd = None
    if v0 == 0:
        failures.append("s0")
    else:
        f0 = factor_over(v0, P)
        if not f0.is_smooth:
            failures.append("s0")
    if v1 == 0:
        failures.append("s1")
    else:
        f1 = factor_over(v1, P)
        if not f1.is_smooth:
            failures.append("s1")
    finf = factor_over(vinf, P)
    if not finf.is_smooth:
        failures.append("sinf")
    d = s.discriminant()
    if d == 0:
        failures.append("disc")
    else:
        fd = factor_over(d, P)
        if not fd.is_smooth:
            failures.append("disc")
    return MembershipReport(not failures, f0, f1, finf, fd, tuple(failures))


# ---------------------------------------------------------------------------
# small-degree factorization over Q


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factorize(n: int) -> dict:
    """Prime factorization by trial division; refuses opaque hard cofactors."""
    n = abs(n)
    out = {}
    for p in (2, 3, 5, 7):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 11
    while d * d <= n and d < 10 ** 6:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 2
    if n > 1:
        if _is_probable_prime(n):
            out[n] = out.get(n, 0) + 1
        else:
            r = isqrt(n)
            if r * r == n and _is_probable_prime(r):
                out[r] = out.get(r, 0) + 2
            else:
                raise FactorSearchError(f"cannot factor constant {n}")
    return out


def _divisors(n: int) -> list:
    divs = [1]
    for p, e in _factorize(n).items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def rational_roots(coeffs) -> list:
    """All rational roots (with multiplicity) of an integer polynomial.

    Divisor grid on the constant/leading coefficients when those are easy to
    factor, otherwise roots modulo one large prime followed by rational
    reconstruction and exact verification -- sound and complete either way,
    and the modular route never factors the coefficients.
    """
    c = _trim(list(coeffs))
    if not c:
        raise ZeroValueError("zero polynomial")
    roots = []
    while c[0] == 0:
        roots.append(Fraction(0))
        c = c[1:]
    if len(c) <= 1:
        return roots
    g = _content(c)
    c = [x // g for x in c]
    if max(abs(c[0]), abs(c[-1])) <= 10 ** 10:
        cand = _root_candidates_divisors(c)
    else:
        cand = _root_candidates_modular(c)
    for r in sorted(cand):
        while len(c) > 1 and poly_eval(c, r) == 0:
            roots.append(r)
            c = _deflate(c, r)
    roots.sort()
    return roots


def _root_candidates_divisors(c):
    # Cauchy bound keeps the divisor grid small when coefficients are smooth
    bound = Fraction(max(abs(x) for x in c[:-1]), abs(c[-1])) + 1
    cand = set()
    for q in _divisors(c[-1]):
        for p in _divisors(c[0]):
            if gcd(p, q) == 1 and Fraction(p, q) <= bound:
                cand.add(Fraction(p, q))
                cand.add(Fraction(-p, q))
    return cand


# --- modular rational root extraction ---------------------------------------


def _next_prime_above(n: int) -> int:
    n += 1
    if n <= 2:
        return 2
    if n % 2 == 0:
        n += 1
    while not _is_probable_prime(n):
        n += 2
    return n


def _polymod_mul(a, b, f, p):
    """a*b mod (f, p) for dense coefficient lists, f monic mod p."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    d = len(f) - 1
    for top in range(len(prod) - 1, d - 1, -1):
        coef = prod[top]
        if coef:
            prod[top] = 0
            for i in range(d):
                prod[top - d + i] = (prod[top - d + i] - coef * f[i]) % p
    while len(prod) > d:
        prod.pop()
    return prod


def _gcd_mod(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]
    while True:
        while b and b[-1] == 0:
            b.pop()
        if not b:
            break
        inv = pow(b[-1], p - 2, p)
        b = [x * inv % p for x in b]
        db = len(b) - 1
        for top in range(len(a) - 1, db - 1, -1):
            coef = a[top]
            a[top] = 0
            if coef:
                for i in range(db):
                    a[top - db + i] = (a[top - db + i] - coef * b[i]) % p
        while a and a[-1] == 0:
            a.pop()
        a, b = b, a
    return a


def _monicize_mod(c, p):
    inv = pow(c[-1] % p, p - 2, p)
    out = [x * inv % p for x in c]
    out[-1] = 1
    return out


def _powmod_poly(base, e, f, p):
    acc = [1]
    base = [x % p for x in base]
    while e:
        if e & 1:
            acc = _polymod_mul(acc, base, f, p)
        base = _polymod_mul(base, base, f, p)
        e >>= 1
    return acc


def _roots_mod_p(c, p, rng_seed=0x5EED):
    """Distinct roots of c modulo the (large) prime p, by equal-degree splitting."""
    import random as _random

    f = _monicize_mod(c, p)
    d = len(f) - 1
    if d == 1:
        return [(-f[0]) % p]
    # gcd(x^p - x, f) = product of the distinct linear factors of f
    xp = _powmod_poly([0, 1], p, f, p)
    xp = list(xp) + [0] * (d - len(xp))
    xp[1] = (xp[1] - 1) % p
    g = _gcd_mod(f, xp, p)
    roots = []
    rng = _random.Random(rng_seed)
    stack = [g]
    while stack:
        h = stack.pop()
        deg = len(h) - 1
        if deg <= 0:
            continue
        if deg == 1:
            roots.append((-h[0]) % p)
            continue
        while True:
            a = rng.randrange(p)
            acc = _powmod_poly([a, 1], (p - 1) // 2, h, p)
            acc = list(acc) + [0] * ((len(h) - 1) - len(acc))
            acc[0] = (acc[0] - 1) % p
            part = _gcd_mod(h, acc, p)
            if 0 < len(part) - 1 < deg:
                stack.append(part)
                stack.append(_poly_quot_mod(h, part, p))
                break
    return roots


def _poly_quot_mod(a, b, p):
    """Quotient of a by b mod p (b divides a exactly in our use)."""
    a = [x % p for x in a]
    bm = _monicize_mod(b, p)
    db = len(bm) - 1
    q = [0] * (len(a) - db)
    for top in range(len(a) - 1, db - 1, -1):
        coef = a[top]
        q[top - db] = coef
        if coef:
            for i in range(db):
                a[top - db + i] = (a[top - db + i] - coef * bm[i]) % p
        a[top] = 0
    while len(q) > 1 and q[-1] == 0:
        q.pop()
    return q


def _rational_reconstruct(a: int, p: int, bound: int):
    """x = n/d with x = a mod p, |n|, d <= bound, if it exists."""
    r0, r1 = p, a % p
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    # exact evaluation downstream is the gate; reduction is harmless here
    return Fraction(r1, t1)


_FILTER_PRIMES = (1000003, 10000019)
_PRIME_CACHE: dict = {}


def _root_candidates_modular(c):
    # cheap necessary test: a rational root survives reduction mod any prime
    # not dividing the leading coefficient, so "no roots mod q" is a proof
    for q in _FILTER_PRIMES:
        if c[-1] % q and not _roots_mod_p(c, q):
            return set()
    bound = max(abs(c[0]), abs(c[-1]))
    bits = (2 * bound * bound + 1).bit_length()
    p = _PRIME_CACHE.get(bits)
    if p is None:
        p = _PRIME_CACHE[bits] = _next_prime_above(1 << bits)
    while c[-1] % p == 0:
        p = _next_prime_above(p)
    cand = set()
    for r in _roots_mod_p(c, p):
        x = _rational_reconstruct(r, p, bound)
        if x is not None and poly_eval(c, x) == 0:
            cand.add(x)
    return cand


def _deflate(c, root: Fraction):
    """Exact division by the root's linear factor, primitive integer output."""
    n = len(c) - 1
    out = [Fraction(0)] * n  # quotient of c by (t - root), constant first
    acc = Fraction(0)
    for i in range(n - 1, -1, -1):
        acc = acc * root + c[i + 1]
        out[i] = acc
    # Gauss: quotient = root.denominator * (primitive integer cofactor)
    ints = []
    for f in out:
        if f.denominator != 1:
            raise ValueError("deflation by a non-root")
        ints.append(f.numerator)
    g = _content(ints)
    return [x // g for x in ints]


def _root_bound(c) -> int:
    """Integer Cauchy bound: every complex root has magnitude below this."""
    return 1 + max(abs(x) for x in c[:-1]) // abs(c[-1]) + 1


def _try_quadratic_split(c):
    """Split an integer polynomial (deg >= 4) off an integer quadratic factor."""
    lead, const = c[-1], c[0]
    bound = _root_bound(c)
    for a in _divisors(lead):
        bmax = 2 * a * bound  # |b/a| <= sum of the factor's two root magnitudes
        for f0 in _divisors(const):
            for f0s in (f0, -f0):
                for b in range(-bmax, bmax + 1):
                    q = _poly_divmod_exact(c, [f0s, b, a])
                    if q is not None:
                        return [f0s, b, a], q
    return None


def _poly_divmod_exact(c, d):
    """Quotient of c by d over Q if the division is exact, else None."""
    c = [Fraction(x) for x in c]
    dd = len(d) - 1
    lead = d[-1]
    q = [Fraction(0)] * (len(c) - dd)
    for top in range(len(c) - 1, dd - 1, -1):
        f = c[top] / lead
        q[top - dd] = f
        if f:
            for i in range(dd + 1):
                c[top - dd + i] -= f * d[i]
    if any(c[:dd]):
        return None
    den = 1
    for f in q:
        den = den * f.denominator // gcd(den, f.denominator)
    return [int(f * den) for f in q]


def _try_split_generic(c, k):
    """Search an integer degree-k factor of c by bounded coefficient scan.

    Interior coefficients of a factor are elementary symmetric functions of
    at most k roots of c, so each is bounded by lead * C(k,i) * R^i with R
    the Cauchy root bound.  Only reached for degree >= 6 inputs.
    """
    R = _root_bound(c)
    binom = [1]
    for i in range(k):
        binom.append(binom[-1] * (k - i) // (i + 1))

    def rec(lead, prefix):
        depth = len(prefix)
        if depth == k:
            q = _poly_divmod_exact(c, prefix + [lead])
            return (prefix + [lead], q) if q is not None else None
        bound = lead * binom[k - depth] * R ** (k - depth)
        for v in range(-bound, bound + 1):
            got = rec(lead, prefix + [v])
            if got:
                return got
        return None

    for a_lead in _divisors(c[-1]):
        for f0 in _divisors(c[0]):
            for f0s in (f0, -f0):
                got = rec(a_lead, [f0s])
                if got:
                    return got
    return None


def factor_small(s: NormalizedPoly) -> list:
    """Irreducible factorization over Q, factors normalized, with multiplicity.

    Rational roots come off first by divisor tests; what remains (degree <= 8)
    is split by searching bounded integer quadratic factors, falling back to a
    generic scan for cubic/quartic factors.  Sufficient for every vertex degree
    in this package; larger inputs are refused.
    """
    factors = []
    c = list(s.coeffs)
    for r in rational_roots(c):
        factors.append(normalize([-r.numerator, r.denominator])[0])
        c = _deflate(c, r)
    deg = len(c) - 1
    if deg == 0:
        return sorted(factors, key=lambda f: f.sort_key())
    if deg > 8:
        raise FactorSearchError(f"degree {deg} after root extraction exceeds 8")
    stack = [c]
    while stack:
        c = stack.pop()
        deg = len(c) - 1
        if deg <= 3:
            # no rational roots at this point, so deg <= 3 means irreducible
            factors.append(normalize(c)[0])
            continue
        split = _try_quadratic_split(c)
        if split is None and deg >= 6:
            split = _try_split_generic(c, 3)
        if split is None and deg == 8:
            split = _try_split_generic(c, 4)
        if split is None:
            factors.append(normalize(c)[0])
        else:
            fac, quot = split
            stack.append(fac)
            stack.append(quot)
    return sorted(factors, key=lambda f: f.sort_key())


def is_irreducible(s: NormalizedPoly) -> bool:
    if s.degree == 1:
        return True
    if s.degree == 2:
        d = s.discriminant()
        r = isqrt(abs(d))
        return d < 0 or r * r != d
    if s.degree == 3:
        return not rational_roots(s.coeffs)
    fs = factor_small(s)
    return len(fs) == 1


def partition_of(s: NormalizedPoly) -> tuple:
    """Degrees of the irreducible factors, sorted descending."""
    return tuple(sorted((f.degree for f in factor_small(s)), reverse=True))
