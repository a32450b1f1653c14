"""P-smoothness primitives: factorizations over a fixed prime set.

Everything here is exact big-integer arithmetic.  A number is "smooth"
(an element of the signed monoid written P* elsewhere in this package)
when it factors completely over the prime set; the part of an integer
coprime to the prime set is kept as an opaque "rough" cofactor and is
never factored further, since no predicate downstream depends on its
prime structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt


class ZeroValueError(ValueError):
    """Raised when 0 is passed where a nonzero integer/rational is required."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeSet:
    """A finite, strictly increasing set of primes.

    May be empty.  Hashable and usable as a dict key; iterating yields the
    primes in increasing order.
    """

    __slots__ = ("primes",)

    def __init__(self, primes):
        ps = tuple(sorted(set(int(p) for p in primes)))
        for p in ps:
            if not _is_prime(p):
                raise ValueError(f"not a prime: {p}")
        object.__setattr__(self, "primes", ps)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeSet is immutable")

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def __contains__(self, p):
        return p in self.primes

    def __eq__(self, other):
        return isinstance(other, PrimeSet) and self.primes == other.primes

    def __hash__(self):
        return hash(self.primes)

    def __repr__(self):
        return "PrimeSet({%s})" % ", ".join(str(p) for p in self.primes)

    def first_good_prime(self) -> int:
        """Smallest prime not in the set."""
        p = 2
        while p in self.primes:
            p += 1
            while not _is_prime(p):
                p += 1
        return p

    def label(self) -> str:
        return ",".join(str(p) for p in self.primes)


@dataclass(frozen=True)
class SmoothFactorization:
    """n = sign * prod(p^e) * rough, with rough coprime to the prime set."""

    sign: int
    exponents: tuple  # ((p, e), ...) with e > 0, aligned with the prime set order
    rough: int

    @property
    def is_smooth(self) -> bool:
        return self.rough == 1

    @property
    def value(self) -> int:
        v = self.sign
        for p, e in self.exponents:
            v *= p ** e
        return v * self.rough

    def exponent(self, p: int) -> int:
        for q, e in self.exponents:
            if q == p:
                return e
        return 0


def factor_over(n: int, P: PrimeSet) -> SmoothFactorization:
    """Split a nonzero integer into its P-part and rough cofactor.

    Repeated exact division only; the rough part is returned untouched.
    """
    if n == 0:
        raise ZeroValueError("0 has no factorization over a prime set")
    sign = 1 if n > 0 else -1
    m = abs(n)
    exps = []
    for p in P:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            exps.append((p, e))
    return SmoothFactorization(sign, tuple(exps), m)


def rough_part(n: int, P: PrimeSet) -> int:
    """|n| with all primes of P divided out."""
    m = abs(n)
    for p in P:
        while m % p == 0:
            m //= p
    return m


def is_smooth(n: int, P: PrimeSet) -> bool:
    """True iff n is in the signed smooth monoid (n != 0, no rough part)."""
    return n != 0 and rough_part(n, P) == 1


def is_unit_in(q, P: PrimeSet) -> bool:
    """Membership of a nonzero rational in the unit group of Z^P.

    True iff numerator and denominator in lowest terms are both smooth.
    """
    q = Fraction(q)
    if q == 0:
        raise ZeroValueError("0 is not a unit")
    return is_smooth(q.numerator, P) and is_smooth(q.denominator, P)


def squarefree_part(n: int) -> int:
    """The unique square-free d with n = d * y^2, sign carried by d."""
    if n == 0:
        raise ZeroValueError("0 has no square-free part")
    sign = 1 if n > 0 else -1
    m = abs(n)
    d = 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    return sign * d * m


def squarefree_class(q) -> int:
    """Square-free integer representative of a nonzero rational mod squares."""
    q = Fraction(q)
    if q == 0:
        raise ZeroValueError("0 has no square class")
    return squarefree_part(q.numerator * q.denominator)


def _icbrt(n: int) -> int:
    """Integer cube root of n >= 0 (floor)."""
    if n < 2:
        return n
    r = 1 << ((n.bit_length() + 2) // 3)
    while True:
        nr = (2 * r + n // (r * r)) // 3
        if nr >= r:
            break
        r = nr
    while r * r * r > n:
        r -= 1
    return r


def decompose_power(n: int, k: int, P: PrimeSet):
    """Write n = a * x^k with a in P*, if possible.

    For k = 3 the sign rides on a and x > 0; for k = 2, a is the (signed)
    square-free smooth representative and x > 0.  Returns None when the
    rough cofactor of n is not a perfect k-th power.
    """
    if n == 0:
        raise ZeroValueError("0 has no smooth power decomposition")
    if k not in (2, 3):
        raise ValueError("only k = 2 and k = 3 are supported")
    f = factor_over(n, P)
    if k == 2:
        r = isqrt(f.rough)
        if r * r != f.rough:
            return None
        a = f.sign
        x = r
        for p, e in f.exponents:
            a *= p ** (e % 2)
            x *= p ** (e // 2)
        return a, x
    r = _icbrt(f.rough)
    if r * r * r != f.rough:
        return None
    a = f.sign
    x = r
    for p, e in f.exponents:
        a *= p ** (e % 3)
        x *= p ** (e // 3)
    return a, x


def smooth_numbers_up_to(P: PrimeSet, H: int) -> list:
    """All positive P-smooth numbers <= H, ascending.

    Exponent-vector enumeration (one extension pass per prime); no sieve,
    so H around 1e11 stays cheap for the small prime sets used here.
    """
    if H < 1:
        raise ValueError("H must be >= 1")
    out = [1]
    for p in P:
        nxt = []
        for s in out:
            v = s
            while v <= H:
                nxt.append(v)
                v *= p
        out = nxt
    out.sort()
    return out


def coprime(a: int, b: int) -> bool:
    return gcd(a, b) == 1
