"""Independent oracles used by the test suite.

These deliberately avoid the algorithms used by the package: resultants via
the Sylvester determinant (fraction-free Gaussian elimination), smoothness
via naive trial-division filters, searches via brute-force double loops.
"""

from fractions import Fraction
from math import gcd


def sylvester_matrix(f, g):
    """Sylvester matrix of two integer polynomials (constant-first lists)."""
    m = len(f) - 1
    n = len(g) - 1
    size = m + n
    rows = []
    frow = list(reversed(f))  # highest degree first
    grow = list(reversed(g))
    for i in range(n):
        rows.append([0] * i + frow + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + grow + [0] * (size - n - 1 - i))
    return rows


def det_bareiss(matrix):
    """Exact integer determinant by Bareiss fraction-free elimination."""
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def resultant_sylvester(f, g):
    """Resultant as the Sylvester determinant (the sign-convention anchor)."""
    if len(f) - 1 == 0 and len(g) - 1 == 0:
        return 1
    return det_bareiss(sylvester_matrix(f, g))


def smooth_filter_naive(primes, H):
    """All P-smooth numbers in [1, H] by trial division of every integer."""
    out = []
    for n in range(1, H + 1):
        m = n
        for p in primes:
            while m % p == 0:
                m //= p
        if m == 1:
            out.append(n)
    return out


def is_smooth_naive(n, primes):
    if n == 0:
        return False
    m = abs(n)
    for p in primes:
        while m % p == 0:
            m //= p
    return m == 1


def abc_brute_force(primes, variant, H):
    """All variant u-values with height <= H by a double loop over (A, C).

    Candidate |A| and |C| lists come from per-integer trial division over
    [1, H]; only feasible for small H.  Cross-checks the structured search.
    """
    from math import isqrt

    def rough(n):
        m = abs(n)
        for p in primes:
            while m % p == 0:
                m //= p
        return m

    def is_cube(n):
        c = round(n ** (1 / 3))
        return any((c + d) ** 3 == n for d in (-1, 0, 1, 2))

    smooth_abs = [n for n in range(1, H + 1) if rough(n) == 1]
    if variant == "32i":
        a_abs = [n for n in range(1, H + 1) if is_cube(rough(n))]
    else:
        a_abs = smooth_abs

    def ok_B(n):
        if variant == "iii":
            return rough(n) == 1
        r = rough(n)
        s = isqrt(r)
        return s * s == r

    us = set()
    for absA in a_abs:
        for A in (absA, -absA):
            for absC in smooth_abs:
                if gcd(absA, absC) != 1:
                    continue
                for C in (absC, -absC):
                    B = -A - C
                    if B == 0 or not ok_B(B):
                        continue
                    u = Fraction(-A, C)
                    if u != 0 and u != 1:
                        us.add(u)
    return us


def smooth_count_exponent_loops(H):
    """|{2,3,5,7}-smooth numbers <= H| by explicit nested exponent loops."""
    count = 0
    p2 = 1
    while p2 <= H:
        p23 = p2
        while p23 <= H:
            p235 = p23
            while p235 <= H:
                p2357 = p235
                while p2357 <= H:
                    count += 1
                    p2357 *= 7
                p235 *= 5
            p23 *= 3
        p2 *= 2
    return count
