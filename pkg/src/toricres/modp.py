"""Arithmetic modulo word-sized primes: solving, interpolation, reconstruction."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple

_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin with a witness set that is deterministic below 3.3e24."""
    if n < 2:
        return False
    for w in _WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(bound: int = 1 << 61) -> Iterator[int]:
    p = bound - 1
    while p > 2:
        if is_prime(p):
            yield p
        p -= 1


def coeff_mod(c, p: int) -> int:
    if isinstance(c, Fraction):
        return c.numerator * pow(c.denominator, -1, p) % p
    return int(c) % p


class CompiledPoly:
    """A polynomial prepared for repeated evaluation modulo p."""

    __slots__ = ("terms",)

    def __init__(self, poly, p: int):
        gens = poly.gens
        self.terms = [
            (coeff_mod(c, p), tuple((gens[i], k) for i, k in enumerate(e) if k))
            for e, c in poly.terms.items()
        ]

    def __call__(self, pt: Mapping[str, int], p: int) -> int:
        s = 0
        for c, mono in self.terms:
            for g, k in mono:
                c = c * (pt[g] if k == 1 else pow(pt[g], k, p)) % p
            s += c
        return s % p


def rref_mod(rows: List[List[int]], ncols: int, p: int) -> Tuple[List[List[int]], List[int]]:
    """Reduced row echelon form over Z/p of the first ``ncols`` columns."""
    R = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(R)) if R[i][c]), None)
        if k is None:
            continue
        R[r], R[k] = R[k], R[r]
        inv = pow(R[r][c], -1, p)
        R[r] = [x * inv % p for x in R[r]]
        prow = R[r]
        for i in range(len(R)):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [(x - f * y) % p for x, y in zip(R[i], prow)]
        piv.append(c)
        r += 1
        if r == len(R):
            break
    return R, piv


def last_unknown_mod(rows: List[List[int]], ncols: int, p: int) -> int | None:
    """Value of the last unknown of the augmented system ``rows`` over Z/p.

    None unless the system has full row rank and the last unknown is
    determined (its column is a pivot).
    """
    R = [list(r) for r in rows]
    r = 0
    last = -1
    for c in range(ncols):
        k = next((i for i in range(r, len(R)) if R[i][c]), None)
        if k is None:
            continue
        R[r], R[k] = R[k], R[r]
        prow = R[r]
        inv = pow(prow[c], -1, p)
        for i in range(r + 1, len(R)):
            if R[i][c]:
                f = R[i][c] * inv % p
                R[i] = [(x - f * y) % p for x, y in zip(R[i], prow)]
        last = c
        r += 1
        if r == len(R):
            break
    if r < len(R) or last != ncols - 1:
        return None
    row = R[r - 1]
    return row[ncols] * pow(row[ncols - 1], -1, p) % p


def transposed_vandermonde_solve(nodes: Sequence[int], rhs: Sequence[int], p: int) -> List[int]:
    """y with sum_c y_c * nodes_c^k = rhs_k for k < len(nodes); nodes distinct."""
    K = len(nodes)
    # master polynomial prod (z - v), low degree first
    M = [1]
    for v in nodes:
        nxt = [0] * (len(M) + 1)
        for j, a in enumerate(M):
            nxt[j + 1] = (nxt[j + 1] + a) % p
            nxt[j] = (nxt[j] - v * a) % p
        M = nxt
    dM = [(j * M[j]) % p for j in range(1, K + 1)]
    out = []
    for v in nodes:
        # q = M / (z - v) by synthetic division, accumulating <q, rhs>
        q = 1
        acc = rhs[K - 1]
        for j in range(K - 1, 0, -1):
            q = (M[j] + v * q) % p
            acc += q * rhs[j - 1]
        d = 0
        for a in reversed(dM):
            d = (d * v + a) % p
        out.append(acc % p * pow(d, -1, p) % p)
    return out


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """n/d = a mod m with |n|, d below sqrt(m/2), or None."""
    a %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def crt(a: int, m: int, b: int, p: int) -> Tuple[int, int]:
    """x = a mod m and x = b mod p."""
    t = (b - a) * pow(m, -1, p) % p
    return a + m * t, m * p


def reconstruct_all(values: Dict[object, int], modulus: int) -> Dict[object, Fraction] | None:
    out = {}
    for key, v in values.items():
        r = rational_reconstruct(v, modulus)
        if r is None:
            return None
        if r:
            out[key] = r
    return out
