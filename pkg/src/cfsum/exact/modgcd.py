"""Modular gcd of integer polynomials (dense, Brown style).

Images mod word-size primes are combined by CRT until the candidate divides
both inputs over Z; the trial division makes the answer exact, the primes only
make it fast.
"""

from __future__ import annotations

import math
from functools import lru_cache

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    # deterministic for n < 3.3e24
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _prime(i: int) -> int:
    """The i-th prime below 2**61, counting down."""
    start = (1 << 61) - 1 if i == 0 else _prime(i - 1) - 2
    n = start
    while not _is_prime(n):
        n -= 2
    return n


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _gcd_mod(a: list, b: list, p: int) -> list:
    """Monic gcd of ascending coefficient lists over GF(p)."""
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        inv = pow(b[-1], -1, p)
        m = len(b) - 1
        while len(a) - 1 >= m and a:
            q = a[-1] * inv % p
            shift = len(a) - 1 - m
            for j in range(m + 1):
                a[shift + j] = (a[shift + j] - q * b[j]) % p
            _trim(a)
        a, b = b, a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def _divides(h: list, a: list) -> bool:
    """Whether h divides a over Z (both ascending integer lists, h primitive)."""
    r = list(a)
    m = len(h) - 1
    lh = h[-1]
    for k in range(len(r) - 1 - m, -1, -1):
        c = r[k + m]
        if c == 0:
            continue
        q, rem = divmod(c, lh)
        if rem:
            return False
        for j, hb in enumerate(h):
            r[k + j] -= q * hb
    return not any(r[:m])


def _primitive(a: list) -> list:
    g = math.gcd(*a)
    if a[-1] < 0:
        g = -g
    return [x // g for x in a]


def int_poly_gcd(a: list, b: list) -> list:
    """Primitive gcd (positive leading coefficient) of nonzero integer polynomials."""
    a, b = _primitive(a), _primitive(b)
    if len(a) == 1 or len(b) == 1:
        return [1]
    gamma = math.gcd(a[-1], b[-1])
    best_deg = min(len(a), len(b))
    modulus = 0
    acc: list = []
    prev = None
    i = 0
    while True:
        p = _prime(i)
        i += 1
        if a[-1] % p == 0 or b[-1] % p == 0:
            continue
        g = _gcd_mod(a, b, p)
        deg = len(g) - 1
        if deg == 0:
            return [1]
        if deg > best_deg:
            continue  # unlucky prime
        g = [x * gamma % p for x in g]
        if deg < best_deg:
            best_deg, modulus, acc, prev = deg, p, g, None
        else:
            # CRT: x = acc mod modulus, x = g mod p
            inv = pow(modulus, -1, p)
            acc = [c + modulus * ((gi - c) * inv % p) for c, gi in zip(acc, g)]
            modulus *= p
        half = modulus // 2
        cand = [c - modulus if c > half else c for c in acc]
        if cand == prev:
            h = _primitive(cand)
            if _divides(h, a) and _divides(h, b):
                return h
        prev = cand
