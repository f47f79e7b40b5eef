"""Univariate polynomials over Q and the root-level constructions built on them.

Coefficients are :class:`fractions.Fraction` values stored in ascending order.
Everything here is exact; nothing ever looks at a numerical root.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterable, Sequence

from .modgcd import int_poly_gcd

NEG_INF = float("-inf")

DEFAULT_MAX_DEGREE = 20000


class DegreeLimitError(ValueError):
    """Raised when a composed product would exceed ``CFSUM_MAX_DEGREE``."""


def max_degree() -> int:
    return int(os.environ.get("CFSUM_MAX_DEGREE", DEFAULT_MAX_DEGREE))


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


class UniPoly:
    """Immutable dense polynomial in one variable with rational coefficients.

    >>> UniPoly([-1, 0, 1])
    UniPoly('x^2 - 1')
    >>> UniPoly([-1, 0, 1]) // UniPoly([-1, 1])
    UniPoly('x + 1')
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        out = cls([1])
        for r in roots:
            out = out * cls([-as_fraction(r), 1])
        return out

    @property
    def degree(self):
        """Degree, with ``-inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({str(self)!r})"

    def __str__(self):
        return self.to_str("x")

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out, base = UniPoly([1]), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        m = len(other.coeffs) - 1
        for k in range(dq, -1, -1):
            q = rem[k + m] / lead
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return UniPoly(quot), UniPoly(rem[:m])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "UniPoly":
        q, r = divmod(self, other)
        if r:
            raise ValueError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, UniPoly) else UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return UniPoly(c / lc for c in self.coeffs)

    def reversed(self) -> "UniPoly":
        """x^deg * p(1/x)."""
        return UniPoly(reversed(self.coeffs))

    def scale_var(self, s) -> "UniPoly":
        """p(s*x)."""
        s = as_fraction(s)
        return UniPoly(c * s**k for k, c in enumerate(self.coeffs))


def _poly(p) -> UniPoly:
    return p if isinstance(p, UniPoly) else UniPoly(p)


def _primitive_int(p: UniPoly) -> list[int]:
    den = math.lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    return _primitive(ints)


def _primitive(ints: list[int]) -> list[int]:
    g = math.gcd(*ints)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints] if g not in (0, 1) else ints


def poly_gcd(f, g) -> UniPoly:
    """Monic gcd, computed on primitive integer images by the modular algorithm."""
    f, g = _poly(f), _poly(g)
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    return UniPoly(int_poly_gcd(_primitive_int(f), _primitive_int(g))).monic()


def squarefree_part(f) -> UniPoly:
    f = _poly(f)
    if f.degree <= 0:
        return UniPoly([1]) if f else f
    return f.exact_div(poly_gcd(f, f.derivative())).monic()


def is_squarefree(f) -> bool:
    f = _poly(f)
    return f.degree <= 0 or poly_gcd(f, f.derivative()).degree == 0


def squarefree_decomposition(f) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: ``f = lead * prod(g**m)`` with monic, coprime, squarefree g."""
    f = _poly(f)
    if f.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    if f.degree == 0:
        return []
    f = f.monic()
    out = []
    a = poly_gcd(f, f.derivative())
    b = f.exact_div(a)
    c = f.derivative().exact_div(a) if a.degree > 0 else f.derivative()
    d = c - b.derivative()
    m = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.derivative()
        if g.degree > 0:
            out.append((g, m))
        m += 1
    return out


def resultant(f, g) -> Fraction:
    """Sylvester resultant, f-rows first: ``lead(f)**deg g * prod g(root of f)``."""
    f, g = _poly(f), _poly(g)
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant with the zero polynomial")
    acc = Fraction(1)
    while True:
        m, n = f.degree, g.degree
        if n == 0:
            return acc * g.lead**m
        if m == 0:
            return acc * f.lead**n
        r = f % g
        if r.is_zero():
            return Fraction(0)
        if (m * n) % 2:
            acc = -acc
        acc *= g.lead ** (m - r.degree)
        f, g = g, r


def discriminant(f) -> Fraction:
    """Discriminant with the convention disc(ax+b) = 1."""
    f = _poly(f)
    n = f.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return Fraction(1)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lead


def interpolate(xs: Sequence, ys: Sequence) -> UniPoly:
    """Newton divided-difference interpolation through the points (xs[i], ys[i])."""
    xs = [as_fraction(x) for x in xs]
    coef = [as_fraction(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = UniPoly([coef[-1]]) if coef else UniPoly()
    for i in range(n - 2, -1, -1):
        out = out * UniPoly([-xs[i], 1]) + coef[i]
    return out


def _check_nonzero_root(f: UniPoly, what: str):
    if f.is_zero() or f[0] == 0:
        raise ValueError(f"{what}: polynomial has a zero root (or is zero)")


def _check_degree(n: int):
    cap = max_degree()
    if n > cap:
        raise DegreeLimitError(f"composed degree {n} exceeds CFSUM_MAX_DEGREE={cap}")


def composed_product(f, g, squarefree: bool = False) -> UniPoly:
    """Monic polynomial whose roots are all products r*s (r root of f, s root of g).

    Uses p_k(fg) = p_k(f) p_k(g) on root power sums. With ``squarefree`` the
    value set is returned instead of the multiset.
    """
    f, g = _poly(f), _poly(g)
    _check_nonzero_root(f, "composed_product")
    _check_nonzero_root(g, "composed_product")
    if squarefree:
        f, g = squarefree_part(f), squarefree_part(g)
    N = f.degree * g.degree
    _check_degree(N)
    if N == 0:
        return UniPoly([1])
    s = [a * b for a, b in zip(power_sums(f, N), power_sums(g, N))]
    out = from_power_sums(s, N)
    return squarefree_part(out) if squarefree else out


def composed_power(f, b: int, squarefree: bool = False) -> UniPoly:
    """Monic polynomial whose roots are r**b for the roots r of f."""
    f = _poly(f)
    _check_nonzero_root(f, "composed_power")
    if squarefree:
        f = squarefree_part(f)
    m = f.degree
    if b == 0:
        out = UniPoly([-1, 1]) ** m
    elif b < 0:
        return composed_power(f.reversed().monic(), -b, squarefree)
    elif b == 1:
        out = f.monic()
    else:
        s = power_sums(f, m * b)
        out = from_power_sums(s[::b], m)
    return squarefree_part(out) if squarefree else out


def power_sums(f, count: int) -> list[Fraction]:
    """Newton power sums s_0..s_count of the roots of f (s_0 = deg f)."""
    f = _poly(f).monic()
    d = f.degree
    # e_k with f = x^d - e1 x^(d-1) + e2 x^(d-2) - ...
    e = [Fraction(1)] + [(-1) ** k * f[d - k] for k in range(1, d + 1)]
    s = [Fraction(d)]
    for k in range(1, count + 1):
        acc = Fraction(0)
        for i in range(1, min(k - 1, d) + 1):
            acc += (-1) ** (i - 1) * e[i] * s[k - i]
        if k <= d:
            acc += (-1) ** (k - 1) * k * e[k]
        s.append(acc)
    return s


def from_power_sums(s: Sequence[Fraction], degree: int) -> UniPoly:
    """Monic polynomial of the given degree with root power sums s[1..degree]."""
    e = [Fraction(1)]
    for k in range(1, degree + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * s[i]
        e.append(acc / k)
    return UniPoly((-1) ** (degree - j) * e[degree - j] for j in range(degree + 1)) if degree else UniPoly([1])


def formal_monomial_poly(f, p: int) -> UniPoly:
    """Monic polynomial whose roots are the C(p+d-1, p) formal degree-p monomials
    in the roots of f, each formal monomial counted once.

    Power sums of these monomials are complete homogeneous symmetric functions of
    the k-th powers of the roots, obtained from the root power sums by the
    recurrence ``j h_j = sum_i s_{ik} h_{j-i}``.
    """
    f = _poly(f).monic()
    d = f.degree
    N = math.comb(p + d - 1, p)
    _check_degree(N)
    s = power_sums(f, N * p)
    big = [Fraction(0)]
    for k in range(1, N + 1):
        h = [Fraction(1)]
        for j in range(1, p + 1):
            h.append(sum(s[i * k] * h[j - i] for i in range(1, j + 1)) / j)
        big.append(h[p])
    return from_power_sums(big, N)
