"""C-finite sequences: evaluation in both directions, minimization, spectral data."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exact import (
    UniPoly,
    as_fraction,
    rank,
    solve_general,
    squarefree_decomposition,
    squarefree_part,
)


class SequenceError(ValueError):
    """Invalid sequence data."""


class UnsupportedSequenceError(SequenceError):
    """The sequence lies outside the supported class (zero root, zero sequence, ...)."""


class BackwardExtensionError(SequenceError):
    pass


class UnsupportedSpectrumError(SequenceError):
    """The characteristic polynomial does not split over Q."""


@dataclass(frozen=True)
class SpectralProfile:
    D: int
    d: int
    multiplicities: tuple
    Delta: int
    squarefree_part: UniPoly
    char_poly: UniPoly


@dataclass(frozen=True)
class RationalSpectrum:
    roots: tuple  # ((r_m, e_m), ...)
    lam: tuple    # lam[m][h], coefficient of n^h r_m^n

    def value(self, n: int) -> Fraction:
        total = Fraction(0)
        for (r, _), row in zip(self.roots, self.lam):
            rn = r**n
            total += sum((c * Fraction(n) ** h for h, c in enumerate(row)), Fraction(0)) * rn
        return total


class CFiniteSequence:
    """A sequence F with F(n) = c_1 F(n-1) + ... + c_D F(n-D).

    By default the recurrence is minimized at construction, which also rejects
    sequences whose minimal characteristic polynomial has 0 as a root.

    >>> F = CFiniteSequence([1, 1], [0, 1], name="F")
    >>> [F(n) for n in range(-3, 7)]
    [Fraction(2, 1), Fraction(-1, 1), Fraction(1, 1), Fraction(0, 1), Fraction(1, 1), Fraction(1, 1), Fraction(2, 1), Fraction(3, 1), Fraction(5, 1), Fraction(8, 1)]
    """

    def __init__(self, recurrence: Sequence, initials: Sequence, name: str = "F", minimize: bool = True):
        rec = tuple(as_fraction(c) for c in recurrence)
        init = tuple(as_fraction(v) for v in initials)
        if len(rec) == 0:
            raise SequenceError("recurrence must have order >= 1")
        if len(rec) != len(init):
            raise SequenceError("recurrence and initials must have the same length")
        if not name.isidentifier():
            raise SequenceError(f"sequence name {name!r} is not an identifier")
        self.name = name
        if minimize:
            rec, init = _minimal_recurrence(rec, init)
        self.recurrence = rec
        self.initials = init
        self.minimal = minimize
        self._pos = list(init)
        self._neg: list[Fraction] = []  # _neg[k] = F(-1-k)
        self._lock = threading.Lock()

    @property
    def order(self) -> int:
        return len(self.recurrence)

    D = order

    def __repr__(self):
        rec = ", ".join(str(c) for c in self.recurrence)
        ini = ", ".join(str(v) for v in self.initials)
        return f"CFiniteSequence(name={self.name!r}, recurrence=[{rec}], initials=[{ini}])"

    def same_values(self, other: "CFiniteSequence") -> bool:
        return self.recurrence == other.recurrence and self.initials == other.initials

    def __call__(self, n: int) -> Fraction:
        return self.evaluate(n)

    def __getitem__(self, n: int) -> Fraction:
        return self.evaluate(n)

    def evaluate(self, n: int) -> Fraction:
        if n >= 0:
            if n < len(self._pos):
                return self._pos[n]
            with self._lock:
                pos, rec = self._pos, self.recurrence
                while len(pos) <= n:
                    pos.append(sum((c * pos[-1 - i] for i, c in enumerate(rec)), Fraction(0)))
                return pos[n]
        k = -1 - n
        if k < len(self._neg):
            return self._neg[k]
        rec = self.recurrence
        if rec[-1] == 0:
            raise BackwardExtensionError(
                f"{self.name}: cannot extend backwards, last recurrence coefficient is 0")
        D = len(rec)
        with self._lock:
            neg = self._neg
            while len(neg) <= k:
                # F(m-D) = (F(m) - sum_{i<D} c_i F(m-i)) / c_D with m = -len(neg) - 1 + D
                m = D - 1 - len(neg)
                get = lambda t: self._pos[t] if t >= 0 else neg[-1 - t]
                acc = get(m) - sum((rec[i - 1] * get(m - i) for i in range(1, D)), Fraction(0))
                neg.append(acc / rec[-1])
            return neg[k]

    def values(self, start: int, stop: int) -> list[Fraction]:
        return [self.evaluate(n) for n in range(start, stop)]

    @cached_property
    def char_poly(self) -> UniPoly:
        """x^D - c_1 x^(D-1) - ... - c_D."""
        D = self.order
        return UniPoly([-self.recurrence[D - 1 - k] for k in range(D)] + [1])

    @cached_property
    def profile(self) -> SpectralProfile:
        return spectral_profile(self)


def _minimal_recurrence(rec, init):
    D = len(rec)
    raw = CFiniteSequence(rec, init, minimize=False)
    vals = raw.values(0, 2 * D)
    r = rank([[vals[i + j] for j in range(D)] for i in range(D)])
    if r == 0:
        raise UnsupportedSequenceError("the zero sequence has no nonzero-root recurrence")
    if r == D:
        new_rec, new_init = rec, init
    else:
        rows = [[vals[n - i] for i in range(1, r + 1)] for n in range(r, 2 * D)]
        sol = solve_general(rows, vals[r:2 * D])
        new_rec, new_init = sol.particular, tuple(vals[:r])
    if new_rec[-1] == 0:
        raise UnsupportedSequenceError(
            "minimal characteristic polynomial has 0 as a root (eventually-C-finite transient)")
    return tuple(new_rec), tuple(new_init)


def evaluate(seq: CFiniteSequence, n: int) -> Fraction:
    return seq.evaluate(n)


def minimize(seq: CFiniteSequence) -> CFiniteSequence:
    if seq.minimal:
        return seq
    return CFiniteSequence(seq.recurrence, seq.initials, name=seq.name, minimize=True)


def minimal_order(values: Sequence) -> int:
    """Rank of the square Hankel matrix built from ``values`` (odd tail ignored)."""
    half = len(values) // 2
    return rank([[values[i + j] for j in range(half)] for i in range(half)])


def spectral_profile(seq: CFiniteSequence) -> SpectralProfile:
    f = seq.char_poly
    mults = []
    for g, m in squarefree_decomposition(f):
        mults.extend([m] * g.degree)
    mults.sort(reverse=True)
    sqf = squarefree_part(f)
    return SpectralProfile(
        D=seq.order,
        d=sqf.degree,
        multiplicities=tuple(mults),
        Delta=max(mults) - 1,
        squarefree_part=sqf,
        char_poly=f,
    )


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(f: UniPoly) -> list[Fraction]:
    """Distinct rational roots of f (rational root theorem on the integer-scaled poly)."""
    if f.is_zero():
        raise ValueError("rational roots of the zero polynomial")
    den = math.lcm(*(c.denominator for c in f.coeffs))
    ints = [int(c * den) for c in f.coeffs]
    roots = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        while ints and ints[0] == 0:
            ints.pop(0)
    if len(ints) <= 1:
        return roots
    g = UniPoly(ints)
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand not in roots and g(cand) == 0:
                    roots.append(cand)
    return sorted(roots)


def rational_spectrum(seq: CFiniteSequence) -> RationalSpectrum:
    f = seq.char_poly
    roots = []
    for r in rational_roots(f):
        e = 0
        g = f
        lin = UniPoly([-r, 1])
        while True:
            q, rem = divmod(g, lin)
            if rem:
                break
            g, e = q, e + 1
        roots.append((r, e))
    if sum(e for _, e in roots) != seq.order:
        raise UnsupportedSpectrumError(f"characteristic polynomial {f} does not split over Q")
    cols = [(m, h) for m, (_, e) in enumerate(roots) for h in range(e)]
    A = [[Fraction(t) ** h * roots[m][0] ** t for (m, h) in cols] for t in range(seq.order)]
    sol = solve_general(A, seq.values(0, seq.order))
    lam = [[Fraction(0)] * e for _, e in roots]
    for (m, h), v in zip(cols, sol.particular):
        lam[m][h] = v
    return RationalSpectrum(tuple(roots), tuple(tuple(row) for row in lam))


def _partition_counts(k: int, count: int) -> list[int]:
    """Number of partitions of n into parts <= k, for n < count."""
    ways = [1] + [0] * (count - 1)
    for part in range(1, k + 1):
        for n in range(part, count):
            ways[n] += ways[n - part]
    return ways


def _p5():
    den = UniPoly([1])
    for i in range(1, 6):
        den = den * UniPoly([1] + [0] * (i - 1) + [-1])
    rec = [-den[k] for k in range(1, den.degree + 1)]
    return rec, _partition_counts(5, den.degree)


def _polynomial_power(p: int):
    if p < 0:
        raise SequenceError("polynomial_power needs p >= 0")
    D = p + 1
    rec = [(-1) ** (i + 1) * math.comb(D, i) for i in range(1, D + 1)]
    return rec, [n**p for n in range(D)]


_BUILTINS = {
    "fibonacci": (0, "F", lambda: ([1, 1], [0, 1])),
    "subword": (1, "G", lambda A: ([A, 0, -1], [1, A, as_fraction(A) ** 2])),
    "p5": (0, "p5", _p5),
    "geometric": (1, "X", lambda x: ([x], [1])),
    "polynomial_power": (1, "P", _polynomial_power),
    "n": (0, "N", lambda: _polynomial_power(1)),
}


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)


def builtin(kind: str, *params, name: str | None = None) -> CFiniteSequence:
    """Registry-backed sequences.

    ``fibonacci``, ``subword(A)``, ``p5``, ``geometric(x)``,
    ``polynomial_power(p)`` and ``n`` (F(n) = n).
    """
    try:
        nparams, default_name, factory = _BUILTINS[kind]
    except KeyError:
        raise SequenceError(f"unknown builtin sequence {kind!r}") from None
    if len(params) != nparams:
        raise SequenceError(f"builtin {kind!r} takes {nparams} parameter(s), got {len(params)}")
    if kind == "polynomial_power":
        params = (int(params[0]),)
    else:
        params = tuple(as_fraction(p) for p in params)
    rec, init = factory(*params)
    return CFiniteSequence(rec, init, name=name or default_name)
