"""Indefinite sums (every a_i = 0): Eulerian partial-sum formulas, Phi-function
expansions and the initial-condition independence check."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .closer import (
    ClosedForm,
    ProblemError,
    SumProblem,
    TermFactor,
    build_basis_shifted,
    psi_degree_bound,
    solve,
)
from .exact import (
    InconsistentSystemError,
    UniPoly,
    as_fraction,
    inverse,
    solve_general,
)
from .sequence import CFiniteSequence, rational_spectrum


@dataclass(frozen=True)
class EulerianTable:
    polys: tuple

    @classmethod
    def build(cls, kmax: int) -> "EulerianTable":
        return cls(tuple(eulerian(k) for k in range(kmax + 1)))

    def __getitem__(self, k: int) -> UniPoly:
        return self.polys[k]


@lru_cache(maxsize=None)
def _eulerian_row(k: int) -> tuple:
    if k <= 1:
        return (1,)
    prev = _eulerian_row(k - 1)
    row = []
    for m in range(k):
        left = (m + 1) * prev[m] if m < len(prev) else 0
        right = (k - m) * prev[m - 1] if m >= 1 else 0
        row.append(left + right)
    return tuple(row)


def eulerian(k: int) -> UniPoly:
    """Eulerian polynomial A_k, normalized so that A_0 = A_1 = 1 and A_2 = 1 + x.

    >>> eulerian(3)
    UniPoly('x^2 + 4*x + 1')
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    return UniPoly(_eulerian_row(k))


def _full_series(k: int, x: Fraction) -> Fraction:
    """sum_{j >= 0} j^k x^j as a rational function value (x != 1)."""
    if k == 0:
        return 1 / (1 - x)
    return x * eulerian(k)(x) / (1 - x) ** (k + 1)


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli numbers with B_1 = -1/2."""
    if m == 0:
        return Fraction(1)
    return -sum((math.comb(m + 1, k) * bernoulli(k) for k in range(m)), Fraction(0)) / (m + 1)


def faulhaber(p: int) -> UniPoly:
    """The polynomial P with P(n) = sum_{j<n} j^p (0^0 = 1)."""
    coeffs = [Fraction(0)] * (p + 2)
    for k in range(p + 1):
        coeffs[p + 1 - k] += math.comb(p + 1, k) * bernoulli(k) / (p + 1)
    return UniPoly(coeffs)


def geometric_power_sum(p: int, x, n: int) -> Fraction:
    """sum_{j=0}^{n-1} j^p x^j from the Eulerian closed formula.

    >>> geometric_power_sum(2, Fraction(1, 2), 4)
    Fraction(21, 8)
    """
    if p < 0 or n < 0:
        raise ValueError("p and n must be >= 0")
    x = as_fraction(x)
    if x == 1:
        return faulhaber(p)(Fraction(n))
    N = Fraction(n)
    tail = sum((math.comb(p, k) * N**k * _full_series(p - k, x) for k in range(p + 1)), Fraction(0))
    return _full_series(p, x) - x**n * tail


@dataclass(frozen=True)
class PhiExpansion:
    """Phi^m_h(n) = sum_t coefficients[(m,h)][t] * F(n + t).

    ``columns`` lists the (m, h) pairs in row order of ``coefficients``; m
    indexes ``roots`` (ascending rational roots with multiplicities).
    """

    seq: CFiniteSequence
    roots: tuple
    columns: tuple
    coefficients: tuple

    def phi(self, m: int, h: int, n: int) -> Fraction:
        row = self.coefficients[self.columns.index((m, h))]
        return sum((c * self.seq(n + t) for t, c in enumerate(row)), Fraction(0))

    def phi_direct(self, m: int, h: int, n: int) -> Fraction:
        """Phi from the spectral coefficients lambda (used as a cross-check)."""
        spec = rational_spectrum(self.seq)
        r, e = spec.roots[m]
        lam = spec.lam[m]
        N = Fraction(n)
        return sum((math.comb(i, h) * lam[i] * N ** (i - h) for i in range(h, e)), Fraction(0)) * r**n


def phi_expansion(seq: CFiniteSequence) -> PhiExpansion:
    """Invert F(n+t) = sum_{m,h} r_m^t t^h Phi^m_h(n), t = 0..D-1.

    The matrix only involves roots and shifts, so the coefficients do not
    depend on the initial values.
    """
    spec = rational_spectrum(seq)
    cols = tuple((m, h) for m, (_, e) in enumerate(spec.roots) for h in range(e))
    M0 = [[spec.roots[m][0] ** t * Fraction(t) ** h for (m, h) in cols] for t in range(seq.order)]
    inv = inverse(M0)
    return PhiExpansion(seq, spec.roots, cols, tuple(tuple(r) for r in inv.to_rows()))


@dataclass(frozen=True)
class VariantResult:
    initials: object
    psi: UniPoly
    sequence_part: ClosedForm
    identities: int


@dataclass(frozen=True)
class IndependenceReport:
    variants: tuple
    sequence_part_agrees: bool
    psi_bound: int
    theta_one: bool
    degrees_ok: bool

    @property
    def shared_sequence_part(self) -> ClosedForm:
        return self.variants[0].sequence_part

    @property
    def verdict(self) -> bool:
        return self.sequence_part_agrees and self.degrees_ok


def _variant_problem(p: SumProblem, initials) -> SumProblem:
    seqs = p.sequences
    if not isinstance(initials, Mapping):
        if len(seqs) != 1:
            raise ProblemError("mixed problems need initials given per sequence name")
        initials = {next(iter(seqs)): initials}
    unknown = set(initials) - set(seqs)
    if unknown:
        raise ProblemError(f"initials given for unknown sequences {sorted(unknown)}")
    new = {}
    for name, seq in seqs.items():
        if name not in initials:
            new[name] = seq
            continue
        vals = list(initials[name])
        if len(vals) != seq.order:
            raise ProblemError(f"{name}: expected {seq.order} initial values, got {len(vals)}")
        fresh = CFiniteSequence(seq.recurrence, vals, name=name)
        if fresh.order != seq.order:
            raise ProblemError(
                f"{name}: initial values {vals} drop the minimal order to {fresh.order}")
        new[name] = fresh
    return SumProblem(TermFactor(new[f.seq.name], f.a, f.b, f.c) for f in p.factors)


def _split(form: ClosedForm) -> tuple[UniPoly, ClosedForm]:
    psi = UniPoly()
    rest = []
    for poly, mono in form.terms:
        if mono.is_pure_polynomial:
            psi = psi + poly
        else:
            rest.append((poly, mono))
    return psi, ClosedForm.from_pairs(rest)


def _in_span(target: Sequence[Fraction], generators: Sequence[Sequence[Fraction]]) -> bool:
    if not any(target):
        return True
    if not generators:
        return False
    A = [[g[i] for g in generators] for i in range(len(target))]
    try:
        solve_general(A, target)
    except InconsistentSystemError:
        return False
    return True


def independence_check(p: SumProblem, initial_variants: Sequence,
                       theta_one: bool | None = None) -> IndependenceReport:
    """Solve ``p`` once per set of initial values and compare the results.

    The polynomial part Psi (pure n-power monomials) may move with the
    initials; the sequence part must agree modulo the identity spans.
    """
    if any(f.a != 0 for f in p.factors):
        raise ProblemError("independence_check needs every a_i = 0")
    if not initial_variants:
        raise ProblemError("at least one variant is required")
    if theta_one is None:
        from .spectra import theta_one_possible
        theta_one = theta_one_possible(p)
    bound = psi_degree_bound(p)

    solved = []
    for init in initial_variants:
        vp = _variant_problem(p, init)
        basis = build_basis_shifted(vp)
        solved.append((init, basis, solve(vp, basis)))

    keys = [m.key for m in solved[0][1].monomials]
    seq_idx = [i for i, m in enumerate(solved[0][1].monomials) if not m.is_pure_polynomial]
    agrees = True
    results = []
    for init, basis, sol in solved:
        if [m.key for m in basis.monomials] != keys:
            raise ProblemError("variants produced different bases")
        psi, seq_part = _split(sol.particular)
        results.append(VariantResult(init, psi, seq_part, len(sol.identities)))

    ref = solved[0][2]
    for _, _, sol in solved[1:]:
        diff = [sol.coefficients[i] - ref.coefficients[i] for i in seq_idx]
        gens = [[v[i] for i in seq_idx] for v in ref.identity_vectors + sol.identity_vectors]
        if not _in_span(diff, gens):
            agrees = False

    limit = bound if theta_one else 0
    degrees_ok = all(r.psi.degree <= limit for r in results)
    return IndependenceReport(tuple(results), agrees, bound, theta_one, degrees_ok)
