"""The summation engine.

Given f(n) = sum_{j<n} prod_i F_i(a_i n + b_i j + c_i), build a finite set of
target monomials, sample f at M consecutive points, solve exactly for the
coefficients, and keep the whole solution space (particular solution plus
every identity among the targets).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import UniPoly, as_fraction, interpolate, solve_general
from .sequence import CFiniteSequence


class ProblemError(ValueError):
    """Malformed summation problem."""


class UnsupportedBasisError(ValueError):
    """The requested basis is not defined for this problem."""


class VerificationError(RuntimeError):
    """A solved closed form disagreed with the brute-force sum."""


@dataclass(frozen=True)
class TermFactor:
    seq: CFiniteSequence
    a: int
    b: int
    c: int = 0

    def __post_init__(self):
        for v in (self.a, self.b, self.c):
            if not isinstance(v, int) or isinstance(v, bool):
                raise ProblemError("a, b, c must be integers")
        if self.a < 0 or self.a + self.b < 0:
            raise ProblemError(f"need a >= 0 and a + b >= 0, got a={self.a}, b={self.b}")
        if self.a == 0 and self.a + self.b == 0:
            raise ProblemError("one of a, a + b must be positive")


@dataclass(frozen=True)
class SumProblem:
    factors: tuple

    def __init__(self, factors: Iterable[TermFactor]):
        factors = tuple(factors)
        if not factors:
            raise ProblemError("a summation problem needs at least one factor")
        seen = {}
        for f in factors:
            if not isinstance(f, TermFactor):
                raise ProblemError("factors must be TermFactor instances")
            other = seen.setdefault(f.seq.name, f.seq)
            if other is not f.seq and not other.same_values(f.seq):
                raise ProblemError(f"two different sequences share the name {f.seq.name!r}")
        object.__setattr__(self, "factors", factors)

    @property
    def k(self) -> int:
        return len(self.factors)

    @property
    def sequences(self) -> dict:
        out = {}
        for f in self.factors:
            out.setdefault(f.seq.name, f.seq)
        return out

    @property
    def single_sequence(self) -> bool:
        return len(self.sequences) == 1


@dataclass(frozen=True, order=True)
class Atom:
    """One factor F(alpha*n + shift) of a monomial."""

    name: str
    alpha: int
    shift: int
    seq: CFiniteSequence = field(compare=False, repr=False, hash=False)

    def value(self, n: int) -> Fraction:
        return self.seq.evaluate(self.alpha * n + self.shift)


@dataclass(frozen=True, order=True)
class TargetMonomial:
    """n^h * constant * prod F(alpha n + shift), factors canonically sorted."""

    h: int
    factors: tuple
    constant: Fraction = Fraction(1)

    @classmethod
    def make(cls, atoms: Iterable[Atom], h: int = 0, constant=1) -> "TargetMonomial":
        const = as_fraction(constant)
        kept = []
        for at in atoms:
            if at.alpha == 0:
                const *= at.value(0)
            else:
                kept.append(at)
        return cls(h, tuple(sorted(kept)), const)

    @property
    def key(self):
        return (self.factors, self.h)

    @property
    def is_pure_polynomial(self) -> bool:
        return not self.factors

    def value(self, n: int) -> Fraction:
        v = self.constant * Fraction(n) ** self.h
        for at in self.factors:
            if not v:
                break
            v *= at.value(n)
        return v

    def shape(self):
        """Multiset of (sequence, alpha) pairs, ignoring shifts."""
        return tuple(sorted((a.name, a.alpha) for a in self.factors))


def _basis_sort_key(m: TargetMonomial):
    # sequence monomials before pure n-powers so that free variables land on
    # the latter when the system is rank deficient
    return (m.is_pure_polynomial, m.factors, m.h)


@dataclass(frozen=True)
class BasisSpec:
    kind: str
    psi_degree: int
    monomials: tuple

    @property
    def M(self) -> int:
        return len(self.monomials)


@dataclass(frozen=True)
class ClosedForm:
    """Sum of coefficient polynomials in n times monomials (h = 0 in the terms)."""

    terms: tuple = ()

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "ClosedForm":
        """Collect (poly, monomial) pairs; n-powers and constants move into the polys."""
        acc: dict = {}
        reps: dict = {}
        for poly, mono in pairs:
            poly = poly if isinstance(poly, UniPoly) else UniPoly([poly])
            if mono.h:
                poly = poly * UniPoly([0] * mono.h + [1])
            poly = poly * mono.constant
            key = mono.factors
            reps.setdefault(key, TargetMonomial(0, key))
            acc[key] = acc.get(key, UniPoly()) + poly
        terms = tuple(
            (acc[k], reps[k]) for k in sorted(acc, key=lambda f: (not f, f)) if acc[k]
        )
        return cls(terms)

    def __add__(self, other: "ClosedForm") -> "ClosedForm":
        return ClosedForm.from_pairs(self.terms + other.terms)

    def __neg__(self):
        return ClosedForm.from_pairs((-p, m) for p, m in self.terms)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ClosedForm":
        return ClosedForm.from_pairs((p * as_fraction(c), m) for p, m in self.terms)

    def normalized(self) -> "ClosedForm":
        return ClosedForm.from_pairs(self.terms)

    def is_zero(self) -> bool:
        return not self.normalized().terms

    def coefficient(self, mono: TargetMonomial) -> UniPoly:
        target = TargetMonomial.make(mono.factors).factors
        for p, m in self.normalized().terms:
            if m.factors == target:
                return p * mono.constant
        return UniPoly()

    def sequences(self) -> dict:
        out = {}
        for _, m in self.terms:
            for at in m.factors:
                out.setdefault(at.name, at.seq)
        return out

    def __call__(self, n: int) -> Fraction:
        return evaluate_closed_form(self, n)


@dataclass(frozen=True)
class SolutionSpace:
    particular: ClosedForm
    identities: tuple
    basis: BasisSpec
    anchor: int
    verified_window: int
    coefficients: tuple = ()
    identity_vectors: tuple = ()

    @property
    def is_unique(self) -> bool:
        return not self.identities


def atom(seq: CFiniteSequence, alpha: int, shift: int) -> Atom:
    return Atom(seq.name, alpha, shift, seq)


def monomial(*atoms_: tuple, h: int = 0, constant=1) -> TargetMonomial:
    """Convenience: ``monomial((F, 2, 0), (F, 1, 1))`` is F(2n) F(n+1)."""
    return TargetMonomial.make((atom(s, a, i) for s, a, i in atoms_), h=h, constant=constant)


def polynomial_values(seq: CFiniteSequence) -> UniPoly | None:
    """The polynomial q with seq(m) = q(m), or None unless the characteristic
    polynomial is a power of x - 1."""
    if seq.char_poly != UniPoly([-1, 1]) ** seq.order:
        return None
    return interpolate(range(seq.order), seq.values(0, seq.order))


def expand_polynomial_atoms(cf: ClosedForm) -> ClosedForm:
    """Rewrite factors of polynomial sequences (such as F(n) = n) as
    polynomials in n, moving them into the coefficients."""
    pairs = []
    for poly, mono in cf.terms:
        kept = []
        for at in mono.factors:
            q = polynomial_values(at.seq)
            if q is None:
                kept.append(at)
            else:
                poly = poly * q(UniPoly([at.shift, at.alpha]))
        pairs.append((poly, TargetMonomial.make(kept)))
    return ClosedForm.from_pairs(pairs)


def evaluate_closed_form(cf: ClosedForm, n: int) -> Fraction:
    total = Fraction(0)
    for poly, mono in cf.terms:
        c = poly(Fraction(n))
        if c:
            total += c * mono.value(n)
    return total


def brute_force_sum(p: SumProblem, n: int) -> Fraction:
    total = Fraction(0)
    for j in range(n):
        term = Fraction(1)
        for f in p.factors:
            term *= f.seq.evaluate(f.a * n + f.b * j + f.c)
            if not term:
                break
        total += term
    return total


def _profile(seq: CFiniteSequence):
    return seq.profile


def _shift_products(factors: Sequence[tuple], h_max: int) -> list[TargetMonomial]:
    """All monomials prod F_nu(alpha_nu n + i_nu), 0 <= i_nu < D(nu), times n^0..n^h_max."""
    ranges = [range(seq.order) for seq, _ in factors]
    out = set()
    for shifts in itertools.product(*ranges):
        atoms_ = [atom(seq, alpha, i) for (seq, alpha), i in zip(factors, shifts)]
        base = TargetMonomial.make(atoms_)
        for h in range(h_max + 1):
            out.add(TargetMonomial(h, base.factors))
    return list(out)


def psi_degree_bound(p: SumProblem) -> int:
    """1 + sum of Delta(i) over factors with a_i = 0."""
    return 1 + sum(_profile(f.seq).Delta for f in p.factors if f.a == 0)


def build_basis_shifted(p: SumProblem, theta_one_possible: bool | None = None,
                        conservative: bool = False) -> BasisSpec:
    """Targets F((a+b)n + i) products plus psi(n) * F(a n + i) products.

    For single-sequence problems the polynomial multiplier always has the full
    degree 1 + Delta * #{a_i = 0}. For mixed problems it drops to 0 when no
    product of roots raised to the b_i equals 1 (detected exactly through
    composed products unless ``theta_one_possible`` is given or
    ``conservative`` is set).
    """
    bound = psi_degree_bound(p)
    if p.single_sequence or conservative:
        psi = bound
    else:
        if theta_one_possible is None:
            from .spectra import theta_one_possible as detect
            theta_one_possible = detect(p)
        psi = bound if theta_one_possible else 0
    form1 = _shift_products([(f.seq, f.a + f.b) for f in p.factors], 0)
    form2 = _shift_products([(f.seq, f.a) for f in p.factors], psi)
    monos = sorted(set(form1) | set(form2), key=_basis_sort_key)
    return BasisSpec("shifted", psi, tuple(monos))


def fundamental_degrees(p: SumProblem) -> tuple[int, int, int]:
    """(P, Q, gamma) for the homogeneous-monomial basis."""
    if not p.single_sequence:
        raise UnsupportedBasisError("the fundamental basis is only defined for a single sequence")
    Delta = _profile(p.factors[0].seq).Delta
    P = sum(f.a + f.b for f in p.factors)
    Q = sum(f.a for f in p.factors)
    gamma = max(0, 1 + Delta * (p.k - sum(f.a for f in p.factors if f.a > 0)))
    return P, Q, gamma


def build_basis_fundamental(p: SumProblem) -> BasisSpec:
    P, Q, gamma = fundamental_degrees(p)
    seq = p.factors[0].seq
    monos = set()
    for combo in itertools.combinations_with_replacement(range(seq.order), P):
        monos.add(TargetMonomial.make(atom(seq, 1, i) for i in combo))
    for combo in itertools.combinations_with_replacement(range(seq.order), Q):
        base = TargetMonomial.make(atom(seq, 1, i) for i in combo)
        for h in range(gamma + 1):
            monos.add(TargetMonomial(h, base.factors))
    return BasisSpec("fundamental", gamma, tuple(sorted(monos, key=_basis_sort_key)))


def build_basis(p: SumProblem, kind: str = "shifted", **kw) -> BasisSpec:
    if kind == "shifted":
        return build_basis_shifted(p, **kw)
    if kind == "fundamental":
        return build_basis_fundamental(p)
    raise ValueError(f"unknown basis kind {kind!r}")


def _vector_to_form(vec: Sequence[Fraction], basis: BasisSpec) -> ClosedForm:
    return ClosedForm.from_pairs(
        (UniPoly([c]), m) for c, m in zip(vec, basis.monomials) if c
    )


def solve(p: SumProblem, basis: BasisSpec | None = None, extra_checks: int = 20,
          anchor: int = 1) -> SolutionSpace:
    """Sample at n = anchor .. anchor+M-1, solve, then check extra_checks more points."""
    if basis is None:
        basis = build_basis_shifted(p)
    M = basis.M
    if M < 1:
        raise ProblemError("empty basis")
    ns = range(anchor, anchor + M)
    A = [[m.value(n) for m in basis.monomials] for n in ns]
    rhs = [brute_force_sum(p, n) for n in ns]
    sol = solve_general(A, rhs)  # InconsistentSystemError signals a basis bug
    particular = _vector_to_form(sol.particular, basis)
    identities = tuple(_vector_to_form(v, basis) for v in sol.nullspace_basis)
    for n in range(anchor + M, anchor + M + extra_checks):
        expected = brute_force_sum(p, n)
        got = evaluate_closed_form(particular, n)
        if got != expected:
            raise VerificationError(f"closed form gives {got} at n={n}, sum is {expected}")
        for idx, ident in enumerate(identities):
            if evaluate_closed_form(ident, n):
                raise VerificationError(f"identity {idx} is nonzero at n={n}")
    return SolutionSpace(
        particular=particular,
        identities=identities,
        basis=basis,
        anchor=anchor,
        verified_window=M + extra_checks,
        coefficients=sol.particular,
        identity_vectors=sol.nullspace_basis,
    )


def _floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


def degree_bound(p: SumProblem) -> int:
    """min(M, both C-finite degree bounds from the Q/R index sets)."""
    M = build_basis_shifted(p).M
    Q = [f.seq for f in p.factors if f.a + f.b != 0]
    R = [f.seq for f in p.factors if f.a != 0]

    def fine(seqs):
        prof = [_profile(s) for s in seqs]
        return math.prod(pr.d for pr in prof) * (
            1 + sum(Fraction(pr.D, pr.d) - 1 for pr in prof))

    def coarse(seqs):
        return math.prod(s.order for s in seqs)

    bound1 = _floor_fraction(fine(Q) + fine(R))
    bound2 = coarse(Q) + coarse(R)
    return min(M, bound1, bound2)


@dataclass(frozen=True)
class Certificate:
    bound: int
    window: tuple  # (first n, last n) checked
    verdict: bool
    counterexample: int | None = None
    lhs_value: Fraction | None = None
    rhs_value: Fraction | None = None


def closed_form_order_bound(cf: ClosedForm) -> int:
    """Upper bound on the C-finite order of a closed form.

    Terms are grouped by shape (sequences and alphas, shifts ignored). A shape
    with s_g copies of sequence g at one alpha spans at most
    prod_g C(D_g + s_g - 1, s_g) shift-invariant functions, times (h+1) for the
    largest n-power h; distinct shapes add.
    """
    shapes: dict = {}
    for poly, mono in cf.normalized().terms:
        key = mono.shape()
        shapes[key] = max(shapes.get(key, 0), int(poly.degree))
    total = 0
    orders = {}
    for _, m in cf.terms:
        for at in m.factors:
            orders[at.name] = at.seq.order
    for shape, h in shapes.items():
        dim = 1
        for (name, _alpha), grp in itertools.groupby(shape):
            s = len(list(grp))
            dim *= math.comb(orders[name] + s - 1, s)
        total += (h + 1) * dim
    return total


def certify_identity(lhs: ClosedForm, rhs: ClosedForm, p: SumProblem | None = None,
                     start: int = 0, extra: int = 0) -> Certificate:
    """Prove lhs(n) (+ the sum of ``p``, if given) equals rhs(n) for all n >= start.

    Both sides are C-finite; their difference has order at most B, so agreement
    at B consecutive points proves it everywhere.
    """
    diff = lhs - rhs
    B = closed_form_order_bound(diff)
    if p is not None:
        B += degree_bound(p)
    stop = start + max(B, 1) + extra
    for n in range(start, stop):
        lv = evaluate_closed_form(lhs, n)
        if p is not None:
            lv += brute_force_sum(p, n)
        rv = evaluate_closed_form(rhs, n)
        if lv != rv:
            return Certificate(B, (start, stop - 1), False, n, lv, rv)
    return Certificate(B, (start, stop - 1), True)
