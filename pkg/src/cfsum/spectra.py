"""Root-monomial value sets, computed without ever locating a root.

A value set is a monic squarefree polynomial over Q whose complex roots are
exactly the distinct values of some family of products of characteristic
roots. Cardinalities are degrees, intersections are gcds, and "contains 1"
is evaluation at 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .closer import BasisSpec, SumProblem, fundamental_degrees, psi_degree_bound
from .exact import (
    UniPoly,
    composed_power,
    composed_product,
    discriminant,
    formal_monomial_poly,
    poly_gcd,
    squarefree_part,
)
from .sequence import CFiniteSequence


class UnsupportedProfileError(ValueError):
    """Dimension results here only cover sequences with distinct roots."""


@dataclass(frozen=True)
class MonomialValueSet:
    defining_poly: UniPoly
    degree_p: int | None = None

    @property
    def cardinality(self) -> int:
        return int(self.defining_poly.degree)

    def __contains__(self, value) -> bool:
        return self.defining_poly(Fraction(value)) == 0

    def intersection_size(self, other: "MonomialValueSet") -> int:
        return int(poly_gcd(self.defining_poly, other.defining_poly).degree)


ONE = MonomialValueSet(UniPoly([-1, 1]), 0)


def _require_nonzero_roots(seq: CFiniteSequence):
    if seq.char_poly[0] == 0:
        raise ValueError(f"{seq.name}: characteristic polynomial has a zero root")


def value_set_products(seqs: Sequence[CFiniteSequence], exponents: Sequence[int]) -> MonomialValueSet:
    """Values prod_i (root of seq_i)^(exponent_i), one root chosen per factor."""
    if len(seqs) != len(exponents):
        raise ValueError("one exponent per sequence")
    acc = UniPoly([-1, 1])
    for seq, b in zip(seqs, exponents):
        _require_nonzero_roots(seq)
        part = composed_power(seq.profile.squarefree_part, b, squarefree=True)
        acc = composed_product(acc, part, squarefree=True)
    return MonomialValueSet(acc)


def contains_one(s: MonomialValueSet) -> bool:
    return s.defining_poly(Fraction(1)) == 0


def degree_p_value_set(seq: CFiniteSequence, p: int) -> MonomialValueSet:
    """S_p: values of all degree-p monomials in the distinct roots of seq."""
    if p < 0:
        raise ValueError("degree must be >= 0")
    _require_nonzero_roots(seq)
    base = seq.profile.squarefree_part
    acc = UniPoly([-1, 1])
    for _ in range(p):
        acc = composed_product(acc, base, squarefree=True)
    return MonomialValueSet(acc, p)


def theta_one_possible(p: SumProblem) -> bool:
    """Whether some product of roots raised to the b_i equals 1."""
    vs = value_set_products([f.seq for f in p.factors], [f.b for f in p.factors])
    return contains_one(vs)


def _require_distinct(seq: CFiniteSequence):
    if seq.profile.Delta > 0:
        raise UnsupportedProfileError(f"{seq.name} has repeated characteristic roots")


def dims(seq: CFiniteSequence, p: int, q: int) -> tuple[int, int, int]:
    """(dim W_p, dim W_q^+, dim W_{p,q}^{++}) for a distinct-root sequence."""
    _require_distinct(seq)
    Sp, Sq = degree_p_value_set(seq, p), degree_p_value_set(seq, q)
    both = Sp.cardinality + 2 * Sq.cardinality - Sp.intersection_size(Sq)
    return Sp.cardinality, 2 * Sq.cardinality, both


def formal_count(d: int, p: int) -> int:
    return math.comb(p + d - 1, p)


@dataclass(frozen=True)
class UniquenessReport:
    unique: bool
    formal_count: int
    dimension: int
    value_sets: tuple  # (|T|, |S|, |T ∩ S|)
    psi_degree: int

    @property
    def verdict(self) -> str:
        return "UNIQUE" if self.unique else "NOT-UNIQUE"

    @property
    def deficit(self) -> int:
        return self.formal_count - self.dimension


def _span_dimension(T: MonomialValueSet, S: MonomialValueSet, psi: int) -> int:
    # functions w^n for w in T ∪ S, and n^h w^n for w in S, 1 <= h <= psi
    return T.cardinality + S.cardinality - T.intersection_size(S) + psi * S.cardinality


def uniqueness_report(p: SumProblem, basis: BasisSpec) -> UniquenessReport:
    """Compare the number of target monomials with the dimension of their span."""
    for seq in p.sequences.values():
        _require_distinct(seq)
    if basis.kind == "shifted":
        seqs = [f.seq for f in p.factors]
        T = value_set_products(seqs, [f.a + f.b for f in p.factors])
        S = value_set_products(seqs, [f.a for f in p.factors])
    elif basis.kind == "fundamental":
        P, Q, _ = fundamental_degrees(p)
        seq = p.factors[0].seq
        T, S = degree_p_value_set(seq, P), degree_p_value_set(seq, Q)
    else:
        raise ValueError(f"unknown basis kind {basis.kind!r}")
    dim = _span_dimension(T, S, basis.psi_degree)
    return UniquenessReport(
        unique=dim == basis.M,
        formal_count=basis.M,
        dimension=dim,
        value_sets=(T.cardinality, S.cardinality, T.intersection_size(S)),
        psi_degree=basis.psi_degree,
    )


def power_sum_uniqueness(seq: CFiniteSequence, p: int) -> UniquenessReport:
    """Uniqueness of sum_{j<n} seq(j)^p in the shifted basis, without solving."""
    from .closer import TermFactor, build_basis_shifted

    prob = SumProblem([TermFactor(seq, 0, 1, 0)] * p)
    return uniqueness_report(prob, build_basis_shifted(prob))


def hyperdiscriminant(seq: CFiniteSequence, p: int):
    """Discriminant of the polynomial whose roots are the C(p+d-1, p) formal
    degree-p monomials in the characteristic roots; zero iff two formally
    distinct monomials take the same value."""
    g = formal_monomial_poly(seq.char_poly, p)
    return discriminant(g) if g.degree >= 1 else Fraction(1)


def analyze(seq: CFiniteSequence, p: int, q: int) -> dict:
    """Report used by the ``analyze`` command."""
    _require_distinct(seq)
    Sp, Sq = degree_p_value_set(seq, p), degree_p_value_set(seq, q)
    dWp, dWq, dWpq = dims(seq, p, q)
    d = seq.profile.d
    formal = formal_count(d, p) + 2 * formal_count(d, q) - (formal_count(d, p) if p == q else 0)
    return {
        "sequence": seq.name,
        "p": p,
        "q": q,
        "cardinalities": {"S_p": Sp.cardinality, "S_q": Sq.cardinality,
                          "S_p_cap_S_q": Sp.intersection_size(Sq)},
        "formal_counts": {"S_p": formal_count(d, p), "S_q": formal_count(d, q)},
        "dims": [dWp, dWq, dWpq],
        "contains_one": {"S_p": contains_one(Sp), "S_q": contains_one(Sq)},
        "uniqueness": "UNIQUE" if dWpq == formal else "NOT-UNIQUE",
        "hyperdiscriminant": str(hyperdiscriminant(seq, p)),
    }
