import itertools
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cfsum.exact import (
    NEG_INF,
    DegreeLimitError,
    ExactMatrix,
    InconsistentSystemError,
    UniPoly,
    as_fraction,
    composed_power,
    composed_product,
    confluent_vandermonde,
    determinant,
    discriminant,
    formal_monomial_poly,
    interpolate,
    inverse,
    is_squarefree,
    poly_gcd,
    rank,
    resultant,
    solve_general,
    squarefree_decomposition,
    squarefree_part,
)

X = sympy.Symbol("x")
FIB = UniPoly([-1, -1, 1])

small_rat = st.fractions(min_value=-5, max_value=5, max_denominator=4)
nonzero_rat = small_rat.filter(lambda q: q != 0)


def to_sympy(p: UniPoly):
    return sum(sympy.Rational(c.numerator, c.denominator) * X**k for k, c in enumerate(p.coeffs))


def sylvester(f: UniPoly, g: UniPoly):
    m, n = f.degree, g.degree
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(f.coeffs)) + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(g.coeffs)) + [0] * (m - 1 - i))
    return rows


def cofactor_det(rows):
    if not rows:
        return Fraction(1)
    if len(rows) == 1:
        return Fraction(rows[0][0])
    return sum((-1) ** j * rows[0][j] * cofactor_det([r[:j] + r[j + 1:] for r in rows[1:]])
               for j in range(len(rows)))


# polynomials

def test_unipoly_basics():
    p = UniPoly([-1, 0, 1])
    assert p.degree == 2 and UniPoly().degree == NEG_INF
    assert str(p) == "x^2 - 1"
    assert p // UniPoly([-1, 1]) == UniPoly([1, 1])
    assert p(3) == 8
    assert p.derivative() == UniPoly([0, 2])
    assert UniPoly([2, 4]).monic() == UniPoly([Fraction(1, 2), 1])
    q, r = divmod(UniPoly([1, 2, 3, 4]), UniPoly([1, 1]))
    assert q * UniPoly([1, 1]) + r == UniPoly([1, 2, 3, 4])


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        UniPoly([0.5])


def test_unipoly_immutable():
    p = UniPoly([1])
    with pytest.raises(AttributeError):
        p.coeffs = ()


@pytest.mark.parametrize("f,g,expected", [
    ([-1, 0, 1], [-1, 1], [-1, 1]),
    ([-1, -1, 1], [-2, 0, 1], [1]),
    ([-2, 0, 2], [], [-1, 0, 1]),
])
def test_gcd_examples(f, g, expected):
    assert poly_gcd(UniPoly(f), UniPoly(g)) == UniPoly(expected)


def test_gcd_zero_zero():
    with pytest.raises(ValueError):
        poly_gcd(UniPoly(), UniPoly())


@settings(max_examples=60, deadline=None)
@given(st.lists(small_rat, min_size=1, max_size=5), st.lists(small_rat, min_size=1, max_size=5),
       st.lists(small_rat, min_size=1, max_size=3))
def test_gcd_matches_sympy(a, b, c):
    f, g, h = UniPoly(a), UniPoly(b), UniPoly(c)
    f, g = f * h, g * h
    if f.is_zero() and g.is_zero():
        return
    ours = poly_gcd(f, g)
    ref = sympy.Poly(sympy.gcd(to_sympy(f), to_sympy(g)), X).monic()
    assert to_sympy(ours).expand() == ref.as_expr().expand()


def test_squarefree_decomposition_examples():
    f = UniPoly.from_roots([1, 1, -1])
    assert squarefree_decomposition(f) == [(UniPoly([1, 1]), 1), (UniPoly([-1, 1]), 2)]
    assert squarefree_decomposition(FIB) == [(FIB, 1)]
    assert squarefree_part(f) == UniPoly([-1, 0, 1])


def test_p5_char_poly_profile():
    den = UniPoly([1])
    for i in range(1, 6):
        den = den * UniPoly([1] + [0] * (i - 1) + [-1])
    f = den.reversed()
    parts = squarefree_decomposition(f)
    assert squarefree_part(f).degree == 10
    mults = sorted((m for g, m in parts for _ in range(g.degree)), reverse=True)
    assert mults == [5, 2] + [1] * 8


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), min_size=1, max_size=4),
       nonzero_rat)
def test_squarefree_decomposition_reassembles(factors, lead):
    f = UniPoly([lead])
    for r, m in factors:
        f = f * UniPoly([-r, 1]) ** m
    parts = squarefree_decomposition(f)
    rebuilt = UniPoly([f.lead])
    for g, m in parts:
        assert is_squarefree(g)
        rebuilt = rebuilt * g**m
    assert rebuilt == f
    for (g1, _), (g2, _) in itertools.combinations(parts, 2):
        assert poly_gcd(g1, g2) == UniPoly([1])


def test_resultant_examples():
    assert resultant(UniPoly([-2, 1]), UniPoly([-3, 1])) == -1
    assert resultant(UniPoly([-1, 0, 1]), UniPoly([-1, 1])) == 0
    assert resultant(FIB, UniPoly([0, 1])) == -1


@settings(max_examples=60, deadline=None)
@given(st.lists(small_rat, min_size=2, max_size=5), st.lists(small_rat, min_size=2, max_size=5))
def test_resultant_is_sylvester_determinant(a, b):
    f, g = UniPoly(a), UniPoly(b)
    if f.degree < 1 or g.degree < 1:
        return
    assert resultant(f, g) == determinant(sylvester(f, g))
    assert (resultant(f, g) == 0) == (poly_gcd(f, g).degree > 0)


def test_discriminant():
    assert discriminant(FIB) == 5
    assert discriminant(UniPoly([3, 1])) == 1


def test_composed_product_examples():
    assert composed_product(FIB, UniPoly([-2, 1])) == UniPoly([-4, -2, 1])
    assert composed_product(FIB, UniPoly([-1, 1])) == FIB
    sq = composed_product(FIB, FIB)
    assert sq.degree == 4
    assert sq == UniPoly([1, 1]) ** 2 * UniPoly([1, -3, 1])
    assert composed_product(FIB, FIB, squarefree=True) == UniPoly([1, 1]) * UniPoly([1, -3, 1])


def test_composed_power_examples():
    assert composed_power(FIB, -1) == UniPoly([-1, 1, 1])
    assert composed_power(FIB, 1) == FIB
    assert composed_power(FIB, 2) == UniPoly([1, -3, 1])
    assert composed_power(FIB, 0) == UniPoly([-1, 1]) ** 2


def test_zero_root_rejected():
    with pytest.raises(ValueError):
        composed_product(UniPoly([0, 1]), FIB)
    with pytest.raises(ValueError):
        composed_power(UniPoly([0, -1, 1]), 2)


def test_degree_cap(monkeypatch):
    monkeypatch.setenv("CFSUM_MAX_DEGREE", "3")
    with pytest.raises(DegreeLimitError):
        composed_product(FIB, FIB)


roots_st = st.lists(nonzero_rat, min_size=1, max_size=3)


@settings(max_examples=60, deadline=None)
@given(roots_st, roots_st)
def test_composed_product_root_bookkeeping(rs, ss):
    expected = UniPoly.from_roots([r * s for r in rs for s in ss])
    assert composed_product(UniPoly.from_roots(rs), UniPoly.from_roots(ss)) == expected


@settings(max_examples=60, deadline=None)
@given(roots_st, st.integers(-3, 3))
def test_composed_power_root_bookkeeping(rs, b):
    expected = UniPoly.from_roots([r**b for r in rs])
    assert composed_power(UniPoly.from_roots(rs), b) == expected


def test_formal_monomial_poly_counts():
    # degree-2 monomials in the two Fibonacci roots: r1^2, r1 r2 = -1, r2^2
    g = formal_monomial_poly(FIB, 2)
    assert g == UniPoly([1, 1]) * UniPoly([1, -3, 1])
    assert formal_monomial_poly(UniPoly([-6, 11, -6, 1]), 3).degree == math.comb(5, 3)


def test_interpolate():
    p = interpolate([0, 1, 2, 3], [1, 2, 5, 10])
    assert p == UniPoly([1, 0, 1])


# linear algebra

def test_determinant_examples():
    assert determinant(ExactMatrix.identity(3)) == 1
    assert determinant(confluent_vandermonde([1, 2, 3, 4], [1, 1, 1, 1])) == 12
    assert determinant(confluent_vandermonde([1, 2, 3], [1, 2, 3])) == 16
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2], [2, 4]]) == 0


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(small_rat, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_matches_cofactor(rows):
    assert determinant(rows) == cofactor_det(rows)


def test_solve_examples():
    sol = solve_general(ExactMatrix.identity(3), [1, 2, 3])
    assert sol.particular == (1, 2, 3) and sol.is_unique
    sol = solve_general([[1, 1]], [2])
    assert sol.particular == (2, 0)
    assert sol.nullspace_basis == ((-1, 1),)


def test_inconsistent_system_has_witness():
    with pytest.raises(InconsistentSystemError) as e:
        solve_general([[1, 1], [2, 2]], [1, 3])
    assert e.value.row == 1


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_solve_general_properties(m, n, data):
    rows = data.draw(st.lists(st.lists(small_rat, min_size=n, max_size=n), min_size=m, max_size=m))
    x0 = data.draw(st.lists(small_rat, min_size=n, max_size=n))
    A = ExactMatrix.from_rows(rows)
    b = A.apply(x0)
    sol = solve_general(A, b)
    assert A.apply(sol.particular) == b
    for v in sol.nullspace_basis:
        assert not any(A.apply(v))
    assert len(sol.nullspace_basis) == n - rank(rows)
    free = set(range(n)) - set(sol.pivot_columns)
    assert all(sol.particular[j] == 0 for j in free)


def test_inverse():
    A = [[2, 1], [7, 4]]
    assert inverse(A).to_rows() == [[4, -1], [-7, 2]]
    with pytest.raises(ZeroDivisionError):
        inverse([[1, 2], [2, 4]])


def test_gcd_large_coefficients():
    common = UniPoly([3**40, -(2**50), 7, 1])
    f = common * UniPoly([5**30, 1, 0, 11]) ** 2
    g = common * UniPoly([-(13**25), 2, 1])
    assert poly_gcd(f, g) == common.monic()
    assert poly_gcd(f, g * UniPoly([1, 5**30 // 11, 0, 1])) == common.monic()
