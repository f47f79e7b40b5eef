import math
import random
from fractions import Fraction

import pytest

from cfsum.closer import (
    ClosedForm,
    ProblemError,
    SumProblem,
    TargetMonomial,
    TermFactor,
    UnsupportedBasisError,
    brute_force_sum,
    build_basis_fundamental,
    build_basis_shifted,
    certify_identity,
    degree_bound,
    evaluate_closed_form,
    expand_polynomial_atoms,
    monomial,
    polynomial_values,
    psi_degree_bound,
    solve,
)
from cfsum.exact import UniPoly
from cfsum.sequence import CFiniteSequence, builtin

F = builtin("fibonacci")
ONE = TargetMonomial(0, ())


def coll_problem():
    return SumProblem([TermFactor(F, 0, 1, 0), TermFactor(F, 0, 1, 0), TermFactor(F, 2, -1, 0)])


def power_problem(seq, p):
    return SumProblem([TermFactor(seq, 0, 1, 0)] * p)


def cf(*pairs):
    return ClosedForm.from_pairs((UniPoly(c) if isinstance(c, list) else UniPoly([c]), m) for c, m in pairs)


def test_term_factor_validation():
    with pytest.raises(ProblemError):
        TermFactor(F, -1, 2)
    with pytest.raises(ProblemError):
        TermFactor(F, 1, -2)
    with pytest.raises(ProblemError):
        TermFactor(F, 0, 0)
    with pytest.raises(ProblemError):
        TermFactor(F, 1.0, 0)
    with pytest.raises(ProblemError):
        SumProblem([])


def test_name_clash_rejected():
    other = builtin("subword", 3, name="F")
    with pytest.raises(ProblemError):
        SumProblem([TermFactor(F, 0, 1), TermFactor(other, 0, 1)])


def test_alpha_zero_folding():
    m = monomial((F, 0, 4), (F, 1, 1), constant=2)
    assert m.constant == 6 and m.factors == monomial((F, 1, 1)).factors
    assert monomial((F, 1, 1), (F, 1, 0)) == monomial((F, 1, 0), (F, 1, 1))


def test_shifted_basis_coll():
    basis = build_basis_shifted(coll_problem())
    expected = {
        monomial((F, 2, 0), h=1), monomial((F, 2, 0)), monomial((F, 2, 1), h=1), monomial((F, 2, 1)),
        monomial((F, 1, 0), (F, 1, 0), (F, 1, 0)), monomial((F, 1, 0), (F, 1, 0), (F, 1, 1)),
        monomial((F, 1, 0), (F, 1, 1), (F, 1, 1)), monomial((F, 1, 1), (F, 1, 1), (F, 1, 1)),
    }
    assert set(basis.monomials) == expected
    assert basis.M == 8 and basis.psi_degree == 1


def test_shifted_basis_subword():
    G = builtin("subword", 3)
    basis = build_basis_shifted(power_problem(G, 2))
    assert basis.M == 8
    assert ONE in basis.monomials and TargetMonomial(1, ()) in basis.monomials


def test_shifted_basis_smallest_case():
    # F(n), F(n+1) from a+b = 1 and n F(n), n F(n+1) from a = 1 with psi = 1
    basis = build_basis_shifted(SumProblem([TermFactor(F, 1, 0, 0)]))
    assert set(basis.monomials) == {monomial((F, 1, 0)), monomial((F, 1, 1)),
                                    monomial((F, 1, 0), h=1), monomial((F, 1, 1), h=1)}


def test_basis_size_bound():
    for p in range(1, 6):
        for seq in (F, builtin("subword", 3)):
            prob = power_problem(seq, p)
            basis = build_basis_shifted(prob)
            beta = psi_degree_bound(prob)
            assert basis.M <= (beta + 2) * seq.profile.d ** prob.k


def test_fundamental_basis():
    basis = build_basis_fundamental(power_problem(F, 2))
    assert set(basis.monomials) == {
        ONE, TargetMonomial(1, ()), monomial((F, 1, 0), (F, 1, 0)),
        monomial((F, 1, 0), (F, 1, 1)), monomial((F, 1, 1), (F, 1, 1))}
    basis = build_basis_fundamental(coll_problem())
    assert basis.M == 10
    G = builtin("subword", 3)
    with pytest.raises(UnsupportedBasisError):
        build_basis_fundamental(SumProblem([TermFactor(F, 0, 1), TermFactor(G, 0, 1)]))


def test_brute_force_examples():
    assert brute_force_sum(coll_problem(), 2) == 2
    assert brute_force_sum(coll_problem(), 0) == 0
    assert brute_force_sum(power_problem(F, 1), 5) == 7


def test_solve_coll_shifted():
    sol = solve(coll_problem())
    half = Fraction(1, 2)
    expected = cf(
        (half, monomial((F, 2, 0))), (-half, monomial((F, 2, 1))),
        (half, monomial((F, 1, 0), (F, 1, 0), (F, 1, 1))),
        (-half, monomial((F, 1, 0), (F, 1, 1), (F, 1, 1))),
        (half, monomial((F, 1, 1), (F, 1, 1), (F, 1, 1))),
    )
    assert sol.particular == expected
    assert sol.identities == ()
    assert evaluate_closed_form(sol.particular, 2) == 2
    assert sol.verified_window == 8 + 20


def test_solve_coll_fundamental():
    sol = solve(coll_problem(), build_basis_fundamental(coll_problem()))
    half = Fraction(1, 2)
    expected = cf(
        (1, monomial((F, 1, 0), (F, 1, 1))), (-1, monomial((F, 1, 0), (F, 1, 0))),
        (-half, monomial((F, 1, 1), (F, 1, 1))),
        (half, monomial((F, 1, 0), (F, 1, 0), (F, 1, 1))),
        (-half, monomial((F, 1, 0), (F, 1, 1), (F, 1, 1))),
        (half, monomial((F, 1, 1), (F, 1, 1), (F, 1, 1))),
    )
    assert sol.particular == expected and not sol.identities


def subword1(G, A):
    A = Fraction(A)
    g = lambda i, j: monomial((G, 1, i), (G, 1, j))
    s = 1 / (A * (A - 2))
    return cf((s, ONE), (-s * (A - 1) ** 2, g(0, 0)), (-2 * s, g(0, 1)), (2 * s, g(0, 2)),
              (2 * (A - 1) * s, g(1, 2)), (-s * (A - 1) ** 2, g(1, 1)), (-s, g(2, 2)))


def test_solve_subword_three():
    G = builtin("subword", 3)
    sol = solve(power_problem(G, 2))
    assert sol.identities == ()
    assert sol.particular == subword1(G, 3)


def test_solve_subword_two_identity():
    G = builtin("subword", 2)
    sol = solve(power_problem(G, 2))
    assert len(sol.identities) == 1
    g = lambda i, j: monomial((G, 1, i), (G, 1, j))
    quad = cf((1, g(2, 2)), (1, g(1, 1)), (1, g(0, 0)), (-2, g(1, 2)), (-2, g(0, 2)), (2, g(0, 1)))
    linear = cf((-2, monomial((G, 1, 2))), (2, monomial((G, 1, 1))), (2, monomial((G, 1, 0))))
    rel2 = quad + linear + cf((1, ONE))  # (G(n+2) - G(n+1) - G(n) - 1)^2 expanded
    assert all(evaluate_closed_form(rel2, n) == 0 for n in range(30))
    # the basis has no linear G terms; there G(n+2) - G(n+1) - G(n) = 1 turns rel2 into quad - 1
    ident = sol.identities[0]
    scale = ident.coefficient(g(2, 2))[0]
    assert ident == (quad - cf((1, ONE))).scale(scale)
    subword2 = cf(([0, 1], ONE), (2, g(0, 0)), (7, g(0, 1)), (-5, g(0, 2)), (-5, g(1, 2)),
                  (3, g(1, 1)), (2, g(2, 2)))
    diff = subword2 - sol.particular
    t = diff.coefficient(g(2, 2))[0] / scale
    assert (diff - ident.scale(t)).is_zero()
    assert evaluate_closed_form(subword2, 3) == 21


def test_shifted_and_fundamental_agree_pointwise():
    for prob in (coll_problem(), power_problem(F, 3), power_problem(builtin("subword", 3), 2)):
        a = solve(prob).particular
        b = solve(prob, build_basis_fundamental(prob)).particular
        for n in range(25):
            assert evaluate_closed_form(a, n) == evaluate_closed_form(b, n) == brute_force_sum(prob, n)


def test_polynomial_atom_expansion():
    N = builtin("n")
    assert polynomial_values(N) == UniPoly([0, 1])
    assert polynomial_values(F) is None
    form = cf((3, monomial((N, 2, 1), (F, 1, 0))))
    assert expand_polynomial_atoms(form) == cf(([3, 6], monomial((F, 1, 0))))


def test_degree_bound_examples():
    N, G = builtin("n"), builtin("subword", 3)
    mixed = SumProblem([TermFactor(N, 0, 1), TermFactor(F, 0, 1), TermFactor(G, 1, -1)])
    assert degree_bound(mixed) == 7
    assert degree_bound(SumProblem([TermFactor(F, 1, 0)])) == 4
    assert degree_bound(SumProblem([TermFactor(F, 0, 1)])) == 3


def test_certify_cassini():
    S = builtin("geometric", -1, name="S")
    lhs = cf((1, monomial((F, 1, 1), (F, 1, -1))), (-1, monomial((F, 1, 0), (F, 1, 0))))
    rhs = cf((1, monomial((S, 1, 0))))
    cert = certify_identity(lhs, rhs)
    assert cert.verdict and cert.bound <= 5
    bad = certify_identity(lhs, cf((1, ONE)))
    assert not bad.verdict and bad.counterexample is not None
    assert certify_identity(lhs, lhs).verdict


def test_certify_with_sum():
    prob = power_problem(F, 2)
    lhs = cf((-1, monomial((F, 1, 0), (F, 1, 1))), (1, monomial((F, 1, 0), (F, 1, 0))))
    assert certify_identity(lhs, ClosedForm(), p=prob).verdict


def random_problem(rng):
    seqs = {}
    factors = []
    for i in range(rng.randint(1, 3)):
        if seqs and rng.random() < 0.5:
            seq = rng.choice(list(seqs.values()))
        else:
            while True:
                D = rng.randint(1, 3)
                rec = [rng.randint(-3, 3) for _ in range(D)]
                init = [rng.randint(-3, 3) for _ in range(D)]
                try:
                    seq = CFiniteSequence(rec, init, name=f"S{len(seqs)}")
                except ValueError:
                    continue
                break
            seqs[seq.name] = seq
        while True:
            a, b, c = rng.randint(0, 3), rng.randint(-3, 3), rng.randint(-3, 3)
            if a + b >= 0 and (a > 0 or a + b > 0):
                break
        factors.append(TermFactor(seq, a, b, c))
    return SumProblem(factors)


def test_random_problems_verify():
    rng = random.Random(7)
    for _ in range(40):
        prob = random_problem(rng)
        sol = solve(prob, extra_checks=20)
        for n in range(sol.basis.M + 21):
            assert evaluate_closed_form(sol.particular, n) == brute_force_sum(prob, n)
            for ident in sol.identities:
                assert evaluate_closed_form(ident, n) == 0


@pytest.mark.parametrize("A,B,F0,F1", [(1, 1, 0, 1), (1, 3, 2, -1), (3, 1, 1, 4), (2, -3, 1, 1), (-1, 4, 0, 2)])
def test_generic_square_sum(A, B, F0, F1):
    # non-degenerate: A^2 + 4B != 0, A != +-(B - 1), B != -1
    S = CFiniteSequence([A, B], [F0, F1], name="F")
    A, B = Fraction(A), Fraction(B)
    u, v, w = 1 - B - A * A * (1 + B), 2 * A * B, 1 - B
    den = (A * A - (B - 1) ** 2) * (B + 1)
    K = u * F0 * F0 + v * F0 * F1 + w * F1 * F1
    expected = cf((u / den, monomial((S, 1, 0), (S, 1, 0))), (v / den, monomial((S, 1, 0), (S, 1, 1))),
                  (w / den, monomial((S, 1, 1), (S, 1, 1))), (-K / den, ONE))
    sol = solve(power_problem(S, 2))
    assert sol.identities == () and sol.particular == expected
