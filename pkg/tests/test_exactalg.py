"""Exact arithmetic core: canonical forms, derivations, factor structure,
partial fractions and linear solving."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from isocert.exactalg import (MultiPoly, NonLinearFactor, RationalFunction,
                              VariableRegistry, VarKind, ZeroDenominator,
                              gcd, linear_poles, linear_solve, normalize,
                              partial_fractions, poly_sqrt, squarefree_factor)
from isocert.exactalg.poly import exact_div

from conftest import random_poly, random_rational


def test_normalize_cancels_common_factor(xt):
    x, t = xt["x"], xt["t"]
    f = normalize((x * x - t * t).num, (x - t).num, xt["reg"])
    assert f == x + t


def test_normalize_zero_numerator(xt):
    f = normalize(MultiPoly.zero(), MultiPoly.const(5), xt["reg"])
    assert f.is_zero()
    assert f.den.is_one()


def test_normalize_content(xt):
    x = xt["x"]
    f = normalize((2 * x).num, MultiPoly.const(4), xt["reg"])
    assert f == x / 2
    assert f.den.is_one()


def test_normalize_scaling_invariance(xt):
    x, t = xt["x"], xt["t"]
    a, b, c = (x + t).num, (x - t).num, (x * t + 1).num
    assert normalize(a * c, b * c, xt["reg"]) == normalize(a, b, xt["reg"])


def test_zero_denominator(xt):
    with pytest.raises(ZeroDenominator):
        normalize(MultiPoly.one(), MultiPoly.zero(), xt["reg"])


def test_derive_quotient_rule(xt):
    x, t, one = xt["x"], xt["t"], xt["one"]
    g = one / (x - t)
    assert g.derive("x") == -one / (x - t) ** 2
    assert g.derive("t") == one / (x - t) ** 2
    assert (t / x).derive("t") == one / x


def test_squarefree_factor(xt):
    x, t, one = xt["x"], xt["t"], xt["one"]
    ix = xt["reg"].index("x")
    p = ((x - t) ** 2 * (x - one)).num
    factors = {(repr(f), m) for f, m in squarefree_factor(p, ix)}
    assert factors == {(repr((x - t).num), 2), (repr((x - one).num), 1)}
    assert squarefree_factor((x - t).num, ix) == [((x - t).num, 1)]
    assert squarefree_factor(((x - t) ** 3).num, ix) == [((x - t).num, 3)]


def test_squarefree_product_reconstructs(xt):
    rnd = random.Random(5)
    ix = xt["reg"].index("x")
    for _ in range(25):
        parts = [random_poly(rnd, xt["reg"]) for _ in range(3)]
        parts = [p for p in parts if p.degree(ix) > 0]
        if not parts:
            continue
        p = MultiPoly.one()
        for i, q in enumerate(parts):
            p = p * q ** (i + 1)
        prod = MultiPoly.one()
        for f, m in squarefree_factor(p, ix):
            prod = prod * f ** m
        # Equal up to a unit over Q(t): the quotient has x-degree 0.
        assert gcd(p, prod).degree(ix) == prod.degree(ix)


def test_partial_fractions_two_linear_poles(xt):
    x, t, one = xt["x"], xt["t"], xt["one"]
    f = one / ((x - t) * (x - one))
    pfd = partial_fractions(f, "x")
    assert pfd.poly_part.is_zero()
    got = {(term.pole, term.order): term.coeff for term in pfd.terms}
    assert got == {(t, 1): one / (t - one), (one, 1): -one / (t - one)}
    assert pfd.recombine(xt["reg"].index("x")) == f


def test_partial_fractions_higher_order(xt):
    x, one = xt["x"], xt["one"]
    f = x / (x - one) ** 2
    pfd = partial_fractions(f, "x")
    got = {(term.pole, term.order): term.coeff for term in pfd.terms}
    assert got == {(one, 1): one, (one, 2): one}


def test_partial_fractions_irreducible_quadratic(xt):
    x, one = xt["x"], xt["one"]
    with pytest.raises(NonLinearFactor):
        partial_fractions(one / (x * x + one), "x")


def test_partial_fractions_recombine_random(xt):
    rnd = random.Random(11)
    x, t, one = xt["x"], xt["t"], xt["one"]
    ix = xt["reg"].index("x")
    pole_pool = [t, one, xt["zero"], 2 * one, t + one, 2 * t]
    for _ in range(30):
        f = xt["zero"]
        for _ in range(rnd.randint(1, 3)):
            p = rnd.choice(pole_pool)
            k = rnd.randint(1, 3)
            c = RationalFunction.const(rnd.randint(-3, 3), xt["reg"])
            num = c * t if rnd.random() < 0.4 else c
            f = f + num / (x - p) ** k
        f = f + RationalFunction.const(rnd.randint(-2, 2), xt["reg"]) * x
        if f.is_zero():
            continue
        pfd = partial_fractions(f, "x")
        assert pfd.recombine(ix) == f


def test_linear_poles_expanded_products(xt):
    x, t, one = xt["x"], xt["t"], xt["one"]
    ix = xt["reg"].index("x")
    # expanded cubic with mixed parameter dependence
    den = (x * (x - one) * (x - t)).num
    got = {(p, m) for p, m in linear_poles(den, ix, xt["reg"])}
    assert got == {(xt["zero"], 1), (one, 1), (t, 1)}
    # quadratic needing the discriminant square root
    den2 = ((x - t) * (x - 2 * t)).num
    got2 = {p for p, _ in linear_poles(den2, ix, xt["reg"])}
    assert got2 == {t, 2 * t}


def test_poly_sqrt():
    reg = VariableRegistry()
    reg.add("a")
    reg.add("b")
    a = RationalFunction.var("a", reg)
    b = RationalFunction.var("b", reg)
    square = ((a + b) ** 2 * (a - b) ** 2).num
    s = poly_sqrt(square)
    assert s is not None and s * s == square
    assert poly_sqrt((a * a + b).num) is None


def test_linear_solve_identity(t1t2):
    one, zero = t1t2["one"], t1t2["zero"]
    sol = linear_solve([[one, zero], [zero, one]], [one, zero], zero, one)
    assert not sol.inconsistent
    assert sol.particular == [one, zero]
    assert sol.nullspace == []


def test_linear_solve_nullspace(xt):
    t, one, zero = xt["t"], xt["one"], xt["zero"]
    sol = linear_solve([[one / (t - one), one]], [zero], zero, one)
    assert not sol.inconsistent
    assert len(sol.nullspace) == 1
    v = sol.nullspace[0]
    # up to scaling equal to (-(t-1), 1)
    assert v[0] * one - v[1] * (-(t - one)) == zero


def test_linear_solve_inconsistent(xt):
    one, zero = xt["one"], xt["zero"]
    sol = linear_solve([[one], [one]], [zero, one], zero, one)
    assert sol.inconsistent


def test_linear_solve_satisfies_system(xt1t2):
    rnd = random.Random(3)
    reg, zero, one = xt1t2["reg"], xt1t2["zero"], xt1t2["one"]
    for _ in range(15):
        m, n = rnd.randint(1, 3), rnd.randint(1, 4)
        M = [[random_rational(rnd, reg) for _ in range(n)] for _ in range(m)]
        rhs = [random_rational(rnd, reg) for _ in range(m)]
        sol = linear_solve(M, rhs, zero, one)
        if sol.inconsistent:
            continue
        for i in range(m):
            assert sum((M[i][j] * sol.particular[j] for j in range(n)), zero) == rhs[i]
            for vec in sol.nullspace:
                assert sum((M[i][j] * vec[j] for j in range(n)), zero) == zero


# -- hypothesis property suites ------------------------------------------------


def _strategy_rational(reg):
    coeff = st.integers(min_value=-4, max_value=4)
    exps = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))

    @st.composite
    def build(draw):
        num = MultiPoly.zero()
        for _ in range(draw(st.integers(1, 3))):
            e = draw(exps)
            c = draw(coeff)
            mono = tuple((i, v) for i, v in enumerate(e) if v)
            if c:
                num = num + MultiPoly.from_terms([(mono, Fraction(c))])
        den = MultiPoly.zero()
        while den.is_zero():
            e = draw(exps)
            c = draw(st.integers(1, 3))
            mono = tuple((i, v) for i, v in enumerate(e) if v)
            den = MultiPoly.from_terms([(mono, Fraction(c))]) + MultiPoly.const(draw(coeff))
        return RationalFunction(num, den, reg)

    return build()


_REG3 = VariableRegistry()
_REG3.add("x", VarKind.PRINCIPAL)
_REG3.add("t1", VarKind.PARAMETRIC)
_REG3.add("t2", VarKind.PARAMETRIC)


@settings(max_examples=60, deadline=None)
@given(_strategy_rational(_REG3), _strategy_rational(_REG3), _strategy_rational(_REG3))
def test_field_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + g == g + f
    assert f * g == g * f
    if not g.is_zero():
        assert (f / g) * g == f


@settings(max_examples=60, deadline=None)
@given(_strategy_rational(_REG3), _strategy_rational(_REG3))
def test_derive_leibniz_and_commutes(f, g):
    for v in ("x", "t1", "t2"):
        assert (f * g).derive(v) == f.derive(v) * g + f * g.derive(v)
    assert f.derive("x").derive("t1") == f.derive("t1").derive("x")
    assert f.derive("t1").derive("t2") == f.derive("t2").derive("t1")


def test_derive_leibniz_and_mixed_partials_200_random():
    rnd = random.Random(17)
    prev = None
    count = 0
    while count < 200:
        f = random_rational(rnd, _REG3, simple_den=True)
        if f.is_const():
            continue
        count += 1
        assert f.derive("x").derive("t1") == f.derive("t1").derive("x")
        assert f.derive("x").derive("t2") == f.derive("t2").derive("x")
        if prev is not None:
            assert (f * prev).derive("x") == \
                f.derive("x") * prev + f * prev.derive("x")
        prev = f


def test_gcd_against_products():
    rnd = random.Random(23)
    for _ in range(60):
        a, b, c = (random_poly(rnd, _REG3) for _ in range(3))
        if a.is_zero() or b.is_zero() or c.is_zero():
            continue
        g = gcd(a * c, b * c)
        # c (up to unit) must divide the gcd
        assert exact_div(g * MultiPoly.one(), gcd(g, c.monic())) is not None
        assert gcd(g, c.monic()).total_degree() >= 0
        # and the gcd divides both products
        exact_div(a * c, g)
        exact_div(b * c, g)


def test_rational_function_hash_consistency(xt):
    x, t, one = xt["x"], xt["t"], xt["one"]
    a = (x * x - t * t) / (x - t)
    b = x + t
    assert a == b
    assert hash(a) == hash(b)
