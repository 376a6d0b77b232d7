import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermix.errors import NotZeroDimensional, ParseError, RingMismatch
from hermix.poly import (
    GroebnerBasis,
    MultiPoly,
    buchberger,
    degrevlex,
    is_groebner,
    is_reduced,
    lex,
    normal_form,
    parse_poly,
    parse_polys,
    quotient_basis,
    s_polynomial,
)

XY = ("x", "y")


def P(text, ring=XY):
    return parse_poly(text, ring)


def test_arith_examples():
    assert P("x + 1") + P("x - 1") == P("2*x")
    assert P("x - y") * P("x + y") == P("x^2 - y^2")
    assert (P("x^3 + y") * 0).is_zero()
    assert P("x").scale(Fraction(1, 2)) == P("1/2*x")


def test_no_zero_coefficients_stored():
    f = MultiPoly(XY, {(1, 0): 1, (0, 1): 0})
    assert list(f.terms) == [(1, 0)]
    assert (P("x") - P("x")).terms == {}


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        P("x", ("x",)) + P("x", XY)


def test_immutable():
    f = P("x")
    with pytest.raises(AttributeError):
        f.ring = ("z",)


def test_normal_form_examples():
    G = GroebnerBasis((P("x^2 - 2", ("x",)),))
    assert normal_form(P("x^2", ("x",)), G) == 2
    G = buchberger([P("x - y"), P("x^2 + y^2 - 1")], lex)
    assert normal_form(P("x^2 + y^2 - 1"), G).is_zero()
    G2 = GroebnerBasis((P("x - y"), P("y^2 - 1/2")), lex)
    assert normal_form(P("y"), G2) == P("y")


def test_buchberger_examples():
    x = ("x",)
    G = buchberger([P("x^2 - 3*x + 2", x)], lex)
    assert list(G) == [P("x^2 - 3*x + 2", x)]
    G = buchberger([P("x - y"), P("x^2 + y^2 - 1")], lex)
    assert set(G) == {P("x - y"), P("y^2 - 1/2")}
    G = buchberger([P("x", x), P("x", x)], lex)
    assert list(G) == [P("x", x)]


def test_quotient_basis_examples():
    G = buchberger([P("x^2 - 2", ("x",))])
    assert quotient_basis(G).monomials == ((0,), (1,))
    G = GroebnerBasis((P("x - y"), P("y^2 - 1/2")), lex)
    assert quotient_basis(G).monomials == ((0, 0), (0, 1))
    with pytest.raises(NotZeroDimensional) as info:
        quotient_basis(buchberger([P("x*y")]))
    assert set(info.value.free_variables) == {"x", "y"}


def test_unit_ideal():
    G = buchberger([P("x - 1"), P("x - 2")])
    assert G.is_unit()
    assert len(quotient_basis(G)) == 0


SYSTEMS = [
    (["x^2 - 2"], ("x",), 2),
    (["x - y", "x^2 + y^2 - 1"], XY, 2),
    (["x^2 + y^2 - 5", "x*y - 2"], XY, 4),
    (["x^2 - 1", "y^2 - 4"], XY, 4),
    (["x + y + z - 6", "x*y + y*z + z*x - 11", "x*y*z - 6"], ("x", "y", "z"), 6),
    (["x^3 - 2*x*y", "x^2*y + x - 2*y^2"], XY, None),
]


@pytest.mark.parametrize("order", [lex, degrevlex])
@pytest.mark.parametrize("texts, ring, count", SYSTEMS)
def test_buchberger_postconditions(texts, ring, count, order):
    gens = parse_polys(texts, ring)
    G = buchberger(gens, order)
    assert is_groebner(G)
    assert is_reduced(G)
    for g in gens:
        assert normal_form(g, G).is_zero()
    if count is not None:
        assert len(quotient_basis(G)) == count


def test_s_polynomials_reduce_to_zero_directly():
    G = buchberger(parse_polys(["x + y + z - 6", "x*y + y*z + z*x - 11", "x*y*z - 6"]))
    for a, b in itertools.combinations(G.elements, 2):
        assert normal_form(s_polynomial(a, b, G.order), G).is_zero()


def test_known_degrevlex_basis():
    # reference basis for this classic example
    G = buchberger([P("x^3 - 2*x*y"), P("x^2*y + x - 2*y^2")], degrevlex)
    assert set(G) == {P("x^2"), P("x*y"), P("y^2 - 1/2*x")}


def test_determinism():
    gens = parse_polys(["x^2 + y^2 - 5", "x*y - 2"])
    a = buchberger(gens)
    b = buchberger(list(reversed(gens)))
    assert [g.terms for g in a] == [g.terms for g in b]


small_poly = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.fractions(min_value=-5, max_value=5, max_denominator=4),
    max_size=4,
).map(lambda d: MultiPoly(XY, d))

G_FIXED = buchberger(parse_polys(["x^2 + y^2 - 5", "x*y - 2"]))


@settings(max_examples=40, deadline=None)
@given(small_poly, small_poly)
def test_normal_form_is_multiplicative(f, g):
    lhs = normal_form(f * g, G_FIXED)
    rhs = normal_form(normal_form(f, G_FIXED) * normal_form(g, G_FIXED), G_FIXED)
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(small_poly)
def test_normal_form_idempotent(f):
    r = normal_form(f, G_FIXED)
    assert normal_form(r, G_FIXED) == r
    lms = G_FIXED.leading_monomials()
    assert not any(all(a <= b for a, b in zip(lm, m)) for m in r.terms for lm in lms)


def test_parser_grammar():
    assert parse_poly("x^2 + y^2 - 1") == P("x^2+y^2-1")
    assert parse_poly("0.5*x - 3/4") == MultiPoly(("x",), {(1,): Fraction(1, 2), (0,): Fraction(-3, 4)})
    assert parse_poly("-(x - 1)^2") == MultiPoly(("x",), {(2,): -1, (1,): 2, (0,): -1})
    f, g = parse_polys(["x - y", "x^2 + y^2 - 1"])
    assert f.ring == ("x", "y") == g.ring


@pytest.mark.parametrize("text", ["2x", "x y", "x^y", "x +", "(x", "x $ 1", "x/y"])
def test_parser_rejects(text):
    with pytest.raises(ParseError):
        parse_poly(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_poly("x + 2y")
    assert info.value.position == 5


def test_exact_decimal_reading():
    assert parse_poly("0.1").constant_term() == Fraction(1, 10)


def test_substitute_and_evaluate():
    f = P("x^2*y + 3")
    assert f.substitute({"x": 2}) == P("4*y + 3")
    assert f.evaluate([2.0, 1.5]) == pytest.approx(9.0)


@pytest.mark.parametrize("order", [lex, degrevlex])
@pytest.mark.parametrize("texts, ring, count", SYSTEMS)
def test_matches_independent_groebner(texts, ring, count, order):
    sympy = pytest.importorskip("sympy")
    symbols = sympy.symbols(ring)
    exprs = [sympy.sympify(t.replace("^", "**"), locals=dict(zip(ring, symbols))) for t in texts]
    ref = sympy.groebner(exprs, *symbols, order="lex" if order is lex else "grevlex")
    ours = buchberger(parse_polys(texts, ring), order)
    # the reference returns primitive integer polynomials, compare monic forms
    expected = {parse_poly(str(g.as_expr()).replace("**", "^"), ring).monic(order) for g in ref.exprs}
    assert set(ours) == expected
