import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermix.errors import (
    EmptySample,
    InvalidParameter,
    MomentNotFinite,
    NonPolynomialParameter,
    UnknownFamily,
)
from hermix.moments import (
    FamilySpec,
    MomentVector,
    Standardization,
    Unknown,
    empirical_raw_moments,
    exponential,
    family_cdf,
    gamma,
    gaussian,
    gram_charlier_coeffs,
    poisson,
    raw_moments,
    student_t,
    symbolic_raw_moments,
    uniform,
)
from hermix.poly import MultiPoly, parse_poly

F = Fraction

FIXED = [
    gaussian(0, 1),
    gaussian(F(-3, 2), F(5, 4)),
    gamma(3, 1),
    gamma(F(1, 2), 2),
    exponential(1),
    exponential(F(7, 3)),
    uniform(0, 1),
    uniform(-2, 5),
    poisson(2),
    poisson(F(1, 3)),
    student_t(9),
]


def test_raw_moment_examples():
    assert raw_moments(gaussian(0, 1), 6).values == (0, 1, 0, 3, 0, 15)
    assert raw_moments(exponential(1), 4).values == (1, 2, 6, 24)
    assert raw_moments(uniform(0, 1), 3).values == (F(1, 2), F(1, 3), F(1, 4))


def test_symbolic_examples():
    u = ("u",)
    got = symbolic_raw_moments(gaussian(Unknown("u"), 1), 3)
    assert got == [parse_poly("u", u), parse_poly("u^2 + 1", u), parse_poly("u^3 + 3*u", u)]
    t = ("t",)
    assert symbolic_raw_moments(exponential(Unknown("t")), 2) == [parse_poly("t", t), parse_poly("2*t^2", t)]
    assert symbolic_raw_moments(gaussian(0, 1), 2) == [MultiPoly.constant((), 0), MultiPoly.constant((), 1)]


@pytest.mark.parametrize(
    "sample, order, expected",
    [([1, 2, 3], 2, (2, F(14, 3))), ([5], 3, (5, 25, 125)), ([-1, 1], 4, (0, 1, 0, 1))],
)
def test_empirical_examples(sample, order, expected):
    assert empirical_raw_moments(sample, order).values == expected
    floats = empirical_raw_moments([float(x) for x in sample], order)
    assert floats.as_floats() == pytest.approx([float(e) for e in expected], abs=1e-14)


def test_empirical_empty():
    with pytest.raises(EmptySample):
        empirical_raw_moments([], 2)


def test_gram_charlier_examples():
    c = gram_charlier_coeffs(raw_moments(gaussian(0, 1), 4), Standardization(0, 1), 4)
    assert c.coeffs == (1, 0, 0, 0, 0)
    c = gram_charlier_coeffs(raw_moments(exponential(1), 4), Standardization(1, 1), 4)
    assert c[3] == F(1, 3) and c[4] == F(1, 4)
    c = gram_charlier_coeffs(raw_moments(uniform(0, 1), 4), Standardization(F(1, 2), F(1, 12)), 4)
    assert c[4] == F(-1, 20)


@pytest.mark.parametrize("spec", FIXED, ids=str)
def test_own_standardization_is_exact(spec):
    m = raw_moments(spec, 6)
    c = gram_charlier_coeffs(m, Standardization.of_moments(m), 6)
    assert c[0] == 1 and c[1] == 0 and c[2] == 0
    assert all(isinstance(v, Fraction) for v in c.coeffs)


def test_irrational_scale_kept_as_radical():
    m = raw_moments(gamma(3, 1), 4)
    std = Standardization.of_moments(m)
    assert std.scale_sq == 3 and std.rational_scale() is None
    c = gram_charlier_coeffs(m, std, 4)
    assert c.radical == 3
    # skewness of Gamma(k) is 2/sqrt(k); c3 = skew / 6
    assert c.values()[3] == pytest.approx(2 / math.sqrt(3) / 6, rel=1e-14)


@pytest.mark.parametrize("spec", FIXED, ids=str)
def test_symbolic_matches_numeric(spec):
    assert [p.constant_term() for p in symbolic_raw_moments(spec, 6)] == list(raw_moments(spec, 6).values)


@pytest.mark.parametrize(
    "family, params",
    [
        ("gaussian", {"mu": F(2, 3), "sigma2": F(3)}),
        ("gamma", {"shape": F(5, 2), "scale": F(1, 3)}),
        ("exponential", {"theta": F(4)}),
        ("uniform", {"a": F(-1), "b": F(7, 2)}),
        ("poisson", {"rate": F(3, 2)}),
    ],
)
def test_symbolic_substitution(family, params):
    spec = FamilySpec.make(family, **{k: Unknown(k) for k in params})
    polys = symbolic_raw_moments(spec, 6)
    values = [p.substitute(params).constant_term() for p in polys]
    assert values == list(raw_moments(FamilySpec.make(family, **params), 6).values)


def test_poisson_moments_match_pmf_sum():
    rate = 2.5
    ks = np.arange(0, 200)
    logp = -rate + ks * math.log(rate) - np.array([math.lgamma(k + 1) for k in ks])
    p = np.exp(logp)
    for n, m in enumerate(raw_moments(poisson(F(5, 2)), 6).values, start=1):
        assert float(np.sum(p * ks.astype(float) ** n)) == pytest.approx(float(m), rel=1e-12)


def test_gamma_moments_match_integral():
    mpmath.mp.dps = 30
    for n, m in enumerate(raw_moments(gamma(F(5, 2), F(1, 2)), 5).values, start=1):
        integral = mpmath.quad(
            lambda x: x**n * x ** mpmath.mpf(1.5) * mpmath.e ** (-2 * x) * 2 ** mpmath.mpf(2.5) / mpmath.gamma(2.5),
            [0, mpmath.inf],
        )
        assert float(integral) == pytest.approx(float(m), rel=1e-12)


def test_quadrature_gaussian():
    nodes, weights = np.polynomial.hermite_e.hermegauss(40)
    weights = weights / math.sqrt(2 * math.pi)
    mu, s2 = -0.75, 2.0
    x = mu + math.sqrt(s2) * nodes
    for n, m in enumerate(raw_moments(gaussian(F(-3, 4), 2), 6).values, start=1):
        assert abs(float(np.sum(weights * x**n)) - float(m)) < 1e-8


def test_quadrature_uniform():
    nodes, weights = np.polynomial.legendre.leggauss(20)
    a, b = -2.0, 5.0
    x = (b - a) / 2 * nodes + (a + b) / 2
    w = weights / 2
    for n, m in enumerate(raw_moments(uniform(-2, 5), 6).values, start=1):
        assert abs(float(np.sum(w * x**n)) - float(m)) < 1e-8


def test_student_t_moments():
    assert raw_moments(student_t(5), 4).values == (0, F(5, 3), 0, 25)
    with pytest.raises(MomentNotFinite):
        raw_moments(student_t(4), 4)


def test_spec_validation():
    with pytest.raises(NonPolynomialParameter):
        student_t(Unknown("n"))
    with pytest.raises(InvalidParameter):
        gaussian(0, -1)
    with pytest.raises(InvalidParameter):
        uniform(1, 1)
    with pytest.raises(UnknownFamily):
        FamilySpec.make("cauchy")
    with pytest.raises(InvalidParameter):
        FamilySpec.make("gaussian", mu=0)


def test_label_and_bind():
    spec = gaussian(Unknown("u"), F(1, 2))
    assert spec.label() == "gaussian:mu=?u,sigma2=0.5"
    assert spec.bind({"u": F(3)}) == gaussian(3, F(1, 2))


@pytest.mark.parametrize(
    "spec, x, expected",
    [(gaussian(0, 1), 0, 0.5), (uniform(0, 2), 0.5, 0.25), (exponential(1), 1, 1 - math.exp(-1))],
)
def test_cdf_examples(spec, x, expected):
    assert family_cdf(spec, x) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("spec", FIXED, ids=str)
def test_cdf_monotone_with_limits(spec):
    grid = np.linspace(-60, 60, 2401)
    values = [family_cdf(spec, x) for x in grid]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[0] < 1e-9
    assert values[-1] > 1 - 1e-9


def test_poisson_cdf_steps():
    lam = 2.0
    expected = sum(math.exp(-lam) * lam**k / math.factorial(k) for k in range(3))
    assert family_cdf(poisson(2), 2.0) == pytest.approx(expected, abs=1e-14)
    assert family_cdf(poisson(2), 2.9) == family_cdf(poisson(2), 2.0)
    assert family_cdf(poisson(2), -0.5) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=20), min_size=1, max_size=30))
def test_empirical_variance_nonnegative(sample):
    m = empirical_raw_moments(sample, 2)
    assert m.variance_nonnegative()


def test_moment_vector_helpers():
    m = MomentVector((F(1), F(3), F(7)))
    assert m.moment(0) == 1 and m.moment(2) == 3
    assert m.truncate(2).values == (1, 3)
    assert not MomentVector((F(2), F(1))).variance_nonnegative()
