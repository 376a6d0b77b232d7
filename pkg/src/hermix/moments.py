"""Family catalog: raw moments (exact and symbolic), CDFs, Gram-Charlier coefficients.

Every family's raw moments are polynomials in its parameters, with the
exception of Student's t, whose moments are rational in nu.  That is why nu
must always be fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from . import specfun
from .errors import (
    EmptySample,
    InsufficientMoments,
    InvalidParameter,
    MomentNotFinite,
    NonPolynomialParameter,
    UnknownFamily,
)
from .hermite import HermiteCoeffs, he_monomial_coeffs
from .poly import MultiPoly

FAMILY_PARAMS: dict[str, tuple[str, ...]] = {
    "gaussian": ("mu", "sigma2"),
    "gamma": ("shape", "scale"),
    "exponential": ("theta",),
    "uniform": ("a", "b"),
    "studentt": ("nu",),
    "poisson": ("rate",),
}

_POSITIVE = {
    "gaussian": ("sigma2",),
    "gamma": ("shape", "scale"),
    "exponential": ("theta",),
    "uniform": (),
    "studentt": ("nu",),
    "poisson": ("rate",),
}

DISCRETE = frozenset({"poisson"})


@dataclass(frozen=True)
class Unknown:
    """A parameter left free, to be solved for."""

    name: str

    def __str__(self):
        return f"?{self.name}"


Param = Union[Fraction, Unknown]


def as_rational(value) -> Fraction:
    """Exact rational from int, Fraction, decimal string, or float (read as its repr)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidParameter(f"non-finite value {value}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParameter(f"not a decimal or rational number: {value!r}") from exc
    return Fraction(value)


@dataclass(frozen=True)
class FamilySpec:
    """A distribution family with each parameter fixed or unknown.

    ``params`` follows the order in ``FAMILY_PARAMS[family]``.
    """

    family: str
    params: tuple[Param, ...]

    def __post_init__(self):
        if self.family not in FAMILY_PARAMS:
            raise UnknownFamily(f"unknown family {self.family!r}")
        names = FAMILY_PARAMS[self.family]
        if len(self.params) != len(names):
            raise InvalidParameter(f"{self.family} takes parameters {names}")
        clean = []
        for name, p in zip(names, self.params):
            if not isinstance(p, Unknown):
                p = as_rational(p)
            clean.append(p)
        object.__setattr__(self, "params", tuple(clean))
        values = self.named()
        if self.family == "studentt" and isinstance(values["nu"], Unknown):
            raise NonPolynomialParameter(
                "Student t moments are rational, not polynomial, in nu; nu must be fixed"
            )
        for name in _POSITIVE[self.family]:
            v = values[name]
            if not isinstance(v, Unknown) and v <= 0:
                raise InvalidParameter(f"{self.family} parameter {name} must be positive, got {v}")
        if self.family == "uniform":
            a, b = values["a"], values["b"]
            if not isinstance(a, Unknown) and not isinstance(b, Unknown) and not a < b:
                raise InvalidParameter(f"uniform requires a < b, got a={a}, b={b}")

    @classmethod
    def make(cls, family: str, **params) -> FamilySpec:
        family = family.lower()
        if family not in FAMILY_PARAMS:
            raise UnknownFamily(f"unknown family {family!r}")
        names = FAMILY_PARAMS[family]
        extra = set(params) - set(names)
        if extra:
            raise InvalidParameter(f"{family} has no parameter {sorted(extra)[0]!r}")
        missing = [n for n in names if n not in params]
        if missing:
            raise InvalidParameter(f"{family} is missing parameter {missing[0]!r}")
        return cls(family, tuple(params[n] for n in names))

    def named(self) -> dict[str, Param]:
        return dict(zip(FAMILY_PARAMS[self.family], self.params))

    def unknowns(self) -> list[str]:
        return [p.name for p in self.params if isinstance(p, Unknown)]

    def is_fixed(self) -> bool:
        return not self.unknowns()

    def bind(self, values: Mapping[str, object]) -> FamilySpec:
        """Replace unknowns by values (floats allowed; used for numeric solutions)."""
        params = []
        for p in self.params:
            if isinstance(p, Unknown) and p.name in values:
                v = values[p.name]
                params.append(v if isinstance(v, Fraction) else _float_to_fraction(v))
            else:
                params.append(p)
        return FamilySpec(self.family, tuple(params))

    def label(self) -> str:
        body = ",".join(
            f"{k}={v}" if isinstance(v, Unknown) else f"{k}={_fmt_rational(v)}"
            for k, v in self.named().items()
        )
        return f"{self.family}:{body}"

    def __str__(self):
        return self.label()


def _float_to_fraction(v) -> Fraction:
    return Fraction(float(v))


def _fmt_rational(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    # show terminating decimals as decimals
    d = v.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        text = f"{float(v)!r}"
        if Fraction(text) == v:
            return text
    return f"{v.numerator}/{v.denominator}"


def gaussian(mu=0, sigma2=1) -> FamilySpec:
    return FamilySpec("gaussian", (mu, sigma2))


def gamma(shape, scale=1) -> FamilySpec:
    return FamilySpec("gamma", (shape, scale))


def exponential(theta=1) -> FamilySpec:
    return FamilySpec("exponential", (theta,))


def uniform(a=0, b=1) -> FamilySpec:
    return FamilySpec("uniform", (a, b))


def student_t(nu) -> FamilySpec:
    return FamilySpec("studentt", (nu,))


def poisson(rate) -> FamilySpec:
    return FamilySpec("poisson", (rate,))


# --------------------------------------------------------------------------
# Moments
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentVector:
    """Raw moments m_1..m_M (m_0 = 1 is implicit)."""

    values: tuple

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("a moment vector needs at least one moment")
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def order(self) -> int:
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def moment(self, k: int):
        """m_k with the 1-based convention; m_0 = 1."""
        if k == 0:
            return Fraction(1) if self.is_exact() else 1.0
        return self.values[k - 1]

    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.values)

    def variance_nonnegative(self) -> bool:
        return self.order < 2 or self.values[1] >= self.values[0] ** 2

    def truncate(self, order: int) -> MomentVector:
        if order > self.order:
            raise InsufficientMoments(f"need {order} moments, have {self.order}")
        return MomentVector(self.values[:order])

    def as_floats(self) -> list[float]:
        return [float(v) for v in self.values]


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@lru_cache(maxsize=None)
def _stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def _require_fixed(spec: FamilySpec) -> dict[str, Fraction]:
    if not spec.is_fixed():
        raise InvalidParameter(f"{spec.label()} has unknown parameters {spec.unknowns()}")
    return spec.named()


def raw_moments(spec: FamilySpec, order: int) -> MomentVector:
    """Exact raw moments m_1..m_order of a fully fixed family."""
    if order < 1:
        raise ValueError("order must be at least 1")
    p = _require_fixed(spec)
    fam = spec.family
    out = []
    for n in range(1, order + 1):
        if fam == "gaussian":
            mu, s2 = p["mu"], p["sigma2"]
            # E[(mu + sigma Z)^n], E[Z^k] = (k-1)!! for even k
            m = sum(
                math.comb(n, k) * mu ** (n - k) * s2 ** (k // 2) * _double_factorial(k - 1)
                for k in range(0, n + 1, 2)
            )
        elif fam == "gamma":
            m = p["scale"] ** n * math.prod(p["shape"] + i for i in range(n))
        elif fam == "exponential":
            m = math.factorial(n) * p["theta"] ** n
        elif fam == "uniform":
            a, b = p["a"], p["b"]
            m = (b ** (n + 1) - a ** (n + 1)) / ((n + 1) * (b - a))
        elif fam == "studentt":
            nu = p["nu"]
            if nu <= order:
                raise MomentNotFinite(f"Student t with nu={nu} has no finite moment of order {order}")
            if n % 2:
                m = Fraction(0)
            else:
                k = n // 2
                m = nu ** k * math.prod(Fraction(2 * i - 1) / (nu - 2 * i) for i in range(1, k + 1))
        elif fam == "poisson":
            r = p["rate"]
            m = sum(_stirling2(n, k) * r ** k for k in range(n + 1))
        else:  # pragma: no cover - guarded by FamilySpec
            raise UnknownFamily(fam)
        out.append(Fraction(m))
    return MomentVector(tuple(out))


def symbolic_raw_moments(spec: FamilySpec, order: int, ring: Sequence[str] | None = None) -> list[MultiPoly]:
    """Raw moments as polynomials in the family's unknown parameters.

    By default the ring is the family's own unknowns; pass ``ring`` to build the
    polynomials directly in a larger ring.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if ring is None:
        ring = tuple(spec.unknowns())
    ring = tuple(ring)

    def param(name):
        v = spec.named()[name]
        if isinstance(v, Unknown):
            return MultiPoly.variable(ring, v.name)
        return MultiPoly.constant(ring, v)

    one = MultiPoly.constant(ring, 1)
    fam = spec.family
    out: list[MultiPoly] = []
    if fam == "gaussian":
        mu, s2 = param("mu"), param("sigma2")
        prev2, prev = None, one
        for n in range(1, order + 1):
            # m_n = mu m_{n-1} + (n-1) sigma2 m_{n-2}
            cur = mu * prev
            if prev2 is not None:
                cur = cur + s2 * prev2 * (n - 1)
            out.append(cur)
            prev2, prev = prev, cur
    elif fam == "gamma":
        shape, scale = param("shape"), param("scale")
        acc = one
        for n in range(1, order + 1):
            acc = acc * (shape + (n - 1)) * scale
            out.append(acc)
    elif fam == "exponential":
        theta = param("theta")
        acc = one
        for n in range(1, order + 1):
            acc = acc * theta * n
            out.append(acc)
    elif fam == "uniform":
        a, b = param("a"), param("b")
        for n in range(1, order + 1):
            s = MultiPoly(ring)
            for i in range(n + 1):
                s = s + a ** i * b ** (n - i)
            out.append(s.scale(Fraction(1, n + 1)))
    elif fam == "poisson":
        rate = param("rate")
        # Touchard polynomials in a private variable r: T_{n+1}(r) = r (T_n(r) + T_n'(r))
        touchard = [Fraction(1)]
        for n in range(1, order + 1):
            deriv = [k * c for k, c in enumerate(touchard)][1:]
            summed = [c + (deriv[k] if k < len(deriv) else 0) for k, c in enumerate(touchard)]
            touchard = [Fraction(0)] + summed
            poly = MultiPoly(ring)
            for k, c in enumerate(touchard):
                if c:
                    poly = poly + rate ** k * c
            out.append(poly)
    elif fam == "studentt":
        exact = raw_moments(spec, order)
        out = [MultiPoly.constant(ring, m) for m in exact]
    else:  # pragma: no cover
        raise UnknownFamily(fam)
    return out


def empirical_raw_moments(sample: Iterable, order: int) -> MomentVector:
    """Sample raw moments m_k = mean(x^k).

    Exact (Fraction) when every value is an int or Fraction, floats otherwise.
    """
    xs = list(sample)
    if not xs:
        raise EmptySample("sample is empty")
    if order < 1:
        raise ValueError("order must be at least 1")
    n = len(xs)
    if all(isinstance(x, (int, Fraction)) for x in xs):
        fr = [Fraction(x) for x in xs]
        den = math.lcm(*(f.denominator for f in fr))
        ints = [f.numerator * (den // f.denominator) for f in fr]
        out = []
        powers = [1] * n
        for k in range(1, order + 1):
            powers = [p * x for p, x in zip(powers, ints)]
            out.append(Fraction(sum(powers), n * den ** k))
        return MomentVector(tuple(out))
    fl = [float(x) for x in xs]
    out = []
    powers = [1.0] * n
    for k in range(1, order + 1):
        powers = [p * x for p, x in zip(powers, fl)]
        out.append(math.fsum(powers) / n)
    return MomentVector(tuple(out))


# --------------------------------------------------------------------------
# Gram-Charlier coefficients
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Standardization:
    """Affine frame z = (x - location) / scale, with scale = sqrt(scale_sq).

    Storing the squared scale keeps an irrational standard deviation exact.
    """

    location: Fraction
    scale_sq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "location", as_rational(self.location))
        object.__setattr__(self, "scale_sq", as_rational(self.scale_sq))
        if self.scale_sq <= 0:
            raise InvalidParameter("standardization scale must be positive")

    @classmethod
    def from_scale(cls, location, scale) -> Standardization:
        s = as_rational(scale)
        if s <= 0:
            raise InvalidParameter("standardization scale must be positive")
        return cls(location, s * s)

    @classmethod
    def of_moments(cls, moments: MomentVector) -> Standardization:
        """The distribution's own mean and standard deviation."""
        if moments.order < 2:
            raise InsufficientMoments("need two moments to standardize")
        m1, m2 = as_rational(moments[0]), as_rational(moments[1])
        return cls(m1, m2 - m1 * m1)

    @property
    def scale(self) -> float:
        return math.sqrt(self.scale_sq)

    def rational_scale(self) -> Fraction | None:
        num, den = self.scale_sq.numerator, self.scale_sq.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn == num and rd * rd == den:
            return Fraction(rn, rd)
        return None


def _central_moments(moments: MomentVector, a: Fraction, order: int) -> list[Fraction]:
    """E[(X - a)^k] for k = 0..order via the binomial theorem."""
    m = [Fraction(1)] + [as_rational(v) for v in moments.values[:order]]
    return [
        sum(math.comb(k, i) * m[i] * (-a) ** (k - i) for i in range(k + 1))
        for k in range(order + 1)
    ]


def gram_charlier_coeffs(moments: MomentVector, std: Standardization, order: int) -> HermiteCoeffs:
    """c_n = E[He_n((X - a)/b)] / n! for n = 0..order, from raw moments.

    He_n has the parity of n, so c_n is a rational multiple of b^-(n mod 2);
    the odd factor is folded in when b is rational and kept as the ``radical``
    otherwise.
    """
    if moments.order < order:
        raise InsufficientMoments(f"need {order} moments, have {moments.order}")
    mu = _central_moments(moments, std.location, order)
    b2 = std.scale_sq
    coeffs = []
    for n in range(order + 1):
        h = he_monomial_coeffs(n)
        parity = n % 2
        total = Fraction(0)
        for k in range(parity, n + 1, 2):
            if h[k]:
                # b^-k = b^-parity * (b^2)^-((k - parity) / 2)
                total += h[k] * mu[k] / b2 ** ((k - parity) // 2)
        coeffs.append(total / math.factorial(n))
    s = std.rational_scale()
    if s is not None:
        coeffs = [c / s if n % 2 else c for n, c in enumerate(coeffs)]
        return HermiteCoeffs(tuple(coeffs))
    return HermiteCoeffs(tuple(coeffs), radical=b2)


# --------------------------------------------------------------------------
# CDFs
# --------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _poisson_cdf(rate: float, k: int) -> float:
    if k < 0:
        return 0.0
    log_r = math.log(rate)
    total = 0.0
    for j in range(k + 1):
        total += math.exp(-rate + j * log_r - math.lgamma(j + 1))
    return min(1.0, total)


def family_cdf(spec: FamilySpec, x: float) -> float:
    """F(x) for a fully fixed family."""
    p = {k: float(v) for k, v in _require_fixed(spec).items()}
    fam = spec.family
    x = float(x)
    if fam == "gaussian":
        return specfun.normal_cdf((x - p["mu"]) / math.sqrt(p["sigma2"]))
    if fam == "gamma":
        return specfun.gammainc_lower(p["shape"], x / p["scale"])
    if fam == "exponential":
        return specfun.gammainc_lower(1.0, x / p["theta"])
    if fam == "uniform":
        a, b = p["a"], p["b"]
        if x <= a:
            return 0.0
        if x >= b:
            return 1.0
        return (x - a) / (b - a)
    if fam == "studentt":
        nu = p["nu"]
        tail = 0.5 * specfun.betainc(nu / 2.0, 0.5, nu / (nu + x * x))
        return 1.0 - tail if x > 0 else tail
    if fam == "poisson":
        return _poisson_cdf(p["rate"], math.floor(x))
    raise UnknownFamily(fam)  # pragma: no cover


def family_cdf_many(spec: FamilySpec, xs: Sequence[float]) -> list[float]:
    return [family_cdf(spec, x) for x in xs]
