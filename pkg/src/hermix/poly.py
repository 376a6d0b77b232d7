"""Exact multivariate polynomials over Q, Groebner bases, and standard monomials.

Polynomials are immutable ``MultiPoly`` values: a ring (ordered variable
names) plus a dict from exponent tuples to nonzero ``Fraction`` coefficients.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping, Sequence

from .errors import NotZeroDimensional, ParseError, RingMismatch

Monomial = tuple  # tuple[int, ...], one exponent per ring variable


# --------------------------------------------------------------------------
# Monomial orders
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialOrder:
    """A term order; ``key(m1) < key(m2)`` iff m1 precedes m2.

    Variable priority follows the ring's variable order.
    """

    name: str
    key: Callable[[Monomial], tuple]

    def __repr__(self):
        return self.name


def _lex_key(m):
    return m


def _degrevlex_key(m):
    return (sum(m), tuple(-e for e in reversed(m)))


lex = MonomialOrder("lex", _lex_key)
degrevlex = MonomialOrder("degrevlex", _degrevlex_key)

ORDERS = {"lex": lex, "degrevlex": degrevlex}


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


# --------------------------------------------------------------------------
# Polynomials
# --------------------------------------------------------------------------


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, float):
        # exact binary value; callers wanting decimal semantics pass strings
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class MultiPoly:
    """Exact-rational polynomial in a fixed ring of named variables."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        ring = tuple(ring)
        clean = {}
        n = len(ring)
        for mono, coeff in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != n:
                raise RingMismatch(f"monomial {mono} does not match ring {ring}")
            c = _to_fraction(coeff)
            if c:
                clean[mono] = clean.get(mono, 0) + c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", {m: c for m, c in clean.items() if c})

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    @classmethod
    def _raw(cls, ring, terms):
        # trusted constructor: terms already clean
        obj = object.__new__(cls)
        object.__setattr__(obj, "ring", ring)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def constant(cls, ring: Sequence[str], c=1) -> MultiPoly:
        ring = tuple(ring)
        return cls(ring, {(0,) * len(ring): c})

    @classmethod
    def variable(cls, ring: Sequence[str], name: str) -> MultiPoly:
        ring = tuple(ring)
        mono = tuple(1 if v == name else 0 for v in ring)
        if name not in ring:
            raise RingMismatch(f"{name!r} is not a variable of {ring}")
        return cls(ring, {mono: 1})

    @classmethod
    def gens(cls, ring: Sequence[str]) -> list[MultiPoly]:
        return [cls.variable(ring, v) for v in ring]

    # -- basic queries ------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.ring)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = self.ring.index(var)
        return max((m[i] for m in self.terms), default=-1)

    def variables(self) -> list[str]:
        """Variables that actually occur."""
        return [v for i, v in enumerate(self.ring) if any(m[i] for m in self.terms)]

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def coeff(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def sorted_terms(self, order: MonomialOrder = None) -> list[tuple[Monomial, Fraction]]:
        order = order or degrevlex
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=order.key)

    def leading_coeff(self, order: MonomialOrder) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder) -> MultiPoly:
        if not self.terms:
            return self
        lc = self.leading_coeff(order)
        return MultiPoly._raw(self.ring, {m: c / lc for m, c in self.terms.items()})

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: MultiPoly) -> None:
        if self.ring != other.ring:
            raise RingMismatch(f"ring {self.ring} does not match {other.ring}")

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.ring, _to_fraction(other))

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return MultiPoly._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> MultiPoly:
        c = _to_fraction(c)
        if not c:
            return MultiPoly._raw(self.ring, {})
        return MultiPoly._raw(self.ring, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c) -> MultiPoly:
        if not c:
            return MultiPoly._raw(self.ring, {})
        return MultiPoly._raw(
            self.ring, {monomial_mul(m, mono): v * c for m, v in self.terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return MultiPoly._raw(self.ring, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = MultiPoly.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            c = _to_fraction(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({(0,) * self.nvars: c} if c else {})

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- evaluation and change of ring ---------------------------------------

    def evaluate(self, point: Sequence) -> complex | float:
        """Evaluate at a numeric point (floats or complex), one value per variable."""
        if len(point) != self.nvars:
            raise RingMismatch(f"point has {len(point)} coordinates, ring has {self.nvars}")
        total = 0
        for m, c in self.terms.items():
            t = float(c)
            for x, e in zip(point, m):
                if e:
                    t = t * x**e
            total += t
        return total

    def substitute(self, values: Mapping[str, object]) -> MultiPoly:
        """Exact substitution of rational values for some variables.

        The ring is kept; substituted variables simply no longer occur.
        """
        idx = {self.ring.index(k): _to_fraction(v) for k, v in values.items()}
        out = MultiPoly._raw(self.ring, {})
        for m, c in self.terms.items():
            coeff = c
            mono = list(m)
            for i, v in idx.items():
                coeff *= v ** mono[i]
                mono[i] = 0
            out = out + MultiPoly._raw(self.ring, {tuple(mono): coeff} if coeff else {})
        return out

    def to_ring(self, ring: Sequence[str]) -> MultiPoly:
        """Embed into a ring containing every variable that occurs."""
        ring = tuple(ring)
        pos = []
        for i, v in enumerate(self.ring):
            if v in ring:
                pos.append((i, ring.index(v)))
            elif any(m[i] for m in self.terms):
                raise RingMismatch(f"variable {v!r} occurs but is missing from {ring}")
        terms = {}
        for m, c in self.terms.items():
            new = [0] * len(ring)
            for i, j in pos:
                new[j] = m[i]
            terms[tuple(new)] = c
        return MultiPoly._raw(ring, terms)

    def linear_part(self) -> tuple[list[Fraction], Fraction]:
        """Coefficients (per variable) and constant of a polynomial of degree <= 1."""
        if self.total_degree() > 1:
            raise ValueError("polynomial is not linear")
        coeffs = []
        for i in range(self.nvars):
            mono = tuple(1 if j == i else 0 for j in range(self.nvars))
            coeffs.append(self.terms.get(mono, Fraction(0)))
        return coeffs, self.constant_term()

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        return format_poly(self)


def format_poly(f: MultiPoly, order: MonomialOrder = None) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for mono, c in f.sorted_terms(order):
        factors = []
        for v, e in zip(f.ring, mono):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = f"{mag}*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# --------------------------------------------------------------------------
# Division and Groebner bases
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis: monic elements sorted by decreasing leading monomial."""

    elements: tuple[MultiPoly, ...]
    order: MonomialOrder = degrevlex

    @property
    def ring(self) -> tuple[str, ...]:
        return self.elements[0].ring

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial(self.order) for g in self.elements]

    def is_unit(self) -> bool:
        """True when the ideal is the whole ring (no solutions)."""
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def _reduce(f: MultiPoly, divisors: Sequence[tuple[Monomial, Fraction, MultiPoly]], order) -> MultiPoly:
    """Full multivariate division remainder of f by (lm, lc, g) triples."""
    ring = f.ring
    work = dict(f.terms)
    rem = {}
    key = order.key
    while work:
        lm = max(work, key=key)
        lc = work[lm]
        for glm, glc, g in divisors:
            if monomial_divides(glm, lm):
                q_mono = monomial_div(lm, glm)
                q = lc / glc
                for m, c in g.terms.items():
                    mm = monomial_mul(m, q_mono)
                    s = work.get(mm, 0) - q * c
                    if s:
                        work[mm] = s
                    else:
                        work.pop(mm, None)
                break
        else:
            rem[lm] = lc
            del work[lm]
    return MultiPoly._raw(ring, rem)


def _divisors(polys: Iterable[MultiPoly], order):
    out = []
    for g in polys:
        if not g.is_zero():
            lm = g.leading_monomial(order)
            out.append((lm, g.terms[lm], g))
    return out


def normal_form(f: MultiPoly, G: GroebnerBasis | Sequence[MultiPoly], order: MonomialOrder = None) -> MultiPoly:
    """Remainder of f on division by G; no term is divisible by a leading term of G."""
    if isinstance(G, GroebnerBasis):
        order = order or G.order
        elements = G.elements
    else:
        order = order or degrevlex
        elements = tuple(G)
    for g in elements:
        if g.ring != f.ring:
            raise RingMismatch(f"ring {f.ring} does not match basis ring {g.ring}")
    return _reduce(f, _divisors(elements, order), order)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    lf, lg = f.leading_monomial(order), g.leading_monomial(order)
    lcm = monomial_lcm(lf, lg)
    a = f.mul_term(monomial_div(lcm, lf), 1 / f.terms[lf])
    b = g.mul_term(monomial_div(lcm, lg), 1 / g.terms[lg])
    return a - b


def buchberger(generators: Sequence[MultiPoly], order: MonomialOrder = degrevlex) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``generators``.

    Pairs are processed by the normal strategy (smallest lcm first).  Pairs
    with coprime leading monomials and pairs covered by the chain criterion
    are skipped.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not generators:
        raise ValueError("buchberger needs at least one generator")
    ring = generators[0].ring
    for g in generators:
        if g.ring != ring:
            raise RingMismatch(f"generator ring {g.ring} does not match {ring}")
    if not gens:
        return GroebnerBasis((MultiPoly(ring),), order)

    key = order.key
    basis: list[MultiPoly] = []
    lms: list[Monomial] = []

    def add(h: MultiPoly):
        h = h.monic(order)
        basis.append(h)
        lms.append(h.leading_monomial(order))

    # inter-reduce the input first; cheap and shrinks the pair set
    for g in sorted(gens, key=lambda p: key(p.leading_monomial(order))):
        h = _reduce(g, _divisors(basis, order), order)
        if not h.is_zero():
            add(h)

    pairs = {(i, j) for j in range(len(basis)) for i in range(j)}

    def lcm_of(p):
        return monomial_lcm(lms[p[0]], lms[p[1]])

    while pairs:
        pair = min(pairs, key=lambda p: (sum(lcm_of(p)), key(lcm_of(p)), p))
        pairs.remove(pair)
        i, j = pair
        lcm = lcm_of(pair)
        if monomial_mul(lms[i], lms[j]) == lcm:
            continue
        chain = False
        for k in range(len(basis)):
            if k in (i, j) or not monomial_divides(lms[k], lcm):
                continue
            ik = (min(i, k), max(i, k))
            jk = (min(j, k), max(j, k))
            if ik not in pairs and jk not in pairs:
                chain = True
                break
        if chain:
            continue
        h = _reduce(s_polynomial(basis[i], basis[j], order), _divisors(basis, order), order)
        if h.is_zero():
            continue
        if h.is_constant():
            return GroebnerBasis((MultiPoly.constant(ring, 1),), order)
        add(h)
        n = len(basis) - 1
        pairs.update((k, n) for k in range(n))

    return GroebnerBasis(tuple(_interreduce(basis, order)), order)


def _interreduce(basis: list[MultiPoly], order: MonomialOrder) -> list[MultiPoly]:
    lms = [g.leading_monomial(order) for g in basis]
    keep = []
    for i, g in enumerate(basis):
        redundant = False
        for j, m in enumerate(lms):
            if j == i or not monomial_divides(m, lms[i]):
                continue
            # equal leading monomials: keep the first occurrence
            if m != lms[i] or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(g)
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        lm = g.leading_monomial(order)
        tail = MultiPoly._raw(g.ring, {m: c for m, c in g.terms.items() if m != lm})
        tail = _reduce(tail, _divisors(others, order), order)
        reduced.append((MultiPoly._raw(g.ring, {lm: g.terms[lm]}) + tail).monic(order))
    reduced.sort(key=lambda p: order.key(p.leading_monomial(order)), reverse=True)
    return reduced


def is_groebner(G: GroebnerBasis) -> bool:
    """Check that every S-polynomial of a pair reduces to zero."""
    elements = G.elements
    divs = _divisors(elements, G.order)
    for a, b in itertools.combinations(elements, 2):
        if not _reduce(s_polynomial(a, b, G.order), divs, G.order).is_zero():
            return False
    return True


def is_reduced(G: GroebnerBasis) -> bool:
    lms = G.leading_monomials()
    for i, g in enumerate(G.elements):
        if g.leading_coeff(G.order) != 1:
            return False
        for j, lm in enumerate(lms):
            if i != j and any(monomial_divides(lm, m) for m in g.terms):
                return False
    return True


# --------------------------------------------------------------------------
# Standard monomials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientBasis:
    """Standard monomials of a zero-dimensional ideal, increasing in the order."""

    monomials: tuple[Monomial, ...]
    ring: tuple[str, ...]

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def index(self, mono: Monomial) -> int:
        return self.monomials.index(tuple(mono))

    def __contains__(self, mono) -> bool:
        return tuple(mono) in self.monomials

    def as_polys(self) -> list[MultiPoly]:
        return [MultiPoly._raw(self.ring, {m: Fraction(1)}) for m in self.monomials]

    def labels(self) -> list[str]:
        return [format_poly(p) for p in self.as_polys()]


def quotient_basis(G: GroebnerBasis) -> QuotientBasis:
    """Monomials not divisible by any leading term of G.

    Raises ``NotZeroDimensional`` when some variable has no pure power among
    the leading terms.  The unit ideal gives an empty basis.
    """
    ring = G.ring
    n = len(ring)
    lms = G.leading_monomials()
    if G.is_unit():
        return QuotientBasis((), ring)
    bounds = []
    free = []
    for i in range(n):
        pure = [m[i] for m in lms if m[i] > 0 and all(e == 0 for j, e in enumerate(m) if j != i)]
        if not pure:
            free.append(ring[i])
        else:
            bounds.append(min(pure))
    if free:
        raise NotZeroDimensional(free)
    monos = [
        m
        for m in itertools.product(*(range(b) for b in bounds))
        if not any(monomial_divides(lm, m) for lm in lms)
    ]
    monos.sort(key=G.order.key)
    return QuotientBasis(tuple(monos), ring)


# --------------------------------------------------------------------------
# Text grammar:  x^2 + 3/2*x*y - 0.5
# --------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^/()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0
        self.polys = {}

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    # The parser builds polynomials over a growing variable list; each node is
    # a dict of {exponent-dict-as-frozenset: Fraction}.
    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = _padd(node, rhs if op == "+" else _pscale(rhs, -1))
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] == "*":
            self.take()
            node = _pmul(node, self.unary())
        kind, val, pos = self.peek()
        if kind in ("num", "ident") or val == "(":
            raise ParseError("implicit multiplication is not allowed; use '*'", pos)
        return node

    def unary(self):
        if self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = self.unary()
            return node if op == "+" else _pscale(node, -1)
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or not val.isdigit():
                raise ParseError("exponent must be a nonnegative integer", pos)
            k = int(val)
            out = {frozenset(): Fraction(1)}
            for _ in range(k):
                out = _pmul(out, node)
            node = out
        return node

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            value = Fraction(val)
            if self.peek()[1] == "/":
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "num":
                    raise ParseError("division is only allowed between numeric literals", p2)
                den = Fraction(v2)
                if den == 0:
                    raise ParseError("division by zero", p2)
                value = value / den
            return {frozenset(): value} if value else {}
        if kind == "ident":
            return {frozenset({(val, 1)}): Fraction(1)}
        if val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def _padd(a, b):
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _pscale(a, k):
    return {m: c * k for m, c in a.items()}


def _pmul(a, b):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            exps = dict(m1)
            for v, e in m2:
                exps[v] = exps.get(v, 0) + e
            m = frozenset(exps.items())
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _variables_in_order(text: str) -> list[str]:
    seen = []
    for kind, val, _ in _tokenize(text):
        if kind == "ident" and val not in seen:
            seen.append(val)
    return seen


def parse_polys(texts: Sequence[str], ring: Sequence[str] | None = None) -> list[MultiPoly]:
    """Parse polynomial texts into a shared ring.

    Without an explicit ring, variables are ordered by first appearance.
    """
    if ring is None:
        ring = []
        for t in texts:
            for v in _variables_in_order(t):
                if v not in ring:
                    ring.append(v)
    ring = tuple(ring)
    out = []
    for t in texts:
        node = _Parser(t).parse()
        terms = {}
        for m, c in node.items():
            exps = dict(m)
            missing = set(exps) - set(ring)
            if missing:
                raise ParseError(f"variable {sorted(missing)[0]!r} not in ring {ring}")
            terms[tuple(exps.get(v, 0) for v in ring)] = c
        out.append(MultiPoly(ring, terms))
    return out


def parse_poly(text: str, ring: Sequence[str] | None = None) -> MultiPoly:
    return parse_polys([text], ring)[0]
