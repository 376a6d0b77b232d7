"""Numeric points of a zero-dimensional ideal via multiplication matrices.

For a reduced Groebner basis G with standard monomials beta, multiplication by
f on Q[x]/I is a linear map; its matrix M_f (column j = coordinates of the
normal form of f * beta_j) has eigenvalues f(v) for the points v of V(I).  The
row vector (beta_1(v), ..., beta_D(v)) is a left eigenvector of every M_f, so
one eigendecomposition of a generic linear form yields all coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BasisMismatch, NoConvergence, NotMonic, NotUnivariate, SeparationFailure
from .poly import GroebnerBasis, MultiPoly, QuotientBasis, buchberger, normal_form, quotient_basis

REAL_TOL = 1e-8
CLUSTER_TOL = 1e-6
BACKWARD_TOL = 1e-8
MAX_RETRIES = 5


@dataclass(frozen=True)
class MultiplicationMatrix:
    f: MultiPoly
    basis: QuotientBasis
    entries: np.ndarray
    exact: tuple = field(repr=False, default=())

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class VarietyPoint:
    coordinates: tuple[complex, ...]
    residual: float
    is_real: bool
    multiplicity: int = 1

    def real_coordinates(self) -> tuple[float, ...]:
        return tuple(float(z.real) for z in self.coordinates)


def companion_matrix(p: MultiPoly) -> np.ndarray:
    """Multiplication-by-x matrix of a monic univariate p on {1, x, ..., x^(d-1)}."""
    occurring = p.variables()
    if len(occurring) > 1 or (p.nvars != 1 and occurring == []):
        raise NotUnivariate(f"{p} is not univariate")
    i = p.ring.index(occurring[0]) if occurring else 0
    d = max((m[i] for m in p.terms), default=0)
    if d < 1:
        raise NotMonic(f"{p} has degree < 1")
    coeffs = [Fraction(0)] * (d + 1)
    for m, c in p.terms.items():
        coeffs[m[i]] = c
    if coeffs[d] != 1:
        raise NotMonic(f"{p} is not monic (leading coefficient {coeffs[d]})")
    C = np.zeros((d, d))
    C[1:, :-1] = np.eye(d - 1)
    # x * x^(d-1) = x^d = -(c_0 + c_1 x + ... + c_{d-1} x^(d-1)) mod p
    C[:, -1] = [-float(c) for c in coeffs[:d]]
    return C


def multiplication_matrix(f: MultiPoly, G: GroebnerBasis, beta: QuotientBasis) -> MultiplicationMatrix:
    """Matrix of p -> f p on Q[x]/I in the basis beta, exact until the final float conversion."""
    if f.ring != G.ring or beta.ring != G.ring:
        raise BasisMismatch("polynomial, basis and Groebner basis must share a ring")
    expected = quotient_basis(G)
    if expected.monomials != beta.monomials:
        raise BasisMismatch("beta is not the standard-monomial basis of G")
    D = len(beta)
    exact = [[Fraction(0)] * D for _ in range(D)]
    position = {m: i for i, m in enumerate(beta.monomials)}
    for j, b in enumerate(beta.as_polys()):
        r = normal_form(f * b, G)
        for m, c in r.terms.items():
            exact[position[m]][j] = c
    entries = np.array([[float(c) for c in row] for row in exact], dtype=float).reshape(D, D)
    return MultiplicationMatrix(f, beta, entries, tuple(tuple(r) for r in exact))


def eig(matrix) -> list[tuple[complex, np.ndarray]]:
    """Eigenpairs of a dense real matrix (LAPACK geev: balance, Hessenberg, shifted QR)."""
    A = np.asarray(matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("eig needs a square matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if A.size == 0:
        return []
    try:
        values, vectors = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    norm = max(np.linalg.norm(A, 2), 1e-300)
    pairs = []
    for k in range(len(values)):
        lam, v = complex(values[k]), vectors[:, k].astype(complex)
        err = np.linalg.norm(A @ v - lam * v) / norm
        if err > BACKWARD_TOL:
            raise NoConvergence(f"eigenpair {k} has backward error {err:.3g}")
        pairs.append((lam, v))
    return pairs


def eigenvalues(matrix) -> list[complex]:
    return [lam for lam, _ in eig(matrix)]


def _is_real(coords, tol) -> bool:
    return all(abs(z.imag) <= tol * max(1.0, abs(z)) for z in coords)


def point_residual(generators: Sequence[MultiPoly], coords) -> float:
    return max((abs(g.evaluate(list(coords))) for g in generators), default=0.0)


def _random_form(ring, rng: random.Random) -> MultiPoly:
    terms = {}
    for i in range(len(ring)):
        mono = tuple(1 if j == i else 0 for j in range(len(ring)))
        # small nonzero rationals in [-1, 1]
        num = rng.choice([k for k in range(-16, 17) if k])
        terms[mono] = Fraction(num, 16)
    return MultiPoly(ring, terms)


def _read_points(G, beta, f, var_matrices):
    """Left eigenvectors of M_f, normalized at the monomial 1, read as points."""
    ring = G.ring
    n = len(ring)
    Mf = multiplication_matrix(f, G, beta).entries
    pairs = eig(Mf.T)
    one = beta.index((0,) * n)
    unit_index = {}
    for i in range(n):
        mono = tuple(1 if j == i else 0 for j in range(n))
        if mono in beta:
            unit_index[i] = beta.index(mono)
    raw = []
    for lam, u in pairs:
        scale = u[one]
        if abs(scale) < 1e-10 * max(np.max(np.abs(u)), 1e-300):
            raise SeparationFailure("eigenvector vanishes at the monomial 1")
        u = u / scale
        coords = []
        for i in range(n):
            if i in unit_index:
                coords.append(complex(u[unit_index[i]]))
            else:
                # shared-eigenvector pairing: u M_xi = xi(v) u
                w = u @ var_matrices[i]
                k = int(np.argmax(np.abs(u)))
                coords.append(complex(w[k] / u[k]))
        raw.append((lam, tuple(coords)))
    return raw


def _cluster(raw, tol):
    """Group eigenpairs whose eigenvalues agree within tol."""
    groups: list[list] = []
    for lam, coords in sorted(raw, key=lambda t: (t[0].real, t[0].imag)):
        for g in groups:
            if abs(g[0][0] - lam) <= tol * max(1.0, abs(lam)):
                g.append((lam, coords))
                break
        else:
            groups.append([(lam, coords)])
    return groups


def solve_variety(G: GroebnerBasis, beta: QuotientBasis | None = None, seed: int = 0,
                  real_tol: float = REAL_TOL) -> list[VarietyPoint]:
    """Points of V_C(I) with multiplicities, read from one random linear form.

    A form that does not separate points shows up as an eigenvalue cluster
    whose normalized eigenvectors disagree; a fresh form is drawn (up to five
    times) before giving up.
    """
    if beta is None:
        beta = quotient_basis(G)
    if G.is_unit() or len(beta) == 0:
        return []
    ring = G.ring
    n = len(ring)
    var_matrices = {}
    for i in range(n):
        mono = tuple(1 if j == i else 0 for j in range(n))
        if mono not in beta:
            var_matrices[i] = multiplication_matrix(MultiPoly.variable(ring, ring[i]), G, beta).entries
    rng = random.Random(seed)
    last_error = None
    for _attempt in range(MAX_RETRIES):
        f = _random_form(ring, rng)
        try:
            raw = _read_points(G, beta, f, var_matrices)
        except SeparationFailure as exc:
            last_error = exc
            continue
        points = []
        separated = True
        for group in _cluster(raw, CLUSTER_TOL):
            coords = [np.array(c) for _, c in group]
            spread = max(np.max(np.abs(c - coords[0])) for c in coords)
            size = max(1.0, max(np.max(np.abs(c)) for c in coords))
            if spread > 1e-4 * size:
                separated = False
                break
            mean = tuple(complex(z) for z in np.mean(coords, axis=0))
            points.append(
                VarietyPoint(
                    coordinates=mean,
                    residual=point_residual(G.elements, mean),
                    is_real=_is_real(mean, real_tol),
                    multiplicity=len(group),
                )
            )
        if separated:
            return points
        last_error = SeparationFailure("linear form does not separate the points")
    raise SeparationFailure(f"no separating linear form after {MAX_RETRIES} attempts: {last_error}")


def filter_real(points: Sequence[VarietyPoint], tol: float = REAL_TOL,
                generators: Sequence[MultiPoly] | None = None) -> list[VarietyPoint]:
    """Keep points whose imaginary parts are within tol; zero those parts.

    Residuals are recomputed at the projected point against ``generators``
    when given.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    out = []
    for p in points:
        if not _is_real(p.coordinates, tol):
            continue
        coords = tuple(complex(z.real, 0.0) for z in p.coordinates)
        residual = point_residual(generators, coords) if generators is not None else p.residual
        out.append(replace(p, coordinates=coords, residual=residual, is_real=True))
    return out


def solve_system(polys: Sequence[MultiPoly], seed: int = 0, real_tol: float = REAL_TOL):
    """Groebner basis, standard monomials and points for a polynomial system."""
    G = buchberger(polys)
    beta = quotient_basis(G)
    points = solve_variety(G, beta, seed, real_tol)
    points = [replace(p, residual=point_residual(polys, p.coordinates)) for p in points]
    return G, beta, points


__all__ = [
    "MultiplicationMatrix",
    "VarietyPoint",
    "companion_matrix",
    "multiplication_matrix",
    "eig",
    "eigenvalues",
    "solve_variety",
    "filter_real",
    "solve_system",
]
