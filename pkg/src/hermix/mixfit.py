"""Moment matching for mixtures whose components come from different families.

A mixture F = sum_j w_j F_j has raw moments sum_j w_j m_n(F_j).  Matching the
first M of them against target moments gives M polynomial equations in the
free weights (the last weight is 1 minus the others) and any unknown family
parameters.  Pure-weight systems are linear and solved exactly; systems with
unknown parameters go through Groebner basis -> multiplication matrices ->
eigenvectors.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import eigensolve
from .errors import (
    EmptySample,
    HermixError,
    InfeasibleWeights,
    InsufficientMoments,
    InvalidParameter,
    MomentNotFinite,
    Overdetermined,
    RankDeficient,
    Underdetermined,
)
from .moments import (
    FamilySpec,
    MomentVector,
    Standardization,
    as_rational,
    empirical_raw_moments,
    family_cdf,
    gram_charlier_coeffs,
    raw_moments,
    symbolic_raw_moments,
)
from .poly import MultiPoly, buchberger, degrevlex, quotient_basis

SIMPLEX_TOL = 1e-8
TARGET_DENOMINATOR = 10**12
MAX_POOL = 12


def rationalize(value) -> Fraction:
    """Exact target value; anything finer than 1e-12 is rounded to that grid."""
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidParameter(f"non-finite target moment {value}")
        value = Fraction(value)
    value = as_rational(value)
    if value.denominator <= TARGET_DENOMINATOR:
        return value
    return Fraction(round(value * TARGET_DENOMINATOR), TARGET_DENOMINATOR)


def moment_covariance(moments: MomentVector, order: int) -> tuple[tuple, ...]:
    """Cov(X^i, X^j) = m_{i+j} - m_i m_j for i, j = 1..order; needs 2*order moments."""
    if moments.order < 2 * order:
        raise InsufficientMoments(f"need {2 * order} moments for the covariance, have {moments.order}")
    m = moments.moment
    return tuple(tuple(m(i + j) - m(i) * m(j) for j in range(1, order + 1)) for i in range(1, order + 1))


# --------------------------------------------------------------------------
# Problem
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MixtureProblem:
    """Components, target moments and the number of moments to match.

    ``match_order`` defaults to the number of unknowns (free weights plus
    unknown family parameters), and at least 1.
    """

    components: tuple[FamilySpec, ...]
    target: MomentVector
    match_order: int | None = None
    weight_names: tuple[str, ...] | None = None
    std: Standardization | None = None
    moment_cov: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise InvalidParameter("a mixture needs at least one component")
        object.__setattr__(self, "components", comps)
        params = []
        for c in comps:
            for name in c.unknowns():
                if name in params:
                    raise InvalidParameter(f"unknown {name!r} is declared more than once")
                params.append(name)
        names = self.weight_names
        if names is None:
            prefix = "w"
            while any(f"{prefix}{j + 1}" in params for j in range(len(comps))):
                prefix = "_" + prefix
            names = tuple(f"{prefix}{j + 1}" for j in range(len(comps)))
        names = tuple(names)
        if len(names) != len(comps) or len(set(names)) != len(names) or set(names) & set(params):
            raise InvalidParameter("weight names must be unique, one per component, and distinct from parameters")
        object.__setattr__(self, "weight_names", names)

        n_unknowns = len(comps) - 1 + len(params)
        order = self.match_order if self.match_order is not None else max(1, n_unknowns)
        if order < 1:
            raise InvalidParameter("match order must be at least 1")
        if n_unknowns > order:
            raise Underdetermined(
                f"{n_unknowns} unknowns but only {order} matched moments; raise the moment count"
            )
        for c in comps:
            if c.family == "studentt" and c.named()["nu"] <= order:
                raise MomentNotFinite(
                    f"{c.label()} has no finite moment of order {order}; matching needs nu > {order}"
                )
        target = self.target if isinstance(self.target, MomentVector) else MomentVector(tuple(self.target))
        if target.order < order:
            raise InsufficientMoments(f"target has {target.order} moments, {order} are matched")
        target = MomentVector(tuple(rationalize(v) for v in target.values[:order]))
        object.__setattr__(self, "match_order", order)
        object.__setattr__(self, "target", target)
        if self.moment_cov is not None:
            cov = tuple(tuple(rationalize(v) for v in row[:order]) for row in self.moment_cov[:order])
            if len(cov) != order or any(len(row) != order for row in cov):
                raise InvalidParameter(f"moment covariance must be {order}x{order}")
            object.__setattr__(self, "moment_cov", cov)

    @classmethod
    def from_sample(cls, components, sample, match_order=None, **kwargs) -> MixtureProblem:
        """Target = sample moments; also records their per-observation covariance."""
        comps = tuple(components)
        n_unknowns = len(comps) - 1 + sum(len(c.unknowns()) for c in comps)
        order = match_order if match_order is not None else max(1, n_unknowns)
        moments = empirical_raw_moments(sample, 2 * order)
        kwargs.setdefault("moment_cov", moment_covariance(moments, order))
        return cls(comps, moments.truncate(order), order, **kwargs)

    @property
    def K(self) -> int:
        return len(self.components)

    @property
    def parameter_names(self) -> list[str]:
        return [name for c in self.components for name in c.unknowns()]

    @property
    def unknowns(self) -> list[str]:
        return list(self.weight_names[:-1]) + self.parameter_names

    @property
    def ring(self) -> tuple[str, ...]:
        return tuple(self.unknowns)

    def is_pure_weights(self) -> bool:
        return not self.parameter_names

    def standardization(self) -> Standardization:
        if self.std is not None:
            return self.std
        if self.target.order >= 2 and self.target[1] > self.target[0] ** 2:
            return Standardization.of_moments(self.target)
        return Standardization(self.target[0], 1)

    def summary(self) -> dict:
        return {
            "components": [c.label() for c in self.components],
            "moment_order": self.match_order,
            "unknowns": self.unknowns,
        }


@dataclass
class SolutionCandidate:
    weights: tuple[float, ...]
    parameters: dict[str, float]
    residual: float
    simplex_feasible: bool
    ks: float | None = None
    exact_weights: tuple[Fraction, ...] | None = field(default=None, repr=False)

    def sort_key(self):
        ks = self.ks if self.ks is not None else math.inf
        return (not self.simplex_feasible, ks, self.residual)


@dataclass
class FitReport:
    problem: dict
    candidates: list[SolutionCandidate]
    diagnostics: dict
    gram_charlier: dict | None = None
    error: str | None = None

    @property
    def best(self) -> SolutionCandidate | None:
        return self.candidates[0] if self.candidates else None

    @property
    def best_ks(self) -> float | None:
        b = self.best
        return b.ks if b is not None and b.simplex_feasible else None


def is_simplex_feasible(weights: Sequence[float], tol: float = SIMPLEX_TOL) -> bool:
    return abs(math.fsum(weights) - 1.0) <= tol and all(w >= -tol for w in weights)


# --------------------------------------------------------------------------
# System construction
# --------------------------------------------------------------------------


def build_system(problem: MixtureProblem) -> list[MultiPoly]:
    """e_n = sum_j w_j p_n^(j) - m_n for n = 1..M, with w_K = 1 - sum_{j<K} w_j."""
    ring = problem.ring
    M = problem.match_order
    weights = [MultiPoly.variable(ring, w) for w in problem.weight_names[:-1]]
    last = MultiPoly.constant(ring, 1)
    for w in weights:
        last = last - w
    weights.append(last)
    moments = [symbolic_raw_moments(c, M, ring) for c in problem.components]
    eqs = []
    for n in range(M):
        e = MultiPoly.constant(ring, -problem.target[n])
        for w, p in zip(weights, moments):
            e = e + w * p[n]
        eqs.append(e)
    return eqs


def _complete_weights(free: Sequence) -> tuple:
    last = 1 - sum(free, Fraction(0) if all(isinstance(w, Fraction) for w in free) else 0.0)
    return tuple(free) + (last,)


def _solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Solve A x = b for square nonsingular A by Gauss-Jordan elimination over Q.

    Raises RankDeficient listing the columns without a pivot.
    """
    n = len(A)
    aug = [list(row) + [rhs] for row, rhs in zip(A, b)]
    pivot_cols = []
    r = 0
    missing = []
    for col in range(n):
        piv = next((i for i in range(r, n) if aug[i][col] != 0), None)
        if piv is None:
            missing.append(col)
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][col]
        aug[r] = [v / p for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        pivot_cols.append(col)
        r += 1
    if missing:
        raise RankDeficient("component moment columns are linearly dependent", missing)
    return [aug[i][n] for i in range(n)]


def _gc_transform(std: Standardization, M: int) -> list[list[Fraction]]:
    """Linear part T of the affine map raw moments -> Gram-Charlier coefficients 1..M."""
    zero = gram_charlier_coeffs(MomentVector((Fraction(0),) * M), std, M).coeffs
    T = [[Fraction(0)] * M for _ in range(M)]
    for k in range(M):
        unit = [Fraction(0)] * M
        unit[k] = Fraction(1)
        c = gram_charlier_coeffs(MomentVector(tuple(unit)), std, M).coeffs
        for n in range(M):
            T[n][k] = c[n + 1] - zero[n + 1]
    return T


def _linear_rows(problem: MixtureProblem, space: str):
    """Rows (coefficients of the free weights), right-hand sides, and moment covariance."""
    M, K = problem.match_order, problem.K
    cov = problem.moment_cov
    if space == "raw":
        eqs = build_system(problem)
        rows, rhs = [], []
        for e in eqs:
            coeffs, const = e.linear_part()
            rows.append(coeffs)
            rhs.append(-const)
        return rows, rhs, cov
    if space == "hermite":
        std = problem.standardization()
        comp = [gram_charlier_coeffs(raw_moments(c, M), std, M).coeffs for c in problem.components]
        tgt = gram_charlier_coeffs(problem.target, std, M).coeffs
        rows = [[comp[j][n] - comp[K - 1][n] for j in range(K - 1)] for n in range(1, M + 1)]
        rhs = [tgt[n] - comp[K - 1][n] for n in range(1, M + 1)]
        if cov is not None:
            T = _gc_transform(std, M)
            cov = _matmul(_matmul(T, cov), list(zip(*T)))
        return rows, rhs, cov
    raise ValueError(f"unknown matching space {space!r}")


def _matmul(A, B):
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def _inverse(S) -> list[list[Fraction]]:
    n = len(S)
    cols = [_solve_exact([list(r) for r in S], [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return [list(r) for r in zip(*cols)]


def _weight_matrix(cov, weighting: str):
    """Inverse moment covariance, or None for identity weighting."""
    if weighting == "identity":
        return None
    if cov is None:
        if weighting == "gmm":
            raise InvalidParameter("gmm weighting needs a sample moment covariance")
        return None
    try:
        return _inverse(cov)
    except RankDeficient:
        if weighting == "gmm":
            raise RankDeficient("sample moment covariance is singular") from None
        return None


def solve_linear(problem: MixtureProblem, space: str = "raw", weighting: str = "auto") -> list[SolutionCandidate]:
    """Exact solution of a pure-weight system.

    Square systems are solved directly.  Overdetermined ones use the
    (weighted) normal equations A' W A w = A' W b in exact arithmetic, with
    W the inverse covariance of the sample moments when the problem carries
    one (``weighting="auto"`` or ``"gmm"``) and W = I otherwise.  Moments of
    different orders have very different sampling noise, so the weighting
    matters for data; for exact targets the answer is the same either way.

    ``space="hermite"`` matches Gram-Charlier coefficients instead of raw
    moments.
    """
    if not problem.is_pure_weights():
        raise InvalidParameter("solve_linear needs fixed family parameters; use solve_polynomial")
    if weighting not in ("auto", "gmm", "identity"):
        raise ValueError(f"unknown weighting {weighting!r}")
    K = problem.K
    if K == 1:
        free = []
    else:
        rows, rhs, cov = _linear_rows(problem, space)
        if len(rows) == K - 1:
            A, b = rows, rhs
        else:
            W = _weight_matrix(cov, weighting)
            WA = _matmul(W, rows) if W is not None else rows
            Wb = [r[0] for r in _matmul(W, [[v] for v in rhs])] if W is not None else rhs
            cols = list(zip(*rows))
            wcols = list(zip(*WA))
            A = [[sum(ci * cj for ci, cj in zip(cols[i], wcols[j])) for j in range(K - 1)] for i in range(K - 1)]
            b = [sum(ci * bi for ci, bi in zip(cols[i], Wb)) for i in range(K - 1)]
        try:
            free = _solve_exact(A, b)
        except RankDeficient as exc:
            offenders = sorted({*exc.components, K - 1})
            labels = [problem.components[j].label() for j in offenders]
            raise RankDeficient(
                "collinear component moment vectors: " + "; ".join(labels), offenders
            ) from None
    exact = _complete_weights(free)
    residual = _residual(build_system(problem), list(free))
    weights = tuple(float(w) for w in exact)
    return [
        SolutionCandidate(
            weights=weights,
            parameters={},
            residual=residual,
            simplex_feasible=is_simplex_feasible(weights),
            exact_weights=exact,
        )
    ]


def _residual(eqs: Sequence[MultiPoly], point: Sequence) -> float:
    if not eqs:
        return 0.0
    if all(isinstance(v, Fraction) for v in point):
        values = {name: v for name, v in zip(eqs[0].ring, point)}
        return max(float(abs(e.substitute(values).constant_term())) for e in eqs)
    return max(abs(e.evaluate(list(point))) for e in eqs)


@dataclass
class _PolySolve:
    candidates: list[SolutionCandidate]
    quotient_dimension: int
    eigen_residuals: list[float]
    n_complex: int


def _solve_polynomial(problem: MixtureProblem, seed: int, real_tol: float) -> _PolySolve:
    n_unknowns = len(problem.unknowns)
    if problem.match_order > n_unknowns:
        raise Overdetermined(
            f"{problem.match_order} equations in {n_unknowns} unknowns; a non-square polynomial "
            f"system is generically inconsistent, use --moments {n_unknowns}"
        )
    eqs = build_system(problem)
    if n_unknowns == 0:
        residual = _residual(eqs, [])
        return _PolySolve(
            [SolutionCandidate((1.0,), {}, residual, True, exact_weights=(Fraction(1),))], 1, [], 0
        )
    G = buchberger(eqs, degrevlex)
    beta = quotient_basis(G)
    points = eigensolve.solve_variety(G, beta, seed, real_tol)
    real = eigensolve.filter_real(points, real_tol, eqs)
    K = problem.K
    params = problem.parameter_names
    cands = []
    for p in real:
        coords = p.real_coordinates()
        weights = _complete_weights(list(coords[: K - 1]))
        cands.append(
            SolutionCandidate(
                weights=tuple(float(w) for w in weights),
                parameters={name: coords[K - 1 + i] for i, name in enumerate(params)},
                residual=p.residual,
                simplex_feasible=is_simplex_feasible(weights),
            )
        )
    return _PolySolve(cands, len(beta), [p.residual for p in points], len(points) - len(real))


def solve_polynomial(problem: MixtureProblem, seed: int = 0,
                     real_tol: float = eigensolve.REAL_TOL) -> list[SolutionCandidate]:
    """Real solutions through Groebner basis, standard monomials and eigenvectors."""
    return _solve_polynomial(problem, seed, real_tol).candidates


# --------------------------------------------------------------------------
# Goodness of fit
# --------------------------------------------------------------------------


def _ks_sorted(xs: Sequence[float], cdf: Sequence[float]) -> float:
    n = len(xs)
    d = 0.0
    for i, F in enumerate(cdf):
        d = max(d, (i + 1) / n - F, F - i / n)
    return min(1.0, max(0.0, d))


class CdfCache:
    """Component CDF values on one sorted sample, shared across candidate fits."""

    def __init__(self, sample: Sequence[float]):
        if len(sample) == 0:
            raise EmptySample("sample is empty")
        self.xs = sorted(float(x) for x in sample)
        self._values: dict[FamilySpec, list[float]] = {}

    def __call__(self, spec: FamilySpec) -> list[float]:
        if spec not in self._values:
            self._values[spec] = [family_cdf(spec, x) for x in self.xs]
        return self._values[spec]

    def mixture(self, components: Sequence[FamilySpec], weights: Sequence[float]) -> list[float]:
        cols = [self(c) for c in components]
        return [math.fsum(float(w) * col[i] for w, col in zip(weights, cols)) for i in range(len(self.xs))]

    def ks(self, components, weights) -> float:
        return _ks_sorted(self.xs, self.mixture(components, weights))


def ks_statistic(components: Sequence[FamilySpec], weights: Sequence[float], sample: Sequence[float],
                 cache: CdfCache | None = None) -> float:
    """sup |F_N(x) - sum_j w_j F_j(x)| over the sample points, both one-sided gaps."""
    if len(weights) != len(components) or not is_simplex_feasible([float(w) for w in weights]):
        raise InfeasibleWeights(f"weights {list(map(float, weights))} are not on the simplex")
    cache = cache or CdfCache(sample)
    return cache.ks(components, weights)


# --------------------------------------------------------------------------
# Fitting entry points
# --------------------------------------------------------------------------


def _gram_charlier_summary(problem: MixtureProblem, best: SolutionCandidate) -> dict | None:
    M = problem.match_order
    std = problem.standardization()
    try:
        comps = [c.bind(best.parameters) for c in problem.components]
        fitted = [Fraction(0)] * M
        for w, c in zip(best.weights, comps):
            mom = raw_moments(c, M)
            fitted = [f + Fraction(w) * m for f, m in zip(fitted, mom.values)]
        target = gram_charlier_coeffs(problem.target, std, M).values()
        model = gram_charlier_coeffs(MomentVector(tuple(fitted)), std, M).values()
    except HermixError:
        return None
    return {
        "location": float(std.location),
        "scale": std.scale,
        "target": target,
        "fitted": model,
    }


def fit(problem: MixtureProblem, sample: Sequence[float] | None = None, seed: int = 0,
        solver: str = "auto", real_tol: float = eigensolve.REAL_TOL,
        cache: CdfCache | None = None) -> FitReport:
    """Solve a mixture problem and rank its candidates.

    Candidates are ordered by (simplex feasible first, KS, residual).  KS is
    only computed with a sample and only for feasible candidates whose
    parameters make valid distributions.
    """
    if solver == "auto":
        solver = "linear" if problem.is_pure_weights() else "polynomial"
    diagnostics = {"solver_path": solver, "quotient_dimension": None, "moment_order": problem.match_order,
                   "seed": seed}
    if solver == "linear":
        candidates = solve_linear(problem)
        overdetermined = problem.match_order > problem.K - 1 and problem.K > 1
        weighted = overdetermined and _weight_matrix(problem.moment_cov, "auto") is not None
        diagnostics["weighting"] = "gmm" if weighted else "identity"
    elif solver == "polynomial":
        result = _solve_polynomial(problem, seed, real_tol)
        candidates = result.candidates
        diagnostics["quotient_dimension"] = result.quotient_dimension
        diagnostics["eigen_residuals"] = result.eigen_residuals
        diagnostics["complex_solutions"] = result.n_complex
    else:
        raise ValueError(f"unknown solver {solver!r}")

    if sample is not None:
        cache = cache or CdfCache(sample)
        for cand in candidates:
            if not cand.simplex_feasible:
                continue
            try:
                comps = [c.bind(cand.parameters) for c in problem.components]
                cand.ks = cache.ks(comps, cand.weights)
            except HermixError:
                cand.ks = None
    candidates.sort(key=SolutionCandidate.sort_key)
    report = FitReport(problem.summary(), candidates, diagnostics)
    if candidates:
        report.gram_charlier = _gram_charlier_summary(problem, candidates[0])
    return report


def eda_scan(sample: Sequence, pool: Sequence[FamilySpec], k: int, match_order: int | None = None,
             seed: int = 0, workers: int = 1) -> list[FitReport]:
    """Fit every size-k subset of the pool to the sample and rank by best KS.

    Subsets that fail keep their report with ``error`` set.  Ties and failures
    keep the subset enumeration order, so the result does not depend on
    ``workers``.
    """
    pool = list(pool)
    if not 1 <= k <= len(pool):
        raise InvalidParameter(f"subset size must be between 1 and {len(pool)}")
    if len(pool) > MAX_POOL:
        raise InvalidParameter(f"pool size {len(pool)} exceeds the cap of {MAX_POOL}")
    subsets = list(itertools.combinations(range(len(pool)), k))

    def order_for(idx):
        comps = [pool[i] for i in idx]
        n = len(comps) - 1 + sum(len(c.unknowns()) for c in comps)
        return match_order if match_order is not None else max(1, n)

    top = max(order_for(idx) for idx in subsets)
    moments = empirical_raw_moments(sample, 2 * top)
    cache = CdfCache(sample)

    def run(idx):
        comps = [pool[i] for i in idx]
        M = order_for(idx)
        try:
            problem = MixtureProblem(tuple(comps), moments.truncate(M), M,
                                     moment_cov=moment_covariance(moments, M))
            return fit(problem, cache.xs, seed=seed, cache=cache)
        except HermixError as exc:
            return FitReport(
                {"components": [c.label() for c in comps], "moment_order": M, "unknowns": []},
                [],
                {"solver_path": None, "quotient_dimension": None, "moment_order": M, "seed": seed},
                error=str(exc),
            )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            reports = list(ex.map(run, subsets))
    else:
        reports = [run(idx) for idx in subsets]
    indexed = list(enumerate(reports))
    indexed.sort(key=lambda t: (t[1].best_ks is None, t[1].best_ks or 0.0, t[0]))
    return [r for _, r in indexed]
