from fractions import Fraction

import numpy as np
import pytest

from hermix.errors import (
    InfeasibleWeights,
    InsufficientMoments,
    MomentNotFinite,
    Overdetermined,
    RankDeficient,
    Underdetermined,
)
from hermix.mixfit import (
    CdfCache,
    MixtureProblem,
    SolutionCandidate,
    build_system,
    eda_scan,
    fit,
    ks_statistic,
    moment_covariance,
    rationalize,
    solve_linear,
    solve_polynomial,
)
from hermix.moments import (
    MomentVector,
    Unknown,
    exponential,
    family_cdf,
    gamma,
    gaussian,
    poisson,
    raw_moments,
    student_t,
    uniform,
)
from hermix.poly import parse_polys
from hermix.rng import sample_mixture

F = Fraction
PEARSON_TARGET = (F(1, 5), 2, F(4, 5))


def pearson_problem(target=PEARSON_TARGET):
    return MixtureProblem((gaussian(Unknown("u"), 1), gaussian(Unknown("v"), 1)), target, weight_names=("w", "w2"))


def mixture_moments(specs, weights, M):
    cols = [raw_moments(s, M).values for s in specs]
    return tuple(sum(w * c[n] for w, c in zip(weights, cols)) for n in range(M))


def test_build_system_examples():
    p = MixtureProblem((gaussian(0, 1),), (F(0),))
    assert p.unknowns == [] and p.K == 1
    p = MixtureProblem((gaussian(0, 1), exponential(1)), (F(7, 10), F(17, 10)), match_order=2)
    ring = p.ring
    assert build_system(p) == parse_polys(["w1*0 + (1 - w1)*1 - 7/10", "w1*1 + (1 - w1)*2 - 17/10"], ring)
    eqs = build_system(pearson_problem())
    assert pearson_problem().ring == ("w", "u", "v")
    assert max(e.total_degree() for e in eqs) == 4
    assert all(abs(e.evaluate([0.4, -1.0, 1.0])) < 1e-14 for e in eqs)


def test_solve_linear_examples():
    p = MixtureProblem((gaussian(0, 1), exponential(1)), (F(7, 10), F(17, 10)), match_order=2)
    [c] = solve_linear(p)
    assert c.exact_weights == (F(3, 10), F(7, 10))
    assert c.residual < 1e-12 and c.simplex_feasible
    [c] = solve_linear(MixtureProblem((uniform(0, 1),), (F(1, 2),)))
    assert c.weights == (1.0,)


def test_duplicate_components_rank_deficient():
    p = MixtureProblem((gamma(2, 1), gamma(2, 1)), (F(2),))
    with pytest.raises(RankDeficient) as info:
        solve_linear(p)
    assert info.value.components


def test_pearson_candidates_and_label_swap():
    cands = solve_polynomial(pearson_problem())
    points = [(c.weights[0], c.parameters["u"], c.parameters["v"]) for c in cands]
    for truth in [(0.4, -1.0, 1.0), (0.6, 1.0, -1.0)]:
        assert any(np.allclose(p, truth, atol=1e-6) for p in points)
    for w, u, v in points:
        assert any(np.allclose(q, (1 - w, v, u), atol=1e-6) for q in points)
    assert all(c.residual < 1e-6 for c in cands)
    assert all(c.weights[0] + c.weights[1] == 1.0 for c in cands)


@pytest.mark.parametrize("truth", [F(1, 4), F(1, 2), F(9, 10)])
def test_pure_weights_solver_agreement(truth):
    specs = (gaussian(0, 1), exponential(1))
    p = MixtureProblem(specs, mixture_moments(specs, (truth, 1 - truth), 1))
    [lin] = solve_linear(p)
    [poly] = solve_polynomial(p)
    assert np.allclose(lin.weights, poly.weights, atol=1e-8)
    assert abs(lin.weights[0] - float(truth)) < 1e-12


def test_infeasible_target_reported():
    # m2 < m1^2 cannot come from any mixture, so every exact solution has a negative weight
    p = MixtureProblem((gaussian(0, 1), exponential(1), uniform(0, 1)), (F(7, 10), F(3, 10)))
    for cands in (solve_linear(p), solve_polynomial(p)):
        assert cands and not any(c.simplex_feasible for c in cands)
        assert np.allclose(cands[0].weights, (-0.3, 0.1, 1.2))
    report = fit(p)
    assert report.best is not None and report.best_ks is None


def test_pearson_perturbed_has_no_real_solution():
    report = fit(pearson_problem((F(1, 5), F(1, 100), F(4, 5))))
    assert report.candidates == []
    assert report.diagnostics["complex_solutions"] == 2


def test_problem_validation():
    with pytest.raises(Underdetermined):
        MixtureProblem((gaussian(0, 1), exponential(1), uniform(0, 1)), (F(1), F(2)), match_order=1)
    with pytest.raises(InsufficientMoments):
        MixtureProblem((gaussian(0, 1), exponential(1)), (F(1),), match_order=2)
    with pytest.raises(MomentNotFinite):
        MixtureProblem((student_t(3), gaussian(0, 1)), (0, 1, 0), match_order=3)
    with pytest.raises(Overdetermined):
        solve_polynomial(MixtureProblem((gaussian(Unknown("u"), 1), exponential(1)), (1, 2, 6), match_order=3))


def test_overdetermined_linear_exact_target():
    specs = (gaussian(0, 1), exponential(1))
    target = mixture_moments(specs, (F(2, 5), F(3, 5)), 8)
    cov = moment_covariance(MomentVector(target), 4)
    for weighting in ("identity", "gmm"):
        p = MixtureProblem(specs, target[:4], match_order=4, moment_cov=cov)
        [c] = solve_linear(p, weighting=weighting)
        assert c.exact_weights == (F(2, 5), F(3, 5))


def test_hermite_space_matches_raw():
    specs = (gamma(3, 1), poisson(2))
    p = MixtureProblem(specs, mixture_moments(specs, (F(7, 20), F(13, 20)), 1))
    [a] = solve_linear(p, space="raw")
    [b] = solve_linear(p, space="hermite")
    assert a.exact_weights == b.exact_weights


def test_rationalize():
    assert rationalize(0.1) == F(1, 10)
    assert rationalize(F(1, 3)) == F(1, 3)
    x = rationalize(np.pi)
    assert x.denominator <= 10**12 and abs(float(x) - np.pi) <= 1e-12


def test_ks_examples():
    assert ks_statistic([uniform(0, 1)], [1.0], [0.5]) == pytest.approx(0.5)
    sample = sample_mixture([exponential(1)], [1], 2000, seed=4)
    d_single = ks_statistic([exponential(1)], [1.0], sample)
    assert ks_statistic([exponential(1), gaussian(3, 1)], [1.0, 0.0], sample) == pytest.approx(d_single, abs=1e-15)
    with pytest.raises(InfeasibleWeights):
        ks_statistic([uniform(0, 1)], [0.5], [0.5])


def test_ks_matches_direct_computation():
    xs = sample_mixture([gaussian(0, 1), exponential(1)], [F(3, 10), F(7, 10)], 500, seed=9)
    srt = np.sort(xs)
    Fx = np.array([0.3 * family_cdf(gaussian(0, 1), x) + 0.7 * family_cdf(exponential(1), x) for x in srt])
    n = len(srt)
    i = np.arange(1, n + 1)
    direct = max(np.max(i / n - Fx), np.max(Fx - (i - 1) / n))
    assert ks_statistic([gaussian(0, 1), exponential(1)], [0.3, 0.7], xs) == pytest.approx(direct, abs=1e-14)


def test_ks_shrinks_with_sample_size():
    specs = [gaussian(0, 1), exponential(1)]
    d = [ks_statistic(specs, [0.3, 0.7], sample_mixture(specs, [F(3, 10), F(7, 10)], n, seed=1)) for n in (100, 1000, 10000)]
    assert d[0] > d[1] > d[2]


def test_fit_ranks_feasible_first():
    cands = [
        SolutionCandidate((1.2, -0.2), {}, 0.0, False),
        SolutionCandidate((0.5, 0.5), {}, 1e-9, True, ks=0.2),
        SolutionCandidate((0.4, 0.6), {}, 1e-3, True, ks=0.1),
    ]
    cands.sort(key=SolutionCandidate.sort_key)
    assert [c.weights[0] for c in cands] == [0.4, 0.5, 1.2]


def test_fit_from_sample(synthetic_sample):
    p = MixtureProblem.from_sample((gaussian(0, 1), exponential(1)), synthetic_sample, match_order=2)
    report = fit(p, synthetic_sample)
    assert abs(report.best.weights[0] - 0.3) < 0.02
    assert report.diagnostics["weighting"] == "gmm"
    assert report.best_ks < 0.02
    assert report.gram_charlier["target"][0] == 1.0


def test_fit_unknown_parameter_from_sample():
    xs = sample_mixture([gaussian(F(-1), 1), gaussian(F(2), 1)], [F(2, 5), F(3, 5)], 20_000, seed=3)
    p = MixtureProblem.from_sample((gaussian(Unknown("u"), 1), gaussian(Unknown("v"), 1)), xs)
    report = fit(p, xs)
    best = report.best
    assert best.simplex_feasible
    got = sorted([(best.weights[0], best.parameters["u"]), (best.weights[1], best.parameters["v"])], key=lambda t: t[1])
    assert abs(got[0][0] - 0.4) < 0.05 and abs(got[0][1] + 1) < 0.1 and abs(got[1][1] - 2) < 0.1


def test_eda_ranking(synthetic_sample):
    pool = [gaussian(0, 1), exponential(1), uniform(0, 1)]
    reports = eda_scan(synthetic_sample, pool, 2)
    labels = [r.problem["components"] for r in reports]
    assert labels[0] == ["gaussian:mu=0,sigma2=1", "exponential:theta=1"]
    assert reports[0].best_ks < min(r.best_ks for r in reports[1:] if r.best_ks is not None)


def test_eda_degenerate_subset_sizes():
    xs = sample_mixture([exponential(1)], [1], 500, seed=0)
    pool = [gaussian(0, 1), exponential(1)]
    assert len(eda_scan(xs, pool, 2)) == 1
    singles = eda_scan(xs, pool, 1)
    assert len(singles) == 2
    assert all(r.best.weights == (1.0,) for r in singles)
    assert singles[0].problem["components"] == ["exponential:theta=1"]


def test_eda_independent_of_workers(synthetic_sample):
    xs = synthetic_sample[:3000]
    pool = [gaussian(0, 1), exponential(1), uniform(0, 1), gamma(2, 1)]
    a = eda_scan(xs, pool, 2, workers=1)
    b = eda_scan(xs, pool, 2, workers=4)
    assert [(r.problem, r.best_ks) for r in a] == [(r.problem, r.best_ks) for r in b]


def test_cdf_cache_reuse():
    xs = [0.1, 0.5, 0.9]
    cache = CdfCache(xs)
    assert cache(uniform(0, 1)) is cache(uniform(0, 1))
