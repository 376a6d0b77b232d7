"""Measure the spread of fitted weights for 0.3 N(0,1) + 0.7 Exp(1) across seeds.

Writes tests/fixtures/weight_spread.json, which the acceptance suite reads to
confirm the +-0.02 round-trip tolerance.
"""

import statistics
import sys
from fractions import Fraction
from pathlib import Path

from hermix import exponential, gaussian
from hermix.cli import dumps
from hermix.mixfit import MixtureProblem, solve_linear
from hermix.rng import sample_mixture

N = 50_000
SEEDS = range(20)
TRUE_W = 0.3


def fitted_weights(seed: int) -> dict:
    comps = [gaussian(0, 1), exponential(1)]
    xs = sample_mixture(comps, [Fraction(3, 10), Fraction(7, 10)], N, seed=seed)
    # round-trip through the 12-digit text format used by `hermix gen`
    xs = [Fraction(f"{x:.12g}") for x in xs]
    problem = MixtureProblem.from_sample(comps, xs, 2)
    return {
        weighting: solve_linear(problem, weighting=weighting)[0].weights[0]
        for weighting in ("gmm", "identity")
    }


def summarize(weights: dict) -> dict:
    errors = [w - TRUE_W for w in weights.values()]
    return {
        "weights": {str(k): v for k, v in weights.items()},
        "mean_error": statistics.fmean(errors),
        "sd": statistics.stdev(weights.values()),
        "max_abs_error": max(abs(e) for e in errors),
    }


def main(out="tests/fixtures/weight_spread.json"):
    fits = {seed: fitted_weights(seed) for seed in SEEDS}
    doc = {
        "mixture": "0.3*gaussian(0,1) + 0.7*exponential(1)",
        "n": N,
        "moment_order": 2,
        "seeds": len(SEEDS),
        # default estimator: normal equations weighted by the inverse moment covariance
        "gmm": summarize({s: f["gmm"] for s, f in fits.items()}),
        # unweighted normal equations, kept for comparison
        "identity": summarize({s: f["identity"] for s, f in fits.items()}),
    }
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    Path(out).write_text(dumps(doc))
    print(dumps(doc))


if __name__ == "__main__":
    main(*sys.argv[1:])
