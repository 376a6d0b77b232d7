"""PCG32 generator and per-family samplers.

PCG32 (O'Neill, "PCG: A family of simple fast space-efficient statistically
good algorithms for random number generation"): 64-bit LCG state,
multiplier 6364136223846793005, output by xorshift-high then random
rotation (XSH-RR) to 32 bits.  Seeding follows pcg32_srandom_r.  The
implementation is pure integer arithmetic so draws are identical on every
platform.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import InfeasibleWeights, InvalidParameter
from .moments import FamilySpec

MASK64 = (1 << 64) - 1
MULT = 6364136223846793005
DEFAULT_STREAM = 54


class PCG32:
    def __init__(self, seed: int = 0, stream: int = DEFAULT_STREAM):
        self.inc = ((stream << 1) | 1) & MASK64
        self.state = 0
        self.next_u32()
        self.state = (self.state + seed) & MASK64
        self.next_u32()

    def next_u32(self) -> int:
        old = self.state
        self.state = (old * MULT + self.inc) & MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & 0xFFFFFFFF

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        hi = self.next_u32() >> 5
        lo = self.next_u32() >> 6
        return (hi * 67108864.0 + lo) / 9007199254740992.0

    def open_random(self) -> float:
        """Uniform double in (0, 1)."""
        while True:
            u = self.random()
            if u > 0.0:
                return u


class Sampler:
    """Draws from catalog families using one PCG32 stream."""

    def __init__(self, rng: PCG32):
        self.rng = rng
        self._spare = None

    def normal(self) -> float:
        # Marsaglia polar method; the second variate is kept for the next call
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        while True:
            u = 2.0 * self.rng.random() - 1.0
            v = 2.0 * self.rng.random() - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                break
        factor = math.sqrt(-2.0 * math.log(s) / s)
        self._spare = v * factor
        return u * factor

    def exponential(self, theta: float = 1.0) -> float:
        return -theta * math.log(self.rng.open_random())

    def uniform(self, a: float = 0.0, b: float = 1.0) -> float:
        return a + (b - a) * self.rng.random()

    def standard_gamma(self, shape: float) -> float:
        # Marsaglia-Tsang; shape < 1 boosted via G(a) = G(a + 1) U^(1/a)
        if shape < 1.0:
            return self.standard_gamma(shape + 1.0) * self.rng.open_random() ** (1.0 / shape)
        d = shape - 1.0 / 3.0
        c = 1.0 / math.sqrt(9.0 * d)
        while True:
            x = self.normal()
            v = 1.0 + c * x
            if v <= 0.0:
                continue
            v = v * v * v
            u = self.rng.open_random()
            if u < 1.0 - 0.0331 * x ** 4:
                return d * v
            if math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
                return d * v

    def student_t(self, nu: float) -> float:
        chi2 = 2.0 * self.standard_gamma(nu / 2.0)
        return self.normal() / math.sqrt(chi2 / nu)

    def poisson(self, rate: float) -> int:
        if rate < 10.0:
            # sequential inversion
            u = self.rng.random()
            k = 0
            p = math.exp(-rate)
            cdf = p
            while u > cdf and k < 10_000:
                k += 1
                p *= rate / k
                cdf += p
            return k
        return self._poisson_ptrs(rate)

    def _poisson_ptrs(self, rate: float) -> int:
        # Hoermann's transformed rejection with squeeze (PTRS)
        slam = math.sqrt(rate)
        loglam = math.log(rate)
        b = 0.931 + 2.53 * slam
        a = -0.059 + 0.02483 * b
        invalpha = 1.1239 + 1.1328 / (b - 3.4)
        vr = 0.9277 - 3.6224 / (b - 2.0)
        while True:
            u = self.rng.random() - 0.5
            v = self.rng.random()
            us = 0.5 - abs(u)
            k = math.floor((2.0 * a / us + b) * u + rate + 0.43)
            if us >= 0.07 and v <= vr:
                return k
            if k < 0 or (us < 0.013 and v > us):
                continue
            if (math.log(v) + math.log(invalpha) - math.log(a / (us * us) + b)) <= (
                -rate + k * loglam - math.lgamma(k + 1)
            ):
                return k

    def draw(self, spec: FamilySpec) -> float:
        if not spec.is_fixed():
            raise InvalidParameter(f"cannot sample {spec.label()}: unknown parameters")
        p = {k: float(v) for k, v in spec.named().items()}
        fam = spec.family
        if fam == "gaussian":
            return p["mu"] + math.sqrt(p["sigma2"]) * self.normal()
        if fam == "gamma":
            return p["scale"] * self.standard_gamma(p["shape"])
        if fam == "exponential":
            return self.exponential(p["theta"])
        if fam == "uniform":
            return self.uniform(p["a"], p["b"])
        if fam == "studentt":
            return self.student_t(p["nu"])
        if fam == "poisson":
            return float(self.poisson(p["rate"]))
        raise InvalidParameter(f"no sampler for {fam}")  # pragma: no cover


def check_weights(weights: Sequence, k: int | None = None, tol=0) -> None:
    """Raise InfeasibleWeights unless weights lie on the probability simplex."""
    if k is not None and len(weights) != k:
        raise InfeasibleWeights(f"expected {k} weights, got {len(weights)}")
    if any(w < -tol for w in weights):
        raise InfeasibleWeights(f"weights must be nonnegative: {list(map(float, weights))}")
    total = sum(weights, Fraction(0)) if all(isinstance(w, (int, Fraction)) for w in weights) else math.fsum(weights)
    if abs(total - 1) > tol:
        raise InfeasibleWeights(f"weights sum to {float(total)}, not 1")


def sample_mixture(components: Sequence[FamilySpec], weights: Sequence, n: int, seed: int = 0,
                   return_labels: bool = False):
    """Draw n values: a component index by inversion on the cumulative weights, then a draw from it."""
    check_weights(weights, len(components))
    if n < 0:
        raise ValueError("n must be nonnegative")
    cumulative = []
    acc = 0.0
    for w in weights:
        acc += float(w)
        cumulative.append(acc)
    cumulative[-1] = 1.0
    sampler = Sampler(PCG32(seed))
    values, labels = [], []
    for _ in range(n):
        u = sampler.rng.random()
        j = 0
        while u >= cumulative[j]:
            j += 1
        values.append(sampler.draw(components[j]))
        labels.append(j)
    return (values, labels) if return_labels else values
