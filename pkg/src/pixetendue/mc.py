"""Monte Carlo photon counting for a pixel with a fixed number of modes.

Each trial sums independent per-mode photon counts drawn from the thermal
(geometric), coherent (Poisson) or Fock (fixed) law.  Trials are processed in
blocks whose random streams are keyed by ``(seed, block index)``, and the
moment accumulators are exact integer power sums, so the result does not
depend on how many workers run the blocks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from . import kernels
from .errors import SaturationError, UndefinedGapError, ValidationError

_INT64_MAX = 2**63 - 1
# uniforms held in memory per block
_BLOCK_DRAWS = 2**20


@dataclass(frozen=True)
class Thermal:
    n_bar: float

    def __post_init__(self):
        if not (0.0 <= self.n_bar < math.inf):
            raise ValidationError("n_bar", f"must be >= 0 and finite, got {self.n_bar!r}")


@dataclass(frozen=True)
class Coherent:
    mean: float

    def __post_init__(self):
        if not (0.0 <= self.mean < math.inf):
            raise ValidationError("mean", f"must be >= 0 and finite, got {self.mean!r}")


@dataclass(frozen=True)
class Fock:
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 0:
            raise ValidationError("n", f"must be a non-negative integer, got {self.n!r}")


Distribution = Union[Thermal, Coherent, Fock]


def _positive_int(value, name):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ValidationError(name, f"must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class SamplingSpec:
    distribution: Distribution
    n_modes: int = 1
    trials: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.distribution, (Thermal, Coherent, Fock)):
            raise TypeError("distribution must be Thermal, Coherent or Fock")
        _positive_int(self.n_modes, "n_modes")
        _positive_int(self.trials, "trials")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not (0 <= self.seed < 2**64):
            raise ValidationError("seed", f"must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class TrialSummary:
    """Empirical and theoretical moments of the per-trial photon count.

    Standard errors come from the delta method on the sample moments.
    """

    distribution: str
    n_modes: int
    trials: int
    empirical_mean: float
    empirical_variance: float
    empirical_snr: float
    theory_mean: float
    theory_variance: float
    standard_error_mean: float
    standard_error_variance: float
    standard_error_snr: float
    fano: float
    standard_error_fano: float

    @property
    def theory_snr(self) -> float:
        if self.theory_variance == 0.0:
            return math.inf if self.theory_mean > 0 else math.nan
        return self.theory_mean / math.sqrt(self.theory_variance)


def _log_q(n_bar: float) -> float:
    # ratio of successive geometric probabilities, q = n_bar / (1 + n_bar)
    return math.log(n_bar) - math.log1p(n_bar)


def sample_mode_occupation(distribution: Distribution, rng: np.random.Generator) -> int:
    """One photon count for a single mode."""
    if isinstance(distribution, Fock):
        return int(distribution.n)
    if isinstance(distribution, Coherent):
        return int(rng.poisson(distribution.mean))
    if distribution.n_bar == 0.0:
        return 0
    return int(math.floor(math.log1p(-rng.random()) / _log_q(distribution.n_bar)))


def sample_mode_occupations(distribution: Distribution, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` independent single-mode counts as an int64 array."""
    if isinstance(distribution, Fock):
        return np.full(size, int(distribution.n), dtype=np.int64)
    if isinstance(distribution, Coherent):
        return rng.poisson(distribution.mean, size).astype(np.int64)
    if distribution.n_bar == 0.0:
        return np.zeros(size, dtype=np.int64)
    uniforms = rng.random((size, 1))
    return kernels.thermal_counts(uniforms, _log_q(distribution.n_bar))


def _check_capacity(spec: SamplingSpec) -> None:
    dist = spec.distribution
    if isinstance(dist, Thermal):
        # the largest geometric draw from a double uniform is about 37.5 (1 + n_bar)
        worst = 40.0 * (1.0 + dist.n_bar) * spec.n_modes
    elif isinstance(dist, Coherent):
        worst = (dist.mean + 40.0 * math.sqrt(dist.mean) + 40.0) * spec.n_modes
    else:
        worst = float(dist.n) * spec.n_modes
    if worst * spec.trials > _INT64_MAX:
        raise SaturationError(f"photon counts up to ~{worst:.3g} per trial overflow the accumulator")


def _block_counts(spec: SamplingSpec, block: int, size: int) -> np.ndarray:
    dist = spec.distribution
    if isinstance(dist, Fock):
        return np.full(size, int(dist.n) * spec.n_modes, dtype=np.int64)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed, spawn_key=(block,))))
    if isinstance(dist, Coherent):
        return rng.poisson(dist.mean, (size, spec.n_modes)).astype(np.int64).sum(axis=1)
    if dist.n_bar == 0.0:
        return np.zeros(size, dtype=np.int64)
    return kernels.thermal_counts(rng.random((size, spec.n_modes)), _log_q(dist.n_bar))


def _exact_power_sums(counts: np.ndarray) -> tuple[int, int, int, int]:
    c_max = int(counts.max()) if counts.size else 0
    if c_max < 0:
        raise SaturationError("negative photon count from overflowed draw")
    if c_max == 0:
        return 0, 0, 0, 0
    if c_max**4 > _INT64_MAX:
        big = counts.astype(object)
        return int(big.sum()), int((big**2).sum()), int((big**3).sum()), int((big**4).sum())
    chunk = max(1, _INT64_MAX // c_max**4)
    sums = [0, 0, 0, 0]
    for start in range(0, counts.size, chunk):
        part = kernels.power_sums(np.ascontiguousarray(counts[start:start + chunk]))
        sums = [a + b for a, b in zip(sums, part)]
    return tuple(sums)


def _block_sums(spec: SamplingSpec, block: int, size: int):
    return _exact_power_sums(_block_counts(spec, block, size))


def _theory(spec: SamplingSpec) -> tuple[float, float, str]:
    dist, m = spec.distribution, spec.n_modes
    if isinstance(dist, Thermal):
        return m * dist.n_bar, m * dist.n_bar * (1.0 + dist.n_bar), "thermal"
    if isinstance(dist, Coherent):
        return m * dist.mean, m * dist.mean, "coherent"
    return float(m * dist.n), 0.0, "fock"


def _ratio(num: float, den: float) -> float:
    if den == 0.0:
        return math.nan if num == 0.0 else math.copysign(math.inf, num)
    return num / den


def simulate_pixel(spec: SamplingSpec, workers: int = 1) -> TrialSummary:
    """Run ``spec.trials`` pixel exposures and summarise the photon counts."""
    _check_capacity(spec)
    block_size = max(1, _BLOCK_DRAWS // spec.n_modes)
    jobs = [
        (b, min(block_size, spec.trials - start))
        for b, start in enumerate(range(0, spec.trials, block_size))
    ]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _block_sums(spec, *job), jobs))
    else:
        parts = [_block_sums(spec, *job) for job in jobs]
    s1, s2, s3, s4 = (sum(p[k] for p in parts) for k in range(4))

    n = spec.trials
    mean = Fraction(s1, n)
    m2 = Fraction(s2, n) - mean**2
    m3 = Fraction(s3, n) - 3 * mean * Fraction(s2, n) + 2 * mean**3
    m4 = Fraction(s4, n) - 4 * mean * Fraction(s3, n) + 6 * mean**2 * Fraction(s2, n) - 3 * mean**4
    var = m2 * n / (n - 1) if n > 1 else Fraction(0)

    mu, v = float(mean), float(var)
    var_mu = v / n
    var_v = max(float(m4 - m2**2), 0.0) / n
    cov = float(m3) / n
    snr = _ratio(mu, math.sqrt(v))
    fano = _ratio(v, mu)
    if v > 0.0 and mu > 0.0:
        var_snr = var_mu / v + mu**2 * var_v / (4.0 * v**3) - mu * cov / v**2
        var_fano = var_v / mu**2 + v**2 * var_mu / mu**4 - 2.0 * v * cov / mu**3
        se_snr, se_fano = math.sqrt(max(var_snr, 0.0)), math.sqrt(max(var_fano, 0.0))
    else:
        se_snr = se_fano = 0.0 if v == 0.0 else math.nan

    theory_mean, theory_var, name = _theory(spec)
    return TrialSummary(
        distribution=name,
        n_modes=spec.n_modes,
        trials=n,
        empirical_mean=mu,
        empirical_variance=v,
        empirical_snr=snr,
        theory_mean=theory_mean,
        theory_variance=theory_var,
        standard_error_mean=math.sqrt(var_mu),
        standard_error_variance=math.sqrt(var_v),
        standard_error_snr=se_snr,
        fano=fano,
        standard_error_fano=se_fano,
    )


def shot_limit_gap(summary: TrialSummary) -> float:
    """Excess of the Fano factor over the Poisson value 1.

    Zero means exact shot-noise behaviour; thermal light tends to ``n_bar``
    and Fock states give exactly -1.
    """
    if not (summary.theory_mean > 0.0) or summary.empirical_mean == 0.0:
        raise UndefinedGapError("shot-noise gap needs a positive mean photon count")
    return summary.empirical_variance / summary.empirical_mean - 1.0
