"""Monte-Carlo estimator of the exact mixture mutual information.

The received signal is a K-component zero-mean complex Gaussian mixture
whose differential entropy has no closed form. The estimator draws exactly
ceil(N/K) samples from every component (stratification is unbiased because
patterns are equiprobable and cuts variance), evaluates the mixture
log-density with per-component Cholesky factors and log-sum-exp
stabilization, and subtracts the analytic conditional entropy. Draw streams
are keyed by (component, chunk), so results are reproducible under any
execution schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import logsumexp

from .capacity import LN2, CovarianceSet
from .errors import ParameterError
from .numerics import make_rng

MIN_SAMPLES = 1_000

_STREAM_SPAN = 1 << 32


@dataclass(frozen=True)
class MonteCarloSpec:
    """Sample budget, seed and chunk size of one estimator run."""

    n_samples: int = 100_000
    seed: int = 0
    batch: int = 16_384

    def __post_init__(self):
        if self.n_samples < MIN_SAMPLES:
            raise ParameterError(
                f"n_samples must be >= {MIN_SAMPLES} to keep estimator variance usable")
        if self.batch < 1:
            raise ParameterError("batch must be >= 1")


class McEstimate(NamedTuple):
    estimate: float
    stderr: float


def _mixture_logpdf_draws(covs: CovarianceSet, spec: MonteCarloSpec) -> np.ndarray:
    """Natural-log mixture densities of stratified draws, ceil(N/K) per component."""
    k, n_r = covs.k, covs.n_r
    chol = covs.cholesky()
    eye = np.eye(n_r, dtype=np.complex128)
    whiten = np.stack([solve_triangular(chol[j], eye, lower=True, check_finite=False)
                       for j in range(k)])
    logdets = covs.logdets()
    per_component = math.ceil(spec.n_samples / k)
    const = n_r * np.log(np.pi)
    out = np.empty(per_component * k)
    pos = 0
    for comp in range(k):
        drawn = 0
        chunk = 0
        while drawn < per_component:
            count = min(spec.batch, per_component - drawn)
            rng = make_rng(spec.seed, stream=comp * _STREAM_SPAN + chunk)
            z = (rng.standard_normal((count, n_r))
                 + 1j * rng.standard_normal((count, n_r))) / np.sqrt(2.0)
            y = np.ascontiguousarray((z @ chol[comp].T).T)  # columns ~ CN(0, sigma_comp)
            comp_logpdf = np.empty((k, count))
            for j in range(k):
                x = whiten[j] @ y
                comp_logpdf[j] = -(x.real ** 2 + x.imag ** 2).sum(axis=0) - const - logdets[j]
            out[pos:pos + count] = logsumexp(comp_logpdf, axis=0) - np.log(k)
            pos += count
            drawn += count
            chunk += 1
    return out


def mc_mutual_information(covs: CovarianceSet, spec: MonteCarloSpec) -> McEstimate:
    """Estimate of the total rate h(y) - N_r log2(pi e N0) in bits, with stderr."""
    logp = _mixture_logpdf_draws(covs, spec)
    entropy_bits = -float(np.mean(logp)) / LN2
    estimate = entropy_bits - covs.n_r * float(np.log2(np.pi * np.e * covs.n0))
    stderr = float(np.std(logp, ddof=1)) / np.sqrt(logp.size) / LN2
    return McEstimate(estimate, stderr)


def mc_spatial_information(covs: CovarianceSet, spec: MonteCarloSpec) -> McEstimate:
    """Estimate of the pattern-index rate h(y) - (1/K) sum_k h(y | pattern k).

    Per-component entropies are analytic, log2((pi e)^N_r |S_k|), so only
    the mixture entropy carries Monte-Carlo noise.
    """
    logp = _mixture_logpdf_draws(covs, spec)
    entropy_bits = -float(np.mean(logp)) / LN2
    conditional_bits = covs.n_r * float(np.log2(np.pi * np.e)) \
        + float(np.mean(covs.logdets())) / LN2
    stderr = float(np.std(logp, ddof=1)) / np.sqrt(logp.size) / LN2
    return McEstimate(entropy_bits - conditional_bits, stderr)
