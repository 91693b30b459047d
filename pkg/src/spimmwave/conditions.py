"""Superiority conditions and margin optimization for pattern-switched beams.

At high SNR, index modulation over M beams beats single-beam steering
exactly when the geometric mean of the weaker path gains clears a threshold
proportional to the strongest gain. Under an exponentially decaying gain
profile w_n = gamma^(n-1) the threshold becomes a scalar condition in gamma
whose unit crossing is found by bracketed bisection (the function is
monotone and flat near gamma -> 0, so raw Newton from a blind guess is not
safe; an optional Newton polish sharpens the bisection result).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NoRootError, ParameterError

RELAXED_STEP = 0.01


@dataclass(frozen=True)
class MarginQuery:
    """Inputs of a margin search over the decaying-gain model."""

    gamma: float
    n0: float
    g1: float
    b_max: int = 6
    relax_integer: bool = False

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ParameterError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.n0 < 0:
            raise ParameterError(f"n0 must be >= 0, got {self.n0}")
        if self.g1 <= 0:
            raise ParameterError(f"g1 must be > 0, got {self.g1}")
        if self.b_max < 0:
            raise ParameterError(f"b_max must be >= 0, got {self.b_max}")


class ThresholdResult(NamedTuple):
    tau: float
    geo_mean: float
    holds: bool


def two_path_margin(w1: float, w2: float) -> float:
    """Signed margin 4 w2 - w1 of the two-beam superiority test.

    Positive means index modulation is guaranteed to win at high SNR, zero
    is the boundary, negative gives no guarantee.
    """
    if w2 <= 0:
        raise ParameterError(f"w2 must be > 0, got {w2}")
    if w1 < w2:
        raise ParameterError("gains must be ordered w1 >= w2")
    return 4.0 * w2 - w1


def geometric_mean_threshold(w, g, n0: float) -> ThresholdResult:
    """Geometric-mean superiority test over M >= 2 ordered path gains.

    tau = M^(-M/(M-1)) exp(4 n0 sum_n 1/(w_n g_n)); the condition holds
    (strictly) when the geometric mean of w_2..w_M exceeds tau * w_1.
    """
    w = np.atleast_1d(np.asarray(w, dtype=np.float64))
    g = np.atleast_1d(np.asarray(g, dtype=np.float64))
    m = len(w)
    if m < 2:
        raise ParameterError(f"need at least 2 paths, got {m}")
    if len(g) != m:
        raise ParameterError("w and g must have equal lengths")
    if np.any(w <= 0) or np.any(g <= 0):
        raise ParameterError("all gains must be > 0")
    if n0 < 0:
        raise ParameterError(f"n0 must be >= 0, got {n0}")
    tau = m ** (-m / (m - 1.0)) * math.exp(4.0 * n0 * float(np.sum(1.0 / (w * g))))
    prod = float(np.prod(w[1:]))
    if prod > 0:
        geo_mean = prod ** (1.0 / (m - 1.0))
    else:  # product underflowed; fall back to the log form
        geo_mean = math.exp(float(np.mean(np.log(w[1:]))))
    return ThresholdResult(tau=tau, geo_mean=geo_mean, holds=geo_mean > tau * w[0])


def high_snr_superiority(w) -> bool:
    """Noise-free limit of geometric_mean_threshold (array gains drop out)."""
    w = np.atleast_1d(np.asarray(w, dtype=np.float64))
    return geometric_mean_threshold(w, np.ones_like(w), 0.0).holds


def decay_condition_value(m: float, gamma: float, n0: float, g1: float) -> float:
    """Value of the decaying-gain superiority expression; > 1 means M beams win.

    M^(M/(M-1)) gamma^(M/2) exp(-4 n0 (gamma^(1-M) - gamma) / (g1 (1-gamma))).
    m may be non-integer (relaxed search grids); m = 1 is defined as exactly 1,
    the system compared against itself.
    """
    if not 0.0 < gamma < 1.0:
        raise ParameterError(f"gamma must lie in (0, 1), got {gamma}")
    if g1 <= 0:
        raise ParameterError(f"g1 must be > 0, got {g1}")
    if n0 < 0:
        raise ParameterError(f"n0 must be >= 0, got {n0}")
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    if m == 1:
        return 1.0
    lead = m ** (m / (m - 1.0)) * gamma ** (m / 2.0)
    if n0 == 0:
        return float(lead)
    inverse_gain_sum = (gamma ** (1.0 - m) - gamma) / (1.0 - gamma)
    return float(lead * math.exp(-4.0 * n0 * inverse_gain_sum / g1))


def spim_margin(query: MarginQuery) -> float:
    """Largest beam count whose decay-condition value exceeds 1; 1 when none does.

    Candidates are the powers of two 2^b, b <= b_max, or a 0.01-step grid
    over [1, 2^b_max] when the integer requirement is relaxed.
    """
    top = 2.0 ** query.b_max
    if query.relax_integer:
        steps = int(round((top - 1.0) / RELAXED_STEP))
        candidates = 1.0 + RELAXED_STEP * np.arange(1, steps + 1)
    else:
        candidates = np.array([2.0 ** b for b in range(1, query.b_max + 1)])
    best = 1.0
    for m in candidates:
        if decay_condition_value(float(m), query.gamma, query.n0, query.g1) > 1.0:
            best = float(m)
    return best if query.relax_integer else int(best)


def gamma_crossover(m: float, n0: float, g1: float, *, tol: float = 1e-6,
                    newton_polish: bool = True) -> float:
    """Root gamma of decay_condition_value(m, gamma, n0, g1) = 1 inside (0, 1).

    The bracket endpoints are sign-checked on every call; bisection narrows
    to below `tol`, then an optional guarded Newton polish (central-difference
    slope) sharpens the residual.
    """
    if m < 2:
        raise ParameterError(f"need m >= 2, got {m}")

    def f(gamma: float) -> float:
        return decay_condition_value(m, gamma, n0, g1) - 1.0

    lo, hi = 1e-9, 1.0 - 1e-9
    if not (f(lo) < 0.0 < f(hi)):
        raise NoRootError(
            f"no sign change of the decay condition in ({lo}, {hi}) for m={m}, n0={n0}")
    width = min(tol, 1e-7)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    root = 0.5 * (lo + hi)
    if newton_polish:
        step = 1e-7
        for _ in range(4):
            value = f(root)
            slope = (f(min(root + step, hi)) - f(max(root - step, lo))) / (2.0 * step)
            if slope == 0.0:
                break
            candidate = root - value / slope
            if not lo <= candidate <= hi:
                break
            moved = abs(candidate - root)
            root = candidate
            if moved < 1e-13:
                break
    return float(root)
