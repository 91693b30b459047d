"""Geometric narrow-band multipath channel and uniform-linear-array steering.

Angles are kept in the normalized form a = sin(physical)/2 in [-0.5, 0.5],
so a steering phase advances by 2*pi*a per array element. Conversion from
physical radians happens only at the CLI boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

DEFAULT_AOD_RANGE = (-0.35, 0.35)
DEFAULT_AOA_RANGE = (-0.25, 0.25)

_MAX_RESAMPLE = 10_000


@dataclass(frozen=True)
class ChannelRealization:
    """One narrow-band multipath draw: per-path gain, departure and arrival angle.

    Paths are stored strongest-first; construction sorts the (gain, aod, aoa)
    triples jointly by descending gain, ties keeping their original order.
    """

    n_tx: int
    n_rx: int
    aod: np.ndarray
    aoa: np.ndarray
    gains: np.ndarray

    def __post_init__(self):
        if self.n_tx < 1 or self.n_rx < 1:
            raise ParameterError("antenna counts must be >= 1")
        aod = np.atleast_1d(np.asarray(self.aod, dtype=np.float64))
        aoa = np.atleast_1d(np.asarray(self.aoa, dtype=np.float64))
        gains = np.atleast_1d(np.asarray(self.gains, dtype=np.float64))
        if not (len(aod) == len(aoa) == len(gains)) or len(gains) < 1:
            raise ParameterError("aod, aoa and gains must share a common length >= 1")
        if np.any(gains < 0):
            raise ParameterError("path gains must be non-negative")
        for name, angles in (("aod", aod), ("aoa", aoa)):
            if np.any(np.abs(angles) > 0.5):
                raise ParameterError(f"normalized {name} values must lie in [-0.5, 0.5]")
        order = np.argsort(-gains, kind="stable")
        object.__setattr__(self, "aod", aod[order])
        object.__setattr__(self, "aoa", aoa[order])
        object.__setattr__(self, "gains", gains[order])

    @property
    def n_paths(self) -> int:
        return len(self.gains)


def normalized_from_physical(angle_rad: float) -> float:
    """Map a physical angle in radians to the normalized form sin(angle)/2."""
    return float(0.5 * np.sin(angle_rad))


def _steering(angle: float, n: int) -> np.ndarray:
    if n < 1:
        raise ParameterError(f"array size must be >= 1, got {n}")
    offsets = np.arange(n) - (n - 1) / 2.0
    return np.exp(-2j * np.pi * angle * offsets) / np.sqrt(n)


def steering_vector_tx(phi: float, n_tx: int) -> np.ndarray:
    """Unit-norm transmit array response; entry k is exp(-j2*pi*phi*(k-(n-1)/2))/sqrt(n)."""
    return _steering(phi, n_tx)


def steering_vector_rx(theta: float, n_rx: int) -> np.ndarray:
    """Unit-norm receive array response, same form as the transmit side."""
    return _steering(theta, n_rx)


def build_channel(real: ChannelRealization) -> np.ndarray:
    """Assemble the (n_rx, n_tx) matrix sum_i sqrt(w_i) a_rx(theta_i) a_tx(phi_i)^H."""
    p = np.column_stack([steering_vector_rx(t, real.n_rx) for t in real.aoa])
    q = np.column_stack([steering_vector_tx(f, real.n_tx) for f in real.aod])
    return (p * np.sqrt(real.gains)) @ q.conj().T


def min_angle_separation(n_tx: int, n_rx: int) -> float:
    """Resampling floor on pairwise angle distance, 1/(4 max(n_tx, n_rx))."""
    return 1.0 / (4.0 * max(n_tx, n_rx))


def _draw_separated(rng: np.random.Generator, n: int, lo: float, hi: float,
                    floor: float) -> np.ndarray:
    if n == 1:
        return rng.uniform(lo, hi, size=1)
    for _ in range(_MAX_RESAMPLE):
        draw = np.sort(rng.uniform(lo, hi, size=n))
        if np.min(np.diff(draw)) >= floor:
            return rng.permutation(draw)
    raise ParameterError(
        f"could not draw {n} angles in [{lo}, {hi}] with separation {floor}")


def sample_channel(rng: np.random.Generator, n_tx: int, n_rx: int, n_paths: int, *,
                   gains=None, decay: float | None = None,
                   aod_range=DEFAULT_AOD_RANGE,
                   aoa_range=DEFAULT_AOA_RANGE) -> ChannelRealization:
    """Draw a channel with uniform angles and explicit or decaying gains.

    Exactly one of `gains` (explicit per-path powers) or `decay` (gamma in
    (0,1), giving w_n = gamma**(n-1)) must be given. Angle draws are rejected
    until every pairwise distance, per side, reaches min_angle_separation so
    near-coincident paths cannot occur at finite array sizes.
    """
    if (gains is None) == (decay is None):
        raise ParameterError("pass exactly one of gains= or decay=")
    if n_paths < 1:
        raise ParameterError("n_paths must be >= 1")
    if decay is not None:
        if not 0.0 < decay < 1.0:
            raise ParameterError(f"decay must lie in (0, 1), got {decay}")
        gains = decay ** np.arange(n_paths, dtype=np.float64)
    gains = np.asarray(gains, dtype=np.float64)
    if len(gains) != n_paths:
        raise ParameterError(f"expected {n_paths} gains, got {len(gains)}")
    for name, (lo, hi) in (("aod_range", tuple(aod_range)), ("aoa_range", tuple(aoa_range))):
        if not (-0.5 <= lo < hi <= 0.5):
            raise ParameterError(f"{name} must be an increasing pair within [-0.5, 0.5]")
    floor = min_angle_separation(n_tx, n_rx)
    aod = _draw_separated(rng, n_paths, *tuple(aod_range), floor)
    aoa = _draw_separated(rng, n_paths, *tuple(aoa_range), floor)
    return ChannelRealization(n_tx=n_tx, n_rx=n_rx, aod=aod, aoa=aoa, gains=gains)
