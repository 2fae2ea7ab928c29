"""Streaming burst detection from sliding-window detector-event counters.

Each ancilla position keeps a count of its detector events over the last
c_win cycles.  Under nominal noise the count is approximately normal, so a
per-position threshold at a chosen confidence separates burst-elevated
positions; a burst is reported when more than n_th positions exceed it
simultaneously.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def erfinv(y: float) -> float:
    """Inverse Gauss error function.

    Rational initial approximation followed by Newton refinement on
    ``erf(x) - y``; absolute error below 1e-9 over (-0.999, 0.999).
    """
    if not -1.0 < y < 1.0:
        raise ValueError("erfinv domain is (-1, 1)")
    if y == 0.0:
        return 0.0
    a = (0.886226899, -1.645349621, 0.914624893, -0.140543331)
    b = (1.0, -2.118377725, 1.442710462, -0.329097515, 0.012229801)
    c = (-1.970840454, -1.624906493, 3.429567803, 1.641345311)
    e = (1.0, 3.543889200, 1.637067800)
    ay = abs(y)
    if ay <= 0.7:
        z = y * y
        num = ((a[3] * z + a[2]) * z + a[1]) * z + a[0]
        den = (((b[4] * z + b[3]) * z + b[2]) * z + b[1]) * z + b[0]
        x = y * num / den
    else:
        z = math.sqrt(-math.log((1.0 - ay) / 2.0))
        num = ((c[3] * z + c[2]) * z + c[1]) * z + c[0]
        den = (e[2] * z + e[1]) * z + e[0]
        x = math.copysign(num / den, y)
    half_sqrt_pi = math.sqrt(math.pi) / 2.0
    for _ in range(3):
        x -= (math.erf(x) - y) * half_sqrt_pi * math.exp(x * x)
    return x


def threshold(mu: float, sigma: float, c_win: int, alpha: float) -> float:
    """Count threshold V_th = c_win*mu + sqrt(2*c_win*sigma^2)*erfinv(1-alpha)."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    return c_win * mu + math.sqrt(2.0 * c_win * sigma * sigma) * erfinv(1.0 - alpha)


def calibrate(stream: np.ndarray, c_win: int) -> tuple[float, float]:
    """Pooled per-cycle detector-event mean and standard deviation.

    ``stream`` is a (cycles, positions) 0/1 array taken without bursts; the
    first and last cycles are excluded (their detectors compare against the
    initialization / terminal rounds).
    """
    stream = np.asarray(stream)
    if stream.shape[0] < 10 * c_win:
        raise ValueError("calibration stream shorter than 10 * c_win cycles")
    body = stream[1:-1].astype(np.float64)
    mu = float(body.mean())
    return mu, float(body.std())


def event_rate(n_support: int, p: float, p_meas: float) -> float:
    """Per-cycle detector-event probability of one ancilla.

    A detector fires when an odd number of its ``n_support`` data qubits flip
    in the cycle (rate p each) or either of the two compared measurements was
    misread (rate p_meas each): odd-parity probability of independent bits.
    """
    return 0.5 * (1.0 - (1.0 - 2.0 * p) ** n_support * (1.0 - 2.0 * p_meas) ** 2)


@dataclass
class DetectionConfig:
    c_win: int
    mu: float
    sigma: float
    alpha: float = 0.01
    n_th: int = 20
    mask_duration: int = 25_000

    def __post_init__(self):
        if self.c_win < 1:
            raise ValueError("c_win must be >= 1")
        if self.n_th < 1:
            raise ValueError("n_th must be >= 1")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        self.v_th = threshold(self.mu, self.sigma, self.c_win, self.alpha)


@dataclass
class DetectionEvent:
    detect_cycle: int
    estimated_start: int
    estimated_center: tuple[float, float]
    members: list[tuple[float, float]]

    def __post_init__(self):
        assert self.estimated_start <= self.detect_cycle


class CounterState:
    """Sliding-window event counts per position (ring buffer of layers)."""

    def __init__(self, n_positions: int, c_win: int):
        self.c_win = c_win
        self.buffer = np.zeros((c_win, n_positions), dtype=np.uint8)
        self.counts = np.zeros(n_positions, dtype=np.int64)
        self.t = 0
        self.mask_expiry = np.zeros(n_positions, dtype=np.int64)

    def update(self, layer: np.ndarray) -> np.ndarray:
        """V <- V + v_t - v_{t-c_win}; before warm-up only accumulates."""
        slot = self.t % self.c_win
        if self.t >= self.c_win:
            self.counts -= self.buffer[slot]
        self.buffer[slot] = layer
        self.counts += layer
        self.t += 1
        return self.counts

    def unmasked(self) -> np.ndarray:
        return self.mask_expiry <= self.t


def lower_median(values) -> float:
    s = sorted(values)
    return s[(len(s) - 1) // 2]


def scan(counter: CounterState, config: DetectionConfig,
         positions: np.ndarray) -> DetectionEvent | None:
    """Emit a DetectionEvent when > n_th unmasked positions exceed V_th.

    The reported center is the lower median per coordinate of the flagged
    positions, which are then masked for mask_duration cycles so an ongoing
    burst is reported once and a second burst stays detectable.
    """
    flags = (counter.counts > config.v_th) & counter.unmasked()
    if int(flags.sum()) <= config.n_th:
        return None
    members = [tuple(pos) for pos in positions[flags]]
    center = (lower_median([m[0] for m in members]),
              lower_median([m[1] for m in members]))
    counter.mask_expiry[flags] = counter.t + config.mask_duration
    return DetectionEvent(
        detect_cycle=counter.t,
        estimated_start=max(counter.t - config.c_win, 0),
        estimated_center=center,
        members=members,
    )


def scan_stream(events: np.ndarray, config: DetectionConfig,
                positions: np.ndarray) -> DetectionEvent | None:
    """First detection over a whole (cycles, positions) event stream.

    Vectorized equivalent of feeding every layer through update+scan with no
    prior masking; used by the evaluation experiments.
    """
    counts = np.cumsum(events, axis=0, dtype=np.int64)
    windowed = counts.copy()
    windowed[config.c_win:] -= counts[:-config.c_win]
    n_ano = (windowed > config.v_th).sum(axis=1)
    hits = np.nonzero(n_ano > config.n_th)[0]
    if hits.size == 0:
        return None
    t = int(hits[0])
    flags = windowed[t] > config.v_th
    members = [tuple(pos) for pos in positions[flags]]
    center = (lower_median([m[0] for m in members]),
              lower_median([m[1] for m in members]))
    return DetectionEvent(detect_cycle=t + 1,
                          estimated_start=max(t + 1 - config.c_win, 0),
                          estimated_center=center, members=members)


def even_cycle_statistic(stream: np.ndarray, i: int, t: int, c_win: int) -> int:
    """Sum of events at position i over cycles t, t-2, ..., t-2*c_win.

    The even-cycle subsample makes the summands independent (adjacent
    detectors share a measurement), which is what the normal model of the
    window count is derived from; the production counter uses all cycles.
    """
    if t < 2 * c_win:
        raise ValueError("t must be at least 2 * c_win")
    return int(stream[t - 2 * np.arange(c_win + 1), i].sum())


def _binom_sf(k: float, n: int, q: float) -> float:
    from scipy.stats import binom

    return float(binom.sf(math.floor(k), n, q))


def choose_window(q_normal: float, q_ano: float, n_positions: int,
                  n_region: int, alpha: float = 0.01, n_th: int = 20,
                  horizon: int = 100_000, c_max: int = 4096) -> int:
    """Smallest window meeting <1% false-positive and miss rates.

    Analytic screen: under nominal noise a position exceeds V_th with the
    exact binomial tail probability, and a false event needs > n_th of
    n_positions to exceed it somewhere in ``horizon`` cycles (union bound);
    a burst is missed unless > n_th of the n_region affected positions
    exceed V_th once the window fills.  Both probabilities are pushed below
    0.2% to leave margin for the empirical 1% criterion, and the bound is
    binary-searched since both improve with window length.
    """
    if n_region <= n_th:
        raise ValueError("region covers too few positions for this n_th")
    sd = math.sqrt(q_normal * (1.0 - q_normal))

    def ok(c_win: int) -> bool:
        v_th = threshold(q_normal, sd, c_win, alpha)
        if v_th >= c_win * q_ano:
            return False
        fp1 = _binom_sf(n_th, n_positions, _binom_sf(v_th, c_win, q_normal))
        miss = 1.0 - _binom_sf(n_th, n_region, _binom_sf(v_th, c_win, q_ano))
        return horizon * fp1 < 0.002 and miss < 0.002

    lo, hi = 1, c_max
    if not ok(hi):
        raise ValueError("no window up to c_max meets the error-rate targets")
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return hi
