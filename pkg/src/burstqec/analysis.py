"""Closed-form and semi-analytic models of burst-error impact.

Covers the burst-weighted effective logical error rate, the first-order
code-distance analysis with and without burst-aware re-decoding, the
Monte-Carlo effective-distance estimator, and the chip-scale density sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def effective_rate(p_l: float, p_l_ano: float, f_ano: float,
                   tau_ano: float) -> tuple[float, float | None]:
    """Time-weighted logical rate and the burst contribution ratio.

    rate = (1 - f*tau) p_l + f*tau*p_l_ano; ratio = f*tau*p_l_ano / p_l
    (None when p_l = 0).
    """
    ft = f_ano * tau_ano
    if not 0.0 <= ft <= 1.0:
        raise ValueError("f_ano * tau_ano must lie in [0, 1]")
    for r in (p_l, p_l_ano):
        if not 0.0 <= r <= 1.0:
            raise ValueError("rates must lie in [0, 1]")
    rate = (1.0 - ft) * p_l + ft * p_l_ano
    ratio = None if p_l == 0.0 else ft * p_l_ano / p_l
    return rate, ratio


def first_order_exponents(d: int, d_ano: int) -> tuple[int, int, int]:
    """Minimum normal-error counts defeating the decoder in the three cases.

    n1: no burst; n2: burst decoded with uniform weights (effective distance
    d - 2*d_ano); n3: burst-aware decoding (effective distance d - d_ano).
    n2 <= 0 means the burst alone defeats the code.
    """
    if not 0 <= d_ano < d:
        raise ValueError("need 0 <= d_ano < d")
    n1 = d // 2 + 1
    n2 = n1 - d_ano
    n3 = (d - d_ano) // 2 + 1
    return n1, n2, n3


@dataclass(frozen=True)
class DistanceReduction:
    reduction: float
    se: float

    @property
    def reportable(self) -> bool:
        return self.se < 4.0


def effective_distance_estimate(pl_ano: float, se_ano: float,
                                pl: float, se: float,
                                pl_dm2: float, se_dm2: float) -> DistanceReduction:
    """Code-distance reduction implied by a burst, from three measured rates.

    reduction = ln(pl_ano / pl) / (0.5 * ln(pl_dm2 / pl)), where pl_dm2 is
    the burst-free rate at distance d - 2 (one exponent step); the standard
    error comes from first-order propagation of the three rate errors.
    """
    if min(pl_ano, pl, pl_dm2) <= 0.0:
        raise ValueError("all rates must be positive")
    if pl_dm2 <= pl:
        raise ValueError("pl(d-2) must exceed pl(d): nonpositive denominator")
    num = math.log(pl_ano / pl)
    den = 0.5 * math.log(pl_dm2 / pl)
    red = num / den
    d_ano_ = 1.0 / (pl_ano * den)
    d_pl = (-den + 0.5 * num) / (pl * den * den)
    d_dm2 = -num * 0.5 / (pl_dm2 * den * den)
    var = (d_ano_ * se_ano) ** 2 + (d_pl * se) ** 2 + (d_dm2 * se_dm2) ** 2
    return DistanceReduction(red, math.sqrt(var))


@dataclass(frozen=True)
class MbbeParameters:
    """Burst environment for the chip-scale models (baseline presets)."""

    f_ano: float = 0.1          # bursts per second on the reference chip
    tau_ano: float = 25e-3      # burst duration, seconds
    tau_cyc: float = 1e-6       # code cycle time, seconds
    p_th: float = 1e-2          # threshold rate; sweeps fix p / p_th = 0.1
    c_lat: int = 30             # detection latency, cycles

    def __post_init__(self):
        if min(self.f_ano, self.tau_ano, self.tau_cyc, self.p_th) < 0:
            raise ValueError("parameters must be nonnegative")
        if self.c_lat < 0:
            raise ValueError("c_lat must be nonnegative")
        if self.f_ano * self.tau_ano >= 1.0:
            raise ValueError("bursts must be non-overlapping: f * tau < 1")


def _pl_of_distance(d_eff: float) -> float:
    # p_L(d) = 0.1 * (p / p_th)^floor((d+1)/2) at p / p_th = 0.1
    if d_eff < 1:
        return 0.5
    return 0.1 * 10.0 ** (-math.floor((d_eff + 1) / 2))


def average_pl(area: float, density: float, params: MbbeParameters,
               q3de: bool, d_ano_base: int = 4, d_base: int = 11,
               total_cycles: float = 1e8,
               rng: np.random.Generator | None = None) -> float:
    """Time-averaged logical rate per cycle under Poisson burst arrivals.

    Patch area scales with chip area, so d = round(d_base * sqrt(area *
    density)); burst frequency scales with area and burst size (in qubits)
    with density, so the side scales with sqrt(density).  Burst arrivals over
    ``total_cycles`` are event-driven: each contributes an exposure window at
    reduced distance — c_lat cycles at d - c with expansion and re-decoding
    (q3de) or the full burst duration at d - 2c without — where c is the
    overlap of the burst square with a minimal logical cut (its side, clipped
    to d).
    """
    d = int(round(d_base * math.sqrt(area * density)))
    d_ano = d_ano_base * math.sqrt(density)
    c = min(d_ano, d)
    base = _pl_of_distance(d)
    f_eff = params.f_ano * area
    mean_events = f_eff * total_cycles * params.tau_cyc
    if rng is None:
        k = mean_events
    else:
        k = float(rng.poisson(mean_events))
    if q3de:
        exposure = float(params.c_lat)
        exposed_pl = _pl_of_distance(d - c)
    else:
        exposure = params.tau_ano / params.tau_cyc
        exposed_pl = _pl_of_distance(d - 2 * c)
    exposed = min(k * exposure, total_cycles)
    return ((total_cycles - exposed) * base + exposed * exposed_pl) / total_cycles


def required_density(area: float, params: MbbeParameters, q3de: bool,
                     target: float = 1e-10, d_ano_base: int = 4,
                     density_cap: float = 1e4, seed: int | None = None) -> float:
    """Smallest density ratio achieving the target rate (inf if saturated).

    Scanned on a fine geometric grid from below; burst arrivals share one
    random stream per area point so the q3de and plain curves see identical
    event counts.
    """
    rho = 1e-2
    while rho <= density_cap:
        rng = None if seed is None else np.random.default_rng(seed)
        if average_pl(area, rho, params, q3de, d_ano_base=d_ano_base,
                      rng=rng) < target:
            return rho
        rho *= 1.02
    return math.inf


def scalability_sweep(area_ratios, params: MbbeParameters | None = None,
                      d_ano_base: int = 4, target: float = 1e-10,
                      seed: int | None = 12345) -> list[dict]:
    """Required density vs chip area for q3de and plain operation."""
    if params is None:
        params = MbbeParameters()
    rows = []
    for i, area in enumerate(area_ratios):
        point_seed = None if seed is None else seed + i
        for mode, q3 in (("q3de", True), ("plain", False)):
            rho = required_density(area, params, q3, target=target,
                                   d_ano_base=d_ano_base, seed=point_seed)
            pl = (average_pl(area, rho, params, q3, d_ano_base=d_ano_base)
                  if math.isfinite(rho) else math.nan)
            rows.append({"area_ratio": area, "mode": mode,
                         "density_ratio": rho, "achieved_pl": pl})
    return rows
