"""Stochastic Pauli noise with optional anomalous (burst-error) regions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import CodeGeometry


@dataclass(frozen=True)
class AnomalousRegion:
    """A spatially localized, temporally bounded jump of the physical error rate.

    The footprint is the axis-aligned ``d_ano`` x ``d_ano`` square of data
    sites centered on ``center`` (rounded toward the origin for even sizes),
    clipped to the code plane.  The region is active for cycles in
    ``[start_cycle, start_cycle + duration_cycles)``; an infinite duration
    models static experiments.
    """

    center: tuple[int, int]
    d_ano: int
    p_ano: float
    start_cycle: int = 0
    duration_cycles: float = math.inf

    def __post_init__(self):
        if self.d_ano < 1:
            raise ValueError("anomaly size must be >= 1")
        if not 0.0 <= self.p_ano <= 1.0:
            raise ValueError("p_ano must lie in [0, 1]")

    def footprint(self, d: int) -> list[tuple[int, int]]:
        r0 = self.center[0] - self.d_ano // 2
        c0 = self.center[1] - self.d_ano // 2
        return [
            (r, c)
            for r in range(max(r0, 0), min(r0 + self.d_ano, d))
            for c in range(max(c0, 0), min(c0 + self.d_ano, d))
        ]

    def active_at(self, cycle: int) -> bool:
        return self.start_cycle <= cycle < self.start_cycle + self.duration_cycles

    def footprint_mask(self, d: int) -> np.ndarray:
        mask = np.zeros((d, d), dtype=bool)
        for r, c in self.footprint(d):
            mask[r, c] = True
        return mask


@dataclass(frozen=True)
class NoiseModel:
    """Per-cycle phenomenological noise.

    Each data site independently suffers X, Y or Z with probability ``p / 2``
    each (``p_ano / 2`` inside an active region).  Each ancilla outcome is
    flipped with probability ``p_meas``; inside a region ``p_meas_ano``
    applies.  By default the measurement flip rate tracks the data rate.
    """

    p: float
    p_meas: float | None = None
    regions: tuple[AnomalousRegion, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if 1.5 * self.p > 1.0:
            raise ValueError("3p/2 exceeds 1: invalid per-Pauli rate")
        if self.p_meas is not None and not 0.0 <= self.p_meas <= 1.0:
            raise ValueError("p_meas must lie in [0, 1]")
        for reg in self.regions:
            if reg.p_ano < self.p:
                raise ValueError("p_ano must be >= p")

    @property
    def meas_rate(self) -> float:
        return self.p if self.p_meas is None else self.p_meas

    def active_regions(self, cycle: int) -> list[AnomalousRegion]:
        return [r for r in self.regions if r.active_at(cycle)]

    def site_rates(self, d: int, cycle: int) -> np.ndarray:
        """Per-site total Pauli rate (3/2 of the per-Pauli probability base)."""
        rates = np.full((d, d), self.p)
        for reg in self.active_regions(cycle):
            rates[reg.footprint_mask(d)] = reg.p_ano
        return rates


@dataclass
class CycleErrors:
    """Sampled Pauli assignment for one code cycle."""

    x_flips: np.ndarray      # (d, d) bool: X or Y on the data site
    z_flips: np.ndarray      # (d, d) bool: Z or Y on the data site
    z_meas_flips: np.ndarray  # (n_z,) bool outcome flips on Z ancillas
    x_meas_flips: np.ndarray  # (n_x,) bool outcome flips on X ancillas


def _ancilla_rates(geometry: CodeGeometry, noise: NoiseModel, cycle: int,
                   species: str) -> np.ndarray:
    base = noise.meas_rate
    rates = np.full(len(geometry.ancillas(species)), base)
    regions = noise.active_regions(cycle)
    if regions:
        for k, (i, j) in enumerate(geometry.ancillas(species)):
            for reg in regions:
                # An ancilla is anomalous when its plaquette center falls
                # inside the region footprint.
                r0 = reg.center[0] - reg.d_ano // 2
                c0 = reg.center[1] - reg.d_ano // 2
                if r0 - 1 <= i < r0 + reg.d_ano and c0 - 1 <= j < c0 + reg.d_ano:
                    rates[k] = reg.p_ano
    return rates


def sample_cycle_errors(geometry: CodeGeometry, noise: NoiseModel, cycle: int,
                        rng: np.random.Generator) -> CycleErrors:
    """Draw one cycle of data Pauli errors and measurement flips.

    A uniform draw u per site selects X for u < p/2, Y for p/2 <= u < p and
    Z for p <= u < 3p/2, so the X-component marginal is exactly p and the
    Z-component marginal is exactly p.
    """
    d = geometry.d
    rates = noise.site_rates(d, cycle)
    u = rng.random((d, d))
    x_flips = u < rates                                  # X or Y component
    z_flips = (u >= rates / 2) & (u < 1.5 * rates)       # Y or Z component
    zm = rng.random(len(geometry.z_ancillas)) < _ancilla_rates(geometry, noise, cycle, "Z")
    xm = rng.random(len(geometry.x_ancillas)) < _ancilla_rates(geometry, noise, cycle, "X")
    return CycleErrors(x_flips, z_flips, zm, xm)
