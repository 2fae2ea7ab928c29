"""Syndrome extraction: detector lattices and logical-failure verdicts."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import CodeGeometry, anchor_to_lattice, build_geometry
from .noise import CycleErrors


@dataclass(frozen=True)
class SpeciesIndex:
    """Precomputed index tables for one detector species of a geometry."""

    species: str
    d: int
    n_anc: int
    uv: np.ndarray          # (n_anc, 2) lattice coordinates of the ancillas
    depth: np.ndarray       # (n_anc,) absorbing-axis coordinate (u + v offset)
    supp: np.ndarray        # (n_anc, 4) flattened data indices, d*d pads
    supp_len: np.ndarray    # (n_anc,)
    centers: np.ndarray     # (n_anc, 2) plaquette centers in data coordinates

    @property
    def boundary_span(self) -> int:
        # defects absorb once depth reaches -1 or d-1
        return self.d - 1


@lru_cache(maxsize=None)
def species_index(d: int, species: str) -> SpeciesIndex:
    geom = build_geometry(d)
    anchors = geom.ancillas(species)
    supports = geom.supports(species)
    n = len(anchors)
    uv = np.array([anchor_to_lattice(a, species) for a in anchors], dtype=np.int64)
    if species == "Z":
        depth = np.array([a[0] for a in anchors], dtype=np.int64)
    else:
        depth = np.array([a[1] for a in anchors], dtype=np.int64)
    supp = np.full((n, 4), d * d, dtype=np.int64)
    supp_len = np.zeros(n, dtype=np.int64)
    for k, sup in enumerate(supports):
        for m, (r, c) in enumerate(sup):
            supp[k, m] = r * d + c
        supp_len[k] = len(sup)
    centers = np.array([(i + 0.5, j + 0.5) for i, j in anchors])
    return SpeciesIndex(species, d, n, uv, depth, supp, supp_len, centers)


@dataclass
class DetectorLattice:
    """3D lattice (ancilla x cycle) of detector events for one species.

    ``detectors`` has shape (cycles + 1, n_anc); the final layer comes from a
    terminal noiseless readout round so every defect chain terminates.
    """

    species: str
    d: int
    detectors: np.ndarray

    @property
    def cycles(self) -> int:
        return self.detectors.shape[0] - 1

    @property
    def index(self) -> SpeciesIndex:
        return species_index(self.d, self.species)

    def active_nodes(self) -> np.ndarray:
        """Active (t, u, v) triples in lexicographic order, shape (m, 3)."""
        idx = self.index
        t, k = np.nonzero(self.detectors)
        nodes = np.column_stack([t, idx.uv[k, 0], idx.uv[k, 1]])
        order = np.lexsort((nodes[:, 2], nodes[:, 1], nodes[:, 0]))
        return nodes[order]

    def dump_rows(self):
        """(ancilla_index, cycle, bit) rows for the debug CSV dump."""
        t, k = np.nonzero(self.detectors)
        return [(int(ki), int(ti), 1) for ti, ki in zip(t, k)]


def _syndrome_bits(flips_per_cycle: np.ndarray, meas_flips: np.ndarray,
                   idx: SpeciesIndex) -> np.ndarray:
    """Measured stabilizer outcomes, shape (cycles + 1, n_anc).

    ``flips_per_cycle``: (cycles, d*d + 1) with a trailing zero pad column.
    The final row is the terminal perfect readout (no measurement flips).
    """
    per_cycle_parity = flips_per_cycle[:, idx.supp].sum(axis=2) % 2
    cum = np.cumsum(per_cycle_parity, axis=0) % 2
    s = np.vstack([cum ^ meas_flips, cum[-1:]])
    return s.astype(np.uint8)


def _detectors_from_syndrome(s: np.ndarray) -> np.ndarray:
    v = s.copy()
    v[1:] ^= s[:-1]
    return v


def extract_detectors(geometry: CodeGeometry,
                      history: list[CycleErrors]) -> tuple[DetectorLattice, DetectorLattice]:
    """Turn an error history into (Z-species, X-species) detector lattices.

    The Z-species lattice records parities of accumulated X/Y data errors (the
    input for estimating X corrections); the X-species lattice records Z/Y
    parities.
    """
    d = geometry.d
    cycles = len(history)
    pad = np.zeros((cycles, 1), dtype=np.uint8)

    out = []
    for species, flips_attr, meas_attr in (
        ("Z", "x_flips", "z_meas_flips"),
        ("X", "z_flips", "x_meas_flips"),
    ):
        idx = species_index(d, species)
        flips = np.hstack([
            np.stack([getattr(h, flips_attr).reshape(-1) for h in history]).astype(np.uint8),
            pad,
        ])
        meas = np.stack([getattr(h, meas_attr) for h in history]).astype(np.uint8)
        s = _syndrome_bits(flips, meas, idx)
        out.append(DetectorLattice(species, d, _detectors_from_syndrome(s)))
    return out[0], out[1]


def accumulated_flips(history: list[CycleErrors], species: str) -> np.ndarray:
    """Net data-qubit flips relevant to one species, (d, d) uint8."""
    attr = "x_flips" if species == "Z" else "z_flips"
    total = getattr(history[0], attr).astype(np.uint8).copy()
    for h in history[1:]:
        total ^= getattr(h, attr)
    return total


def residual_syndrome(geometry: CodeGeometry, residual: np.ndarray,
                      species: str) -> np.ndarray:
    """Stabilizer parities of a static data-flip pattern, shape (n_anc,)."""
    idx = species_index(geometry.d, species)
    flat = np.concatenate([residual.reshape(-1).astype(np.uint8), [0]])
    return flat[idx.supp].sum(axis=1) % 2


def logical_failure(geometry: CodeGeometry, history: list[CycleErrors],
                    correction: np.ndarray, species: str = "Z") -> bool:
    """True iff errors XOR correction flips the dual logical operator.

    For the Z species the correction is a set of X flips; failure means the
    residual X pattern crosses the logical-Z support (data row 0) an odd
    number of times.  Raises if the correction does not cancel the syndrome.
    """
    residual = accumulated_flips(history, species) ^ correction.astype(np.uint8)
    if residual_syndrome(geometry, residual, species).any():
        raise ValueError("correction leaves a nonempty residual syndrome")
    if species == "Z":
        support = geometry.logical_z_support
    else:
        support = geometry.logical_x_support
    return bool(sum(int(residual[r, c]) for r, c in support) % 2)
