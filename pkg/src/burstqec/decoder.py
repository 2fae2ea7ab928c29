"""Decoding of detector lattices into Pauli corrections."""

from __future__ import annotations

import numpy as np

from . import _fast
from .distances import (HIGH, LOW, Boundary, DijkstraOracle, WeightModel,
                        candidate_boundary, candidate_distance, error_weight)
from .geometry import CodeGeometry, lattice_to_anchor
from .matching import MatchingResult, exact_mwpm, greedy_decode, sort_nodes
from .noise import AnomalousRegion
from .syndrome import DetectorLattice, species_index

UNIFORM = "uniform"
ANOMALY_AWARE = "anomaly_aware"


def species_boundary(d: int) -> Boundary:
    """Absorbing boundary of a species lattice in (u, v) coordinates.

    Both species absorb where the anchor-depth coordinate (u + v) leaves
    [0, d - 2]; the LOW side is the boundary crossed by the logical operator
    of the dual species (data row 0 for Z defects, column 0 for X defects).
    """
    return Boundary(kind="diag", size=d - 1)


def region_lattice_box(region: AnomalousRegion, d: int, species: str,
                       cycles: int):
    """Bounding box of a region's ancillas in (t, u, v) lattice coordinates.

    The physical square footprint maps to a diamond of lattice nodes; the
    decoder weights its bounding box, a deliberate over-cover that keeps the
    candidate-path set constant-size.
    """
    idx = species_index(d, species)
    r0 = region.center[0] - region.d_ano // 2
    c0 = region.center[1] - region.d_ano // 2
    touched = []
    for k in range(idx.n_anc):
        u, v = int(idx.uv[k, 0]), int(idx.uv[k, 1])
        i, j = lattice_to_anchor((u, v), species)
        if (r0 - 1 <= i < r0 + region.d_ano) and (c0 - 1 <= j < c0 + region.d_ano):
            touched.append((u, v))
    if not touched:
        return None
    us = [u for u, _ in touched]
    vs = [v for _, v in touched]
    t0 = max(int(region.start_cycle), 0)
    if np.isinf(region.duration_cycles):
        t1 = cycles
    else:
        t1 = min(int(region.start_cycle + region.duration_cycles), cycles)
    if t1 < t0:
        return None
    return ((t0, t1), (min(us), max(us)), (min(vs), max(vs)))


def build_weight_model(d: int, species: str, p: float, mode: str,
                       region: AnomalousRegion | None = None,
                       cycles: int | None = None,
                       p_meas: float | None = None) -> WeightModel:
    boundary = species_boundary(d)
    if mode == UNIFORM or region is None:
        return WeightModel(boundary, w_normal=error_weight(p),
                           w_time=error_weight(p_meas) if p_meas else None)
    box = region_lattice_box(region, d, species, cycles if cycles is not None else 10**9)
    w_ano = max(error_weight(region.p_ano), 0.0) if region.p_ano < 1 else 0.0
    return WeightModel(
        boundary,
        w_normal=error_weight(p),
        w_ano=w_ano,
        w_time=error_weight(p_meas) if p_meas else None,
        w_time_ano=w_ano,
        region=box,
    )


def _fast_params(wm: WeightModel):
    wn_axes, wa_axes = wm.axis_weights()
    wn = np.array(wn_axes, dtype=np.float64)
    wa = np.array(wa_axes, dtype=np.float64)
    if wm.region is None:
        box = np.zeros(6, dtype=np.int64)
        has_region = False
    else:
        box = np.array([c for pair in wm.region for c in pair], dtype=np.int64)
        has_region = True
    bkind = _fast.BKIND_AXIS if wm.boundary.kind == "axis" else _fast.BKIND_DIAG
    return wn, wa, has_region, box, bkind, wm.boundary.axis, wm.boundary.size


def greedy_match_fast(nodes: np.ndarray, d: int, wm: WeightModel):
    """Numba greedy matcher; nodes must already be in (t, u, v) scan order."""
    params = _fast_params(wm)
    return _fast.greedy_match(nodes, d, *params, wm.w_normal)


def matching_from_arrays(nodes: np.ndarray, partner: np.ndarray,
                         bside: np.ndarray, total: float) -> MatchingResult:
    result = MatchingResult(total_weight=float(total))
    for i in range(len(nodes)):
        if partner[i] == -1:
            result.boundary_matches.append((tuple(int(x) for x in nodes[i]), int(bside[i])))
        elif partner[i] > i:
            result.pairs.append((tuple(int(x) for x in nodes[i]),
                                 tuple(int(x) for x in nodes[partner[i]])))
    return result


def decode_lattice(lattice: DetectorLattice, wm: WeightModel,
                   method: str = "greedy",
                   oracle: DijkstraOracle | None = None) -> MatchingResult:
    """Match all active nodes of one lattice.

    ``oracle`` switches the distance source to full Dijkstra (required for
    multi-region windows, where the candidate formulas do not apply).
    """
    nodes = lattice.active_nodes()
    if oracle is not None:
        dist = oracle.distance
        bdist = oracle.boundary_distance

        def boundary_fn(a):
            lo = bdist(a, LOW)
            hi = bdist(a, HIGH)
            return (lo, LOW) if lo <= hi else (hi, HIGH)

        dist_fn = dist
    else:
        dist_fn = lambda a, b: candidate_distance(wm, a, b)
        boundary_fn = lambda a: candidate_boundary(wm, a)

    if method == "exact":
        return exact_mwpm([tuple(n) for n in nodes], dist_fn, boundary_fn)
    if method == "greedy":
        if oracle is None:
            arr = np.ascontiguousarray(nodes, dtype=np.int64)
            return matching_from_arrays(arr, *greedy_match_fast(arr, lattice.d, wm))
        return greedy_decode([tuple(n) for n in nodes], lattice.d, dist_fn,
                             boundary_fn, threshold_unit=wm.w_normal)
    raise ValueError(f"unknown decode method {method!r}")


# -- correction construction ------------------------------------------------

def _step_data(i: int, j: int, direction: str, species: str):
    """Data qubit toggled by one lattice step from anchor (i, j)."""
    if direction == "+u":
        return i + 1, j + 1
    if direction == "-u":
        return i, j
    if species == "Z":
        return (i + 1, j) if direction == "+v" else (i, j + 1)
    return (i, j + 1) if direction == "+v" else (i + 1, j)


_MOVES = {"+u": (1, 0), "-u": (-1, 0), "+v": (0, 1), "-v": (0, -1)}


def _anchor_ok(i: int, j: int, d: int, species: str) -> bool:
    if species == "Z":
        return 0 <= i <= d - 2 and -1 <= j <= d - 1
    return -1 <= i <= d - 1 and 0 <= j <= d - 2


def spatial_path(d: int, species: str, uv_from, uv_to) -> list[tuple[int, int]]:
    """Data qubits along a monotone lattice walk between two nodes."""
    u, v = uv_from
    tu, tv = uv_to
    i, j = lattice_to_anchor((u, v), species)
    out = []
    while (u, v) != (tu, tv):
        options = []
        if tu != u:
            options.append("+u" if tu > u else "-u")
        if tv != v:
            options.append("+v" if tv > v else "-v")
        for direction in options:
            du, dv = _MOVES[direction]
            ni, nj = lattice_to_anchor((u + du, v + dv), species)
            if _anchor_ok(ni, nj, d, species):
                data = _step_data(i, j, direction, species)
                out.append(data)
                u, v, i, j = u + du, v + dv, ni, nj
                break
        else:
            raise RuntimeError("monotone walk blocked; invalid node pair")
    return out


def boundary_path(d: int, species: str, uv, side: int) -> list[tuple[int, int]]:
    """Data qubits along the direct walk from a node into a boundary."""
    u, v = uv
    i, j = lattice_to_anchor((u, v), species)
    out = []
    toward = ("-u", "-v") if side == LOW else ("+u", "+v")
    if species == "Z":
        depth = lambda ii, jj: ii
    else:
        depth = lambda ii, jj: jj
    target = -1 if side == LOW else d - 1
    while True:
        stepped = False
        for direction in toward:
            du, dv = _MOVES[direction]
            ni, nj = lattice_to_anchor((u + du, v + dv), species)
            data = _step_data(i, j, direction, species)
            if not (0 <= data[0] < d and 0 <= data[1] < d):
                continue
            if depth(ni, nj) == target:
                out.append(data)
                return out
            if _anchor_ok(ni, nj, d, species):
                out.append(data)
                u, v, i, j = u + du, v + dv, ni, nj
                stepped = True
                break
        if not stepped:
            raise RuntimeError("boundary walk blocked")


def correction_from_matching(d: int, species: str,
                             matching: MatchingResult) -> np.ndarray:
    """Translate a matching into a (d, d) data-flip pattern.

    Spatial steps of every matched path toggle their data qubit; time-like
    steps correspond to measurement errors and touch no data.
    """
    corr = np.zeros((d, d), dtype=np.uint8)
    for (t1, u1, v1), (t2, u2, v2) in matching.pairs:
        for r, c in spatial_path(d, species, (u1, v1), (u2, v2)):
            corr[r, c] ^= 1
    for (t, u, v), side in matching.boundary_matches:
        for r, c in boundary_path(d, species, (u, v), side):
            corr[r, c] ^= 1
    return corr


def decode_and_correct(geometry: CodeGeometry,
                       lattices: tuple[DetectorLattice, DetectorLattice],
                       mode: str = UNIFORM,
                       p: float = 1e-3,
                       region: AnomalousRegion | None = None,
                       method: str = "greedy") -> dict[str, np.ndarray]:
    """Decode both species lattices independently into data-flip corrections.

    ``anomaly_aware`` mode requires the region descriptor; the returned
    corrections reproduce the observed syndromes exactly (residual empty).
    """
    if mode == ANOMALY_AWARE and region is None:
        raise ValueError("anomaly_aware mode needs an AnomalousRegion")
    corrections = {}
    for lattice in lattices:
        wm = build_weight_model(geometry.d, lattice.species, p, mode,
                                region=region, cycles=lattice.cycles)
        matching = decode_lattice(lattice, wm, method=method)
        corrections[lattice.species] = correction_from_matching(
            geometry.d, lattice.species, matching)
    return corrections
