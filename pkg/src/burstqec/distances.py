"""Path weights on 3D detector lattices.

Nodes are (t, u, v) triples: axis 0 is the code-cycle axis, axes 1 and 2 are
the space axes of one species' matching lattice.  Spatial unit steps
correspond to single data-qubit errors and time steps to measurement flips.

Two absorbing-boundary models are supported:

* ``axis``: defects absorb beyond coordinate -1 and ``size`` on one space
  axis (generic rectangular test lattices).
* ``diag``: defects absorb where u + v reaches -1 or ``size`` (the native
  geometry of a rotated-code species lattice, where the boundary rows are
  diagonal in lattice coordinates).

An anomalous region is an axis-aligned box in lattice coordinates; an edge
costs the anomalous weight iff both endpoints lie in the box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LOW, HIGH = 0, 1

Box = tuple[tuple[int, int], tuple[int, int], tuple[int, int]]  # (t, u, v) inclusive


def error_weight(p: float) -> float:
    """Log-likelihood weight -log(p / (1 - p)) of a single error."""
    if not 0.0 < p < 1.0:
        raise ValueError("rate must lie strictly inside (0, 1)")
    return -math.log(p / (1.0 - p))


@dataclass(frozen=True)
class Boundary:
    kind: str        # "axis" or "diag"
    size: int        # absorb beyond -1 and beyond size along the boundary measure
    axis: int = 1    # space axis carrying the boundary when kind == "axis"

    def depth(self, node) -> int:
        if self.kind == "axis":
            return node[self.axis]
        return node[1] + node[2]

    def steps(self, node, side: int) -> int:
        dep = self.depth(node)
        return dep + 1 if side == LOW else self.size - dep


@dataclass(frozen=True)
class WeightModel:
    """Edge weights of one species lattice, with an optional anomalous box."""

    boundary: Boundary
    w_normal: float = 1.0
    w_ano: float | None = None
    w_time: float | None = None
    w_time_ano: float | None = None
    region: Box | None = None

    def __post_init__(self):
        if self.w_ano is not None and self.w_ano > self.w_normal + 1e-12:
            raise ValueError("anomalous weight must not exceed the normal weight")

    @classmethod
    def from_rates(cls, boundary: Boundary, p: float, p_ano: float | None = None,
                   p_meas: float | None = None, region: Box | None = None):
        wn = error_weight(p)
        wa = error_weight(p_ano) if p_ano is not None else None
        wt = error_weight(p_meas) if p_meas is not None else None
        return cls(boundary, wn, wa, wt, wa, region)

    @property
    def anomalous_weight(self) -> float:
        return self.w_normal if self.w_ano is None else self.w_ano

    @property
    def time_weight(self) -> float:
        return self.w_normal if self.w_time is None else self.w_time

    @property
    def time_anomalous_weight(self) -> float:
        if self.w_time_ano is not None:
            return self.w_time_ano
        return self.anomalous_weight

    def axis_weights(self):
        """(normal, anomalous) weight per axis, in (t, u, v) order."""
        wn = (self.time_weight, self.w_normal, self.w_normal)
        wa = (self.time_anomalous_weight, self.anomalous_weight, self.anomalous_weight)
        return wn, wa


def uniform_distance(wm: WeightModel, a, b=None, side: int | None = None) -> float:
    """3D Manhattan distance times w_normal; boundary = minimal crossing steps."""
    if b is not None:
        return wm.w_normal * sum(abs(a[k] - b[k]) for k in range(3))
    if side is None:
        return wm.w_normal * min(wm.boundary.steps(a, LOW), wm.boundary.steps(a, HIGH))
    return wm.w_normal * wm.boundary.steps(a, side)


def _interval_dist(x: int, lo: int, hi: int) -> int:
    if x < lo:
        return lo - x
    if x > hi:
        return x - hi
    return 0


def _clamp(x: int, lo: int, hi: int) -> int:
    return min(max(x, lo), hi)


def candidate_distance(wm: WeightModel, a, b) -> float:
    """Exact node-to-node shortest-path weight with at most one box region.

    Minimum of the direct geodesic at normal weights and the best
    enter-region / traverse / exit-region route.  The latter is minimized in
    closed form: the cost is separable per coordinate and the optimal entry
    and exit points are the coordinate-wise clamps of the endpoints onto the
    box, because interior weights never exceed normal weights.  Under a diag
    boundary the box may spill past the u + v = size - 1 face; the clamp of
    an endpoint can then be unphysical, in which case the depth excess is
    covered outside the region (normal weight) and the in-region terminal
    moves to the nearest point of the diagonal face.
    """
    wn, wa = wm.axis_weights()
    direct = sum(wn[k] * abs(a[k] - b[k]) for k in range(3))
    if wm.region is None:
        return direct
    (tlo, thi), (ulo, uhi), (vlo, vhi) = wm.region
    via = wn[0] * (_interval_dist(a[0], tlo, thi) + _interval_dist(b[0], tlo, thi))
    via += wa[0] * abs(_clamp(a[0], tlo, thi) - _clamp(b[0], tlo, thi))
    cau, cav = _clamp(a[1], ulo, uhi), _clamp(a[2], vlo, vhi)
    cbu, cbv = _clamp(b[1], ulo, uhi), _clamp(b[2], vlo, vhi)
    via += wn[1] * (_interval_dist(a[1], ulo, uhi) + _interval_dist(b[1], ulo, uhi))
    via += wn[2] * (_interval_dist(a[2], vlo, vhi) + _interval_dist(b[2], vlo, vhi))
    s_cap = wm.boundary.size - 1 if wm.boundary.kind == "diag" else None
    if s_cap is None or (cau + cav <= s_cap and cbu + cbv <= s_cap):
        via += wa[1] * abs(cau - cbu) + wa[2] * abs(cav - cbv)
        return min(direct, via)
    if ulo + vlo > s_cap:
        return direct                    # the physical part of the box is empty
    excess_a = max(cau + cav - s_cap, 0)
    excess_b = max(cbu + cbv - s_cap, 0)
    via += wn[1] * (excess_a + excess_b)
    if excess_a and excess_b:
        alo, ahi = max(s_cap - cav, ulo), min(cau, s_cap - vlo)
        blo, bhi = max(s_cap - cbv, ulo), min(cbu, s_cap - vlo)
        via += wa[1] * 2 * max(blo - ahi, alo - bhi, 0)
    else:
        if excess_b:                     # make a the projected endpoint
            cau, cav, cbu, cbv = cbu, cbv, cau, cav
        qlo, qhi = max(s_cap - cav, ulo), min(cau, s_cap - vlo)
        via += wa[1] * min(
            abs(q - cbu) + abs(s_cap - q - cbv)
            for q in (_clamp(cbu, qlo, qhi), _clamp(s_cap - cbv, qlo, qhi)))
    return min(direct, via)


def _boundary_side_cost(wm: WeightModel, a, side: int) -> float:
    wn, wa = wm.axis_weights()
    direct = wm.w_normal * wm.boundary.steps(a, side)
    if wm.region is None:
        return direct
    # exit point Q in the box and entry point P = clamp(a); after leaving the
    # box the path only reduces the boundary depth, at normal weight.
    (tlo, thi), (ulo, uhi), (vlo, vhi) = wm.region
    via = wn[0] * _interval_dist(a[0], tlo, thi)
    if wm.boundary.kind == "axis":
        spans = {1: (ulo, uhi), 2: (vlo, vhi)}
        blo, bhi = spans.pop(wm.boundary.axis)
        (other_axis, (olo, ohi)), = spans.items()
        via += wn[other_axis] * _interval_dist(a[other_axis], olo, ohi)
        pk = _clamp(a[wm.boundary.axis], blo, bhi)
        via += wn[wm.boundary.axis] * _interval_dist(a[wm.boundary.axis], blo, bhi)
        if side == LOW:
            via += wa[wm.boundary.axis] * (pk - blo) + wm.w_normal * (blo + 1)
        else:
            via += wa[wm.boundary.axis] * (bhi - pk) + wm.w_normal * (wm.boundary.size - bhi)
    else:
        size = wm.boundary.size
        if ulo + vlo > size - 1:
            return direct                # the physical part of the box is empty
        pu, pv = _clamp(a[1], ulo, uhi), _clamp(a[2], vlo, vhi)
        via += wn[1] * _interval_dist(a[1], ulo, uhi)
        via += wn[2] * _interval_dist(a[2], vlo, vhi)
        # a clamp past the u + v = size - 1 face is unphysical; the depth
        # excess is covered outside the region at normal weight
        excess = max(pu + pv - (size - 1), 0)
        via += wm.w_normal * excess
        if side == LOW:
            via += wa[1] * (pu - ulo - excess) + wa[2] * (pv - vlo)
            via += wm.w_normal * (ulo + vlo + 1)
        else:
            # exit depth is capped at size - 1: the box may spill past the
            # boundary even though every path has to cross at a real node.
            s_exit = min(uhi + vhi, size - 1)
            qlo = max(ulo, s_exit - vhi)
            qhi = min(uhi, s_exit - vlo)
            if qlo > qhi:
                return direct
            h = min(abs(q - pu) + abs(s_exit - q - pv)
                    for q in (_clamp(pu, qlo, qhi), _clamp(s_exit - pv, qlo, qhi)))
            via += wa[1] * (h - excess) + wm.w_normal * (size - s_exit)
    return min(direct, via)


def candidate_boundary(wm: WeightModel, a) -> tuple[float, int]:
    """Cheapest absorption cost of a node and the chosen boundary side."""
    low = _boundary_side_cost(wm, a, LOW)
    high = _boundary_side_cost(wm, a, HIGH)
    return (low, LOW) if low <= high else (high, HIGH)


class DijkstraOracle:
    """Exact shortest paths on an explicit lattice graph (reference decoder).

    Serves as the independent oracle for :func:`candidate_distance` and as
    the fallback distance source when several regions overlap a window (the
    closed-form candidate set assumes a single box).
    """

    def __init__(self, nodes: list[tuple[int, int, int]], wm: WeightModel,
                 extra_regions: tuple[Box, ...] = ()):
        import scipy.sparse as sp

        self.wm = wm
        self.nodes = list(nodes)
        self.node_id = {n: i for i, n in enumerate(self.nodes)}
        n = len(self.nodes)
        wn, wa = wm.axis_weights()
        regions = tuple(r for r in (wm.region,) if r is not None) + tuple(extra_regions)

        def in_region(node):
            return any(all(lo <= node[k] <= hi for k, (lo, hi) in enumerate(box))
                       for box in regions)

        # Pair distances must not shortcut through the absorbing boundary
        # (two boundary matches are a different matching choice, not a path),
        # so the graph holds lattice edges only; boundary crossings are added
        # per-query as a final w_normal hop from the boundary-adjacent layer.
        rows, cols, data = [], [], []
        self._low_cross = np.zeros(n, dtype=bool)
        self._high_cross = np.zeros(n, dtype=bool)
        for node, i in self.node_id.items():
            node_in = in_region(node)
            for k in (0, 1, 2):
                nb = list(node)
                nb[k] += 1
                nb = tuple(nb)
                j = self.node_id.get(nb)
                if j is None:
                    continue
                w = wa[k] if node_in and in_region(nb) else wn[k]
                rows += [i, j]
                cols += [j, i]
                data += [w, w]
            dep = wm.boundary.depth(node)
            self._low_cross[i] = dep == 0
            self._high_cross[i] = dep == wm.boundary.size - 1
        self.graph = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
        self._cache: dict[int, np.ndarray] = {}

    @classmethod
    def full_box(cls, shape: tuple[int, int, int], wm: WeightModel, **kw):
        nodes = [(t, u, v) for t in range(shape[0])
                 for u in range(shape[1]) for v in range(shape[2])]
        return cls(nodes, wm, **kw)

    def _dist_row(self, src: int) -> np.ndarray:
        if src not in self._cache:
            from scipy.sparse.csgraph import dijkstra as sp_dijkstra

            self._cache[src] = sp_dijkstra(self.graph, indices=src, directed=False)
        return self._cache[src]

    def distance(self, a, b) -> float:
        return float(self._dist_row(self.node_id[a])[self.node_id[b]])

    def boundary_distance(self, a, side: int | None = None) -> float:
        row = self._dist_row(self.node_id[a])
        low = row[self._low_cross].min(initial=np.inf) + self.wm.w_normal
        high = row[self._high_cross].min(initial=np.inf) + self.wm.w_normal
        if side == LOW:
            return float(low)
        if side == HIGH:
            return float(high)
        return float(min(low, high))


def dijkstra_distance(nodes, wm: WeightModel, a, b=None, side=None,
                      extra_regions: tuple[Box, ...] = ()) -> float:
    """One-shot exact distance (builds the graph; prefer DijkstraOracle in loops)."""
    oracle = DijkstraOracle(nodes, wm, extra_regions)
    if b is not None:
        return oracle.distance(a, b)
    return oracle.boundary_distance(a, side)
