"""Numba-compiled hot path for Monte Carlo decoding.

Mirrors the reference implementations in ``distances``/``matching`` exactly
(same candidate formulas, same scan order and tie-breaking); the agreement is
pinned by tests.
"""

from __future__ import annotations

import numpy as np
from numba import njit

BKIND_AXIS = 0
BKIND_DIAG = 1


@njit(cache=True)
def _interval_dist(x, lo, hi):
    if x < lo:
        return lo - x
    if x > hi:
        return x - hi
    return 0


@njit(cache=True)
def _clamp(x, lo, hi):
    return min(max(x, lo), hi)


@njit(cache=True)
def pair_cost(a, b, wn, wa, has_region, box, bkind, bsize):
    direct = 0.0
    for k in range(3):
        direct += wn[k] * abs(a[k] - b[k])
    if not has_region:
        return direct
    via = 0.0
    for k in range(3):
        lo, hi = box[2 * k], box[2 * k + 1]
        via += wn[k] * (_interval_dist(a[k], lo, hi) + _interval_dist(b[k], lo, hi))
    tlo, thi = box[0], box[1]
    via += wa[0] * abs(_clamp(a[0], tlo, thi) - _clamp(b[0], tlo, thi))
    ulo, uhi, vlo, vhi = box[2], box[3], box[4], box[5]
    cau = _clamp(a[1], ulo, uhi)
    cav = _clamp(a[2], vlo, vhi)
    cbu = _clamp(b[1], ulo, uhi)
    cbv = _clamp(b[2], vlo, vhi)
    s_cap = bsize - 1
    if bkind == BKIND_AXIS or (cau + cav <= s_cap and cbu + cbv <= s_cap):
        via += wa[1] * abs(cau - cbu) + wa[2] * abs(cav - cbv)
        return min(direct, via)
    if ulo + vlo > s_cap:
        return direct                    # no physical part of the box
    # depth in excess of the u + v = bsize - 1 face is covered outside the
    # region; the in-region terminal moves to the diagonal face
    excess_a = max(cau + cav - s_cap, 0)
    excess_b = max(cbu + cbv - s_cap, 0)
    via += wn[1] * (excess_a + excess_b)
    if excess_a > 0 and excess_b > 0:
        alo, ahi = max(s_cap - cav, ulo), min(cau, s_cap - vlo)
        blo, bhi = max(s_cap - cbv, ulo), min(cbu, s_cap - vlo)
        via += wa[1] * 2 * max(max(blo - ahi, alo - bhi), 0)
    else:
        if excess_b > 0:                 # make a the projected endpoint
            cau, cav, cbu, cbv = cbu, cbv, cau, cav
        qlo, qhi = max(s_cap - cav, ulo), min(cau, s_cap - vlo)
        q1 = _clamp(cbu, qlo, qhi)
        q2 = _clamp(s_cap - cbv, qlo, qhi)
        h1 = abs(q1 - cbu) + abs(s_cap - q1 - cbv)
        h2 = abs(q2 - cbu) + abs(s_cap - q2 - cbv)
        via += wa[1] * min(h1, h2)
    return min(direct, via)


@njit(cache=True)
def boundary_side_cost(a, side, wn, wa, has_region, box, bkind, baxis, bsize):
    if bkind == BKIND_AXIS:
        dep = a[baxis]
    else:
        dep = a[1] + a[2]
    if side == 0:
        direct = wn[1] * (dep + 1)
    else:
        direct = wn[1] * (bsize - dep)
    if not has_region:
        return direct
    via = wn[0] * _interval_dist(a[0], box[0], box[1])
    if bkind == BKIND_AXIS:
        other = 2 if baxis == 1 else 1
        olo, ohi = box[2 * other], box[2 * other + 1]
        via += wn[other] * _interval_dist(a[other], olo, ohi)
        blo, bhi = box[2 * baxis], box[2 * baxis + 1]
        pk = _clamp(a[baxis], blo, bhi)
        via += wn[baxis] * _interval_dist(a[baxis], blo, bhi)
        if side == 0:
            via += wa[baxis] * (pk - blo) + wn[1] * (blo + 1)
        else:
            via += wa[baxis] * (bhi - pk) + wn[1] * (bsize - bhi)
    else:
        ulo, uhi, vlo, vhi = box[2], box[3], box[4], box[5]
        if ulo + vlo > bsize - 1:
            return direct                # no physical part of the box
        pu = _clamp(a[1], ulo, uhi)
        pv = _clamp(a[2], vlo, vhi)
        via += wn[1] * _interval_dist(a[1], ulo, uhi)
        via += wn[2] * _interval_dist(a[2], vlo, vhi)
        # an unphysical clamp's depth excess is covered at normal weight
        excess = max(pu + pv - (bsize - 1), 0)
        via += wn[1] * excess
        if side == 0:
            via += wa[1] * (pu - ulo - excess) + wa[2] * (pv - vlo)
            via += wn[1] * (ulo + vlo + 1)
        else:
            # exit depth capped at bsize - 1 (box may spill past the boundary)
            s_exit = min(uhi + vhi, bsize - 1)
            qlo = max(ulo, s_exit - vhi)
            qhi = min(uhi, s_exit - vlo)
            if qlo > qhi:
                return direct
            q1 = _clamp(pu, qlo, qhi)
            q2 = _clamp(s_exit - pv, qlo, qhi)
            h1 = abs(q1 - pu) + abs(s_exit - q1 - pv)
            h2 = abs(q2 - pu) + abs(s_exit - q2 - pv)
            via += wa[1] * (min(h1, h2) - excess) + wn[1] * (bsize - s_exit)
    return min(direct, via)


@njit(cache=True)
def greedy_match(nodes, d, wn, wa, has_region, box, bkind, baxis, bsize, thr_unit):
    """Greedy radius-growing matcher; see matching.greedy_decode.

    Returns (partner, bside, total_weight): partner[i] = -1 for a boundary
    match, else the paired node index.
    """
    m = nodes.shape[0]
    partner = np.full(m, -2, dtype=np.int64)
    bside = np.zeros(m, dtype=np.int8)
    bcost = np.empty(m, dtype=np.float64)
    bsd = np.empty(m, dtype=np.int8)
    total = 0.0
    eps = 1e-9
    for i in range(m):
        lo = boundary_side_cost(nodes[i], 0, wn, wa, has_region, box, bkind, baxis, bsize)
        hi = boundary_side_cost(nodes[i], 1, wn, wa, has_region, box, bkind, baxis, bsize)
        if lo <= hi:
            bcost[i] = lo
            bsd[i] = 0
        else:
            bcost[i] = hi
            bsd[i] = 1

    for step in range(1, d + 1):
        tau = step * thr_unit
        for i in range(m):
            if partner[i] != -2:
                continue
            best_j = -1
            best_cost = np.inf
            for j in range(m):
                if j == i or partner[j] != -2:
                    continue
                c = pair_cost(nodes[i], nodes[j], wn, wa, has_region, box,
                              bkind, bsize)
                if c < best_cost - eps:
                    best_j = j
                    best_cost = c
            if bcost[i] <= tau + eps and bcost[i] < best_cost - eps:
                partner[i] = -1
                bside[i] = bsd[i]
                total += bcost[i]
            elif best_j >= 0 and best_cost <= tau + eps:
                partner[i] = best_j
                partner[best_j] = i
                total += best_cost

    for i in range(m):
        if partner[i] == -2:
            partner[i] = -1
            bside[i] = bsd[i]
            total += bcost[i]
    return partner, bside, total
