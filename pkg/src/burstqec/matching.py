"""Matching of active detector nodes: exact MWPM and the greedy decoder."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .distances import WeightModel, candidate_boundary, candidate_distance

Node = tuple[int, int, int]


@dataclass
class MatchingResult:
    """Node pairings and node-boundary absorptions with their total weight."""

    pairs: list[tuple[Node, Node]] = field(default_factory=list)
    boundary_matches: list[tuple[Node, int]] = field(default_factory=list)
    total_weight: float = 0.0

    def covered(self) -> set[Node]:
        nodes = {n for p in self.pairs for n in p}
        nodes.update(n for n, _ in self.boundary_matches)
        return nodes


def sort_nodes(nodes) -> list[Node]:
    """Lexicographic (t, u, v) scan order used by every decoder."""
    return sorted(tuple(n) for n in nodes)


def weight_model_functions(wm: WeightModel):
    dist = lambda a, b: candidate_distance(wm, a, b)
    bdist = lambda a: candidate_boundary(wm, a)
    return dist, bdist


def exact_mwpm(nodes, dist_fn, boundary_fn) -> MatchingResult:
    """Minimum-weight perfect matching with boundary absorptions.

    Uses the standard doubling construction: each real node gets a virtual
    partner at its boundary cost, and virtual nodes pair among themselves for
    free, so a perfect matching always exists on the doubled node set.
    Solved exactly with a blossom-algorithm implementation.
    """
    import networkx as nx

    nodes = sort_nodes(nodes)
    m = len(nodes)
    if m == 0:
        return MatchingResult()
    bcosts = [boundary_fn(n) for n in nodes]

    g = nx.Graph()
    for i in range(m):
        g.add_edge(i, m + i, weight=bcosts[i][0])
        for j in range(i + 1, m):
            g.add_edge(i, j, weight=dist_fn(nodes[i], nodes[j]))
            g.add_edge(m + i, m + j, weight=0.0)

    matching = nx.min_weight_matching(g)
    result = MatchingResult()
    for i, j in matching:
        i, j = min(i, j), max(i, j)
        if i < m <= j:
            if j - m != i:
                raise AssertionError("virtual partner mismatch")
            result.boundary_matches.append((nodes[i], bcosts[i][1]))
            result.total_weight += bcosts[i][0]
        elif j < m:
            result.pairs.append((nodes[i], nodes[j]))
            result.total_weight += dist_fn(nodes[i], nodes[j])
    return result


def brute_force_matching(nodes, dist_fn, boundary_fn) -> float:
    """Exhaustive minimum over all pairings/absorptions (oracle, <= ~10 nodes)."""
    nodes = sort_nodes(nodes)

    def best(remaining: tuple[int, ...]) -> float:
        if not remaining:
            return 0.0
        a, rest = remaining[0], remaining[1:]
        cost = boundary_fn(nodes[a])[0] + best(rest)
        for k, b in enumerate(rest):
            sub = rest[:k] + rest[k + 1:]
            cost = min(cost, dist_fn(nodes[a], nodes[b]) + best(sub))
        return cost

    return best(tuple(range(len(nodes))))


def greedy_decode(nodes, d: int, dist_fn, boundary_fn,
                  threshold_unit: float = 1.0) -> MatchingResult:
    """Radius-growing greedy matcher.

    Thresholds grow as i * threshold_unit for i = 1..d.  At each threshold,
    unmatched nodes are scanned in (t, u, v) order and matched to their
    cheapest unmatched partner or boundary within the threshold; equal-cost
    partners resolve to the lowest-ordered one, and a boundary only wins a
    strictly cheaper comparison.  A final pass absorbs leftovers into their
    nearest boundary, so every node is matched on return.
    """
    nodes = sort_nodes(nodes)
    m = len(nodes)
    partner = [-2] * m          # -2 unmatched, -1 boundary, else index
    bside = [0] * m
    bcosts = [boundary_fn(n) for n in nodes]
    result = MatchingResult()
    eps = 1e-9

    for step in range(1, d + 1):
        tau = step * threshold_unit
        for i in range(m):
            if partner[i] != -2:
                continue
            best_j, best_cost = -1, math.inf
            for j in range(m):
                if j == i or partner[j] != -2:
                    continue
                c = dist_fn(nodes[i], nodes[j])
                if c < best_cost - eps:
                    best_j, best_cost = j, c
            bcost, side = bcosts[i]
            if bcost <= tau + eps and bcost < best_cost - eps:
                partner[i] = -1
                bside[i] = side
                result.boundary_matches.append((nodes[i], side))
                result.total_weight += bcost
            elif best_j >= 0 and best_cost <= tau + eps:
                partner[i], partner[best_j] = best_j, i
                result.pairs.append((nodes[i], nodes[best_j]))
                result.total_weight += best_cost

    for i in range(m):
        if partner[i] == -2:
            bcost, side = bcosts[i]
            partner[i] = -1
            result.boundary_matches.append((nodes[i], side))
            result.total_weight += bcost
    return result
