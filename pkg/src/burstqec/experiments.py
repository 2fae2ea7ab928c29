"""Monte Carlo engines and the per-experiment runners behind the CLI.

The logical-error estimator simulates only the Z-species detector lattice
(X-failure counting; the Z-failure channel is symmetric by construction) with
batched numpy sampling and the compiled greedy matcher per trial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _fast
from .decoder import (ANOMALY_AWARE, UNIFORM, _fast_params, build_weight_model)
from .distances import LOW
from .geometry import build_geometry
from .matching import exact_mwpm, weight_model_functions
from .noise import AnomalousRegion
from .syndrome import species_index


@dataclass(frozen=True)
class RateEstimate:
    p_l: float
    se: float
    failures: int
    trials: int


def _data_rates(d: int, p: float, cycles: int,
                region: AnomalousRegion | None) -> np.ndarray:
    rates = np.full((cycles, d * d), p)
    if region is not None:
        mask = region.footprint_mask(d).reshape(-1)
        for t in range(cycles):
            if region.active_at(t):
                rates[t, mask] = region.p_ano
    return rates


def _meas_rates(d: int, species: str, p_meas: float, cycles: int,
                region: AnomalousRegion | None) -> np.ndarray:
    geom = build_geometry(d)
    anchors = geom.ancillas(species)
    rates = np.full((cycles, len(anchors)), p_meas)
    if region is not None:
        r0 = region.center[0] - region.d_ano // 2
        c0 = region.center[1] - region.d_ano // 2
        hit = np.array([r0 - 1 <= i < r0 + region.d_ano
                        and c0 - 1 <= j < c0 + region.d_ano
                        for i, j in anchors])
        for t in range(cycles):
            if region.active_at(t):
                rates[t, hit] = region.p_ano
    return rates


def sample_detector_batch(d: int, p: float, cycles: int, batch: int,
                          rng: np.random.Generator,
                          region: AnomalousRegion | None = None,
                          p_meas: float | None = None,
                          species: str = "Z"):
    """Sample ``batch`` trials of one species' detector lattice at once.

    Returns (detectors, logical_parity): detectors is (batch, cycles + 1,
    n_anc) uint8 including the terminal noiseless round; logical_parity[b] is
    the parity of true data flips on the species' logical support.
    """
    idx = species_index(d, species)
    drates = _data_rates(d, p, cycles, region)
    mrates = _meas_rates(d, species, p if p_meas is None else p_meas,
                         cycles, region)
    flips = rng.random((batch, cycles, d * d)) < drates
    if species == "Z":
        support = np.arange(d)            # data row 0
    else:
        support = np.arange(d) * d        # data column 0
    logical_parity = flips[:, :, support].sum(axis=(1, 2)).astype(np.int64) % 2
    padded = np.concatenate(
        [flips, np.zeros((batch, cycles, 1), dtype=bool)], axis=2)
    parity = padded[:, :, idx.supp].sum(axis=3) % 2
    cum = np.cumsum(parity, axis=1) % 2
    meas = rng.random((batch, cycles, idx.n_anc)) < mrates
    s = np.concatenate([cum ^ meas, cum[:, -1:, :]], axis=1).astype(np.uint8)
    v = s.copy()
    v[:, 1:] ^= s[:, :-1]
    return v, logical_parity


def detector_stream(d: int, p: float, cycles: int, rng: np.random.Generator,
                    region: AnomalousRegion | None = None,
                    p_meas: float | None = None):
    """Merged both-species detector-event stream for burst detection.

    Returns (events, positions): events is (cycles, n_z + n_x) uint8 with no
    terminal round; positions are the matching plaquette centers in data
    coordinates.
    """
    pm = p if p_meas is None else p_meas
    drates = _data_rates(d, p, cycles, region)
    u = rng.random((cycles, d * d))
    x_flips = u < drates                                  # X or Y component
    z_flips = (u >= drates / 2) & (u < 1.5 * drates)      # Y or Z component
    streams, positions = [], []
    for species, flips in (("Z", x_flips), ("X", z_flips)):
        idx = species_index(d, species)
        padded = np.concatenate(
            [flips, np.zeros((cycles, 1), dtype=bool)], axis=1)
        parity = padded[:, idx.supp].sum(axis=2) % 2
        cum = np.cumsum(parity, axis=0) % 2
        meas = rng.random((cycles, idx.n_anc)) < _meas_rates(
            d, species, pm, cycles, region)
        s = (cum ^ meas).astype(np.uint8)
        v = s.copy()
        v[1:] ^= s[:-1]
        streams.append(v)
        positions.append(idx.centers)
    return np.concatenate(streams, axis=1), np.concatenate(positions, axis=0)


def estimate_pl(d: int, p: float, mode: str = "uniform_greedy",
                region: AnomalousRegion | None = None,
                trials: int = 100_000,
                seed: int | np.random.SeedSequence = 0,
                p_meas: float | None = None,
                batch: int = 2000) -> RateEstimate:
    """Logical X error rate per cycle from d-cycle idling trials.

    ``mode`` is one of uniform_greedy / uniform_exact / aware_greedy /
    aware_exact.  A trial fails when the residual of true errors and the
    decoded correction crosses the logical support an odd number of times;
    the parity shortcut (true-flip parity on the support XOR parity of
    low-side boundary matches) gives the same verdict as building the full
    correction, which the tests pin.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    weight_mode = ANOMALY_AWARE if mode.startswith("aware") else UNIFORM
    method = "exact" if mode.endswith("exact") else "greedy"
    if weight_mode == ANOMALY_AWARE and region is None:
        raise ValueError("aware modes need an AnomalousRegion")
    if p == 0.0:
        return RateEstimate(0.0, 0.0, 0, trials)

    cycles = d
    idx = species_index(d, "Z")
    order = np.lexsort((idx.uv[:, 1], idx.uv[:, 0]))
    uv_sorted = idx.uv[order]
    wm = build_weight_model(d, "Z", p, weight_mode, region=region,
                            cycles=cycles, p_meas=p_meas)
    params = _fast_params(wm)
    dist_fn, boundary_fn = weight_model_functions(wm)

    rng = np.random.default_rng(seed)
    failures = 0
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        det, logical_parity = sample_detector_batch(
            d, p, cycles, b, rng, region=region, p_meas=p_meas)
        det = det[:, :, order]
        for k in range(b):
            t, a = np.nonzero(det[k])
            if t.size == 0:
                failures += int(logical_parity[k])
                continue
            nodes = np.column_stack([t, uv_sorted[a, 0], uv_sorted[a, 1]])
            nodes = np.ascontiguousarray(nodes, dtype=np.int64)
            if method == "greedy":
                partner, bside, _ = _fast.greedy_match(
                    nodes, d, *params, wm.w_normal)
                low = int(((partner == -1) & (bside == LOW)).sum()) % 2
            else:
                result = exact_mwpm([tuple(n) for n in nodes],
                                    dist_fn, boundary_fn)
                low = sum(1 for _, side in result.boundary_matches
                          if side == LOW) % 2
            failures += int(logical_parity[k]) ^ low
        done += b

    phat = failures / trials
    se_trial = math.sqrt(max(phat * (1.0 - phat), 1.0 / trials) / trials)
    return RateEstimate(phat / cycles, se_trial / cycles, failures, trials)


def merge_estimates(parts: list[RateEstimate], cycles: int) -> RateEstimate:
    failures = sum(p.failures for p in parts)
    trials = sum(p.trials for p in parts)
    phat = failures / trials
    se_trial = math.sqrt(max(phat * (1.0 - phat), 1.0 / trials) / trials)
    return RateEstimate(phat / cycles, se_trial / cycles, failures, trials)


def _pl_chunk(args):
    kwargs = dict(args)
    return estimate_pl(**kwargs)


def estimate_pl_parallel(d: int, p: float, mode: str = "uniform_greedy",
                         region: AnomalousRegion | None = None,
                         trials: int = 100_000, seed: int = 0,
                         workers: int = 1) -> RateEstimate:
    """Deterministic parallel version: fixed chunking + seed substreams."""
    if workers <= 1 or trials < 20_000:
        return estimate_pl(d, p, mode, region, trials, seed)
    n_chunks = min(workers * 4, max(trials // 5000, 1))
    base = trials // n_chunks
    sizes = [base + (1 if i < trials % n_chunks else 0) for i in range(n_chunks)]
    seeds = np.random.SeedSequence(seed).spawn(n_chunks)
    jobs = [tuple(dict(d=d, p=p, mode=mode, region=region, trials=n,
                       seed=s).items())
            for n, s in zip(sizes, seeds)]
    import multiprocessing as mp

    with mp.Pool(workers) as pool:
        parts = pool.map(_pl_chunk, jobs)
    return merge_estimates(parts, d)
