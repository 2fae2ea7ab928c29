"""Roll-back-able decoding pipeline with batched, reversible frame updates.

The pipeline consumes detector layers cycle by cycle, decodes in batches of
c_bat cycles, and folds corrections into the Pauli frame as stored XOR
deltas.  Because every state change is an XOR delta (matching batches and
instruction-driven updates alike), a burst detection can roll the pipeline
back to a batch boundary and re-decode the retained window with
burst-aware weights, without keeping full snapshots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decoder import build_weight_model, correction_from_matching, decode_lattice
from .detection import DetectionEvent
from .noise import AnomalousRegion
from .syndrome import DetectorLattice


def batch_size(c_win: int) -> int:
    """c_bat = round(sqrt(2 * c_win)), minimum 1 (minimizes queue memory)."""
    return max(int(round(math.sqrt(2 * c_win))), 1)


def memory_footprint(d: int, c_win: int) -> dict[str, float]:
    """Per-unit decoder memory in bits for one code patch.

    Syndrome queue: 2 species * d^2 positions * (c_win + c_bat) layers.
    Active-node counter: 2 d^2 counters of ceil-free log2(c_win) bits.
    Matching queue: 2 d^2 * (c_win / c_bat) batch-delta bits.
    """
    if c_win == 0:
        return {"syndrome_queue": 0.0, "counter": 0.0, "matching_queue": 0.0}
    c_bat = batch_size(c_win)
    area = 2 * d * d
    return {
        "syndrome_queue": float(area * (c_win + c_bat)),
        "counter": float(area * math.log2(c_win)),
        "matching_queue": float(area * c_win / c_bat),
    }


def footprint_kbit(d: int, c_win: int) -> dict[str, int]:
    return {k: int(round(v / 1000.0))
            for k, v in memory_footprint(d, c_win).items()}


@dataclass
class RegisterEntry:
    value: int
    cycle: int
    corrected: bool = False
    consumed: bool = False
    corrected_at: int = -1      # decode cycle that corrected it


@dataclass
class ExpansionRequest:
    target: object
    d_exp: int
    hold_cycles: int

    @staticmethod
    def create(target, d: int, d_ano: int, hold_cycles: int,
               d_exp: int | None = None) -> "ExpansionRequest":
        if d_exp is None:
            d_exp = 2 * d
        if d_exp <= d + 2 * d_ano:
            raise ValueError("d_exp must exceed d + 2 * d_ano")
        return ExpansionRequest(target, d_exp, hold_cycles)

    def extend(self, extra_cycles: int) -> None:
        # repeated detection during the hold only lengthens the hold
        self.hold_cycles += extra_cycles


def request_expansion(detection: DetectionEvent, target, d: int, d_ano: int,
                      hold_cycles: int,
                      current: ExpansionRequest | None = None) -> ExpansionRequest:
    if current is not None:
        current.extend(hold_cycles)
        return current
    return ExpansionRequest.create(target, d, d_ano, hold_cycles)


@dataclass
class _Batch:
    start_cycle: int            # first cycle whose layers this decode added
    end_cycle: int              # decode consumed layers < end_cycle
    frame_delta: np.ndarray     # (d, d) uint8 XOR delta
    pairs: list                 # matches, kept for cross-batch bookkeeping
    register_marked: list[int] = field(default_factory=list)


class DecodingPipeline:
    """Single-species streaming decoder with reversible batch folding.

    Every ``batch_cycles`` layers the retained window is decoded as a whole
    and the difference to the current frame is folded in as one XOR delta,
    so the cumulative frame always equals a one-shot decode of the consumed
    prefix, batches are individually reversible, and batched folding equals
    unbatched folding.
    """

    def __init__(self, d: int, p: float, c_lat: int, c_win: int,
                 species: str = "Z", method: str = "greedy"):
        self.d = d
        self.p = p
        self.c_lat = c_lat
        self.c_win = c_win
        self.c_bat = batch_size(c_win)
        self.species = species
        self.method = method
        self.capacity = c_lat + d + self.c_bat
        self.layers: list[np.ndarray] = []
        self.first_cycle = 0            # cycle of layers[0]
        self.t = 0                      # layers consumed so far
        self.decoded_to = 0             # cycles covered by folded batches
        self.frame = np.zeros((d, d), dtype=np.uint8)
        self.batches: list[_Batch] = []
        self.register: list[RegisterEntry] = []
        self.instruction_history: list[tuple[int, np.ndarray]] = []
        self.mode = "uniform"
        self.region: AnomalousRegion | None = None
        self.events: list[tuple[int, str]] = []

    # -- decoding -----------------------------------------------------------

    def _decode_window(self):
        from .decoder import ANOMALY_AWARE, UNIFORM

        detectors = np.array(self.layers, dtype=np.uint8)
        lattice = DetectorLattice(self.species, self.d, detectors)
        mode = ANOMALY_AWARE if self.mode == "aware" else UNIFORM
        wm = build_weight_model(self.d, self.species, self.p, mode,
                                region=self.region,
                                cycles=max(detectors.shape[0] - 1, 1))
        matching = decode_lattice(lattice, wm, method=self.method)
        return correction_from_matching(self.d, self.species, matching), matching

    def _fold_batch(self) -> None:
        correction, matching = self._decode_window()
        delta = correction ^ self.frame
        batch = _Batch(start_cycle=self.decoded_to, end_cycle=self.t,
                       frame_delta=delta, pairs=list(matching.pairs))
        self.frame ^= delta
        horizon = self.t - self.d
        for i, entry in enumerate(self.register):
            if not entry.corrected and entry.cycle <= horizon:
                entry.corrected = True
                entry.corrected_at = self.t
                batch.register_marked.append(i)
        self.batches.append(batch)
        self.decoded_to = self.t

    def step(self, layer: np.ndarray, instructions: tuple = ()) -> None:
        """Consume one detector layer plus this cycle's committed instructions."""
        self.layers.append(np.asarray(layer, dtype=np.uint8))
        self.t += 1
        if len(self.layers) > self.capacity:
            self.layers.pop(0)
            self.first_cycle += 1
        for ins in instructions:
            kind = ins[0]
            if kind == "meas":
                self.register.append(RegisterEntry(value=int(ins[1]),
                                                   cycle=self.t))
            elif kind == "read":
                entry = self.register[ins[1]]
                entry.consumed = True
            elif kind == "frame":
                delta = np.asarray(ins[1], dtype=np.uint8)
                self.frame ^= delta
                self.instruction_history.append((self.t, delta))
            else:
                raise ValueError(f"unknown instruction {kind!r}")
        if self.t - self.decoded_to >= self.c_bat:
            self._fold_batch()

    def flush(self) -> None:
        if self.t > self.decoded_to:
            self._fold_batch()

    # -- rollback -----------------------------------------------------------

    def rollback_point(self, detect_cycle: int) -> int:
        """Largest folded batch boundary at or before detect_cycle - c_lat - d."""
        target = detect_cycle - self.c_lat - self.d
        point = 0
        for b in self.batches:
            if b.end_cycle <= target:
                point = b.end_cycle
        return point

    def rollback(self, detection: DetectionEvent,
                 region: AnomalousRegion | None = None) -> bool:
        """Undo batches behind the detection; False = abort, state unchanged."""
        point = self.rollback_point(detection.detect_cycle)
        if self.first_cycle > point:
            raise ValueError("rollback point fell out of the retained window")
        for entry in self.register:
            if entry.consumed and entry.corrected and entry.corrected_at > point:
                self.events.append((self.t, "abort"))
                return False
        while self.batches and self.batches[-1].end_cycle > point:
            batch = self.batches.pop()
            self.frame ^= batch.frame_delta
            for i in batch.register_marked:
                self.register[i].corrected = False
                self.register[i].corrected_at = -1
        for cycle, delta in reversed(self.instruction_history):
            if cycle > point:
                self.frame ^= delta
        self.instruction_history = [(c, dlt) for c, dlt in
                                    self.instruction_history if c <= point]
        dropped = self.t - point
        del self.layers[len(self.layers) - dropped:]
        self.t = point
        self.decoded_to = point
        self.register = [e for e in self.register if e.cycle <= point]
        if region is not None:
            self.mode = "aware"
            self.region = region
        self.events.append((self.t, "rollback"))
        return True

    def snapshot(self) -> tuple:
        """Comparable copy of the externally visible state (frame, register)."""
        return (self.frame.copy(),
                [(e.value, e.cycle, e.corrected, e.consumed)
                 for e in self.register],
                self.t, self.decoded_to)
