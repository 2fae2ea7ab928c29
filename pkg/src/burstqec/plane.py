"""Block-level logical-qubit plane: scheduling, burst outages, throughput.

The plane is a grid of surface-code blocks.  Logical qubits sit at odd-odd
positions; even-indexed rows/columns are routing space for lattice surgery.
Scheduling is greedy in queue order with one tick = d code cycles per
plane-consuming instruction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PLANE_OPS = ("init_zero", "init_A", "init_Y", "op_H", "meas_Z", "meas_ZZ",
             "op_expand")
OPCODES = PLANE_OPS + ("read",)


@dataclass
class Instruction:
    opcode: str
    operands: tuple[int, ...] = ()
    latency_ticks: int = 1
    committed_tick: int = -1

    def __post_init__(self):
        if self.opcode not in OPCODES:
            raise ValueError(f"unknown opcode {self.opcode!r}")


class BlockGrid:
    """rows x cols blocks; logical qubits indexed over odd-odd positions."""

    def __init__(self, rows: int = 11, cols: int = 11):
        self.rows = rows
        self.cols = cols
        self.logical_positions = [(r, c) for r in range(1, rows, 2)
                                  for c in range(1, cols, 2)]
        self.busy_until = np.zeros((rows, cols), dtype=np.int64)
        self.mask_until = np.zeros((rows, cols), dtype=np.int64)
        self.expand_until = np.zeros((rows, cols), dtype=np.int64)

    @property
    def n_logical(self) -> int:
        return len(self.logical_positions)

    def qubit_pos(self, q: int) -> tuple[int, int]:
        return self.logical_positions[q]

    def is_logical(self, pos) -> bool:
        return pos[1] % 2 == 1 and pos[0] % 2 == 1

    def block_free(self, pos, tick: int) -> bool:
        r, c = pos
        return (self.busy_until[r, c] <= tick and self.mask_until[r, c] <= tick
                and self.expand_until[r, c] <= tick)

    def routing_free(self, pos, tick: int) -> bool:
        return not self.is_logical(pos) and self.block_free(pos, tick)

    def occupy(self, positions, until_tick: int) -> None:
        for r, c in positions:
            self.busy_until[r, c] = max(self.busy_until[r, c], until_tick)

    def expand_footprint(self, q: int):
        """2x2 doubling footprint of a logical block, clipped at the edges."""
        r, c = self.qubit_pos(q)
        return [(rr, cc) for rr in (r, r + 1) for cc in (c, c + 1)
                if rr < self.rows and cc < self.cols]

    def apply_expand(self, q: int, until_tick: int) -> None:
        for r, c in self.expand_footprint(q):
            self.expand_until[r, c] = max(self.expand_until[r, c], until_tick)

    def shortest_routing_path(self, a: int, b: int, tick: int):
        """Shortest free routing path between two logical blocks, or None.

        Breadth-first over free routing blocks (4-neighbor); endpoints are the
        logical blocks themselves and do not count as path members.  Ties
        break lexicographically through sorted neighbor expansion.
        """
        start = self.qubit_pos(a)
        goal = self.qubit_pos(b)
        prev: dict[tuple[int, int], tuple[int, int] | None] = {}
        frontier = [start]
        prev[start] = None
        while frontier:
            nxt = []
            for pos in sorted(frontier):
                r, c = pos
                for nb in ((r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)):
                    if not (0 <= nb[0] < self.rows and 0 <= nb[1] < self.cols):
                        continue
                    if nb in prev:
                        continue
                    if nb == goal:
                        path = []
                        cur = pos
                        while cur is not None and cur != start:
                            path.append(cur)
                            cur = prev[cur]
                        return path[::-1]
                    if self.routing_free(nb, tick):
                        prev[nb] = pos
                        nxt.append(nb)
            frontier = nxt
        return None


def schedule_tick(grid: BlockGrid, queue: list[Instruction],
                  tick: int) -> list[Instruction]:
    """Greedily commit ready instructions in queue order for one tick.

    Committed plane instructions occupy their operand blocks (plus the
    routing path for meas_ZZ) for their latency; blocked instructions stay
    queued.  read consumes no plane resources and always commits.
    """
    committed = []
    remaining = []
    for ins in queue:
        if ins.opcode == "read":
            ins.committed_tick = tick
            committed.append(ins)
            continue
        operands = [grid.qubit_pos(q) for q in ins.operands]
        if not all(grid.block_free(pos, tick) for pos in operands):
            remaining.append(ins)
            continue
        if ins.opcode == "meas_ZZ":
            path = grid.shortest_routing_path(ins.operands[0], ins.operands[1],
                                              tick)
            if path is None:
                remaining.append(ins)
                continue
            grid.occupy(path, tick + ins.latency_ticks)
        if ins.opcode == "op_expand":
            grid.apply_expand(ins.operands[0], tick + ins.latency_ticks)
        else:
            grid.occupy(operands, tick + ins.latency_ticks)
        ins.committed_tick = tick
        committed.append(ins)
    queue[:] = remaining
    return committed


def inject_block_mbbes(grid: BlockGrid, per_tick_p: float, tick: int,
                       duration_ticks: int, rng: np.random.Generator,
                       q3de: bool = True) -> list[tuple[int, int]]:
    """Flip each block anomalous with probability per_tick_p for this tick.

    Anomalous vacant blocks are masked from routing for the burst duration;
    anomalous logical blocks expand onto their 2x2 footprint (Q3DE mode)
    protecting the qubit while consuming neighbor space.
    """
    if per_tick_p <= 0.0:
        return []
    hits = np.nonzero(rng.random((grid.rows, grid.cols)) < per_tick_p)
    out = []
    for r, c in zip(*hits):
        pos = (int(r), int(c))
        out.append(pos)
        if grid.is_logical(pos):
            if q3de:
                q = grid.logical_positions.index(pos)
                grid.apply_expand(q, tick + duration_ticks)
        else:
            grid.mask_until[pos] = max(grid.mask_until[pos],
                                       tick + duration_ticks)
    return out


@dataclass
class ThroughputResult:
    mode: str
    completed: int
    ticks: int
    throughput: float        # completed instructions per d code cycles
    se: float


def throughput_experiment(mode: str, n_instr: int = 10_000,
                          per_tick_mbbe_p: float = 0.0,
                          duration_ticks: int = 100,
                          seed: int = 0, rows: int = 11,
                          cols: int = 11, max_ticks: int = 10**7) -> ThroughputResult:
    """Average meas_ZZ completions per d cycles on random logical pairs.

    Modes: no_mbbe (ceiling), q3de (bursts trigger expansion/masking, tick
    stays d cycles), baseline_doubled_d (no burst handling, but every tick
    spans 2d cycles, so per-d-cycle throughput halves).
    """
    if mode not in ("no_mbbe", "q3de", "baseline_doubled_d"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    grid = BlockGrid(rows, cols)
    pairs = []
    for _ in range(n_instr):
        a, b = rng.choice(grid.n_logical, size=2, replace=False)
        pairs.append(Instruction("meas_ZZ", (int(a), int(b))))
    queue = list(pairs)
    cycles_per_tick = 2 if mode == "baseline_doubled_d" else 1
    mbbe_p = 0.0 if mode == "no_mbbe" else per_tick_mbbe_p * cycles_per_tick
    handle_bursts = mode == "q3de"

    completed = 0
    per_tick_counts = []
    tick = 0
    while completed < n_instr and tick < max_ticks:
        if mbbe_p > 0.0:
            inject_block_mbbes(grid, mbbe_p, tick, duration_ticks, rng,
                               q3de=handle_bursts)
        done = schedule_tick(grid, queue, tick)
        completed += len(done)
        per_tick_counts.append(len(done))
        tick += 1
    counts = np.array(per_tick_counts, dtype=np.float64) / cycles_per_tick
    throughput = float(counts.mean())
    se = float(counts.std(ddof=1) / np.sqrt(len(counts))) if len(counts) > 1 else 0.0
    return ThroughputResult(mode, completed, tick, throughput, se)
