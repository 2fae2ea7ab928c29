import numpy as np
import pytest

from burstqec.plane import (BlockGrid, Instruction, inject_block_mbbes,
                            schedule_tick, throughput_experiment)


def test_logical_layout():
    grid = BlockGrid(11, 11)
    assert grid.n_logical == 25
    assert all(r % 2 == 1 and c % 2 == 1 for r, c in grid.logical_positions)


def test_unknown_opcode_rejected():
    with pytest.raises(ValueError):
        Instruction("op_bogus")


def test_routing_path_connects_neighbors():
    grid = BlockGrid(5, 5)
    # qubits 0 and 1 sit at (1,1) and (1,3): one routing block between them
    path = grid.shortest_routing_path(0, 1, tick=0)
    assert path == [(1, 2)]


def test_routing_path_detours_around_busy_block():
    grid = BlockGrid(5, 5)
    grid.busy_until[1, 2] = 10
    path = grid.shortest_routing_path(0, 1, tick=0)
    assert path is not None
    assert (1, 2) not in path
    assert len(path) == 3  # e.g. over row 0 or row 2


def test_routing_path_none_when_fenced():
    grid = BlockGrid(5, 5)
    for pos in [(0, 1), (1, 0), (1, 2), (2, 1), (0, 3), (1, 4), (2, 3)]:
        grid.mask_until[pos] = 100
    assert grid.shortest_routing_path(0, 1, tick=0) is None


def test_schedule_conserves_instructions():
    grid = BlockGrid(11, 11)
    rng = np.random.default_rng(2)
    queue = [Instruction("meas_ZZ",
                         tuple(int(q) for q in
                               rng.choice(grid.n_logical, 2, replace=False)))
             for _ in range(200)]
    total = len(queue)
    done = 0
    for tick in range(1000):
        done += len(schedule_tick(grid, queue, tick))
        if not queue:
            break
    assert done == total
    assert not queue


def test_conflicting_pairs_serialize():
    grid = BlockGrid(5, 5)
    queue = [Instruction("meas_ZZ", (0, 1)), Instruction("meas_ZZ", (1, 2))]
    done = schedule_tick(grid, queue, 0)
    # the second instruction shares qubit 1 and must wait
    assert len(done) == 1 and done[0].operands == (0, 1)
    done = schedule_tick(grid, queue, 1)
    assert len(done) == 1 and done[0].operands == (1, 2)


def test_read_always_commits():
    grid = BlockGrid(5, 5)
    grid.busy_until[:] = 100
    queue = [Instruction("read", (0,))]
    assert len(schedule_tick(grid, queue, 0)) == 1


def test_mbbe_masks_vacant_blocks():
    grid = BlockGrid(5, 5)
    rng = np.random.default_rng(0)
    hits = inject_block_mbbes(grid, 1.0, tick=0, duration_ticks=9, rng=rng,
                              q3de=True)
    assert len(hits) == 25
    for pos in [(0, 0), (1, 2), (2, 2)]:
        assert grid.mask_until[pos] == 9
    # logical blocks are not masked; they expand instead
    assert grid.mask_until[1, 1] == 0
    assert grid.expand_until[1, 1] == 9
    assert grid.expand_until[2, 2] == 9  # footprint of qubit at (1,1)


def test_mbbe_without_q3de_leaves_logical_blocks_alone():
    grid = BlockGrid(5, 5)
    rng = np.random.default_rng(0)
    inject_block_mbbes(grid, 1.0, tick=0, duration_ticks=9, rng=rng,
                       q3de=False)
    assert grid.expand_until.max() == 0


def test_throughput_modes():
    ceiling = throughput_experiment("no_mbbe", n_instr=2000, seed=1)
    q3 = throughput_experiment("q3de", n_instr=2000, per_tick_mbbe_p=1e-5,
                               seed=1)
    base = throughput_experiment("baseline_doubled_d", n_instr=2000,
                                 per_tick_mbbe_p=1e-5, seed=1)
    assert ceiling.completed == q3.completed == base.completed == 2000
    assert q3.throughput <= ceiling.throughput + 1e-9
    # the doubled-distance baseline halves per-cycle throughput
    assert base.throughput < 0.6 * ceiling.throughput
    assert ceiling.throughput > 0


def test_throughput_rejects_unknown_mode():
    with pytest.raises(ValueError):
        throughput_experiment("bogus")
