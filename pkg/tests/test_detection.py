import numpy as np
import pytest
import scipy.special

from burstqec.detection import (CounterState, DetectionConfig, DetectionEvent,
                                calibrate, choose_window, erfinv,
                                even_cycle_statistic, event_rate, lower_median,
                                scan_stream, threshold)


def test_erfinv_against_scipy():
    ys = np.concatenate([np.linspace(-0.9999, 0.9999, 201), [0.0, 0.5, -0.5]])
    for y in ys:
        assert erfinv(float(y)) == pytest.approx(
            float(scipy.special.erfinv(y)), abs=1e-9)


def test_threshold_examples():
    # frozen reference: Gaussian tail bound at 1 - alpha over a 300-cycle
    # window with per-cycle mean 0.01 and sd 0.0995
    assert threshold(0.01, 0.0995, 300, 0.01) == pytest.approx(7.4391598892,
                                                               abs=1e-6)
    # alpha = 1 degenerates to the window mean
    assert threshold(0.01, 0.0995, 300, 1.0) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        threshold(0.01, 0.1, 300, 0.0)


def test_event_rate_closed_form():
    # q = probability a detector fires: odd number of flips among n data
    # contributions at rate p and two measurement reads at rate p_meas
    assert event_rate(4, 0.0, 0.0) == 0.0
    q = event_rate(4, 1e-3, 1e-3)
    want = 0.5 * (1 - (1 - 2e-3) ** 4 * (1 - 2e-3) ** 2)
    assert q == pytest.approx(want)
    # Monte-Carlo confirmation
    rng = np.random.default_rng(0)
    n = 400000
    flips = (rng.random((n, 6)) < 1e-3).sum(axis=1) % 2
    assert flips.mean() == pytest.approx(q, abs=4 * np.sqrt(q / n))


def test_counter_state_matches_naive_window_sum():
    rng = np.random.default_rng(12)
    c_win, n_pos, cycles = 7, 5, 40
    stream = (rng.random((cycles, n_pos)) < 0.3).astype(np.uint8)
    counter = CounterState(n_pos, c_win)
    for t in range(cycles):
        counter.update(stream[t])
        lo = max(0, t - c_win + 1)
        np.testing.assert_array_equal(counter.counts,
                                      stream[lo:t + 1].sum(axis=0))


def test_calibrate_recovers_bernoulli_moments():
    rng = np.random.default_rng(3)
    q = 0.05
    stream = (rng.random((5000, 30)) < q).astype(np.uint8)
    mu, sigma = calibrate(stream, c_win=100)
    assert mu == pytest.approx(q, abs=0.003)
    assert sigma == pytest.approx(np.sqrt(q * (1 - q)), abs=0.01)


def test_calibrate_rejects_short_streams():
    with pytest.raises(ValueError):
        calibrate(np.zeros((50, 4), dtype=np.uint8), c_win=100)


def test_even_cycle_statistic():
    stream = np.ones((700, 4), dtype=np.uint8)
    # c_win + 1 terms: cycles t, t-2, ..., t-2*c_win
    assert even_cycle_statistic(stream, 2, 650, 300) == 301
    stream = np.zeros((700, 4), dtype=np.uint8)
    stream[648, 1] = 1  # odd offset from t=650? no: 650-648=2, counted
    assert even_cycle_statistic(stream, 1, 650, 300) == 1
    stream[649, 1] = 1  # odd offset, never counted
    assert even_cycle_statistic(stream, 1, 650, 300) == 1
    with pytest.raises(ValueError):
        even_cycle_statistic(stream, 0, 500, 300)


def test_lower_median():
    assert lower_median([3.0, 1.0, 2.0]) == 2.0
    assert lower_median([4.0, 1.0, 3.0, 2.0]) == 2.0


def test_detection_event_validates_ordering():
    with pytest.raises(AssertionError):
        DetectionEvent(detect_cycle=5, estimated_start=9,
                       estimated_center=(1.0, 1.0), members=[])


def _positions(n):
    side = int(np.ceil(np.sqrt(n)))
    return np.array([(i // side + 0.5, i % side + 0.5) for i in range(n)])


def test_scan_stream_quiet_stream_no_event():
    rng = np.random.default_rng(8)
    q = 0.01
    config = DetectionConfig(c_win=200, mu=q, sigma=np.sqrt(q * (1 - q)),
                             alpha=0.01, n_th=10)
    n_pos = 60
    for _ in range(5):
        events = (rng.random((2000, n_pos)) < q).astype(np.uint8)
        assert scan_stream(events, config, _positions(n_pos)) is None


def test_scan_stream_finds_planted_burst():
    rng = np.random.default_rng(9)
    q = 0.01
    config = DetectionConfig(c_win=200, mu=q, sigma=np.sqrt(q * (1 - q)),
                             alpha=0.01, n_th=10)
    n_pos = 60
    events = (rng.random((2000, n_pos)) < q).astype(np.uint8)
    burst = np.arange(12)  # a 12-position cluster lights up from cycle 900
    events[900:, burst] = (rng.random((1100, 12)) < 0.45)
    hit = scan_stream(events, config, _positions(n_pos))
    assert hit is not None
    assert hit.detect_cycle >= 900
    assert hit.detect_cycle - 900 <= config.c_win
    assert hit.estimated_start <= hit.detect_cycle
    assert len(hit.members) > config.n_th


def test_scan_stream_needs_enough_positions():
    # a single hot position must never trigger (n_ano <= n_th)
    rng = np.random.default_rng(10)
    q = 0.01
    config = DetectionConfig(c_win=200, mu=q, sigma=np.sqrt(q * (1 - q)),
                             alpha=0.01, n_th=10)
    n_pos = 60
    events = (rng.random((2000, n_pos)) < q).astype(np.uint8)
    events[900:, 3] = 1
    assert scan_stream(events, config, _positions(n_pos)) is None


def test_choose_window_monotone_requirements():
    q_n = event_rate(4, 1e-3, 1e-3)
    q_a = event_rate(4, 0.5, 0.5)
    c = choose_window(q_n, q_a, 440, 40)
    assert c >= 1
    # a smaller window must fail at least one of the analytic criteria,
    # otherwise choose_window did not return the minimum
    if c > 1:
        with pytest.raises(ValueError):
            choose_window(q_n, q_a, 440, 40, c_max=c - 1)


def test_choose_window_rejects_small_regions():
    q_n = event_rate(4, 1e-3, 1e-3)
    q_a = event_rate(4, 0.5, 0.5)
    with pytest.raises(ValueError):
        choose_window(q_n, q_a, 440, n_region=10, n_th=20)
