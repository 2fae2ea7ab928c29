import math

import numpy as np
import pytest

from burstqec.analysis import (DistanceReduction, MbbeParameters, average_pl,
                               effective_distance_estimate, effective_rate,
                               first_order_exponents, required_density,
                               scalability_sweep)


def test_effective_rate_convex_combination():
    rate, ratio = effective_rate(1e-10, 1e-4, 0.1, 25e-3)
    assert rate == pytest.approx((1 - 2.5e-3) * 1e-10 + 2.5e-3 * 1e-4)
    assert ratio == pytest.approx(2.5e-3 * 1e-4 / 1e-10)
    rate, ratio = effective_rate(0.0, 1e-4, 0.1, 25e-3)
    assert ratio is None
    with pytest.raises(ValueError):
        effective_rate(0.5, 0.5, 100.0, 1.0)


def test_first_order_exponents():
    assert first_order_exponents(21, 4) == (11, 7, 9)
    assert first_order_exponents(9, 0) == (5, 5, 5)
    # a wide burst alone defeats uniform decoding
    n1, n2, n3 = first_order_exponents(9, 5)
    assert n2 <= 0 and n3 >= 1
    with pytest.raises(ValueError):
        first_order_exponents(5, 5)


def test_distance_estimate_recovers_planted_exponent():
    # plant rates following p_l = A * q^n and check the estimator returns the
    # exact exponent gap with tiny propagated error
    q = 0.1
    pl_d = 0.1 * q ** 11
    pl_dm2 = 0.1 * q ** 10
    planted_gap = 4
    pl_ano = 0.1 * q ** (11 - planted_gap / 2)
    est = effective_distance_estimate(pl_ano, 0.0, pl_d, 0.0, pl_dm2, 0.0)
    assert est.reduction == pytest.approx(planted_gap)
    assert est.se == 0.0
    assert est.reportable


def test_distance_estimate_error_propagation():
    # numerical-difference check of the analytic partial derivatives
    base = (2e-4, 0.0, 1e-6, 0.0, 1e-5, 0.0)
    f0 = effective_distance_estimate(*base).reduction
    se = effective_distance_estimate(2e-4, 1e-5, 1e-6, 0.0, 1e-5, 0.0).se
    eps = 1e-9
    f1 = effective_distance_estimate(2e-4 + eps, 0.0, 1e-6, 0.0, 1e-5, 0.0).reduction
    assert se == pytest.approx(abs((f1 - f0) / eps) * 1e-5, rel=1e-4)


def test_distance_estimate_rejects_bad_inputs():
    with pytest.raises(ValueError):
        effective_distance_estimate(1e-3, 0.0, 1e-5, 0.0, 1e-5, 0.0)
    with pytest.raises(ValueError):
        effective_distance_estimate(0.0, 0.0, 1e-5, 0.0, 1e-4, 0.0)


def test_mbbe_parameters_validation():
    MbbeParameters()
    with pytest.raises(ValueError):
        MbbeParameters(f_ano=100.0, tau_ano=1.0)
    with pytest.raises(ValueError):
        MbbeParameters(tau_cyc=-1.0)


def test_average_pl_burst_free_matches_closed_form():
    params = MbbeParameters(f_ano=0.0)
    got = average_pl(1.0, 4.0, params, q3de=True)
    d = round(11 * math.sqrt(4.0))
    assert got == pytest.approx(0.1 * 10.0 ** (-(d + 1) // 2))


def test_average_pl_q3de_dominates():
    params = MbbeParameters()
    for area in (0.3, 1.0, 3.0, 10.0):
        for rho in (0.5, 2.0, 8.0, 32.0):
            assert (average_pl(area, rho, params, q3de=True)
                    <= average_pl(area, rho, params, q3de=False) + 1e-30)


def test_required_density_burst_free_slope():
    params = MbbeParameters(f_ano=0.0)
    areas = np.logspace(-0.5, 1.5, 9)
    rhos = [required_density(a, params, q3de=True) for a in areas]
    slope = np.polyfit(np.log(areas), np.log(rhos), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.05)


def test_scalability_sweep_rows():
    rows = scalability_sweep([1.0, 10.0], seed=5)
    assert len(rows) == 4
    by = {(r["area_ratio"], r["mode"]): r for r in rows}
    for a in (1.0, 10.0):
        q = by[(a, "q3de")]["density_ratio"]
        p = by[(a, "plain")]["density_ratio"]
        assert q <= p
        if math.isfinite(q):
            assert by[(a, "q3de")]["achieved_pl"] < 1e-10
