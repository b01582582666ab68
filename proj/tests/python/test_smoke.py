"""Smoke tests for the python bindings: values the C++ suite already pins,
checked once more through the module surface."""

import math

import pytest

import relayfb


def one_relay_channel(snr=1.0):
    return relayfb.ChannelParams(var_sd=1.0, var_sr=[1.0], var_rd=[1.0], snr=snr)


def test_one_relay_closed_form():
    assert relayfb.expected_phases_one_relay(0.25, 0.8) == pytest.approx(1.35, abs=1e-14)
    for p_bar in (0.0, 0.3, 0.7, 1.0):
        assert relayfb.expected_phases_one_relay(p_bar, 0.5) == pytest.approx(1.5)
    assert relayfb.phase_derivative_sign(0.3) == "decreasing"
    assert relayfb.phase_derivative_sign(0.9) == "increasing"


def test_routes_agree_and_hit_known_values():
    assert relayfb.expected_phases([0.3, 0.9], 0.5, 2) == pytest.approx(1.75, abs=1e-12)
    tree = relayfb.expected_phases_tree([0.3, 0.9], 0.5, 2)
    assert tree == pytest.approx(1.75, abs=1e-12)
    assert relayfb.expected_phases([0.5] * 10, 0.5, 10) == pytest.approx(
        2.0 - 2.0**-10, abs=1e-12
    )
    assert relayfb.expected_phases([0.4], 0.9, 0) == 1.0

    leaves = relayfb.phase_tree_leaves([0.6], 0.8, 1)
    assert len(leaves) == 4
    assert sum(prob for prob, _, _ in leaves) == pytest.approx(1.0, abs=1e-12)


def test_source_outage_prob():
    params = one_relay_channel()
    assert relayfb.source_outage_prob(params, 0.5) == pytest.approx(
        1.0 - math.exp(-1.0), abs=1e-12
    )
    assert relayfb.source_outage_prob(params, 0.0) == 0.0


def test_capacity_prefactors():
    params = one_relay_channel(snr=0.1)
    perfect = relayfb.df_capacity(params, epsilon=0.01, p=1.0)
    assert perfect.residual <= 1e-10
    p_bar = relayfb.source_outage_prob(params, perfect.rate)
    assert perfect.expected_phases == pytest.approx(1.0 + p_bar, abs=1e-10)

    worthless = relayfb.df_capacity(params, epsilon=0.01, p=0.5)
    assert worthless.expected_phases == pytest.approx(1.5, abs=1e-12)
    assert relayfb.baf_capacity(params, 0.01, 1.0).rate >= perfect.rate

    with pytest.raises(Exception):
        relayfb.df_capacity(params, epsilon=0.0, p=1.0)


def test_simulation_determinism_and_closed_form():
    params = one_relay_channel()
    a = relayfb.simulate(params, rate=0.5, p=0.5, strategy=relayfb.Strategy.df,
                         blocks=200_000, seed=7)
    b = relayfb.simulate(params, rate=0.5, p=0.5, strategy=relayfb.Strategy.df,
                         blocks=200_000, seed=7)
    assert a == b
    assert sum(a.phase_histogram) == a.blocks_run == 200_000
    assert abs(a.mean_phases - 1.5) < 3.0 * a.phases_std_error


def test_empirical_profile_feeds_the_tree():
    params = relayfb.ChannelParams(1.0, [0.9, 1.1], [1.2, 0.8], 0.8)
    report = relayfb.simulate(params, 0.5, 0.6, relayfb.Strategy.af, 100_000, seed=3)
    estimate = relayfb.empirical_decode_profile(
        params, 0.5, 0.6, relayfb.Strategy.af, 100_000, seed=3
    )
    predicted = relayfb.expected_phases_tree(estimate.values(), 0.6, 2)
    assert abs(report.mean_phases - predicted) < 5.0 * report.phases_std_error
