"""Smoke tests for the python bindings: import, core math, and a short run."""

import math

import pytest

import saladsim as ss


def test_bler_table_basics():
    table = ss.BlerTable.bundled_default()
    # the curve equals one half at its center
    assert table.bler(2, -1.91, 100) == pytest.approx(0.5, abs=1e-12)
    # 10 percent point sits at center + scale * ln(9)
    assert table.bler(6, 5.04 + 0.20 * math.log(9.0), 2000) == pytest.approx(0.1, abs=1e-9)
    assert table.bler(2, 1000.0, 100) < 1e-12
    with pytest.raises(ss.TableLookupError):
        table.bler(99, 0.0, 2000)
    clipped = table.clip_bler_scale(0.999, 0.04)
    assert clipped == (pytest.approx(0.99), pytest.approx(0.5))


def test_mcs_selection():
    table = ss.BlerTable.bundled_default()
    top = ss.select_mcs_illa(table, 0.0, 1.0, 2000)
    assert top.mcs == table.mcs_table().highest
    assert top.feasible
    floor = ss.select_mcs_illa(table, -100.0, 0.1, 2000)
    assert floor.mcs == table.mcs_table().lowest
    assert not floor.feasible
    maxse = ss.select_mcs_maxse(table, 8.0, 0.5, 2000)
    assert maxse.feasible
    assert maxse.predicted_bler <= 0.5


def test_olla_dual_forms_agree():
    cfg = ss.OllaConfig(target=0.1, delta_nack=1.0)
    a, b = ss.OllaState(), ss.OllaState()
    pattern = [False] * 9 + [True]
    for _ in range(100):
        for nack in pattern:
            ss.olla_on_feedback(a, cfg, nack)
            ss.olla_sa_update(b, cfg, nack)
    assert ss.olla_estimate(a) == pytest.approx(ss.olla_estimate(b), abs=1e-9)
    assert ss.olla_estimate(a) == pytest.approx(0.0, abs=1e-9)


def test_salad_adapter_steps():
    table = ss.BlerTable.bundled_default()
    cfg = ss.SaladConfig()
    adapter = ss.SaladAdapter(table, cfg, seed=7)
    feedback = [ss.HarqFeedback(slot=0, mcs=6, tbs_bits=2000, nack=False)]
    out = adapter.step(1, True, 2000, feedback)
    assert out["mcs"] is not None
    assert adapter.estimate_db > 0.0  # an ACK raises the estimate
    assert adapter.integral_error == pytest.approx(cfg.tau)


def test_fit_sigmoid_roundtrip():
    center, scale = 12.2, 0.57
    points = []
    for i in range(20):
        x = center - 3.0 + 6.0 * i / 19.0
        points.append((x, 1.0 - 1.0 / (1.0 + math.exp(-(x - center) / scale))))
    c, s, mse = ss.fit_sigmoid(points)
    assert c == pytest.approx(center, abs=1e-3)
    assert s == pytest.approx(scale, abs=1e-3)
    assert mse < 1e-8


def test_run_scenario_from_string():
    scenario = ss.Scenario.from_string(
        """
[channel]
kind = step
levels_db = -3, 7
switch_slots = 100
n_slots = 300

[traffic]
tbs_bits = 100

[adapter]
algo = salad
seed = 3
"""
    )
    result = ss.run_scenario(scenario)
    assert len(result["trace"]) == 300
    metrics = result["metrics"]
    assert metrics["transmissions"] == 300
    assert metrics["feedbacks_delivered"] == 300
    assert 0.0 <= metrics["long_term_bler"] <= 1.0

    again = ss.run_scenario(scenario)
    assert [r["nack"] for r in result["trace"]] == [r["nack"] for r in again["trace"]]


def test_unknown_scenario_key_raises():
    with pytest.raises(ss.ScenarioConfigError):
        ss.Scenario.from_string("[channel]\nn_slots = 10\nbogus = 1\n")


def test_nelder_mead():
    best_x, best_value = ss.nelder_mead_maximize(
        lambda x: -((x[0] - 3.0) ** 2 + (x[1] + 1.0) ** 2),
        [0.0, 0.0],
        [(-10.0, 10.0), (-10.0, 10.0)],
        max_iters=100,
    )
    assert best_x[0] == pytest.approx(3.0, abs=1e-3)
    assert best_x[1] == pytest.approx(-1.0, abs=1e-3)
    assert best_value == pytest.approx(0.0, abs=1e-6)
