import math
import os
from pathlib import Path

import pytest

import sagin

ROOT = Path(os.environ.get("SAGIN_SOURCE_DIR", Path(__file__).resolve().parents[2]))
BASELINE = str(ROOT / "scenarios" / "baseline.scenario")


@pytest.fixture(scope="module")
def params():
    return sagin.ShadowedRicianParams(0.1, 0.8, 4)


def test_fading_params(params):
    assert params.rician_k == pytest.approx(4.0)
    assert params.mean_power == pytest.approx(1.0)
    assert sum(params.mixture_weight(k) for k in range(4)) == pytest.approx(1.0, abs=1e-12)
    m1 = sagin.ShadowedRicianParams(0.1, 0.8, 1)
    for x in (0.1, 1.0, 3.0):
        assert sagin.cdf_power(m1, x) == pytest.approx(1 - math.exp(-x), rel=1e-13)
    with pytest.raises(ValueError):
        sagin.ShadowedRicianParams(0.0, 0.8, 4)


def test_cdf_forms_agree(params):
    for x in (0.05, 0.5, 2.0, 6.0):
        assert sagin.cdf_power(params, x) == pytest.approx(sagin.cdf_power_lemma(params, x), rel=1e-12)


def test_samples_match_cdf(params):
    xs = sagin.sample_power(params, 200_000, seed=3)
    assert len(xs) == 200_000
    f = sagin.cdf_power(params, 1.0)
    ecdf = sum(x < 1.0 for x in xs) / len(xs)
    assert abs(ecdf - f) <= 4 * math.sqrt(f * (1 - f) / len(xs))


def test_performance(params):
    assert sagin.ergodic_rate(10.0, sagin.ShadowedRicianParams(0.1, 0.8, 1)) == pytest.approx(
        2.90, abs=0.01
    )
    value, valid = sagin.ber_upper_bound(2.0, params)
    assert value == pytest.approx(0.2 / math.e)
    assert valid
    assert sagin.goodput_lower_bound(10.0, params) < sagin.ergodic_rate(10.0, params)
    ops = [sagin.outage_probability(10 ** (db / 10), params) for db in range(0, 41, 5)]
    assert all(a > b for a, b in zip(ops, ops[1:]))


def test_monte_carlo_agrees(params):
    est = sagin.estimate_outage(params, 10.0, trials=200_000, seed=11)
    assert est.trials == 200_000
    assert est.consistent_with(sagin.outage_probability(10.0, params), 3.0)
    er = sagin.estimate_ergodic_rate(params, 10.0, trials=200_000, seed=12)
    assert er.consistent_with(sagin.ergodic_rate(10.0, params), 3.0)


def test_refraction():
    vacuum = sagin.RefractionProfile(0.0)
    air = sagin.RefractionProfile()
    g = sagin.GeometryScenario(60.0)
    assert air.refractive_index(0.0) == pytest.approx(1.000315)
    ray = sagin.trace(air, g)
    assert ray.excess_km > 0
    assert ray.true_elevation_rad <= g.detected_elevation_rad
    straight = sagin.trace(vacuum, g)
    assert abs(straight.excess_km) < 2e-6
    assert sagin.flat_earth_slant(sagin.GeometryScenario(30.0)) == pytest.approx(600.0)
    with pytest.raises(sagin.PreconditionError):
        sagin.bending_length(air, sagin.GeometryScenario(1.0))


def test_scenario_round_trip():
    s = sagin.Scenario.load(BASELINE)
    assert s.m == 4
    again = sagin.Scenario.parse(s.dump())
    assert again == s
    assert s.lambda_t() > 0
    assert s.normalized_doppler(0.0) == 0.0
    with pytest.raises(sagin.ConfigError, match=r"<string>:2"):
        sagin.Scenario.parse("[geometry]\naltitude_km = high\n")


def test_tables():
    s = sagin.Scenario.load(BASELINE)
    geo = sagin.geometry_table(s, "5:90:18")
    assert len(geo["theta0_deg"]) == 18
    assert all(d >= 0 for d in geo["d_dif_km"])
    perf = sagin.perf_table(s, "0:30:9", "m", [2, 5])
    assert len(perf["P_out"]) == 18
    assert all(b < a for a, b in zip(perf["P_out"][:9], perf["P_out"][9:]))
    dop = sagin.doppler_table(s)
    assert dop["doppler_ratio"][30] == 0.0


def test_validate_and_cli():
    s = sagin.Scenario.load(BASELINE)
    report = sagin.validate(s, trials=100_000)
    assert report.all_passed(), [c.name for c in report.checks if not c.passed]
    code, out, err = sagin.run_cli(["--config", BASELINE, "geometry"])
    assert code == 0
    assert out.startswith("theta0_deg,")
    code, _, err = sagin.run_cli(["--config", "/nonexistent.scenario", "geometry"])
    assert code == 2
    assert "nonexistent" in err
