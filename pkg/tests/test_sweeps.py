"""Tests for sweeps.py — grids, crossover refinement, efficiency matching."""
import io
import math
from dataclasses import replace

import pytest

from wastefactor.sweeps import (
    CURVE_CSV_HEADER,
    Curve,
    SweepSample,
    SweepSpec,
    find_crossover,
    find_curve_crossing,
    min_matching_efficiency,
    reference_cef,
    snr_matched_sample,
    sweep,
    write_curve_csv,
)
from wastefactor.transceiver import mmwave_28, subthz_140

# Frozen study results (64 log points over 0.1-10 GHz, 20 dB target unless
# stated).  Brackets are the meaningful claim; exact values pin regressions.
_DL_CROSSOVER_GHZ = 0.710173649
_UL_CROSSOVER_GHZ = 4.206385902
_SNR_CROSSING_GHZ = 1.848080575
_REF_CEF_DL_GBPJ = 3.083396307
_REF_CEF_UL_GBPJ = 0.467945973
_MATCH_TARGET_GBPJ = 0.708811703
_MATCH_ETA = 0.065510620


def _dl_140():
    return replace(subthz_140(), direction="downlink")


def _bandwidth_spec(direction="downlink", snr=20.0, points=64, lo=0.1e9, hi=10e9):
    scenario = replace(subthz_140(), direction=direction)
    return SweepSpec(
        scenario=scenario, parameter="bandwidth", lo=lo, hi=hi,
        points=points, snr_target_db=snr,
    )


class TestSweepSpecValidation:
    def test_unknown_parameter(self):
        with pytest.raises(ValueError):
            SweepSpec(scenario=mmwave_28(), parameter="distance", lo=1.0, hi=2.0)

    def test_bad_range(self):
        with pytest.raises(ValueError):
            SweepSpec(scenario=mmwave_28(), parameter="bandwidth", lo=2e9, hi=1e9)
        with pytest.raises(ValueError):
            SweepSpec(scenario=mmwave_28(), parameter="bandwidth", lo=0.0, hi=1e9)

    def test_spacing_defaults(self):
        bw = SweepSpec(scenario=mmwave_28(), parameter="bandwidth", lo=1e8, hi=1e9)
        eta = SweepSpec(scenario=mmwave_28(), parameter="pa_efficiency", lo=0.05, hi=0.5)
        assert bw.effective_spacing == "log"
        assert eta.effective_spacing == "linear"

    def test_curve_requires_increasing_x(self):
        sample = SweepSample(x=1.0, cef_bpj=1.0, rate_bps=1.0, p_consumed_w=1.0,
                             snr_db=0.0, feasible=True)
        with pytest.raises(ValueError):
            Curve(parameter="bandwidth", unit="Hz",
                  samples=(sample, replace(sample, x=0.5)),
                  band_label="x", direction="uplink")


class TestSweepEvaluation:
    def test_grid_endpoints_and_size(self):
        curve = sweep(_bandwidth_spec(points=16))
        assert len(curve.samples) == 16
        assert curve.samples[0].x == pytest.approx(0.1e9, rel=1e-12)
        assert curve.samples[-1].x == pytest.approx(10e9, rel=1e-12)

    def test_snr_held_at_target(self):
        curve = sweep(_bandwidth_spec(points=8))
        for sample in curve.samples:
            assert sample.snr_db == pytest.approx(20.0, abs=1e-9)

    def test_rate_doubles_with_bandwidth_at_fixed_snr(self):
        scenario = _dl_140()
        b0 = scenario.band.bandwidth_hz
        one = snr_matched_sample(scenario, snr_target_db=20.0)
        two = snr_matched_sample(
            replace(scenario, band=replace(scenario.band, bandwidth_hz=2 * b0)),
            snr_target_db=20.0,
        )
        assert two.rate_bps / one.rate_bps == pytest.approx(2.0, rel=1e-12)

    def test_consumed_power_increases_with_bandwidth(self):
        curve = sweep(_bandwidth_spec(points=16))
        powers = [s.p_consumed_w for s in curve.samples]
        assert all(a < b for a, b in zip(powers, powers[1:]))

    def test_eirp_ceiling_flags_infeasible(self):
        scenario = _dl_140()
        spec = SweepSpec(
            scenario=scenario, parameter="bandwidth", lo=0.1e9, hi=10e9,
            points=16, snr_target_db=20.0, eirp_ceiling_dbm=40.0,
        )
        curve = sweep(spec)
        assert any(not s.feasible for s in curve.samples)
        assert all(math.isfinite(s.cef_bpj) for s in curve.samples)

    def test_evaluator_consistent_with_grid(self):
        curve = sweep(_bandwidth_spec(points=8))
        grid_sample = curve.samples[3]
        again = curve.evaluator(grid_sample.x)
        assert again.cef_bpj == pytest.approx(grid_sample.cef_bpj, rel=1e-12)

    def test_thread_count_does_not_change_results(self):
        serial = sweep(_bandwidth_spec(points=16), max_workers=1)
        threaded = sweep(_bandwidth_spec(points=16), max_workers=8)
        assert serial.samples == threaded.samples

    def test_pa_sweep_monotone_cef(self):
        # at fixed transmit power, a more efficient PA always wastes less
        spec = SweepSpec(scenario=_dl_140(), parameter="pa_efficiency",
                         lo=0.05, hi=0.6, points=12)
        curve = sweep(spec)
        cefs = [s.cef_bpj for s in curve.samples]
        assert all(a < b for a, b in zip(cefs, cefs[1:]))


class TestCrossovers:
    def test_downlink_crossover(self):
        curve = sweep(_bandwidth_spec("downlink"))
        reference = snr_matched_sample(
            replace(mmwave_28(), direction="downlink"), snr_target_db=20.0
        )
        assert reference.cef_bpj / 1e9 == pytest.approx(_REF_CEF_DL_GBPJ, rel=1e-6)
        result = find_crossover(curve, reference.cef_bpj)
        assert result.found
        assert 0.5e9 <= result.x <= 2.0e9
        assert result.x / 1e9 == pytest.approx(_DL_CROSSOVER_GHZ, rel=1e-6)
        assert result.cef_bpj >= reference.cef_bpj * (1.0 - 1e-6)

    def test_uplink_crossover(self):
        curve = sweep(_bandwidth_spec("uplink"))
        reference = snr_matched_sample(
            replace(subthz_140(), direction="uplink", band=mmwave_28().band,
                    bs=mmwave_28().bs, ue=mmwave_28().ue),
            snr_target_db=20.0,
        )
        assert reference.cef_bpj / 1e9 == pytest.approx(_REF_CEF_UL_GBPJ, rel=1e-6)
        result = find_crossover(curve, reference.cef_bpj)
        assert result.found
        assert 2.0e9 <= result.x <= 5.0e9
        assert result.x / 1e9 == pytest.approx(_UL_CROSSOVER_GHZ, rel=1e-6)

    def test_crossover_stable_under_grid_refinement(self):
        reference = snr_matched_sample(
            replace(mmwave_28(), direction="downlink"), snr_target_db=20.0
        )
        coarse = find_crossover(sweep(_bandwidth_spec(points=64)), reference.cef_bpj)
        fine = find_crossover(sweep(_bandwidth_spec(points=128)), reference.cef_bpj)
        assert fine.x == pytest.approx(coarse.x, rel=5e-3)

    def test_unreachable_reference(self):
        curve = sweep(_bandwidth_spec(points=8))
        result = find_crossover(curve, 1e18)
        assert not result.found
        assert result.x is None

    def test_snr_target_curves_cross(self):
        c20 = sweep(_bandwidth_spec(snr=20.0))
        c30 = sweep(_bandwidth_spec(snr=30.0))
        crossing = find_curve_crossing(c20, c30)
        assert crossing.found
        assert 0.5e9 <= crossing.x <= 2.0e9
        assert crossing.x / 1e9 == pytest.approx(_SNR_CROSSING_GHZ, rel=1e-6)
        # the 30 dB target wins at small bandwidth, the 20 dB target at large
        assert c30.samples[0].cef_bpj > c20.samples[0].cef_bpj
        assert c30.samples[-1].cef_bpj < c20.samples[-1].cef_bpj


class TestEfficiencyMatching:
    def test_reference_cef_override(self):
        base = reference_cef(_dl_140())
        lower = reference_cef(_dl_140(), pa_efficiency=0.05)
        assert lower < base

    def test_matching_efficiency_frozen(self):
        target = reference_cef(replace(mmwave_28(), direction="downlink"), pa_efficiency=0.2)
        assert target / 1e9 == pytest.approx(_MATCH_TARGET_GBPJ, rel=1e-6)
        match = min_matching_efficiency(target, _dl_140())
        assert match.found
        assert 0.04 <= match.efficiency <= 0.10
        assert match.efficiency == pytest.approx(_MATCH_ETA, abs=2e-4)
        assert match.cef_bpj >= target

    def test_unreachable_target(self):
        assert not min_matching_efficiency(1e18, _dl_140()).found

    def test_trivial_target_returns_floor(self):
        match = min_matching_efficiency(1.0, _dl_140(), lo=0.01)
        assert match.found
        assert match.efficiency == 0.01

    def test_uplink_less_sensitive_than_downlink(self):
        # CEF slope w.r.t. PA efficiency, centered at the matched efficiency
        eta, delta = _MATCH_ETA, 1e-4

        def slope(direction):
            scenario = replace(subthz_140(), direction=direction)
            return (
                reference_cef(scenario, eta + delta)
                - reference_cef(scenario, eta - delta)
            ) / (2.0 * delta)

        assert slope("uplink") < slope("downlink") / 10.0


class TestCurveCsv:
    def test_schema_and_rows(self):
        curve = sweep(_bandwidth_spec(points=8))
        stream = io.StringIO()
        write_curve_csv(curve, stream)
        lines = stream.getvalue().splitlines()
        assert lines[0] == CURVE_CSV_HEADER
        assert lines[0] == "x_value,unit,cef_gbpj,rate_gbps,p_consumed_w,snr_db,feasible"
        assert len(lines) == 9
        first = lines[1].split(",")
        assert first[1] == "Hz"
        assert first[6] in ("true", "false")
        float(first[0]), float(first[2]), float(first[3])  # parseable numerics

    def test_deterministic_output(self):
        a, b = io.StringIO(), io.StringIO()
        write_curve_csv(sweep(_bandwidth_spec(points=8)), a)
        write_curve_csv(sweep(_bandwidth_spec(points=8)), b)
        assert a.getvalue() == b.getvalue()
