"""Tests for transceiver.py — preset chains, link evaluation, terminal power."""
import math
from dataclasses import replace

import pytest

from wastefactor.cascade import cascade_gain, cascade_waste_factor, consumed_power
from wastefactor.linkbudget import dbm_to_watts, thermal_noise_dbm
from wastefactor.transceiver import (
    band_comparison,
    build_chain,
    evaluate_link,
    mmwave_28,
    preset_scenario,
    rx_power_coefficients,
    subthz_140,
    tx_power_coefficients,
)

# Eight-cell reference table, frozen from back-solved device parameters that
# reproduce the published link budget (rates within 2%, received power within
# 0.2 dB).  Columns: waste figure dB, P_r dBW, rate Gb/s, consumed W, CEF Gb/J.
_CELLS = {
    ("mmwave-28", "uplink", "los"): (52.553701728, -71.051046849, 4.903754027, 5.719472761, 0.857378684),
    ("mmwave-28", "uplink", "nlos"): (76.552745131, -95.051046849, 1.743424556, 5.719463471, 0.304823095),
    ("mmwave-28", "downlink", "los"): (82.221231979, -71.051046849, 4.903754027, 5.162846063, 0.949816045),
    ("mmwave-28", "downlink", "nlos"): (106.221230947, -95.051046849, 1.743424556, 5.162838322, 0.337687227),
    ("subthz-140", "uplink", "los"): (52.242195939, -57.071646762, 54.324546378, 60.116959867, 0.903647598),
    ("subthz-140", "uplink", "nlos"): (76.241168198, -81.071646762, 22.550657714, 60.116727636, 0.375114525),
    ("subthz-140", "downlink", "los"): (82.220907455, -57.071646762, 54.324546378, 25.202310814, 2.155538307),
    ("subthz-140", "downlink", "nlos"): (106.220906423, -81.071646762, 22.550657714, 25.202117289, 0.894792190),
}

_BUILDERS = {"mmwave-28": mmwave_28, "subthz-140": subthz_140}


def _scenario(band, direction, environment):
    return replace(_BUILDERS[band](), direction=direction, environment=environment)


class TestPresets:
    def test_mmwave_28_parameters(self):
        band = mmwave_28().band
        assert band.carrier_frequency_hz == 28e9
        assert band.bandwidth_hz == 400e6
        assert band.pa_efficiency == 0.28
        assert band.lna_fom_per_mw == 24.83
        assert band.lo_power_dbm == 10.0
        assert band.converter_w_per_hz == 2.5e-10

    def test_subthz_140_parameters(self):
        band = subthz_140().band
        assert band.carrier_frequency_hz == 140e9
        assert band.bandwidth_hz == 4e9
        assert band.pa_efficiency == 0.208
        assert band.lna_fom_per_mw == 8.33
        assert band.lo_power_dbm == 19.9
        assert band.converter_w_per_hz == 1e-11

    def test_terminals(self):
        s28, s140 = mmwave_28(), subthz_140()
        assert (s28.bs.element_count, s28.ue.element_count) == (1024, 8)
        assert (s140.bs.element_count, s140.ue.element_count) == (4096, 64)
        for s in (s28, s140):
            assert s.bs.aperture_m2 == 0.5
            assert s.ue.aperture_m2 == 5e-4
            assert s.bs.cooling_overhead == 0.2
            assert s.ue.screen_power_w == 0.5

    def test_lna_dc_from_fom(self):
        # gain 20 dB = 100 linear; DC per LNA = gain / FoM in mW
        band = mmwave_28().band
        assert band.lna_dc_w == pytest.approx(100.0 / 24.83 * 1e-3, rel=1e-12)

    def test_antenna_gains(self):
        assert mmwave_28().bs.antenna_gain_db(28e9) == pytest.approx(45.1698, abs=1e-3)
        assert mmwave_28().ue.antenna_gain_db(28e9) == pytest.approx(15.1698, abs=1e-3)
        assert subthz_140().bs.antenna_gain_db(140e9) == pytest.approx(59.1492, abs=1e-3)
        assert subthz_140().ue.antenna_gain_db(140e9) == pytest.approx(29.1492, abs=1e-3)

    def test_preset_scenario_lookup(self):
        assert preset_scenario("mmwave-28") == mmwave_28()
        assert preset_scenario("subthz-140") == subthz_140()
        with pytest.raises(ValueError):
            preset_scenario("x-band")

    def test_roles(self):
        s = mmwave_28()
        assert s.direction == "uplink"
        assert s.transmitter is s.ue
        assert s.receiver is s.bs
        down = replace(s, direction="downlink")
        assert down.transmitter is down.bs


class TestChainStructure:
    def test_component_order(self):
        labels = [c.label for c in build_chain(mmwave_28()).components]
        assert labels == [
            "mixer",
            "phase-shifter",
            "pa-bank",
            "tx-antenna",
            "channel",
            "rx-antenna",
            "lna-bank",
            "phase-shifter",
            "mixer",
        ]

    def test_cascade_gain_is_budget_gain(self):
        # chain gain must equal G_t + G_r - PL plus the electronics gains
        s = mmwave_28()
        chain = build_chain(s)
        report = evaluate_link(s)
        assert 10.0 * math.log10(cascade_gain(chain)) == pytest.approx(
            report.cascade_gain_db, abs=1e-9
        )

    def test_pa_bank_nonpath_scales_with_elements(self):
        # bank draw beyond the signal path: (N - 1) elements at P_t / eta each
        s = mmwave_28()
        pa = next(c for c in build_chain(s).components if c.label == "pa-bank")
        p_t = dbm_to_watts(s.tx_power_dbm)
        assert pa.non_path_power == pytest.approx(
            (s.transmitter.element_count - 1) * p_t / s.band.pa_efficiency, rel=1e-12
        )

    def test_lna_bank_draw(self):
        s = mmwave_28()
        lna = next(c for c in build_chain(s).components if c.label == "lna-bank")
        assert lna.non_path_power == pytest.approx(
            s.receiver.element_count * s.band.lna_dc_w, rel=1e-12
        )
        assert lna.waste_factor == 1.0


class TestLinkReports:
    @pytest.mark.parametrize("key", sorted(_CELLS))
    def test_frozen_cells(self, key):
        band, direction, environment = key
        report = evaluate_link(_scenario(band, direction, environment))
        w_db, p_r, rate, p_c, cef = _CELLS[key]
        assert report.waste_figure_db == pytest.approx(w_db, abs=1e-6)
        assert report.p_received_dbw == pytest.approx(p_r, abs=1e-6)
        assert report.rate_bps / 1e9 == pytest.approx(rate, rel=1e-9)
        assert report.p_consumed_w == pytest.approx(p_c, rel=1e-9)
        assert report.cef_bpj / 1e9 == pytest.approx(cef, rel=1e-9)

    @pytest.mark.parametrize("key", sorted(_CELLS))
    def test_cef_identity(self, key):
        report = evaluate_link(_scenario(*key))
        assert report.cef_bpj == report.rate_bps / report.p_consumed_w

    def test_environment_gap_is_structural(self):
        # every pre-channel term scales with path loss, so the NLoS - LoS
        # waste-figure gap tracks the 24 dB path-loss gap almost exactly
        for band in _BUILDERS:
            for direction in ("uplink", "downlink"):
                los = evaluate_link(_scenario(band, direction, "los"))
                nlos = evaluate_link(_scenario(band, direction, "nlos"))
                gap = nlos.waste_figure_db - los.waste_figure_db
                assert gap == pytest.approx(24.0, abs=2e-3)

    def test_direction_swaps_eirp_by_antenna_difference(self):
        up = evaluate_link(_scenario("mmwave-28", "uplink", "los"))
        down = evaluate_link(_scenario("mmwave-28", "downlink", "los"))
        s = mmwave_28()
        gain_delta = s.bs.antenna_gain_db(28e9) - s.ue.antenna_gain_db(28e9)
        assert down.eirp_dbm - up.eirp_dbm == pytest.approx(gain_delta, abs=1e-9)

    def test_waste_figure_invariant_to_tx_power(self):
        base = _scenario("subthz-140", "downlink", "los")
        figures = [
            evaluate_link(replace(base, tx_power_dbm=p)).waste_figure_db
            for p in (-10.0, 0.0, 10.0, 23.0)
        ]
        for figure in figures[1:]:
            assert figure == pytest.approx(figures[0], rel=1e-12)

    def test_consumed_power_monotone_in_elements(self):
        base = _scenario("mmwave-28", "uplink", "los")
        small = evaluate_link(base).p_consumed_w
        big = evaluate_link(
            replace(base, ue=replace(base.ue, element_count=4 * base.ue.element_count))
        ).p_consumed_w
        assert big > small

    def test_snr_matches_noise_floor_arithmetic(self):
        s = _scenario("mmwave-28", "uplink", "los")
        report = evaluate_link(s)
        noise_dbm = thermal_noise_dbm(s.band.bandwidth_hz, s.band.noise_figure_db)
        assert report.snr_db == pytest.approx(
            (report.p_received_dbw + 30.0) - noise_dbm, abs=1e-9
        )

    def test_back_solved_noise_figure_near_ten(self):
        # published rates imply NF ~ 10 dB in every cell; the presets carry
        # exactly 10, so inverting the rate must land within 0.25 dB of it
        targets = {
            ("mmwave-28", "los"): 4.89e9,
            ("mmwave-28", "nlos"): 1.73e9,
            ("subthz-140", "los"): 54.16e9,
            ("subthz-140", "nlos"): 22.39e9,
        }
        for (band, environment), rate in targets.items():
            s = _scenario(band, "uplink", environment)
            report = evaluate_link(s)
            snr_needed_db = 10.0 * math.log10(2.0 ** (rate / s.band.bandwidth_hz) - 1.0)
            implied_nf = s.band.noise_figure_db + (report.snr_db - snr_needed_db)
            assert implied_nf == pytest.approx(10.0, abs=0.25)


class TestTerminalPowerModel:
    def test_consumed_decomposes_into_terminal_shares(self):
        # evaluate_link charges tx slope x transmit power + rx slope x arrival
        # power + fixed draws; rebuild that sum from the coefficient helpers
        for key in sorted(_CELLS):
            s = _scenario(*key)
            report = evaluate_link(s)
            tx_slope, tx_fixed = tx_power_coefficients(s.band, s.transmitter)
            rx_slope, rx_fixed = rx_power_coefficients(s.band, s.receiver)
            p_t = dbm_to_watts(s.tx_power_dbm)
            # arrival power at the receive antenna: P_t + G_t - PL, in watts
            arrival = dbm_to_watts(
                s.tx_power_dbm
                + s.transmitter.antenna_gain_db(s.band.carrier_frequency_hz)
                - s.path_loss_db()
            )
            tx_cool = 1.0 + s.transmitter.cooling_overhead
            rx_cool = 1.0 + s.receiver.cooling_overhead
            expected = tx_cool * (tx_slope * p_t + tx_fixed) + rx_cool * (rx_slope * arrival + rx_fixed)
            assert report.p_consumed_w == pytest.approx(expected, rel=1e-9)

    def test_consumed_power_agrees_with_chain_ledger(self):
        # the scenario-level number must equal cascade accounting plus the
        # overheads the chain cannot see (LO, converters, screen, cooling)
        s = _scenario("mmwave-28", "uplink", "los")
        report = evaluate_link(s)
        chain_w = consumed_power(build_chain(s))
        assert report.p_consumed_w > chain_w  # overheads are strictly positive

    def test_downlink_cheaper_than_uplink_at_28(self):
        # the uplink receive side carries the 1024-element BS bank; downlink
        # carries it on transmit where the PA bank dominates instead
        up = evaluate_link(_scenario("mmwave-28", "uplink", "los"))
        down = evaluate_link(_scenario("mmwave-28", "downlink", "los"))
        assert up.p_consumed_w > down.p_consumed_w


class TestBandComparison:
    def test_eight_cells_and_orderings(self):
        comparison = band_comparison()
        assert len(comparison.reports) == 8
        r = comparison.reports
        for direction in ("uplink", "downlink"):
            for environment in ("los", "nlos"):
                cef_28 = r[("mmwave-28", direction, environment)].cef_bpj
                cef_140 = r[("subthz-140", direction, environment)].cef_bpj
                assert cef_140 > cef_28
        for band in ("mmwave-28", "subthz-140"):
            assert (
                r[(band, "uplink", "los")].p_consumed_w
                > r[(band, "downlink", "los")].p_consumed_w
            )
