"""End-to-end transceiver chains: band profiles, link evaluation, band comparison.

The modeled architecture is a direct-conversion phased-array radio at each
end.  On the transmit side the signal runs mixer -> phase shifter -> PA bank
-> antenna; after the propagation channel the receive side runs antenna ->
LNA bank -> phase shifter -> mixer.  Each terminal additionally powers a
local oscillator, data converters scaling with bandwidth, optionally a
screen, and (at a base station) active cooling that multiplies everything
that terminal draws.

Power accounting is split per terminal so cooling and screens land on the
right side of the link, while the waste figure is always computed on the
full source-to-sink cascade including the channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .cascade import (
    Cascade,
    Component,
    bookkeeping_oracle,
    cascade_gain,
    cascade_waste_factor,
    make_amplifier,
    make_directive,
    make_fixed_overhead,
    make_passive,
)
from .linkbudget import (
    aperture_gain_db,
    ci_path_loss_db,
    db_to_linear,
    dbm_to_watts,
    received_power_dbm,
    shannon_rate_bps,
    thermal_noise_dbm,
    watts_to_dbm,
)

__all__ = [
    "BandProfile",
    "TerminalProfile",
    "LinkScenario",
    "LinkReport",
    "BandComparison",
    "mmwave_28",
    "subthz_140",
    "PRESETS",
    "preset_scenario",
    "build_chain",
    "evaluate_link",
    "band_comparison",
    "tx_terminal_power",
    "rx_terminal_power",
    "tx_power_coefficients",
    "rx_power_coefficients",
]

BASE_STATION = "base-station"
USER_EQUIPMENT = "user-equipment"


@dataclass(frozen=True)
class BandProfile:
    """Radio hardware parameters tied to one carrier frequency."""

    label: str
    carrier_frequency_hz: float
    bandwidth_hz: float
    pa_efficiency: float
    lna_fom_per_mw: float
    lo_power_dbm: float
    converter_w_per_hz: float
    pa_gain_db: float = 30.0
    lna_gain_db: float = 20.0
    mixer_loss_db: float = 6.0
    phase_shifter_loss_db: float = 10.0
    noise_figure_db: float = 10.0

    def __post_init__(self) -> None:
        if self.carrier_frequency_hz <= 0.0:
            raise ValueError(f"{self.label}: carrier frequency must be positive")
        if self.bandwidth_hz <= 0.0:
            raise ValueError(f"{self.label}: bandwidth must be positive")
        if not (0.0 < self.pa_efficiency <= 1.0):
            raise ValueError(f"{self.label}: PA efficiency must be in (0, 1]")
        if self.lna_fom_per_mw <= 0.0:
            raise ValueError(f"{self.label}: LNA figure of merit must be positive")
        if self.converter_w_per_hz < 0.0:
            raise ValueError(f"{self.label}: converter power density must be >= 0")
        if self.mixer_loss_db < 0.0 or self.phase_shifter_loss_db < 0.0:
            raise ValueError(f"{self.label}: insertion losses must be >= 0 dB")
        if self.noise_figure_db < 0.0:
            raise ValueError(f"{self.label}: noise figure must be >= 0 dB")

    @property
    def lna_dc_w(self) -> float:
        """Supply draw of one LNA: gain_linear / FoM, in watts."""
        return db_to_linear(self.lna_gain_db) / self.lna_fom_per_mw * 1e-3


@dataclass(frozen=True)
class TerminalProfile:
    """One end of the link: antenna aperture, array size, local overheads."""

    role: str
    aperture_m2: float
    element_count: int
    antenna_efficiency: float = 0.6
    cooling_overhead: float = 0.0
    screen_power_w: float = 0.0

    def __post_init__(self) -> None:
        if self.role not in (BASE_STATION, USER_EQUIPMENT):
            raise ValueError(f"unknown terminal role {self.role!r}")
        if self.aperture_m2 <= 0.0:
            raise ValueError("aperture must be positive")
        if self.element_count < 1:
            raise ValueError("element count must be >= 1")
        if not (0.0 < self.antenna_efficiency <= 1.0):
            raise ValueError("antenna efficiency must be in (0, 1]")
        if self.cooling_overhead < 0.0 or self.screen_power_w < 0.0:
            raise ValueError("cooling overhead and screen power must be >= 0")

    def antenna_gain_db(self, frequency_hz: float) -> float:
        return aperture_gain_db(self.aperture_m2, frequency_hz, self.antenna_efficiency)


@dataclass(frozen=True)
class LinkScenario:
    """Full parameterization of one link: band, both terminals, geometry."""

    band: BandProfile
    bs: TerminalProfile
    ue: TerminalProfile
    distance_m: float = 100.0
    environment: str = "los"
    direction: str = "uplink"
    tx_power_dbm: float = 0.0
    ple_los: float = 2.0
    ple_nlos: float = 3.2

    def __post_init__(self) -> None:
        if self.environment not in ("los", "nlos"):
            raise ValueError(f"environment must be 'los' or 'nlos', got {self.environment!r}")
        if self.direction not in ("uplink", "downlink"):
            raise ValueError(f"direction must be 'uplink' or 'downlink', got {self.direction!r}")
        if self.distance_m < 1.0:
            raise ValueError("distance must be >= 1 m (close-in model reference)")
        if self.ple_los <= 0.0 or self.ple_nlos <= 0.0:
            raise ValueError("path-loss exponents must be positive")

    @property
    def ple(self) -> float:
        return self.ple_los if self.environment == "los" else self.ple_nlos

    @property
    def transmitter(self) -> TerminalProfile:
        return self.ue if self.direction == "uplink" else self.bs

    @property
    def receiver(self) -> TerminalProfile:
        return self.bs if self.direction == "uplink" else self.ue

    def path_loss_db(self) -> float:
        return ci_path_loss_db(self.band.carrier_frequency_hz, self.distance_m, self.ple)


@dataclass(frozen=True)
class LinkReport:
    """Evaluated link metrics."""

    waste_figure_db: float
    cascade_gain_db: float
    p_received_dbw: float
    snr_db: float
    rate_bps: float
    p_consumed_w: float
    cef_bpj: float
    path_loss_db: float
    eirp_dbm: float


def mmwave_28() -> LinkScenario:
    """28 GHz link defaults: 400 MHz channel, 1024/8-element arrays."""
    band = BandProfile(
        label="mmwave-28",
        carrier_frequency_hz=28e9,
        bandwidth_hz=400e6,
        pa_efficiency=0.28,
        lna_fom_per_mw=24.83,
        lo_power_dbm=10.0,
        converter_w_per_hz=2.5e-10,
    )
    bs = TerminalProfile(
        role=BASE_STATION,
        aperture_m2=0.5,
        element_count=1024,
        cooling_overhead=0.2,
    )
    ue = TerminalProfile(
        role=USER_EQUIPMENT,
        aperture_m2=5e-4,
        element_count=8,
        screen_power_w=0.5,
    )
    return LinkScenario(band=band, bs=bs, ue=ue)


def subthz_140() -> LinkScenario:
    """140 GHz link defaults: 4 GHz channel, 4096/64-element arrays."""
    band = BandProfile(
        label="subthz-140",
        carrier_frequency_hz=140e9,
        bandwidth_hz=4e9,
        pa_efficiency=0.208,
        lna_fom_per_mw=8.33,
        lo_power_dbm=19.9,
        converter_w_per_hz=1e-11,
    )
    bs = TerminalProfile(
        role=BASE_STATION,
        aperture_m2=0.5,
        element_count=4096,
        cooling_overhead=0.2,
    )
    ue = TerminalProfile(
        role=USER_EQUIPMENT,
        aperture_m2=5e-4,
        element_count=64,
        screen_power_w=0.5,
    )
    return LinkScenario(band=band, bs=bs, ue=ue)


PRESETS = {
    "mmwave-28": mmwave_28,
    "subthz-140": subthz_140,
}


def preset_scenario(name: str) -> LinkScenario:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None


def _transmit_components(
    band: BandProfile, terminal: TerminalProfile, tx_power_w: float
) -> tuple[Component, ...]:
    """Mixer, phase shifter, and PA bank, sized so the PA emits tx_power_w.

    The array's parallel amplifiers share one waste factor; the signal path
    carries one element's output and the remaining element_count - 1 branches
    are charged on the PA's non-path ledger so the bank's total supply draw
    is element_count * tx_power / efficiency.
    """
    pa_gain = db_to_linear(band.pa_gain_db)
    bank_extra = (terminal.element_count - 1) * tx_power_w / band.pa_efficiency
    return (
        make_passive("mixer", db_to_linear(band.mixer_loss_db)),
        make_passive("phase-shifter", db_to_linear(band.phase_shifter_loss_db)),
        make_amplifier("pa-bank", pa_gain, band.pa_efficiency, non_path_power=bank_extra),
    )


def _receive_components(
    band: BandProfile, terminal: TerminalProfile
) -> tuple[Component, ...]:
    lna_gain = db_to_linear(band.lna_gain_db)
    return (
        make_fixed_overhead("lna-bank", lna_gain, terminal.element_count * band.lna_dc_w),
        make_passive("phase-shifter", db_to_linear(band.phase_shifter_loss_db)),
        make_passive("mixer", db_to_linear(band.mixer_loss_db)),
    )


def _source_power_w(band: BandProfile, tx_power_w: float) -> float:
    # The chain starts at the upconverter input; losses ahead of the PA and
    # the PA gain cancel so the PA output is exactly the radiated power.
    losses = db_to_linear(band.mixer_loss_db) * db_to_linear(band.phase_shifter_loss_db)
    return tx_power_w * losses / db_to_linear(band.pa_gain_db)


def build_chain(scenario: LinkScenario) -> Cascade:
    """Full source-to-sink cascade: TX chain, antennas, channel, RX chain."""
    band = scenario.band
    tx, rx = scenario.transmitter, scenario.receiver
    tx_power_w = dbm_to_watts(scenario.tx_power_dbm)
    freq = band.carrier_frequency_hz
    channel_loss = db_to_linear(scenario.path_loss_db())
    components = (
        *_transmit_components(band, tx, tx_power_w),
        make_directive("tx-antenna", db_to_linear(tx.antenna_gain_db(freq))),
        make_passive("channel", channel_loss),
        make_directive("rx-antenna", db_to_linear(rx.antenna_gain_db(freq))),
        *_receive_components(band, rx),
    )
    return Cascade(components=components, source_power=_source_power_w(band, tx_power_w))


def tx_power_coefficients(
    band: BandProfile, terminal: TerminalProfile
) -> tuple[float, float]:
    """(slope, fixed) such that the transmit terminal draws
    slope * tx_power_w + fixed watts before its cooling multiplier."""
    chain = Cascade(
        components=_transmit_components(band, terminal, 1.0),
        source_power=_source_power_w(band, 1.0),
    )
    slope = bookkeeping_oracle(chain).total_consumed
    fixed = (
        dbm_to_watts(band.lo_power_dbm)
        + band.converter_w_per_hz * band.bandwidth_hz
        + terminal.screen_power_w
    )
    return slope, fixed


def rx_power_coefficients(
    band: BandProfile, terminal: TerminalProfile
) -> tuple[float, float]:
    """(slope, fixed) such that the receive terminal draws
    slope * arrival_power_w + fixed watts before its cooling multiplier.

    arrival_power_w is the RF power at the antenna input (after path loss,
    before the receive antenna gain); it is not charged to the terminal,
    only the signal-path DC it induces downstream is.
    """
    antenna = make_directive(
        "rx-antenna", db_to_linear(terminal.antenna_gain_db(band.carrier_frequency_hz))
    )
    chain = Cascade(
        components=(antenna, *_receive_components(band, terminal)),
        source_power=1.0,
    )
    ledger = bookkeeping_oracle(chain)
    slope = sum(ledger.per_stage_dc)
    fixed = (
        ledger.total_non_path
        + dbm_to_watts(band.lo_power_dbm)
        + band.converter_w_per_hz * band.bandwidth_hz
        + terminal.screen_power_w
    )
    return slope, fixed


def tx_terminal_power(
    band: BandProfile, terminal: TerminalProfile, tx_power_w: float
) -> float:
    """Everything the transmitting terminal draws, cooling included."""
    if tx_power_w <= 0.0:
        raise ValueError("transmit power must be positive")
    slope, fixed = tx_power_coefficients(band, terminal)
    return (1.0 + terminal.cooling_overhead) * (slope * tx_power_w + fixed)


def rx_terminal_power(
    band: BandProfile, terminal: TerminalProfile, arrival_power_w: float
) -> float:
    """Everything the receiving terminal draws, cooling included."""
    if arrival_power_w < 0.0:
        raise ValueError("arrival power must be >= 0")
    slope, fixed = rx_power_coefficients(band, terminal)
    return (1.0 + terminal.cooling_overhead) * (slope * arrival_power_w + fixed)


def evaluate_link(scenario: LinkScenario) -> LinkReport:
    """Evaluate one link end to end.

    The waste figure comes from the full cascade; consumed power is split
    per terminal so cooling and the screen land on the correct side.
    """
    band = scenario.band
    tx, rx = scenario.transmitter, scenario.receiver
    freq = band.carrier_frequency_hz
    path_loss = scenario.path_loss_db()
    gain_tx = tx.antenna_gain_db(freq)
    gain_rx = rx.antenna_gain_db(freq)

    p_received = received_power_dbm(scenario.tx_power_dbm, gain_tx, gain_rx, path_loss)
    noise = thermal_noise_dbm(band.bandwidth_hz, band.noise_figure_db)
    snr = p_received - noise
    rate = shannon_rate_bps(band.bandwidth_hz, snr)

    chain = build_chain(scenario)
    tx_power_w = dbm_to_watts(scenario.tx_power_dbm)
    arrival_w = dbm_to_watts(scenario.tx_power_dbm + gain_tx - path_loss)
    consumed = tx_terminal_power(band, tx, tx_power_w) + rx_terminal_power(
        band, rx, arrival_w
    )

    return LinkReport(
        waste_figure_db=10.0 * math.log10(cascade_waste_factor(chain)),
        cascade_gain_db=10.0 * math.log10(cascade_gain(chain)),
        p_received_dbw=p_received - 30.0,
        snr_db=snr,
        rate_bps=rate,
        p_consumed_w=consumed,
        cef_bpj=rate / consumed,
        path_loss_db=path_loss,
        eirp_dbm=scenario.tx_power_dbm + gain_tx,
    )


@dataclass(frozen=True)
class BandComparison:
    """The eight-cell band/direction/environment matrix plus its deltas."""

    reports: dict[tuple[str, str, str], LinkReport] = field(default_factory=dict)

    def waste_figure_gap_db(self, band_label: str, direction: str) -> float:
        nlos = self.reports[(band_label, direction, "nlos")].waste_figure_db
        los = self.reports[(band_label, direction, "los")].waste_figure_db
        return nlos - los

    def cef_ratio(self, high_label: str, low_label: str, direction: str, environment: str) -> float:
        high = self.reports[(high_label, direction, environment)].cef_bpj
        low = self.reports[(low_label, direction, environment)].cef_bpj
        return high / low


def band_comparison(
    scenarios: tuple[LinkScenario, ...] | None = None,
    tx_power_dbm: float = 0.0,
    distance_m: float = 100.0,
) -> BandComparison:
    """Evaluate every direction/environment cell for each band preset."""
    if scenarios is None:
        scenarios = (mmwave_28(), subthz_140())
    reports: dict[tuple[str, str, str], LinkReport] = {}
    for base in scenarios:
        for direction in ("uplink", "downlink"):
            for environment in ("los", "nlos"):
                scenario = replace(
                    base,
                    direction=direction,
                    environment=environment,
                    tx_power_dbm=tx_power_dbm,
                    distance_m=distance_m,
                )
                reports[(base.band.label, direction, environment)] = evaluate_link(scenario)
    return BandComparison(reports=reports)
