"""Hexagonal small-cell network Monte Carlo.

Downlink-style coverage study: base stations sit on a hexagonal lattice, each
driving six 60-degree sector arrays with power control that holds a target
SNR at the cell edge.  User positions, per-link LoS states, and interferer
beam alignment are sampled per drop; throughput, consumed power, and the
network consumption efficiency are aggregated per cell radius.

Determinism: every (cell, drop) pair owns an independent substream derived
from the scenario seed by spawn key, so adding cells or running drops in a
different order never reshuffles another cell's draws, and results are
reduced by index.  Identical seeds produce identical reports byte for byte
regardless of thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, TextIO

import numpy as np

from .linkbudget import (
    dbm_to_watts,
    free_space_path_loss_db,
    thermal_noise_dbm,
)
from .transceiver import (
    BandProfile,
    TerminalProfile,
    rx_power_coefficients,
    subthz_140,
    tx_power_coefficients,
)

__all__ = [
    "NetworkScenario",
    "CellLayout",
    "NetworkReport",
    "DEFAULT_RADII",
    "default_network",
    "hex_layout",
    "point_in_hex",
    "drop_ues",
    "p_los",
    "power_control",
    "simulate_network",
    "sweep_radius",
    "optimal_radius",
    "write_network_csv",
    "NETSIM_CSV_HEADER",
]

DEFAULT_RADII = (20.0, 35.0, 50.0, 65.0, 80.0, 100.0, 150.0, 250.0, 500.0)

NETSIM_CSV_HEADER = (
    "radius_m,cells,cef_gbpj,throughput_gbps,power_w,mean_sinr_db,los_fraction,ci_halfwidth"
)


@dataclass(frozen=True)
class NetworkScenario:
    """Deployment and simulation parameters for one radius."""

    band: BandProfile
    bs: TerminalProfile
    ue: TerminalProfile
    cell_radius_m: float
    area_m2: float = 1e6
    arrays_per_bs: int = 6
    ues_per_cell: int = 15
    target_snr_db: float = 20.0
    los_d1_m: float = 22.0
    los_d2_m: float = 113.4
    ple_los: float = 2.0
    ple_nlos: float = 3.2
    seed: int = 1
    drops: int = 50
    interference: bool = True
    wraparound: bool = False
    sidelobe_db: float = 20.0
    interferer_reach: float = 8.0

    def __post_init__(self) -> None:
        if not (20.0 <= self.cell_radius_m <= 500.0):
            raise ValueError("cell radius must lie in the studied 20-500 m range")
        if self.area_m2 <= 0.0:
            raise ValueError("area must be positive")
        if self.arrays_per_bs < 1 or self.ues_per_cell < 1:
            raise ValueError("array and UE counts must be >= 1")
        if self.drops < 1:
            raise ValueError("drops must be >= 1")
        if self.los_d1_m <= 0.0 or self.los_d2_m <= 0.0:
            raise ValueError("LoS model distances must be positive")
        if self.interferer_reach <= 0.0:
            raise ValueError("interferer reach must be positive")


@dataclass(frozen=True)
class CellLayout:
    """Hexagonal lattice of base stations covering a square area."""

    cell_radius_m: float
    area_side_m: float
    bs_positions: tuple[tuple[float, float], ...]

    @property
    def n_cells(self) -> int:
        return len(self.bs_positions)


@dataclass(frozen=True)
class NetworkReport:
    """Aggregate outcome of one radius, averaged over drops."""

    radius_m: float
    n_cells: int
    throughput_bps: float
    power_w: float
    cef_bpj: float
    mean_sinr_db: float
    los_fraction: float
    ci_halfwidth_bpj: float
    drops: int


def default_network(cell_radius_m: float, **overrides) -> NetworkScenario:
    """Scenario with the 140 GHz band defaults."""
    base = subthz_140()
    return NetworkScenario(
        band=base.band,
        bs=base.bs,
        ue=base.ue,
        cell_radius_m=cell_radius_m,
        **overrides,
    )


def hex_layout(area_m2: float, cell_radius_m: float) -> CellLayout:
    """Flat-top hexagon lattice: column pitch 1.5 r, row pitch sqrt(3) r,
    odd columns offset half a row.  Nearest neighbors sit sqrt(3) r apart."""
    if cell_radius_m <= 0.0:
        raise ValueError("cell radius must be positive")
    if area_m2 <= 0.0:
        raise ValueError("area must be positive")
    side = math.sqrt(area_m2)
    r = cell_radius_m
    row_pitch = math.sqrt(3.0) * r
    positions: list[tuple[float, float]] = []
    col = 0
    while (x := 0.75 * r + 1.5 * r * col) < side:
        row = 0
        while (y := row_pitch / 2.0 * (col % 2) + row_pitch * row + row_pitch / 2.0) < side:
            positions.append((x, y))
            row += 1
        col += 1
    return CellLayout(cell_radius_m=r, area_side_m=side, bs_positions=tuple(positions))


def point_in_hex(dx, dy, cell_radius_m: float):
    """Whether offsets from a cell center fall inside its flat-top hexagon."""
    r = cell_radius_m
    ax, ay = np.abs(dx), np.abs(dy)
    s3 = math.sqrt(3.0)
    return (ax <= r) & (ay <= s3 * r / 2.0) & (s3 * ax + ay <= s3 * r + 1e-12 * r)


def _cell_rng(seed: int, cell_idx: int, drop_idx: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(cell_idx, drop_idx))
    return np.random.default_rng(seq)


# Flat-top hexagon vertices, unit circumradius, counterclockwise.
_HEX_VERTICES = np.array(
    [(math.cos(k * math.pi / 3.0), math.sin(k * math.pi / 3.0)) for k in range(7)]
)


def _sample_hex_offsets(rng: np.random.Generator, cell_radius_m: float, n: int) -> np.ndarray:
    """n points uniform over the hexagon, exactly 3 draws per point.

    The hexagon splits into six equal triangles at the center; a uniform
    triangle pick plus folded barycentric coordinates is draw-count stable,
    unlike rejection sampling.
    """
    u = rng.random((n, 3))
    tri = np.minimum((u[:, 0] * 6).astype(int), 5)
    a, b = u[:, 1], u[:, 2]
    fold = a + b > 1.0
    a = np.where(fold, 1.0 - a, a)
    b = np.where(fold, 1.0 - b, b)
    v0 = _HEX_VERTICES[tri]
    v1 = _HEX_VERTICES[tri + 1]
    return cell_radius_m * (a[:, None] * v0 + b[:, None] * v1)


def drop_ues(layout: CellLayout, ues_per_cell: int, seed: int) -> np.ndarray:
    """Absolute UE positions, shape (n_cells, ues_per_cell, 2); depends only
    on (seed, cell index), never on how many cells exist."""
    if ues_per_cell < 1:
        raise ValueError("ues_per_cell must be >= 1")
    out = np.empty((layout.n_cells, ues_per_cell, 2))
    for idx, center in enumerate(layout.bs_positions):
        rng = _cell_rng(seed, idx, 0)
        out[idx] = np.asarray(center) + _sample_hex_offsets(
            rng, layout.cell_radius_m, ues_per_cell
        )
    return out


def p_los(distance_m, d1_m: float = 22.0, d2_m: float = 113.4):
    """Squared LoS probability model; equals 1 out to d1 and decays beyond.

    Accepts scalars or arrays; scalar in, scalar out.
    """
    d = np.asarray(distance_m, dtype=float)
    if np.any(d < 0.0):
        raise ValueError("distance must be >= 0")
    # The d <= d1 branch is algebraically 1; splitting it out avoids a
    # divide-by-zero at d = 0.
    safe = np.maximum(d, d1_m)
    decay = np.exp(-safe / d2_m)
    far = ((d1_m / safe) * (1.0 - decay) + decay) ** 2
    result = np.where(d <= d1_m, 1.0, far)
    return float(result) if result.ndim == 0 else result


def power_control(
    cell_radius_m: float,
    band: BandProfile,
    target_snr_db: float,
    rx_gain_dbi: float,
    ple: float = 2.0,
) -> float:
    """EIRP (dBm) holding the target SNR for a cell-edge receiver of the
    given gain; halving the radius lowers it by 6.02 dB at PLE 2."""
    if cell_radius_m < 1.0:
        raise ValueError("cell radius must be >= 1 m")
    path_loss = (
        free_space_path_loss_db(band.carrier_frequency_hz)
        + 10.0 * ple * math.log10(cell_radius_m)
    )
    noise = thermal_noise_dbm(band.bandwidth_hz, band.noise_figure_db)
    return target_snr_db + noise + path_loss - rx_gain_dbi


def _neighbor_lists(
    positions: np.ndarray, reach_m: float, side: float, wraparound: bool
) -> list[np.ndarray]:
    delta = positions[:, None, :] - positions[None, :, :]
    if wraparound:
        delta -= side * np.round(delta / side)
    dist = np.hypot(delta[..., 0], delta[..., 1])
    np.fill_diagonal(dist, np.inf)
    return [np.nonzero(dist[i] <= reach_m)[0] for i in range(len(positions))]


@dataclass(frozen=True)
class _RadioConstants:
    """Everything that does not change between drops."""

    eirp_dbm: float
    tx_power_w: float
    noise_w: float
    gain_ue_db: float
    anchor_db: float  # 1 m free-space loss at the carrier
    sector_power_w: float  # one occupied sector, cooling included
    ue_slope: float
    ue_fixed: float
    ue_cooling: float


def _radio_constants(s: NetworkScenario) -> _RadioConstants:
    gain_ue = s.ue.antenna_gain_db(s.band.carrier_frequency_hz)
    gain_bs = s.bs.antenna_gain_db(s.band.carrier_frequency_hz)
    eirp = power_control(s.cell_radius_m, s.band, s.target_snr_db, gain_ue, s.ple_los)
    tx_power_w = dbm_to_watts(eirp - gain_bs)
    tx_slope, tx_fixed = tx_power_coefficients(s.band, s.bs)
    ue_slope, ue_fixed = rx_power_coefficients(s.band, s.ue)
    return _RadioConstants(
        eirp_dbm=eirp,
        tx_power_w=tx_power_w,
        noise_w=dbm_to_watts(thermal_noise_dbm(s.band.bandwidth_hz, s.band.noise_figure_db)),
        gain_ue_db=gain_ue,
        anchor_db=free_space_path_loss_db(s.band.carrier_frequency_hz),
        sector_power_w=(1.0 + s.bs.cooling_overhead) * (tx_slope * tx_power_w + tx_fixed),
        ue_slope=ue_slope,
        ue_fixed=ue_fixed,
        ue_cooling=s.ue.cooling_overhead,
    )


def _path_loss_db(s: NetworkScenario, rc: _RadioConstants, d: np.ndarray, los: np.ndarray):
    ple = np.where(los, s.ple_los, s.ple_nlos)
    return rc.anchor_db + 10.0 * ple * np.log10(np.maximum(d, 1.0))


@dataclass
class _DropTotals:
    rate_bps: float = 0.0
    power_w: float = 0.0
    sinr_db_sum: float = 0.0
    los_count: int = 0
    ue_count: int = 0


def _simulate_cell(
    s: NetworkScenario,
    rc: _RadioConstants,
    positions: np.ndarray,
    neighbors: np.ndarray,
    cell_idx: int,
    drop_idx: int,
    side: float,
    totals: _DropTotals,
) -> None:
    rng = _cell_rng(s.seed, cell_idx, drop_idx)
    n_ue = s.ues_per_cell
    offsets = _sample_hex_offsets(rng, s.cell_radius_m, n_ue)
    u_serving = rng.random(n_ue)

    d_serving = np.hypot(offsets[:, 0], offsets[:, 1])
    los = u_serving < p_los(d_serving, s.los_d1_m, s.los_d2_m)
    pl_serving = _path_loss_db(s, rc, d_serving, los)
    arrival_dbm = rc.eirp_dbm - pl_serving
    signal_w = dbm_to_watts(arrival_dbm + rc.gain_ue_db)

    interference_w = np.zeros(n_ue)
    if s.interference and len(neighbors) > 0:
        u_int = rng.random((n_ue, len(neighbors), 2))
        ue_abs = np.asarray(positions[cell_idx]) + offsets
        delta = ue_abs[:, None, :] - positions[neighbors][None, :, :]
        if s.wraparound:
            delta -= side * np.round(delta / side)
        d_int = np.hypot(delta[..., 0], delta[..., 1])
        los_int = u_int[..., 0] < p_los(d_int, s.los_d1_m, s.los_d2_m)
        pl_int = _path_loss_db(s, rc, d_int, los_int)
        main_lobe = u_int[..., 1] < 1.0 / s.arrays_per_bs
        discrimination = np.where(main_lobe, 0.0, s.sidelobe_db)
        i_dbm = rc.eirp_dbm - pl_int + rc.gain_ue_db - discrimination
        interference_w = np.sum(dbm_to_watts(i_dbm), axis=1)

    sinr = signal_w / (rc.noise_w + interference_w)

    angles = np.arctan2(offsets[:, 1], offsets[:, 0])
    sector = np.floor((angles + math.pi) / (math.pi / 3.0)).astype(int) % s.arrays_per_bs
    occupancy = np.bincount(sector, minlength=s.arrays_per_bs)
    bandwidth_share = s.band.bandwidth_hz / occupancy[sector]

    arrival_w = dbm_to_watts(arrival_dbm)
    ue_power = (1.0 + rc.ue_cooling) * (rc.ue_slope * arrival_w + rc.ue_fixed)

    totals.rate_bps += float(np.sum(bandwidth_share * np.log2(1.0 + sinr)))
    totals.power_w += float(np.count_nonzero(occupancy) * rc.sector_power_w)
    totals.power_w += float(np.sum(ue_power))
    totals.sinr_db_sum += float(np.sum(10.0 * np.log10(sinr)))
    totals.los_count += int(np.sum(los))
    totals.ue_count += n_ue


def simulate_network(scenario: NetworkScenario) -> NetworkReport:
    """Monte-Carlo over drops at one radius; see the module docstring for
    the determinism contract."""
    layout = hex_layout(scenario.area_m2, scenario.cell_radius_m)
    positions = np.asarray(layout.bs_positions)
    reach = scenario.interferer_reach * scenario.cell_radius_m
    neighbors = _neighbor_lists(positions, reach, layout.area_side_m, scenario.wraparound)
    rc = _radio_constants(scenario)

    drop_rates = np.empty(scenario.drops)
    drop_powers = np.empty(scenario.drops)
    sinr_db_sum = 0.0
    los_count = 0
    ue_count = 0
    for drop in range(scenario.drops):
        totals = _DropTotals()
        for cell in range(layout.n_cells):
            _simulate_cell(
                scenario, rc, positions, neighbors[cell], cell, drop,
                layout.area_side_m, totals,
            )
        drop_rates[drop] = totals.rate_bps
        drop_powers[drop] = totals.power_w
        sinr_db_sum += totals.sinr_db_sum
        los_count += totals.los_count
        ue_count += totals.ue_count

    throughput = float(np.mean(drop_rates))
    power = float(np.mean(drop_powers))
    drop_cefs = drop_rates / drop_powers
    if scenario.drops > 1:
        halfwidth = 1.96 * float(np.std(drop_cefs, ddof=1)) / math.sqrt(scenario.drops)
    else:
        halfwidth = 0.0
    return NetworkReport(
        radius_m=scenario.cell_radius_m,
        n_cells=layout.n_cells,
        throughput_bps=throughput,
        power_w=power,
        cef_bpj=throughput / power,
        mean_sinr_db=sinr_db_sum / ue_count,
        los_fraction=los_count / ue_count,
        ci_halfwidth_bpj=halfwidth,
        drops=scenario.drops,
    )


def sweep_radius(
    scenario: NetworkScenario,
    radii: Iterable[float] = DEFAULT_RADII,
    max_workers: int | None = None,
) -> tuple[NetworkReport, ...]:
    """One report per radius, in input order regardless of worker count."""
    tasks = [replace(scenario, cell_radius_m=float(r)) for r in radii]
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return tuple(pool.map(simulate_network, tasks))
    return tuple(simulate_network(t) for t in tasks)


def optimal_radius(reports: Iterable[NetworkReport]) -> NetworkReport:
    reports = list(reports)
    if not reports:
        raise ValueError("no reports to compare")
    return max(reports, key=lambda r: r.cef_bpj)


def network_csv_rows(reports: Iterable[NetworkReport]) -> Iterable[str]:
    yield NETSIM_CSV_HEADER
    for r in reports:
        yield (
            f"{r.radius_m:.10g},{r.n_cells},{r.cef_bpj / 1e9:.10g},"
            f"{r.throughput_bps / 1e9:.10g},{r.power_w:.10g},{r.mean_sinr_db:.10g},"
            f"{r.los_fraction:.10g},{r.ci_halfwidth_bpj / 1e9:.10g}"
        )


def write_network_csv(reports: Iterable[NetworkReport], stream: TextIO) -> None:
    for row in network_csv_rows(reports):
        stream.write(row + "\n")
