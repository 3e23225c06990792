"""Parameter sweeps and crossover finding for bandwidth and PA-efficiency studies."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, TextIO

from .linkbudget import tx_power_for_snr_dbm
from .transceiver import LinkReport, LinkScenario, evaluate_link

__all__ = [
    "SweepSpec",
    "SweepSample",
    "Curve",
    "CrossoverResult",
    "EfficiencyMatch",
    "sweep",
    "find_crossover",
    "find_curve_crossing",
    "min_matching_efficiency",
    "reference_cef",
    "snr_matched_sample",
    "write_curve_csv",
    "CURVE_CSV_HEADER",
]

SWEEPABLE = ("bandwidth", "pa_efficiency")

CURVE_CSV_HEADER = "x_value,unit,cef_gbpj,rate_gbps,p_consumed_w,snr_db,feasible"

_BISECT_REL_TOL = 1e-3


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep description.

    When snr_target_db is set, transmit power is solved analytically at each
    grid point to hold the target (noise scales with bandwidth, so the solved
    power rises 3.01 dB per bandwidth doubling); points whose required EIRP
    exceeds eirp_ceiling_dbm are evaluated anyway but flagged infeasible.
    """

    scenario: LinkScenario
    parameter: str
    lo: float
    hi: float
    points: int = 64
    spacing: str = ""  # "" picks log for bandwidth, linear for pa_efficiency
    snr_target_db: float | None = None
    eirp_ceiling_dbm: float = 75.0

    def __post_init__(self) -> None:
        if self.parameter not in SWEEPABLE:
            raise ValueError(f"parameter must be one of {SWEEPABLE}, got {self.parameter!r}")
        if not (self.lo < self.hi):
            raise ValueError("sweep range must satisfy lo < hi")
        if self.lo <= 0.0:
            raise ValueError("sweep range must be positive")
        if self.points < 2:
            raise ValueError("grid needs at least 2 points")
        if self.spacing not in ("", "log", "linear"):
            raise ValueError(f"spacing must be 'log' or 'linear', got {self.spacing!r}")

    @property
    def effective_spacing(self) -> str:
        if self.spacing:
            return self.spacing
        return "log" if self.parameter == "bandwidth" else "linear"

    @property
    def unit(self) -> str:
        return "Hz" if self.parameter == "bandwidth" else "fraction"


@dataclass(frozen=True)
class SweepSample:
    x: float
    cef_bpj: float
    rate_bps: float
    p_consumed_w: float
    snr_db: float
    feasible: bool


@dataclass(frozen=True)
class Curve:
    """Ordered sweep result; x strictly increasing.

    evaluator re-evaluates the swept scenario at an arbitrary x so crossover
    refinement can bisect between grid points; it is carried alongside the
    samples and takes no part in equality or representation.
    """

    parameter: str
    unit: str
    samples: tuple[SweepSample, ...]
    band_label: str
    direction: str
    snr_target_db: float | None = None
    evaluator: Callable[[float], SweepSample] | None = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        xs = [s.x for s in self.samples]
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise ValueError("curve x values must be strictly increasing")


@dataclass(frozen=True)
class CrossoverResult:
    found: bool
    x: float | None = None
    cef_bpj: float | None = None


@dataclass(frozen=True)
class EfficiencyMatch:
    found: bool
    efficiency: float | None = None
    cef_bpj: float | None = None


def _grid(spec: SweepSpec) -> list[float]:
    n = spec.points
    if spec.effective_spacing == "log":
        ratio = spec.hi / spec.lo
        return [spec.lo * ratio ** (i / (n - 1)) for i in range(n)]
    step = (spec.hi - spec.lo) / (n - 1)
    return [spec.lo + step * i for i in range(n)]


def _apply(scenario: LinkScenario, parameter: str, x: float) -> LinkScenario:
    if parameter == "bandwidth":
        return replace(scenario, band=replace(scenario.band, bandwidth_hz=x))
    return replace(scenario, band=replace(scenario.band, pa_efficiency=x))


def _evaluate_point(spec: SweepSpec, x: float) -> SweepSample:
    scenario = _apply(spec.scenario, spec.parameter, x)
    feasible = True
    if spec.snr_target_db is not None:
        freq = scenario.band.carrier_frequency_hz
        tx_gain = scenario.transmitter.antenna_gain_db(freq)
        rx_gain = scenario.receiver.antenna_gain_db(freq)
        tx_power = tx_power_for_snr_dbm(
            spec.snr_target_db,
            scenario.band.bandwidth_hz,
            scenario.band.noise_figure_db,
            scenario.path_loss_db(),
            tx_gain,
            rx_gain,
        )
        scenario = replace(scenario, tx_power_dbm=tx_power)
        feasible = tx_power + tx_gain <= spec.eirp_ceiling_dbm
    report: LinkReport = evaluate_link(scenario)
    if spec.snr_target_db is None:
        feasible = report.eirp_dbm <= spec.eirp_ceiling_dbm
    return SweepSample(
        x=x,
        cef_bpj=report.cef_bpj,
        rate_bps=report.rate_bps,
        p_consumed_w=report.p_consumed_w,
        snr_db=report.snr_db,
        feasible=feasible,
    )


def sweep(spec: SweepSpec, max_workers: int | None = None) -> Curve:
    """Evaluate the grid; output order is keyed by grid index, never by
    completion order, so parallel runs emit identical curves."""
    grid = _grid(spec)
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            samples = tuple(pool.map(lambda x: _evaluate_point(spec, x), grid))
    else:
        samples = tuple(_evaluate_point(spec, x) for x in grid)
    return Curve(
        parameter=spec.parameter,
        unit=spec.unit,
        samples=samples,
        band_label=spec.scenario.band.label,
        direction=spec.scenario.direction,
        snr_target_db=spec.snr_target_db,
        evaluator=lambda x: _evaluate_point(spec, x),
    )


def _refine(
    lo: float,
    hi: float,
    above: Callable[[float], bool],
) -> float:
    """Smallest x in (lo, hi] where `above` holds, assuming above(hi) and a
    single sign change; bisection to relative tolerance."""
    while (hi - lo) > _BISECT_REL_TOL * hi:
        mid = 0.5 * (lo + hi)
        if above(mid):
            hi = mid
        else:
            lo = mid
    return hi


def find_crossover(curve: Curve, reference_cef_bpj: float) -> CrossoverResult:
    """Smallest x where the curve reaches the reference CEF.

    Grid points bracket the crossing; when the curve carries an evaluator the
    bracket is refined by bisection, otherwise by log-linear interpolation.
    """
    samples = curve.samples
    crossing = next((i for i, s in enumerate(samples) if s.cef_bpj >= reference_cef_bpj), None)
    if crossing is None:
        return CrossoverResult(found=False)
    if crossing == 0:
        first = samples[0]
        return CrossoverResult(found=True, x=first.x, cef_bpj=first.cef_bpj)
    lo, hi = samples[crossing - 1].x, samples[crossing].x
    if curve.evaluator is not None:
        evaluator = curve.evaluator
        x = _refine(lo, hi, lambda v: evaluator(v).cef_bpj >= reference_cef_bpj)
        return CrossoverResult(found=True, x=x, cef_bpj=evaluator(x).cef_bpj)
    # Interpolate in x between the bracketing grid samples.
    below, above = samples[crossing - 1], samples[crossing]
    frac = (reference_cef_bpj - below.cef_bpj) / (above.cef_bpj - below.cef_bpj)
    return CrossoverResult(found=True, x=lo + frac * (hi - lo), cef_bpj=reference_cef_bpj)


def find_curve_crossing(a: Curve, b: Curve) -> CrossoverResult:
    """Smallest x where curve `a` overtakes curve `b` on their shared grid."""
    if len(a.samples) != len(b.samples) or any(
        sa.x != sb.x for sa, sb in zip(a.samples, b.samples)
    ):
        raise ValueError("curves must share the same grid")
    crossing = next(
        (
            i
            for i, (sa, sb) in enumerate(zip(a.samples, b.samples))
            if sa.cef_bpj >= sb.cef_bpj
        ),
        None,
    )
    if crossing is None:
        return CrossoverResult(found=False)
    if crossing == 0:
        return CrossoverResult(found=True, x=a.samples[0].x, cef_bpj=a.samples[0].cef_bpj)
    lo, hi = a.samples[crossing - 1].x, a.samples[crossing].x
    if a.evaluator is not None and b.evaluator is not None:
        ea, eb = a.evaluator, b.evaluator
        x = _refine(lo, hi, lambda v: ea(v).cef_bpj >= eb(v).cef_bpj)
        return CrossoverResult(found=True, x=x, cef_bpj=ea(x).cef_bpj)
    return CrossoverResult(found=True, x=hi, cef_bpj=a.samples[crossing].cef_bpj)


def snr_matched_sample(
    scenario: LinkScenario,
    snr_target_db: float | None = None,
    eirp_ceiling_dbm: float = 75.0,
) -> SweepSample:
    """Evaluate a scenario at its own bandwidth with the same power-solving
    rules a sweep uses, so crossover references and curves stay comparable."""
    bandwidth = scenario.band.bandwidth_hz
    spec = SweepSpec(
        scenario=scenario,
        parameter="bandwidth",
        lo=0.5 * bandwidth,
        hi=2.0 * bandwidth,
        points=2,
        snr_target_db=snr_target_db,
        eirp_ceiling_dbm=eirp_ceiling_dbm,
    )
    return _evaluate_point(spec, bandwidth)


def reference_cef(scenario: LinkScenario, pa_efficiency: float | None = None) -> float:
    """CEF of a fixed comparison scenario, optionally at an overridden PA
    efficiency (bits/joule)."""
    if pa_efficiency is not None:
        scenario = replace(scenario, band=replace(scenario.band, pa_efficiency=pa_efficiency))
    return evaluate_link(scenario).cef_bpj


def min_matching_efficiency(
    target_cef_bpj: float,
    scenario: LinkScenario,
    lo: float = 1e-3,
    hi: float = 1.0,
    tol: float = 1e-4,
) -> EfficiencyMatch:
    """Smallest PA efficiency whose CEF reaches the target.

    CEF is monotone increasing in PA efficiency (less waste, same rate), so
    plain bisection suffices; an unreachable target returns found=False.
    """

    def cef_at(eta: float) -> float:
        return reference_cef(scenario, pa_efficiency=eta)

    if cef_at(hi) < target_cef_bpj:
        return EfficiencyMatch(found=False)
    if cef_at(lo) >= target_cef_bpj:
        return EfficiencyMatch(found=True, efficiency=lo, cef_bpj=cef_at(lo))
    low, high = lo, hi
    while (high - low) > tol:
        mid = 0.5 * (low + high)
        if cef_at(mid) >= target_cef_bpj:
            high = mid
        else:
            low = mid
    return EfficiencyMatch(found=True, efficiency=high, cef_bpj=cef_at(high))


def curve_csv_rows(curve: Curve) -> Iterable[str]:
    yield CURVE_CSV_HEADER
    for s in curve.samples:
        yield (
            f"{s.x:.10g},{curve.unit},{s.cef_bpj / 1e9:.10g},{s.rate_bps / 1e9:.10g},"
            f"{s.p_consumed_w:.10g},{s.snr_db:.10g},{'true' if s.feasible else 'false'}"
        )


def write_curve_csv(curve: Curve, stream: TextIO) -> None:
    for row in curve_csv_rows(curve):
        stream.write(row + "\n")
