"""Derived observables on top of the engine and the ensemble average.

Four groups live here:

* yield moments of axis lineouts (mean, variance, skewness) and their
  dependence on the weak-field mean intensity, including the log-log
  scaling fit of |<p_x>|;
* release-time statistics: the distribution-weighted mean and variance of
  Im(t_sp) for one ionization event as a function of p_x;
* scalar symmetry metrics on full momentum maps and the exact identity
  between rotating the field-state distribution by dphi and advancing the
  weak-field carrier phase by dphi/2;
* the stationary-phase-vs-quadrature correlation used as a validation
  gate for the engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from qsfa.ensemble import MomentumGrid, PMDResult, averaged_lineout, averaged_pmd, _node_set
from qsfa.fields import AtomSpec, FieldConfig
from qsfa.phase_space import Distribution, rotate_dist
from qsfa.saddles import (
    TimeWindow,
    _cell_saddles,
    _event_labels,
    differential_yield,
    oracle_amplitude,
    pmd_single,
)

__all__ = [
    "MomentReport",
    "ScanPoint",
    "ScanResult",
    "TunnelTimeStats",
    "moments",
    "intensity_scan",
    "tunnel_time_stats",
    "asymmetry_metric",
    "check_phase_equivalence",
    "oracle_correlation",
]


@dataclass(frozen=True)
class MomentReport:
    """Yield-weighted moments of a p_x lineout."""

    mean_px: float
    variance_px: float
    skewness_px: float
    total_weight: float


def moments(lineout: Iterable[tuple[float, float]]) -> MomentReport:
    """Mean, variance and skewness of p_x weighted by the yield.

    The report is exactly invariant under Y -> c Y for c > 0 (only weight
    ratios enter).  A lineout with zero total yield is rejected; zero
    variance (all weight on one sample) reports skewness 0.
    """
    pts = list(lineout)
    px = np.asarray([p for p, _ in pts], dtype=np.float64)
    y = np.asarray([v for _, v in pts], dtype=np.float64)
    if px.size == 0 or np.any(y < 0.0):
        raise ValueError("lineout must be nonempty with nonnegative yields")
    total = float(np.sum(y))
    if not total > 0.0:
        raise ValueError("lineout carries no yield; moments undefined")
    w = y / total
    mean = float(np.sum(w * px))
    d = px - mean
    var = float(np.sum(w * d * d))
    if var > 0.0:
        # fold weights into the cube and normalize deviations first so
        # extreme weight ratios can neither overflow nor underflow
        z = np.cbrt(w) * (d / math.sqrt(var))
        skew = float(np.sum(z ** 3))
    else:
        skew = 0.0
    return MomentReport(mean_px=mean, variance_px=var,
                        skewness_px=skew, total_weight=total)


@dataclass(frozen=True)
class ScanPoint:
    intensity_wcm2: float
    report: MomentReport


@dataclass(frozen=True)
class ScanResult:
    """Per-intensity moment reports plus the |<p_x>| scaling fit."""

    points: tuple[ScanPoint, ...]
    slope: float | None
    r_squared: float | None


def _loglog_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    lx, ly = np.log10(x), np.log10(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0.0 else 1.0
    return float(slope), r2


def intensity_scan(
    dist_family: Callable[[float], Distribution],
    intensities: Sequence[float],
    cfg: FieldConfig,
    atom: AtomSpec,
    window: TimeWindow,
    *,
    px_samples: np.ndarray | None = None,
    method: str = "gauss_hermite",
    order: int = 32,
    count: int = 1024,
    seed: int = 0,
    prune: float = 1e-16,
    workers: int | None = None,
) -> ScanResult:
    """Moment reports versus weak-field mean intensity, with scaling fit.

    ``dist_family`` maps a mean intensity in W/cm^2 to the weak-field
    distribution at that intensity (the field config is held fixed).  The
    window is normally a single-event quarter cycle so the lineout holds
    one ionization peak.  The fitted quantity is log10 |<p_x>| against
    log10 intensity, unweighted least squares; points with zero intensity
    or exactly zero mean cannot enter the fit, and fewer than three usable
    points omit it (slope and r_squared are None).
    """
    if px_samples is None:
        px_samples = np.linspace(-2.5, 2.5, 201)
    pts = []
    for intensity in intensities:
        dist = dist_family(float(intensity))
        line = averaged_lineout(px_samples, dist, cfg, atom, window,
                                method=method, order=order, count=count,
                                seed=seed, prune=prune, workers=workers)
        pts.append(ScanPoint(float(intensity), moments(line)))
    ivals = np.asarray([p.intensity_wcm2 for p in pts])
    means = np.asarray([abs(p.report.mean_px) for p in pts])
    usable = (ivals > 0.0) & (means > 0.0)
    if int(np.sum(usable)) >= 3:
        slope, r2 = _loglog_fit(ivals[usable], means[usable])
    else:
        slope, r2 = None, None
    return ScanResult(points=tuple(pts), slope=slope, r_squared=r2)


@dataclass(frozen=True)
class TunnelTimeStats:
    """Distribution-weighted Im(t_sp) statistics for one ionization event.

    ``im_times`` keeps the raw per-node values (NaN where the node lost
    the event's saddle) so the release-time scatter can be replotted with
    the node weights; the summary arrays collapse the node axis.
    """

    event: int
    px: np.ndarray                 # (n,)
    weighted_mean_im: np.ndarray   # (n,), NaN where every node is excluded
    weighted_var_im: np.ndarray    # (n,)
    excluded: np.ndarray           # (n,) int, nodes without this event
    node_weights: np.ndarray       # (m,), sums to 1
    im_times: np.ndarray           # (m, n)

    def __post_init__(self):
        if not 1 <= self.event <= 4:
            raise ValueError(f"event must be 1..4, got {self.event}")


def tunnel_time_stats(
    px_samples: np.ndarray,
    dist: Distribution,
    cfg: FieldConfig,
    atom: AtomSpec,
    event: int = 1,
    *,
    py: float = 0.0,
    method: str = "gauss_hermite",
    order: int = 32,
    count: int = 1024,
    seed: int = 0,
) -> TunnelTimeStats:
    """Weighted mean and variance of Im(t_sp) over the distribution.

    For each node alpha the saddle belonging to the requested event (the
    quarter-cycle cell of the strong drive, labels 1..4) is located on the
    p_x axis; nodes where that root was lost (deep tail alphas, beyond-
    cutoff momenta) are excluded from the statistics and counted.  The
    variance uses the excluded-renormalized weights at each p_x.
    """
    if not 1 <= event <= 4:
        raise ValueError(f"event must be 1..4, got {event}")
    px = np.asarray(px_samples, dtype=np.float64).ravel()
    nodes = _node_set(dist, method, order, count, seed, prune=0.0)[0]
    m = len(nodes.alphas)
    im = np.full((m, px.size), np.nan)
    for i, alpha in enumerate(nodes.alphas):
        cell = _cell_saddles(cfg, atom, complex(alpha), px, py ** 2)
        labels = _event_labels(cell.t.real, cfg.period)[1]
        hit = cell.ok & (labels == event)
        rows = np.any(hit, axis=-1)
        slot = np.argmax(hit, axis=-1)
        vals = np.take_along_axis(cell.t.imag, slot[..., None], axis=-1)[..., 0]
        im[i, rows] = vals[rows]

    w = nodes.weights[:, None]
    present = ~np.isnan(im)
    wsum = np.sum(np.where(present, w, 0.0), axis=0)
    safe = wsum > 0.0
    mean = np.full(px.size, np.nan)
    var = np.full(px.size, np.nan)
    mean[safe] = np.sum(np.where(present, w * np.nan_to_num(im), 0.0),
                        axis=0)[safe] / wsum[safe]
    dev = np.where(present, np.nan_to_num(im) - mean[None, :], 0.0)
    var[safe] = np.sum(w * dev * dev * present, axis=0)[safe] / wsum[safe]
    return TunnelTimeStats(
        event=event,
        px=px,
        weighted_mean_im=mean,
        weighted_var_im=var,
        excluded=np.sum(~present, axis=0),
        node_weights=nodes.weights.copy(),
        im_times=im,
    )


def asymmetry_metric(pmd: PMDResult) -> float:
    """L1 mirror asymmetry of a momentum map, in [0, 1].

    Sum |Y(p) - Y(Rp)| / Sum (Y(p) + Y(Rp)) with R the p_x reflection;
    0 iff the array is exactly mirror symmetric, 1 for disjoint supports.
    The grid must be symmetric about p_x = 0 so R maps it onto itself.
    """
    if not pmd.grid.symmetric_px:
        raise ValueError(
            "asymmetry metric needs a grid symmetric about p_x = 0 "
            "(px_min = -px_max with odd nx)"
        )
    y = pmd.yields
    yr = y[::-1, :]
    den = float(np.sum(y + yr))
    if den == 0.0:
        return 0.0
    return float(np.sum(np.abs(y - yr)) / den)


def check_phase_equivalence(
    grid: MomentumGrid,
    dist: Distribution,
    cfg: FieldConfig,
    atom: AtomSpec,
    dphi: float,
    *,
    window: TimeWindow | None = None,
    method: str = "gauss_hermite",
    order: int = 32,
    count: int = 1024,
    seed: int = 0,
    workers: int | None = None,
) -> float:
    """Peak-relative deviation between the two sides of the phase identity.

    Rotating the weak-field distribution by dphi must equal advancing the
    carrier phase theta by dphi/2 with the original distribution.  Both
    sides are computed with consistently transformed node sets and
    compared as max |Y_rot - Y_theta| / max Y_theta (pointwise ratios on
    exponentially suppressed yields would only probe roundoff).
    """
    kw = dict(window=window, method=method, order=order, count=count,
              seed=seed, workers=workers)
    side_rot = averaged_pmd(grid, rotate_dist(dist, dphi), cfg, atom, **kw)
    side_theta = averaged_pmd(grid, dist, cfg.with_theta(cfg.theta + 0.5 * dphi),
                              atom, **kw)
    peak = float(np.max(side_theta.yields))
    if peak == 0.0:
        return float(np.max(np.abs(side_rot.yields - side_theta.yields)))
    return float(np.max(np.abs(side_rot.yields - side_theta.yields)) / peak)


def oracle_correlation(
    alpha: complex,
    cfg: FieldConfig,
    atom: AtomSpec,
    *,
    px_samples: np.ndarray | None = None,
    py_samples: Sequence[float] = (0.0, 0.5, 1.0),
    mode: str = "events",
) -> float:
    """Pearson correlation of log SPA yield against log |quadrature|^2.

    mode="events": each quarter-cycle window is integrated separately and
    compared with the single-event stationary-phase yield; the four events
    are pooled into one correlation.  mode="cell": one full-period window
    against the full coherent sum (interference-sensitive, but its edge
    correction needs the dipole-pole row above the saddle row across the
    whole period, which large |alpha| can violate).  Windows start at the
    strong-field zero t = 0 where the edge integrands are tame.
    """
    if px_samples is None:
        px_samples = np.linspace(-0.8 * cfg.cutoff_px, 0.8 * cfg.cutoff_px, 21)
    period = cfg.period
    if mode == "events":
        windows = [TimeWindow(k * period / 4.0, (k + 1) * period / 4.0)
                   for k in range(4)]
        spa_of = differential_yield
    elif mode == "cell":
        windows = [TimeWindow(0.0, period)]
        spa_of = pmd_single
    else:
        raise ValueError(f"mode must be 'events' or 'cell', got {mode!r}")
    log_spa, log_orc = [], []
    for win in windows:
        for py in py_samples:
            for px in np.asarray(px_samples, dtype=float):
                p = (float(px), float(py))
                y = spa_of(p, alpha, cfg, atom, win)
                amp = oracle_amplitude(p, alpha, cfg, atom, win,
                                       subtract_edges=True)
                if y > 0.0 and abs(amp) > 0.0:
                    log_spa.append(math.log(y))
                    log_orc.append(2.0 * math.log(abs(amp)))
    if len(log_spa) < 3:
        raise ValueError("not enough usable samples for a correlation")
    return float(np.corrcoef(log_spa, log_orc)[0, 1])
