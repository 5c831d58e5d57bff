"""Phase-space ensemble averaging of single-amplitude momentum maps.

The quantized weak mode turns one SFA run into a weighted family of runs:
Y(p) = sum_i w_i Y_{alpha_i}(p) with (alpha_i, w_i) quadrature nodes for the
Husimi distribution of the mode.  This module owns the momentum grid / result
containers and the deterministic parallel map-reduce over nodes.
"""

from __future__ import annotations

import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

import qsfa
from qsfa.fields import AtomSpec, FieldConfig
from qsfa.phase_space import Distribution, NodeSet, make_nodes
from qsfa.saddles import TimeWindow, YieldDiagnostics, grid_seeds, yield_grid

WORKERS_ENV = "QSFA_WORKERS"

# Nodes are processed in fixed-size chunks and partial sums combined in chunk
# order, so the floating-point reduction is identical for any worker count.
CHUNK_SIZE = 16

DEFAULT_PRUNE = 1e-16


class EnsembleFailure(RuntimeError):
    """Raised when more than the allowed fraction of node evaluations fail."""

    def __init__(self, failures: int, total: int):
        self.failures = failures
        self.total = total
        super().__init__(
            f"{failures}/{total} node evaluations failed (budget is 1%)"
        )


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform rectangular grid in the (p_x, p_y) plane, atomic units."""

    px_min: float
    px_max: float
    nx: int
    py_min: float
    py_max: float
    ny: int

    def __post_init__(self):
        for lo, hi, n, name in ((self.px_min, self.px_max, self.nx, "px"),
                                (self.py_min, self.py_max, self.ny, "py")):
            if n < 1:
                raise ValueError(f"{name}: need at least one point")
            if n > 1 and not lo < hi:
                raise ValueError(f"{name}: min must be < max for n > 1")
            if n == 1 and lo != hi:
                raise ValueError(f"{name}: single-point axis needs min == max")

    @classmethod
    def standard(cls) -> "MomentumGrid":
        """Default extents that contain the 2w cutoff rings at He/400 nm."""
        return cls(-2.5, 2.5, 201, -1.5, 1.5, 101)

    @property
    def px_axis(self) -> np.ndarray:
        return _axis(self.px_min, self.px_max, self.nx)

    @property
    def py_axis(self) -> np.ndarray:
        return _axis(self.py_min, self.py_max, self.ny)

    @property
    def symmetric_px(self) -> bool:
        """True when the p_x axis maps onto itself under p_x -> -p_x."""
        return self.nx % 2 == 1 and self.px_min == -self.px_max


def _axis(lo: float, hi: float, n: int) -> np.ndarray:
    """Uniform axis; built from the positive half when centered on zero.

    Mirroring the positive half makes the axis bitwise symmetric under
    negation (plain linspace is only symmetric to one ulp), which lets the
    yield evaluation reuse the p_y > 0 rows exactly and keeps reflection
    metrics free of coordinate roundoff.
    """
    if n > 1 and n % 2 == 1 and lo == -hi:
        half = np.linspace(0.0, hi, n // 2 + 1)
        return np.concatenate([-half[:0:-1], half])
    return np.linspace(lo, hi, n)


@dataclass(frozen=True)
class PMDResult:
    """Ensemble-averaged yield on a grid plus full provenance metadata."""

    grid: MomentumGrid
    yields: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        y = np.asarray(self.yields, dtype=np.float64)
        if y.shape != (self.grid.nx, self.grid.ny):
            raise ValueError(f"yields shape {y.shape} does not match grid")
        if not np.all(np.isfinite(y)) or np.any(y < 0.0):
            raise ValueError("yields must be finite and nonnegative")
        object.__setattr__(self, "yields", y)

    def normalized(self) -> "PMDResult":
        """Copy scaled so the peak is 1; raw values stay untouched here."""
        peak = float(self.yields.max())
        if peak <= 0.0:
            raise ValueError("cannot normalize an all-zero map")
        meta = dict(self.meta)
        meta["normalization"] = "max"
        return PMDResult(self.grid, self.yields / peak, meta)


def _resolve_workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _node_set(dist, method: str, order: int, count: int, seed: int,
              prune: float):
    """NodeSet plus a metadata record of how it was built."""
    if isinstance(dist, NodeSet):
        return dist, {"method": "explicit", "n_nodes": len(dist)}
    nodes = make_nodes(dist, method=method, order=order, count=count, seed=seed)
    scheme: dict = {"method": method}
    if method == "gauss_hermite":
        scheme["order"] = order
    else:
        scheme.update(count=count, seed=seed)
    if prune > 0.0 and len(nodes) > 1:
        keep = nodes.weights >= prune * nodes.weights.max()
        scheme["prune"] = prune
        scheme["pruned_weight"] = float(nodes.weights[~keep].sum())
        nodes = NodeSet(nodes.alphas[keep], nodes.weights[keep])
    scheme["n_nodes"] = len(nodes)
    return nodes, scheme


def _averaged_map(px_axis: np.ndarray, py_axis: np.ndarray, dist,
                  cfg: FieldConfig, atom: AtomSpec, window: TimeWindow,
                  method: str, order: int, count: int, seed: int,
                  prune: float, workers: int | None):
    """Deterministic chunked map-reduce of yield_grid over Husimi nodes."""
    nodes, scheme = _node_set(dist, method, order, count, seed, prune)
    n_workers = _resolve_workers(workers)
    t0 = time.perf_counter()
    seeds = grid_seeds(px_axis, py_axis, cfg, atom)

    def chunk_job(start: int):
        partial = np.zeros((px_axis.size, py_axis.size))
        chunk_diag = YieldDiagnostics()
        failed = 0
        for i in range(start, min(start + CHUNK_SIZE, len(nodes))):
            try:
                y = yield_grid(px_axis, py_axis, complex(nodes.alphas[i]),
                               cfg, atom, window, seeds=seeds,
                               collect_diag=chunk_diag)
                if not np.all(np.isfinite(y)):
                    raise FloatingPointError("non-finite yield")
            except Exception as exc:  # noqa: BLE001 - counted, budgeted
                warnings.warn(f"node {i} (alpha={nodes.alphas[i]:.6g}) "
                              f"failed: {exc}", stacklevel=2)
                failed += 1
                continue
            partial += nodes.weights[i] * y
        return partial, failed, chunk_diag

    starts = range(0, len(nodes), CHUNK_SIZE)
    if n_workers == 1:
        parts = [chunk_job(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(chunk_job, starts))

    total = np.zeros((px_axis.size, py_axis.size))
    diag = YieldDiagnostics()
    failures = 0
    for partial, failed, chunk_diag in parts:  # fixed order: bit-identical
        total += partial
        failures += failed
        diag.merge(chunk_diag)
    if failures > 0.01 * len(nodes):
        raise EnsembleFailure(failures, len(nodes))

    meta = {
        "code_version": qsfa.__version__,
        "node_scheme": scheme,
        "node_failures": failures,
        "workers": n_workers,
        "window": {"t_start": window.t_start, "t_end": window.t_end},
        "saddle_diagnostics": {
            "dropped": diag.dropped, "duplicates": diag.duplicates,
            "caustic": diag.caustic, "pole_flags": diag.pole_flags,
            "max_residual": diag.max_residual,
        },
        "wall_time_s": time.perf_counter() - t0,
        "normalization": "raw",
    }
    return total, meta


def averaged_pmd(grid: MomentumGrid, dist: Distribution | NodeSet,
                 cfg: FieldConfig, atom: AtomSpec,
                 window: TimeWindow | None = None, *,
                 method: str = "gauss_hermite", order: int = 32,
                 count: int = 1024, seed: int = 0,
                 prune: float = DEFAULT_PRUNE,
                 workers: int | None = None) -> PMDResult:
    """Husimi-weighted PMD over a momentum grid.

    Passing a NodeSet for dist uses those nodes verbatim (no pruning), which
    is how mixtures are realized: concatenate the weighted node sets.
    """
    if window is None:
        window = TimeWindow.unit_cell(cfg)
    yields, meta = _averaged_map(grid.px_axis, grid.py_axis, dist, cfg, atom,
                                 window, method, order, count, seed, prune,
                                 workers)
    return PMDResult(grid, yields, meta)


def averaged_lineout(px_samples, dist: Distribution | NodeSet,
                     cfg: FieldConfig, atom: AtomSpec,
                     window: TimeWindow | None = None, *,
                     method: str = "gauss_hermite", order: int = 32,
                     count: int = 1024, seed: int = 0,
                     prune: float = DEFAULT_PRUNE,
                     workers: int | None = None) -> list[tuple[float, float]]:
    """Ensemble-averaged yield along the p_y = 0 axis.

    Returns [(p_x, Y)] pairs; the window may select a sub-cycle release
    interval (single ionization event) unlike the full-period PMD.
    """
    if window is None:
        window = TimeWindow.unit_cell(cfg)
    px_axis = np.asarray(px_samples, dtype=np.float64)
    yields, _ = _averaged_map(px_axis, np.zeros(1), dist, cfg, atom, window,
                              method, order, count, seed, prune, workers)
    return list(zip(px_axis.tolist(), yields[:, 0].tolist()))
