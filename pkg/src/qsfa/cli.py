"""Run orchestration: config files, subcommands, portable outputs.

Subcommands: pmd, lineout, scan, tunnel-times, psf-sweep, verify.  Configs
are TOML with sections [field] [atom] [distribution] [grid] [window] [job]
[output]; every key is schema-checked and unknown keys are rejected.
Command-line ``--set section.key=value`` entries override file values
(precedence: flag > file > default).  Outputs are UTF-8 CSV files
(RFC-4180 quoting, shortest round-trip floats) with a JSON metadata
sidecar that echoes the fully resolved configuration, so any run can be
reproduced from its own sidecar.  Files appear atomically (temp file +
rename); identical config and seed give byte-identical CSVs for any
worker count.

Exit codes: 0 success, 1 config error, 2 verification gate failure,
3 per-node failure budget exceeded.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys
import time

import numpy as np

try:
    import tomllib as tomli
except ModuleNotFoundError:  # Python < 3.11
    import tomli

from qsfa import __version__
from qsfa.diagnostics import (
    asymmetry_metric,
    check_phase_equivalence,
    intensity_scan,
    moments,
    oracle_correlation,
    tunnel_time_stats,
)
from qsfa.ensemble import (
    WORKERS_ENV,
    EnsembleFailure,
    MomentumGrid,
    averaged_lineout,
    averaged_pmd,
)
from qsfa.fields import (
    NM_TO_OMEGA,
    AtomSpec,
    FieldConfig,
    coherent_alpha0_for_intensity,
    g_for_squeezing_and_intensity,
    intensity_to_amplitude,
    nbar_for_intensity,
    squeezing_for_intensity,
)
from qsfa.phase_space import CoherentState, NodeSet, SqueezedVacuum, ThermalState
from qsfa.saddles import TimeWindow, oracle_amplitude, yield_grid
from qsfa.statforce import psf_sweep, solve_psf, zeroth_order_psf


class ConfigError(Exception):
    """Invalid or unknown configuration content (exit code 1)."""


class GateFailure(Exception):
    """A verification gate did not pass (exit code 2)."""


# --- configuration schema -------------------------------------------------

_FLOAT = (float, int)
_SCHEMA: dict[str, dict[str, tuple]] = {
    "field": {
        "lambda_nm": _FLOAT,
        "intensity_2w_wcm2": _FLOAT,
        "g_w": _FLOAT,
        "g_2w": _FLOAT,
        "theta": _FLOAT,
    },
    "atom": {"ip": _FLOAT, "lam": _FLOAT},
    "distribution": {
        "kind": (str,),
        "intensity_wcm2": _FLOAT,
        "r": _FLOAT,
        "phi": _FLOAT,
        "method": (str,),
        "order": (int,),
        "count": (int,),
        "seed": (int,),
        "prune": _FLOAT,
    },
    "grid": {
        "px_min": _FLOAT,
        "px_max": _FLOAT,
        "nx": (int,),
        "py_min": _FLOAT,
        "py_max": _FLOAT,
        "ny": (int,),
    },
    "window": {"kind": (str,), "event": (int,), "t_start": _FLOAT, "t_end": _FLOAT},
    "job": {
        "workers": (int,),
        "intensities": (list,),
        "family": (str,),
        "event": (int,),
        "r_values": (list,),
        "g_values": (list,),
        "omega": _FLOAT,
        "e_2w": _FLOAT,
        "p": (list,),
        "periods": (int,),
    },
    "output": {"directory": (str,), "normalization": (str,)},
}

_DEFAULTS: dict[str, dict] = {
    "field": {"lambda_nm": 800.0, "intensity_2w_wcm2": 3e14, "theta": 0.0},
    "atom": {"ip": 0.904, "lam": 1.6875},
    "distribution": {
        "kind": "none",
        "phi": 0.0,
        "method": "gauss_hermite",
        "order": 32,
        "count": 1024,
        "seed": 0,
        "prune": 1e-16,
    },
    "grid": {
        "px_min": -2.5,
        "px_max": 2.5,
        "nx": 201,
        "py_min": -1.5,
        "py_max": 1.5,
        "ny": 101,
    },
    "window": {"kind": "unit_cell", "event": 1},
    "job": {},
    "output": {"directory": "out", "normalization": "max"},
}


def _check_section(name: str, entries: dict) -> None:
    if name not in _SCHEMA:
        raise ConfigError(f"unknown config section [{name}]")
    for key, value in entries.items():
        if key not in _SCHEMA[name]:
            raise ConfigError(f"unknown config key {name}.{key}")
        allowed = _SCHEMA[name][key]
        if isinstance(value, bool) or not isinstance(value, allowed):
            names = "/".join(t.__name__ for t in allowed)
            raise ConfigError(
                f"config key {name}.{key} expects {names}, "
                f"got {type(value).__name__} ({value!r})"
            )


def _parse_set(entry: str) -> tuple[str, str, object]:
    if "=" not in entry or "." not in entry.split("=", 1)[0]:
        raise ConfigError(f"--set expects section.key=value, got {entry!r}")
    path, raw = entry.split("=", 1)
    section, key = path.split(".", 1)
    try:
        value = tomli.loads(f"v = {raw}")["v"]
    except tomli.TOMLDecodeError:
        value = raw  # bare string convenience (kind=squeezed)
    return section.strip(), key.strip(), value


def load_config(path: str | None, sets: list[str] | None = None) -> dict:
    """Defaults <- file <- --set overrides, schema-checked at each layer."""
    conf = copy.deepcopy(_DEFAULTS)
    if path is not None:
        try:
            with open(path, "rb") as fh:
                file_conf = tomli.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc
        for section, entries in file_conf.items():
            if not isinstance(entries, dict):
                raise ConfigError(
                    f"top-level key {section!r} must be a section table"
                )
            _check_section(section, entries)
            conf[section].update(entries)
    for entry in sets or []:
        section, key, value = _parse_set(entry)
        _check_section(section, {key: value})
        conf[section][key] = value
    return conf


# --- resolution of physics objects ----------------------------------------

def _resolve_field_dist(conf: dict, point: bool = True):
    """FieldConfig, distribution (or single-node set), node kwargs, echo.

    The weak-field coupling is settled here: an explicit field.g_w always
    wins; a squeezed section giving both r and intensity_wcm2 pins g_w via
    the matched-intensity identity; otherwise g_w falls back to 1e-8.
    The echo dict is the input config with every derived value filled in.

    With point=False (intensity scans, verify) the distribution section is
    still validated but no single-point distribution is built, so e.g. a
    coherent section may omit intensity_wcm2 when job.intensities supplies
    the sweep; the returned distribution slot is then None.
    """
    echo = copy.deepcopy(conf)
    f, d = conf["field"], conf["distribution"]
    if f["lambda_nm"] <= 0.0:
        raise ConfigError("field.lambda_nm must be positive")
    omega = NM_TO_OMEGA / f["lambda_nm"]
    kind = d["kind"]
    if kind not in ("none", "squeezed", "coherent", "thermal"):
        raise ConfigError(
            f"distribution.kind must be none/squeezed/coherent/thermal, got {kind!r}"
        )
    g_w = f.get("g_w")
    if kind == "squeezed" and g_w is None and "r" in d and "intensity_wcm2" in d:
        g_w = g_for_squeezing_and_intensity(d["r"], d["intensity_wcm2"])
    if g_w is None:
        g_w = 1e-8

    dist = None
    if point:
        if kind == "none":
            dist = NodeSet(np.asarray([0.0 + 0.0j]), np.asarray([1.0]))
        elif kind == "squeezed":
            if "r" in d:
                r = float(d["r"])
            elif "intensity_wcm2" in d:
                r = squeezing_for_intensity(d["intensity_wcm2"], g_w)
            else:
                raise ConfigError(
                    "squeezed distribution needs distribution.r or "
                    "distribution.intensity_wcm2"
                )
            dist = SqueezedVacuum(r=r, phi=d["phi"])
            echo["distribution"]["r"] = r
        elif kind == "coherent":
            if "intensity_wcm2" not in d:
                raise ConfigError(
                    "coherent distribution needs distribution.intensity_wcm2"
                )
            dist = CoherentState(coherent_alpha0_for_intensity(d["intensity_wcm2"], g_w))
        elif kind == "thermal":
            if "intensity_wcm2" not in d:
                raise ConfigError(
                    "thermal distribution needs distribution.intensity_wcm2"
                )
            dist = ThermalState(nbar_for_intensity(d["intensity_wcm2"], g_w))

    try:
        probe = FieldConfig(omega=omega, g_w=g_w,
                            g_2w=f.get("g_2w"), theta=f["theta"])
        e_2w = intensity_to_amplitude(f["intensity_2w_wcm2"])
        cfg = FieldConfig(omega=omega, g_w=g_w, g_2w=probe.g_2w,
                          alpha_2w=e_2w / (2.0 * probe.g_2w), theta=f["theta"])
    except ValueError as exc:
        raise ConfigError(f"field section invalid: {exc}") from exc
    echo["field"]["g_w"] = g_w
    echo["field"]["g_2w"] = cfg.g_2w

    if d["method"] not in ("gauss_hermite", "monte_carlo"):
        raise ConfigError(
            f"distribution.method must be gauss_hermite or monte_carlo, "
            f"got {d['method']!r}"
        )
    node_kwargs = dict(method=d["method"], order=d["order"], count=d["count"],
                       seed=d["seed"], prune=d["prune"])
    return cfg, dist, node_kwargs, echo


def _resolve_atom(conf: dict) -> AtomSpec:
    try:
        return AtomSpec(ip=conf["atom"]["ip"], lam=conf["atom"]["lam"])
    except ValueError as exc:
        raise ConfigError(f"atom section invalid: {exc}") from exc


def _resolve_grid(conf: dict) -> MomentumGrid:
    g = conf["grid"]
    try:
        return MomentumGrid(g["px_min"], g["px_max"], g["nx"],
                            g["py_min"], g["py_max"], g["ny"])
    except ValueError as exc:
        raise ConfigError(f"grid section invalid: {exc}") from exc


def _resolve_window(conf: dict, cfg: FieldConfig) -> TimeWindow:
    w = conf["window"]
    period = cfg.period
    if w["kind"] == "unit_cell":
        return TimeWindow.unit_cell(cfg)
    if w["kind"] == "event":
        k = w["event"]
        if not 1 <= k <= 4:
            raise ConfigError(f"window.event must be 1..4, got {k}")
        return TimeWindow((k - 1) * period / 4.0, k * period / 4.0)
    if w["kind"] == "explicit":
        if "t_start" not in w or "t_end" not in w:
            raise ConfigError("explicit window needs window.t_start and window.t_end")
        try:
            return TimeWindow(w["t_start"], w["t_end"])
        except ValueError as exc:
            raise ConfigError(f"window section invalid: {exc}") from exc
    raise ConfigError(
        f"window.kind must be unit_cell/event/explicit, got {w['kind']!r}"
    )


def _workers(conf: dict) -> int | None:
    return conf["job"].get("workers")


# --- output writing -------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _csv_field(text: str) -> str:
    if any(c in text for c in ",\"\n\r"):
        return '"' + text.replace('"', '""') + '"'
    return text


def _atomic_write(path: str, data: bytes) -> None:
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(_csv_field(h) for h in header)]
    lines.extend(",".join(_csv_field(_fmt(v)) for v in row) for row in rows)
    _atomic_write(path, ("\n".join(lines) + "\n").encode("utf-8"))


def write_json(path: str, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
    _atomic_write(path, (text + "\n").encode("utf-8"))


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _meta(command: str, echo: dict, t0: float, extra: dict) -> dict:
    payload = {
        "code_version": __version__,
        "command": command,
        "config": echo,
        "wall_time_s": time.time() - t0,
    }
    payload.update(extra)
    return payload


def _out_dir(conf: dict) -> str:
    directory = conf["output"]["directory"]
    os.makedirs(directory, exist_ok=True)
    return directory


# --- subcommands ----------------------------------------------------------

def run_pmd(conf: dict) -> list[str]:
    t0 = time.time()
    cfg, dist, nk, echo = _resolve_field_dist(conf)
    atom = _resolve_atom(conf)
    grid = _resolve_grid(conf)
    window = _resolve_window(conf, cfg)
    if conf["output"]["normalization"] not in ("raw", "max"):
        raise ConfigError("output.normalization must be raw or max")
    result = averaged_pmd(grid, dist, cfg, atom, window,
                          workers=_workers(conf), **nk)
    peak = float(result.yields.max())
    norm = result.yields / peak if peak > 0.0 else result.yields
    rows = []
    for i, px in enumerate(grid.px_axis):
        for j, py in enumerate(grid.py_axis):
            rows.append((px, py, result.yields[i, j], norm[i, j]))
    directory = _out_dir(conf)
    csv_path = os.path.join(directory, "pmd.csv")
    write_csv(csv_path, ["px", "py", "yield", "yield_norm"], rows)
    meta_path = os.path.join(directory, "pmd.meta.json")
    write_json(meta_path, _meta("pmd", echo, t0, {
        "result_meta": result.meta,
        "normalization": conf["output"]["normalization"],
        "peak_yield": peak,
    }))
    return [csv_path, meta_path]


def run_lineout(conf: dict) -> list[str]:
    t0 = time.time()
    cfg, dist, nk, echo = _resolve_field_dist(conf)
    atom = _resolve_atom(conf)
    grid = conf["grid"]
    window = _resolve_window(conf, cfg)
    px = np.linspace(grid["px_min"], grid["px_max"], grid["nx"])
    line = averaged_lineout(px, dist, cfg, atom, window,
                            workers=_workers(conf), **nk)
    report = moments(line)
    directory = _out_dir(conf)
    csv_path = os.path.join(directory, "lineout.csv")
    write_csv(csv_path, ["px", "yield"], line)
    meta_path = os.path.join(directory, "lineout.meta.json")
    write_json(meta_path, _meta("lineout", echo, t0, {
        "moments": {
            "mean_px": report.mean_px,
            "variance_px": report.variance_px,
            "skewness_px": report.skewness_px,
            "total_weight": report.total_weight,
        },
    }))
    return [csv_path, meta_path]


def run_scan(conf: dict) -> list[str]:
    t0 = time.time()
    cfg, _, nk, echo = _resolve_field_dist(conf, point=False)
    atom = _resolve_atom(conf)
    window = _resolve_window(conf, cfg)
    job = conf["job"]
    if "intensities" not in job or "family" not in job:
        raise ConfigError("scan needs job.intensities and job.family")
    intensities = [float(v) for v in job["intensities"]]
    family = job["family"]
    g_w, phi = cfg.g_w, conf["distribution"]["phi"]
    if family == "coherent":
        def dist_family(i): return CoherentState(coherent_alpha0_for_intensity(i, g_w))
    elif family == "squeezed":
        def dist_family(i): return SqueezedVacuum(squeezing_for_intensity(i, g_w), phi)
    elif family == "thermal":
        def dist_family(i): return ThermalState(nbar_for_intensity(i, g_w))
    else:
        raise ConfigError(
            f"job.family must be coherent/squeezed/thermal, got {family!r}"
        )
    grid = conf["grid"]
    px = np.linspace(grid["px_min"], grid["px_max"], grid["nx"])
    scan = intensity_scan(dist_family, intensities, cfg, atom, window,
                          px_samples=px, workers=_workers(conf), **nk)
    rows: list[tuple] = [
        (pt.intensity_wcm2, pt.report.mean_px, pt.report.skewness_px)
        for pt in scan.points
    ]
    if scan.slope is not None:
        rows.append(("fit_slope", scan.slope, ""))
        rows.append(("fit_r_squared", scan.r_squared, ""))
    directory = _out_dir(conf)
    csv_path = os.path.join(directory, "scan.csv")
    write_csv(csv_path, ["I_w_Wcm2", "mean_px", "skew_px"], rows)
    meta_path = os.path.join(directory, "scan.meta.json")
    write_json(meta_path, _meta("scan", echo, t0, {
        "family": family,
        "slope": scan.slope,
        "r_squared": scan.r_squared,
    }))
    return [csv_path, meta_path]


def run_tunnel_times(conf: dict) -> list[str]:
    t0 = time.time()
    cfg, dist, nk, echo = _resolve_field_dist(conf)
    atom = _resolve_atom(conf)
    if isinstance(dist, NodeSet):
        raise ConfigError("tunnel-times needs a distribution (kind != none)")
    event = conf["job"].get("event", 1)
    grid = conf["grid"]
    px = np.linspace(grid["px_min"], grid["px_max"], grid["nx"])
    nk.pop("prune")
    stats = tunnel_time_stats(px, dist, cfg, atom, event, **nk)
    rows: list[tuple] = []
    for i, p in enumerate(stats.px):
        for n, w in enumerate(stats.node_weights):
            v = stats.im_times[n, i]
            if not math.isnan(v):
                rows.append(("node", event, p, v, w, "", "", ""))
    for i, p in enumerate(stats.px):
        rows.append(("summary", event, p, "", "",
                     stats.weighted_mean_im[i], stats.weighted_var_im[i],
                     int(stats.excluded[i])))
    directory = _out_dir(conf)
    csv_path = os.path.join(directory, "tunnel_times.csv")
    write_csv(csv_path,
              ["row_type", "event", "px", "im_t", "weight",
               "mean_im", "var_im", "excluded"], rows)
    meta_path = os.path.join(directory, "tunnel_times.meta.json")
    write_json(meta_path, _meta("tunnel-times", echo, t0, {
        "event": event,
        "n_nodes": int(stats.node_weights.size),
        "excluded_total": int(stats.excluded.sum()),
    }))
    return [csv_path, meta_path]


def run_psf_sweep(conf: dict) -> list[str]:
    t0 = time.time()
    job = conf["job"]
    if "r_values" not in job or "g_values" not in job:
        raise ConfigError("psf-sweep needs job.r_values and job.g_values")
    p = tuple(float(v) for v in job.get("p", [0.0, 0.0]))
    if len(p) != 2:
        raise ConfigError("job.p must be [px, py]")
    omega = job.get("omega", 0.057)
    e_2w = job.get("e_2w", 0.106)
    sols = psf_sweep([float(v) for v in job["r_values"]],
                     [float(v) for v in job["g_values"]],
                     p, omega=omega, e_2w=e_2w,
                     ip=conf["atom"]["ip"], periods=job.get("periods", 4))
    rows = [(s.r, s.params[0], abs(s.alpha_x), abs(s.alpha_y), s.residual_norm)
            for s in sols]
    directory = _out_dir(conf)
    csv_path = os.path.join(directory, "psf_sweep.csv")
    write_csv(csv_path, ["r", "g", "abs_alpha_x", "abs_alpha_y", "residual"], rows)
    meta_path = os.path.join(directory, "psf_sweep.meta.json")
    write_json(meta_path, _meta("psf-sweep", copy.deepcopy(conf), t0, {
        "omega": omega, "e_2w": e_2w, "p": list(p),
    }))
    return [csv_path, meta_path]


# --- verification bundle --------------------------------------------------

def _gate(report: list, name: str, value: float, ok: bool, criterion: str):
    report.append({"gate": name, "value": value, "ok": bool(ok),
                   "criterion": criterion})
    mark = "ok  " if ok else "FAIL"
    print(f"{mark} {name:28s} {value:.6g}  ({criterion})")


def run_verify(conf: dict) -> list[str]:
    """Fast engine-health bundle; raises GateFailure if any gate fails.

    Covers: stationary-phase vs quadrature correlation (with a deliberately
    branch-broken negative control that must fail), the distribution/carrier
    phase identity, monochromatic mirror symmetry, node-order doubling, and
    the amplitude-saddle solver's zeroth order and residual.
    """
    t0 = time.time()
    cfg, _, _, echo = _resolve_field_dist(conf, point=False)
    atom = _resolve_atom(conf)
    report: list[dict] = []

    # stationary phase vs direct quadrature, plus broken-branch control
    px = np.linspace(-0.8 * cfg.cutoff_px, 0.8 * cfg.cutoff_px, 11)
    cell = TimeWindow(0.0, cfg.period)
    log_orc, log_spa, log_bad = [], [], []
    for py in (0.0, 0.5):
        y_ok = yield_grid(px, np.asarray([py]), 0j, cfg, atom, cell)[:, 0]
        y_bad = yield_grid(px, np.asarray([py]), 0j, cfg, atom, cell,
                           sabotage_branches=True)[:, 0]
        for i, x in enumerate(px):
            amp = oracle_amplitude((float(x), py), 0j, cfg, atom, cell,
                                   subtract_edges=True)
            if y_ok[i] > 0 and y_bad[i] > 0 and abs(amp) > 0:
                log_orc.append(2.0 * math.log(abs(amp)))
                log_spa.append(math.log(y_ok[i]))
                log_bad.append(math.log(y_bad[i]))
    corr = float(np.corrcoef(log_spa, log_orc)[0, 1])
    corr_bad = float(np.corrcoef(log_bad, log_orc)[0, 1])
    _gate(report, "oracle-correlation", corr, corr >= 0.9, ">= 0.9")
    _gate(report, "oracle-negative-control", corr_bad, corr_bad < 0.9,
          "broken branches must fail (< 0.9)")
    corr_events = oracle_correlation(0j, cfg, atom, px_samples=px,
                                     py_samples=(0.0, 0.5), mode="events")
    _gate(report, "oracle-correlation-events", corr_events,
          corr_events >= 0.9, ">= 0.9")

    # phase identity: exact at dphi = 0, tight at dphi = pi/3
    small = MomentumGrid(-1.0, 1.0, 15, 0.0, 0.6, 4)
    dist = SqueezedVacuum(12.15, 0.0)
    dev0 = check_phase_equivalence(small, dist, cfg, atom, 0.0, order=8)
    _gate(report, "phase-identity-dphi0", dev0, dev0 == 0.0, "exactly 0")
    dev = check_phase_equivalence(small, dist, cfg, atom, math.pi / 3, order=8)
    _gate(report, "phase-identity", dev, dev <= 1e-6, "<= 1e-6")

    # monochromatic mirror symmetry
    grid = MomentumGrid(-2.0, 2.0, 41, -1.0, 1.0, 21)
    mono = NodeSet(np.asarray([0j]), np.asarray([1.0]))
    pmd = averaged_pmd(grid, mono, cfg, atom, workers=_workers(conf))
    sym = asymmetry_metric(pmd)
    _gate(report, "mono-symmetry", sym, sym <= 1e-8, "<= 1e-8")

    # node-order doubling on a coarse grid
    coarse = MomentumGrid(-2.0, 2.0, 21, 0.0, 1.0, 6)
    lo = averaged_pmd(coarse, dist, cfg, atom, order=32, workers=_workers(conf))
    hi = averaged_pmd(coarse, dist, cfg, atom, order=64, workers=_workers(conf))
    ylo, yhi = lo.normalized().yields, hi.normalized().yields
    dbl = float(np.max(np.abs(ylo - yhi)))
    _gate(report, "gh-doubling", dbl, dbl <= 1e-3, "<= 1e-3")

    # amplitude-saddle solver
    z = zeroth_order_psf(12.0)
    _gate(report, "psf-zeroth", abs(z[0]) + abs(z[1]),
          z == (0j, 0j), "exactly (0, 0)")
    sol = solve_psf((0.0, 0.0), 12.0, 1e-8, 0.057, 0.106)
    _gate(report, "psf-residual", sol.residual_norm,
          sol.residual_norm <= 1e-10, "<= 1e-10")
    mag_ok = (1e-6 <= abs(sol.alpha_x) <= 1e-4
              and 1e-6 <= abs(sol.alpha_y) <= 1e-4)
    _gate(report, "psf-magnitude", abs(sol.alpha_x), mag_ok,
          "|alpha_x|, |alpha_y| in [1e-6, 1e-4]")

    directory = _out_dir(conf)
    path = os.path.join(directory, "verify.json")
    write_json(path, _meta("verify", echo, t0, {"gates": report}))
    if not all(g["ok"] for g in report):
        failed = ", ".join(g["gate"] for g in report if not g["ok"])
        raise GateFailure(f"verification gates failed: {failed}")
    return [path]


# --- entry point ----------------------------------------------------------

_RUNNERS = {
    "pmd": run_pmd,
    "lineout": run_lineout,
    "scan": run_scan,
    "tunnel-times": run_tunnel_times,
    "psf-sweep": run_psf_sweep,
    "verify": run_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qsfa",
        description="Momentum distributions of ionization driven by a strong "
                    "classical drive dressed with a quantum weak field.",
    )
    parser.add_argument("command", choices=sorted(_RUNNERS))
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--set", action="append", default=[], metavar="SEC.KEY=VAL",
                        help="override a config value (repeatable)")
    parser.add_argument("--workers", type=int,
                        help=f"thread count (also via ${WORKERS_ENV})")
    args = parser.parse_args(argv)
    try:
        sets = list(args.set)
        if args.workers is not None:
            sets.append(f"job.workers={args.workers}")
        conf = load_config(args.config, sets)
        paths = _RUNNERS[args.command](conf)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except GateFailure as exc:
        print(f"{exc}", file=sys.stderr)
        return 2
    except EnsembleFailure as exc:
        print(f"numerical failure budget exceeded: {exc}", file=sys.stderr)
        return 3
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
