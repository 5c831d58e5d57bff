"""Recompute the frozen single-event skewness goldens.

The acceptance suite pins the exact lineout moments of the squeezed and
coherent weak fields at 3e12 W/cm^2 (event-1 window, 81-point lineout,
Gauss-Hermite 32) as a regression anchor.  Run this after an intentional
engine change, inspect the diff, and commit the new file together with
the change that motivated it.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from qsfa.diagnostics import moments
from qsfa.ensemble import averaged_lineout
from qsfa.fields import (
    NM_TO_OMEGA,
    AtomSpec,
    coherent_alpha0_for_intensity,
    config_for_drive,
    squeezing_for_intensity,
)
from qsfa.phase_space import CoherentState, SqueezedVacuum
from qsfa.saddles import TimeWindow

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden" / "skewness.json"

INTENSITY_WCM2 = 3e12
DRIVE_WCM2 = 3e14
WAVELENGTH_NM = 800.0
PX_SPAN = (-2.0, 2.0, 81)
ORDER = 32


def compute() -> dict:
    cfg = config_for_drive(NM_TO_OMEGA / WAVELENGTH_NM, DRIVE_WCM2)
    atom = AtomSpec()
    window = TimeWindow(0.0, cfg.period / 4.0)
    px = np.linspace(*PX_SPAN)
    dists = {
        "squeezed": SqueezedVacuum(
            squeezing_for_intensity(INTENSITY_WCM2, cfg.g_w), 0.0),
        "coherent": CoherentState(
            coherent_alpha0_for_intensity(INTENSITY_WCM2, cfg.g_w)),
    }
    payload: dict = {
        "intensity_wcm2": INTENSITY_WCM2,
        "drive_wcm2": DRIVE_WCM2,
        "wavelength_nm": WAVELENGTH_NM,
        "window": "event_1",
        "px_span": list(PX_SPAN),
        "order": ORDER,
    }
    for name, dist in dists.items():
        line = averaged_lineout(px, dist, cfg, atom, window, order=ORDER)
        m = moments(line)
        payload[name] = {
            "mean_px": m.mean_px,
            "variance_px": m.variance_px,
            "skewness_px": m.skewness_px,
        }
    return payload


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--check", action="store_true",
                        help="recompute and compare against the stored file "
                             "instead of overwriting it")
    args = parser.parse_args()
    payload = compute()
    if args.check:
        stored = json.loads(GOLDEN.read_text())
        if stored != payload:
            print("goldens are stale:")
            print(json.dumps(payload, indent=2))
            return 1
        print("goldens match")
        return 0
    GOLDEN.parent.mkdir(parents=True, exist_ok=True)
    GOLDEN.write_text(json.dumps(payload, indent=2) + "\n")
    print(GOLDEN)
    return 0


if __name__ == "__main__":
    sys.exit(main())
