"""Compute the five momentum-map panels (mono, coherent, BSV at two
squeezing angles, thermal) on the standard grid.

Each panel lands in out/fig1_<name>/pmd.csv with a JSON sidecar; the
frontend composes them into the five-row figure.
"""

import argparse
import sys
import time
from pathlib import Path

from qsfa.cli import main as qsfa_main

PANELS = ["mono", "coherent", "bsv_phi0", "bsv_phimpi2", "thermal"]
CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--only", choices=PANELS, nargs="*",
                        help="subset of panels to compute")
    parser.add_argument("--workers", type=int, help="thread count")
    args = parser.parse_args()
    panels = args.only or PANELS
    for name in panels:
        argv = ["pmd", "--config", str(CONFIGS / f"fig1_{name}.toml")]
        if args.workers is not None:
            argv += ["--workers", str(args.workers)]
        t0 = time.time()
        print(f"== {name}")
        code = qsfa_main(argv)
        if code != 0:
            return code
        print(f"   done in {time.time() - t0:.1f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
