"""Release-time (Im t_sp) statistics across the squeezed ensemble for
both squeezing angles; the variance curve is asymmetric for phi = 0 and
symmetric for phi = -pi/2."""

import argparse
import sys
from pathlib import Path

from qsfa.cli import main as qsfa_main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--angle", choices=["phi0", "phimpi2"], nargs="*",
                        help="subset of squeezing angles")
    args = parser.parse_args()
    for angle in args.angle or ["phi0", "phimpi2"]:
        argv = ["tunnel-times",
                "--config", str(CONFIGS / f"tunnel_times_{angle}.toml")]
        print(f"== tunnel-times {angle}")
        code = qsfa_main(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
