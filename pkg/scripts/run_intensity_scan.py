"""Mean-momentum vs mean-intensity scans for the coherent and squeezed
weak fields (log-log slopes 1/2 and 1)."""

import argparse
import sys
from pathlib import Path

from qsfa.cli import main as qsfa_main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--family", choices=["coherent", "bsv"], nargs="*",
                        help="subset of scan families")
    parser.add_argument("--workers", type=int, help="thread count")
    args = parser.parse_args()
    for family in args.family or ["coherent", "bsv"]:
        argv = ["scan", "--config", str(CONFIGS / f"scan_{family}.toml")]
        if args.workers is not None:
            argv += ["--workers", str(args.workers)]
        print(f"== scan {family}")
        code = qsfa_main(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
