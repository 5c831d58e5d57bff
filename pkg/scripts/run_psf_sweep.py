"""Sweep the field-amplitude saddle solution over squeezing and coupling;
|alpha_x|, |alpha_y| saturate in r and grow linearly in g."""

import sys
from pathlib import Path

from qsfa.cli import main as qsfa_main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def main() -> int:
    return qsfa_main(["psf-sweep", "--config", str(CONFIGS / "psf_sweep.toml")])


if __name__ == "__main__":
    sys.exit(main())
