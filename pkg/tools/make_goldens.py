#!/usr/bin/env python3
"""Regenerate the golden fixtures under tests/golden/.

Run from the repository root after an intentional output-format change:

    python tools/make_goldens.py

Inputs are produced by the seeded synth generator, so the whole directory
is reproducible; outputs are byte-for-byte pins of the CLI machine
formats (regenerate them when the tool version is bumped).
"""

import contextlib
import io
import os
import sys
from pathlib import Path

from adcfkit.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def run(argv, capture_to: Path | None = None) -> None:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    if code != 0:
        raise SystemExit(f"command failed ({code}): {argv}")
    if capture_to is not None:
        capture_to.write_text(buf.getvalue())


def main_():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    os.chdir(GOLDEN)

    run(["synth", "--seed", "20240601", "--out-prefix", "single",
         "--tar", "2,1,20", "--non", "0,1,15", "--spf=-1,1.2,25"])
    run(["synth", "--seed", "20240602", "--out-prefix", "dual", "--dual",
         "--tar", "2,1,1.5,1,18", "--non", "0,1,1.5,1,12", "--spf", "0.5,1,-1.5,1,20"])

    run(["evaluate", "--keys", "single.keys", "--scores", "single.scores",
         "--include-sasv-eer", "--format", "json"], GOLDEN / "evaluate.json")
    run(["evaluate", "--keys", "single.keys", "--scores", "single.scores",
         "--include-sasv-eer", "--format", "csv"], GOLDEN / "evaluate.csv")
    run(["tandem-eval", "--keys", "dual.keys", "--dual-scores", "dual.dualscores",
         "--format", "json"], GOLDEN / "tandem_grid.json")
    run(["tandem-eval", "--keys", "dual.keys", "--dual-scores", "dual.dualscores",
         "--mode", "frozen-asv", "--t-asv", "0.0", "--format", "json"],
        GOLDEN / "tandem_frozen.json")
    run(["sweep", "--keys", "single.keys", "--scores", "single.scores",
         "--config", "adcf1", "--out", "sweep"])
    run(["gate", "--dual-scores", "dual.dualscores", "--order", "cm-first",
         "--t-gate", "0.3", "--out", "gated.scores"])
    print(f"regenerated goldens in {GOLDEN}", file=sys.stderr)


if __name__ == "__main__":
    main_()
