#!/usr/bin/env python3
"""Writes the synthetic fixture CSVs under data/.

Three weekly close series sharing a market factor, 332 Mondays from
2018-01-01, plus a six-atom discrete law for the oracle command.
"""

import argparse
import datetime
import pathlib
import random

WEEKS = 332
START = datetime.date(2018, 1, 1)
ASSETS = {
    # name: (weekly drift, factor loading, idiosyncratic sd, first close)
    "asset_x": (0.0005, 1.0, 0.020, 40.0),
    "asset_y": (0.0060, 1.0, 0.022, 55.0),
    "asset_z": (0.0020, 0.6, 0.030, 120.0),
}
SIX_ATOMS = [(1, 3), (2, 5), (3, 7), (3, 2), (5, 4), (9, 6)]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    parser.add_argument("--seed", type=int, default=20180101)
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rng = random.Random(args.seed)
    factor = [rng.gauss(0.0, 0.025) for _ in range(WEEKS - 1)]
    for name, (drift, beta, sd, first) in ASSETS.items():
        close = first
        rows = [f"{START.isoformat()},{close:.4f}"]
        for w in range(1, WEEKS):
            close *= 1.0 + drift + beta * factor[w - 1] + rng.gauss(0.0, sd)
            date = START + datetime.timedelta(weeks=w)
            rows.append(f"{date.isoformat()},{close:.4f}")
        (out / f"{name}.csv").write_text("date,close\n" + "\n".join(rows) + "\n")

    p = 1.0 / len(SIX_ATOMS)
    atoms = "\n".join(f"{x},{y},{p!r}" for x, y in SIX_ATOMS)
    (out / "six_atoms.csv").write_text("x,y,p\n" + atoms + "\n")


if __name__ == "__main__":
    main()
