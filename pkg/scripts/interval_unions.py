"""Plot-ready interval unions for L_K at two resolutions, plus their Hausdorff distance.

Writes ``<out>/K{k}-Q{q}-{kind}.csv`` (columns lo,hi) for each requested
resolution; any plotting tool can draw them as horizontal bars.

    python scripts/interval_unions.py --k 2 --q 100 1000 --out plotdata
"""

import argparse
import csv
from pathlib import Path

from lagspec.cli import _fmt, interval_union
from lagspec.contfrac import make_context
from lagspec.cylinders import build_cylinders
from lagspec.exact import surd_to_decimal
from lagspec.spectra import KINDS, hausdorff_distance, spectra_pair


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--q", type=int, nargs="+", default=[100, 1000])
    ap.add_argument("--kind", choices=KINDS, default="lagrange")
    ap.add_argument("--digits", type=int, default=8)
    ap.add_argument("--out", type=Path, default=Path("plotdata"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    sets = {}
    for q in args.q:
        sa = spectra_pair(build_cylinders(make_context(args.k), q))[args.kind]
        sets[q] = list(sa.weights)
        spans = interval_union(sa.weights, q, args.digits)
        path = args.out / f"K{args.k}-Q{q}-{args.kind}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["lo", "hi"])
            for lo, hi in spans:
                w.writerow([_fmt(lo, args.digits), _fmt(hi, args.digits)])
        covered = sum(hi - lo for lo, hi in spans)
        print(f"Q={q}: {len(sa)} weights, {len(spans)} intervals, total length {float(covered):.5f} -> {path}")
    qs = sorted(sets)
    for a, b in zip(qs, qs[1:]):
        d = hausdorff_distance(sets[a], sets[b])
        print(f"Hausdorff(Q={a}, Q={b}) = {surd_to_decimal(d, 6)} (bound {1 / a + 1 / b:.6f})")


if __name__ == "__main__":
    main()
