"""Compare the Lagrange and Markov weight sets and check both against periodic nets.

    python scripts/markov_vs_lagrange.py --k 2 --q 100 1000 --maxlen 10
"""

import argparse

from lagspec.contfrac import make_context
from lagspec.cylinders import build_cylinders
from lagspec.exact import surd_to_decimal
from lagspec.oracle import certified_level, periodic_net, verify_spectrum
from lagspec.spectra import LAGRANGE, MARKOV, spectra_pair


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--q", type=int, nargs="+", default=[100, 1000])
    ap.add_argument("--maxlen", type=int, default=10)
    args = ap.parse_args()

    net = periodic_net(args.k, args.maxlen)
    print(f"net: {len(net)} periodic values up to period {args.maxlen}, certified level N={certified_level(args.k, args.maxlen)}")
    for q in args.q:
        sp = spectra_pair(build_cylinders(make_context(args.k), q))
        lag, mar = sp[LAGRANGE], sp[MARKOV]
        extra = sorted(set(mar.weights) - set(lag.weights))
        print(f"Q={q}: {len(lag)} Lagrange, {len(mar)} Markov weights, {len(extra)} Markov-only")
        for w in extra[:10]:
            print(f"  markov-only {surd_to_decimal(w, 8)}")
        for sa in (lag, mar):
            rep = verify_spectrum(sa, net)
            print(f"  {sa.kind}: worst net gap {float(rep.worst_gap):.6f} (radius {1 / q:.6f}), violations {len(rep.violations)}")


if __name__ == "__main__":
    main()
