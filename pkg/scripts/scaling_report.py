"""Growth of C_{K,Q} and G_{K,Q} with Q, and how the solver time scales with edges.

    python scripts/scaling_report.py --k 2 3 --qmax 100000 --solve-qmax 3000
"""

import argparse
import math
import time

from lagspec.contfrac import make_context
from lagspec.cylinders import build_cylinders, cylinder_count_bounds
from lagspec.graphs import build_product, edge_count_bound
from lagspec.spectra import WeightedDigraph, offline_weight_sets


def slope(xs, ys):
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
    return sum((a - mx) * (b - my) for a, b in zip(lx, ly)) / sum((a - mx) ** 2 for a in lx)


def resolutions(qmax):
    qs, q = [], 100
    while q <= qmax:
        qs.append(q)
        q *= 10
    return qs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--qmax", type=int, default=10**5)
    ap.add_argument("--solve-qmax", type=int, default=3000)
    args = ap.parse_args()

    print("k,q,cylinders,envelope_lo,envelope_hi,inside,build_seconds")
    for k in args.k:
        ctx = make_context(k)
        qs = resolutions(args.qmax)
        sizes = []
        for q in qs:
            t0 = time.perf_counter()
            n = len(build_cylinders(ctx, q))
            dt = time.perf_counter() - t0
            sizes.append(n)
            env = cylinder_count_bounds(ctx, q)
            lo, hi = env if env else (float("nan"), float("nan"))
            print(f"{k},{q},{n},{lo:.1f},{hi:.1f},{lo <= n <= hi if env else ''},{dt:.3f}")
        if len(qs) > 1:
            hd = f" (dimension bracket {ctx.hd_lower}-{ctx.hd_upper})" if ctx.hd_lower else ""
            print(f"# K={k}: log-log slope of |C| = {slope(qs, sizes):.4f}{hd}")

    print()
    print("k,q,cylinders,vertices,edges,shift_edges,edge_bound,edges_over_bound,solve_seconds")
    for k in args.k:
        edges, secs = [], []
        q = 100
        while q <= args.solve_qmax:
            cs = build_cylinders(make_context(k), q)
            g = build_product(cs, compress=True)
            wg = WeightedDigraph.from_product(g)
            t0 = time.perf_counter()
            offline_weight_sets(wg)
            dt = time.perf_counter() - t0
            bound = edge_count_bound(cs)
            print(f"{k},{q},{len(cs)},{g.n_vertices},{g.n_edges},{g.n_shift},{bound:.0f},{g.n_edges / bound:.2f},{dt:.3f}")
            edges.append(g.n_edges)
            secs.append(max(dt, 1e-4))
            q = q * 3 if str(q)[0] == "1" else q * 10 // 3
        if len(edges) > 1:
            print(f"# K={k}: solve time ~ edges^{slope(edges, secs):.2f}")


if __name__ == "__main__":
    main()
