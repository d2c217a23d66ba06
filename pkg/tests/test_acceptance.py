"""End-to-end acceptance checks, one PASS/FAIL line per criterion.

Each test records its line in the terminal summary (and prints it, visible
with ``-s``) before asserting.
"""

import math
import random
import time
from fractions import Fraction

from lagspec.cli import constants_table, run
from lagspec.contfrac import make_context
from lagspec.cylinders import cylinder_count_bounds
from lagspec.exact import Surd
from lagspec.oracle import height_enclosure, lagrange_periodic, periodic_net, verify_spectrum, within
from lagspec.spectra import (
    LAGRANGE,
    MARKOV,
    WeightedDigraph,
    hausdorff_distance,
    incremental_weight_sets,
    naive_weight_sets,
    offline_weight_sets,
)

from conftest import ACCEPTANCE_LINES, cylinders, pair, product


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _table(k):
    code, out = run(["constants", "--k", str(k), "--digits", "12"])
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    return {r[0]: r[-1] for r in rows}, dict(constants_table(k))


def test_criterion_1_exact_constants():
    t0 = time.perf_counter()
    dec1, exact1 = _table(1)
    dec2, exact2 = _table(2)
    dec3, exact3 = _table(3)
    dec4, exact4 = _table(4)
    checks = {
        "[0;(1)]=0.6180339887": dec1["[0;(1)]"][:12] == "0.6180339887"
        and exact1["[0;(1)]"] == Surd(Fraction(-1, 2), Fraction(1, 2), 5),
        "[0;(2 1)]=0.3660254037": dec2["[0;(2 1)]"][:12] == "0.3660254037"
        and exact2["[0;(2 1)]"] == Surd(Fraction(-1, 2), Fraction(1, 2), 3),
        "L((2 1))=sqrt(13)": lagrange_periodic((2, 1)) == Surd.sqrt(13),
        "L((3 1))=sqrt(21)": exact3["L((1 3))"] == Surd.sqrt(21) == lagrange_periodic((3, 1)),
        "L((4))=2sqrt(5)": exact4["L((4))"] == 2 * Surd.sqrt(5),
    }
    elapsed = time.perf_counter() - t0
    checks["runtime<1s"] = elapsed < 1
    failed = [name for name, ok in checks.items() if not ok]
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks ({elapsed:.2f}s)"
    if failed:
        detail += f"; failed: {', '.join(failed)}; computed L((2 1)) = {lagrange_periodic((2, 1))}"
    report(1, not failed, detail)


def test_criterion_2_spectrum_endpoints():
    s5, s13, s21 = Surd.sqrt(5), Surd.sqrt(13), Surd.sqrt(21)
    parts, ok = [], True
    for q in (100, 1000):
        lag = pair(2, q)[LAGRANGE].weights
        r = Fraction(1, q)
        top, bottom = within(lag[-1], s13, r), within(lag[0], s5, r)
        ok &= top and bottom
        parts.append(f"K=2 Q={q}: max {float(lag[-1]):.6f} near sqrt(13) {top}, min {float(lag[0]):.6f} near sqrt(5) {bottom}")
    lag3 = pair(3, 100)[LAGRANGE].weights
    top3 = within(lag3[-1], s21, Fraction(1, 100))
    ok &= top3
    parts.append(f"K=3 Q=100: max {float(lag3[-1]):.6f} near sqrt(21) {top3}")
    report(2, ok, "; ".join(parts))


def test_criterion_3_oracle_density():
    counts = []
    total = 0
    for k, maxlen in ((2, 8), (3, 6)):
        rep = verify_spectrum(pair(k, 100)[LAGRANGE], periodic_net(k, maxlen))
        total += len(rep.violations)
        counts.append(f"K={k} maxlen={maxlen}: {rep.checked} values, {len(rep.violations)} violations, worst gap {float(rep.worst_gap):.5f}")
    report(3, total == 0, "; ".join(counts))


def test_criterion_4_two_resolution_hausdorff():
    tol = Fraction(1, 50) + Fraction(1, 500)
    parts, ok = [], True
    for kind in (LAGRANGE, MARKOV):
        d = hausdorff_distance(list(pair(2, 50)[kind].weights), list(pair(2, 500)[kind].weights))
        ok &= d <= tol
        parts.append(f"{kind} {float(d):.5f}")
    report(4, ok, f"Hausdorff(Q=50, Q=500) {', '.join(parts)} <= {float(tol):.3f}")


def test_criterion_5_cylinder_growth():
    parts, ok = [], True
    for k in (2, 3, 4):
        for q in (10**2, 10**3, 10**4):
            lo, hi = cylinder_count_bounds(make_context(k), q)
            n = len(cylinders(k, q))
            good = lo <= n <= hi
            ok &= good
            parts.append(f"K={k} Q={q}: {n}{'' if good else ' OUT'}")
    report(5, ok, "; ".join(parts))


def test_criterion_6_diameter_floor():
    parts, ok = [], True
    for k in (2, 3, 4):
        cs = cylinders(k, 1000)
        floor = cs.ctx.diam_ratio_lower / 1000
        good = all(d >= floor for d in cs.diams)
        ok &= good
        parts.append(f"K={k}: ratio {cs.ctx.diam_ratio_lower} over {len(cs)} leaves {good}")
    assert cylinders(2, 1000).ctx.diam_ratio_lower == Fraction(1, 14)
    report(6, ok, "; ".join(parts))


def test_criterion_7_algorithm_equivalence():
    rng = random.Random(20240607)
    mismatches = 0
    for _ in range(100):
        n = rng.randint(1, 50)
        m = rng.randint(0, 400)
        pool = [rng.randint(0, 1000) for _ in range(rng.randint(1, 8))]  # few values: forced duplicates
        g = WeightedDigraph.from_edges(n, [(rng.randrange(n), rng.randrange(n), rng.choice(pool)) for _ in range(m)])
        mismatches += incremental_weight_sets(g) != naive_weight_sets(g)
    for q in (3, 7, 20, 50):
        g = WeightedDigraph.from_product(product(2, q))
        mismatches += incremental_weight_sets(g) != naive_weight_sets(g)
    report(7, mismatches == 0, f"100 random digraphs + G_(2,Q) for Q in 3,7,20,50: {mismatches} mismatches")


def test_criterion_8_shift_edge_bijection():
    parts, ok = [], True
    for k in (2, 3):
        for q in (3, 7, 10, 20, 50, 100):
            try:
                cs = cylinders(k, q)
            except ValueError:
                continue
            g = product(k, q)
            good = g.n_shift == len(cs) ** 2 * k
            ok &= good
            parts.append(f"K={k} Q={q}: {g.n_shift}")
    report(8, ok, "; ".join(parts))


def test_criterion_9_weight_soundness():
    cs = cylinders(2, 100)
    g = product(2, 100)
    rng = random.Random(9)
    shifts = list(g.shift_edges())
    r = Fraction(1, 100)
    worst = Fraction(0)
    bad = 0
    # G_(2,100) has |C|^2 K = 162 shift edges, so the 200 draws are with replacement
    for e in rng.choices(shifts, k=200):
        p, a0, s = g.triples[e]
        pw, sw = cs.leaves[p], cs.leaves[s]
        f = g.weights[e]
        for _ in range(50):
            right = list(sw) + [rng.randint(1, 2) for _ in range(40 - len(sw))]
            left = list(pw) + [rng.randint(1, 2) for _ in range(40 - len(pw))]
            enc = height_enclosure(a0, right, left)
            gap = max(f - enc.lo, enc.hi - f)
            if gap > r:
                bad += 1
            worst = max(worst, gap.bounds(20)[1])
    report(9, bad == 0, f"200 edges x 50 extensions of G_(2,100): worst |lambda0 - F| <= {float(worst):.6f}, {bad} over 1/100")


def test_criterion_10_lagrange_inside_markov():
    graphs = 0
    ok = True
    rng = random.Random(10)
    for _ in range(50):
        n = rng.randint(1, 20)
        g = WeightedDigraph.from_edges(n, [(rng.randrange(n), rng.randrange(n), rng.randint(0, 5)) for _ in range(rng.randint(0, 60))])
        lag, mar = naive_weight_sets(g)
        ok &= set(lag) <= set(mar)
        graphs += 1
    for k, q in ((2, 3), (2, 7), (2, 20), (2, 50), (2, 100), (2, 500), (2, 1000), (3, 100)):
        sp = pair(k, q)
        ok &= set(sp[LAGRANGE].weights) <= set(sp[MARKOV].weights)
        graphs += 1
    bridge = WeightedDigraph.from_edges(
        6, [(0, 1, 1), (1, 0, 1), (1, 2, 1), (2, 3, 2), (3, 4, 1), (4, 5, 1), (5, 4, 1)]
    )
    lag, mar = offline_weight_sets(bridge)
    markov_only = sorted(set(mar) - set(lag))
    ok &= markov_only == [2]
    report(10, ok, f"inclusion on {graphs} graphs; two-cycle bridge instance Markov-only weights {markov_only}")


def _slope(xs, ys):
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
    return sum((a - mx) * (b - my) for a, b in zip(lx, ly)) / sum((a - mx) ** 2 for a in lx)


def test_criterion_11_scaling_report():
    qs = [10**2, 10**3, 10**4, 10**5]
    slope = _slope(qs, [len(cylinders(2, q)) for q in qs])
    edges, seconds = [], []
    for q in (100, 300, 1000, 3000):
        g = WeightedDigraph.from_product(product(2, q, True))
        t0 = time.perf_counter()
        offline_weight_sets(g)
        seconds.append(max(time.perf_counter() - t0, 1e-4))
        edges.append(g.n_edges)
    time_slope = _slope(edges, seconds)
    # wall-clock exponent is informational only
    report(11, 0.50 < slope < 0.56, f"|C_(2,Q)| log-log slope {slope:.4f} over Q=1e2..1e5; solve time ~ edges^{time_slope:.2f} (reported, not asserted)")
