"""``spectra`` command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .contfrac import make_context, periodic_value
from .cylinders import ResolutionTooSmall, cached_cylinders, cylinder_count_bounds
from .exact import Surd, surd_to_decimal
from .graphs import build_product, edge_count_bound
from .oracle import MAX_NET_LENGTH, certified_level, lagrange_periodic, periodic_net, verify_spectrum
from .spectra import KINDS, LAGRANGE, SpectrumApproximation, hausdorff_distance, spectra_pair

COMMANDS = ("compute", "plotdata", "stats", "verify", "constants")
SPECTRA_MAGIC = "lagspec-spectra 1"
DEFAULT_SHIFT_BUDGET = 2_000_000


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    k: int
    q: int = 100
    kind: str = LAGRANGE
    format: str = "csv"
    digits: int = 12
    cache_dir: str | None = None
    maxlen: int = 8
    shift_budget: int = DEFAULT_SHIFT_BUDGET

    def validate(self) -> RunConfig:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.k < 1:
            raise UsageError(f"--k must be >= 1, got {self.k}")
        if self.k == 1 and self.command not in ("compute", "constants"):
            raise UsageError("K = 1 is only supported by 'compute' and 'constants' (the spectrum is {sqrt(5)})")
        if self.q < 1:
            raise UsageError(f"--q must be positive, got {self.q}")
        if self.kind not in KINDS:
            raise UsageError(f"--kind must be one of {', '.join(KINDS)}")
        if self.format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")
        if self.digits < 1:
            raise UsageError("--digits must be positive")
        if not 1 <= self.maxlen <= MAX_NET_LENGTH:
            raise UsageError(f"--maxlen must be between 1 and {MAX_NET_LENGTH}")
        return self


# -- computation with an optional cache ----------------------------------------


def _surd_fields(w: Surd) -> list[str]:
    return [str(w.a.numerator), str(w.a.denominator), str(w.b.numerator), str(w.b.denominator), str(w.d)]


def _surd_from_fields(parts: Sequence[str]) -> Surd:
    an, ad, bn, bd, d = map(int, parts)
    return Surd(Fraction(an, ad), Fraction(bn, bd), d)


def _dump_spectra(pair: dict[str, SpectrumApproximation]) -> str:
    lines = [SPECTRA_MAGIC]
    for kind in KINDS:
        sa = pair[kind]
        lines.append(f"{kind} {len(sa)}")
        for w, (p, a0, s) in zip(sa.weights, sa.provenance):
            word = lambda u: "".join(map(str, u)) or "-"
            lines.append(" ".join(_surd_fields(w) + [word(p), str(a0), word(s)]))
    return "\n".join(lines) + "\n"


def _parse_spectra(text: str, ctx, q: int) -> dict[str, SpectrumApproximation]:
    lines = text.splitlines()
    if not lines or lines[0] != SPECTRA_MAGIC:
        raise ValueError("not a spectra cache file")
    out, i = {}, 1
    while i < len(lines):
        kind, n = lines[i].split()
        weights, prov = [], []
        for line in lines[i + 1 : i + 1 + int(n)]:
            parts = line.split()
            weights.append(_surd_from_fields(parts[:5]))
            word = lambda s: () if s == "-" else tuple(int(ch) for ch in s)
            prov.append((word(parts[5]), int(parts[6]), word(parts[7])))
        out[kind] = SpectrumApproximation(kind, ctx, q, tuple(weights), tuple(prov))
        i += 1 + int(n)
    return out


def _preflight(cs, budget: int) -> None:
    shift = len(cs) ** 2 * cs.k
    if shift > budget:
        raise UsageError(
            f"G_(K={cs.k},Q={cs.q}) would have {shift} shift edges, above the budget of "
            f"{budget}; raise --max-shift-edges or lower Q"
        )


def compute_pair(cfg: RunConfig, timings: dict | None = None) -> dict[str, SpectrumApproximation]:
    ctx = make_context(cfg.k)
    t0 = time.perf_counter()
    cs = cached_cylinders(ctx, cfg.q, cfg.cache_dir)
    _preflight(cs, cfg.shift_budget)
    path = None
    if cfg.cache_dir is not None:
        path = Path(cfg.cache_dir) / f"spectra-K{cfg.k}-Q{cfg.q}.txt"
        if path.exists():
            return _parse_spectra(path.read_text(), ctx, cfg.q)
    g = build_product(cs, compress=True)
    t1 = time.perf_counter()
    pair = spectra_pair(cs, g)
    t2 = time.perf_counter()
    if timings is not None:
        timings.update(build=t1 - t0, solve=t2 - t1)
    if path is not None:
        tmp = path.with_suffix(".tmp")
        tmp.write_text(_dump_spectra(pair))
        tmp.replace(path)
    return pair


def compute_weights(cfg: RunConfig) -> list[Surd]:
    if cfg.k == 1:
        # a single biinfinite sequence ...111...
        return [Surd.sqrt(5)]
    return list(compute_pair(cfg)[cfg.kind].weights)


# -- rendering -------------------------------------------------------------------


def _emit(rows: list[dict], columns: Sequence[str], fmt: str, out) -> None:
    if fmt == "json":
        json.dump(rows, out, indent=1)
        out.write("\n")
        return
    w = csv.DictWriter(out, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def weight_rows(weights: Sequence[Surd], digits: int) -> list[dict]:
    rows = []
    for w in weights:
        an, ad, bn, bd, d = _surd_fields(w)
        rows.append(
            dict(a_num=an, a_den=ad, b_num=bn, b_den=bd, d=d, decimal=surd_to_decimal(w, digits))
        )
    return rows


def _round_down(x: Fraction, digits: int) -> Fraction:
    m = 10**digits
    return Fraction((x * m).__floor__(), m)


def _round_up(x: Fraction, digits: int) -> Fraction:
    m = 10**digits
    return Fraction(-((-x * m).__floor__()), m)


def _fmt(x: Fraction, digits: int) -> str:
    sign = "-" if x < 0 else ""
    m = 10**digits
    n = abs(x) * m
    assert n.denominator == 1
    whole, frac = divmod(n.numerator, m)
    return f"{sign}{whole}.{frac:0{digits}d}"


def interval_union(weights: Sequence[Surd], q: int, digits: int) -> list[tuple[Fraction, Fraction]]:
    """Fatten each weight by 1/Q, round outwards to ``digits`` places and merge overlaps."""
    r = Fraction(1, q)
    spans = []
    for w in weights:
        lo, _ = (w - r).bounds(digits + 2)
        _, hi = (w + r).bounds(digits + 2)
        spans.append((_round_down(lo, digits), _round_up(hi, digits)))
    spans.sort()
    merged: list[list[Fraction]] = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


# -- commands --------------------------------------------------------------------


def cmd_compute(cfg: RunConfig, out) -> int:
    weights = compute_weights(cfg)
    _emit(weight_rows(weights, cfg.digits), ["a_num", "a_den", "b_num", "b_den", "d", "decimal"], cfg.format, out)
    return 0


def cmd_plotdata(cfg: RunConfig, out) -> int:
    weights = compute_weights(cfg)
    rows = [dict(lo=_fmt(lo, cfg.digits), hi=_fmt(hi, cfg.digits)) for lo, hi in interval_union(weights, cfg.q, cfg.digits)]
    _emit(rows, ["lo", "hi"], cfg.format, out)
    return 0


def stats_report(cfg: RunConfig) -> dict:
    ctx = make_context(cfg.k)
    t0 = time.perf_counter()
    cs = cached_cylinders(ctx, cfg.q, cfg.cache_dir)
    t1 = time.perf_counter()
    _preflight(cs, cfg.shift_budget)
    g = build_product(cs, compress=True)
    t2 = time.perf_counter()
    pair = spectra_pair(cs, g)
    t3 = time.perf_counter()
    n_shift = g.n_shift
    env = cylinder_count_bounds(ctx, cfg.q)
    return {
        "k": cfg.k,
        "q": cfg.q,
        "cylinders": len(cs),
        "tree_nodes": len(cs.nodes),
        "vertices": g.n_vertices,
        "edges": g.n_edges,
        "prolongation_edges": g.n_edges - n_shift,
        "shift_edges": n_shift,
        "edge_bound": round(edge_count_bound(cs), 3),
        "envelope_lower": None if env is None else round(env[0], 3),
        "envelope_upper": None if env is None else round(env[1], 3),
        "envelope_ok": None if env is None else env[0] <= len(cs) <= env[1],
        "lagrange_weights": len(pair["lagrange"]),
        "markov_weights": len(pair["markov"]),
        "cylinder_seconds": t1 - t0,
        "graph_seconds": t2 - t1,
        "solve_seconds": t3 - t2,
    }


def cmd_stats(cfg: RunConfig, out) -> int:
    rep = stats_report(cfg)
    if cfg.format == "json":
        json.dump(rep, out, indent=1)
        out.write("\n")
    else:
        for key, val in rep.items():
            if isinstance(val, float):
                val = f"{val:.6f}"
            out.write(f"{key},{val}\n")
    return 0


def _drop_near_min(sa: SpectrumApproximation) -> SpectrumApproximation:
    # negative control: remove everything within 2/Q of the smallest weight
    cut = sa.weights[0] + 2 * sa.radius
    keep = [i for i, w in enumerate(sa.weights) if w > cut]
    return SpectrumApproximation(
        sa.kind, sa.ctx, sa.q, tuple(sa.weights[i] for i in keep), tuple(sa.provenance[i] for i in keep)
    )


def verify_report(cfg: RunConfig, corrupt: Callable | None = None) -> dict:
    sa = compute_pair(cfg)[cfg.kind]
    if corrupt is not None:
        sa = corrupt(sa)
    level = certified_level(cfg.k, cfg.maxlen)
    # periodic values lie in L, hence also in M
    net = periodic_net(cfg.k, cfg.maxlen)
    rep = verify_spectrum(sa, net)
    fine = compute_pair(RunConfig(**{**cfg.__dict__, "q": 10 * cfg.q}))[cfg.kind]
    if corrupt is not None:
        fine = corrupt(fine)
    tol = Fraction(1, cfg.q) + Fraction(1, 10 * cfg.q)
    hd = hausdorff_distance(list(sa.weights), list(fine.weights)) if sa.weights and fine.weights else None
    hd_ok = hd is not None and hd <= tol
    return {
        "k": cfg.k,
        "q": cfg.q,
        "kind": cfg.kind,
        "maxlen": cfg.maxlen,
        "certified_level": level,
        "net_size": len(net),
        "weights": len(sa),
        "violations": [surd_to_decimal(v, cfg.digits) for v in rep.violations],
        "violations_exact": [str(v) for v in rep.violations],
        "worst_gap": float(rep.worst_gap),
        "worst_value": None if rep.worst_value is None else str(rep.worst_value),
        "hausdorff_fine_q": 10 * cfg.q,
        "hausdorff": None if hd is None else surd_to_decimal(hd, cfg.digits),
        "hausdorff_tolerance": float(tol),
        "hausdorff_ok": hd_ok,
        "ok": rep.ok and hd_ok,
    }


def cmd_verify(cfg: RunConfig, out, corrupt: Callable | None = None) -> int:
    rep = verify_report(cfg, corrupt)
    if cfg.format == "json":
        json.dump(rep, out, indent=1)
        out.write("\n")
    else:
        for key, val in rep.items():
            if isinstance(val, list):
                val = ";".join(val)
            out.write(f"{key},{val}\n")
    if not rep["ok"]:
        worst = rep["violations_exact"][0] if rep["violations_exact"] else rep["hausdorff"]
        print(f"verification FAILED: no weight within 1/Q of {worst}", file=sys.stderr)
        return 1
    return 0


def constants_table(k: int) -> list[tuple[str, Surd]]:
    """Extreme points of E_K and the periodic values bracketing L_K."""
    rows: list[tuple[str, Surd]] = []
    if k >= 2:
        ctx = make_context(k)
        rows += [("alpha_minus", ctx.alpha_minus), ("alpha_plus", ctx.alpha_plus)]
    rows += [
        (f"[0;({k})]", periodic_value((k,))),
        (f"[0;(1 {k})]", periodic_value((1, k))),
        (f"[0;({k} 1)]", periodic_value((k, 1))),
        (f"L(({k}))", lagrange_periodic((k,))),
        (f"L((1 {k}))", lagrange_periodic((1, k))),
        (f"L(({k + 1}))", lagrange_periodic((k + 1,))),
    ]
    # K = 1 repeats names
    return list(dict(rows).items())


def cmd_constants(cfg: RunConfig, out) -> int:
    rows = [
        {"name": name, **dict(zip(("a_num", "a_den", "b_num", "b_den", "d"), _surd_fields(x))),
         "exact": str(x), "decimal": surd_to_decimal(x, cfg.digits)}
        for name, x in constants_table(cfg.k)
    ]
    _emit(rows, ["name", "a_num", "a_den", "b_num", "b_den", "d", "exact", "decimal"], cfg.format, out)
    return 0


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spectra", description="Certified approximations of Lagrange and Markov spectra.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--k", type=int, required=True, help="largest partial quotient K")
    p.add_argument("--q", type=int, default=100, help="resolution Q (output is 1/Q-close)")
    p.add_argument("--kind", choices=KINDS, default=LAGRANGE)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--digits", type=int, default=12, help="decimal places in rendered output")
    p.add_argument("--cache", default=os.environ.get("SPECTRA_CACHE"), help="cache directory (default $SPECTRA_CACHE)")
    p.add_argument("--maxlen", type=int, default=8, help="longest period in the verification net")
    p.add_argument("--max-shift-edges", type=int, default=DEFAULT_SHIFT_BUDGET, dest="shift_budget")
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(
        ns.command, ns.k, ns.q, ns.kind, ns.format, ns.digits, ns.cache, ns.maxlen, ns.shift_budget
    )
    try:
        cfg.validate()
        if cfg.command == "compute":
            return cmd_compute(cfg, out)
        if cfg.command == "plotdata":
            return cmd_plotdata(cfg, out)
        if cfg.command == "stats":
            return cmd_stats(cfg, out)
        if cfg.command == "verify":
            return cmd_verify(cfg, out, _drop_near_min if ns.corrupt else None)
        return cmd_constants(cfg, out)
    except (UsageError, ResolutionTooSmall) as exc:
        print(f"spectra: error: {exc}", file=sys.stderr)
        return 2


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Run the CLI in-process and capture standard output."""
    buf = io.StringIO()
    code = main(list(argv), buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
