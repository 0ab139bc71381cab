"""``simplexdet``: command-line front end.

Exit status is 0 on success, 2 for bad parameters and 3 when a budget ran
out (whatever was computed is still written).
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import asymptotics as asy
from . import tables
from .cache import VerdictCache
from .classifier import classify, decide_proper, ugly_by_min_weight
from .construction import build_dkst, build_generalized
from .errors import BudgetExceeded, ParameterError
from .uepoly import dual_pue_brute, evaluate, evaluate_dual, log2_fraction, pue_of
from .weights import brute_force_distribution, weight_distribution

EXIT_OK, EXIT_PARAM, EXIT_BUDGET = 0, 2, 3


def _json_safe(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x if abs(x) < 2**53 else str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    return x


def _dump(obj, out) -> None:
    out.write(json.dumps(_json_safe(obj), sort_keys=True) + "\n")


def _write(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, newline="\n")


# --- commands ---------------------------------------------------------------

def cmd_construct(a) -> int:
    g = (build_dkst if a.dkst or a.variant == "dkst" else build_generalized)(a.k, a.n)
    text = {"txt": g.to_txt, "json": g.to_json, "pbm": g.to_pbm}[a.format]()
    _write(text if text.endswith("\n") else text + "\n", a.out)
    return EXIT_OK


def cmd_weights(a) -> int:
    if a.brute:
        dist = brute_force_distribution(build_generalized(a.k, a.n))
    else:
        dist = weight_distribution(a.k, a.n)
    if a.format == "csv":
        rows = ["w,A_w"] + [f"{w},{c}" for w, c in dist.entries.items()]
        sys.stdout.write("\n".join(rows) + "\n")
    else:
        _dump(dist.as_json(), sys.stdout)
    return EXIT_OK


def cmd_pue(a) -> int:
    p = Fraction(a.p)
    if a.dual:
        val = evaluate_dual(a.k, a.n, p)
        if a.check:
            if val != dual_pue_brute(a.k, a.n, p):
                raise AssertionError("dual identity disagrees with enumeration")
    else:
        val = evaluate(pue_of(a.k, a.n), p)
    log2 = log2_fraction(val) if val > 0 else None
    _dump({"k": a.k, "n": a.n, "p": p, "dual": a.dual, "value": val, "log2": log2}, sys.stdout)
    return EXIT_OK


def _verdict(args):
    k, n, dual, mode = args
    if mode == "per":
        ugly = ugly_by_min_weight(k, n)
        return {"k": k, "n": n, "dual": dual, "ugly_by_min_weight": ugly}
    if mode == "proper":
        proper, route = decide_proper(k, n)
        return {"k": k, "n": n, "dual": dual, "proper": proper, "decided_by": route}
    return classify(k, n, dual=dual).as_json()


class _Alarm:
    """Turn ``--budget SECONDS`` into a BudgetExceeded raised from SIGALRM."""

    def __init__(self, seconds):
        self.seconds = seconds

    def _fire(self, *_):
        raise BudgetExceeded(f"wall-clock budget of {self.seconds}s used up", limit=self.seconds)

    def __enter__(self):
        if self.seconds:
            signal.signal(signal.SIGALRM, self._fire)
            signal.alarm(self.seconds)

    def __exit__(self, *exc):
        if self.seconds:
            signal.alarm(0)
        return False


def cmd_classify(a) -> int:
    with _Alarm(a.budget):
        if a.no_cache:
            v = classify(a.k, a.n, dual=a.dual)
        else:
            v = VerdictCache().classify(a.k, a.n, a.dual)
    _dump(v.as_json(), sys.stdout)
    return EXIT_OK if v.proper is not None else EXIT_BUDGET


SCAN_COLUMNS = {
    "per": ["k", "n", "ugly_by_min_weight"],
    "proper": ["k", "n", "proper", "decided_by"],
    "full": ["k", "n", "dual", "proper", "good", "satisfactory", "decided_by"],
}


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    return str(x)


def cmd_scan(a) -> int:
    if a.n_to < a.n_from:
        raise ParameterError("--to must not be below --from")
    jobs = [(a.k, n, a.dual, a.mode) for n in range(a.n_from, a.n_to + 1)]
    cache = VerdictCache() if a.mode == "full" and not a.no_cache else None
    rows = []
    if cache is not None:
        for k, n, dual, _ in jobs:
            rows.append(cache.classify(k, n, dual).as_json())
        cache.reverify(0.01)
    elif a.jobs > 1:
        # map keeps submission order, so output is ascending in n whatever the pool does
        with ProcessPoolExecutor(a.jobs) as pool:
            rows = list(pool.map(_verdict, jobs, chunksize=16))
    else:
        rows = [_verdict(j) for j in jobs]
    cols = SCAN_COLUMNS[a.mode]
    lines = [",".join(cols)] + [",".join(_cell(r.get(c)) for c in cols) for r in rows]
    _write("\n".join(lines) + "\n", a.out)
    undecided = any(r.get("proper", True) is None for r in rows)
    return EXIT_BUDGET if undecided else EXIT_OK


def cmd_kofm(a) -> int:
    lines = ["table_id,m,K,kappa_lower,kappa_upper"]
    for m in range(1, a.max_m + 1):
        K = asy.ugliness_onset(m)
        root = asy.onset_root(m, K, bits=a.bits)
        lines.append(f"2,{m},{K},{float(root.lower):.12f},{float(root.upper):.12f}")
    _write("\n".join(lines) + "\n", a.out)
    return EXIT_OK


def cmd_perscan(a) -> int:
    lines = ["table_id,k,m,ranges"]
    for m, runs in asy.ugly_ranges(a.k).items():
        lines.append(f"3,{a.k},{m},{tables.fmt_ranges(runs)}")
    _write("\n".join(lines) + "\n", a.out)
    return EXIT_OK


def cmd_theta(a) -> int:
    rec = asy.properness_threshold(a.k, full=a.full)
    _dump({"table_id": 6, **rec.as_json(), "checks": rec.checks()}, sys.stdout)
    return EXIT_OK


def cmd_phi(a) -> int:
    rep = asy.proper_length_count(a.k)
    _dump({"table_id": 8, **rep.as_json()}, sys.stdout)
    return EXIT_OK


def _caps(pairs):
    caps = {}
    for item in pairs or []:
        key, _, val = item.partition("=")
        if not val:
            raise ParameterError(f"cap {item!r} must look like name=value")
        caps[key] = val if key == "method" else int(val)
    return caps


def cmd_table(a) -> int:
    art = tables.run_table(a.id, **_caps(a.cap))
    if a.out:
        out = Path(a.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"table{a.id}.csv").write_text(art.to_csv(), newline="\n")
        (out / f"table{a.id}.json").write_text(art.to_json(), newline="\n")
    else:
        sys.stdout.write(art.to_csv())
    for d in art.diffs:
        print(f"diff: {d}", file=sys.stderr)
    return EXIT_BUDGET if art.truncated else EXIT_OK


def cmd_fig1(a) -> int:
    fig = tables.emit_fig1(a.samples, a.precision, k=a.k, n=a.n)
    _write(fig.csv, a.out)
    if fig.crossing:
        lo, hi = fig.crossing
        print(f"crossing of the level in [{float(lo):.6f}, {float(hi):.6f}]", file=sys.stderr)
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="simplexdet", description="Punctured simplex codes on the binary symmetric channel.")
    sub = ap.add_subparsers(dest="command", required=True)

    def kn(p):
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("construct", help="generator matrix of S_{n,k}")
    kn(p)
    p.add_argument("--variant", choices=["generalized", "dkst"], default="generalized")
    p.add_argument("--dkst", action="store_true", help="same as --variant dkst")
    p.add_argument("--format", choices=["txt", "json", "pbm"], default="txt")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("weights", help="weight distribution (closed form or enumeration)")
    kn(p)
    p.add_argument("--brute", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("pue", help="exact undetected-error probability at rational p")
    kn(p)
    p.add_argument("--p", required=True)
    p.add_argument("--dual", action="store_true")
    p.add_argument("--check", action="store_true", help="cross-check the dual value by enumeration")
    p.set_defaults(func=cmd_pue)

    p = sub.add_parser("classify", help="proper / good / satisfactory verdict as JSON")
    kn(p)
    p.add_argument("--dual", action="store_true")
    p.add_argument("--budget", type=int, default=0, help="wall-clock seconds (0: none)")
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("scan", help="classify a range of lengths, CSV in ascending n")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--from", dest="n_from", type=int, required=True)
    p.add_argument("--to", dest="n_to", type=int, required=True)
    p.add_argument("--mode", choices=["per", "proper", "full"], default="full")
    p.add_argument("--dual", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("kofm", help="ugliness onset K(m) with a bracket of its real root")
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--bits", type=int, default=40)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kofm)

    p = sub.add_parser("perscan", help="lengths where the minimum-weight criterion fires")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_perscan)

    p = sub.add_parser("theta", help="properness threshold family for one k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--full", action="store_true", help="also run the full scan for the exact threshold")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("phi", help="count of proper lengths and the non-proper ranges")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("table", help="reproduce one of the eight tables")
    p.add_argument("--id", type=int, required=True)
    p.add_argument("--cap", action="append", help="name=value, e.g. k_max=12")
    p.add_argument("--out", help="directory for tableN.csv / tableN.json")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("fig1", help="plot data for P_ue(S_{n,k}, p), by default n=320, k=9")
    p.add_argument("--k", type=int, default=9)
    p.add_argument("--n", type=int, default=320)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--precision", type=int, default=6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fig1)
    return ap


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        return a.func(a)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
