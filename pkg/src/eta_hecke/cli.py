"""Command-line interface: class numbers, trace tables and verification suites."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from eta_hecke import __version__
from eta_hecke.arith import hurwitz_H
from eta_hecke.cache import FlatCache, resolve_cache_dir
from eta_hecke.qseries import EtaSpaceSpec, PrecisionError

log = logging.getLogger("eta_hecke")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3

ETA24_R = (1, 5, 7, 11, 13, 17, 19, 23)
ETA8_R = (1, 3, 5, 7)
PARTITION_ELLS = (13, 17, 19, 23, 29, 31)


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# argument helpers


def _int_list(text: str) -> list[int]:
    """'5,7,11' or '5..20' (inclusive) or a mix."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _sign(text: str) -> int:
    v = int(text)
    if v not in (1, -1):
        raise argparse.ArgumentTypeError("sign must be +1 or -1")
    return v


def _frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _primes(lo: int, hi: int, avoid: int) -> list[int]:
    out = []
    for p in range(lo, hi + 1):
        if p > 1 and all(p % q for q in range(2, int(p**0.5) + 1)) and avoid % p:
            out.append(p)
    return out


# --------------------------------------------------------------------------
# output


def emit(records: list[dict], fmt: str, stream) -> None:
    if fmt == "json":
        for rec in records:
            stream.write(json.dumps(rec, sort_keys=True) + "\n")
    elif fmt == "csv":
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(["suite", "params", "n", "lhs", "rhs", "pass", "skipped", "reason"])
        for rec in records:
            w.writerow([rec["suite"], json.dumps(rec["params"], sort_keys=True), rec["n"], rec["lhs"],
                        rec["rhs"], rec["pass"], rec["skipped"], rec["reason"]])
    else:
        for rec in records:
            status = "SKIP" if rec["skipped"] else ("PASS" if rec["pass"] else "FAIL")
            params = " ".join(f"{k}={v}" for k, v in rec["params"].items())
            line = f"{status:4}  {rec['suite']:<14} {params:<32} n={rec['n']:<6} lhs={rec['lhs']}  rhs={rec['rhs']}"
            if rec["reason"]:
                line += f"  ({rec['reason']})"
            stream.write(line + "\n")


def _open_output(path: str | None):
    return open(path, "w", newline="") if path else sys.stdout


# --------------------------------------------------------------------------
# classnum


def cmd_classnum(args) -> int:
    cache = FlatCache(resolve_cache_dir(args.cache_dir), "classnum")
    key = str(args.d)
    value = cache.get(key)
    if value is None:
        value = _frac(hurwitz_H(args.d))
        cache.put(key, value)
        cache.flush()
    print(value)
    return EXIT_OK


# --------------------------------------------------------------------------
# trace


def _trace_value(kind: str, args, n: int) -> Fraction:
    from eta_hecke.hecke import oracle_trace_T_nsq
    from eta_hecke.trace_half import assembled_tr_T_nsq
    from eta_hecke.trace_integral import NewformSpaceSpec, tr_new2, tr_new6

    if kind == "half":
        _need(args, "r", "s")
        return assembled_tr_T_nsq(n, args.r, args.s)
    if kind == "new6":
        _need(args, "weight", "eps2", "eps3")
        return tr_new6(NewformSpaceSpec.level6(args.weight, args.eps2, args.eps3), n)
    if kind == "new2":
        _need(args, "weight", "eps2")
        return tr_new2(NewformSpaceSpec.level2(args.weight, args.eps2), n)
    if args.r_prime is not None:
        _need(args, "s")
        spec = EtaSpaceSpec.eta8(args.r_prime, args.s)
    else:
        _need(args, "r", "s")
        spec = EtaSpaceSpec.eta24(args.r, args.s)
    return oracle_trace_T_nsq(spec, n)


def _need(args, *names) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing {' '.join(missing)}")


def cmd_trace(args) -> int:
    rows = []
    for n in args.n:
        rows.append({"suite": f"trace-{args.kind}", "params": _trace_params(args), "n": n,
                     "lhs": _frac(_trace_value(args.kind, args, n)), "rhs": None, "pass": True,
                     "skipped": False, "reason": ""})
    out = _open_output(args.output)
    try:
        if args.format == "human":
            for row in rows:
                out.write(f"{row['n']}\t{row['lhs']}\n")
        else:
            emit(rows, args.format, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _trace_params(args) -> dict:
    keys = {"half": ("r", "s"), "new6": ("weight", "eps2", "eps3"), "new2": ("weight", "eps2"),
            "oracle": ("r", "r_prime", "s")}[args.kind]
    return {k: getattr(args, k) for k in keys if getattr(args, k) is not None}


# --------------------------------------------------------------------------
# verify


def _grid_task(task: tuple) -> list[dict]:
    """Run one (suite, spec) unit; top-level so worker processes can import it."""
    from eta_hecke import verify as V

    suite, a, s, ns = task
    if suite == "thm1":
        reps = V.verify_level6_correspondence(a, s, ns)
    elif suite == "thm2":
        reps = V.verify_level2_correspondence(a, s, ns)
    else:
        reps = V.verify_assembly(a, s, ns)
    return [r.record() for r in reps]


def _cached_grid(tasks: list[tuple], jobs: int, cache: FlatCache) -> list[dict]:
    keyed = [(t, json.dumps(list(t), separators=(",", ":"))) for t in tasks]
    todo = [t for t, key in keyed if cache.get(key) is None]
    results: dict[str, list[dict]] = {}
    if todo:
        if jobs > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                computed = list(pool.map(_grid_task, todo))
        else:
            computed = [_grid_task(t) for t in todo]
        for t, recs in zip(todo, computed):
            key = json.dumps(list(t), separators=(",", ":"))
            results[key] = recs
            cache.put(key, json.dumps(recs, sort_keys=True))
        cache.flush()
    out = []
    for t, key in keyed:
        recs = results.get(key)
        if recs is None:
            recs = json.loads(cache.get(key))
        out.extend(recs)
    return out


def _n_values(args, avoid: int) -> list[int]:
    if args.n is not None:
        return args.n
    return _primes(args.pmin, args.pmax, avoid)


def _verify_records(args) -> list[dict]:
    from eta_hecke import verify as V

    suite = args.suite
    cache = FlatCache(resolve_cache_dir(args.cache_dir), "verify")
    if suite in ("thm1", "assembly"):
        rs = ETA24_R if args.r in (None, "all") else _int_list(args.r)
        ss = args.s if args.s is not None else [0, 4, 6, 8, 10, 12]
        ns = _n_values(args, 6)
        tasks = [(suite, r, s, tuple(ns)) for r in rs for s in ss]
        for _, r, s, _ in tasks:
            EtaSpaceSpec.eta24(r, s)
        return _cached_grid(tasks, args.jobs, cache)
    if suite == "thm2":
        rs = ETA8_R if args.r in (None, "all") else _int_list(args.r)
        ss = args.s if args.s is not None else [0, 4, 6]
        ns = _n_values(args, 2)
        tasks = [(suite, r, s, tuple(ns)) for r in rs for s in ss]
        for _, r, s, _ in tasks:
            EtaSpaceSpec.eta8(r, s)
        return _cached_grid(tasks, args.jobs, cache)
    if suite == "partition":
        ells = PARTITION_ELLS if args.ell in (None, "all") else _int_list(args.ell)
        return [V.verify_partition_congruence(ell, args.terms, args.up_to_scale).record() for ell in ells]
    if suite == "eta":
        return [V.verify_eta_multiplier(args.samples, seed=args.seed).record()]
    if suite == "charsums":
        return [r.record() for r in V.suite_charsums()]
    return [r.record() for r in V.suite_internal()]


def cmd_verify(args) -> int:
    records = _verify_records(args)
    out = _open_output(args.output)
    try:
        emit(records, args.format, out)
    finally:
        if out is not sys.stdout:
            out.close()
    failed = sum(1 for r in records if not r["pass"] and not r["skipped"])
    if args.format == "human" or args.output:
        skipped = sum(1 for r in records if r["skipped"])
        print(f"{len(records)} checks, {failed} failed, {skipped} skipped", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eta-hecke", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--cache-dir", default=None, help="persist results here (ETA_HECKE_CACHE overrides)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classnum", parents=[common], help="weighted class number H(D)")
    c.add_argument("-d", type=int, required=True)
    c.set_defaults(func=cmd_classnum)

    t = sub.add_parser("trace", parents=[common], help="tabulate exact traces")
    t.add_argument("--kind", choices=["half", "new6", "new2", "oracle"], required=True)
    t.add_argument("--r", type=int)
    t.add_argument("--r-prime", type=int, help="eta8 family for --kind oracle")
    t.add_argument("--s", type=int)
    t.add_argument("--weight", type=int)
    t.add_argument("--eps2", type=_sign)
    t.add_argument("--eps3", type=_sign)
    t.add_argument("--n", type=_int_list, required=True)
    t.add_argument("--format", choices=["human", "json", "csv"], default="human")
    t.add_argument("--output")
    t.set_defaults(func=cmd_trace)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=["thm1", "thm2", "assembly", "charsums", "partition", "eta", "internal"])
    v.add_argument("--r", default=None, help="comma list or 'all' (r' for thm2)")
    v.add_argument("--s", type=_int_list)
    v.add_argument("--pmin", type=int, default=3)
    v.add_argument("--pmax", type=int, default=97)
    v.add_argument("--n", type=_int_list, help="explicit n values instead of primes")
    v.add_argument("--ell", default=None, help="comma list or 'all'")
    v.add_argument("--terms", type=int, default=500)
    v.add_argument("--up-to-scale", action="store_true", help="accept the congruence up to a unit")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=["human", "json", "csv"], default="human")
    v.add_argument("--output")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PrecisionError as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except MemoryError:
        print("out of memory", file=sys.stderr)
        return EXIT_PRECISION
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
