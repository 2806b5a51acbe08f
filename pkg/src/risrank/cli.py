"""Command line entry point.

    risrank run    [--config FILE] [--seed N] [--out DIR] [--workers N] [--realizations N]
    risrank rank   CSI_FILE [--rx N] [--tx N] [--out FILE]
    risrank oracle [--trials N] [--elements N] [--seed N] [--out FILE]
"""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import bench
from .csi import CsiParseError, ingest_csi
from .focuser import Mode, exhaustive_pair_optimum, greedy_flip_pair
from .linalg import SvdConvergenceError
from .metrics import rank_report

EXIT_OK = 0
EXIT_CONFIG = 3
EXIT_PARSE = 4
EXIT_NUMERICAL = 5
EXIT_IO = 6

log = logging.getLogger("risrank")


def _cmd_run(args):
    if args.config:
        text = Path(args.config).read_text(encoding="utf-8")
        configs, out_dir = bench.load_config(text, seed=args.seed)
    else:
        configs, out_dir = bench.default_experiments(seed=args.seed or 0), None
    if args.realizations:
        configs = [
            replace(c, scenario=replace(c.scenario, realizations=args.realizations)) for c in configs
        ]
    out = Path(args.out or out_dir or "results")
    summaries = bench.run_batch(configs, workers=args.workers)
    print(bench.emit_table(summaries, out))
    bench.emit_realizations(summaries, out)
    return EXIT_OK


def _cmd_rank(args):
    records = ingest_csi(args.csi, n_rx=args.rx, n_tx=args.tx)
    if not records:
        print("no records")
        return EXIT_OK
    lines = ["index,subcarrier,timestamp,Re,condition_number"]
    values = []
    for i, rec in enumerate(records):
        rep = rank_report(rec.matrix)
        values.append(rep.effective_rank)
        lines.append(f"{i},{rec.subcarrier},{rec.timestamp},{rep.effective_rank!r},{rep.condition_number!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"records={len(records)} mean_Re={float(np.mean(values)):.6f}")
    return EXIT_OK


def _cmd_oracle(args):
    rng = np.random.default_rng(args.seed)
    n = args.elements
    lines = ["mode,trials,elements,equal_fraction,mean_gain_ratio,violations"]
    violations = 0
    for mode in Mode:
        equal, ratios, bad = 0, [], 0
        for _ in range(args.trials):
            h1 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            h2 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            _, trace = greedy_flip_pair(h1, h2, mode)
            _, best = exhaustive_pair_optimum(h1, h2, mode)
            g = trace[-1]
            tol = 1e-9 * max(1.0, best)
            if mode is Mode.CONSTRUCTIVE:
                bad += g > best + tol
            else:
                bad += g < best - tol
            equal += abs(g - best) <= tol
            if best > 0:
                ratios.append(g / best)
        violations += bad
        lines.append(
            f"{mode.value},{args.trials},{n},{equal / args.trials:.4f},"
            f"{float(np.mean(ratios)) if ratios else float('nan'):.6f},{bad}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_NUMERICAL if violations else EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="risrank", description=__doc__.splitlines()[0] or None)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the scenario x method experiment grid")
    run.add_argument("--config", help="INI experiment file (default: full grid)")
    run.add_argument("--seed", type=int, help="master seed, overrides the config file")
    run.add_argument("--out", help="output directory (default: results)")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--realizations", type=int, help="override the realization count")
    run.set_defaults(func=_cmd_run)

    rank = sub.add_parser("rank", help="effective rank of every record in a CSI file")
    rank.add_argument("csi")
    rank.add_argument("--rx", type=int, default=3)
    rank.add_argument("--tx", type=int, default=3)
    rank.add_argument("--out", help="write the per-record CSV here")
    rank.set_defaults(func=_cmd_rank)

    orc = sub.add_parser("oracle", help="compare the greedy sweep against brute force")
    orc.add_argument("--trials", type=int, default=500)
    orc.add_argument("--elements", type=int, default=10)
    orc.add_argument("--seed", type=int, default=0)
    orc.add_argument("--out")
    orc.set_defaults(func=_cmd_oracle)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except bench.ConfigError as exc:
        for msg in exc.errors:
            print(f"config error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except CsiParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SvdConvergenceError as exc:
        print(f"numerical failure: {exc} (residual {exc.residual:.3e})", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
