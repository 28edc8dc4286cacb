"""Command-line front end: one election or one experiment per invocation.

Exit codes: 0 success, 1 configuration error, 2 protocol abort.  The
environment variable QVOTE_SEED overrides --seed.  CSV outputs start with a
``# config: {...}`` comment echoing the fully resolved parameters (seed
included), followed by a header row.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .election import (
    ElectionAdversary,
    ElectionConfig,
    rows_to_csv,
    run_election,
    run_experiment_cheat,
    run_experiment_csqbc,
    run_experiment_fidelity,
    run_experiment_qba,
)

_CSV_COLUMNS = {
    "csqbc": ["n", "m", "trials", "success_rate", "stderr"],
    "qba": ["T", "trials", "p_detectable", "p_successful",
            "stderr_detectable", "stderr_successful"],
    "cheat_voter": ["mode", "n", "m", "trials", "success_rate", "stderr", "analytic_rate"],
    "cheat_miner": ["mode", "n", "m", "trials", "success_rate", "detection_rate",
                    "stderr", "expected_rate", "analytic_rate"],
    "fidelity": ["p", "fidelity"],
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract is exit 1
        raise _UsageError(message)


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part != ""]


def _parse_int_range(text: str) -> list[int]:
    """Either ``start:end`` (inclusive) or a comma-separated list."""
    if ":" in text:
        start, end = text.split(":")
        return list(range(int(start), int(end) + 1))
    return _parse_int_list(text)


def _parse_float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part != ""]


def _parse_gamma(text: str):
    return None if text == "none" else int(text)


def _parse_votes(text: str):
    if text == "random":
        return "random"
    if any(c not in "01" for c in text):
        raise _UsageError(f"--votes must be a bit string or 'random'; got {text!r}")
    return tuple(int(c) for c in text)


def build_parser() -> _Parser:
    parser = _Parser(prog="qvote", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one election")
    run_p.add_argument("--voters", type=int, required=True)
    run_p.add_argument("--votes", type=_parse_votes, default="random")
    run_p.add_argument("--n", type=int, default=16, help="CSQBC sequence length")
    run_p.add_argument("--m", type=int, default=3, help="CSQBC decoy sequence count")
    run_p.add_argument("--copies", type=int, default=30, help="Aharonov copies per round")
    run_p.add_argument("--lambda", dest="lam", type=float, default=0.9)
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--adversary", type=str, default="none",
                       help="none | qba:G | probe:M | reveal:V | lie:I:J:DELTA")
    run_p.add_argument("--qba-source", choices=("ideal", "statevector"), default="ideal")
    run_p.add_argument("--max-retries", type=int, default=3)
    run_p.add_argument("--out", type=str, default=None, help="result JSON path")
    run_p.add_argument("--transcript", type=str, default=None, help="transcript JSONL path")

    exp_p = sub.add_parser("experiment", help="run a Monte-Carlo experiment")
    exp_sub = exp_p.add_subparsers(dest="experiment", required=True)

    csqbc_p = exp_sub.add_parser("csqbc", help="honest commitment success vs n")
    csqbc_p.add_argument("--n", type=_parse_int_list, default=[4, 8, 12, 16])
    csqbc_p.add_argument("--m", type=int, default=3)
    csqbc_p.add_argument("--trials", type=int, default=1000)

    qba_p = exp_sub.add_parser("qba", help="broadcast success/detection curves vs T")
    qba_p.add_argument("--copies", type=_parse_int_range, default=list(range(1, 51)))
    qba_p.add_argument("--lambda", dest="lam", type=float, default=0.9)
    qba_p.add_argument("--gamma", type=_parse_gamma, default=0)
    qba_p.add_argument("--trials", type=int, default=1000)

    cheat_p = exp_sub.add_parser("cheat", help="voter/miner cheat success rates")
    cheat_p.add_argument("--mode", choices=("voter", "miner"), required=True)
    cheat_p.add_argument("--n", type=_parse_int_list, default=None,
                         help="voter mode: n sweep; miner mode: single n")
    cheat_p.add_argument("--m", type=_parse_int_list, default=None,
                         help="miner mode: m sweep; voter mode: single m")
    cheat_p.add_argument("--trials", type=int, default=1000)

    fid_p = exp_sub.add_parser("fidelity", help="Aharonov fidelity vs depolarizing noise")
    fid_p.add_argument("--p", type=_parse_float_list,
                       default=[round(0.01 * i, 2) for i in range(21)])

    for sub_parser in (csqbc_p, qba_p, cheat_p, fid_p):
        sub_parser.add_argument("--seed", type=int, default=0)
        sub_parser.add_argument("--jobs", type=int, default=1)
        sub_parser.add_argument("--csv", type=str, default=None, help="output CSV path")

    return parser


def _resolved_seed(args) -> int:
    env = os.environ.get("QVOTE_SEED")
    return int(env) if env is not None else args.seed


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _cmd_run(args) -> int:
    seed = _resolved_seed(args)
    config = ElectionConfig(
        voters=args.voters,
        votes=args.votes,
        n=args.n,
        m=args.m,
        copies=args.copies,
        lam=args.lam,
        seed=seed,
        adversary=ElectionAdversary.parse(args.adversary),
        qba_source=args.qba_source,
        max_retries=args.max_retries,
    )
    result = run_election(config)
    _emit(result.to_json(), args.out)
    if args.transcript is not None:
        _emit(result.transcript_jsonl, args.transcript)
    return 0 if result.outcome == "completed" else 2


def _cmd_experiment(args) -> int:
    seed = _resolved_seed(args)
    rng = np.random.default_rng(seed)
    if args.experiment == "csqbc":
        rows = run_experiment_csqbc(args.n, args.m, args.trials, rng, jobs=args.jobs)
        note = {"experiment": "csqbc", "n": args.n, "m": args.m,
                "trials": args.trials, "seed": seed}
        columns = _CSV_COLUMNS["csqbc"]
    elif args.experiment == "qba":
        rows = run_experiment_qba(args.copies, args.lam, args.gamma, args.trials,
                                  rng, jobs=args.jobs)
        note = {"experiment": "qba", "copies": args.copies, "lambda": args.lam,
                "gamma": args.gamma, "trials": args.trials, "seed": seed}
        columns = _CSV_COLUMNS["qba"]
    elif args.experiment == "cheat":
        kwargs = {"jobs": args.jobs}
        if args.mode == "voter":
            if args.n is not None:
                kwargs["n_values"] = args.n
            if args.m is not None:
                kwargs["m"] = args.m[0]
        else:
            if args.m is not None:
                kwargs["m_values"] = args.m
            if args.n is not None:
                kwargs["n"] = args.n[0]
        rows = run_experiment_cheat(args.mode, args.trials, rng, **kwargs)
        note = {"experiment": "cheat", "mode": args.mode, "n": args.n, "m": args.m,
                "trials": args.trials, "seed": seed}
        columns = _CSV_COLUMNS["cheat_voter" if args.mode == "voter" else "cheat_miner"]
    else:
        rows = run_experiment_fidelity(args.p, rng)
        note = {"experiment": "fidelity", "p": args.p, "seed": seed}
        columns = _CSV_COLUMNS["fidelity"]
    _emit(rows_to_csv(rows, columns, config_note=note), args.csv)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_experiment(args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        parser.print_usage(sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except SystemExit as exc:  # argparse -h/--help
        return 0 if exc.code in (0, None) else 1


if __name__ == "__main__":
    sys.exit(main())
