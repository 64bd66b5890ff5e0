"""Command-line front end.

Exit codes: 0 success, 2 invalid arguments, 3 numerical failure,
4 attack finished without finding a key.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import attack, grover, markov, qwalk
from .errors import InvalidArgument, NumericalFailure

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_NOT_FOUND = 0, 2, 3, 4

_EXACT_AUTO_STEPS = 256
_EPILOG = "exit codes: 0 ok, 2 invalid arguments, 3 numerical failure, 4 no key found"


def _emit(text, output):
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows, header):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _parse_marked(args):
    if args.marked is not None:
        return [int(x) for x in args.marked.split(",") if x.strip()]
    if args.m is not None:
        return list(range(args.m))
    raise InvalidArgument("give --marked or --m")


def cmd_markov(args):
    if args.analysis == "cover":
        trials = args.trials or 10_000
        mean, se = markov.estimate_cover_time(args.n, args.start, trials, args.seed)
        result = {"analysis": "cover", "n": args.n, "trials": trials, "mean": mean, "stderr": se}
        rows, header = [["mean", repr(mean)], ["stderr", repr(se)]], ["quantity", "value"]
    else:
        w = markov.build_uniform_walk(args.n, _parse_marked(args))
        result = {"analysis": args.analysis, "n": w.n, "marked": list(w.marked)}
        transient = [int(i) for i in w.transient]
        if args.analysis == "time":
            t = markov.expected_absorption_time(w)
            result.update(transient=transient, values=t.tolist())
            rows, header = [[i, repr(float(x))] for i, x in zip(transient, t)], ["state", "expected_time"]
        elif args.analysis == "absorb":
            vals = {j: markov.absorption_probabilities(w, j) for j in w.marked}
            result.update(transient=transient, values={str(j): v.tolist() for j, v in vals.items()})
            rows = [[i, j, repr(float(x))] for j, v in vals.items() for i, x in zip(transient, v)]
            header = ["state", "target", "probability"]
        else:
            if w.m != 1:
                raise markov.MultiplicityError(f"{w.m} absorbing states give no unique stationary distribution")
            pi = markov.stationary_distribution(w.P) if w.is_dense else np.eye(1, w.n).ravel()
            order = [int(i) for i in w.ordering]
            result.update(ordering=order, values=pi.tolist())
            rows, header = [[k, s, repr(float(p))] for k, (s, p) in enumerate(zip(order, pi))], ["index", "state", "probability"]
        if args.trials > 0 and args.analysis != "stationary":
            start = transient[0]
            times = markov.sample_absorption_times(w, start, args.trials, args.seed)
            result["monte_carlo"] = {
                "start": start,
                "trials": args.trials,
                "mean": float(times.mean()),
                "stderr": float(times.std(ddof=1) / np.sqrt(len(times))) if len(times) > 1 else 0.0,
            }
    if args.format == "json":
        _emit(json.dumps(result) + "\n", args.output)
    else:
        _emit(_csv(rows, header), args.output)
    return EXIT_OK


def cmd_qwalk(args):
    if args.steps < 0:
        raise InvalidArgument("--steps must be non-negative")
    exact = args.mode == "exact" or (args.mode == "auto" and args.steps <= _EXACT_AUTO_STEPS)
    s = qwalk.initial_state(args.initial, max(args.steps, 1), exact=exact)
    d = qwalk.distribution(qwalk.evolve(s, args.steps))
    cf = None
    if args.closed_form:
        if args.initial not in ("coin0", "coin1"):
            raise InvalidArgument("--closed-form covers the coin0 and coin1 starts only")
        sign = 1 if args.initial == "coin0" else -1
        cf = [qwalk.closed_form_distribution(args.steps, sign * int(i)) for i in d.positions]
        diff = max(abs(float(p) - c) for p, c in zip(d.probabilities, cf))
    if args.format == "json":
        text = d.to_json(cf)
        if cf is not None:
            text = json.dumps({"distribution": json.loads(text), "max_abs_difference": diff})
        _emit(text + "\n", args.output)
    else:
        _emit(d.to_csv(cf), args.output)
        if cf is not None:
            print(f"max_abs_difference {diff!r}", file=sys.stderr)
    return EXIT_OK


def cmd_grover(args):
    N, m = args.N, args.marked_count
    if not 1 <= m < N:
        raise InvalidArgument("need 1 <= --marked-count < --N")
    k = grover.optimal_iterations(N, m) if args.optimal or args.iterations is None else args.iterations
    if k < 0:
        raise InvalidArgument("--iterations must be non-negative")
    kmax = k if args.iterations is not None or not args.curve else max(k, 2 * grover.optimal_iterations(N, m))
    rows, analytic = grover.success_curve(N, m, kmax)
    p = rows[k][1]
    if args.curve:
        if args.format == "json":
            _emit(json.dumps([{"k": kk, "success_probability": pp} for kk, pp in rows]) + "\n", args.output)
        else:
            _emit(grover.curve_to_csv(rows), args.output)
        return EXIT_OK
    result = {
        "N": N,
        "marked_count": m,
        "iterations": k,
        "queries_used": k,
        "success_probability": p,
        "closed_form": grover.closed_form_success(N, m, k),
        "analytic": analytic,
    }
    if args.format == "json":
        _emit(json.dumps(result) + "\n", args.output)
    else:
        _emit(grover.curve_to_csv([(k, p)]), args.output)
    return EXIT_OK


def _attack_configs(args):
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        if isinstance(data, dict) and "experiments" in data:
            if set(data) != {"experiments"}:
                raise InvalidArgument("batch config must only contain 'experiments'")
            return data["experiments"], True
        if isinstance(data, list):
            return data, True
        return [data], False
    cfg = {
        "cipher": args.cipher,
        "scenario": args.scenario,
        "subset": args.subset,
        "policy": args.policy,
        "confidence": args.confidence,
        "seed": args.seed,
        "trials": args.trials,
    }
    for name in ("pairs", "ciphertexts", "plaintexts"):
        value = getattr(args, name)
        if value:
            cfg[name] = [v for v in value.split(",") if v.strip()]
    if args.secret is not None:
        cfg["secret"] = args.secret
    if args.step_budget is not None:
        cfg["step_budget"] = args.step_budget
    return [cfg], False


def cmd_attack(args):
    configs, batch = _attack_configs(args)
    outputs, rows, missed = [], [], False
    for e, cfg in enumerate(configs):
        cipher, report = attack.run_experiment(cfg)
        outputs.append(report.to_dict(cipher.key_bits, timing=args.timing))
        missed |= report.found_key is None
        for t, (cost, ok) in enumerate(zip(report.steps_or_queries_per_trial, report.trial_success)):
            rows.append([e, t, cost, int(ok)])
    if args.format == "json":
        payload = outputs if batch else outputs[0]
        _emit(json.dumps(payload, sort_keys=True) + "\n", args.output)
    else:
        _emit(_csv(rows, ["experiment", "trial", "steps_or_queries", "success"]), args.output)
    return EXIT_NOT_FOUND if missed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="walkattack", description=__doc__, epilog=_EPILOG)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", help="write here instead of stdout")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("markov", help="absorbing uniform-walk analyses", epilog=_EPILOG)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--marked", help="comma list of 0-based marked states")
    p.add_argument("--m", type=int, help="mark states 0..m-1")
    p.add_argument("--analysis", choices=("absorb", "time", "stationary", "cover"), default="time")
    p.add_argument("--trials", type=int, default=0, help="Monte Carlo trajectories (0 = none)")
    p.add_argument("--start", type=int, default=0, help="start state for --analysis cover")
    common(p)
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("qwalk", help="Hadamard walk on the line", epilog=_EPILOG)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--initial", choices=qwalk.INITIAL_STATES, default="coin0")
    p.add_argument("--closed-form", action="store_true", help="add the closed-form column")
    p.add_argument(
        "--mode",
        choices=("auto", "exact", "float"),
        default="auto",
        help=f"amplitude arithmetic; auto is exact up to {_EXACT_AUTO_STEPS} steps",
    )
    common(p)
    p.set_defaults(func=cmd_qwalk)

    p = sub.add_parser("grover", help="Grover search success probabilities", epilog=_EPILOG)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--marked-count", type=int, default=1)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--iterations", type=int)
    g.add_argument("--optimal", action="store_true")
    p.add_argument("--curve", action="store_true", help="emit k -> success probability")
    common(p)
    p.set_defaults(func=cmd_grover)

    p = sub.add_parser("attack", help="key-search attack on a toy cipher", epilog=_EPILOG)
    p.add_argument("--config", help="JSON experiment file (object, list, or {'experiments': [...]})")
    p.add_argument("--cipher", default="xor16")
    p.add_argument("--scenario", default="known-plaintext", choices=attack.SCENARIO_KINDS)
    p.add_argument("--pairs", help="comma list of PLAIN:CIPHER hex pairs")
    p.add_argument("--ciphertexts", help="comma list of hex ciphertexts")
    p.add_argument("--plaintexts", help="comma list of hex plaintexts to query with --secret")
    p.add_argument("--secret", help="hex secret key (ground truth for reporting / query generation)")
    p.add_argument("--subset", default="all", help="'all', 'LO-HI' or comma list of hex keys")
    p.add_argument("--policy", default="classical-uniform", choices=attack.POLICIES)
    p.add_argument("--confidence", type=float, default=0.75)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--step-budget", type=int)
    p.add_argument("--timing", action="store_true", help="include wall_time in the report")
    common(p)
    p.set_defaults(func=cmd_attack)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidArgument as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
