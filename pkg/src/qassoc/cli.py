"""Command-line front end.

    qassoc simulate --patterns mem.txt --input 0101 --b 2
    qassoc retrieve --patterns mem.txt --input 0101 --b 2 --T 5 --trials 100000 --seed 1
    qassoc sweep --n 8000000 --d-over-n 0.01 --b-min 1e-3 --b-max 1e5 --out sweep.csv
    qassoc sweep --n 100000 --d 1000 --mode integral --format json --out sweep.json
    qassoc tune --n 8000000 --epsilon 0.01 --nu 0.99

Every subcommand also takes ``--config FILE`` with ``key = value`` lines;
flags given on the command line win over the file.
Exit codes: 0 ok, 2 invalid input, 3 resource cap, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

from . import closedform, gatesim, retrieval, thermo, tuner
from .patterns import BinaryPattern, PatternParseError, distance_spectrum, distances, load_patterns


EXIT_OK, EXIT_INVALID, EXIT_CAP, EXIT_IO = 0, 2, 3, 4


class _Invalid(Exception):
    pass


def _bitstring(text: str) -> BinaryPattern:
    try:
        return BinaryPattern.from_string(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read_config(path: str) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise _Invalid(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


@contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _load_memory(path: str):
    with open(path, encoding="utf-8") as fh:
        return load_patterns(fh)


def cmd_simulate(args) -> int:
    mem = _load_memory(args.patterns)
    state = gatesim.run_all_rounds(mem, args.input, args.b, cap=args.cap)
    p_gate = gatesim.probability_all_zeros(state)
    spectrum_p = closedform.recognition_probability(distance_spectrum(mem, args.input), args.b)
    dist = distances(mem, args.input)
    rows = []
    if spectrum_p > 0:
        gate_dist = gatesim.memory_distribution(gatesim.collapse(state, 0))
        closed = closedform.retrieval_distribution(dist, mem.n, args.b).per_pattern
        by_label: dict[str, float] = {}
        dist_of: dict[str, int] = {}
        for pattern, pk, dk in zip(mem, closed, dist):
            by_label[str(pattern)] = by_label.get(str(pattern), 0.0) + float(pk)
            dist_of[str(pattern)] = dk
        for pattern, pg in gate_dist.items():
            key = str(pattern)
            rows.append({"pattern": key, "distance": dist_of[key], "gatesim": pg,
                         "closedform": by_label[key], "delta": abs(pg - by_label[key])})
    report = {
        "n": mem.n, "p": mem.p, "b": args.b, "input": str(args.input),
        "p_rec_gatesim": p_gate,
        "p_rec_closedform": spectrum_p,
        "p_rec_delta": abs(p_gate - spectrum_p),
        "distribution": rows,
        "max_distribution_delta": max((r["delta"] for r in rows), default=0.0),
    }
    print(_dump(report))
    return EXIT_OK


def cmd_retrieve(args) -> int:
    mem = _load_memory(args.patterns)
    stats = retrieval.run_trials(mem, args.input, args.b, args.T, args.trials, args.seed)
    p_rec = closedform.recognition_probability(distance_spectrum(mem, args.input), args.b)
    out = stats.to_dict()
    out.update(seed=args.seed, b=args.b, T=args.T, p_rec=p_rec,
               expected_recognition=float(retrieval.recognition_within(p_rec, args.T)))
    print(_dump(out))
    return EXIT_OK


def cmd_sweep(args) -> int:
    if (args.d is None) == (args.d_over_n is None):
        raise _Invalid("give exactly one of --d and --d-over-n")
    if args.d is not None:
        model = thermo.AverageModel(args.n, args.d, args.mode)
    else:
        model = thermo.AverageModel.from_fraction(args.n, args.d_over_n, args.mode)
    if args.spacing == "log":
        grid = thermo.log_grid(args.b_min, args.b_max, args.points_per_decade)
    else:
        grid = thermo.linear_grid(args.b_min, args.b_max, args.points)
    result = thermo.sweep(model, grid)
    with _output(args.out) as fh:
        if args.format == "csv":
            thermo.write_csv(result, fh)
        else:
            rows = [dict(zip(thermo.CSV_COLUMNS, r)) for r in zip(*(result.column(c).tolist()
                                                                  for c in thermo.CSV_COLUMNS))]
            fh.write(_dump({"summary": result.summary(), "rows": rows}) + "\n")
    summary = json.dumps(result.summary())
    print(summary, file=sys.stderr if args.out == "-" else sys.stdout)
    return EXIT_OK


def cmd_tune(args) -> int:
    plan = tuner.tune(args.n, args.epsilon, args.nu, mode=args.mode)
    print(_dump(plan.to_dict()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qassoc", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", help="file of 'key = value' defaults")
        p.set_defaults(func=func)
        return p

    p = add("simulate", cmd_simulate, "exact gate-level simulation with closed-form cross-check")
    p.add_argument("--patterns", required=True)
    p.add_argument("--input", required=True, type=_bitstring)
    p.add_argument("--b", required=True, type=int)
    p.add_argument("--cap", type=int, default=gatesim.DEFAULT_CAP,
                   help="maximum number of stored amplitudes")

    p = add("retrieve", cmd_retrieve, "Monte Carlo of the repeat-until-success protocol")
    p.add_argument("--patterns", required=True)
    p.add_argument("--input", required=True, type=_bitstring)
    p.add_argument("--b", required=True, type=int)
    p.add_argument("--T", required=True, type=int)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)

    p = add("sweep", cmd_sweep, "thermodynamic sweep over inverse temperature (CSV)")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--d-over-n", type=float)
    p.add_argument("--b-min", type=float, default=1e-3)
    p.add_argument("--b-max", type=float, default=1e5)
    p.add_argument("--points-per-decade", type=int, default=10)
    p.add_argument("--points", type=int, default=50, help="grid size for linear spacing")
    p.add_argument("--spacing", choices=("log", "linear"), default="log")
    p.add_argument("--mode", choices=thermo.MODES, default="sum")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-")

    p = add("tune", cmd_tune, "choose b and T for a corruption level and efficiency")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--epsilon", required=True, type=float)
    p.add_argument("--nu", required=True, type=float)
    p.add_argument("--mode", choices=thermo.MODES, default="sum")
    return parser


def _parse(parser: argparse.ArgumentParser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config and known.command:
        config = _read_config(known.config)
        subparser = parser._subparsers._group_actions[0].choices[known.command]
        actions = {a.dest: a for a in subparser._actions}
        defaults = {}
        for key, value in config.items():
            if key not in actions:
                raise _Invalid(f"{known.config}: unknown key {key!r} for {known.command}")
            action = actions[key]
            try:
                defaults[key] = action.type(value) if action.type else value
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise _Invalid(f"{known.config}: bad value for {key}: {exc}") from None
            action.required = False
        subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _parse(parser, argv)
        return args.func(args)
    except gatesim.ResourceCapError as exc:
        print(f"error: {exc}. Use the closed-form commands (retrieve, sweep) for "
              f"instances this large, or raise --cap.", file=sys.stderr)
        return EXIT_CAP
    except (PatternParseError, _Invalid, closedform.NeverRecognizedError,
            tuner.InfeasibleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        where = f" ({exc.filename})" if getattr(exc, "filename", None) else ""
        print(f"error: {exc.strerror or exc}{where}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
