"""Command line front end: gen, solve, verify and bench."""
from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
import time
import tracemalloc
from typing import Optional

import numpy as np

from . import oracle, solvers
from .core import ContractError, Instance, Mode

EXIT_PARSE = 2
EXIT_CONTRACT = 3
EXIT_OVERSIZE = 4

MODES = [m.value for m in Mode]


class InputError(Exception):
    pass


def generate(n: int, u: int, t: int, mode: str, profit_range=(1, 100), seed: int = 0) -> dict:
    """A pseudorandom instance as a JSON-ready dict; the same arguments give the same instance."""
    if n < 0 or u < 1 or t < 0 or (mode == "residue" and n < 1):
        raise InputError("need n >= 0 (>= 1 for residue), u >= 1, t >= 0")
    rng = np.random.default_rng(seed)
    d = {"weights": rng.integers(1, u + 1, size=n).tolist()}
    if mode == "knapsack":
        lo, hi = profit_range
        if lo > hi:
            raise InputError("empty profit range")
        d["profits"] = rng.integers(lo, hi + 1, size=n).tolist()
    d["t"] = t
    d["mode"] = mode
    d["u"] = u
    return d


def load_instance(path: str, mode: Optional[str] = None) -> Instance:
    try:
        with open(path) as fh:
            d = json.load(fh)
        if mode == "knapsack" and "profits" not in d:
            raise InputError("knapsack mode needs profits")
        if mode and mode != "knapsack":
            d = {k: v for k, v in d.items() if k != "profits"}
        return Instance.from_dict(d, mode)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read instance {path}: {exc}") from exc


def run_solver(inst: Instance, order: str = "random", seed: int = 0) -> tuple[str, list]:
    """(key column name, list of (key, value) rows) for the instance's mode."""
    if inst.mode is Mode.RESIDUE:
        sums = solvers.solve_residue_table(inst, order, seed)
        return "residue", list(enumerate(sums))
    if inst.mode is Mode.KNAPSACK:
        values = solvers.solve_knapsack(inst)
    elif inst.mode is Mode.COINCHANGE:
        values = solvers.solve_coinchange(inst, order, seed)
    else:
        values = [int(x) for x in solvers.solve_subsetsum(inst)[1:]]
    return "target", list(enumerate(values, start=1))


def run_oracle(inst: Instance) -> list:
    if inst.mode is Mode.RESIDUE:
        return list(enumerate(oracle.dijkstra_residues(inst)))
    values = oracle.dp_values(inst)[1:]
    if inst.mode is Mode.COINCHANGE:
        values = [None if v is None else -v for v in values]
    elif inst.mode is Mode.SUBSETSUM:
        values = [int(v is not None) for v in values]
    return list(enumerate(values, start=1))


def oversize(inst: Instance) -> bool:
    if inst.mode is Mode.RESIDUE:
        return inst.modulus > oracle.DESK_MODULUS
    return inst.t > oracle.DESK_T


def format_rows(key: str, rows: list, fmt: str, mode: Mode) -> str:
    value_col = "min_sum" if mode is Mode.RESIDUE else "feasible" if mode is Mode.SUBSETSUM else "value"
    if fmt == "json":
        return json.dumps([{key: k, value_col: v} for k, v in rows]) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([key, value_col])
    w.writerows((k, "" if v is None else v) for k, v in rows)
    return buf.getvalue()


def _write(text: str, out: Optional[str]) -> None:
    if out and out != "-":
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    d = generate(args.n, args.u, args.t, args.mode, tuple(args.profit_range), args.seed)
    _write(json.dumps(d) + "\n", args.out)
    return 0


def cmd_solve(args) -> int:
    inst = load_instance(args.instance, args.mode)
    key, rows = run_solver(inst, args.order, args.seed)
    _write(format_rows(key, rows, args.format, inst.mode), args.out)
    return 0


def cmd_verify(args) -> int:
    inst = load_instance(args.instance, args.mode)
    if oversize(inst):
        print(f"instance too large for the oracle (mode {inst.mode.value})", file=sys.stderr)
        return EXIT_OVERSIZE
    _, got = run_solver(inst, args.order, args.seed)
    if args.inject_fault is not None and got:
        i = args.inject_fault % len(got)
        k, v = got[i]
        got[i] = (k, 1 if v is None else v + 1)
    want = run_oracle(inst)
    for (k, a), (_, b) in zip(got, want):
        if a != b:
            print(f"FAIL first mismatch at {k}: solver={a} oracle={b}")
            return 1
    if len(got) != len(want):
        print(f"FAIL length solver={len(got)} oracle={len(want)}")
        return 1
    print(f"PASS {inst.mode.value}: {len(got)} entries match")
    return 0


BENCH_FIELDS = ["mode", "n", "u", "t", "strategy", "wall_time", "peak_memory"]


def bench_point(point: dict, repeats: int = 3) -> dict:
    mode = point.get("mode", "coinchange")
    strategy = point.get("strategy", "random")
    seed = int(point.get("seed", 0))
    d = generate(int(point["n"]), int(point["u"]), int(point.get("t", 0)), mode,
                 tuple(point.get("profit_range", (1, 100))), seed)
    if mode == "residue":
        d["weights"][0] = d["u"]  # modulus tracks u
    inst = Instance.from_dict(d)
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        run_solver(inst, strategy, seed)
        times.append(time.perf_counter() - start)
    tracemalloc.start()
    run_solver(inst, strategy, seed)
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    return {"mode": mode, "n": inst.n, "u": inst.u, "t": inst.t, "strategy": strategy,
            "wall_time": f"{statistics.median(times):.6f}", "peak_memory": peak}


def cmd_bench(args) -> int:
    try:
        with open(args.sweep) as fh:
            sweep = json.load(fh)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read sweep {args.sweep}: {exc}") from exc
    points = sweep.get("points", []) if isinstance(sweep, dict) else sweep
    buf = io.StringIO()
    w = csv.DictWriter(buf, BENCH_FIELDS, lineterminator="\n")
    w.writeheader()
    for p in points:
        w.writerow(bench_point(p, args.repeats))
    _write(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="allknap", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a random instance as JSON")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--u", type=int, required=True)
    g.add_argument("--t", type=int, default=0)
    g.add_argument("--mode", choices=MODES, default="coinchange")
    g.add_argument("--profit-range", type=int, nargs=2, default=(1, 100), metavar=("LO", "HI"))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    for name, func, help_ in (("solve", cmd_solve, "solve an instance"),
                              ("verify", cmd_verify, "check the solver against the oracle")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("instance")
        s.add_argument("--mode", choices=MODES)
        s.add_argument("--order", choices=solvers.STRATEGIES, default="random")
        s.add_argument("--seed", type=int, default=0)
        s.set_defaults(func=func)
        if name == "solve":
            s.add_argument("--out")
            s.add_argument("--format", choices=("csv", "json"), default="csv")
        else:
            s.add_argument("--inject-fault", type=int, help=argparse.SUPPRESS)

    b = sub.add_parser("bench", help="time a sweep of generated instances")
    b.add_argument("sweep", help="JSON list of points {mode, n, u, t, strategy, seed}")
    b.add_argument("--out")
    b.add_argument("--repeats", type=int, default=3)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ContractError as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
