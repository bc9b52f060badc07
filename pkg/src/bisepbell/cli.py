"""Command-line front end: verify, maximize, eval, scan, classify.

Exit codes: 0 success or passing verification, 1 failing verification,
2 usage error.  Results go to stdout as JSON.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .bellops import correlation_vector
from .errors import BisepError
from .geometry import classify, scan_plane, write_svg
from .observables import parse_settings
from .optimize import Objective, OptimizerConfig, StateClass, maximize
from .states import QuantumState, basis_state, ghz, load_state, save_state, w_state
from .verify import SUITES, VerifyConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
# flags whose values may start with '-' (negative angles or coordinates)
_VALUE_FLAGS = ("--settings", "--vector", "--state", "--plane")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage().strip()}")


def _glue_values(argv: list[str]) -> list[str]:
    out = []
    it = iter(argv)
    for a in it:
        if a in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bisepbell", description="Three-qubit biseparable Bell correlation toolkit (angles in radians).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES + ("all",))
    v.add_argument("--loo", action="store_true", help="only the orthogonal-observable checks of two-mode suites")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--restarts", type=int, default=50)
    v.add_argument("--tol", type=float, default=1e-4)
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--out")

    m = sub.add_parser("maximize", help="seesaw maximization of a correlation objective")
    m.add_argument("--target", required=True, choices=("single", "pair-sq", "triple-sq"))
    m.add_argument("--i", type=int, default=1, choices=(1, 2, 3))
    m.add_argument("--class", dest="state_class", default="all", help="all | separable | bisep:J")
    m.add_argument("--loo", action="store_true")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--restarts", type=int, default=50)
    m.add_argument("--tol", type=float, default=1e-6)
    m.add_argument("--max-iter", type=int, default=500)
    m.add_argument("--save-state", help="write the optimal state as JSON")

    e = sub.add_parser("eval", help="correlation vector of a state under given settings")
    e.add_argument("--state", required=True, help="ghz:ALPHA | w | basis:BITS | file:PATH")
    e.add_argument("--settings", required=True, help="'t1,t1p;t2,t2p;t3,t3p' or, with --loo, 't1;t2;t3'")
    e.add_argument("--loo", action="store_true")

    s = sub.add_parser("scan", help="sample a correlation plane")
    s.add_argument("--plane", required=True, help="I,J with J = I+1 mod 3")
    s.add_argument("--samples", type=int, required=True)
    s.add_argument("--class", dest="state_class", default="all")
    s.add_argument("--loo", action="store_true")
    s.add_argument("--out", required=True)
    s.add_argument("--svg")
    s.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("classify", help="region membership of a correlation vector")
    c.add_argument("--vector", required=True, help="d1,d2,d3")
    c.add_argument("--loo", action="store_true")
    p.set_defaults(_subparsers={n: sp for n, sp in sub.choices.items()})
    return p


def parse_state(text: str) -> QuantumState:
    kind, _, arg = text.partition(":")
    if kind == "w" and not arg:
        return w_state()
    if kind == "ghz":
        return ghz(3, float(arg) if arg else math.pi / 4)
    if kind == "basis" and arg:
        return basis_state(arg)
    if kind == "file" and arg:
        return load_state(arg)
    raise UsageError(f"--state: unrecognized state {text!r}; expected ghz:ALPHA | w | basis:BITS | file:PATH")


def _floats(text: str, n: int, flag: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        vals = []
    if len(vals) != n or not all(map(math.isfinite, vals)):
        raise UsageError(f"{flag}: expected {n} comma-separated numbers, got {text!r}")
    return vals


def _emit(obj: dict) -> None:
    print(json.dumps(obj, indent=2))


def _cmd_verify(a) -> int:
    if a.restarts < 1 or a.samples < 1:
        raise UsageError("--restarts and --samples must be positive")
    cfg = VerifyConfig(seed=a.seed, restarts=a.restarts, tol=a.tol, samples=a.samples, loo=a.loo)
    rep = run_suite(a.suite, cfg)
    text = rep.to_json()
    if a.out:
        Path(a.out).write_text(text + "\n")
        _emit({"suite": rep.suite, "overall": rep.overall, "failed": [c.claim for c in rep.failed()], "out": a.out})
    else:
        print(text)
    return EXIT_OK if rep.overall else EXIT_FAIL


def _cmd_maximize(a) -> int:
    if a.restarts < 1:
        raise UsageError("--restarts must be positive")
    kind = a.target.replace("-", "_")
    obj = Objective(kind, None if kind == "triple_sq" else a.i)
    sc = StateClass.parse(a.state_class)
    cfg = OptimizerConfig(restarts=a.restarts, seed=a.seed, tol=a.tol, max_iter=a.max_iter)
    r = maximize(obj, sc, a.loo, cfg)
    if a.save_state:
        save_state(r.state, a.save_state)
    _emit({
        "target": a.target,
        "i": obj.i,
        "class": str(sc),
        "loo": a.loo,
        "value": r.value,
        "correlation": [float(x) for x in r.correlation()],
        "settings": r.scenario.format(),
        "state": a.save_state,
        "restarts": r.restarts_used,
        "best_restart": r.best_restart,
        "converged": r.converged,
        "seed": a.seed,
    })
    return EXIT_OK


def _cmd_eval(a) -> int:
    state = parse_state(a.state)
    sc = parse_settings(a.settings, loo=a.loo)
    d = correlation_vector(state, sc)
    _emit({
        "correlation": [float(x) for x in d],
        "pair_sq": [d.pair_sq(i) for i in (1, 2, 3)],
        "triple_sq": d.triple_sq(),
        "settings": sc.format(),
        "loo": a.loo,
    })
    return EXIT_OK


def _cmd_scan(a) -> int:
    i, j = (int(x) for x in _floats(a.plane, 2, "--plane"))
    if a.samples < 1:
        raise UsageError("--samples must be >= 1")
    res = scan_plane("LOO" if a.loo else "GENERAL", (i, j), a.samples, StateClass.parse(a.state_class), a.seed)
    res.write_csv(a.out)
    if a.svg:
        write_svg(a.svg, res.mode, res.pair, res.points)
    _emit({
        "mode": res.mode,
        "plane": [i, j],
        "class": str(res.state_class),
        "samples": a.samples,
        "seed": a.seed,
        "max_pair_sq": res.max_pair_sq,
        "infeasible": int(np.count_nonzero(~res.feasible)),
        "csv": a.out,
        "svg": a.svg,
    })
    return EXIT_OK


def _cmd_classify(a) -> int:
    v = _floats(a.vector, 3, "--vector")
    rep = classify(v, "LOO" if a.loo else "GENERAL")
    _emit({"vector": v, **rep.to_dict(), "black_area": rep.black_area})
    return EXIT_OK


_COMMANDS = {
    "verify": _cmd_verify,
    "maximize": _cmd_maximize,
    "eval": _cmd_eval,
    "scan": _cmd_scan,
    "classify": _cmd_classify,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(_glue_values(argv))
        return _COMMANDS[args.command](args)
    except (UsageError, BisepError, ValueError, OSError) as exc:
        lines = str(exc).splitlines() or [type(exc).__name__]
        print(lines[0] if isinstance(exc, UsageError) else f"bisepbell: {lines[0]}", file=sys.stderr)
        if len(lines) > 1:
            print("\n".join(lines[1:]), file=sys.stderr)
        elif args is not None:
            print(args._subparsers[args.command].format_usage().strip(), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
