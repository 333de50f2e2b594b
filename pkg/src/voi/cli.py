"""Command-line surface: load problem files, run solvers and oracles,
export curves, reports, level sets, and figures.

Exit codes: 0 success, 2 input error, 3 solver non-convergence,
4 enumeration cap exceeded, 5 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, replace

import numpy as np

from .bregman import BregmanGenerator, ResourceProblem, constrained_value
from .curve import SCurve, assemble_s_curve, simplex_level_sets
from .decisions import (DecisionProblem, PARADOX_NAMES, Preference,
                        eu_compare, expected_utility, paradox)
from .deterministic import DEFAULT_ENUM_CAP, boltzmann_value, hartley_value
from .errors import EnumerationCapError, ProblemFileError, SolverFailure
from .frontier import ValueCurve
from .oracle import (OracleReport, exhaustive_deterministic, grid_max_eu,
                     simplex_grid_value, variational_entropy_check,
                     write_reports_csv)
from .prob import Distribution, entropy
from .shannon import trace_curve, upper_value

__all__ = ["main", "load_problem", "save_problem", "parse_grid", "ProblemSpec"]

_CURVE_TYPES = ("shannon", "boltzmann", "hartley", "bregman")
_ORACLE_CHECKS = ("shannon", "boltzmann", "hartley", "bregman", "entropy")

_ORACLE_RESOLUTION = {"shannon": 2000, "bregman": 200, "entropy": 400,
                      "boltzmann": 0, "hartley": 0}
# Exhaustive table comparisons should agree to accumulation noise; grid
# oracles only to their discretisation error.
_ORACLE_TOLERANCE = {"shannon": 1e-3, "bregman": 2e-3, "entropy": 5e-3,
                     "boltzmann": 1e-12, "hartley": 1e-12}

_RISK_TRANSFORMS = ("none", "sqrt", "log")


@dataclass(frozen=True)
class ProblemSpec:
    """A loaded problem file: the decision problem plus any resource block."""

    problem: DecisionProblem
    generator: BregmanGenerator | None = None
    reference: Distribution | None = None


def _fmt(x: float) -> str:
    return repr(float(x))


def _enum_cap() -> int:
    raw = os.environ.get("VOI_ENUM_CAP")
    if raw is None:
        return DEFAULT_ENUM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ProblemFileError(f"VOI_ENUM_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ProblemFileError("VOI_ENUM_CAP must be positive")
    return cap


# ---------------------------------------------------------------------------
# problem files

_ALLOWED_KEYS = {"name", "prior", "utilities", "state_labels", "action_labels",
                 "generator"}
_GENERATOR_KINDS = ("negative_entropy", "squared_euclidean")


def load_problem(path: str) -> ProblemSpec:
    """Parse a problem document; every defect maps to ProblemFileError."""
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ProblemFileError(f"{path}: top level must be an object")
    unknown = set(raw) - _ALLOWED_KEYS
    if unknown:
        raise ProblemFileError(f"{path}: unknown keys {sorted(unknown)}")
    for key in ("prior", "utilities"):
        if key not in raw:
            raise ProblemFileError(f"{path}: missing required key {key!r}")

    name = raw.get("name", "")
    if not isinstance(name, str):
        raise ProblemFileError(f"{path}: name must be a string")
    state_labels = raw.get("state_labels")
    action_labels = raw.get("action_labels")
    for label_key, labels in (("state_labels", state_labels),
                              ("action_labels", action_labels)):
        if labels is not None and (not isinstance(labels, list)
                                   or not all(isinstance(s, str) for s in labels)):
            raise ProblemFileError(f"{path}: {label_key} must be an array of strings")

    try:
        prior = Distribution(np.asarray(raw["prior"], dtype=float),
                             labels=tuple(state_labels) if state_labels else None)
        utilities = np.asarray(raw["utilities"], dtype=float)
        problem = DecisionProblem(prior, utilities, name=name,
                                  action_labels=tuple(action_labels) if action_labels else None)
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"{path}: {exc}") from None

    generator = reference = None
    if "generator" in raw:
        generator, reference = _parse_generator(path, raw["generator"], problem)
    return ProblemSpec(problem, generator, reference)


def _parse_generator(path: str, block, problem: DecisionProblem):
    if not isinstance(block, dict):
        raise ProblemFileError(f"{path}: generator must be an object")
    unknown = set(block) - {"kind", "reference"}
    if unknown:
        raise ProblemFileError(f"{path}: unknown generator keys {sorted(unknown)}")
    kind = block.get("kind")
    if kind not in _GENERATOR_KINDS:
        raise ProblemFileError(
            f"{path}: generator kind must be one of {_GENERATOR_KINDS}, got {kind!r}")
    dimension = problem.n_actions
    try:
        if "reference" in block:
            reference = Distribution(np.asarray(block["reference"], dtype=float))
        else:
            reference = Distribution.uniform(dimension)
        if len(reference) != dimension:
            raise ValueError(
                f"generator reference has {len(reference)} entries, payoff row has {dimension}")
        if kind == "negative_entropy":
            generator = BregmanGenerator.negative_entropy(dimension)
        else:
            generator = BregmanGenerator.squared_euclidean(dimension)
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"{path}: {exc}") from None
    return generator, reference


def save_problem(path: str, problem: DecisionProblem,
                 generator: BregmanGenerator | None = None,
                 reference: Distribution | None = None) -> None:
    """Write a problem document that load_problem reads back verbatim."""
    doc = {
        "name": problem.name,
        "prior": [float(x) for x in problem.prior.probs],
        "utilities": [[float(x) for x in row] for row in problem.utilities],
    }
    if problem.prior.labels is not None:
        doc["state_labels"] = list(problem.prior.labels)
    if problem.action_labels is not None:
        doc["action_labels"] = list(problem.action_labels)
    if generator is not None:
        block = {"kind": generator.kind}
        if reference is not None:
            block["reference"] = [float(x) for x in reference.probs]
        doc["generator"] = block
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2)
        handle.write("\n")


def _resource_vector(spec: ProblemSpec, path: str) -> np.ndarray:
    if spec.generator is None:
        raise ProblemFileError(
            f"{path}: resource runs need a generator block (kind, optional reference)")
    if spec.problem.n_states != 1:
        raise ProblemFileError(
            f"{path}: resource runs need a single payoff row; "
            f"got {spec.problem.n_states} states")
    return spec.problem.utilities[0]


# ---------------------------------------------------------------------------
# grids and output plumbing

def parse_grid(text: str) -> np.ndarray:
    """Parse the inclusive budget grid syntax start:end:count."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ProblemFileError(f"grid {text!r} must look like start:end:count")
    try:
        start, end = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ProblemFileError(f"grid {text!r}: could not parse numbers") from None
    if not (math.isfinite(start) and math.isfinite(end)):
        raise ProblemFileError(f"grid {text!r}: endpoints must be finite")
    if start < 0.0:
        raise ProblemFileError(f"grid {text!r}: budgets must be >= 0")
    if count < 2:
        raise ProblemFileError(f"grid {text!r}: count must be at least 2")
    if end <= start:
        raise ProblemFileError(f"grid {text!r}: end must exceed start")
    return np.linspace(start, end, count)


def _keyed_points(result) -> list:
    if isinstance(result, SCurve):
        return result.signed_points()
    return [(p.lam, p) for p in result.points]


def _check_converged(result) -> None:
    if isinstance(result, SCurve):
        points = list(result.gains.points) + list(result.losses.points)
    else:
        points = list(result.points)
    bad = [p for p in points if not p.converged]
    if bad:
        budgets = ", ".join(_fmt(p.lam) for p in bad[:5])
        raise SolverFailure(f"solver failed to converge at budgets: {budgets}")


def _write_curve_csv(rows, stream) -> None:
    stream.write("lambda,value,beta,converged\n")
    for key, p in rows:
        flag = "true" if p.converged else "false"
        stream.write(f"{_fmt(key)},{_fmt(p.value)},{_fmt(p.beta)},{flag}\n")


def _curve_json(rows, name: str, curve_type: str, branch: str) -> dict:
    points = []
    for key, p in rows:
        beta = p.beta if math.isfinite(p.beta) else "inf"
        points.append({"lambda": float(key), "value": p.value, "beta": beta,
                       "converged": p.converged})
    return {"problem": name, "type": curve_type, "branch": branch, "points": points}


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _emit(args, write_csv, make_json) -> None:
    fmt = args.format
    if fmt is None:
        fmt = "json" if (args.out or "").endswith(".json") else "csv"
    stream, owned = _open_out(args.out)
    try:
        if fmt == "csv":
            write_csv(stream)
        else:
            json.dump(make_json(), stream, indent=2)
            stream.write("\n")
    finally:
        if owned:
            stream.close()


# ---------------------------------------------------------------------------
# curve

def cmd_curve(args) -> int:
    spec = load_problem(args.problem)
    grid = parse_grid(args.lam)
    cap = _enum_cap()

    if args.type == "shannon":
        if args.branch == "s":
            result = assemble_s_curve(spec.problem, grid)
        else:
            result = trace_curve(spec.problem, args.branch, grid)
    elif args.type in ("boltzmann", "hartley"):
        result = _deterministic_result(spec.problem, args.type, args.branch, grid, cap)
    else:
        result = _bregman_result(spec, args.branch, grid, args.problem)

    _check_converged(result)
    rows = _keyed_points(result)
    name = spec.problem.name
    _emit(args, lambda s: _write_curve_csv(rows, s),
          lambda: _curve_json(rows, name, args.type, args.branch))
    if args.plot:
        from . import plotting
        title = f"{name or args.problem}: {args.type}"
        if isinstance(result, SCurve):
            plotting.render_s_curve(result, args.plot, title=title)
        else:
            plotting.render_curve(result, args.plot, title=f"{title} ({args.branch})")
    return 0


def _deterministic_result(problem, kind: str, branch: str, grid, cap: int):
    solver = boltzmann_value if kind == "boltzmann" else hartley_value

    def one_branch(which: str, lams) -> ValueCurve:
        base = problem if which == "upper" else problem.negated()
        points = []
        for lam in lams:
            p = solver(base, float(lam), cap=cap)
            if which == "lower":
                p = replace(p, value=-p.value)
            points.append(p)
        return ValueCurve(points=tuple(points), branch=which, problem=problem)

    if branch in ("upper", "lower"):
        return one_branch(branch, grid)
    full = grid if grid[0] == 0.0 else np.concatenate([[0.0], grid])
    return SCurve(gains=one_branch("upper", full), losses=one_branch("lower", full))


def _bregman_result(spec: ProblemSpec, branch: str, grid, path: str):
    vector = _resource_vector(spec, path)

    def one_branch(which: str, lams) -> ValueCurve:
        points = tuple(
            constrained_value(
                ResourceProblem(vector, spec.generator, spec.reference, float(lam)),
                branch=which)
            for lam in lams)
        return ValueCurve(points=points, branch=which)

    if branch in ("upper", "lower"):
        return one_branch(branch, grid)
    full = grid if grid[0] == 0.0 else np.concatenate([[0.0], grid])
    return SCurve(gains=one_branch("upper", full), losses=one_branch("lower", full))


# ---------------------------------------------------------------------------
# paradox

_RELATION_TEXT = {Preference.LESS: "<", Preference.GREATER: ">",
                  Preference.INDIFFERENT: "~"}


def cmd_paradox(args) -> int:
    fixture = paradox(args.name, n=args.n, family_size=args.family_size)
    entries = []
    for label, lottery in fixture.lotteries:
        entries.append({"label": label,
                        "expected_utility": expected_utility(lottery),
                        "entropy": entropy(lottery.dist)})
    verdicts = []
    labels = [label for label, _ in fixture.lotteries]
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            relation = eu_compare(fixture.lottery(labels[i]), fixture.lottery(labels[j]))
            verdicts.append({"left": labels[i], "right": labels[j],
                             "relation": relation.value})

    if args.json:
        doc = {"name": fixture.name, "notes": fixture.notes,
               "lotteries": entries, "verdicts": verdicts}
        if fixture.family:
            doc["family_size"] = len(fixture.family)
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return 0

    print(f"paradox: {fixture.name}")
    if fixture.notes:
        print(f"note: {fixture.notes}")
    for entry in entries:
        print(f"  EU({entry['label']}) = {_fmt(entry['expected_utility'])}"
              f"   H({entry['label']}) = {_fmt(entry['entropy'])}")
    for v in verdicts:
        sign = _RELATION_TEXT[Preference(v["relation"])]
        print(f"verdict: {v['left']} {sign} {v['right']} ({v['relation']})")
    if fixture.family:
        print(f"family: {len(fixture.family)} urn compositions available")
    return 0


# ---------------------------------------------------------------------------
# oracle

def cmd_oracle(args) -> int:
    spec = load_problem(args.problem)
    problem = spec.problem
    check = args.check
    resolution = args.resolution if args.resolution is not None else _ORACLE_RESOLUTION[check]
    tolerance = args.tolerance if args.tolerance is not None else _ORACLE_TOLERANCE[check]
    lam = args.lam
    if check != "entropy" and lam is None:
        raise ProblemFileError(f"--lambda is required for the {check} check")
    cap = _enum_cap()

    started = time.perf_counter()
    if check == "shannon":
        solver = upper_value(problem, lam).value
        oracle = grid_max_eu(problem, lam, resolution)
        target = "shannon_upper_vs_grid"
    elif check == "boltzmann":
        solver = boltzmann_value(problem, lam, cap=cap).value
        table = exhaustive_deterministic(problem, cap=cap)
        oracle = max(row.eu for row in table if row.entropy <= lam + 1e-12)
        target = "boltzmann_vs_table"
    elif check == "hartley":
        solver = hartley_value(problem, lam, cap=cap).value
        table = exhaustive_deterministic(problem, cap=cap)
        oracle = max(row.eu for row in table if row.ln_cardinality <= lam + 1e-12)
        target = "hartley_vs_table"
    elif check == "bregman":
        vector = _resource_vector(spec, args.problem)
        rp = ResourceProblem(vector, spec.generator, spec.reference, lam)
        solver = constrained_value(rp).value
        oracle = simplex_grid_value(rp, "upper", resolution)
        target = "bregman_vs_simplex_grid"
    else:
        if problem.n_states > 2:
            raise ProblemFileError("entropy check needs a prior of dimension <= 2")
        solver = entropy(problem.prior)
        oracle = variational_entropy_check(problem.prior, resolution)
        target = "entropy_vs_variational"
    elapsed = time.perf_counter() - started

    report = OracleReport(target=target, oracle_value=oracle, solver_value=solver,
                          resolution=resolution, elapsed=elapsed)
    stream, owned = _open_out(args.out)
    try:
        write_reports_csv([report], stream)
    finally:
        if owned:
            stream.close()
    if report.abs_diff > tolerance:
        print(f"oracle mismatch: {target} abs_diff {report.abs_diff!r} "
              f"exceeds tolerance {tolerance!r}", file=sys.stderr)
        return 5
    return 0


# ---------------------------------------------------------------------------
# level sets

def _risk_callable(name: str, payoffs):
    if name == "none":
        return None
    lo = min(float(x) for x in payoffs)
    if name == "sqrt":
        return lambda x: math.sqrt(x - lo + 1.0)
    return lambda x: math.log1p(x - lo)


def _parse_floats(text: str, what: str) -> list:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise ProblemFileError(f"{what} must be comma-separated numbers, got {text!r}") from None
    if not values:
        raise ProblemFileError(f"{what}: empty list")
    return values


def cmd_levelsets(args) -> int:
    payoffs = _parse_floats(args.payoffs, "--payoffs")
    if len(payoffs) != 3:
        raise ProblemFileError("--payoffs needs exactly three values")
    transform = _risk_callable(args.risk, payoffs)
    shown = [transform(x) for x in payoffs] if transform else payoffs
    if args.values:
        values = _parse_floats(args.values, "--values")
    else:
        values = list(np.linspace(min(shown), max(shown), 7)[1:-1])
    segments = simplex_level_sets(payoffs, values, risk_transform=transform)

    def write_csv(stream) -> None:
        stream.write("value,a1,b1,c1,a2,b2,c2\n")
        for seg in segments:
            cells = [_fmt(seg.value)]
            for idx in range(2):
                if idx < len(seg.endpoints):
                    cells.extend(_fmt(c) for c in seg.endpoints[idx])
                else:
                    cells.extend(["", "", ""])
            stream.write(",".join(cells) + "\n")

    def make_json() -> dict:
        return {"payoffs": payoffs, "risk": args.risk,
                "segments": [{"value": seg.value,
                              "endpoints": [list(p) for p in seg.endpoints]}
                             for seg in segments]}

    _emit(args, write_csv, make_json)
    if args.plot:
        from . import plotting
        reference = None
        if transform is not None:
            plain_values = list(np.linspace(min(payoffs), max(payoffs), 7)[1:-1])
            reference = simplex_level_sets(payoffs, plain_values)
        plotting.render_level_sets(segments, args.plot,
                                   title=f"level sets, risk={args.risk}",
                                   reference_segments=reference)
    return 0


# ---------------------------------------------------------------------------
# validate

def cmd_validate(args) -> int:
    spec = load_problem(args.problem)
    problem = spec.problem
    print(f"ok: {args.problem}")
    print(f"  name: {problem.name or '(unnamed)'}")
    print(f"  states: {problem.n_states}  actions: {problem.n_actions}")
    state_labels = problem.prior.labels
    print(f"  state labels: {', '.join(state_labels) if state_labels else 'none'}")
    print(f"  action labels: {', '.join(problem.action_labels) if problem.action_labels else 'none'}")
    if spec.generator is None:
        print("  generator: none")
    else:
        print(f"  generator: {spec.generator.kind}"
              f" (reference {'given' if spec.reference is not None else 'uniform'})")
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voi",
        description="Value-of-information frontiers for finite decision problems.")
    sub = parser.add_subparsers(dest="command", required=True)

    curve = sub.add_parser("curve", help="trace a frontier over a budget grid")
    curve.add_argument("--problem", required=True, help="problem file (JSON)")
    curve.add_argument("--type", required=True, choices=_CURVE_TYPES)
    curve.add_argument("--branch", default="upper", choices=("upper", "lower", "s"))
    curve.add_argument("--lambda", dest="lam", required=True,
                       help="budget grid start:end:count (inclusive, nats)")
    curve.add_argument("--out", help="output path (default stdout)")
    curve.add_argument("--format", choices=("csv", "json"),
                       help="default: csv, or json when --out ends in .json")
    curve.add_argument("--plot", help="also render the curve to this image file")
    curve.set_defaults(func=cmd_curve)

    par = sub.add_parser("paradox", help="report a catalogued decision paradox")
    par.add_argument("name", help=f"one of {', '.join(PARADOX_NAMES)}")
    par.add_argument("--n", type=int, default=20,
                     help="truncation for the open-ended doubling games")
    par.add_argument("--family-size", type=int, default=101,
                     help="composition family size for the ambiguity fixture")
    par.add_argument("--json", action="store_true")
    par.set_defaults(func=cmd_paradox)

    oracle = sub.add_parser("oracle", help="compare a solver against its brute-force oracle")
    oracle.add_argument("--problem", required=True)
    oracle.add_argument("--check", required=True, choices=_ORACLE_CHECKS)
    oracle.add_argument("--lambda", dest="lam", type=float,
                        help="single budget (nats); ignored by the entropy check")
    oracle.add_argument("--resolution", type=int,
                        help="oracle grid resolution (per-check default)")
    oracle.add_argument("--tolerance", type=float,
                        help="abs_diff threshold for exit code 5 (per-check default)")
    oracle.add_argument("--out", help="report CSV path (default stdout)")
    oracle.set_defaults(func=cmd_oracle)

    level = sub.add_parser("levelsets", help="export payoff level sets on the 2-simplex")
    level.add_argument("--payoffs", required=True, help="three payoffs a,b,c")
    level.add_argument("--values", help="target values v1,v2,... (default: 5 interior levels)")
    level.add_argument("--risk", default="none", choices=_RISK_TRANSFORMS,
                       help="optional monotone concave payoff transform")
    level.add_argument("--out", help="output path (default stdout)")
    level.add_argument("--format", choices=("csv", "json"))
    level.add_argument("--plot", help="also render the segments to this image file")
    level.set_defaults(func=cmd_levelsets)

    val = sub.add_parser("validate", help="check a problem file and print a summary")
    val.add_argument("--problem", required=True)
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProblemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except SolverFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
