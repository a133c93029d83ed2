"""Command-line front end: one subcommand per analysis, JSON on stdout.

Exit codes: 0 computed, 2 invalid input, 3 budget exceeded, 4 internal
invariant violated.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .counting import (DiagonalSystem, count_solutions, count_trivial_pair, even_moment_check,
                       mean_value)
from .errors import BudgetExceeded, InvalidInput, InvariantViolation, NotFullRowRank
from .linalg import RationalMatrix, as_fraction, matrix
from .matroid import (check_condition_I, is_k_partitionable, is_quasi_partitionable, mu_profile,
                      q_profile)
from .regularity import (AuxOperatorSpec, BohrSpec, aux_psi, bohr_recurrence_check, bohr_set,
                         bohr_syndetic_constant, check_mult_syndetic, crude_transfer_check,
                         density_experiment, find_bad_coloring, multiples_set, nu_l1_mass,
                         random_syndetic_set, syndetic_density_check, w_params)
from .structure import (check_columns_condition, decompose_quasi, falsify_property_iii,
                        preprocess_system, to_normal_form)

SUBCOMMANDS = ("analyze", "mu-q", "condition-i", "partition", "quasi", "decompose", "columns",
               "normal-form", "preprocess", "count", "trivial", "mean-value", "moments", "coloring",
               "density", "syndetic", "bohr", "wtrick", "transfer", "psi")


# ---------------------------------------------------------------- input

def _load(args):
    if args.json is not None and args.input is not None:
        raise InvalidInput("give either an input file or --json, not both")
    if args.json is not None:
        text = args.json
    elif args.input is not None:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidInput(f"cannot read {args.input}: {exc}") from exc
    else:
        raise InvalidInput("an input file or --json is required")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed JSON: {exc}") from exc


def parse_matrix(obj, cols=None) -> RationalMatrix:
    """Matrix JSON object, a list of rows, or ``{"matrix": ...}``."""
    if isinstance(obj, dict) and "matrix" in obj:
        obj = obj["matrix"]
    if isinstance(obj, dict):
        return RationalMatrix.from_json(obj)
    if isinstance(obj, list):
        if not obj:
            if cols is None:
                raise InvalidInput("empty row list needs an explicit column count")
            return RationalMatrix.zeros(0, cols)
        if not all(isinstance(r, list) for r in obj):
            raise InvalidInput("matrix must be a list of rows")
        return matrix(obj)
    raise InvalidInput("cannot interpret input as a matrix")


def _input_matrix(args):
    return parse_matrix(_load(args))


def _input_split(args):
    obj = _load(args)
    if not isinstance(obj, dict) or "A" not in obj:
        raise InvalidInput('expected an object with keys "A", "B" and optionally "C"')
    A = parse_matrix(obj["A"])
    B = parse_matrix(obj.get("B", []), 0) if obj.get("B") not in (None, []) else RationalMatrix.zeros(A.rows, 0)
    C = parse_matrix(obj["C"], B.cols) if obj.get("C") not in (None, []) else RationalMatrix.zeros(0, B.cols)
    return A, B, C


def _k_from(args, obj_k=None):
    k = args.k if getattr(args, "k", None) is not None else obj_k
    if k is None:
        raise InvalidInput("--k is required")
    return k


def _system(args):
    obj = _load(args)
    M = parse_matrix(obj)
    k = _k_from(args, obj.get("k") if isinstance(obj, dict) else None)
    return DiagonalSystem(M, int(k))


def _rational(text):
    try:
        return as_fraction(text)
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


# ---------------------------------------------------------------- handlers

def do_analyze(args):
    M = _input_matrix(args)
    k = _k_from(args)
    cert = check_columns_condition(M)
    try:
        cond = check_condition_I(M, k)
        cond_json = cond.to_json()
        cond_holds = cond.holds
    except NotFullRowRank:
        cond_json, cond_holds = None, False
    if cert is None:
        verdict, reason = "not-partition-regular", "the columns condition fails, and it is necessary for every k"
    elif cond_holds:
        verdict, reason = "partition-regular", "columns condition and condition (I) both hold"
    else:
        verdict, reason = "inapplicable", "condition (I) fails, so the columns condition alone decides nothing"
    return {"k": k, "columnsCondition": cert is not None,
            "certificate": None if cert is None else cert.to_json(),
            "conditionI": cond_json, "verdict": verdict, "reason": reason}


def do_mu_q(args):
    M = _input_matrix(args)
    try:
        q = list(q_profile(M))
    except NotFullRowRank:
        q = None
    return {"mu": list(mu_profile(M)), "q": q}


def do_condition_i(args):
    M = _input_matrix(args)
    report = check_condition_I(M, _k_from(args))
    return {"q": list(report.q), "conditionI": report.to_json()}


def do_partition(args):
    M = _input_matrix(args)
    k = _k_from(args)
    cert = is_k_partitionable(M, k)
    return {"partition": {"k": k, "blocks": None if cert is None else [list(b) for b in cert.blocks]}}


def do_quasi(args):
    return is_quasi_partitionable(_input_matrix(args), args.q).to_json()


def do_decompose(args):
    return decompose_quasi(_input_matrix(args), args.q).to_json()


def do_columns(args):
    M = _input_matrix(args)
    cert = check_columns_condition(M)
    out = {"holds": cert is not None, "certificate": None if cert is None else cert.to_json()}
    if args.samples:
        w = falsify_property_iii(M, args.samples, args.seed)
        out["falsifier"] = None if w is None else [str(x) for x in w]
    return out


def do_normal_form(args):
    return to_normal_form(_input_matrix(args)).to_json()


def do_preprocess(args):
    A, B, C = _input_split(args)
    return preprocess_system(A, B, C, _k_from(args)).to_json()


def do_count(args):
    sys_ = _system(args)
    return {"system": sys_.to_json(), **count_solutions(sys_, args.N).to_json()}


def do_trivial(args):
    sys_ = _system(args)
    return {"system": sys_.to_json(), "N": args.N, "u": args.u, "v": args.v,
            "count": str(count_trivial_pair(sys_, args.N, args.u, args.v))}


def do_mean_value(args):
    return mean_value(args.k, args.t, args.N).to_json()


def do_moments(args):
    a, b = even_moment_check(args.k, args.t, args.N)
    return {"k": args.k, "t": args.t, "N": args.N, "convolution": str(a), "orthogonality": str(b),
            "equal": a == b}


def do_coloring(args):
    sys_ = _system(args)
    col = find_bad_coloring(sys_, args.N, args.r, args.solutions, args.budget)
    return {"N": args.N, "r": args.r, "solutions": args.solutions,
            "coloring": None if col is None else col.to_json(), "exhausted": col is None}


def do_density(args):
    _require_seed(args)
    sys_ = _system(args)
    return density_experiment(sys_, args.N, args.delta, args.trials, args.seed).to_json()


def _require_seed(args):
    if args.seed is None:
        raise InvalidInput("this subcommand is randomised; pass --seed")


def do_syndetic(args):
    if args.multiples is not None:
        S, label = multiples_set(args.multiples), f"multiples of {args.multiples}"
    else:
        _require_seed(args)
        S = random_syndetic_set(args.M, args.N, args.seed, args.strategy)
        label = f"greedy {args.strategy} construction"
    report = check_mult_syndetic(S, args.M, args.N)
    out = {"set": label, **report.to_json()}
    if report.syndetic:
        count, bound, ok = syndetic_density_check(S, args.M, args.N)
        out["density"] = {"count": count, "bound": str(bound), "pass": ok}
    return out


def do_bohr(args):
    if args.input is not None or args.json is not None:
        spec = BohrSpec.from_json(_load(args))
    else:
        if args.phases is None or args.rho is None:
            raise InvalidInput("give a Bohr spec as input or --phases and --rho")
        spec = BohrSpec(args.h, tuple(args.phases), args.rho)
    out = {"spec": spec.to_json(), "N": args.N, "members": bohr_set(spec, args.N)}
    if args.m0_cap:
        out["M0"] = bohr_syndetic_constant(spec, args.m0_cap)
    if len(spec.phases) == 1:
        out["recurrence"] = bohr_recurrence_check(spec.h, spec.phases[0], args.N, args.C).to_json()
    return out


def do_wtrick(args):
    p = w_params(args.k, args.w, args.N, args.zeta, args.xi)
    mass = nu_l1_mass(p)
    return {"params": p.to_json(), "nuMass": str(mass), "massOverX": float(Fraction(mass) / p.X)}


def do_transfer(args):
    A, B, C = _input_split(args)
    p = w_params(args.k, args.w, args.N, args.zeta, args.xi)
    S = multiples_set(args.multiples) if args.multiples else (lambda x: True)
    return crude_transfer_check(range(1, args.N + 1), S, p, A, B, C).to_json()


def do_psi(args):
    A, B, _ = _input_split(args)
    spec = AuxOperatorSpec.build(A, B, _k_from(args), args.B_set)
    y = tuple(args.y) if args.y else (0,) * B.cols
    f = {x: 1 for x in range(1, args.N + 1)}
    return {"spec": spec.to_json(), "y": list(y), "N": args.N, "psi": str(aux_psi(spec, [f], y))}


HANDLERS = {
    "analyze": do_analyze, "mu-q": do_mu_q, "condition-i": do_condition_i, "partition": do_partition,
    "quasi": do_quasi, "decompose": do_decompose, "columns": do_columns, "normal-form": do_normal_form,
    "preprocess": do_preprocess, "count": do_count, "trivial": do_trivial, "mean-value": do_mean_value,
    "moments": do_moments, "coloring": do_coloring, "density": do_density, "syndetic": do_syndetic,
    "bohr": do_bohr, "wtrick": do_wtrick, "transfer": do_transfer, "psi": do_psi,
}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diagpr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"diagpr {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indented JSON plus a summary on stderr")
    common.add_argument("--seed", type=int, default=None, help="seed for randomised subcommands")
    common.add_argument("--threads", type=int, default=1, help="parallelism cap (computation is serial)")
    common.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")
    sub.required = True

    def add(name, help_, needs_input=True, k=False, k_required=False):
        p = sub.add_parser(name, help=help_, parents=[common])
        if needs_input:
            p.add_argument("input", nargs="?", help="JSON input file")
            p.add_argument("--json", help="inline JSON input instead of a file")
        else:
            p.set_defaults(input=None, json=None)
        if k:
            p.add_argument("--k", type=int, required=k_required, help="degree")
        return p

    add("analyze", "columns condition, condition (I) and a verdict", k=True)
    add("mu-q", "mu and q profiles")
    add("condition-i", "check q(d) >= d k^2 + 1", k=True)
    add("partition", "k-partitionability certificate", k=True)
    p = add("quasi", "quasi-q-partitionability")
    p.add_argument("--q", type=int, required=True)
    p = add("decompose", "block decomposition into quasi-partitionable blocks")
    p.add_argument("--q", type=int, required=True)
    p = add("columns", "columns-condition certificate")
    p.add_argument("--samples", type=int, default=0, help="also run the random row-space falsifier")
    add("normal-form", "the (A B; 0 C) normal form")
    add("preprocess", "rescaling and row reduction of a split system {A, B, C}", k=True)
    for name in ("count", "trivial", "coloring", "density"):
        p = add(name, {"count": "exact solution counts over [N]^s",
                       "trivial": "solutions with x_u = x_v",
                       "coloring": "search for a colouring with no monochromatic solution",
                       "density": "solution counts over random dense sets"}[name], k=True)
        p.add_argument("--N", type=int, required=True)
        if name == "trivial":
            p.add_argument("--u", type=int, required=True)
            p.add_argument("--v", type=int, required=True)
        if name == "coloring":
            p.add_argument("--r", type=int, required=True)
            p.add_argument("--solutions", choices=("all", "nonconstant", "distinct"), default="nonconstant")
            p.add_argument("--budget", type=int, default=2_000_000)
        if name == "density":
            p.add_argument("--delta", type=_rational, required=True)
            p.add_argument("--trials", type=int, default=5)
    for name in ("mean-value", "moments"):
        p = add(name, "mean value N(k,t,N)" if name == "mean-value" else "moment by two routes",
                needs_input=False, k=True, k_required=True)
        p.add_argument("--t", type=int, required=True)
        p.add_argument("--N", type=int, required=True)
    p = add("syndetic", "multiplicative syndeticity and the density bound", needs_input=False)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--multiples", type=int, default=None, help="use the multiples of this number")
    p.add_argument("--strategy", choices=("random", "largest"), default="random")
    p = add("bohr", "Bohr set members, recurrence and syndetic constant")
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--phases", type=_rational, nargs="+")
    p.add_argument("--rho", type=_rational)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--C", type=_rational, default=Fraction(10))
    p.add_argument("--m0-cap", type=int, default=10_000)
    for name in ("wtrick", "transfer"):
        p = add(name, "W-trick parameters" if name == "wtrick" else "crude transfer inequality",
                needs_input=(name == "transfer"), k=True, k_required=True)
        p.add_argument("--w", type=int, required=True)
        p.add_argument("--N", type=int, required=True)
        p.add_argument("--zeta", type=int, default=1)
        p.add_argument("--xi", type=int, default=1)
        if name == "transfer":
            p.add_argument("--multiples", type=int, default=None, help="S = multiples of this number")
    p = add("psi", "auxiliary operator Psi on the indicator of [N]", k=True, k_required=True)
    p.add_argument("--B-set", dest="B_set", type=int, nargs="+", required=True)
    p.add_argument("--y", type=int, nargs="*")
    p.add_argument("--N", type=int, required=True)
    return parser


def _request_echo(args):
    skip = {"pretty", "inject_fault"}
    return {k: (str(v) if isinstance(v, Fraction) else
                [str(x) if isinstance(x, Fraction) else x for x in v] if isinstance(v, list) else v)
            for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    start = time.perf_counter()
    try:
        if args.inject_fault:
            raise InvariantViolation("fault injected on request")
        result = HANDLERS[args.command](args)
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=stderr)
        return 4
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=stderr)
        return 3
    except (InvalidInput, ValueError, KeyError, TypeError) as exc:
        print(f"invalid input: {exc}", file=stderr)
        return 2
    report = {"toolVersion": __version__, "request": _request_echo(args), "result": result,
              "timing": {"seconds": round(time.perf_counter() - start, 6)}}
    print(json.dumps(report, indent=2 if args.pretty else None, sort_keys=False), file=stdout)
    if args.pretty:
        print(f"{args.command}: done in {report['timing']['seconds']} s", file=stderr)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
