"""Command-line interface: ``stabpar <command> --plant FILE [options]``.

Exit status is 0 on success, 1 on a negative verdict (unstabilizable
plant, non-stabilizing controller, singular parameter) and 2 on input
errors. Reports are JSON with sorted keys, so fixed inputs and seeds give
byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import sys

from .feedback import InconsistentFraction, compute_H
from .gef import all_gef_ideals, check_radical_equality, is_stabilizable
from .param import OmegaContext, SingularOmega, controllers_from_q, omega, sample_parameterization
from .parse import ParseError, parse_matrix, parse_problem
from .synthesis import Unstabilizable, controller_causality, synthesize, verify_controller

__all__ = ["main", "build_parser", "run"]


class InputError(Exception):
    pass


def _mat(M):
    return [[str(x) for x in row] for row in M.tolist()]


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


# descriptive flags that are reported but never count as failures
_INFO = ("plant_strictly_causal", "controller_causal", "controller_causality", "fallback_shifts")


def _checks(d):
    return [{"name": k, "passed": v} for k, v in sorted(d.items()) if isinstance(v, bool) and k not in _INFO]


def _info(d):
    return {k: d[k] for k in _INFO if k in d}


def _echo(pf, plant, args):
    out = {
        "ring": {"variables": list(pf.ring.variables), "order": pf.ring.order},
        "plant": _mat(pf.plant),
        "fraction": {
            "declared": plant.declared,
            "construction": "declared" if plant.declared else "diagonal column denominators",
            "N": _mat(plant.N),
            "D": _mat(plant.D),
        },
    }
    opts = {k: getattr(args, k) for k in ("count", "seed", "degree") if getattr(args, k, None) is not None}
    if opts:
        out["options"] = opts
    return out


def _certificate(cert):
    return {
        "omega": cert.omega,
        "entries": [
            {"I": list(I), "lambda": str(lam), "K": _mat(K), "a": str(a)}
            for I, lam, K, a in cert.entries
        ],
    }


def _synthesis_block(res):
    return {
        "index_sets": [list(I) for I in res.index_sets],
        "lambdas": [str(x) for x in res.lambdas],
        "a": [str(x) for x in res.coefficients],
        "omega": res.omega,
        "fallback_shifts": res.attempts - 1,
    }


def cmd_check(pf, plant, args):
    cert = is_stabilizable(plant)
    report = {"stabilizable": cert is not None, "verdict": "stabilizable" if cert else "unstabilizable"}
    checks = []
    if cert is not None:
        report["certificate"] = _certificate(cert)
        checks.append({"name": "sum_a_lambda_omega_is_one", "passed": bool(cert.check())})
    report["checks"] = checks
    return report, 0 if cert is not None else 1


def cmd_gef(pf, plant, args):
    Pt = plant.transpose()
    gefs = all_gef_ideals(plant)
    items, checks = [], []
    for g in gefs:
        rad = check_radical_equality(plant, g.I, Pt)
        items.append(
            {
                "I": list(g.I),
                "generators": [str(x) for x in g.generators],
                "witnesses": [_mat(K) for K in g.witnesses],
                "radical_equality": rad,
            }
        )
        checks.append({"name": f"radical_equality_I={list(g.I)}", "passed": rad})
        checks.append({"name": f"witnesses_I={list(g.I)}", "passed": bool(g.check())})
    stab = is_stabilizable(plant, gefs=gefs) is not None
    return {"verdict": "stabilizable" if stab else "unstabilizable", "stabilizable": stab, "gef": items, "checks": checks}, 0


def cmd_synthesize(pf, plant, args):
    try:
        res = synthesize(plant)
    except Unstabilizable:
        return {"verdict": "unstabilizable", "stabilizable": False, "checks": []}, 1
    return (
        {
            "verdict": "stabilized",
            "stabilizable": True,
            "certificate": _certificate(res.certificate),
            "synthesis": _synthesis_block(res),
            "controller": _mat(res.controller),
            "closed_loop": _mat(res.closed_loop.H),
            "properties": _info(res.report),
            "checks": _checks(res.report),
        },
        0,
    )


def cmd_parameterize(pf, plant, args):
    try:
        res = synthesize(plant)
    except Unstabilizable:
        return {"verdict": "unstabilizable", "stabilizable": False, "checks": []}, 1
    ctx = OmegaContext.from_synthesis(res)
    rep = sample_parameterization(plant, args.count, seed=args.seed, degree=args.degree, ctx=ctx)
    samples, checks = [], []
    for s in rep.samples:
        samples.append(
            {
                "candidate": s.index,
                "seed": s.seed,
                "Q": _mat(s.Q),
                "controller": _mat(s.controller),
                "closed_loop": _mat(s.closed_loop.H),
                "duplicate_of": s.duplicate_of,
                "properties": _info(s.checks),
                "checks": _checks(s.checks),
            }
        )
        checks.extend({"name": f"sample{s.index}_{c['name']}", "passed": c["passed"]} for c in _checks(s.checks))
    ok = len(rep.samples) == args.count
    return (
        {
            "verdict": "sampled" if ok else "incomplete",
            "reference_controller": _mat(res.controller),
            "reference_closed_loop": _mat(res.closed_loop.H),
            "samples": samples,
            "skipped": rep.skipped,
            "duplicates": [s.index for s in rep.samples if s.duplicate_of is not None],
            "checks": checks,
        },
        0 if ok else 1,
    )


def cmd_extract(pf, plant, args):
    if not args.q:
        raise InputError("extract needs --q FILE")
    Q = _parse_mat(args.q, pf.ring)
    k = plant.n + plant.m
    if Q.shape != (k, k):
        raise InputError(f"Q must be {k} x {k}, got {Q.shape[0]} x {Q.shape[1]}")
    if not Q.is_polynomial():
        raise InputError("Q must have polynomial entries")
    Q = Q.to_poly()
    try:
        res = synthesize(plant)
    except Unstabilizable:
        return {"verdict": "unstabilizable", "stabilizable": False, "checks": []}, 1
    ctx = OmegaContext.from_synthesis(res)
    W = omega(ctx, Q)
    try:
        C = controllers_from_q(ctx, Q)
    except SingularOmega:
        return {"verdict": "singular", "omega_Q": _mat(W), "checks": [{"name": "omega_nonsingular", "passed": False}]}, 1
    H = compute_H(plant, C)
    rep = verify_controller(plant, C, H)
    rep["H_equals_omega_Q"] = H.H == W
    return (
        {
            "verdict": "extracted",
            "reference_controller": _mat(res.controller),
            "Q": _mat(Q),
            "omega_Q": _mat(W),
            "controller": _mat(C),
            "closed_loop": _mat(H.H),
            "properties": _info(rep),
            "checks": _checks(rep),
        },
        0,
    )


def cmd_verify(pf, plant, args):
    if not args.c:
        raise InputError("verify needs --c FILE")
    C = _parse_mat(args.c, pf.ring)
    if C.shape != (plant.m, plant.n):
        raise InputError(f"controller must be {plant.m} x {plant.n}, got {C.shape[0]} x {C.shape[1]}")
    rep = verify_controller(plant, C)
    out = {
        "verdict": "stabilizing" if rep["stabilizing"] else "not stabilizing",
        "stabilizing": rep["stabilizing"],
        "controller": _mat(C),
        "controller_causality": controller_causality(C).value,
        "properties": _info(rep),
        "checks": _checks(rep),
    }
    if rep["loop_nonsingular"]:
        out["closed_loop"] = _mat(compute_H(plant, C).H)
    return out, 0 if rep["stabilizing"] else 1


COMMANDS = {
    "check": (cmd_check, "decide stabilizability and print a certificate"),
    "gef": (cmd_gef, "list every generalized elementary factor with witnesses"),
    "synthesize": (cmd_synthesize, "construct and verify a stabilizing controller"),
    "parameterize": (cmd_parameterize, "sample controllers from the Omega(Q) parameterization"),
    "extract": (cmd_extract, "controller whose closed loop is Omega(Q) for a given Q"),
    "verify": (cmd_verify, "test a given controller for stabilization and causality"),
}


def _parse_mat(path, ring):
    try:
        return parse_matrix(_read(path), ring)
    except ParseError as e:
        raise InputError(f"{path}: {e}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--plant", required=True, metavar="FILE", help="problem file ('-' for stdin)")
    common.add_argument("--ring", metavar="VARS", help="variables, e.g. 'z1 z2' (overrides the file)")
    common.add_argument("--json", metavar="PATH", help="also write the report to PATH")
    parser = argparse.ArgumentParser(prog="stabpar", description="Feedback stabilization over polynomial rings.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_)
        if name == "parameterize":
            p.add_argument("--count", type=int, default=5, metavar="N")
            p.add_argument("--seed", type=int, default=0, metavar="N")
            p.add_argument("--degree", type=int, default=1, metavar="N")
        if name == "extract":
            p.add_argument("--q", metavar="FILE", help="matrix file holding Q")
        if name == "verify":
            p.add_argument("--c", metavar="FILE", help="matrix file holding C")
    return parser


def run(args):
    """Execute parsed ``args``; returns ``(report_dict, exit_code)``."""
    try:
        pf = parse_problem(_read(args.plant), ring=args.ring)
        plant = pf.to_plant()
    except (ParseError, InconsistentFraction, InputError, ValueError) as e:
        return {"command": args.command, "verdict": "input error", "error": str(e), "checks": []}, 2
    if getattr(args, "count", 0) is not None and getattr(args, "count", 0) < 0:
        return {"command": args.command, "verdict": "input error", "error": "--count must be >= 0", "checks": []}, 2
    fn = COMMANDS[args.command][0]
    try:
        report, code = fn(pf, plant, args)
    except InputError as e:
        return {"command": args.command, "verdict": "input error", "error": str(e), "checks": []}, 2
    report["command"] = args.command
    report["input_echo"] = _echo(pf, plant, args)
    return report, code


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    report, code = run(args)
    text = dumps(report)
    sys.stdout.write(text)
    if args.json:
        try:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            sys.stderr.write(f"stabpar: cannot write {args.json}: {e.strerror}\n")
            return 2
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
