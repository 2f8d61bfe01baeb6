"""Command-line interface: validate / check / dilate / gen / verify.

Exit codes: 0 success (dilate: dilation verified), 1 mathematically invalid
instance, 2 parse/schema/I-O error, 3 not dilatable (window Gram not PSD),
4 dilatable but a verification check failed, 5 golden-file mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import lattice
from .dilation import (
    compare_minimal_dilations,
    kolmogorov,
    verify_doubly_commuting_V,
    verify_hat_doubly_commuting,
    verify_regular_dilation,
    window_gram,
)
from .errors import (
    DilationLabError,
    InstanceFormatError,
    InvalidArgumentError,
    NotPositiveDefiniteError,
    NotWellDefinedError,
)
from .families import FAMILIES, generate
from .hatspace import TruncatedFock, check_hat_semigroup
from .instances import Instance, digest, load_instance
from .linalg import opnorm
from .report import check_record, compare_reports, make_report, render
from .representation import brehmer_check_NS, doubly_commuting_check, validate_representation

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FORMAT = 2
EXIT_NOT_DILATABLE = 3
EXIT_CHECK_FAILED = 4
EXIT_GOLDEN_MISMATCH = 5

VALIDATION_TOL = 1e-10
DERIVED_TOL = 1e-8  # identities assembled through pseudo-inverses


def _parse_point(text: str, k: int, what: str) -> lattice.Point:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise InstanceFormatError(f"bad {what} {text!r}: expected comma-separated ints") from None
    if len(parts) == 1:
        parts = parts * k
    if len(parts) != k or any(p < 0 for p in parts):
        raise InstanceFormatError(f"bad {what} {text!r} for k={k}")
    return parts


def _resolve_params(inst: Instance, args) -> dict:
    k = inst.system.k
    params = dict(inst.parameters)
    if getattr(args, "L", None) is not None:
        params["L"] = list(_parse_point(args.L, k, "--L"))
    if getattr(args, "M", None) is not None:
        params["M"] = list(_parse_point(args.M, k, "--M"))
    if getattr(args, "guard", None) is not None:
        params["guard"] = args.guard
    if getattr(args, "tol", None) is not None:
        params["tol"] = args.tol
    if params.get("L") is None:
        params["L"] = [3] * k
    if params.get("M") is None:
        params["M"] = list(params["L"])
    params.setdefault("guard", 1)
    params.setdefault("tol", 1e-10)
    params.setdefault("NS_box", [2] * k)
    return params


def _validation_section(inst: Instance) -> tuple[dict, bool]:
    residuals = dict(inst.system.validation)
    residuals.update(validate_representation(inst.representation))
    worst = max(residuals.values(), default=0.0)
    return {k: float(v) for k, v in residuals.items()}, worst <= VALIDATION_TOL


def _check_section(inst: Instance, params: dict) -> tuple[dict, dict]:
    """Doubly-commuting residuals per generator pair and the Brehmer-type
    minimum eigenvalues over the configured box."""
    rep = inst.representation
    k = inst.system.k
    dc = {}
    for j in range(1, k + 1):
        for l in range(j + 1, k + 1):
            dc[f"{j},{l}"] = float(doubly_commuting_check(rep, j, l, 1, 1))
    ns_box = tuple(params.get("NS_box", [2] * k))
    ns = {}
    for v in _nonempty_subsets(k):
        for s in lattice.box(ns_box):
            if any(s[i - 1] == 0 for i in v):
                continue
            ns[f"v={list(v)},s={list(s)}"] = float(brehmer_check_NS(rep, v, s))
    return dc, ns


def _nonempty_subsets(k: int):
    from itertools import combinations

    for r in range(1, k + 1):
        yield from combinations(range(1, k + 1), r)


def _hat_checks(space: TruncatedFock) -> list[dict]:
    rep = space.rep
    bound = space.bound
    semi = 0.0
    for s in space.blocks:
        for t in space.blocks:
            semi = max(semi, check_hat_semigroup(space, s, t))
    tech = 0.0
    d_slice = space.block_slice(lattice.zero(len(bound)))
    for s in space.blocks:
        if lattice.is_zero(s):
            continue
        block = space.hat(s).matrix[d_slice, space.block_slice(s)]
        tech = max(tech, opnorm(block @ space.block_loc(s).factor - rep.t_raw(s)))
    return [check_record("hat_semigroup", semi), check_record("technology", tech)]


def run_pipeline(inst: Instance, command: str, params: dict) -> tuple[dict, int]:
    """Shared validate -> check -> dilate -> verify pipeline."""
    start = time.monotonic()
    checks: list[dict] = []
    verdicts: dict = {}
    window_section = None
    exit_code = EXIT_OK

    validation, valid = _validation_section(inst)
    verdicts["valid"] = valid
    extra = {"validation": validation}
    if not valid:
        exit_code = EXIT_INVALID
    elif command in ("check", "dilate"):
        dc, ns = _check_section(inst, params)
        extra["doubly_commuting"] = dc
        extra["NS"] = ns
        verdicts["doubly_commuting"] = all(v <= DERIVED_TOL for v in dc.values())
        ns_min = min(ns.values(), default=0.0)
        extra["NS_min_eigenvalue"] = ns_min
        verdicts["satisfies_NS"] = ns_min >= -VALIDATION_TOL

        if command == "dilate":
            tol = float(params["tol"])
            guard = int(params["guard"])
            space = TruncatedFock(inst.representation, params["L"])
            checks.extend(_hat_checks(space))
            k = inst.system.k
            if k >= 2 and verdicts["doubly_commuting"]:
                dc_hat = 0.0
                for j in range(1, k + 1):
                    for l in range(j + 1, k + 1):
                        dc_hat = max(dc_hat, verify_hat_doubly_commuting(space, j, l))
                checks.append(check_record("doubly_commuting_hat", dc_hat))
            window = window_gram(space, params["M"])
            window_section = {
                "M": list(window.bound),
                "rank": 0,
                "psd_margin": window.psd_margin,
            }
            verdicts["dilatable"] = window.psd_margin >= -tol
            if not verdicts["dilatable"]:
                verdicts["dilation_verified"] = False
                exit_code = EXIT_NOT_DILATABLE
            else:
                bundle = kolmogorov(window, tol=tol)
                window_section["rank"] = bundle.rank
                try:
                    for name, res in verify_regular_dilation(bundle, guard=guard).items():
                        checks.append(check_record(name, res))
                    if verdicts["doubly_commuting"]:
                        k = inst.system.k
                        dc_v = 0.0
                        for j in range(1, k + 1):
                            for l in range(j + 1, k + 1):
                                dc_v = max(dc_v, verify_doubly_commuting_V(bundle, j, l, guard=guard))
                        if k >= 2:
                            checks.append(check_record("doubly_commuting_V", dc_v))
                    alt = kolmogorov(window, tol=tol, method="chol")
                    checks.append(
                        check_record("uniqueness", compare_minimal_dilations(bundle, alt))
                    )
                except NotWellDefinedError as exc:
                    checks.append(check_record("V_semigroup", float("inf")))
                    print(f"dilation-lab: operator recovery failed: {exc}", file=sys.stderr)
                verdicts["dilation_verified"] = all(c["pass"] for c in checks)
                if not verdicts["dilation_verified"]:
                    exit_code = EXIT_CHECK_FAILED

    report = make_report(
        digest(inst.data),
        command,
        params,
        checks,
        verdicts,
        window=window_section,
        timing=round(time.monotonic() - start, 6),
    )
    report.update(extra)
    return report, exit_code


def _emit(report: dict, out: str | None) -> None:
    text = render(report)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path: str) -> Instance:
    return load_instance(path)


def _run_command(args, command: str) -> int:
    try:
        inst = _load(args.path)
    except InstanceFormatError as exc:
        print(f"dilation-lab: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (InvalidArgumentError, NotWellDefinedError) as exc:
        print(f"dilation-lab: invalid instance: {exc}", file=sys.stderr)
        report = make_report("", command, {}, [], {"valid": False})
        report["error"] = str(exc)
        _emit(report, getattr(args, "out", None))
        return EXIT_INVALID
    params = _resolve_params(inst, args)
    try:
        report, code = run_pipeline(inst, command, params)
    except (InvalidArgumentError, NotWellDefinedError) as exc:
        print(f"dilation-lab: invalid instance: {exc}", file=sys.stderr)
        report = make_report(digest(inst.data), command, params, [], {"valid": False})
        report["error"] = str(exc)
        _emit(report, getattr(args, "out", None))
        return EXIT_INVALID
    _emit(report, getattr(args, "out", None))
    return code


def cmd_validate(args) -> int:
    return _run_command(args, "validate")


def cmd_check(args) -> int:
    code = _run_command(args, "check")
    # check reports verdicts; a completed run exits 0 unless invalid/format
    return code if code in (EXIT_INVALID, EXIT_FORMAT) else EXIT_OK


def cmd_dilate(args) -> int:
    return _run_command(args, "dilate")


def cmd_gen(args) -> int:
    try:
        data = generate(args.family, seed=args.seed, k=args.k, dims=args.dims)
    except InvalidArgumentError as exc:
        print(f"dilation-lab: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.report, encoding="utf-8") as fh:
            reference = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"dilation-lab: cannot read reference report: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    try:
        inst = _load(args.path)
    except InstanceFormatError as exc:
        print(f"dilation-lab: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (InvalidArgumentError, NotWellDefinedError) as exc:
        print(f"dilation-lab: invalid instance: {exc}", file=sys.stderr)
        return EXIT_INVALID

    params = dict(reference.get("parameters") or {})
    for key, flag in (("L", "L"), ("M", "M")):
        if getattr(args, flag, None) is not None:
            params[key] = list(_parse_point(getattr(args, flag), inst.system.k, f"--{flag}"))
    command = reference.get("command", "dilate")
    full = dict(inst.parameters)
    full.update(params)
    if full.get("L") is None:
        full["L"] = [3] * inst.system.k
    if full.get("M") is None:
        full["M"] = list(full["L"])
    fresh, _code = run_pipeline(inst, command, full)
    ok, mismatches, warn = compare_reports(reference, fresh)
    for w in warn:
        print(f"dilation-lab: warning: {w}", file=sys.stderr)
    if not ok:
        for m in mismatches:
            print(f"dilation-lab: mismatch: {m}", file=sys.stderr)
        return EXIT_GOLDEN_MISMATCH
    _emit(fresh, getattr(args, "out", None))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dilation-lab",
        description="Numerical engine for product-system representations and "
        "their regular isometric dilations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_window=True):
        p.add_argument("path", help="instance JSON file")
        p.add_argument("--out", help="write the report JSON here instead of stdout")
        p.add_argument("--tol", type=float, help="validation/PSD tolerance (default 1e-10)")
        if with_window:
            p.add_argument("--L", help="truncation bound, e.g. 3 or 3,3")
            p.add_argument("--M", help="window bound, e.g. 3 or 3,3")
            p.add_argument("--guard", type=int, help="guard margin for adjoint checks (default 1)")

    p = sub.add_parser("validate", help="schema + mathematical validation only")
    add_common(p, with_window=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="doubly-commuting and Brehmer-type condition")
    add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dilate", help="full dilation pipeline with verification")
    add_common(p)
    p.set_defaults(func=cmd_dilate)

    p = sub.add_parser("gen", help="generate a deterministic family instance")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=2, help="number of generators")
    p.add_argument("--dims", type=int, help="family size parameter (H dim / block size)")
    p.add_argument("--out", help="write the instance JSON here instead of stdout")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="golden-file regression against a reference report")
    add_common(p)
    p.add_argument("--report", required=True, help="reference report JSON")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    # single-process implementation; the env var is an upper bound on
    # parallelism and a serial run always satisfies it
    threads = os.environ.get("DILATION_LAB_THREADS")
    if threads is not None:
        print(f"dilation-lab: thread cap {threads} (serial execution)", file=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotPositiveDefiniteError:  # pragma: no cover - handled in pipeline
        return EXIT_NOT_DILATABLE
    except DilationLabError as exc:
        print(f"dilation-lab: {exc}", file=sys.stderr)
        return EXIT_FORMAT


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
