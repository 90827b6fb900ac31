"""Command-line surface.

Every command reads workbench JSON files, runs the corresponding operation,
and prints a canonical JSON report (sorted keys, two-space indent) on
standard output.  Exit codes: 0 success, 1 a validator produced a witness
or a check failed, 2 usage or input errors.  Pass --no-timing for
byte-reproducible reports.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from .algebra import (
    check_rota_baxter,
    star_product,
    validate_algebra,
    yau_twist,
    zero_rb,
)
from .bimodule import (
    regular_bimodule,
    validate_bimodule,
    validate_rbf_bimodule,
)
from .cochain import cohomology_dims, delta_op, equivariant_basis
from .deformation import (
    DeformationJet,
    NijenhuisFamily,
    check_jet,
    check_nijenhuis,
    deformed_product,
    psi_n,
    rigidity_report,
)
from .errors import InternalCheckError, MalformedInputError, ParseError, PreconditionError, WorkbenchError
from .extension import CocyclePair, build_extension, compare_extensions, extract_cocycle
from .gerstenhaber import algebra_with_product, mc_residual, mu_cochain
from .monoid import validate_monoid
from .rationals import Rat, format_rational
from .rbf import RbfContext, chain_map_check, combined_kernel, rbfa_cohomology_dims
from .search import DEFAULT_CAP, search_rbf
from .serialization import WorkbenchFile, parse_workbench, workbench_to_json

EXIT_OK = 0
EXIT_WITNESS = 1
EXIT_ERROR = 2


def _load(path: str) -> WorkbenchFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", path) from None
    return parse_workbench(text)


def _report_table(report) -> dict:
    return report.to_json()


def _need_algebra(wf: WorkbenchFile):
    if wf.algebra is None:
        raise MalformedInputError("file has no algebra block")
    return wf.algebra


def _context_from(wf: WorkbenchFile) -> RbfContext:
    a = _need_algebra(wf)
    if wf.rota_baxter is None:
        raise MalformedInputError("file has no rota_baxter block")
    if wf.bimodule is not None:
        bim = wf.bimodule
        if bim.tmap is None:
            raise MalformedInputError("bimodule block lacks the t family")
    else:
        bim = regular_bimodule(a, wf.rota_baxter)
    return RbfContext.validated(a, wf.rota_baxter, bim)


def cmd_validate(args) -> tuple[dict, int]:
    wf = _load(args.file)
    checks = {}
    violation = validate_monoid(wf.monoid)
    if violation is not None:
        return {"checks": {"monoid": violation.describe()}}, EXIT_WITNESS
    checks["monoid"] = "ok"
    witness = None
    if wf.algebra is not None:
        witness = validate_algebra(wf.algebra)
        checks["algebra"] = "ok" if witness is None else "witness"
    if witness is None and wf.algebra is not None and wf.rota_baxter is not None:
        witness = check_rota_baxter(wf.algebra, wf.rota_baxter)
        checks["rota_baxter"] = "ok" if witness is None else "witness"
    if witness is None and wf.bimodule is not None:
        witness = validate_bimodule(wf.bimodule)
        checks["bimodule"] = "ok" if witness is None else "witness"
        if witness is None and wf.bimodule.tmap is not None and wf.rota_baxter is not None:
            witness = validate_rbf_bimodule(wf.bimodule, wf.rota_baxter)
            checks["rbf_bimodule"] = "ok" if witness is None else "witness"
    out = {"checks": checks}
    if witness is not None:
        out["witness"] = witness.to_json()
        return out, EXIT_WITNESS
    return out, EXIT_OK


def cmd_cohomology(args) -> tuple[dict, int]:
    wf = _load(args.file)
    a = _need_algebra(wf)
    if args.complex == "alg":
        bim = wf.bimodule if wf.bimodule is not None else regular_bimodule(a)
        witness = validate_algebra(a)
        if witness is not None:
            return {"witness": witness.to_json()}, EXIT_WITNESS
        report = cohomology_dims(bim, args.max_degree)
        return {"tables": {"alg": _report_table(report)}}, EXIT_OK
    ctx = _context_from(wf)
    reports = rbfa_cohomology_dims(ctx, args.max_degree)
    if args.complex == "rbf":
        return {"tables": {"rbf": _report_table(reports["rbf"])}}, EXIT_OK
    return {"tables": {name: _report_table(rep) for name, rep in reports.items()}}, EXIT_OK


def cmd_mc_check(args) -> tuple[dict, int]:
    wf = _load(args.file)
    a = _need_algebra(wf)
    candidate = mu_cochain(a)
    residual = mc_residual(a, candidate, check=False)
    witness = validate_algebra(a)
    is_zero = residual.is_zero()
    if is_zero != (witness is None):
        raise InternalCheckError("bracket square and validator disagree")
    out = {"residual_zero": is_zero}
    if witness is not None:
        out["witness"] = witness.to_json()
        return out, EXIT_WITNESS
    return out, EXIT_OK


def cmd_star(args) -> tuple[dict, int]:
    wf = _load(args.file)
    a = _need_algebra(wf)
    if wf.rota_baxter is None:
        raise MalformedInputError("file has no rota_baxter block")
    star = star_product(a, wf.rota_baxter)
    witness = validate_algebra(star)
    if witness is not None:
        raise InternalCheckError(f"derived product failed validation: {witness.describe()}")
    out_wf = WorkbenchFile(wf.monoid, algebra=star, rota_baxter=wf.rota_baxter)
    return {"output": workbench_to_json(out_wf)}, EXIT_OK


def cmd_yau_twist(args) -> tuple[dict, int]:
    wf = _load(args.file)
    a = _need_algebra(wf)
    if wf.twist_p is None:
        raise MalformedInputError("file has no twist block")
    rb = wf.rota_baxter if wf.rota_baxter is not None else zero_rb(a)
    twisted, rb_out = yau_twist(a, rb, wf.twist_p, wf.twist_q)
    witness = validate_algebra(twisted)
    rb_witness = check_rota_baxter(twisted, rb_out) if witness is None else None
    out_wf = WorkbenchFile(wf.monoid, algebra=twisted, rota_baxter=rb_out)
    out = {"output": workbench_to_json(out_wf)}
    if witness is not None or rb_witness is not None:
        out["witness"] = (witness or rb_witness).to_json()
        return out, EXIT_WITNESS
    return out, EXIT_OK


def cmd_nijenhuis(args) -> tuple[dict, int]:
    wf = _load(args.file)
    a = _need_algebra(wf)
    if wf.nijenhuis is None:
        raise MalformedInputError("file has no nijenhuis block")
    witness = check_nijenhuis(a, NijenhuisFamily(wf.nijenhuis))
    if witness is not None:
        return {"nijenhuis": "witness", "witness": witness.to_json()}, EXIT_WITNESS
    deformed, hom_witness = deformed_product(a, NijenhuisFamily(wf.nijenhuis), check=False)
    deformed_witness = validate_algebra(deformed)
    _, psi_report = psi_n(a, wf.nijenhuis)
    out_wf = WorkbenchFile(wf.monoid, algebra=deformed)
    out = {
        "nijenhuis": "ok",
        "deformed_valid": deformed_witness is None,
        "homomorphism": hom_witness is None,
        "psi_zero": psi_report.psi_zero,
        "output": workbench_to_json(out_wf),
    }
    return out, EXIT_OK


def cmd_deform_check(args) -> tuple[dict, int]:
    wf = _load(args.file)
    ctx = _context_from(wf)
    if wf.jet is None:
        raise MalformedInputError("file has no jet block")
    jet = wf.jet
    if args.order is not None:
        if args.order > jet.order:
            raise MalformedInputError("requested order exceeds the jet's order")
        jet = DeformationJet(args.order, jet.mu_orders[: args.order], jet.r_orders[: args.order])
    report = check_jet(ctx, jet)
    out = {
        "equivariant": report.equivariant,
        "orders": [
            {"order": o.order, "associativity": o.associativity, "operator_identity": o.operator_identity}
            for o in report.orders
        ],
        "rigidity": rigidity_report(ctx).to_json(),
    }
    return out, EXIT_OK if report.all_ok() else EXIT_WITNESS


def cmd_extend(args) -> tuple[dict, int]:
    wf = _load(args.file)
    ctx = _context_from(wf)
    if wf.cocycle_pair is None:
        raise MalformedInputError("file has no cocycle_pair block")
    build = build_extension(ctx, wf.cocycle_pair)
    out_wf = WorkbenchFile(
        wf.monoid,
        algebra=wf.algebra,
        rota_baxter=wf.rota_baxter,
        bimodule=wf.bimodule,
        extension=build.presentation,
    )
    out = {
        "valid": build.valid(),
        "is_cocycle": build.is_cocycle,
        "output": workbench_to_json(out_wf),
    }
    if not build.valid():
        witness = build.algebra_witness or build.rb_witness
        out["witness"] = witness.to_json()
        return out, EXIT_WITNESS
    return out, EXIT_OK


def cmd_extract_cocycle(args) -> tuple[dict, int]:
    wf = _load(args.file)
    if wf.extension is None:
        raise MalformedInputError("file has no extension block")
    pair, bim = extract_cocycle(wf.extension)
    out_wf = WorkbenchFile(
        wf.monoid,
        algebra=wf.algebra,
        rota_baxter=wf.rota_baxter,
        bimodule=bim,
        cocycle_pair=pair,
    )
    return {"output": workbench_to_json(out_wf)}, EXIT_OK


def cmd_compare_ext(args) -> tuple[dict, int]:
    wf1 = _load(args.file1)
    wf2 = _load(args.file2)
    if wf1.extension is None or wf2.extension is None:
        raise MalformedInputError("both files need extension blocks")
    report = compare_extensions(wf1.extension, wf2.extension)
    out = {"cohomologous": report.cohomologous}
    if report.iso is not None:
        out["iso"] = {
            str(x): [[format_rational(m.at(i, j)) for j in range(m.cols)] for i in range(m.rows)]
            for x, m in report.iso.items()
        }
    return out, EXIT_OK if report.cohomologous else EXIT_WITNESS


def cmd_search_rbf(args) -> tuple[dict, int]:
    wf = _load(args.file)
    a = _need_algebra(wf)
    witness = validate_algebra(a)
    if witness is not None:
        return {"witness": witness.to_json()}, EXIT_WITNESS
    hits = search_rbf(a, args.bound, Rat(args.weight), cap=args.cap)
    out = {
        "count": len(hits),
        "families": [
            {
                str(x): [[format_rational(m.at(i, j)) for j in range(m.cols)] for i in range(m.rows)]
                for x, m in rb.maps.items()
            }
            for rb in hits
        ],
    }
    return out, EXIT_OK


def cmd_selftest(args) -> tuple[dict, int]:
    from . import samples
    from .cochain import random_equivariant

    rng = random.Random(args.seed)
    results = {}
    e1 = samples.build_e1()
    results["e1_valid"] = validate_algebra(e1) is None
    reg = regular_bimodule(e1)
    ok = True
    for n in range(0, 3):
        basis = equivariant_basis(reg, n)
        op_n = delta_op(reg, n)
        op_n1 = delta_op(reg, n + 1)
        for j in range(basis.dim()):
            img = op_n.apply_sparse(basis.cochain_sparse(j))
            if any(op_n1.apply_dense(img)):
                ok = False
    results["dd_zero_e1"] = ok
    ctx = samples.e1_rbf_context()
    results["chain_map_e1"] = chain_map_check(ctx, 2) is None
    kers = combined_kernel(ctx, 2)
    results["kernel_dim_2"] = len(kers)
    built = [build_extension(ctx, CocyclePair(k.alg, k.rbf)).valid() for k in kers]
    results["kernel_extensions_valid"] = all(built)
    trials = 0
    agreement = True
    for _ in range(args.samples):
        f = random_equivariant(reg, 2, rng)
        residual_zero = mc_residual(e1, f, check=False).is_zero()
        valid = validate_algebra(algebra_with_product(e1, f)) is None
        agreement = agreement and (residual_zero == valid)
        trials += 1
    results["mc_equivalence_trials"] = trials
    results["mc_equivalence"] = agreement
    all_ok = all(v is True for k, v in results.items() if isinstance(v, bool))
    return {"results": results, "seed": args.seed}, EXIT_OK if all_ok else EXIT_WITNESS


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bihomega", description=__doc__)
    parser.add_argument("--no-timing", action="store_true", help="omit the timing field")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate every block in a file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cohomology", help="cohomology dimension tables")
    p.add_argument("file")
    p.add_argument("--complex", choices=("alg", "rbf", "rbfa"), default="alg")
    p.add_argument("--max-degree", type=int, default=2)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("mc-check", help="bracket-square test of the product family")
    p.add_argument("file")
    p.set_defaults(func=cmd_mc_check)

    p = sub.add_parser("star", help="derived product from the operator family")
    p.add_argument("file")
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("yau-twist", help="twist an untwisted algebra by map families")
    p.add_argument("file")
    p.set_defaults(func=cmd_yau_twist)

    p = sub.add_parser("nijenhuis", help="check a Nijenhuis family and its deformed product")
    p.add_argument("file")
    p.set_defaults(func=cmd_nijenhuis)

    p = sub.add_parser("deform-check", help="order-by-order deformation identities")
    p.add_argument("file")
    p.add_argument("--order", type=int, default=None)
    p.set_defaults(func=cmd_deform_check)

    p = sub.add_parser("extend", help="build an extension from a cocycle pair")
    p.add_argument("file")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("extract-cocycle", help="extract the classifying pair of an extension")
    p.add_argument("file")
    p.set_defaults(func=cmd_extract_cocycle)

    p = sub.add_parser("compare-ext", help="decide whether two extensions share a class")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(func=cmd_compare_ext)

    p = sub.add_parser("search-rbf", help="bounded search for operator families")
    p.add_argument("file")
    p.add_argument("--bound", type=int, default=1)
    p.add_argument("--weight", default="0")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_search_rbf)

    p = sub.add_parser("selftest", help="run the built-in invariant battery")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--samples", type=int, default=25)
    p.set_defaults(func=cmd_selftest)

    return parser


def run_command(argv) -> tuple[dict, int]:
    """Dispatch a command line; returns (report, exit_code)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_ERROR
        return {"command": argv[:1] or [""], "status": "error", "error": "usage"}, (
            EXIT_ERROR if code != 0 else EXIT_OK
        )
    started = time.perf_counter()
    report = {"command": args.command}
    try:
        payload, code = args.func(args)
    except ParseError as exc:
        report.update({"status": "error", "error": f"parse error: {exc}"})
        code = EXIT_ERROR
    except (MalformedInputError, PreconditionError) as exc:
        report.update({"status": "error", "error": str(exc)})
        code = EXIT_ERROR
    except InternalCheckError as exc:
        report.update({"status": "error", "error": f"internal consistency failure: {exc}"})
        code = EXIT_ERROR
    except WorkbenchError as exc:
        report.update({"status": "error", "error": str(exc)})
        code = EXIT_ERROR
    else:
        report.update(payload)
        report["status"] = "ok" if code == EXIT_OK else ("witness" if code == EXIT_WITNESS else "error")
    if not args.no_timing:
        report["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
    return report, code


def render_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main() -> None:
    report, code = run_command(sys.argv[1:])
    sys.stdout.write(render_report(report))
    sys.exit(code)


if __name__ == "__main__":
    main()
