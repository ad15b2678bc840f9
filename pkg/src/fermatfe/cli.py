from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import numpy as np

from fermatfe.elliptic import equianharmonic_lattice, wp_zeros
from fermatfe.errors import FermatError
from fermatfe.expr import DEFAULT_POLE_GUARD, WP, Exp, Expr, Z, parse_sexpr, to_sexpr
from fermatfe.families import FAMILY_DESCRIPTIONS, FamilyKind, FamilySpec, eq5_forms, generate
from fermatfe.jsonio import complex_from_json, dump_document
from fermatfe.nevanlinna import (
    GrowthCurve,
    LatticeDoublePoles,
    NoPoles,
    PoleEnumerator,
    PreimageOfLattice,
    QuadratureConfig,
    characteristic,
    order_estimate,
    pole_enumerator_for,
    pole_enumerator_for_expr,
)
from fermatfe.verify import DEFAULT_TOLERANCE, ResidualReport, SamplePlan, check_eq6, check_eq7
from fermatfe.verify import verify_family

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
ENUMERATION_MARGIN = 1.01


@dataclass(frozen=True, slots=True)
class ResolvedFunction:
    label: str
    f: Expr
    enumerator: Optional[PoleEnumerator]
    default_radii: Optional[tuple[float, ...]] = None
    spec: Optional[FamilySpec] = None


def _presets() -> dict[str, ResolvedFunction]:
    omega = abs(equianharmonic_lattice().omega1)
    return {
        "exp": ResolvedFunction(
            "exp", Exp(Z), NoPoles(), tuple(np.linspace(5.0, 100.0, 20).tolist())
        ),
        "wp": ResolvedFunction(
            "wp",
            WP(Z),
            LatticeDoublePoles(),
            tuple(np.linspace(5.0 * omega, 25.0 * omega, 12).tolist()),
        ),
        "wp-exp": ResolvedFunction(
            "wp-exp",
            WP(Exp(Z)),
            PreimageOfLattice("exp", 1.0),
            tuple(np.linspace(2.0, 8.0, 8).tolist()),
        ),
    }


def _complex_arg(text: str) -> complex:
    try:
        return complex_from_json(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _expr_arg(text: str) -> Expr:
    try:
        return parse_sexpr(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_radii(text: str) -> tuple[float, ...]:
    """``r1,r2,...`` or ``start:stop:count`` (inclusive, evenly spaced)."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            return tuple(np.linspace(float(start), float(stop), int(count)).tolist())
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Bad radii {text!r}: {exc}") from exc


def _read_spec(text: str) -> FamilySpec:
    if text.lstrip().startswith("{"):
        return FamilySpec.from_json(text)
    return FamilySpec.from_json(Path(text).read_text(encoding="utf-8"))


def _add_plan_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rmin", type=float, default=0.5, help="Inner sample radius.")
    parser.add_argument("--rmax", type=float, default=3.0, help="Outer sample radius.")
    parser.add_argument("--count", type=int, default=500, help="Number of samples.")
    parser.add_argument("--seed", type=int, default=0, help="Sampler seed.")
    parser.add_argument("--pole-guard", type=float, default=DEFAULT_POLE_GUARD)
    parser.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE, help="Pass threshold.")


def _add_growth_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--fn",
        required=True,
        help="Preset (exp, wp, wp-exp), family spec (inline JSON or file) or s-expression.",
    )
    parser.add_argument("--radii", type=parse_radii, default=None)
    parser.add_argument("--quad-order", type=int, default=64)
    parser.add_argument("--tol", type=float, default=1e-6)
    parser.add_argument("--max-doublings", type=int, default=20)
    parser.add_argument("--pole-guard", type=float, default=DEFAULT_POLE_GUARD)
    parser.add_argument("--nudge", type=float, default=1e-3)
    parser.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fermatfe",
        description="Solution families, residual checks and Nevanlinna growth "
        "for Fermat-type functional equations.",
    )
    parser.add_argument("--db", type=Path, default=None, help="Record runs in this SQLite file")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("lattice-info", help="Print the equianharmonic lattice constants.")

    family = commands.add_parser("family", help="Generate or list solution families.")
    family_commands = family.add_subparsers(dest="family_command", required=True)
    gen = family_commands.add_parser("gen", help="Print the expressions of a family.")
    gen.add_argument("--spec", required=True, help="Family spec as inline JSON or a file.")
    family_commands.add_parser("list", help="List the family kinds.")

    verify = commands.add_parser("verify", help="Residual check of a family's equation.")
    verify.add_argument("--spec", required=True, help="Family spec as inline JSON or a file.")
    _add_plan_flags(verify)

    eq6 = commands.add_parser("eq6", help="Check the shift identity of the cubic form.")
    eq6.add_argument("--h", type=_expr_arg, default=Exp(Z), help="s-expression for h.")
    eq6.add_argument("--c", type=_complex_arg, required=True)
    eq6.add_argument("--eta", type=_complex_arg, default=1 + 0j)
    eq6.add_argument("--alpha", type=_complex_arg, default=0j)
    eq6.add_argument("--root-index", type=int, default=0, choices=(0, 1, 2))
    _add_plan_flags(eq6)

    eq7 = commands.add_parser("eq7", help="Check the cubic rearrangement identity.")
    eq7.add_argument("--h", type=_expr_arg, default=Exp(Z), help="s-expression for h.")
    eq7.add_argument("--f", type=_expr_arg, default=None, help="Defaults to the cubic form.")
    eq7.add_argument("--alpha", type=_complex_arg, default=0j)
    eq7.add_argument("--beta", type=_complex_arg, default=0j)
    _add_plan_flags(eq7)

    nevanlinna = commands.add_parser("nevanlinna", help="Print m, N and T at each radius.")
    _add_growth_flags(nevanlinna)
    nevanlinna.add_argument("--format", choices=("csv", "json"), default="csv")

    order = commands.add_parser("order", help="Fit the order of growth.")
    _add_growth_flags(order)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def _plan(args: argparse.Namespace) -> SamplePlan:
    return SamplePlan(
        r_min=args.rmin,
        r_max=args.rmax,
        count=args.count,
        seed=args.seed,
        pole_guard=args.pole_guard,
    )


def _quadrature(args: argparse.Namespace) -> QuadratureConfig:
    return QuadratureConfig(
        quad_order=args.quad_order,
        tol=args.tol,
        max_doublings=args.max_doublings,
        pole_guard=args.pole_guard,
        nudge=args.nudge,
        max_workers=args.workers,
    )


def resolve_function(
    text: str, radii: Optional[Sequence[float]], nudge: float
) -> ResolvedFunction:
    presets = _presets()
    if text in presets:
        return presets[text]
    reach = max(radii) * (1.0 + nudge) * ENUMERATION_MARGIN if radii else None
    if text.lstrip().startswith("{") or text.endswith(".json"):
        spec = _read_spec(text)
        if reach is None:
            return ResolvedFunction(spec.kind.value, generate(spec).f, None, spec=spec)
        return ResolvedFunction(
            spec.kind.value, generate(spec).f, pole_enumerator_for(spec, reach), spec=spec
        )
    expr = parse_sexpr(text)
    return ResolvedFunction(to_sexpr(expr), expr, pole_enumerator_for_expr(expr))


def _growth_curve(args: argparse.Namespace) -> tuple[GrowthCurve, QuadratureConfig]:
    config = _quadrature(args)
    resolved = resolve_function(args.fn, args.radii, config.nudge)
    radii = args.radii or resolved.default_radii
    if not radii or resolved.enumerator is None:
        raise argparse.ArgumentTypeError(f"--radii is required for --fn {args.fn!r}.")
    curve = characteristic(resolved.f, resolved.enumerator, radii, config, label=resolved.label)
    return curve, config


def _record(args: argparse.Namespace, action: Callable[[Any], None]) -> None:
    if args.db is None:
        return
    from fermatfe.store import StoreRepository, create_db, get_engine, get_session

    engine = create_db(get_engine(args.db))
    with get_session(engine) as session:
        action(StoreRepository(session))


def _emit_report(args: argparse.Namespace, command: str, report: ResidualReport) -> int:
    _record(args, lambda repo: repo.add_verification_run(report))
    print(dump_document({"command": command, **report.to_dict()}))
    if not report.passed:
        logger.error(
            "%s failed: max_rel %.3g > tol %.3g", command, report.max_rel, report.tolerance
        )
        return EXIT_FAILED
    return EXIT_OK


def _cmd_lattice_info(args: argparse.Namespace) -> int:
    lattice = equianharmonic_lattice()
    print(
        dump_document(
            {
                "command": "lattice-info",
                "omega1": lattice.omega1,
                "omega2": lattice.omega2,
                "area": lattice.area,
                "e1": lattice.e1,
                "half_period": lattice.half_period,
                "zeros": list(wp_zeros()),
                "config": {"g2": 0, "g3": 1},
            }
        )
    )
    return EXIT_OK


def _cmd_family(args: argparse.Namespace) -> int:
    if args.family_command == "list":
        families = [
            {"kind": kind.value, "description": FAMILY_DESCRIPTIONS[kind]}
            for kind in FamilyKind
        ]
        print(dump_document({"command": "family list", "families": families, "config": {}}))
        return EXIT_OK

    spec = _read_spec(args.spec)
    family = generate(spec)
    payload: dict[str, Any] = {
        "command": "family gen",
        "family": spec.kind.value,
        "mode": {"kind": family.mode.kind, "n": family.mode.n, "c": family.mode.c},
        "alpha": family.alpha,
        "beta": family.beta,
        "f": to_sexpr(family.f),
    }
    if family.g is not None:
        payload["g"] = to_sexpr(family.g)
    payload["notes"] = list(family.notes)
    payload["config"] = spec.to_dict()
    print(dump_document(payload))
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    family = generate(_read_spec(args.spec))
    report = verify_family(family, _plan(args), tolerance=args.tol)
    return _emit_report(args, "verify", report)


def _cmd_eq6(args: argparse.Namespace) -> int:
    report = check_eq6(
        args.h,
        args.c,
        args.eta,
        args.alpha,
        _plan(args),
        root_index=args.root_index,
        tolerance=args.tol,
    )
    report.parameters["h"] = to_sexpr(args.h)
    return _emit_report(args, "eq6", report)


def _cmd_eq7(args: argparse.Namespace) -> int:
    f = args.f
    if f is None:
        f, _ = eq5_forms(args.h, 1 + 0j, args.alpha, args.beta)
    report = check_eq7(f, args.h, args.alpha, args.beta, _plan(args), tolerance=args.tol)
    report.parameters["h"] = to_sexpr(args.h)
    report.parameters["f"] = to_sexpr(f)
    return _emit_report(args, "eq7", report)


def _cmd_nevanlinna(args: argparse.Namespace) -> int:
    curve, config = _growth_curve(args)
    _record(args, lambda repo: repo.add_growth_run(curve))
    if args.format == "csv":
        sys.stdout.write(curve.to_csv())
    else:
        payload = {"command": "nevanlinna", "fn": curve.label, **curve.to_dict()}
        payload["config"] = config.to_dict()
        print(dump_document(payload))
    return EXIT_OK


def _cmd_order(args: argparse.Namespace) -> int:
    curve, config = _growth_curve(args)
    estimate = order_estimate(curve)
    _record(args, lambda repo: repo.add_growth_run(curve, estimate))
    print(
        dump_document(
            {
                "command": "order",
                "fn": curve.label,
                **estimate.to_dict(),
                "records": curve.to_dict()["records"],
                "config": config.to_dict(),
            }
        )
    )
    return EXIT_OK


_COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "lattice-info": _cmd_lattice_info,
    "family": _cmd_family,
    "verify": _cmd_verify,
    "eq6": _cmd_eq6,
    "eq7": _cmd_eq7,
    "nevanlinna": _cmd_nevanlinna,
    "order": _cmd_order,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _configure_logging(args.verbose)

    try:
        return _COMMANDS[args.command](args)
    except argparse.ArgumentTypeError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FermatError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        # ValueError-derived errors are bad inputs; the rest are numeric failures
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
