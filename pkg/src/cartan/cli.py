"""Command-line driver: validation, representations and theorem checks.

Every subcommand emits a deterministic line-oriented report (schema
``cartan-report/1``, documented in the README) and exits 0 when all
checks pass, 1 when a check fails, 2 on usage errors.  Randomized checks
draw from ``random.Random`` seeded by --seed (default 0), with draws in
the deterministic arrow order, so identical inputs give byte-identical
reports.
"""

import argparse
import hashlib
import os
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io as descio
from .algebra import AlgebraElement, convolve, involute, random_element
from .dirichlet import DirichletOrder, density_dimension, diagonal_intersection, validate_order
from .groupoid import validate
from .reps import (
    gns_cartan_check,
    gns_rep,
    invariant_lattice,
    isotropy_witnesses,
    norm_achievement,
    unique_extension_check,
)
from .semicrossed import (
    CrossedElement,
    FiniteDynamicalSystem,
    phi0_state,
    phi_functional,
    random_crossed,
    rho0_state,
    state_dichotomy,
)

SCHEMA = "cartan-report/1"
ENV_FIXTURES = "CARTAN_FIXTURES"
NORM_TOL = 1e-9
STATE_TOL = 1e-9
EXACT_TOL = 1e-12


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, complex):
        return f"{value.real:.12g}{value.imag:+.12g}j"
    return str(value)


@dataclass
class CheckRecord:
    name: str
    passed: bool
    values: list = field(default_factory=list)  # ordered (key, value) pairs
    witnesses: tuple = ()


@dataclass
class Report:
    command: str
    inputs: list = field(default_factory=list)  # ordered (key, value) pairs
    checks: list = field(default_factory=list)

    def add(self, name, passed, values=(), witnesses=()):
        self.checks.append(CheckRecord(name, passed, list(values), tuple(witnesses)))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self) -> str:
        lines = [f"schema: {SCHEMA}", f"command: {self.command}"]
        for key, value in self.inputs:
            lines.append(f"{key}: {_fmt(value)}")
        for check in self.checks:
            parts = [f"check: {check.name}", f"status={'pass' if check.passed else 'fail'}"]
            parts += [f"{k}={_fmt(v)}" for k, v in check.values]
            if check.witnesses:
                parts.append("witnesses=" + "|".join(str(w) for w in check.witnesses))
            lines.append(" ".join(parts))
        failed = sum(1 for c in self.checks if not c.passed)
        lines.append(f"summary: checks={len(self.checks)} passed={len(self.checks) - failed} failed={failed}")
        lines.append(f"result: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _resolve_spec(parser: argparse.ArgumentParser, raw: str, fixtures_flag: str | None) -> Path:
    root = Path(fixtures_flag or os.environ.get(ENV_FIXTURES, "fixtures"))
    candidates = [Path(raw), root / raw, root / (raw + ".json")]
    for candidate in candidates:
        if candidate.is_file():
            return candidate
    parser.error(f"cannot find description file {raw!r} (fixtures root: {root})")


def _load(parser: argparse.ArgumentParser, path: Path):
    try:
        spec = descio.load(path)
    except descio.ParseError as exc:
        parser.error(f"{path}: {exc}")
    try:
        groupoid = descio.to_groupoid(spec)
    except ValueError as exc:
        parser.error(f"{path}: {exc}")
    return spec, groupoid


def _validation_records(report: Report, prefix: str, validation) -> bool:
    if validation.ok:
        report.add(f"{prefix}-valid", True)
        return True
    for violation in validation.violations:
        report.add(f"{prefix}-{violation.kind}", False, [("message", violation.message)], violation.witnesses)
    return False


def _order_or_none(spec, groupoid, report: Report):
    """Validate the order block if present; always returns the raw arrows too."""
    arrows = descio.order_arrows(spec)
    if arrows is None:
        return None, None
    result = validate_order(groupoid, arrows)
    if isinstance(result, DirichletOrder):
        report.add("order-valid", True, [("strong", result.strong)])
        return result, arrows
    for violation in result.violations:
        report.add(f"order-{violation.kind}", False, [("message", violation.message)], violation.witnesses)
    return None, arrows


# -- subcommands ---------------------------------------------------------------


def _cmd_validate(parser, args) -> int:
    path = _resolve_spec(parser, args.spec, args.fixtures)
    spec, groupoid = _load(parser, path)
    report = Report("validate", [("input", path), ("digest", _digest(path.read_bytes()))])
    _validation_records(report, "groupoid", validate(groupoid))
    _order_or_none(spec, groupoid, report)
    if spec.system is not None:
        try:
            descio.to_system(spec)
            report.add("system-valid", True)
        except ValueError as exc:
            report.add("system-valid", False, [("message", str(exc))])
    print(report.render(), end="")
    return 0 if report.passed else 1


def _cmd_analyze(parser, args) -> int:
    path = _resolve_spec(parser, args.spec, args.fixtures)
    spec, groupoid = _load(parser, path)
    report = Report("analyze", [("input", path), ("digest", _digest(path.read_bytes()))])
    if not _validation_records(report, "groupoid", validate(groupoid)):
        print(report.render(), end="")
        return 1
    for orbit in groupoid.orbits():
        report.add(f"orbit[{orbit[0]}]", True, [("size", len(orbit)), ("points", ",".join(orbit))])
    for point in groupoid.units:
        witnesses = isotropy_witnesses(groupoid, point)
        report.add(f"isotropy[{point}]", not witnesses, [("trivial", not witnesses)])
    order, _ = _order_or_none(spec, groupoid, report)
    if order is not None:
        spanned, total = density_dimension(order)
        report.add("density", spanned == total, [("spanned", spanned), ("total", total)])
        report.add(
            "diagonal-intersection",
            True,
            [("size", len(diagonal_intersection(order))), ("units", len(groupoid.units))],
        )
    print(report.render(), end="")
    return 0 if report.passed else 1


def _cmd_rep(parser, args) -> int:
    path = _resolve_spec(parser, args.spec, args.fixtures)
    spec, groupoid = _load(parser, path)
    if args.point not in groupoid.units:
        parser.error(f"unknown point {args.point!r}")
    report = Report(
        "rep",
        [("input", path), ("digest", _digest(path.read_bytes())), ("point", args.point)],
    )
    rep = gns_rep(groupoid, None, args.point)
    report.add(
        "rep-built",
        True,
        [("dimension", rep.dimension), ("orbit", ",".join(rep.orbit))],
    )
    cartan = gns_cartan_check(rep)
    for check in cartan.checks:
        values = [(k, v) for k, v in check.details.items()]
        report.add(f"cartan-{check.name}", check.passed, values, check.witnesses)
    print(report.render(), end="")
    return 0 if report.passed else 1


def _cmd_nest_check(parser, args) -> int:
    path = _resolve_spec(parser, args.spec, args.fixtures)
    spec, groupoid = _load(parser, path)
    report = Report("nest-check", [("input", path), ("digest", _digest(path.read_bytes()))])
    order, raw_arrows = _order_or_none(spec, groupoid, report)
    if raw_arrows is None:
        parser.error(f"{path}: description has no order block")
    for orbit in groupoid.orbits():
        rep = gns_rep(groupoid, order, orbit[0])
        lattice = invariant_lattice(rep, order if order is not None else raw_arrows)
        witnesses = ()
        if lattice.incomparable is not None:
            witnesses = tuple("{" + ",".join(u) + "}" for u in lattice.incomparable)
        report.add(
            f"nest[{orbit[0]}]",
            lattice.is_nest,
            [("is_nest", lattice.is_nest), ("subspaces", len(lattice.subspaces))],
            witnesses,
        )
    print(report.render(), end="")
    return 0 if report.passed else 1


def _cmd_norm_check(parser, args) -> int:
    path = _resolve_spec(parser, args.spec, args.fixtures)
    spec, groupoid = _load(parser, path)
    report = Report(
        "norm-check",
        [
            ("input", path),
            ("digest", _digest(path.read_bytes())),
            ("trials", args.trials),
            ("seed", args.seed),
        ],
    )
    rng = random.Random(args.seed)
    max_deviation = 0.0
    worst = 0
    for trial in range(args.trials):
        result = norm_achievement(random_element(groupoid, rng))
        if result.deviation > max_deviation:
            max_deviation = result.deviation
            worst = trial
    report.add(
        "norm-achievement",
        max_deviation <= NORM_TOL,
        [("max_deviation", max_deviation), ("tolerance", NORM_TOL), ("worst_trial", worst)],
    )
    print(report.render(), end="")
    return 0 if report.passed else 1


def _cmd_extension_check(parser, args) -> int:
    path = _resolve_spec(parser, args.spec, args.fixtures)
    spec, groupoid = _load(parser, path)
    report = Report("extension-check", [("input", path), ("digest", _digest(path.read_bytes()))])
    for point in groupoid.units:
        unique = unique_extension_check(groupoid, point)
        report.add(f"extension[{point}]", unique, [("unique", unique)])
    print(report.render(), end="")
    return 0 if report.passed else 1


def _cmd_demo_semicrossed(parser, args) -> int:
    points = tuple(str(i) for i in range(1, args.size + 1))
    cycle = args.perm.split()
    if len(set(cycle)) != len(cycle) or not cycle:
        parser.error("--perm must list distinct points of the cycle")
    for label in cycle:
        if label not in points:
            parser.error(f"--perm names unknown point {label!r}")
    phi = {p: p for p in points}
    for i, label in enumerate(cycle):
        phi[label] = cycle[(i + 1) % len(cycle)]
    system = FiniteDynamicalSystem(points, phi)

    report = Report(
        "demo-semicrossed",
        [
            ("size", args.size),
            ("perm", " ".join(cycle)),
            ("trials", args.trials),
            ("seed", args.seed),
            ("digest", _digest(f"{args.size}|{' '.join(cycle)}|{args.trials}|{args.seed}".encode())),
        ],
    )
    base = points[0]
    dichotomy = state_dichotomy(system, base)
    p = dichotomy.period
    report.add(f"period[{base}]", True, [("period", p)])
    report.add(
        f"unique-extension[{base}]",
        not unique_extension_from_system(system, base),
        [("unique", unique_extension_from_system(system, base))],
    )
    report.add(
        f"rho0[U^{p}]",
        abs(dichotomy.rho0_on_witness) <= EXACT_TOL,
        [("value", dichotomy.rho0_on_witness)],
    )
    report.add(
        f"phi[U^{p}]",
        abs(dichotomy.phi_on_witness - 1.0) <= EXACT_TOL,
        [("value", dichotomy.phi_on_witness)],
    )
    report.add(
        f"phi0[U^{p}]",
        abs(dichotomy.phi0_on_witness - 0.5) <= EXACT_TOL,
        [("value", dichotomy.phi0_on_witness)],
    )
    report.add("distinct-extensions", dichotomy.distinct, [("distinct", dichotomy.distinct)])

    rng = random.Random(args.seed)
    max_excess = float("-inf")
    min_phi0 = float("inf")
    max_imag = 0.0
    for _ in range(args.trials):
        b = random_crossed(system, rng)
        positive = b.adjoint() * b
        rho = rho0_state(positive, base)
        phi = phi_functional(positive, base)
        phi0 = phi0_state(positive, base)
        max_excess = max(max_excess, abs(phi) - rho.real)
        min_phi0 = min(min_phi0, phi0.real)
        max_imag = max(max_imag, abs(rho.imag), abs(phi0.imag))
    report.add(
        "isotropy-inequality",
        max_excess <= STATE_TOL,
        [("max_excess", max_excess), ("trials", args.trials)],
    )
    report.add(
        "phi0-positivity",
        min_phi0 >= -STATE_TOL and max_imag <= STATE_TOL,
        [("min_value", min_phi0), ("max_imaginary", max_imag)],
    )
    print(report.render(), end="")
    return 0 if report.passed else 1


def unique_extension_from_system(system: FiniteDynamicalSystem, point: str) -> bool:
    """Evaluation extends uniquely iff the point is aperiodic: never, here."""
    return system.period(point) < 1


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cartan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spec_command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("spec", help="description file (path, or name under the fixtures root)")
        p.add_argument("--fixtures", help=f"fixtures root (default: ${ENV_FIXTURES} or ./fixtures)")
        p.set_defaults(func=func)
        return p

    add_spec_command("validate", _cmd_validate, "structural validation of a description")
    add_spec_command("analyze", _cmd_analyze, "orbits, isotropy and order diagnostics")
    rep = add_spec_command("rep", _cmd_rep, "representation summary and Cartan checks at a point")
    rep.add_argument("--point", required=True, help="base point of the representation")
    add_spec_command("nest-check", _cmd_nest_check, "invariant-lattice nest verdict per orbit")
    norm = add_spec_command("norm-check", _cmd_norm_check, "norm achievement over random elements")
    norm.add_argument("--trials", type=int, default=100)
    norm.add_argument("--seed", type=int, default=0)
    add_spec_command("extension-check", _cmd_extension_check, "unique state extension per point")

    demo = sub.add_parser("demo-semicrossed", help="state-extension dichotomy on a finite cycle")
    demo.add_argument("--size", type=int, required=True)
    demo.add_argument("--perm", required=True, help="cycle as space-separated point names, e.g. '1 2 3'")
    demo.add_argument("--trials", type=int, default=200)
    demo.add_argument("--seed", type=int, default=0)
    demo.set_defaults(func=_cmd_demo_semicrossed)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(parser, args)


if __name__ == "__main__":
    sys.exit(main())
