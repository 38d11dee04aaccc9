"""Command-line front end."""

from __future__ import annotations

import argparse
import asyncio
from collections.abc import Sequence
from dataclasses import dataclass, field as dc_field
import logging
import sys
import time
from typing import Any

import voluptuous as vol

from .const import (
    DEFAULT_CUTOFF,
    DEFAULT_SEED,
    DIAGRAMS,
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_USAGE,
    MODE_G_LE_K,
    MODE_M,
    MODES,
    NODES,
    REALIZE_MODELS,
    REDUCTION_CASES,
    SPENCER_MAX_J,
    VERB_CLASSIFY,
    VERB_CONSTRUCT,
    VERB_GRADING,
    VERB_PROLONG,
    VERB_REALIZE,
    VERB_REDUCTIONS,
    VERB_SPENCER,
    VERB_VERIFY,
    VERBS,
)
from .diagnostics import build_diagnostics
from .exceptions import SuperProlongError, UsageError
from .liesuper import check_jacobi, invariant_form, j_invariant, killing_form
from .prolong import witness_search
from .realizations import realize
from .reductions import check_reductions
from .report import Report
from .roots import ParabolicSpec, SimpleSystem, cartan_matrix, render_diagram
from .spencer import h1_prolongation_consistency
from .storage import ReportStore
from .suite import async_run_checks, run_check, select_checks
from .workbench import Workbench, field_for, parse_point

_LOGGER = logging.getLogger(__name__)


def _crosses(value: Any) -> tuple[int, ...]:
    """Parse ``1,2,3`` into sorted distinct nodes."""
    if isinstance(value, (list, tuple)):
        parts = [str(v) for v in value]
    else:
        parts = str(value).split(",")
    try:
        nodes = sorted({int(p) for p in parts if p.strip()})
    except ValueError as err:
        raise vol.Invalid(f"crosses must be node numbers: {value!r}") from err
    if not nodes or not set(nodes) <= set(NODES):
        raise vol.Invalid(f"crosses must be a nonempty subset of {list(NODES)}")
    return tuple(nodes)


def _point(value: Any) -> dict[str, Any]:
    if value is None or isinstance(value, dict):
        return value or {}
    try:
        return parse_point(str(value))
    except UsageError as err:
        raise vol.Invalid(str(err)) from err


COMMON_OPTIONS = {
    vol.Required("verb"): vol.In(VERBS),
    vol.Optional("json", default=False): bool,
    vol.Optional("verbose", default=False): bool,
    vol.Optional("quiet", default=False): bool,
    vol.Optional("save", default=None): vol.Any(None, str),
    vol.Optional("eval", default=None): _point,
}

SPEC_OPTIONS = {
    vol.Required("diagram"): vol.In(DIAGRAMS),
    vol.Required("crosses"): _crosses,
}

VERB_SCHEMAS = {
    VERB_CONSTRUCT: vol.Schema(COMMON_OPTIONS),
    VERB_GRADING: vol.Schema({**COMMON_OPTIONS, **SPEC_OPTIONS}),
    VERB_CLASSIFY: vol.Schema(COMMON_OPTIONS),
    VERB_PROLONG: vol.Schema(
        {
            **COMMON_OPTIONS,
            **SPEC_OPTIONS,
            vol.Optional("mode", default=MODE_M): vol.In(MODES),
            vol.Optional("k", default=None): vol.Any(None, vol.All(vol.Coerce(int), vol.Range(min=0))),
            vol.Optional("cutoff", default=DEFAULT_CUTOFF): vol.All(vol.Coerce(int), vol.Range(min=0, max=20)),
        }
    ),
    VERB_SPENCER: vol.Schema(
        {
            **COMMON_OPTIONS,
            **SPEC_OPTIONS,
            vol.Optional("max_j", default=SPENCER_MAX_J): vol.All(vol.Coerce(int), vol.Range(min=0, max=4)),
        }
    ),
    VERB_REALIZE: vol.Schema(
        {
            **COMMON_OPTIONS,
            vol.Required("model"): vol.In(REALIZE_MODELS),
            vol.Optional("seed", default=DEFAULT_SEED): vol.Coerce(int),
        }
    ),
    VERB_REDUCTIONS: vol.Schema(
        {
            **COMMON_OPTIONS,
            vol.Required("case"): vol.In(REDUCTION_CASES),
        }
    ),
    VERB_VERIFY: vol.Schema(
        {
            **COMMON_OPTIONS,
            vol.Optional("all", default=False): bool,
            vol.Optional("only", default=list): vol.Any(None, [str]),
            vol.Optional("diagnostics", default=False): bool,
            vol.Optional("sequential", default=False): bool,
        }
    ),
}


@dataclass
class Command:
    """A verb with validated options."""

    verb: str
    options: dict[str, Any] = dc_field(default_factory=dict)

    @classmethod
    def from_options(cls, options: dict[str, Any]) -> Command:
        verb = options.get("verb")
        if verb not in VERB_SCHEMAS:
            raise UsageError(f"unknown verb {verb!r}")
        data = {k: v for k, v in options.items() if v is not None}
        try:
            clean = VERB_SCHEMAS[verb](data)
        except vol.Invalid as err:
            raise UsageError(f"invalid options for {verb}: {err!s}") from err
        if clean.get("verbose") and clean.get("quiet"):
            raise UsageError("--verbose and --quiet are exclusive")
        if verb == VERB_PROLONG and clean["mode"] == MODE_G_LE_K and clean["k"] is None:
            raise UsageError("--mode gk needs --k")
        if verb == VERB_VERIFY and not clean["all"] and not clean["only"]:
            raise UsageError("verify needs --all or --only NAME")
        return cls(verb, clean)

    @property
    def spec(self) -> ParabolicSpec:
        return ParabolicSpec(self.options["diagram"], frozenset(self.options["crosses"]))


@dataclass
class Outcome:
    """Handler result before it is wrapped into a Report."""

    payload: dict[str, Any]
    lines: list[str]
    locus: list[str] = dc_field(default_factory=list)
    ok: bool = True


def _workbench(cmd: Command) -> Workbench:
    return Workbench(field_for(cmd.options.get("eval")))


def _construct(cmd: Command) -> Outcome:
    wb = _workbench(cmd)
    gamma = wb.gamma
    field = wb.field
    violations = check_jacobi(gamma)
    killing_zero = killing_form(gamma).is_zero
    form = invariant_form(gamma)
    diagonal = {f"H{i}": field.format(form.by_name(f"H{i}", f"H{i}")) for i in NODES}
    j_value = field.format(j_invariant(field, *wb.s))
    payload = {
        "algebra": gamma.to_json(),
        "s": [field.format(s) for s in wb.s],
        "sdim": list(gamma.sdim),
        "jacobi_violations": len(violations),
        "killing_form_zero": killing_zero,
        "invariant_form": diagonal,
        "j_invariant": j_value,
    }
    lines = [
        f"Gamma({', '.join(payload['s'])}) over {field!r}: sdim ({gamma.sdim[0]}|{gamma.sdim[1]})",
        f"super-Jacobi: {'ok' if not violations else f'{len(violations)} violations'}",
        f"Killing form: {'zero' if killing_zero else 'nonzero'}",
        "B(H_i, H_i): " + ", ".join(f"{k}: {v}" for k, v in diagonal.items()),
        f"j-invariant: {j_value}",
    ]
    return Outcome(payload, lines, ok=not violations and killing_zero and gamma.sdim == (9, 8))


def _grading(cmd: Command) -> Outcome:
    wb = _workbench(cmd)
    spec = cmd.spec
    report = wb.grading(spec)
    system = SimpleSystem.standard(spec.diagram)
    diagram = render_diagram(system, cartan_matrix(system, wb.s, wb.field), wb.field, spec.crosses)
    payload = {**report.as_dict(), "diagram": diagram}
    lines = [diagram, f"{spec.label}: depth {report.depth}"]
    for k, (even, odd), names in report.levels:
        lines.append(f"  g_{k}: ({even}|{odd})  {' '.join(names)}")
    return Outcome(payload, lines)


def _classify(cmd: Command) -> Outcome:
    wb = _workbench(cmd)
    classification = wb.classification()
    rows = []
    lines = []
    for members in classification.classes:
        signature = classification.signatures[members[0]]
        depth, levels, _ = signature
        rows.append(
            {
                "members": [s.label for s in members],
                "depth": depth,
                "levels": [list(sdim) for sdim in levels],
            }
        )
        dims = ", ".join(f"{e}|{o}" for e, o in levels)
        lines.append(f"nu={depth} ({dims}): {' '.join(s.label for s in members)}")
    payload = {"classes": rows, "edges": [list(e) for e in classification.edges]}
    lines.append(f"{len(rows)} classes")
    return Outcome(payload, lines)


def _prolong(cmd: Command) -> Outcome:
    wb = _workbench(cmd)
    spec = cmd.spec
    opts = cmd.options
    k = opts["k"] if opts["mode"] == MODE_G_LE_K else None
    report = wb.prolongation(spec, mode=opts["mode"], k=k, cutoff=opts["cutoff"])
    payload = report.as_dict()
    lines = [f"{spec.label}, mode {report.mode}{'' if k is None else f' k={k}'}: m = ({report.m_sdim[0]}|{report.m_sdim[1]})"]
    for j, (even, odd), seeded in report.levels:
        lines.append(f"  pr_{j}: ({even}|{odd}){'  seeded' if seeded else ''}")
    if report.finite:
        lines.append(f"terminated at level {report.terminated_at}")
    else:
        lines.append(f"cutoff {report.cutoff} reached")
        witness = witness_search(wb.graded(spec))
        payload["witness"] = {"found": witness.found, "reason": witness.reason}
        lines.append(f"witness search: {witness.reason}")
    if report.locus:
        lines.append(f"valid for a outside {{0, -1}} and {report.locus}")
    return Outcome(payload, lines, report.locus.describe(), all(report.checks.values()))


def _spencer(cmd: Command) -> Outcome:
    wb = _workbench(cmd)
    spec = cmd.spec
    table = wb.cohomology(spec, j_max=cmd.options["max_j"])
    consistency = h1_prolongation_consistency(wb.graded(spec), table)
    payload = {**table.as_dict(), "consistency": consistency.as_dict()}
    lines = [f"Spencer cohomology of m({spec.label})"]
    for j in range(cmd.options["max_j"] + 1):
        lines.append(f"  H^{j} = {table.render(j)}")
    lines.extend(f"  {finding}" for finding in consistency.findings)
    ok = all(table.checks.values()) and consistency.ok
    return Outcome(payload, lines, table.locus.describe(), ok)


def _realize(cmd: Command) -> Outcome:
    report = realize(cmd.options["model"], cmd.options.get("eval") or None, seed=cmd.options["seed"])
    lines = [f"realization {report.model} at {report.point or 'default point'}"]
    lines.extend(f"  {'PASS' if ok else 'FAIL'} {name}" for name, ok in report.checks.items())
    lines.extend(f"  note: {note}" for note in report.notes)
    return Outcome(report.as_dict(), lines, ok=report.ok)


def _reductions(cmd: Command) -> Outcome:
    wb = _workbench(cmd)
    report = check_reductions(cmd.options["case"], wb.field)
    lines = [f"reductions for {report.case}"]
    lines.extend(f"  {'PASS' if ok else 'FAIL'} {name}" for name, ok in report.checks.items())
    lines.extend(f"  note: {note}" for note in report.notes)
    return Outcome(report.as_dict(), lines, ok=report.ok)


async def _verify(cmd: Command) -> Outcome:
    wb = _workbench(cmd)
    names = select_checks(None if cmd.options["all"] else cmd.options["only"])
    if cmd.options["sequential"]:
        results = [await asyncio.to_thread(run_check, wb, name) for name in names]
    else:
        results = await async_run_checks(wb, names)
    locus = sorted({factor for r in results for factor in r.locus})
    passed = sum(r.passed for r in results)
    payload: dict[str, Any] = {"checks": [r.as_dict() for r in results], "cache": wb.cache.get_stats()}
    lines = [r.line() for r in results]
    lines.append(f"{passed}/{len(results)} checks passed")
    outcome = Outcome(payload, lines, locus, passed == len(results))
    if cmd.options["diagnostics"]:
        preliminary = Report(cmd.verb, payload, locus, ok=outcome.ok)
        payload["diagnostics"] = build_diagnostics([preliminary], wb.cache, cmd.options.get("save"))
    return outcome


HANDLERS = {
    VERB_CONSTRUCT: _construct,
    VERB_GRADING: _grading,
    VERB_CLASSIFY: _classify,
    VERB_PROLONG: _prolong,
    VERB_SPENCER: _spencer,
    VERB_REALIZE: _realize,
    VERB_REDUCTIONS: _reductions,
}


async def async_dispatch(cmd: Command) -> tuple[Report, list[str]]:
    """Run a command; returns the report and its text rendering."""
    start = time.perf_counter()
    if cmd.verb == VERB_VERIFY:
        outcome = await _verify(cmd)
    else:
        outcome = await asyncio.to_thread(HANDLERS[cmd.verb], cmd)
    report = Report(cmd.verb, outcome.payload, outcome.locus, time.perf_counter() - start, outcome.ok)
    _LOGGER.info("%s", report.summary)
    save = cmd.options.get("save")
    if save:
        await ReportStore(save).async_save(_report_name(cmd), report)
    return report, outcome.lines


def dispatch(cmd: Command) -> Report:
    report, _ = asyncio.run(async_dispatch(cmd))
    return report


def _report_name(cmd: Command) -> str:
    opts = cmd.options
    if "diagram" in opts:
        name = f"{cmd.verb}-{cmd.spec.label}"
        if cmd.verb == VERB_PROLONG:
            name += f"-{opts['mode']}"
        return name
    for key in ("model", "case"):
        if key in opts:
            return f"{cmd.verb}-{opts[key]}"
    return cmd.verb


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--eval", metavar="a=p/q", help="work at a rational parameter point")
    common.add_argument("--save", metavar="DIR", help="store the report under DIR")
    common.add_argument("-v", "--verbose", action="store_true")
    common.add_argument("-q", "--quiet", action="store_true")

    spec = argparse.ArgumentParser(add_help=False)
    spec.add_argument("--diagram", required=True, help="Dynkin diagram I, II, III or IV")
    spec.add_argument("--crosses", required=True, metavar="i[,j[,k]]", help="crossed nodes")

    parser = argparse.ArgumentParser(prog="superprolong", description="D(2,1;a) prolongation workbench")
    sub = parser.add_subparsers(dest="verb", required=True)
    sub.add_parser(VERB_CONSTRUCT, parents=[common], help="build Gamma and check its identities")
    sub.add_parser(VERB_GRADING, parents=[common, spec], help="graded decomposition of a parabolic")
    sub.add_parser(VERB_CLASSIFY, parents=[common], help="classify the 28 parabolics")
    prolong = sub.add_parser(VERB_PROLONG, parents=[common, spec], help="Tanaka prolongation")
    prolong.add_argument("--mode", default=MODE_M, help="m, m-g0 or gk")
    prolong.add_argument("--k", help="top seeded degree for --mode gk")
    prolong.add_argument("--cutoff", default=DEFAULT_CUTOFF)
    spencer = sub.add_parser(VERB_SPENCER, parents=[common, spec], help="Spencer cohomology table")
    spencer.add_argument("--max-j", dest="max_j", default=SPENCER_MAX_J)
    realize_parser = sub.add_parser(VERB_REALIZE, parents=[common], help="check a geometric realization")
    realize_parser.add_argument("--model", required=True, help=", ".join(REALIZE_MODELS))
    realize_parser.add_argument("--seed", default=DEFAULT_SEED)
    reductions = sub.add_parser(VERB_REDUCTIONS, parents=[common], help="representation-theoretic reductions")
    reductions.add_argument("--case", required=True, help=", ".join(REDUCTION_CASES))
    verify = sub.add_parser(VERB_VERIFY, parents=[common], help="run the acceptance checks")
    verify.add_argument("--all", action="store_true")
    verify.add_argument("--only", action="append", metavar="NAME")
    verify.add_argument("--diagnostics", action="store_true")
    verify.add_argument("--sequential", action="store_true", help="run checks one at a time")
    return parser


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code == 0 else EXIT_USAGE
    try:
        cmd = Command.from_options(vars(args))
    except UsageError as err:
        print(f"superprolong: {err}", file=sys.stderr)
        return EXIT_USAGE
    setup_logging(cmd.options["verbose"], cmd.options["quiet"])
    try:
        report, lines = asyncio.run(async_dispatch(cmd))
    except UsageError as err:
        print(f"superprolong: {err}", file=sys.stderr)
        return EXIT_USAGE
    except SuperProlongError as err:
        _LOGGER.error("%s failed: %s", cmd.verb, err)
        witness = getattr(err, "witness", None)
        if witness is not None:
            print(f"witness: {witness}", file=sys.stderr)
        return EXIT_MISMATCH
    if cmd.options["json"]:
        print(report.to_json(indent=2))
    else:
        print("\n".join(lines))
    return EXIT_OK if report.ok else EXIT_MISMATCH
