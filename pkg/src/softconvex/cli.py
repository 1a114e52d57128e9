"""Command-line front end.

Exit codes: 0 when the checked property holds, 1 when it fails (a witness is
printed), 2 on usage or input-format errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .bases import SoftConvexBase, structure_from_cbase, validate_cbase
from .convexity import (
    DEFAULT_CAP,
    MODES,
    CrispConvexStructure,
    SoftConvexStructure,
    ValidationReport,
    Witness,
    induced_from_crisp,
    pointwise_hull,
    validate_crisp,
    validate_structure,
)
from .core import SoftFamily, SoftSet
from .document import Document, DocumentError, load, soft_set_entry
from .errors import SoftConvexError
from .morphisms import is_sbp, is_scc, is_scp, is_sdp
from .operators import (
    structure_from_cderived,
    structure_from_hull_operator,
    tabulate_hull,
    validate_cderived_operator,
    validate_hull_operator,
)
from .oracle import EnumerationBudget, enumerate_structures, make_space, verify_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(SoftConvexError):
    pass


@dataclass
class Report:
    command: str
    valid: bool = True
    witnesses: list[Any] = field(default_factory=list)
    counts: dict[str, Any] = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)
    text: str | None = None

    def fail_with(self, report: ValidationReport, names: dict[int, str]) -> None:
        self.valid = self.valid and report.valid
        for w in report.witnesses:
            self.witnesses.append((w, names))

    def to_json(self) -> str:
        witnesses = []
        for w in self.witnesses:
            if isinstance(w, tuple):
                witnesses.append(w[0].to_dict(w[1]))
            else:
                witnesses.append(w)
        obj = {"command": self.command, "valid": self.valid, "witnesses": witnesses, "counts": self.counts}
        if self.lines:
            obj["output"] = self.lines
        return json.dumps(obj, indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        if self.text is not None:
            return self.text
        out = [f"{self.command}: {'valid' if self.valid else 'invalid'}"]
        for w in self.witnesses:
            if isinstance(w, tuple):
                out.append("witness " + w[0].describe(w[1]))
            elif isinstance(w, dict):
                out.append("witness " + json.dumps(w, ensure_ascii=False, sort_keys=True))
            else:
                out.append(f"witness {w}")
        out.extend(self.lines)
        return "\n".join(out)


# -- helpers ---------------------------------------------------------------------

def _show(s: SoftSet, names: dict[int, str]) -> str:
    return names.get(s.mask) or str(s)


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required for this command")
    return value


def _structure_or_report(doc: Document, name: str, report: Report, mode: str, cap: int):
    family = doc.family(name)
    vr = validate_structure(family, mode=mode, cap=cap)
    if not vr.valid:
        report.fail_with(vr, doc.names_by_mask())
        return None
    return SoftConvexStructure(family, vr)


def _member_lines(structure: SoftConvexStructure, names: dict[int, str]) -> list[str]:
    return [_show(s, names) for s in SoftFamily(structure.space, tuple(sorted(structure.masks)))]


# -- commands ----------------------------------------------------------------------

def cmd_validate(args) -> Report:
    doc = load(args.document)
    report = Report("validate")
    family = doc.family(_require(args.family, "--family"))
    vr = validate_structure(family, mode=args.mode, cap=args.cap)
    report.fail_with(vr, doc.names_by_mask())
    report.counts = {"members": len(family)}
    return report


def cmd_validate_base(args) -> Report:
    doc = load(args.document)
    report = Report("validate-base")
    family = doc.family(_require(args.family, "--family"))
    vr = validate_cbase(family, mode=args.mode, cap=args.cap)
    report.fail_with(vr, doc.names_by_mask())
    report.counts = {"members": len(family)}
    return report


def cmd_validate_operator(args) -> Report:
    doc = load(args.document)
    report = Report("validate-operator")
    op = doc.operator(_require(args.operator, "--operator"))
    check = validate_hull_operator if args.kind == "hull" else validate_cderived_operator
    report.fail_with(check(op, mode=args.mode, cap=args.cap), doc.names_by_mask())
    report.counts = {"entries": len(op)}
    return report


def _hull_command(args, command: str) -> Report:
    doc = load(args.document)
    report = Report(command)
    structure = _structure_or_report(doc, _require(args.family, "--family"), report, args.mode, args.cap)
    if structure is None:
        return report
    target = doc.soft_set(_require(args.target, "--target"))
    names = doc.names_by_mask()
    if command == "hull":
        result = SoftSet(doc.space, structure.hull_mask(target.mask))
    else:
        result = pointwise_hull(structure, target)
        report.counts = {"member": int(result.mask in structure.members.mask_set)}
    report.lines = [_show(result, names)]
    return report


def cmd_hull(args) -> Report:
    return _hull_command(args, "hull")


def cmd_pointwise_hull(args) -> Report:
    return _hull_command(args, "pointwise-hull")


def cmd_slice(args) -> Report:
    doc = load(args.document)
    report = Report("slice")
    family = doc.family(_require(args.family, "--family"))
    e = _require(args.param, "--param")
    doc.space.check_parameter(e)
    crisp = CrispConvexStructure(doc.space.universe, [s[e] for s in family])
    report.fail_with(validate_crisp(crisp.universe, crisp.members), {})
    report.counts = {"members": len(crisp)}
    report.lines = crisp.format_members()
    return report


def _load_crisp(path: str) -> tuple[list[str], list[list[str]]]:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    if not (isinstance(obj, dict) and isinstance(obj.get("universe"), list) and isinstance(obj.get("sets"), list)):
        raise DocumentError(f"{path}: expected an object with 'universe' and 'sets'")
    return obj["universe"], obj["sets"]


def cmd_induce(args) -> Report:
    doc = load(args.document)
    report = Report("induce")
    universe, sets = _load_crisp(_require(args.crisp, "--crisp"))
    if list(universe) != list(doc.universe):
        raise DocumentError("crisp universe differs from the document universe")
    vr = validate_crisp(universe, sets)
    if not vr.valid:
        report.fail_with(vr, {})
        return report
    upsilon = CrispConvexStructure(universe, sets)
    structure = induced_from_crisp(upsilon, doc.parameters, single_set=args.single_set)
    report.counts = {"crisp": len(upsilon), "members": len(structure)}
    report.lines = _member_lines(structure, doc.names_by_mask())
    return report


def cmd_generate(args) -> Report:
    doc = load(args.document)
    report = Report("generate")
    names = doc.names_by_mask()
    if args.source == "base":
        family = doc.family(_require(args.family, "--family"))
        vr = validate_cbase(family, mode=args.mode, cap=args.cap)
        if not vr.valid:
            report.fail_with(vr, names)
            return report
        structure = structure_from_cbase(SoftConvexBase(family, vr), mode=args.mode, cap=args.cap)
    else:
        op = doc.operator(_require(args.operator, "--operator"))
        vr = (validate_hull_operator if args.kind == "hull" else validate_cderived_operator)(op, args.mode, args.cap)
        if not vr.valid:
            report.fail_with(vr, names)
            return report
        structure = structure_from_hull_operator(op) if args.kind == "hull" else structure_from_cderived(op)
    report.counts = {"members": len(structure)}
    report.lines = _member_lines(structure, names)
    return report


def cmd_check_fn(args) -> Report:
    doc = load(args.document)
    prop = args.property.upper()
    report = Report("check-fn")
    f, codoc = doc.function(_require(args.function, "--function"))
    if prop == "SDP":
        src_name = _require(args.operator, "--operator")
        d_x = doc.operator(src_name)
        d_y = codoc.operator(args.codomain_operator or src_name)
        result = is_sdp(f, d_x, d_y)
    else:
        src_name = _require(args.family, "--family")
        fx = doc.family(src_name)
        fy = codoc.family(args.codomain_family or src_name)
        if prop == "SBP":
            sides = [validate_cbase(fx, args.mode, args.cap), validate_cbase(fy, args.mode, args.cap)]
        else:
            sides = [validate_structure(fx, args.mode, args.cap), validate_structure(fy, args.mode, args.cap)]
        for vr, d in zip(sides, (doc, codoc)):
            if not vr.valid:
                raise UsageError(f"{'domain' if d is doc else 'codomain'} family is not a valid "
                                 f"{'base' if prop == 'SBP' else 'structure'}: {vr.first.describe(d.names_by_mask())}")
        if prop == "SBP":
            result = is_sbp(f, SoftConvexBase(fx, sides[0]), SoftConvexBase(fy, sides[1]))
        else:
            check = is_scp if prop == "SCP" else is_scc
            result = check(f, SoftConvexStructure(fx, sides[0]), SoftConvexStructure(fy, sides[1]))
    report.valid = result.holds
    if not result.holds:
        w = result.witness
        on_codomain = prop in ("SCP", "SBP")
        names = (codoc if on_codomain else doc).names_by_mask()
        report.witnesses.append((Witness(prop, (w,), None, result.detail), names))
    return report


def cmd_enumerate(args) -> Report:
    report = Report("enumerate")
    budget = EnumerationBudget(
        max_universe=args.max_elems, max_parameters=args.max_params, seed=args.seed,
        max_structures=args.max_structures,
    )
    lines = []
    for n in range(1, args.max_elems + 1):
        for m in range(1, args.max_params + 1):
            space = make_space(n, m)
            strategy = args.strategy
            if strategy == "auto":
                strategy = "filter" if (1 << space.n_bits) <= budget.max_family_bits else "generator"
            found = enumerate_structures(space, budget, strategy=strategy, workers=args.workers)
            key = f"{n}x{m}"
            report.counts[key] = len(found)
            lines.append(f"{key}: {len(found)} ({strategy})")
    report.lines = lines
    return report


def cmd_verify_suite(args) -> Report:
    budget = EnumerationBudget(
        max_universe=args.elems, max_parameters=args.params, seed=args.seed,
        max_pairs=args.max_pairs, max_structures=args.max_structures,
    )
    space = make_space(args.elems, args.params)
    injected = {}
    if args.inject:
        doc = load(args.inject)
        if doc.space != space:
            raise DocumentError(f"injected document must live on the {args.elems}x{args.params} space "
                                f"with elements {list(space.universe)} and parameters {list(space.parameters)}")
        for name in args.family or sorted(doc.families):
            injected[name] = doc.family(name)
    suite = verify_suite(space, budget, injected=injected, morphisms=not args.no_morphisms)
    report = Report("verify-suite")
    report.valid = suite.ok and all(item["valid"] for item in suite.rejected)
    report.counts = {k: {"passed": p, "failed": f} for k, (p, f) in sorted(suite.counts.items())}
    report.counts["structures"] = suite.structures
    report.witnesses = [{"check": k, "witness": w} for k, w in sorted(suite.witnesses.items())]
    report.witnesses += [{"check": f"inject:{r['name']}", "witness": r["witness"]} for r in suite.rejected if not r["valid"]]
    report.text = suite.to_text()
    return report


# -- parser ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, document: bool = True) -> None:
    if document:
        p.add_argument("document", help="JSON document")
    p.add_argument("--mode", choices=MODES, default="fast")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="subfamily cap for literal mode")
    p.add_argument("--out", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="softconvex", description="Check soft convex structures and related objects.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a family as a structure")
    _add_common(p)
    p.add_argument("--family")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("validate-base", help="validate a family as a base")
    _add_common(p)
    p.add_argument("--family")
    p.set_defaults(run=cmd_validate_base)

    p = sub.add_parser("validate-operator", help="check hull or c-derived operator laws")
    _add_common(p)
    p.add_argument("--operator")
    p.add_argument("--kind", choices=("hull", "derived"), default="hull")
    p.set_defaults(run=cmd_validate_operator)

    for name, fn in (("hull", cmd_hull), ("pointwise-hull", cmd_pointwise_hull)):
        p = sub.add_parser(name, help=f"{name.replace('-', ' ')} of a named soft set")
        _add_common(p)
        p.add_argument("--family")
        p.add_argument("--target")
        p.set_defaults(run=fn)

    p = sub.add_parser("slice", help="crisp family at one parameter")
    _add_common(p)
    p.add_argument("--family")
    p.add_argument("--param")
    p.set_defaults(run=cmd_slice)

    p = sub.add_parser("induce", help="structure induced by a crisp convexity")
    _add_common(p)
    p.add_argument("--crisp", help="JSON file with 'universe' and 'sets'")
    p.add_argument("--single-set", action="store_true", help="keep only constant assignments")
    p.set_defaults(run=cmd_induce)

    p = sub.add_parser("generate", help="structure generated by a base or an operator")
    _add_common(p)
    p.add_argument("--from", dest="source", choices=("base", "operator"), required=True)
    p.add_argument("--family")
    p.add_argument("--operator")
    p.add_argument("--kind", choices=("hull", "derived"), default="hull")
    p.set_defaults(run=cmd_generate)

    p = sub.add_parser("check-fn", help="check a preservation property of a soft function")
    _add_common(p)
    p.add_argument("--function")
    p.add_argument("--property", choices=("scp", "scc", "sdp", "sbp"), type=str.lower, required=True)
    p.add_argument("--family", help="domain family (structure or base)")
    p.add_argument("--codomain-family", help="codomain family; defaults to the --family name")
    p.add_argument("--operator", help="domain operator for sdp")
    p.add_argument("--codomain-operator", help="codomain operator; defaults to the --operator name")
    p.set_defaults(run=cmd_check_fn)

    p = sub.add_parser("enumerate", help="count structures on small spaces")
    _add_common(p, document=False)
    p.add_argument("--max-elems", type=int, required=True)
    p.add_argument("--max-params", type=int, required=True)
    p.add_argument("--strategy", choices=("auto", "filter", "generator"), default="auto")
    p.add_argument("--max-structures", type=int, default=400)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(run=cmd_enumerate)

    p = sub.add_parser("verify-suite", help="run every law over enumerated structures")
    _add_common(p, document=False)
    p.add_argument("--elems", type=int, default=2)
    p.add_argument("--params", type=int, default=2)
    p.add_argument("--max-pairs", type=int, default=200)
    p.add_argument("--max-structures", type=int, default=400)
    p.add_argument("--no-morphisms", action="store_true")
    p.add_argument("--inject", help="document whose families are validated alongside the suite")
    p.add_argument("--family", action="append", help="family of --inject to check (repeatable)")
    p.set_defaults(run=cmd_verify_suite)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with redirect_stdout(stdout), redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if getattr(args, "cap", DEFAULT_CAP) < 1:
            raise UsageError("--cap must be positive")
        report = args.run(args)
    except (SoftConvexError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    print(report.to_json() if args.out == "json" else report.to_text(), file=stdout)
    return EXIT_OK if report.valid else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
