"""Operators on soft sets as total tables, their law checks and induced structures."""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from math import comb
from typing import Callable, Mapping, Sequence

from .convexity import (
    DEFAULT_CAP,
    SoftConvexStructure,
    ValidationReport,
    Witness,
    _check_mode,
)
from .core import SoftFamily, SoftSet, Space, masks_upward_directed
from .errors import BudgetExceeded, InvalidOperator, SpaceMismatch, TableIncomplete

__all__ = [
    "OperatorTable",
    "MAX_TABLE_BITS",
    "tabulate_hull",
    "identity_operator",
    "constant_null_operator",
    "derived_point_operator",
    "threshold_operator",
    "validate_hull_operator",
    "validate_cderived_operator",
    "structure_from_hull_operator",
    "structure_from_cderived",
    "cderived_image_family",
    "hull_from_cderived",
    "directed_families",
]

MAX_TABLE_BITS = 16
# Upper bound on subfamilies generated for literal directed-additivity scans.
MAX_LITERAL_CANDIDATES = 2_000_000


def _check_bits(space: Space) -> None:
    if space.n_bits > MAX_TABLE_BITS:
        raise BudgetExceeded(
            f"operator tables need |X|*|E| <= {MAX_TABLE_BITS}, got {space.n_bits}"
        )


class OperatorTable:
    """A total map on the soft sets of a space, stored as a list indexed by mask."""

    def __init__(self, space: Space, outputs: Sequence[int]):
        _check_bits(space)
        size = 1 << space.n_bits
        outputs = tuple(outputs)
        if len(outputs) != size:
            raise TableIncomplete(f"table has {len(outputs)} entries, space needs {size}")
        full = space.full_mask
        for m in outputs:
            if not 0 <= m <= full:
                raise SpaceMismatch(f"output mask {m} is not a soft set of the space")
        self.space = space
        self.outputs = outputs

    @classmethod
    def from_function(cls, space: Space, fn: Callable[[SoftSet], SoftSet]) -> OperatorTable:
        _check_bits(space)
        out = []
        for m in range(1 << space.n_bits):
            r = fn(SoftSet(space, m))
            if r.space != space:
                raise SpaceMismatch("operator output lives on a different space")
            out.append(r.mask)
        return cls(space, out)

    @classmethod
    def from_mapping(cls, space: Space, entries: Mapping[SoftSet, SoftSet]) -> OperatorTable:
        _check_bits(space)
        table: dict[int, int] = {}
        for k, v in entries.items():
            if k.space != space or v.space != space:
                raise SpaceMismatch("operator entry lives on a different space")
            table[k.mask] = v.mask
        missing = [m for m in range(1 << space.n_bits) if m not in table]
        if missing:
            raise TableIncomplete(
                f"operator undefined on {len(missing)} soft sets, first {SoftSet(space, missing[0])}"
            )
        return cls(space, [table[m] for m in range(1 << space.n_bits)])

    def __call__(self, s: SoftSet) -> SoftSet:
        if s.space != self.space:
            raise SpaceMismatch("soft set lives on a different space")
        return SoftSet(self.space, self.outputs[s.mask])

    def __len__(self) -> int:
        return len(self.outputs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorTable):
            return NotImplemented
        return self.space == other.space and self.outputs == other.outputs

    def __hash__(self) -> int:
        return hash((self.space, self.outputs))

    def __repr__(self) -> str:
        return f"OperatorTable({len(self)} entries on {self.space!r})"

    def items(self):
        for m, r in enumerate(self.outputs):
            yield SoftSet(self.space, m), SoftSet(self.space, r)

    @cached_property
    def hull_report(self) -> ValidationReport:
        return validate_hull_operator(self)

    @cached_property
    def cderived_report(self) -> ValidationReport:
        return validate_cderived_operator(self)


def tabulate_hull(structure: SoftConvexStructure) -> OperatorTable:
    """The hull operator of a stored structure, as a table."""
    space = structure.space
    _check_bits(space)
    cache = structure.__dict__.get("_hull_table")
    if cache is None:
        cache = structure.__dict__["_hull_table"] = OperatorTable(
            space, [structure.hull_mask(m) for m in range(1 << space.n_bits)]
        )
    return cache


def identity_operator(space: Space) -> OperatorTable:
    return OperatorTable(space, range(1 << space.n_bits))


def constant_null_operator(space: Space) -> OperatorTable:
    return OperatorTable(space, [0] * (1 << space.n_bits))


def derived_point_operator(structure: SoftConvexStructure) -> OperatorTable:
    """Points of ``s`` that the hull of ``s`` minus that point still reaches.

    Together with ``s`` this gives back the hull, so the table is a
    c-derived operator inducing ``structure`` that is generally not the hull.
    """
    space = structure.space
    _check_bits(space)
    hull = tabulate_hull(structure).outputs
    out = []
    for m in range(1 << space.n_bits):
        h = hull[m]
        d = h & ~m
        rest = m
        while rest:
            low = rest & -rest
            rest ^= low
            if hull[m ^ low] & low:
                d |= low
        out.append(d)
    return OperatorTable(space, out)


def threshold_operator(space: Space, threshold: SoftSet) -> OperatorTable:
    """Null below ``threshold``, absolute elsewhere."""
    if threshold.space != space:
        raise SpaceMismatch("threshold lives on a different space")
    _check_bits(space)
    t = threshold.mask
    full = space.full_mask
    return OperatorTable(space, [0 if m & ~t == 0 else full for m in range(1 << space.n_bits)])


# -- law checks -----------------------------------------------------------------

def _covers(n_bits: int):
    """Pairs (m, m | bit) with bit not in m; monotone on covers means monotone."""
    for m in range(1 << n_bits):
        rest = ~m & ((1 << n_bits) - 1)
        while rest:
            low = rest & -rest
            rest ^= low
            yield m, m | low


_DIRECTED_CACHE: dict[tuple[int, int], list[tuple[tuple[int, ...], int]]] = {}


def directed_families(n_bits: int, cap: int) -> list[tuple[tuple[int, ...], int]]:
    """Every upward directed family of at most ``cap`` soft sets, with its union.

    Candidate subfamilies are enumerated by brute force and directedness is
    checked pairwise, so this is only feasible on very small spaces.
    """
    key = (n_bits, cap)
    if key in _DIRECTED_CACHE:
        return _DIRECTED_CACHE[key]
    universe = range(1 << n_bits)
    total = 0
    for k in range(1, cap + 1):
        total += comb(len(universe), k)
    if total > MAX_LITERAL_CANDIDATES:
        raise BudgetExceeded(
            f"literal directed scan would visit {total} subfamilies (limit {MAX_LITERAL_CANDIDATES})"
        )
    out = []
    for k in range(1, cap + 1):
        for sub in combinations(universe, k):
            if masks_upward_directed(sub):
                union = 0
                for m in sub:
                    union |= m
                out.append((sub, union))
    _DIRECTED_CACHE[key] = out
    return out


def _soft(space, m):
    return SoftSet(space, m)


def _check_normalization(op: OperatorTable, report: ValidationReport, law: str) -> None:
    if op.outputs[0] != 0:
        report.add(Witness(law, (_soft(op.space, 0),), _soft(op.space, op.outputs[0])))


def _check_monotone(op: OperatorTable, report: ValidationReport, law: str) -> None:
    out = op.outputs
    for a, b in _covers(op.space.n_bits):
        if out[a] & ~out[b]:
            report.add(Witness(law, (_soft(op.space, a), _soft(op.space, b)), _soft(op.space, out[a])))
            return


def _check_directed_additive(
    op: OperatorTable, report: ValidationReport, law: str, mode: str, cap: int
) -> None:
    space = op.space
    out = op.outputs
    # The empty family: its union is the null set and so is the union of images.
    if out[0] != 0:
        report.add(Witness(law, (), _soft(space, out[0]), "empty directed family"))
        return
    if mode == "fast":
        # A finite nonempty directed family contains its union, so the law
        # reduces to two-member chains; covers generate all of them.
        for a, b in _covers(space.n_bits):
            if out[a] | out[b] != out[b]:
                report.add(
                    Witness(law, (_soft(space, a), _soft(space, b)), _soft(space, out[b]),
                            "union of images differs from image of union")
                )
                return
        report.notes.append("directed additivity certified by finite collapse")
        return
    for sub, union in directed_families(space.n_bits, cap):
        joined = 0
        for m in sub:
            joined |= out[m]
        if joined != out[union]:
            report.add(Witness(law, tuple(_soft(space, m) for m in sub), _soft(space, out[union])))
            return
    report.notes.append(f"directed additivity scanned literally up to {cap} members")


def validate_hull_operator(op: OperatorTable, mode: str = "fast", cap: int = DEFAULT_CAP) -> ValidationReport:
    """Normalization, extensivity, monotonicity, idempotence and directed additivity."""
    _check_mode(mode)
    space = op.space
    out = op.outputs
    report = ValidationReport()
    _check_normalization(op, report, "normalization")
    for m, r in enumerate(out):
        if m & ~r:
            report.add(Witness("extensive", (_soft(space, m),), _soft(space, r)))
            break
    _check_monotone(op, report, "monotone")
    for m, r in enumerate(out):
        if out[r] != r:
            report.add(Witness("idempotent", (_soft(space, m),), _soft(space, out[r])))
            break
    _check_directed_additive(op, report, "directed-additive", mode, cap)
    return report


def validate_cderived_operator(op: OperatorTable, mode: str = "fast", cap: int = DEFAULT_CAP) -> ValidationReport:
    """Normalization, monotonicity, the weak idempotent law and directed additivity."""
    _check_mode(mode)
    space = op.space
    out = op.outputs
    report = ValidationReport()
    _check_normalization(op, report, "normalization")
    _check_monotone(op, report, "monotone")
    for m, r in enumerate(out):
        closed = r | m
        if out[closed] & ~closed:
            report.add(Witness("weak-idempotent", (_soft(space, m),), _soft(space, out[closed])))
            break
    _check_directed_additive(op, report, "directed-additive", mode, cap)
    return report


def structure_from_hull_operator(op: OperatorTable) -> SoftConvexStructure:
    """Fixpoints of a hull operator; its hull re-tabulates to ``op``."""
    report = op.hull_report
    if not report.valid:
        raise InvalidOperator("not a hull operator: " + report.first.describe(), report)
    fixed = tuple(m for m, r in enumerate(op.outputs) if r == m)
    structure = SoftConvexStructure.from_family(SoftFamily(op.space, fixed))
    if tabulate_hull(structure) != op:
        raise AssertionError("hull of the fixpoint structure does not reproduce the operator")
    return structure


def cderived_image_family(op: OperatorTable) -> SoftFamily:
    """The family ``{d(s) ∪ s}`` over every soft set ``s``."""
    return SoftFamily(op.space, tuple(sorted({r | m for m, r in enumerate(op.outputs)})))


def structure_from_cderived(op: OperatorTable) -> SoftConvexStructure:
    """Soft sets ``s`` with ``d(s) ⊆ s``; cross-checked against ``{d(s) ∪ s}``."""
    report = op.cderived_report
    if not report.valid:
        raise InvalidOperator("not a c-derived operator: " + report.first.describe(), report)
    fixed = tuple(m for m, r in enumerate(op.outputs) if r & ~m == 0)
    family = SoftFamily(op.space, fixed)
    if family != cderived_image_family(op):
        raise AssertionError("the two descriptions of the induced structure disagree")
    return SoftConvexStructure.from_family(family)


def hull_from_cderived(op: OperatorTable, s: SoftSet) -> SoftSet:
    if s.space != op.space:
        raise SpaceMismatch("soft set lives on a different space")
    report = op.cderived_report
    if not report.valid:
        raise InvalidOperator("not a c-derived operator: " + report.first.describe(), report)
    return SoftSet(op.space, op.outputs[s.mask] | s.mask)
