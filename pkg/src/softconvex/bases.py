"""Soft convex bases and the structures they generate."""

from __future__ import annotations

from functools import reduce
from itertools import combinations

from .convexity import (
    DEFAULT_CAP,
    SoftConvexStructure,
    ValidationReport,
    Witness,
    _check_mode,
    upward_directed_subfamilies,
)
from .core import SoftFamily, SoftSet
from .errors import InvalidBase

__all__ = ["SoftConvexBase", "validate_cbase", "structure_from_cbase", "directed_unions"]


def directed_unions(masks, cap: int) -> set[int]:
    """Unions of upward directed subfamilies of at most ``cap`` members, plus the empty union."""
    out = {0}
    for sub in upward_directed_subfamilies(masks, cap):
        out.add(reduce(int.__or__, sub))
    return out


def validate_cbase(family: SoftFamily, mode: str = "fast", cap: int = DEFAULT_CAP) -> ValidationReport:
    """Check the three base conditions (SCB1, SCB2, SCB3).

    In fast mode the sets expressible as directed unions are exactly the
    members plus the null set, so SCB1 asks for the absolute set as a member,
    SCB2 asks pairwise intersections to stay among members or be null, and
    SCB3 holds outright.  Literal mode enumerates directed subfamilies up to
    ``cap`` members instead.
    """
    _check_mode(mode)
    space = family.space
    full = space.full_mask
    masks = family.masks
    report = ValidationReport()

    def soft(m):
        return SoftSet(space, m)

    if mode == "fast":
        expressible = set(masks) | {0}
        if full not in family.mask_set:
            report.add(Witness("SCB1", (), soft(full), "absolute soft set is not a member"))
        for i, a in enumerate(masks):
            for b in masks[i + 1 :]:
                if a & b not in expressible:
                    report.add(Witness("SCB2", (soft(a), soft(b)), soft(a & b)))
        report.notes.append("SCB3 certified by finite collapse")
        return report

    expressible = directed_unions(masks, cap)
    if full not in expressible:
        report.add(Witness("SCB1", (), soft(full), "absolute soft set is not a directed union of members"))
    # The empty subfamily intersects to the absolute set, already covered by SCB1.
    for size in range(1, min(cap, len(masks)) + 1):
        for sub in combinations(masks, size):
            meet = reduce(int.__and__, sub)
            if meet not in expressible:
                report.add(Witness("SCB2", tuple(map(soft, sub)), soft(meet)))
    ordered = sorted(expressible)
    for sub in upward_directed_subfamilies(ordered, cap):
        join = reduce(int.__or__, sub)
        if join not in expressible:
            report.add(Witness("SCB3", tuple(map(soft, sub)), soft(join)))
    if len(masks) > cap:
        report.notes.append(f"literal scan capped at subfamilies of size {cap}")
    return report


class SoftConvexBase:
    """A validated soft convex base."""

    def __init__(self, members: SoftFamily, report: ValidationReport):
        self.space = members.space
        self.members = members
        self.report = report

    @classmethod
    def from_family(cls, family: SoftFamily, mode: str = "fast", cap: int = DEFAULT_CAP) -> SoftConvexBase:
        report = validate_cbase(family, mode, cap)
        if not report.valid:
            raise InvalidBase("family is not a soft convex base: " + report.first.describe(), report)
        return cls(family, report)

    @property
    def masks(self) -> tuple[int, ...]:
        return self.members.masks

    def __contains__(self, item) -> bool:
        return item in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self) -> str:
        return f"SoftConvexBase({len(self)} members on {self.space!r})"


def structure_from_cbase(
    base: SoftConvexBase | SoftFamily, mode: str = "fast", cap: int = DEFAULT_CAP
) -> SoftConvexStructure:
    """All unions of upward directed subfamilies of the base.

    Fast mode returns the members plus the null set; literal mode enumerates
    directed subfamilies up to ``cap`` members.  Either way the result is
    re-validated as a structure.
    """
    if isinstance(base, SoftFamily):
        base = SoftConvexBase.from_family(base)
    _check_mode(mode)
    if mode == "fast":
        masks = (0, *base.masks)
    else:
        masks = tuple(sorted(directed_unions(base.masks, cap)))
    return SoftConvexStructure.from_family(SoftFamily(base.space, masks))
