"""Soft convex structures: validation, closure, hulls, slices and induced structures."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import combinations
from typing import Iterable, Sequence

from .core import (
    SoftFamily,
    SoftSet,
    Space,
    bits_of,
    masks_downward_directed,
    masks_upward_directed,
)
from .errors import InvalidStructure, SpaceMismatch, UnknownElement

__all__ = [
    "Witness",
    "ValidationReport",
    "SoftConvexStructure",
    "CrispConvexStructure",
    "validate_structure",
    "close_to_structure",
    "is_concave",
    "slice_structure",
    "validate_crisp",
    "crisp_hull",
    "induced_from_crisp",
    "hull",
    "pointwise_hull",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 5
MODES = ("fast", "literal")


@dataclass(frozen=True)
class Witness:
    """One axiom violation: which law, the offending inputs, and what was computed."""

    axiom: str
    members: tuple = ()
    computed: object = None
    note: str = ""

    def describe(self, names=None) -> str:
        def show(x):
            if names is not None and isinstance(x, SoftSet) and x.mask in names:
                return names[x.mask]
            if isinstance(x, frozenset):
                return "{" + ",".join(sorted(x)) + "}" if x else "∅"
            return str(x)

        text = f"[{self.axiom}]"
        if self.members:
            text += " " + ", ".join(show(m) for m in self.members)
        if self.computed is not None:
            text += f" -> {show(self.computed)}"
        if self.note:
            text += f" ({self.note})"
        return text

    def to_dict(self, names=None) -> dict:
        def enc(x):
            if isinstance(x, SoftSet):
                if names is not None and x.mask in names:
                    return names[x.mask]
                return {e: list(xs) for e, xs in x.assignment().items()}
            if isinstance(x, frozenset):
                return sorted(x)
            if isinstance(x, (tuple, list)):
                return [enc(y) for y in x]
            return x if x is None or isinstance(x, (str, int, bool)) else str(x)

        return {
            "axiom": self.axiom,
            "members": [enc(m) for m in self.members],
            "computed": enc(self.computed),
            "note": self.note,
        }


@dataclass
class ValidationReport:
    valid: bool = True
    witnesses: list[Witness] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid

    def add(self, witness: Witness) -> None:
        self.witnesses.append(witness)
        self.valid = False

    @property
    def first(self) -> Witness | None:
        return self.witnesses[0] if self.witnesses else None

    @property
    def axioms(self) -> set[str]:
        return {w.axiom for w in self.witnesses}


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


# -- structure validation -----------------------------------------------------

def first_structure_violation(masks: Sequence[int], full: int):
    """Fast check on raw masks; returns ``None`` or an (axiom, inputs, computed) triple."""
    present = set(masks)
    if 0 not in present:
        return ("phi", (), 0)
    if full not in present:
        return ("absolute", (), full)
    for i, a in enumerate(masks):
        for b in masks[i + 1 :]:
            if a & b not in present:
                return ("intersection", (a, b), a & b)
    return None


def validate_structure(
    family: SoftFamily, mode: str = "fast", cap: int = DEFAULT_CAP, exhaustive: bool = True
) -> ValidationReport:
    """Check the three soft convex structure axioms.

    ``fast`` mode certifies intersections pairwise and certifies directed unions
    through finite collapse.  ``literal`` mode scans every subfamily of at most
    ``cap`` members for both the intersection and the directed-union axiom.
    With ``exhaustive=False`` the scan stops at the first witness.
    """
    _check_mode(mode)
    space = family.space
    full = space.full_mask
    masks = family.masks
    present = family.mask_set
    report = ValidationReport()

    def soft(m):
        return SoftSet(space, m)

    if 0 not in present:
        report.add(Witness("phi", (), soft(0), "null soft set is not a member"))
    if full not in present:
        report.add(Witness("absolute", (), soft(full), "absolute soft set is not a member"))
    if report.witnesses and not exhaustive:
        return report

    if mode == "fast":
        for i, a in enumerate(masks):
            for b in masks[i + 1 :]:
                if a & b not in present:
                    report.add(Witness("intersection", (soft(a), soft(b)), soft(a & b)))
                    if not exhaustive:
                        return report
        report.notes.append("directed unions certified by finite collapse")
        return report

    n = len(masks)
    for size in range(1, min(cap, n) + 1):
        for sub in combinations(masks, size):
            meet = reduce(int.__and__, sub)
            if meet not in present:
                report.add(Witness("intersection", tuple(map(soft, sub)), soft(meet)))
                if not exhaustive:
                    return report
            if masks_upward_directed(sub):
                join = reduce(int.__or__, sub)
                if join not in present:
                    report.add(Witness("directed-union", tuple(map(soft, sub)), soft(join)))
                    if not exhaustive:
                        return report
    if n > cap:
        report.notes.append(f"literal scan capped at subfamilies of size {cap}")
    return report


class SoftConvexStructure:
    """A validated soft convex structure.

    Build one with :meth:`from_family` (validates, raises
    :class:`InvalidStructure`) or through :func:`close_to_structure`.
    """

    def __init__(self, members: SoftFamily, report: ValidationReport):
        self.space = members.space
        self.members = members
        self.report = report

    @classmethod
    def from_family(cls, family: SoftFamily, mode: str = "fast", cap: int = DEFAULT_CAP):
        report = validate_structure(family, mode, cap)
        if not report.valid:
            raise InvalidStructure(
                "family is not a soft convex structure: " + report.first.describe(), report
            )
        return cls(family, report)

    @classmethod
    def from_masks(cls, space: Space, masks: Iterable[int]) -> SoftConvexStructure:
        return cls.from_family(SoftFamily(space, tuple(masks)))

    @property
    def masks(self) -> tuple[int, ...]:
        return self.members.masks

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item) -> bool:
        return item in self.members

    def __eq__(self, other) -> bool:
        if isinstance(other, SoftConvexStructure):
            return self.members == other.members
        if isinstance(other, SoftFamily):
            return self.members == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.members)

    def __repr__(self) -> str:
        return f"SoftConvexStructure({len(self)} members on {self.space!r})"

    def hull_mask(self, mask: int) -> int:
        acc = self.space.full_mask
        for o in self.members.masks:
            if mask & ~o == 0:
                acc &= o
        return acc

    @cached_property
    def slices(self) -> tuple[CrispConvexStructure, ...]:
        return tuple(_slice_at(self, p) for p in range(self.space.n_parameters))


def close_masks(masks: Sequence[int], full: int) -> tuple[int, ...]:
    """Input order, then null and absolute if absent, then every new intersection in mask order."""
    order = list(dict.fromkeys([*masks, 0, full]))
    present = set(order)
    frontier = list(order)
    added = []
    while frontier:
        fresh = []
        for a in frontier:
            for b in order:
                c = a & b
                if c not in present:
                    present.add(c)
                    fresh.append(c)
        order.extend(fresh)
        added.extend(fresh)
        frontier = fresh
    added_set = set(added)
    return tuple(m for m in order if m not in added_set) + tuple(sorted(added))


def close_to_structure(family: SoftFamily) -> SoftConvexStructure:
    """Smallest intersection-closed superfamily containing the null and absolute sets."""
    space = family.space
    return SoftConvexStructure.from_family(SoftFamily(space, close_masks(family.masks, space.full_mask)))


def _check_space(structure: SoftConvexStructure, s: SoftSet) -> None:
    if s.space != structure.space:
        raise SpaceMismatch("soft set and structure live on different spaces")


def is_concave(s: SoftSet, structure: SoftConvexStructure) -> bool:
    _check_space(structure, s)
    return (structure.space.full_mask & ~s.mask) in structure.members


def hull(structure: SoftConvexStructure, s: SoftSet) -> SoftSet:
    """Intersection of every member containing ``s``."""
    _check_space(structure, s)
    return SoftSet(structure.space, structure.hull_mask(s.mask))


# -- crisp structures ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CrispConvexStructure:
    """A family of subsets of a finite universe (ordinary abstract convexity)."""

    universe: tuple[str, ...]
    members: tuple[frozenset[str], ...]

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        index = {x: i for i, x in enumerate(self.universe)}
        cleaned = []
        for s in self.members:
            s = frozenset(s)
            unknown = s - index.keys()
            if unknown:
                raise UnknownElement(f"unknown elements {sorted(unknown)}")
            cleaned.append(s)
        cleaned = list(dict.fromkeys(cleaned))
        cleaned.sort(key=lambda s: sum(1 << index[x] for x in s))
        object.__setattr__(self, "members", tuple(cleaned))

    @cached_property
    def member_set(self) -> frozenset[frozenset[str]]:
        return frozenset(self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CrispConvexStructure):
            return NotImplemented
        return set(self.universe) == set(other.universe) and self.member_set == other.member_set

    def __hash__(self) -> int:
        return hash((frozenset(self.universe), self.member_set))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item) -> bool:
        return frozenset(item) in self.member_set

    def format_members(self) -> list[str]:
        order = {x: i for i, x in enumerate(self.universe)}
        out = []
        for s in self.members:
            out.append("{" + ",".join(sorted(s, key=order.__getitem__)) + "}" if s else "∅")
        return out

    def as_soft(self, parameter: str = "e") -> SoftFamily:
        """The same family on a one-parameter space."""
        space = Space(self.universe, (parameter,))
        return SoftFamily(space, tuple(space.subset_bits(s) for s in self.members))


def validate_crisp(universe: Sequence[str], sets: Iterable[Iterable[str]]) -> ValidationReport:
    """Crisp convexity axioms checked directly on frozensets."""
    universe_set = frozenset(universe)
    family = list(dict.fromkeys(frozenset(s) for s in sets))
    present = set(family)
    report = ValidationReport()
    if frozenset() not in present:
        report.add(Witness("empty", (), frozenset(), "empty set is not a member"))
    if universe_set not in present:
        report.add(Witness("universe", (), universe_set, "universe is not a member"))
    for i, a in enumerate(family):
        for b in family[i + 1 :]:
            if a & b not in present:
                report.add(Witness("intersection", (a, b), a & b))
    report.notes.append("directed unions certified by finite collapse")
    return report


def _slice_at(structure: SoftConvexStructure, p: int) -> CrispConvexStructure:
    space = structure.space
    n = space.n_elements
    low = (1 << n) - 1
    seen = dict.fromkeys((m >> (p * n)) & low for m in structure.masks)
    return CrispConvexStructure(space.universe, tuple(space.subset_from_bits(b) for b in seen))


def slice_structure(structure: SoftConvexStructure, e: str) -> CrispConvexStructure:
    """The crisp structure formed by the ``e``-components of all members."""
    return structure.slices[structure.space.check_parameter(e)]


def crisp_hull(upsilon: CrispConvexStructure, subset: Iterable[str]) -> frozenset[str]:
    """Crisp hull, computed by the soft machinery on a one-parameter space."""
    family = upsilon.as_soft()
    structure = SoftConvexStructure(family, ValidationReport(notes=["crisp slice"]))
    space = family.space
    return space.subset_from_bits(structure.hull_mask(space.subset_bits(subset)))


def pointwise_hull(structure: SoftConvexStructure, s: SoftSet) -> SoftSet:
    """Parameter-wise crisp hull of ``s`` inside each slice structure."""
    _check_space(structure, s)
    space = structure.space
    n = space.n_elements
    mask = 0
    for p, crisp in enumerate(structure.slices):
        comp = s.slice_bits(p)
        acc = (1 << n) - 1
        for member in _crisp_bits(crisp, space):
            if comp & ~member == 0:
                acc &= member
        mask |= acc << (p * n)
    return SoftSet(space, mask)


def _crisp_bits(crisp: CrispConvexStructure, space: Space) -> tuple[int, ...]:
    cache = crisp.__dict__.setdefault("_bits_cache", {})
    bits = cache.get(space.universe)
    if bits is None:
        bits = cache[space.universe] = tuple(space.subset_bits(s) for s in crisp.members)
    return bits


def induced_from_crisp(
    upsilon: CrispConvexStructure, parameters: Sequence[str], single_set: bool = False
) -> SoftConvexStructure:
    """All soft sets whose every component lies in ``upsilon``.

    With ``single_set`` only the constant assignments ``e -> A`` are kept.
    """
    report = validate_crisp(upsilon.universe, upsilon.members)
    if not report.valid:
        raise InvalidStructure("crisp family is not a convex structure: " + report.first.describe(), report)
    space = Space(upsilon.universe, parameters)
    n = space.n_elements
    comps = [space.subset_bits(s) for s in upsilon.members]
    if single_set:
        masks = [sum(c << (p * n) for p in range(space.n_parameters)) for c in comps]
    else:
        masks = [0]
        for p in range(space.n_parameters):
            masks = [m | (c << (p * n)) for m in masks for c in comps]
    return SoftConvexStructure.from_family(SoftFamily(space, tuple(sorted(masks))))


def concave_members(structure: SoftConvexStructure) -> SoftFamily:
    """The family of all concave soft sets (complements of members)."""
    return structure.members.complements()


def upward_directed_subfamilies(masks: Sequence[int], cap: int):
    """Nonempty upward directed subfamilies with at most ``cap`` members, checked literally."""
    for size in range(1, min(cap, len(masks)) + 1):
        for sub in combinations(masks, size):
            if masks_upward_directed(sub):
                yield sub


def downward_directed_subfamilies(masks: Sequence[int], cap: int):
    for size in range(1, min(cap, len(masks)) + 1):
        for sub in combinations(masks, size):
            if masks_downward_directed(sub):
                yield sub


def down_set(mask: int) -> list[int]:
    """All soft-set masks contained in ``mask`` (a directed family with top ``mask``)."""
    bits = list(bits_of(mask))
    out = []
    for k in range(1 << len(bits)):
        out.append(sum(1 << b for i, b in enumerate(bits) if k >> i & 1))
    return out
