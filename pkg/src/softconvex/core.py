"""Exact soft-set algebra over a finite space.

A soft set over ``(X, E)`` assigns a subset of the universe ``X`` to every
parameter in ``E``.  Internally it is a single integer bitmask with
``|X| * |E|`` bits: bit ``p * |X| + i`` is set when element ``i`` belongs to
the subset assigned to parameter ``p``.  The space fixes the element and
parameter order, so the mask doubles as the canonical enumeration index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import MissingParameter, SpaceMismatch, UnknownElement, UnknownParameter

__all__ = [
    "Space",
    "SoftSet",
    "SoftFamily",
    "make_soft_set",
    "union",
    "intersect",
    "complement",
    "difference",
    "is_subset",
    "family_union",
    "family_intersection",
    "is_upward_directed",
    "is_downward_directed",
]


@dataclass(frozen=True)
class Space:
    """The ambient pair of a universe and a parameter list."""

    universe: tuple[str, ...]
    parameters: tuple[str, ...]

    def __init__(self, universe: Iterable[str], parameters: Iterable[str]):
        universe = tuple(str(x) for x in universe)
        parameters = tuple(str(e) for e in parameters)
        if not universe:
            raise ValueError("universe must be nonempty")
        if not parameters:
            raise ValueError("parameter list must be nonempty")
        if len(set(universe)) != len(universe):
            raise ValueError(f"duplicate element in universe {universe}")
        if len(set(parameters)) != len(parameters):
            raise ValueError(f"duplicate parameter in {parameters}")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "parameters", parameters)

    @property
    def n_elements(self) -> int:
        return len(self.universe)

    @property
    def n_parameters(self) -> int:
        return len(self.parameters)

    @property
    def n_bits(self) -> int:
        return len(self.universe) * len(self.parameters)

    @property
    def full_mask(self) -> int:
        return (1 << self.n_bits) - 1

    @cached_property
    def element_index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.universe)}

    @cached_property
    def parameter_index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.parameters)}

    def slice_mask(self, p: int) -> int:
        """Bits belonging to the parameter at position ``p``."""
        n = self.n_elements
        return ((1 << n) - 1) << (p * n)

    def null(self) -> SoftSet:
        return SoftSet(self, 0)

    def absolute(self) -> SoftSet:
        return SoftSet(self, self.full_mask)

    def soft_set(self, assignment: Mapping[str, Iterable[str]]) -> SoftSet:
        return make_soft_set(self, assignment)

    def from_mask(self, mask: int) -> SoftSet:
        if not 0 <= mask <= self.full_mask:
            raise ValueError(f"mask {mask} out of range for a {self.n_bits}-bit space")
        return SoftSet(self, mask)

    def check_parameter(self, e: str) -> int:
        try:
            return self.parameter_index[e]
        except KeyError:
            raise UnknownParameter(f"unknown parameter {e!r}") from None

    def subset_bits(self, elements: Iterable[str]) -> int:
        """Bitmask (over the universe only) of a crisp subset."""
        bits = 0
        for x in elements:
            try:
                bits |= 1 << self.element_index[x]
            except KeyError:
                raise UnknownElement(f"unknown element {x!r}") from None
        return bits

    def subset_from_bits(self, bits: int) -> frozenset[str]:
        return frozenset(x for i, x in enumerate(self.universe) if bits >> i & 1)

    def __repr__(self) -> str:
        return f"Space(universe={list(self.universe)}, parameters={list(self.parameters)})"


def _format_subset(space: Space, bits: int) -> str:
    if not bits:
        return "∅"
    return "{" + ",".join(x for i, x in enumerate(space.universe) if bits >> i & 1) + "}"


@dataclass(frozen=True)
class SoftSet:
    """A total map from parameters to subsets of the universe."""

    space: Space
    mask: int

    def __getitem__(self, e: str) -> frozenset[str]:
        return self.space.subset_from_bits(self.slice_bits(self.space.check_parameter(e)))

    def slice_bits(self, p: int) -> int:
        n = self.space.n_elements
        return (self.mask >> (p * n)) & ((1 << n) - 1)

    def assignment(self) -> dict[str, tuple[str, ...]]:
        """Parameter -> elements, both in the space's declaration order."""
        space = self.space
        out = {}
        for p, e in enumerate(space.parameters):
            bits = self.slice_bits(p)
            out[e] = tuple(x for i, x in enumerate(space.universe) if bits >> i & 1)
        return out

    @property
    def is_null(self) -> bool:
        return self.mask == 0

    @property
    def is_absolute(self) -> bool:
        return self.mask == self.space.full_mask

    def _coerce(self, other: SoftSet) -> int:
        if not isinstance(other, SoftSet):
            return NotImplemented
        if other.space != self.space:
            raise SpaceMismatch("soft sets live on different spaces")
        return other.mask

    def __or__(self, other: SoftSet) -> SoftSet:
        return SoftSet(self.space, self.mask | self._coerce(other))

    def __and__(self, other: SoftSet) -> SoftSet:
        return SoftSet(self.space, self.mask & self._coerce(other))

    def __sub__(self, other: SoftSet) -> SoftSet:
        return SoftSet(self.space, self.mask & ~self._coerce(other))

    def __invert__(self) -> SoftSet:
        return SoftSet(self.space, self.space.full_mask & ~self.mask)

    def __le__(self, other: SoftSet) -> bool:
        return self.mask & ~self._coerce(other) == 0

    def __ge__(self, other: SoftSet) -> bool:
        return other.__le__(self)

    def __lt__(self, other: SoftSet) -> bool:
        return self <= other and self.mask != other.mask

    def __gt__(self, other: SoftSet) -> bool:
        return other.__lt__(self)

    def __str__(self) -> str:
        space = self.space
        parts = (f"({e},{_format_subset(space, self.slice_bits(p))})" for p, e in enumerate(space.parameters))
        return "{" + ",".join(parts) + "}"

    def __repr__(self) -> str:
        return f"SoftSet({self})"


def make_soft_set(space: Space, assignment: Mapping[str, Iterable[str]]) -> SoftSet:
    """Build a soft set from a total ``parameter -> elements`` mapping."""
    for e in assignment:
        space.check_parameter(e)
    missing = [e for e in space.parameters if e not in assignment]
    if missing:
        raise MissingParameter(f"assignment is not total: missing {missing}")
    mask = 0
    n = space.n_elements
    for p, e in enumerate(space.parameters):
        mask |= space.subset_bits(assignment[e]) << (p * n)
    return SoftSet(space, mask)


def union(a: SoftSet, b: SoftSet) -> SoftSet:
    return a | b


def intersect(a: SoftSet, b: SoftSet) -> SoftSet:
    return a & b


def complement(a: SoftSet) -> SoftSet:
    return ~a


def difference(a: SoftSet, b: SoftSet) -> SoftSet:
    return a - b


def is_subset(a: SoftSet, b: SoftSet) -> bool:
    return a <= b


@dataclass(frozen=True, eq=False)
class SoftFamily:
    """A finite, duplicate-free collection of soft sets over one space.

    Members keep their first-insertion order, which only affects iteration
    and witness order; equality and hashing are set-based.
    """

    space: Space
    masks: tuple[int, ...] = field(default=())

    def __post_init__(self):
        seen = dict.fromkeys(self.masks)
        full = self.space.full_mask
        for m in seen:
            if not 0 <= m <= full:
                raise ValueError(f"mask {m} out of range")
        object.__setattr__(self, "masks", tuple(seen))

    @classmethod
    def of(cls, space: Space, members: Iterable[SoftSet] = ()) -> SoftFamily:
        masks = []
        for s in members:
            if s.space != space:
                raise SpaceMismatch("family member lives on a different space")
            masks.append(s.mask)
        return cls(space, tuple(masks))

    @classmethod
    def from_sets(cls, members: Sequence[SoftSet], space: Space | None = None) -> SoftFamily:
        if space is None:
            if not members:
                raise ValueError("cannot infer the space of an empty family")
            space = members[0].space
        return cls.of(space, members)

    @cached_property
    def mask_set(self) -> frozenset[int]:
        return frozenset(self.masks)

    def __iter__(self) -> Iterator[SoftSet]:
        return (SoftSet(self.space, m) for m in self.masks)

    def __len__(self) -> int:
        return len(self.masks)

    def __contains__(self, item) -> bool:
        if isinstance(item, SoftSet):
            if item.space != self.space:
                raise SpaceMismatch("soft set lives on a different space")
            return item.mask in self.mask_set
        return item in self.mask_set

    def __eq__(self, other) -> bool:
        if not isinstance(other, SoftFamily):
            return NotImplemented
        return self.space == other.space and self.mask_set == other.mask_set

    def __hash__(self) -> int:
        return hash((self.space, self.mask_set))

    def __repr__(self) -> str:
        return "SoftFamily([" + ", ".join(str(s) for s in self) + "])"

    def sorted(self) -> SoftFamily:
        """Same family with members in canonical (mask) order."""
        return SoftFamily(self.space, tuple(sorted(self.masks)))

    def with_members(self, members: Iterable[SoftSet]) -> SoftFamily:
        return SoftFamily.of(self.space, [*self, *members])

    def without(self, *members: SoftSet) -> SoftFamily:
        drop = {s.mask for s in members}
        return SoftFamily(self.space, tuple(m for m in self.masks if m not in drop))

    def complements(self) -> SoftFamily:
        full = self.space.full_mask
        return SoftFamily(self.space, tuple(full & ~m for m in self.masks))

    def issubset(self, other: SoftFamily) -> bool:
        return self.space == other.space and self.mask_set <= other.mask_set


def _check_same_space(family: SoftFamily, *others: SoftFamily) -> None:
    for o in others:
        if o.space != family.space:
            raise SpaceMismatch("families live on different spaces")


def family_union(family: SoftFamily) -> SoftSet:
    """Parameter-wise union; the empty family yields the null soft set."""
    return SoftSet(family.space, reduce(int.__or__, family.masks, 0))


def family_intersection(family: SoftFamily) -> SoftSet:
    """Parameter-wise intersection; the empty family yields the absolute soft set."""
    return SoftSet(family.space, reduce(int.__and__, family.masks, family.space.full_mask))


# Mask-level predicates, shared by the validators below and in other modules.

def masks_upward_directed(masks: Sequence[int]) -> bool:
    for i, a in enumerate(masks):
        for b in masks[i + 1 :]:
            ab = a | b
            if not any(ab & ~c == 0 for c in masks):
                return False
    return True


def masks_downward_directed(masks: Sequence[int]) -> bool:
    for i, a in enumerate(masks):
        for b in masks[i + 1 :]:
            ab = a & b
            if not any(c & ~ab == 0 for c in masks):
                return False
    return True


def is_upward_directed(family: SoftFamily) -> bool:
    """Every pair of members has a member containing both."""
    return masks_upward_directed(family.masks)


def is_downward_directed(family: SoftFamily) -> bool:
    """Every pair of members has a member contained in both."""
    return masks_downward_directed(family.masks)


def bits_of(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
