"""Soft functions between spaces and the four preservation properties."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .bases import SoftConvexBase
from .convexity import DEFAULT_CAP, SoftConvexStructure, down_set
from .core import SoftSet, Space, bits_of
from .errors import BudgetExceeded, InvalidOperator, SpaceMismatch, UnknownElement
from .operators import MAX_TABLE_BITS, OperatorTable, directed_families, tabulate_hull

__all__ = [
    "SoftFunctionMap",
    "PropertyCheck",
    "EquivalenceReport",
    "image",
    "preimage",
    "compose",
    "is_scp",
    "is_scc",
    "is_sdp",
    "is_sbp",
    "check_scp_equivalence",
    "check_scc_equivalence",
]


class SoftFunctionMap:
    """A point map ``X -> Y`` lifted to soft sets over a shared parameter list."""

    def __init__(self, domain: Space, codomain: Space, mapping: Mapping[str, str]):
        if domain.parameters != codomain.parameters:
            raise SpaceMismatch(
                f"parameter lists differ: {list(domain.parameters)} vs {list(codomain.parameters)}"
            )
        missing = [x for x in domain.universe if x not in mapping]
        if missing:
            raise UnknownElement(f"point map undefined on {missing}")
        extra = [x for x in mapping if x not in domain.element_index]
        if extra:
            raise UnknownElement(f"point map mentions unknown elements {extra}")
        targets = []
        for x in domain.universe:
            y = mapping[x]
            if y not in codomain.element_index:
                raise UnknownElement(f"{x!r} maps to {y!r}, which is not in the codomain")
            targets.append(codomain.element_index[y])
        self.domain = domain
        self.codomain = codomain
        self.targets = tuple(targets)

    @classmethod
    def from_indices(cls, domain: Space, codomain: Space, targets) -> SoftFunctionMap:
        return cls(domain, codomain, {x: codomain.universe[t] for x, t in zip(domain.universe, targets)})

    @property
    def mapping(self) -> dict[str, str]:
        return {x: self.codomain.universe[t] for x, t in zip(self.domain.universe, self.targets)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, SoftFunctionMap):
            return NotImplemented
        return (self.domain, self.codomain, self.targets) == (other.domain, other.codomain, other.targets)

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.targets))

    def __repr__(self) -> str:
        return f"SoftFunctionMap({self.mapping})"

    @cached_property
    def _bit_images(self) -> tuple[int, ...]:
        ny = self.codomain.n_elements
        out = []
        for p in range(self.domain.n_parameters):
            for t in self.targets:
                out.append(1 << (p * ny + t))
        return tuple(out)

    @cached_property
    def _bit_preimages(self) -> tuple[int, ...]:
        nx, ny = self.domain.n_elements, self.codomain.n_elements
        out = []
        for p in range(self.codomain.n_parameters):
            for y in range(ny):
                m = 0
                for i, t in enumerate(self.targets):
                    if t == y:
                        m |= 1 << (p * nx + i)
                out.append(m)
        return tuple(out)

    def image_mask(self, mask: int) -> int:
        img = self._bit_images
        out = 0
        for b in bits_of(mask):
            out |= img[b]
        return out

    def preimage_mask(self, mask: int) -> int:
        pre = self._bit_preimages
        out = 0
        for b in bits_of(mask):
            out |= pre[b]
        return out

    @cached_property
    def image_table(self) -> tuple[int, ...]:
        """Image of every domain soft set, indexed by mask."""
        n = self.domain.n_bits
        if n > MAX_TABLE_BITS:
            raise BudgetExceeded(f"image table needs |X|*|E| <= {MAX_TABLE_BITS}")
        img = self._bit_images
        table = [0] * (1 << n)
        for m in range(1, 1 << n):
            low = m & -m
            table[m] = table[m ^ low] | img[low.bit_length() - 1]
        return tuple(table)


def _check_domain(f: SoftFunctionMap, s: SoftSet) -> None:
    if s.space != f.domain:
        raise SpaceMismatch("soft set does not live on the domain space")


def _check_codomain(f: SoftFunctionMap, s: SoftSet) -> None:
    if s.space != f.codomain:
        raise SpaceMismatch("soft set does not live on the codomain space")


def image(f: SoftFunctionMap, s: SoftSet) -> SoftSet:
    _check_domain(f, s)
    return SoftSet(f.codomain, f.image_mask(s.mask))


def preimage(f: SoftFunctionMap, s: SoftSet) -> SoftSet:
    _check_codomain(f, s)
    return SoftSet(f.domain, f.preimage_mask(s.mask))


def compose(g: SoftFunctionMap, f: SoftFunctionMap) -> SoftFunctionMap:
    """``g ∘ f``."""
    if f.codomain != g.domain:
        raise SpaceMismatch("codomain of f is not the domain of g")
    return SoftFunctionMap.from_indices(f.domain, g.codomain, [g.targets[t] for t in f.targets])


@dataclass
class PropertyCheck:
    """Outcome of a preservation check; ``witness`` is the first violating input."""

    property: str
    holds: bool
    witness: object = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds


@dataclass
class EquivalenceReport:
    """The three clauses of a characterization theorem, evaluated independently."""

    property: str
    clauses: dict[str, PropertyCheck] = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        return len({c.holds for c in self.clauses.values()}) <= 1

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.clauses.values())

    def __bool__(self) -> bool:
        return self.agree


def _check_pair(f: SoftFunctionMap, x_space: Space, y_space: Space) -> None:
    if x_space != f.domain or y_space != f.codomain:
        raise SpaceMismatch("function does not span the given spaces")


def is_scp(f: SoftFunctionMap, zeta_x: SoftConvexStructure, zeta_y: SoftConvexStructure) -> PropertyCheck:
    """Preimage of every member of ``zeta_y`` is a member of ``zeta_x``."""
    _check_pair(f, zeta_x.space, zeta_y.space)
    present = zeta_x.members.mask_set
    for o in zeta_y.masks:
        if f.preimage_mask(o) not in present:
            return PropertyCheck("SCP", False, SoftSet(f.codomain, o),
                                 f"preimage {SoftSet(f.domain, f.preimage_mask(o))} is not convex")
    return PropertyCheck("SCP", True)


def is_scc(f: SoftFunctionMap, zeta_x: SoftConvexStructure, zeta_y: SoftConvexStructure) -> PropertyCheck:
    """Image of every member of ``zeta_x`` is a member of ``zeta_y``."""
    _check_pair(f, zeta_x.space, zeta_y.space)
    present = zeta_y.members.mask_set
    for o in zeta_x.masks:
        if f.image_mask(o) not in present:
            return PropertyCheck("SCC", False, SoftSet(f.domain, o),
                                 f"image {SoftSet(f.codomain, f.image_mask(o))} is not convex")
    return PropertyCheck("SCC", True)


def _clause_families(space: Space, cap: int):
    """Directed families used for the union clauses.

    Every down-set of a soft set (directed, with that set on top) plus, when
    the space is small enough, every directed family of at most ``cap`` sets.
    """
    fams = [((), 0)]
    for m in range(1 << space.n_bits):
        fams.append((tuple(down_set(m)), m))
    try:
        fams.extend(directed_families(space.n_bits, cap))
    except BudgetExceeded:
        pass
    return fams


def _hull_tables(f, zeta_x, zeta_y):
    """Hull of every domain set, image table, and hull of every image."""
    hx = tabulate_hull(zeta_x).outputs
    img = f.image_table
    return hx, img, [zeta_y.hull_mask(i) for i in img]


def check_scp_equivalence(
    f: SoftFunctionMap, zeta_x: SoftConvexStructure, zeta_y: SoftConvexStructure, cap: int = DEFAULT_CAP
) -> EquivalenceReport:
    """Evaluate the preimage, directed-union and pointwise hull clauses for SCP."""
    _check_pair(f, zeta_x.space, zeta_y.space)
    report = EquivalenceReport("SCP")
    report.clauses["preimage"] = is_scp(f, zeta_x, zeta_y)
    hx, img, hfy = _hull_tables(f, zeta_x, zeta_y)

    check = PropertyCheck("SCP", True)
    for sub, union in _clause_families(f.domain, cap):
        right = 0
        for m in sub:
            right |= hfy[m]
        left = img[hx[union]]
        if left & ~right:
            check = PropertyCheck("SCP", False, tuple(SoftSet(f.domain, m) for m in sub),
                                  "image of hull of union escapes the union of hulls of images")
            break
    report.clauses["directed"] = check

    check = PropertyCheck("SCP", True)
    for m in range(len(img)):
        if img[hx[m]] & ~hfy[m]:
            check = PropertyCheck("SCP", False, SoftSet(f.domain, m),
                                  "image of hull escapes hull of image")
            break
    report.clauses["pointwise"] = check
    return report


def check_scc_equivalence(
    f: SoftFunctionMap, zeta_x: SoftConvexStructure, zeta_y: SoftConvexStructure, cap: int = DEFAULT_CAP
) -> EquivalenceReport:
    """Evaluate the image, directed-union and pointwise hull clauses for SCC."""
    _check_pair(f, zeta_x.space, zeta_y.space)
    report = EquivalenceReport("SCC")
    report.clauses["image"] = is_scc(f, zeta_x, zeta_y)
    hx, img, hfy = _hull_tables(f, zeta_x, zeta_y)

    check = PropertyCheck("SCC", True)
    for sub, union in _clause_families(f.domain, cap):
        left = 0
        for m in sub:
            left |= hfy[m]
        right = img[hx[union]]
        if left & ~right:
            check = PropertyCheck("SCC", False, tuple(SoftSet(f.domain, m) for m in sub),
                                  "union of hulls of images escapes image of hull of union")
            break
    report.clauses["directed"] = check

    check = PropertyCheck("SCC", True)
    for m in range(len(img)):
        if hfy[m] & ~img[hx[m]]:
            check = PropertyCheck("SCC", False, SoftSet(f.domain, m),
                                  "hull of image escapes image of hull")
            break
    report.clauses["pointwise"] = check
    return report


def is_sdp(f: SoftFunctionMap, d_x: OperatorTable, d_y: OperatorTable) -> PropertyCheck:
    """``f(dX(s)) ⊆ f(s) ∪ dY(f(s))`` for every soft set ``s`` of the domain."""
    _check_pair(f, d_x.space, d_y.space)
    for op, side in ((d_x, "domain"), (d_y, "codomain")):
        if not op.cderived_report.valid:
            raise InvalidOperator(f"{side} operator is not c-derived", op.cderived_report)
    img = f.image_table
    dx, dy = d_x.outputs, d_y.outputs
    for m in range(len(img)):
        fm = img[m]
        if img[dx[m]] & ~(fm | dy[fm]):
            return PropertyCheck("SDP", False, SoftSet(f.domain, m))
    return PropertyCheck("SDP", True)


def is_sbp(f: SoftFunctionMap, beta_x: SoftConvexBase, beta_y: SoftConvexBase) -> PropertyCheck:
    """Preimage of every member of ``beta_y`` is a member of ``beta_x``."""
    _check_pair(f, beta_x.space, beta_y.space)
    present = beta_x.members.mask_set
    for o in beta_y.masks:
        if f.preimage_mask(o) not in present:
            return PropertyCheck("SBP", False, SoftSet(f.codomain, o),
                                 f"preimage {SoftSet(f.domain, f.preimage_mask(o))} is not a base member")
    return PropertyCheck("SBP", True)
