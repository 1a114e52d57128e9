"""Exhaustive enumeration and brute-force verification on small spaces."""

from __future__ import annotations

import json
import random
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

from .bases import SoftConvexBase, structure_from_cbase, validate_cbase
from .convexity import (
    DEFAULT_CAP,
    SoftConvexStructure,
    ValidationReport,
    close_masks,
    close_to_structure,
    downward_directed_subfamilies,
    first_structure_violation,
    pointwise_hull,
    validate_crisp,
    validate_structure,
)
from .core import SoftFamily, SoftSet, Space
from .errors import BudgetExceeded
from .morphisms import (
    SoftFunctionMap,
    check_scc_equivalence,
    check_scp_equivalence,
    compose,
    is_sbp,
    is_scc,
    is_scp,
    is_sdp,
)
from .operators import (
    OperatorTable,
    cderived_image_family,
    constant_null_operator,
    derived_point_operator,
    structure_from_cderived,
    structure_from_hull_operator,
    tabulate_hull,
    threshold_operator,
    validate_cderived_operator,
    validate_hull_operator,
)

__all__ = [
    "EnumerationBudget",
    "SuiteReport",
    "Counterexample",
    "make_space",
    "enumerate_soft_sets",
    "enumerate_structures",
    "enumerate_bases",
    "enumerate_crisp_structures",
    "cderived_pool",
    "point_functions",
    "verify_suite",
    "find_counterexample",
]

MAX_ENUM_BITS = 12
PROPERTIES = ("SCP", "SCC", "SDP", "SBP")


@dataclass(frozen=True)
class EnumerationBudget:
    max_universe: int = 3
    max_parameters: int = 2
    # Full family scans run when the space has at most this many soft sets.
    max_family_bits: int = 16
    subfamily_cap: int = DEFAULT_CAP
    max_structures: int = 400
    max_pairs: int = 200
    seed: int = 0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if name != "seed" and value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")

    def check_space(self, space: Space) -> None:
        if space.n_elements > self.max_universe or space.n_parameters > self.max_parameters:
            raise BudgetExceeded(
                f"space {space.n_elements}x{space.n_parameters} exceeds budget "
                f"{self.max_universe}x{self.max_parameters}"
            )


def make_space(n_elements: int, n_parameters: int, prefix: str = "x") -> Space:
    return Space([f"{prefix}{i + 1}" for i in range(n_elements)], [f"e{j + 1}" for j in range(n_parameters)])


def enumerate_soft_sets(space: Space) -> list[SoftSet]:
    """All soft sets of the space in canonical binary-counting order."""
    if space.n_bits > MAX_ENUM_BITS:
        raise BudgetExceeded(f"enumeration needs |X|*|E| <= {MAX_ENUM_BITS}, got {space.n_bits}")
    return [SoftSet(space, m) for m in range(1 << space.n_bits)]


# -- structures -------------------------------------------------------------------

def _filter_chunk(args) -> list[tuple[int, ...]]:
    n_sets, full, start, stop = args
    out = []
    top = 1 << (n_sets - 1)
    for fam in range(start, stop):
        if not fam & 1 or not fam & top:
            continue
        masks = [k for k in range(n_sets) if fam >> k & 1]
        if first_structure_violation(masks, full) is None:
            out.append(tuple(masks))
    return out


def _filter_scan(space: Space, workers: int) -> list[tuple[int, ...]]:
    n_sets = 1 << space.n_bits
    total = 1 << n_sets
    if workers <= 1:
        return _filter_chunk((n_sets, space.full_mask, 0, total))
    step = -(-total // workers)
    chunks = [(n_sets, space.full_mask, lo, min(lo + step, total)) for lo in range(0, total, step)]
    with ProcessPoolExecutor(workers) as pool:
        parts = list(pool.map(_filter_chunk, chunks))
    return [fam for part in parts for fam in part]


def _generator_scan(space: Space, budget: EnumerationBudget) -> list[tuple[int, ...]]:
    """Seeded random closures first, then breadth-first one-set extensions.

    Every structure is reachable from the two-member one by adding its members
    one at a time, so the extension phase is complete when the budget allows.
    """
    rng = random.Random(budget.seed)
    n_sets = 1 << space.n_bits
    full = space.full_mask
    limit = budget.max_structures
    seen: dict[frozenset[int], None] = {}
    queue: deque[frozenset[int]] = deque()

    def add(seed_masks) -> None:
        key = frozenset(close_masks(seed_masks, full))
        if key not in seen:
            seen[key] = None
            queue.append(key)

    add(())
    attempts = 0
    while len(seen) < limit // 2 and attempts < limit * 2:
        attempts += 1
        add(rng.sample(range(n_sets), rng.randint(1, min(6, n_sets))))
    while queue and len(seen) < limit:
        current = queue.popleft()
        for m in range(n_sets):
            if m not in current:
                add((*current, m))
                if len(seen) >= limit:
                    break
    return sorted(tuple(sorted(key)) for key in seen)


def enumerate_structures(
    space: Space,
    budget: EnumerationBudget | None = None,
    strategy: str = "auto",
    workers: int = 1,
) -> list[SoftConvexStructure]:
    """Soft convex structures on ``space``.

    ``filter`` scans every family of soft sets (only when the space has at most
    ``budget.max_family_bits`` soft sets) and keeps each valid one exactly once.
    ``generator`` closes systematic and seeded random families and returns a
    deduplicated sample of at most ``budget.max_structures`` structures.
    """
    budget = budget or EnumerationBudget()
    n_sets = 1 << space.n_bits
    if strategy == "auto":
        strategy = "filter" if n_sets <= budget.max_family_bits else "generator"
    if strategy == "filter":
        if n_sets > budget.max_family_bits:
            raise BudgetExceeded(
                f"full scan needs 2^{n_sets} families; budget allows {budget.max_family_bits} soft sets"
            )
        found = _filter_scan(space, workers)
    elif strategy == "generator":
        if space.n_bits > MAX_ENUM_BITS:
            raise BudgetExceeded(f"generator needs |X|*|E| <= {MAX_ENUM_BITS}")
        found = _generator_scan(space, budget)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return [SoftConvexStructure(SoftFamily(space, masks), ValidationReport(notes=[strategy])) for masks in found]


def enumerate_bases(space: Space, budget: EnumerationBudget | None = None) -> list[SoftConvexBase]:
    """Every valid base, by full family scan."""
    budget = budget or EnumerationBudget()
    n_sets = 1 << space.n_bits
    if n_sets > budget.max_family_bits:
        raise BudgetExceeded("base enumeration needs a full family scan")
    out = []
    for fam in range(1 << n_sets):
        family = SoftFamily(space, tuple(k for k in range(n_sets) if fam >> k & 1))
        report = validate_cbase(family)
        if report.valid:
            out.append(SoftConvexBase(family, report))
    return out


def enumerate_crisp_structures(universe: Sequence[str]) -> list[tuple[frozenset[str], ...]]:
    """Every crisp convex structure on ``universe`` by a filter scan over all families."""
    n = len(universe)
    if n > 4:
        raise BudgetExceeded("crisp filter scan limited to universes of at most 4 points")
    subsets = [frozenset(x for i, x in enumerate(universe) if k >> i & 1) for k in range(1 << n)]
    out = []
    for fam in range(1 << len(subsets)):
        sets = [s for k, s in enumerate(subsets) if fam >> k & 1]
        if validate_crisp(universe, sets).valid:
            out.append(tuple(sets))
    return out


# -- operator and function pools --------------------------------------------------------

def cderived_pool(structures: Iterable[SoftConvexStructure], extra_thresholds: int = 4, seed: int = 0) -> list[OperatorTable]:
    """Valid c-derived operators: hull tables, derived-point tables, thresholds, constant null."""
    structures = list(structures)
    if not structures:
        return []
    space = structures[0].space
    pool = {constant_null_operator(space): None}
    for s in structures:
        pool.setdefault(tabulate_hull(s), None)
        pool.setdefault(derived_point_operator(s), None)
    rng = random.Random(seed)
    for m in rng.sample(range(1 << space.n_bits), min(extra_thresholds, 1 << space.n_bits)):
        pool.setdefault(threshold_operator(space, SoftSet(space, m)), None)
    return [op for op in pool if op.cderived_report.valid]


def point_functions(domain: Space, codomain: Space) -> list[SoftFunctionMap]:
    return [
        SoftFunctionMap.from_indices(domain, codomain, targets)
        for targets in product(range(codomain.n_elements), repeat=domain.n_elements)
    ]


# -- the suite ------------------------------------------------------------------------------

@dataclass
class SuiteReport:
    space: tuple[int, int]
    structures: int = 0
    counts: dict[str, list[int]] = field(default_factory=dict)
    witnesses: dict[str, str] = field(default_factory=dict)
    rejected: list[dict] = field(default_factory=list)

    def record(self, check: str, ok: bool, witness: str = "") -> None:
        tally = self.counts.setdefault(check, [0, 0])
        tally[0 if ok else 1] += 1
        if not ok and check not in self.witnesses:
            self.witnesses[check] = witness or "(no detail)"

    @property
    def failures(self) -> int:
        return sum(f for _, f in self.counts.values())

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "space": list(self.space),
            "structures": self.structures,
            "counts": {k: {"passed": v[0], "failed": v[1]} for k, v in sorted(self.counts.items())},
            "witnesses": dict(sorted(self.witnesses.items())),
            "rejected": self.rejected,
            "failures": self.failures,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [f"space {self.space[0]}x{self.space[1]}: {self.structures} structures"]
        for check, (p, f) in sorted(self.counts.items()):
            lines.append(f"  {check:<24} passed {p:>7}  failed {f:>5}")
            if f:
                lines.append(f"    first witness: {self.witnesses[check]}")
        for item in self.rejected:
            lines.append(f"  rejected {item['name']}: {item['witness']}")
        lines.append("OK" if self.ok else f"FAILURES: {self.failures}")
        return "\n".join(lines)


def check_structure(structure: SoftConvexStructure, report: SuiteReport, concave_cap: int = 3) -> None:
    """Run every per-structure law and round trip, recording into ``report``."""
    space = structure.space
    full = space.full_mask
    present = structure.members.mask_set
    n_sets = 1 << space.n_bits

    report.record(
        "slice-transport",
        all(validate_crisp(space.universe, c.members).valid for c in structure.slices),
    )

    table = tabulate_hull(structure)
    hull = table.outputs
    laws = validate_hull_operator(table)
    fixpoints_ok = all((m in present) == (hull[m] == m) for m in range(n_sets))
    report.record(
        "hull-laws",
        laws.valid and fixpoints_ok,
        laws.first.describe() if laws.witnesses else "membership differs from hull fixpoints",
    )

    try:
        zeta_eta = structure_from_hull_operator(table)
        ok = zeta_eta == structure and tabulate_hull(zeta_eta) == table
    except Exception as exc:  # any failure is a finding, not a crash
        ok, zeta_eta = False, exc
    report.record("hull-round-trip", ok, str(zeta_eta))

    for name, op in (("cderived-hull", table), ("cderived-point", derived_point_operator(structure))):
        creport = validate_cderived_operator(op)
        ok = creport.valid
        detail = creport.first.describe() if creport.witnesses else ""
        if ok:
            zeta_d = structure_from_cderived(op)
            co_d = [op.outputs[m] | m for m in range(n_sets)]
            ok = zeta_d == structure and cderived_image_family(op) == structure.members and co_d == list(hull)
            detail = "induced structure or hull differs"
        report.record(name, ok, detail)

    base_family = structure.members.without(space.null())
    breport = validate_cbase(base_family)
    ok = breport.valid
    if ok:
        generated = structure_from_cbase(SoftConvexBase(base_family, breport))
        closure = close_to_structure(base_family)
        ok = generated == structure and generated.members.issubset(closure.members)
    report.record("base-round-trip", ok, breport.first.describe() if breport.witnesses else "generated family differs")

    concave = [full & ~m for m in structure.masks]
    concave_set = set(concave)
    ok = 0 in concave_set and full in concave_set
    ok = ok and all((a | b) in concave_set for a, b in combinations(concave, 2))
    if ok:
        for sub in downward_directed_subfamilies(concave, concave_cap):
            meet = full
            for m in sub:
                meet &= m
            if meet not in concave_set:
                ok = False
                break
    report.record("concavity-laws", ok)

    bad = None
    for m in range(n_sets):
        pw = pointwise_hull(structure, SoftSet(space, m)).mask
        if pw & ~hull[m] or (pw == hull[m]) != (pw in present):
            bad = SoftSet(space, m)
            break
    report.record("pointwise-bound", bad is None, str(bad))


def check_morphisms(
    f: SoftFunctionMap,
    zeta_x: SoftConvexStructure,
    zeta_y: SoftConvexStructure,
    report: SuiteReport,
    cap: int = DEFAULT_CAP,
    ops_x: Sequence[OperatorTable] = (),
    ops_y: Sequence[OperatorTable] = (),
) -> None:
    """Theorem agreement and the SDP/SBP implications for one function and structure pair."""
    tag = f"{f.mapping}"
    scp = check_scp_equivalence(f, zeta_x, zeta_y, cap)
    report.record("scp-equivalence", scp.agree, tag)
    scc = check_scc_equivalence(f, zeta_x, zeta_y, cap)
    report.record("scc-equivalence", scc.agree, tag)

    ops_x = [tabulate_hull(zeta_x), derived_point_operator(zeta_x), *ops_x]
    ops_y = [tabulate_hull(zeta_y), derived_point_operator(zeta_y), *ops_y]
    for dx in ops_x:
        for dy in ops_y:
            if is_sdp(f, dx, dy):
                zx, zy = structure_from_cderived(dx), structure_from_cderived(dy)
                report.record("sdp-implies-scp", bool(is_scp(f, zx, zy)), tag)

    for bx in _bases_of(zeta_x):
        for by in _bases_of(zeta_y):
            if is_sbp(f, bx, by):
                zx, zy = structure_from_cbase(bx), structure_from_cbase(by)
                report.record("sbp-implies-scp", bool(is_scp(f, zx, zy)), tag)


def _bases_of(structure: SoftConvexStructure) -> list[SoftConvexBase]:
    cache = structure.__dict__.get("_bases")
    if cache is None:
        fams = [structure.members, structure.members.without(structure.space.null())]
        cache = structure.__dict__["_bases"] = [SoftConvexBase.from_family(f) for f in fams]
    return cache


def check_composition(
    f: SoftFunctionMap,
    g: SoftFunctionMap,
    zetas: tuple[SoftConvexStructure, SoftConvexStructure, SoftConvexStructure],
    report: SuiteReport,
) -> None:
    """Closure of SCP, SCC, SDP and SBP under composition for one triple."""
    zx, zy, zz = zetas
    gf = compose(g, f)
    tag = f"f={f.mapping} g={g.mapping}"
    for name, check in (("SCP", is_scp), ("SCC", is_scc)):
        if check(f, zx, zy) and check(g, zy, zz):
            report.record(f"composition-{name}", bool(check(gf, zx, zz)), tag)
    ds = [[tabulate_hull(z), derived_point_operator(z)] for z in zetas]
    for dx in ds[0]:
        for dy in ds[1]:
            if not is_sdp(f, dx, dy):
                continue
            for dz in ds[2]:
                if is_sdp(g, dy, dz):
                    report.record("composition-SDP", bool(is_sdp(gf, dx, dz)), tag)
    bs = [_bases_of(z) for z in zetas]
    for bx in bs[0]:
        for by in bs[1]:
            if not is_sbp(f, bx, by):
                continue
            for bz in bs[2]:
                if is_sbp(g, by, bz):
                    report.record("composition-SBP", bool(is_sbp(gf, bx, bz)), tag)


def sample_pairs(structures: Sequence, limit: int, seed: int) -> list[tuple[int, int]]:
    """Index pairs, all of them when they fit under ``limit``, else a seeded sample."""
    n = len(structures)
    if n * n <= limit:
        return [(i, j) for i in range(n) for j in range(n)]
    rng = random.Random(seed)
    return sorted(divmod(k, n) for k in rng.sample(range(n * n), limit))


def sample_triples(n: int, limit: int, seed: int) -> list[tuple[int, int, int]]:
    if n ** 3 <= limit:
        return list(product(range(n), repeat=3))
    rng = random.Random(seed)
    return sorted({(rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(limit)})


def verify_suite(
    space: Space,
    budget: EnumerationBudget | None = None,
    structures: Sequence[SoftConvexStructure] | None = None,
    injected: dict[str, SoftFamily] | None = None,
    morphisms: bool = True,
) -> SuiteReport:
    """Run every law, round trip and morphism theorem over enumerated structures."""
    budget = budget or EnumerationBudget()
    budget.check_space(space)
    if structures is None:
        structures = enumerate_structures(space, budget)
    report = SuiteReport((space.n_elements, space.n_parameters), len(structures))

    for name, family in sorted((injected or {}).items()):
        vreport = validate_structure(family)
        if vreport.valid:
            report.rejected.append({"name": name, "witness": None, "valid": True})
        else:
            report.rejected.append({"name": name, "witness": vreport.first.describe(), "valid": False})

    for s in structures:
        check_structure(s, report)

    if morphisms and structures:
        functions = point_functions(space, space)
        pairs = sample_pairs(structures, budget.max_pairs, budget.seed)
        for i, j in pairs:
            for f in functions:
                check_morphisms(f, structures[i], structures[j], report, budget.subfamily_cap)
        triples = sample_triples(len(structures), budget.max_pairs, budget.seed + 1)
        for i, j, k in triples:
            for f in functions:
                for g in functions:
                    check_composition(f, g, (structures[i], structures[j], structures[k]), report)
    return report


# -- counterexample search ----------------------------------------------------------------

@dataclass
class Counterexample:
    """A tuple on which a preservation property fails, in a serializable form."""

    property: str
    parameters: list[str]
    domain: list[str]
    codomain: list[str]
    mapping: dict[str, str]
    source: list[dict[str, list[str]]]
    target: list[dict[str, list[str]]]
    witness: dict[str, list[str]] | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> Counterexample:
        return cls(**data)

    def spaces(self) -> tuple[Space, Space]:
        return Space(self.domain, self.parameters), Space(self.codomain, self.parameters)

    def function(self) -> SoftFunctionMap:
        x, y = self.spaces()
        return SoftFunctionMap(x, y, self.mapping)


def _encode_masks(space: Space, masks) -> list[dict[str, list[str]]]:
    return [{e: list(xs) for e, xs in SoftSet(space, m).assignment().items()} for m in masks]


def _encode_table(space: Space, op: OperatorTable) -> list[dict[str, list[str]]]:
    return _encode_masks(space, op.outputs)


def find_counterexample(
    prop: str,
    budget: EnumerationBudget | None = None,
    n_elements: int = 2,
    n_parameters: int = 1,
    fixed_source=None,
    fixed_target=None,
) -> Counterexample | None:
    """First tuple, in a fixed scan order, on which ``prop`` fails.

    The scan runs over point functions, then source objects, then target
    objects.  Objects are structures (SCP, SCC), c-derived operators (SDP) or
    bases (SBP).  ``fixed_source`` / ``fixed_target`` pin one side, given as
    objects on spaces built by :func:`make_space` with prefixes ``x`` and ``y``.
    """
    prop = prop.upper()
    if prop not in PROPERTIES:
        raise ValueError(f"property must be one of {PROPERTIES}")
    budget = budget or EnumerationBudget()
    x_space = make_space(n_elements, n_parameters, "x")
    y_space = make_space(n_elements, n_parameters, "y")
    budget.check_space(x_space)

    def pool(space):
        structures = enumerate_structures(space, budget)
        if prop in ("SCP", "SCC"):
            return structures
        if prop == "SDP":
            return cderived_pool(structures, extra_thresholds=1 << space.n_bits, seed=budget.seed)
        return enumerate_bases(space, budget)

    sources = [fixed_source] if fixed_source is not None else pool(x_space)
    targets = [fixed_target] if fixed_target is not None else pool(y_space)
    check = {"SCP": is_scp, "SCC": is_scc, "SDP": is_sdp, "SBP": is_sbp}[prop]
    for f in point_functions(x_space, y_space):
        for src in sources:
            for tgt in targets:
                result = check(f, src, tgt)
                if result.holds:
                    continue
                if prop == "SDP":
                    source, target = _encode_table(x_space, src), _encode_table(y_space, tgt)
                else:
                    source, target = _encode_masks(x_space, src.masks), _encode_masks(y_space, tgt.masks)
                w = result.witness
                return Counterexample(
                    prop,
                    list(x_space.parameters),
                    list(x_space.universe),
                    list(y_space.universe),
                    f.mapping,
                    source,
                    target,
                    {e: list(xs) for e, xs in w.assignment().items()} if w is not None else None,
                )
    return None
