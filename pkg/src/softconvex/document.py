"""JSON document format for spaces, soft sets, families, operators and functions.

A document is one JSON object::

    {
      "universe": ["x1", "x2"],
      "parameters": ["e1", "e2"],
      "soft_sets": {"A": {"e1": ["x1"], "e2": []}},
      "families": {"zeta": ["PHI", "A", "ABS"]},
      "operators": {"eta": [["PHI", "PHI"], ["A", {"e1": ["x1"], "e2": ["x1"]}], ...]},
      "functions": {"f": {"codomain": "other.json", "map": {"x1": "y1", "x2": "y1"}}}
    }

``PHI`` and ``ABS`` always name the null and absolute soft sets.  Operator
entries are ``[input, output]`` pairs where each side is a soft-set name or an
inline assignment; together they must cover every soft set of the space.  A
function's ``codomain`` is a path relative to the document, or ``null`` for
the document itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .core import SoftFamily, SoftSet, Space, make_soft_set
from .errors import SoftConvexError, TableIncomplete, UnknownElement, UnknownParameter
from .morphisms import SoftFunctionMap
from .operators import MAX_TABLE_BITS, OperatorTable

__all__ = [
    "Document",
    "DocumentError",
    "DocumentSyntaxError",
    "UnknownName",
    "NonTotalAssignment",
    "DuplicateName",
    "parse",
    "serialize",
    "load",
    "RESERVED",
]

RESERVED = ("PHI", "ABS")
SECTIONS = ("universe", "parameters", "soft_sets", "families", "operators", "functions")


class DocumentError(SoftConvexError):
    pass


class DocumentSyntaxError(DocumentError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class UnknownName(DocumentError):
    pass


class NonTotalAssignment(DocumentError):
    pass


class DuplicateName(DocumentError):
    pass


def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise DuplicateName(f"duplicate key {k!r}")
        out[k] = v
    return out


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise DocumentSyntaxError(message)


def _string_list(value, where: str) -> list[str]:
    _expect(isinstance(value, list) and all(isinstance(v, str) for v in value), f"{where} must be a list of strings")
    return value


@dataclass
class Document:
    universe: list[str]
    parameters: list[str]
    soft_sets: dict[str, dict[str, list[str]]] = field(default_factory=dict)
    families: dict[str, list[str]] = field(default_factory=dict)
    operators: dict[str, list[list[Any]]] = field(default_factory=dict)
    functions: dict[str, dict[str, Any]] = field(default_factory=dict)
    path: Path | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        try:
            self.space = Space(self.universe, self.parameters)
        except ValueError as exc:
            raise DocumentSyntaxError(str(exc)) from None
        self._sets: dict[str, SoftSet] = {"PHI": self.space.null(), "ABS": self.space.absolute()}
        for name in sorted(self.soft_sets):
            if name in RESERVED:
                raise DuplicateName(f"{name!r} is reserved")
            self.soft_sets[name] = self._canonical_assignment(self.soft_sets[name], f"soft set {name!r}")
            self._sets[name] = make_soft_set(self.space, self.soft_sets[name])
        for name, members in self.families.items():
            _string_list(members, f"family {name!r}")
            self.families[name] = list(dict.fromkeys(members))
            for m in members:
                self._resolve_name(m, f"family {name!r}")
        for name, entries in self.operators.items():
            self.operators[name] = [self._canonical_entry(e, f"operator {name!r}") for e in entries]
            self.operator(name)
        for name, spec in self.functions.items():
            self.functions[name] = self._canonical_function(spec, f"function {name!r}")

    # -- canonicalization ------------------------------------------------------

    def _canonical_assignment(self, assignment, where: str) -> dict[str, list[str]]:
        _expect(isinstance(assignment, dict), f"{where} must be an object")
        for e in assignment:
            if e not in self.space.parameter_index:
                raise UnknownParameter(f"{where}: unknown parameter {e!r}")
        missing = [e for e in self.parameters if e not in assignment]
        if missing:
            raise NonTotalAssignment(f"{where}: no subset given for {missing}")
        out = {}
        for e in self.parameters:
            elements = _string_list(assignment[e], f"{where}[{e}]")
            unknown = [x for x in elements if x not in self.space.element_index]
            if unknown:
                raise UnknownElement(f"{where}[{e}]: unknown elements {unknown}")
            chosen = set(elements)
            out[e] = [x for x in self.universe if x in chosen]
        return out

    def _canonical_entry(self, entry, where: str) -> list[Any]:
        _expect(isinstance(entry, list) and len(entry) == 2, f"{where}: entries must be [input, output] pairs")
        out = []
        for side in entry:
            if isinstance(side, str):
                self._resolve_name(side, where)
                out.append(side)
            else:
                out.append(self._canonical_assignment(side, where))
        return out

    def _canonical_function(self, spec, where: str) -> dict[str, Any]:
        _expect(isinstance(spec, dict) and set(spec) <= {"codomain", "map"} and "map" in spec,
                f"{where} must be an object with 'map' and optional 'codomain'")
        codomain = spec.get("codomain")
        _expect(codomain is None or isinstance(codomain, str), f"{where}: codomain must be a path or null")
        mapping = spec["map"]
        _expect(isinstance(mapping, dict) and all(isinstance(v, str) for v in mapping.values()),
                f"{where}: map must send element names to element names")
        unknown = [x for x in mapping if x not in self.space.element_index]
        if unknown:
            raise UnknownElement(f"{where}: unknown elements {unknown}")
        missing = [x for x in self.universe if x not in mapping]
        if missing:
            raise NonTotalAssignment(f"{where}: map undefined on {missing}")
        return {"codomain": codomain, "map": {x: mapping[x] for x in self.universe}}

    # -- resolution ------------------------------------------------------------

    def _resolve_name(self, name: str, where: str) -> SoftSet:
        try:
            return self._sets[name]
        except KeyError:
            raise UnknownName(f"{where}: undefined soft set {name!r}") from None

    def _resolve(self, value, where: str) -> SoftSet:
        if isinstance(value, str):
            return self._resolve_name(value, where)
        return make_soft_set(self.space, value)

    def soft_set(self, name: str) -> SoftSet:
        return self._resolve_name(name, "lookup")

    def family(self, name: str) -> SoftFamily:
        if name not in self.families:
            raise UnknownName(f"undefined family {name!r}")
        return SoftFamily.of(self.space, [self._sets[m] for m in self.families[name]])

    def operator(self, name: str) -> OperatorTable:
        if name not in self.operators:
            raise UnknownName(f"undefined operator {name!r}")
        if self.space.n_bits > MAX_TABLE_BITS:
            raise TableIncomplete(f"operator {name!r}: space too large for a table")
        table: dict[int, int] = {}
        for a, b in self.operators[name]:
            src = self._resolve(a, f"operator {name!r}").mask
            dst = self._resolve(b, f"operator {name!r}").mask
            if table.get(src, dst) != dst:
                raise DuplicateName(f"operator {name!r}: conflicting entries for {SoftSet(self.space, src)}")
            table[src] = dst
        size = 1 << self.space.n_bits
        if len(table) != size:
            missing = next(m for m in range(size) if m not in table)
            raise TableIncomplete(
                f"operator {name!r} covers {len(table)} of {size} soft sets; missing {SoftSet(self.space, missing)}"
            )
        return OperatorTable(self.space, [table[m] for m in range(size)])

    def function(self, name: str) -> tuple[SoftFunctionMap, Document]:
        """The point map and the document holding its codomain."""
        if name not in self.functions:
            raise UnknownName(f"undefined function {name!r}")
        spec = self.functions[name]
        if spec["codomain"] is None:
            codomain = self
        else:
            base = self.path.parent if self.path is not None else Path.cwd()
            codomain = load(base / spec["codomain"])
        unknown = [y for y in spec["map"].values() if y not in codomain.space.element_index]
        if unknown:
            raise UnknownElement(f"function {name!r}: targets {unknown} are not in the codomain")
        if codomain.space.parameters != self.space.parameters:
            raise DocumentError(f"function {name!r}: codomain has a different parameter list")
        return SoftFunctionMap(self.space, codomain.space, spec["map"]), codomain

    def names_by_mask(self) -> dict[int, str]:
        """One display name per named soft set; reserved names win, then lexicographic order."""
        out: dict[int, str] = {}
        for name in [*RESERVED, *sorted(self.soft_sets)]:
            out.setdefault(self._sets[name].mask, name)
        return out

    def to_obj(self) -> dict[str, Any]:
        return {
            "universe": list(self.universe),
            "parameters": list(self.parameters),
            "soft_sets": {k: self.soft_sets[k] for k in sorted(self.soft_sets)},
            "families": {k: self.families[k] for k in sorted(self.families)},
            "operators": {k: self.operators[k] for k in sorted(self.operators)},
            "functions": {k: self.functions[k] for k in sorted(self.functions)},
        }


def parse(text: str, path: Path | None = None) -> Document:
    try:
        obj = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno) from None
    _expect(isinstance(obj, dict), "document must be a JSON object")
    unknown = [k for k in obj if k not in SECTIONS]
    _expect(not unknown, f"unknown top-level keys {unknown}")
    _expect("universe" in obj and "parameters" in obj, "document needs 'universe' and 'parameters'")
    for key in ("soft_sets", "families", "operators", "functions"):
        _expect(isinstance(obj.get(key, {}), dict), f"'{key}' must be an object")
    universe = _string_list(obj["universe"], "universe")
    parameters = _string_list(obj["parameters"], "parameters")
    return Document(
        universe,
        parameters,
        dict(obj.get("soft_sets", {})),
        dict(obj.get("families", {})),
        dict(obj.get("operators", {})),
        dict(obj.get("functions", {})),
        path=path,
    )


def serialize(doc: Document) -> str:
    return json.dumps(doc.to_obj(), indent=2, ensure_ascii=False) + "\n"


def load(path) -> Document:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text, path)


def soft_set_entry(s: SoftSet) -> dict[str, list[str]]:
    return {e: list(xs) for e, xs in s.assignment().items()}


def document_for(space: Space, **sections) -> Document:
    """Build a document for an existing space (handy for generated fixtures)."""
    return Document(list(space.universe), list(space.parameters), **sections)


def operator_entries(op: OperatorTable, names: dict[int, str] | None = None) -> list[list[Any]]:
    names = names or {}
    out = []
    for s, r in op.items():
        out.append([names.get(s.mask) or soft_set_entry(s), names.get(r.mask) or soft_set_entry(r)])
    return out
