import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES
from softconvex import TableIncomplete, UnknownElement, UnknownParameter
from softconvex.document import (
    Document,
    DocumentError,
    DocumentSyntaxError,
    DuplicateName,
    NonTotalAssignment,
    UnknownName,
    load,
    parse,
    serialize,
)

DOCUMENTS = ["example.json", "pair_source.json", "pair_target.json", "empty.json"]


@pytest.mark.parametrize("name", DOCUMENTS)
def test_canonical_round_trip(name):
    text = (FIXTURES / name).read_text(encoding="utf-8")
    doc = parse(text)
    assert serialize(doc) == text
    again = parse(serialize(doc))
    assert again == doc
    assert serialize(again) == text


def test_example_family():
    doc = load(FIXTURES / "example.json")
    zeta = doc.family("zeta")
    assert len(zeta) == 7
    assert doc.soft_set("PHI") in zeta and doc.soft_set("ABS") in zeta
    assert doc.families["zeta"][0] == "PHI" and doc.families["zeta"][-1] == "ABS"


def test_empty_sections():
    doc = parse('{"universe": ["a"], "parameters": ["e"], "soft_sets": {}, "families": {}}')
    assert doc.soft_sets == {} and doc.families == {}
    assert serialize(doc) == serialize(parse(serialize(doc)))


def test_canonicalizes_noncanonical_input():
    text = json.dumps({
        "functions": {},
        "families": {"b": ["A", "PHI", "A"], "a": ["ABS"]},
        "soft_sets": {"B": {"e2": ["x2", "x1"], "e1": []}, "A": {"e1": ["x2"], "e2": []}},
        "parameters": ["e1", "e2"],
        "universe": ["x1", "x2"],
    })
    doc = parse(text)
    out = json.loads(serialize(doc))
    assert list(out) == ["universe", "parameters", "soft_sets", "families", "operators", "functions"]
    assert list(out["soft_sets"]) == ["A", "B"]
    assert out["soft_sets"]["B"] == {"e1": [], "e2": ["x1", "x2"]}
    assert list(out["families"]) == ["a", "b"]
    assert out["families"]["b"] == ["A", "PHI"]


def test_unicode_names_survive():
    doc = parse('{"universe": ["α", "β"], "parameters": ["ε"], "soft_sets": {"Ω": {"ε": ["β"]}}}')
    text = serialize(doc)
    assert "Ω" in text and "\\u" not in text
    assert parse(text) == doc


class TestErrors:
    def test_syntax_error_reports_line(self):
        with pytest.raises(DocumentSyntaxError) as info:
            load(FIXTURES / "malformed" / "syntax.json")
        assert info.value.line == 4

    def test_unknown_name_names_the_site(self):
        with pytest.raises(UnknownName) as info:
            load(FIXTURES / "malformed" / "unknown_name.json")
        assert "Omega9" in str(info.value) and "family 'f'" in str(info.value)

    def test_non_total(self):
        with pytest.raises(NonTotalAssignment):
            load(FIXTURES / "malformed" / "nontotal.json")

    def test_duplicate_key(self):
        with pytest.raises(DuplicateName):
            load(FIXTURES / "malformed" / "duplicate.json")

    def test_reserved_name(self):
        with pytest.raises(DuplicateName):
            load(FIXTURES / "malformed" / "reserved.json")

    def test_partial_operator(self):
        with pytest.raises(TableIncomplete):
            load(FIXTURES / "malformed" / "partial_operator.json")

    def test_unknown_element(self):
        with pytest.raises(UnknownElement):
            load(FIXTURES / "malformed" / "unknown_element.json")

    def test_unknown_parameter(self):
        with pytest.raises(UnknownParameter):
            parse('{"universe": ["a"], "parameters": ["e"], "soft_sets": {"A": {"e": [], "f": []}}}')

    @pytest.mark.parametrize("text", [
        "[]",
        '{"universe": ["a"]}',
        '{"universe": "a", "parameters": ["e"]}',
        '{"universe": ["a"], "parameters": ["e"], "extra": 1}',
        '{"universe": ["a"], "parameters": ["e"], "families": []}',
        '{"universe": [], "parameters": ["e"]}',
        '{"universe": ["a"], "parameters": ["e"], "operators": {"d": [["PHI"]]}}',
        '{"universe": ["a"], "parameters": ["e"], "functions": {"f": {"map": {"a": 1}}}}',
    ])
    def test_malformed_shapes(self, text):
        with pytest.raises(DocumentError):
            parse(text)

    def test_conflicting_operator_entries(self):
        text = json.dumps({
            "universe": ["a"], "parameters": ["e"],
            "operators": {"d": [["PHI", "PHI"], ["ABS", "ABS"], ["PHI", "ABS"]]},
        })
        with pytest.raises(DuplicateName):
            parse(text)

    def test_missing_function_codomain_file(self, tmp_path):
        path = tmp_path / "doc.json"
        path.write_text(json.dumps({
            "universe": ["a"], "parameters": ["e"],
            "functions": {"f": {"codomain": "nowhere.json", "map": {"a": "b"}}},
        }))
        doc = load(path)
        with pytest.raises(DocumentError):
            doc.function("f")

    def test_function_map_must_be_total(self):
        with pytest.raises(NonTotalAssignment):
            parse('{"universe": ["a", "b"], "parameters": ["e"], "functions": {"f": {"map": {"a": "a"}}}}')

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(DocumentError):
            load(tmp_path / "missing.json")


def test_codomain_resolves_relative_to_document():
    src = load(FIXTURES / "pair_source.json")
    f, target = src.function("glue")
    assert target.universe == ["b1", "b2"]
    assert f.mapping == {"a1": "b1", "a2": "b1"}


def test_inline_operator_entries():
    text = json.dumps({
        "universe": ["a"], "parameters": ["e"],
        "operators": {"d": [[{"e": []}, "PHI"], ["ABS", {"e": ["a"]}]]},
    })
    doc = parse(text)
    assert doc.operator("d").outputs == (0, 1)
    assert parse(serialize(doc)) == doc


@st.composite
def documents(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(1, 2))
    universe = [f"u{i}" for i in range(n)]
    params = [f"p{j}" for j in range(m)]
    names = draw(st.lists(st.text("ABCDEFGHxyzΩ", min_size=1, max_size=4), max_size=5, unique=True))
    names = [nm for nm in names if nm not in ("PHI", "ABS")]
    soft_sets = {
        nm: {e: draw(st.lists(st.sampled_from(universe), unique=True)) for e in params} for nm in names
    }
    pool = names + ["PHI", "ABS"]
    families = {
        f"F{k}": draw(st.lists(st.sampled_from(pool), max_size=6)) for k in range(draw(st.integers(0, 3)))
    }
    fmap = {x: draw(st.sampled_from(universe)) for x in universe}
    return Document(universe, params, soft_sets, families, {}, {"f": {"codomain": None, "map": fmap}})


@given(documents())
def test_random_documents_round_trip(doc):
    text = serialize(doc)
    again = parse(text)
    assert again == doc
    assert serialize(again) == text
