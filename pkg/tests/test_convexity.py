from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

import brute
from conftest import structures_on
from softconvex import (
    CrispConvexStructure,
    InvalidStructure,
    SoftConvexStructure,
    SoftFamily,
    SoftSet,
    SpaceMismatch,
    close_to_structure,
    complement,
    crisp_hull,
    family_union,
    hull,
    induced_from_crisp,
    is_concave,
    is_upward_directed,
    pointwise_hull,
    slice_structure,
    validate_crisp,
    validate_structure,
)
from softconvex.convexity import concave_members, downward_directed_subfamilies
from softconvex.oracle import enumerate_crisp_structures, make_space


def crisp(*sets):
    return {frozenset(s) for s in sets}


class TestExampleFamily:
    def test_rejected_with_first_witness(self, example):
        report = validate_structure(example.family("zeta"))
        assert not report.valid
        w = report.first
        assert w.axiom == "intersection"
        assert w.members == (example.soft_set("Omega2"), example.soft_set("Omega4"))
        assert str(w.computed) == "{(e1,∅),(e2,{x2})}"

    def test_all_missing_intersections_reported(self, example):
        report = validate_structure(example.family("zeta"))
        computed = {w.computed for w in report.witnesses}
        assert computed == {example.soft_set(n) for n in ("Theta1", "Theta2", "Theta3")}

    def test_literal_mode_agrees(self, example):
        assert not validate_structure(example.family("zeta"), mode="literal").valid
        assert validate_structure(example.family("zetastar"), mode="literal").valid

    def test_slices_are_the_listed_crisp_structures(self, example):
        fam = example.family("zeta")
        x = example.universe
        e1 = {s["e1"] for s in fam}
        e2 = {s["e2"] for s in fam}
        assert e1 == crisp([], ["x1"], ["x2"], ["x1", "x2"], x)
        assert e2 == crisp([], ["x1"], ["x2"], ["x1", "x2"], ["x1", "x3"], x)
        assert validate_crisp(x, e1).valid and validate_crisp(x, e2).valid

    def test_closure_gives_ten_members(self, example):
        closed = close_to_structure(example.family("zeta"))
        assert len(closed) == 10
        assert closed.members == example.family("zetastar")
        assert close_to_structure(closed.members) == closed

    def test_closed_structure_slices(self, example):
        zs = SoftConvexStructure.from_family(example.family("zetastar"))
        s1 = slice_structure(zs, "e1")
        assert s1.format_members() == ["∅", "{x1}", "{x2}", "{x1,x2}", "{x1,x2,x3}"]

    def test_hull_values(self, example):
        zs = SoftConvexStructure.from_family(example.family("zetastar"))
        assert hull(zs, example.soft_set("PHI")) == example.soft_set("PHI")
        assert hull(zs, example.soft_set("Theta1")) == example.soft_set("Theta1")
        assert hull(zs, example.soft_set("Target")) == example.soft_set("Omega3")
        assert pointwise_hull(zs, example.soft_set("Target")) == example.soft_set("Omega3")

    def test_complement_of_member_is_concave(self, example):
        zs = SoftConvexStructure.from_family(example.family("zetastar"))
        assert is_concave(complement(example.soft_set("Omega1")), zs)
        assert not is_concave(example.soft_set("Omega1"), zs)

    def test_from_family_raises(self, example):
        with pytest.raises(InvalidStructure) as info:
            SoftConvexStructure.from_family(example.family("zeta"))
        assert info.value.report.first.axiom == "intersection"


class TestValidateAgainstNaive:
    @pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (1, 2), (3, 1)])
    def test_every_family(self, n, m):
        space = make_space(n, m)
        sets = list(range(1 << space.n_bits))
        for code in range(1 << len(sets)):
            fam = SoftFamily(space, tuple(k for k in sets if code >> k & 1))
            naive = brute.is_structure([brute.to_tuple(s) for s in fam], space.universe, m)
            assert validate_structure(fam).valid == naive
            assert validate_structure(fam, mode="literal").valid == naive

    @given(st.lists(st.integers(0, 15), max_size=8))
    def test_random_families_2x2(self, masks):
        space = make_space(2, 2)
        fam = SoftFamily(space, tuple(masks))
        naive = brute.is_structure([brute.to_tuple(s) for s in fam], space.universe, 2)
        assert validate_structure(fam).valid == naive

    def test_minimal_structure(self):
        space = make_space(3, 2)
        fam = SoftFamily.of(space, [space.null(), space.absolute()])
        assert validate_structure(fam).valid

    def test_missing_constants(self):
        space = make_space(2, 1)
        assert not validate_structure(SoftFamily(space, (space.full_mask,))).valid
        assert not validate_structure(SoftFamily(space, (0,))).valid

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            validate_structure(SoftFamily(make_space(1, 1)), mode="quick")


class TestHullLaws:
    @pytest.mark.parametrize("n,m", [(1, 2), (2, 1), (2, 2)])
    def test_hull_matches_naive_everywhere(self, n, m):
        space = make_space(n, m)
        for z in structures_on(n, m)[::7]:
            members = [brute.to_tuple(s) for s in z]
            for mask in range(1 << space.n_bits):
                s = SoftSet(space, mask)
                assert brute.to_tuple(hull(z, s)) == brute.hull(members, brute.to_tuple(s), space.universe, m)

    def test_six_laws_exhaustive_2x2(self, structures_2x2):
        space = make_space(2, 2)
        sets = [SoftSet(space, m) for m in range(16)]
        for z in structures_2x2[::5]:
            co = [hull(z, s) for s in sets]
            assert co[0] == space.null()
            for s, h in zip(sets, co):
                assert s <= h
                assert hull(z, h) == h
                assert (s in z) == (h == s)
            for a, b in product(range(16), repeat=2):
                if a & ~b == 0:
                    assert co[a] <= co[b]
            for k in (2, 3):
                for sub in combinations(range(16), k):
                    fam = SoftFamily(space, sub)
                    if is_upward_directed(fam):
                        joined = SoftSet(space, 0)
                        for m in sub:
                            joined = joined | co[m]
                        assert hull(z, family_union(fam)) == joined

    def test_space_mismatch(self, example):
        zs = SoftConvexStructure.from_family(example.family("zetastar"))
        with pytest.raises(SpaceMismatch):
            hull(zs, make_space(1, 1).null())


class TestPointwiseHull:
    def test_bound_and_equality_on_3x2_sample(self):
        space = make_space(3, 2)
        for z in structures_on(3, 2)[::10]:
            for mask in range(64):
                s = SoftSet(space, mask)
                pw, h = pointwise_hull(z, s), hull(z, s)
                assert pw <= h
                assert (pw == h) == (pw in z)

    def test_matches_per_slice_naive(self, example):
        zs = SoftConvexStructure.from_family(example.family("zetastar"))
        for mask in range(64):
            s = SoftSet(zs.space, mask)
            pw = pointwise_hull(zs, s)
            for e in zs.space.parameters:
                members = [(c,) for c in slice_structure(zs, e).members]
                expected = brute.hull(members, (s[e],), zs.space.universe, 1)[0]
                assert pw[e] == expected

    def test_strictly_smaller_somewhere(self, example):
        # Slice hulls can glue into a soft set that no member realises.
        zs = SoftConvexStructure.from_family(example.family("zetastar"))
        strict = [m for m in range(64) if pointwise_hull(zs, SoftSet(zs.space, m)) != hull(zs, SoftSet(zs.space, m))]
        assert strict
        for m in strict:
            assert pointwise_hull(zs, SoftSet(zs.space, m)) not in zs


class TestSlicesAndSingletonParameter:
    def test_slices_of_every_2x2_structure_validate(self, structures_2x2):
        for z in structures_2x2:
            for c in z.slices:
                assert validate_crisp(c.universe, c.members).valid

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_singleton_parameter_equivalence(self, n):
        space = make_space(n, 1)
        for code in range(1 << (1 << n)):
            fam = SoftFamily(space, tuple(k for k in range(1 << n) if code >> k & 1))
            assert validate_structure(fam).valid == validate_crisp(space.universe, [s["e1"] for s in fam]).valid

    def test_crisp_hull(self):
        upsilon = CrispConvexStructure(("a", "b", "c"), [set(), {"a"}, {"a", "b"}, {"a", "b", "c"}])
        assert crisp_hull(upsilon, {"b"}) == {"a", "b"}
        assert crisp_hull(upsilon, set()) == frozenset()


class TestInduced:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_counts_and_slices(self, n):
        universe = [f"x{i + 1}" for i in range(n)]
        for sets in enumerate_crisp_structures(universe):
            upsilon = CrispConvexStructure(tuple(universe), sets)
            for params in (["e1"], ["e1", "e2"]):
                z = induced_from_crisp(upsilon, params)
                assert len(z) == len(upsilon) ** len(params)
                for e in params:
                    assert slice_structure(z, e) == upsilon
                single = induced_from_crisp(upsilon, params, single_set=True)
                assert len(single) == len(upsilon)
                assert validate_structure(single.members).valid

    def test_rejects_non_convex_input(self):
        broken = CrispConvexStructure(("a", "b", "c"), [set(), {"a", "b"}, {"b", "c"}, {"a", "b", "c"}])
        with pytest.raises(InvalidStructure):
            induced_from_crisp(broken, ["e1"])


class TestConcavity:
    def test_laws_on_2x2(self, structures_2x2):
        for z in structures_2x2[::3]:
            full = z.space.full_mask
            concave = concave_members(z).masks
            present = set(concave)
            assert 0 in present and full in present
            for k in (2, 3):
                for sub in combinations(concave, k):
                    joined = 0
                    for m in sub:
                        joined |= m
                    assert joined in present
            for sub in downward_directed_subfamilies(concave, 4):
                met = full
                for m in sub:
                    met &= m
                assert met in present

    def test_union_reading_is_implied_by_the_union_law(self, structures_2x2):
        # Unions of downward directed families are unions of families, so the
        # literal wording adds nothing beyond the general union law.
        for z in structures_2x2[::11]:
            concave = concave_members(z).masks
            present = set(concave)
            for sub in downward_directed_subfamilies(concave, 3):
                joined = 0
                for m in sub:
                    joined |= m
                assert joined in present
