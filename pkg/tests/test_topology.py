"""Neighborhood-base conditions, topology generation, property checks."""

import pytest

from gyrotop.corpus import GROUP_TABLES, TOPOLOGY_CORPUS, corpus_gyrogroup, cyclic
from gyrotop.finite import from_group
from gyrotop.topology import (
    CarrierTooLargeError,
    FiniteTopology,
    NeighborhoodFamily,
    check_conditions,
    check_topology_properties,
    generate_topology,
    is_neighborhood_base,
    left_translate,
    load_family,
    normal_subgyrogroup_base,
)


def fam(g, *sets):
    return NeighborhoodFamily.from_iterable(g.order, sets)


def singleton_family(g):
    return fam(g, [g.identity])


def full_family(g):
    return fam(g, range(g.order))


def standard_families(g):
    """The four family shapes swept by the corpus checks."""
    from gyrotop.finite import find_subgyrogroups

    infos = find_subgyrogroups(g)
    all_subs = [sorted(i.members) for i in infos]
    normal = [sorted(i.members) for i in infos
              if i.normal and i.members != frozenset({g.identity})]
    out = {
        "identity": singleton_family(g),
        "whole": full_family(g),
        "all_subgyrogroups": fam(g, *all_subs),
    }
    if normal:
        out["normal_subgyrogroups"] = fam(g, *normal)
    return out


class TestConditions:
    def test_z4_singleton_all_pass(self):
        g = corpus_gyrogroup("z4")
        rep = check_conditions(g, singleton_family(g), mode="topo")
        assert rep.passed
        assert [v.condition for v in rep.verdicts] == list(range(1, 10))

    def test_z4_whole_family_fails_7_only(self):
        g = corpus_gyrogroup("z4")
        rep = check_conditions(g, full_family(g), mode="topo")
        v7 = rep.verdict_for(7)
        assert not v7.passed
        assert v7.witness == {"intersection": [0, 1, 2, 3]}
        assert all(v.passed for v in rep.verdicts if v.condition != 7)
        assert rep.notes  # documented expected finding

    def test_unrefined_pair_fails_4(self):
        g = corpus_gyrogroup("z4")
        rep = check_conditions(g, fam(g, [0, 1], [0, 3]))
        v4 = rep.verdict_for(4)
        assert not v4.passed
        assert v4.witness == {"U": [0, 1], "V": [0, 3]}

    def test_family_must_contain_identity(self):
        g = corpus_gyrogroup("z4")
        with pytest.raises(ValueError, match="identity"):
            check_conditions(g, fam(g, [1, 2]))

    def test_mode_validation(self):
        g = corpus_gyrogroup("z2")
        with pytest.raises(ValueError):
            check_conditions(g, singleton_family(g), mode="bogus")
        rep = check_conditions(g, singleton_family(g), mode="para")
        assert [v.condition for v in rep.verdicts] == list(range(1, 8))


class TestGenerateTopology:
    def test_z4_singleton_discrete(self):
        g = corpus_gyrogroup("z4")
        topo = generate_topology(g, singleton_family(g))
        assert len(topo.opens) == 16
        assert topo.is_topology() == (True, None)

    def test_z4_whole_trivial(self):
        g = corpus_gyrogroup("z4")
        topo = generate_topology(g, full_family(g))
        assert [sorted(o) for o in topo.opens] == [[], [0, 1, 2, 3]]

    def test_klein_coset_topology(self):
        g = corpus_gyrogroup("klein4")
        topo = generate_topology(g, fam(g, [0, 1]))
        assert [sorted(o) for o in topo.opens] == [[], [0, 1], [2, 3], [0, 1, 2, 3]]

    def test_carrier_cap(self):
        g = from_group(cyclic(17))
        with pytest.raises(CarrierTooLargeError):
            generate_topology(g, singleton_family(g))

    def test_generated_opens_contain_translates_when_conditions_pass(self):
        for name in TOPOLOGY_CORPUS:
            g = corpus_gyrogroup(name)
            for label, family in standard_families(g).items():
                rep = check_conditions(g, family)
                topo = generate_topology(g, family)
                if all(rep.verdict_for(k).passed for k in range(1, 7)):
                    for a in range(g.order):
                        for U in family.sets:
                            assert topo.is_open(left_translate(g, a, U)), (name, label)


class TestFiniteTopology:
    def test_structural_validation_catches_missing_union(self):
        t = FiniteTopology.from_opens(3, [frozenset(), frozenset({0}),
                                          frozenset({1}), frozenset({0, 1, 2})])
        ok, witness = t.is_topology()
        assert not ok
        assert witness["kind"] == "union"

    def test_closure_and_interior_on_cosets(self):
        g = corpus_gyrogroup("z4")
        topo = generate_topology(g, fam(g, [0, 2]))
        assert sorted(topo.closure({0})) == [0, 2]
        assert sorted(topo.interior({0, 2, 3})) == [0, 2]
        assert topo.minimal_neighborhoods[1] == frozenset({1, 3})

    def test_base_check(self):
        g = corpus_gyrogroup("z4")
        family = singleton_family(g)
        topo = generate_topology(g, family)
        assert is_neighborhood_base(g, family, topo) == (True, None)
        # {0,1} translates are not open in the generated topology
        bad = fam(g, [0, 1])
        topo2 = generate_topology(g, bad)
        ok, witness = is_neighborhood_base(g, bad, topo2)
        assert not ok
        assert witness["kind"] == "translate_not_open"


class TestProperties:
    def test_discrete_z4_all_pass(self):
        g = corpus_gyrogroup("z4")
        topo = generate_topology(g, singleton_family(g))
        rep = check_topology_properties(g, topo)
        assert rep.passed

    def test_trivial_z4(self):
        g = corpus_gyrogroup("z4")
        topo = generate_topology(g, full_family(g))
        rep = check_topology_properties(g, topo)
        assert rep.verdict_for("addition_continuous").passed
        hv = rep.verdict_for("hausdorff")
        assert not hv.passed
        assert hv.witness == {"x": 0, "y": 1, "overlap": [0, 1, 2, 3]}
        assert not rep.verdict_for("t1").passed
        assert rep.verdict_for("regular").passed
        assert rep.verdict_for("completely_regular").passed

    def test_coset_topology_not_t1_but_continuous(self):
        g = corpus_gyrogroup("z4")
        topo = normal_subgyrogroup_base(g).topology
        rep = check_topology_properties(g, topo)
        assert rep.verdict_for("addition_continuous").passed
        assert rep.verdict_for("inversion_continuous").passed
        assert not rep.verdict_for("hausdorff").passed
        assert rep.verdict_for("left_translation_homeomorphism").passed
        assert rep.verdict_for("translates_of_opens_open").passed
        assert rep.verdict_for("interior_closure_expansion").passed

    def test_flags_subset(self):
        g = corpus_gyrogroup("z2")
        topo = generate_topology(g, singleton_family(g))
        rep = check_topology_properties(g, topo, flags=("hausdorff",))
        assert [v.name for v in rep.verdicts] == ["hausdorff"]
        with pytest.raises(ValueError):
            check_topology_properties(g, topo, flags=("nonsense",))

    def test_homeomorphisms_on_topological_instances(self):
        # whenever all nine conditions pass, translations and inversion
        # must map the generated open-set family onto itself
        for name in TOPOLOGY_CORPUS:
            g = corpus_gyrogroup(name)
            for label, family in standard_families(g).items():
                rep = check_conditions(g, family, mode="topo")
                if not rep.passed:
                    continue
                topo = generate_topology(g, family)
                props = check_topology_properties(g, topo, flags=(
                    "left_translation_homeomorphism",
                    "right_translation_homeomorphism",
                    "inversion_homeomorphism",
                ))
                assert props.passed, (name, label)

    def test_non_continuous_instance_detected(self):
        # {emptyset, {0,1}, G} over Z4: translation by 1 breaks openness
        g = corpus_gyrogroup("z4")
        topo = FiniteTopology.from_opens(
            4, [frozenset(), frozenset({0, 1}), frozenset(range(4))]
        )
        assert topo.is_topology()[0]
        rep = check_topology_properties(g, topo)
        assert not rep.verdict_for("translates_of_opens_open").passed


class TestNormalBase:
    def test_z4(self):
        res = normal_subgyrogroup_base(corpus_gyrogroup("z4"))
        assert [sorted(s) for s in res.family.sets] == [[0, 2], [0, 1, 2, 3]]
        passing = [v.condition for v in res.conditions.verdicts if v.passed]
        assert passing == [1, 2, 3, 4, 5, 6, 8, 9]
        v7 = res.conditions.verdict_for(7)
        assert not v7.passed
        assert v7.witness == {"intersection": [0, 2]}
        assert [sorted(o) for o in res.topology.opens] == [
            [], [0, 2], [1, 3], [0, 1, 2, 3]]

    def test_klein_matches_direct_generation(self):
        g = corpus_gyrogroup("klein4")
        res = normal_subgyrogroup_base(g)
        direct = generate_topology(g, res.family)
        assert res.topology == direct

    def test_trivial_group_has_no_family(self):
        g = from_group(cyclic(1))
        with pytest.raises(ValueError, match="empty"):
            normal_subgyrogroup_base(g)


class TestFamilyIO:
    def test_roundtrip(self):
        g = corpus_gyrogroup("z4")
        family = load_family('{"sets": [[0, 2], [0, 1, 2, 3]]}', g.order)
        assert family.sets == (frozenset({0, 2}), frozenset({0, 1, 2, 3}))
        assert load_family(family.to_json(), g.order) == family

    def test_bad_shapes(self):
        with pytest.raises(ValueError):
            load_family('{"wrong": []}', 4)
        with pytest.raises(ValueError):
            load_family('{"sets": [0]}', 4)
        with pytest.raises(ValueError):
            load_family('{"sets": [[9]]}', 4)
