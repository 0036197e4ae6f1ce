import pytest

from hurwitz.blocks import (
    BlockDecomposition,
    all_block_systems,
    block_grouping_of,
    cycle_type_block_groupings,
    factor_covering,
    find_block_decomposition,
    induced_cycle_type,
    induced_permutation,
    verify_filtration,
)
from hurwitz.core import check_compatibility, format_datum, parse_datum
from hurwitz.perms import cycle_type, parse_cycles
from hurwitz.realizer import FOUND, search
from conftest import brute_block_systems


class TestGroupings:
    def test_two_part_example(self):
        got = list(cycle_type_block_groupings((4, 2), 3))
        assert got == [(((4, 2), 2),)]
        assert induced_cycle_type(got[0]) == (2,)

    def test_single_cycle(self):
        got = list(cycle_type_block_groupings((6,), 3))
        assert got == [(((6,), 2),)]
        assert induced_cycle_type(got[0]) == (2,)

    def test_no_grouping(self):
        assert list(cycle_type_block_groupings((3, 1), 2)) == []

    def test_precondition(self):
        with pytest.raises(ValueError):
            list(cycle_type_block_groupings((2, 2), 3))
        with pytest.raises(ValueError):
            list(cycle_type_block_groupings((2, 2), 4))

    def test_multiset_groupings_unique(self):
        got = list(cycle_type_block_groupings((2, 2, 2, 2), 4))
        assert len(got) == len(set(got))
        # every grouping's blocks add up to the degree
        for grouping in got:
            assert sum(sum(g) for g, _ in grouping) == 8


class TestFindDecomposition:
    def test_cyclic_four(self):
        g = parse_cycles("(1 2 3 4)", 4)
        bd = find_block_decomposition([g], 2)
        assert bd is not None
        assert bd.blocks() == ((0, 2), (1, 3))
        assert str(bd) == "k=2 blocks={1,3}{2,4}"

    def test_symmetric_group_primitive(self):
        gens = [parse_cycles("(1 2)", 4), parse_cycles("(1 2 3 4)", 4)]
        assert find_block_decomposition(gens, 2) is None
        gens5 = [parse_cycles("(1 2)", 5), parse_cycles("(1 2 3 4 5)", 5)]
        assert all_block_systems(gens5) == []

    def test_requires_transitive(self):
        with pytest.raises(ValueError):
            find_block_decomposition([parse_cycles("(1 2 3 4)(5 6)", 6)], 2)

    def test_requires_proper_divisor(self):
        g = parse_cycles("(1 2 3 4)", 4)
        for bad in (1, 3, 4):
            with pytest.raises(ValueError):
                find_block_decomposition([g], bad)

    def test_join_closure_finds_coarse_systems(self):
        # elementary abelian group of order 8 acting on itself: all the
        # pairwise closures have blocks of size 2, yet size-4 systems exist
        gens = [
            parse_cycles("(1 2)(3 4)(5 6)(7 8)", 8),
            parse_cycles("(1 3)(2 4)(5 7)(6 8)", 8),
            parse_cycles("(1 5)(2 6)(3 7)(4 8)", 8),
        ]
        bd = find_block_decomposition(gens, 4)
        assert bd is not None
        assert sorted(len(b) for b in bd.blocks()) == [4, 4]
        ours = {b.blocks() for b in
                (BlockDecomposition(4, a) for a in all_block_systems(gens)
                 if len(set(a)) == 2)}
        brute = set(brute_block_systems(gens, 4))
        assert ours == brute

    def test_agrees_with_brute_force_on_cyclic_eight(self):
        g = parse_cycles("(1 2 3 4 5 6 7 8)", 8)
        for k in (2, 4):
            bd = find_block_decomposition([g], k)
            brute = brute_block_systems([g], k)
            assert (bd is not None) == bool(brute)
            if bd is not None:
                assert bd.blocks() in brute


class TestInduced:
    def test_not_preserved_raises(self):
        bd = BlockDecomposition(2, (0, 0, 1, 1))
        with pytest.raises(ValueError):
            induced_permutation(bd, parse_cycles("(2 3)", 4))

    def test_grouping_matches_prediction(self):
        g = parse_cycles("(1 2 3 4)(5 6)", 6)
        h = parse_cycles("(1 5)(2 6)(3 4)", 6)
        systems = all_block_systems([g, h])
        for assignment in systems:
            k = 6 // len(set(assignment))
            bd = BlockDecomposition(k, assignment)
            for tau in (g, h):
                grouping = block_grouping_of(bd, tau)
                assert grouping in set(cycle_type_block_groupings(cycle_type(tau), k))
                assert induced_cycle_type(grouping) == cycle_type(
                    induced_permutation(bd, tau)
                )


class TestFactorCovering:
    def test_worked_example(self):
        datum = parse_datum("d=6 cover=O0 base=O0 parts=[3,3|2,2,2|2,2,2]")
        res = search(datum)
        assert res.status == FOUND
        bd = find_block_decomposition(list(res.realization.taus), 3)
        assert bd is not None
        inner, outer = factor_covering(datum, res.realization, bd)
        assert format_datum(outer) == "d=2 cover=O0 base=O0 parts=[2|2]"
        assert format_datum(inner) == "d=3 cover=O0 base=O0 parts=[3|3]"
        assert check_compatibility(inner).compatible
        assert check_compatibility(outer).compatible

    def test_factored_data_compatible_across_witnesses(self):
        from hurwitz import enumerate_compatible
        from hurwitz.core import SPHERE

        seen = 0
        for datum in enumerate_compatible(8, [3], SPHERE, SPHERE):
            res = search(datum)
            if res.status != FOUND:
                continue
            gens = list(res.realization.taus)
            for assignment in all_block_systems(gens):
                k = 8 // len(set(assignment))
                bd = BlockDecomposition(k, assignment)
                inner, outer = factor_covering(datum, res.realization, bd)
                assert check_compatibility(inner).compatible
                assert check_compatibility(outer).compatible
                assert inner.degree * outer.degree == 8
                seen += 1
        assert seen > 5


class TestFiltration:
    def test_worked_examples(self):
        for line in (
            "d=6 cover=O0 base=O0 parts=[3,3|2,2,2|2,2,2]",
            "d=8 cover=O0 base=O0 parts=[4,4|2,2,2,2|2,2,2,2]",
            "d=8 cover=O0 base=O0 parts=[4,4|4,2,1,1|2,2,2,2]",
        ):
            datum = parse_datum(line)
            res = search(datum)
            assert res.status == FOUND
            assert verify_filtration(datum, res.realization)

    def test_helper_rejects_non_very_even(self):
        datum = parse_datum("d=4 cover=O0 base=O0 parts=[4|3,1|2,1,1]")
        res = search(datum)
        with pytest.raises(ValueError):
            verify_filtration(datum, res.realization)

    def test_rejects_foreign_witness(self):
        good = parse_datum("d=6 cover=O0 base=O0 parts=[3,3|2,2,2|2,2,2]")
        other = parse_datum("d=6 cover=O0 base=O0 parts=[6|2,2,2|2,2,1,1]")
        res = search(other)
        assert res.status == FOUND
        with pytest.raises(ValueError):
            verify_filtration(good, res.realization)
