import itertools
import random

import pytest

from crn2dsd import (CompileError, CompileOptions, allocate_toeholds,
                     buffer_sets, build_system, check_fanin_bound, compile_crn,
                     compile_reaction, final_reactant, make_crn, parse_crn,
                     validate_ordering)
from crn2dsd.compiler import final_groups
from crn2dsd.dsd import Role
from crn2dsd.export import system_to_dict, to_json
from _gen import random_crn, random_valid_crn


def brute_force_min_labels(crn):
    """Smallest number of linker labels admitting a valid assignment:
    pairwise distinct within every final-reactant group. Independent of the
    allocator's greedy strategy."""
    n = len(crn.reactions)
    groups = list(final_groups(crn).values())
    for count in range(1, n + 1):
        for assignment in itertools.product(range(count), repeat=n):
            if all(len({assignment[rid] for rid in group}) == len(group)
                   for group in groups):
                return count
    return n


def test_allocation_distinct_within_group():
    crn = make_crn([("A", "B", "Z"), ("C", "D", "Z"), ("E", "F", "Z")])
    asg = allocate_toeholds(crn)
    labels = [asg.linker_of[i].label for i in range(3)]
    assert sorted(labels) == ["t1", "t2", "t3"]
    assert all(label != asg.universal.label for label in labels)


def test_allocation_reuses_across_groups():
    crn = make_crn([("A", "B", "Z"), ("C", "D", "W")])
    asg = allocate_toeholds(crn)
    assert asg.linker_of[0].label == asg.linker_of[1].label == "t1"


def test_allocation_minimality_on_mixed_groups():
    # groups of sizes 3 and 2: brute force confirms 2 labels cannot work
    crn = make_crn([("A", "B", "Z"), ("C", "D", "Z"), ("E", "F", "Z"),
                    ("A", "B", "W"), ("C", "D", "W")])
    asg = allocate_toeholds(crn)
    assert asg.label_count() == 3
    assert brute_force_min_labels(crn) == 3


def test_allocation_never_uses_universal():
    rng = random.Random(11)
    for _ in range(50):
        crn = random_crn(rng)
        asg = allocate_toeholds(crn)
        assert all(d.label != asg.universal.label
                   for d in asg.linker_of.values())


def test_fanin_bound_warnings():
    crn = make_crn([("A", "B", "Z"), ("C", "D", "Z"), ("E", "F", "Z")])
    assert check_fanin_bound(crn) == []
    crn4 = make_crn([("A", "B", "Z"), ("C", "D", "Z"), ("E", "F", "Z"),
                     ("G", "H", "Z")])
    assert check_fanin_bound(crn4) == [("Z", 4)]
    assert check_fanin_bound(make_crn([])) == []


def test_bimolecular_gadget_structure():
    crn = make_crn([("A", "B")], [("C",)])
    g = compile_reaction(crn.reactions[0], allocate_toeholds(crn))
    assert [d.name for d in g.backbone.domains] == [
        "t*", "x_A*", "t*", "x_B*", "t1*"]
    assert g.buffer1.key == "x_A.t"
    assert g.buffer2 is None
    assert g.cover.key == "x_B.t1"
    assert g.linker.key == "x_B.t1.j0"
    assert [d.name for d in g.out_backbone.domains] == ["j0*", "x_C*"]
    assert g.stages == ("Fresh", "R1Bound", "FinalBound", "LinkerBound")


def test_termolecular_gadget_structure():
    crn = make_crn([("A", "B", "C")], [("X",)])
    g = compile_reaction(crn.reactions[0], allocate_toeholds(crn))
    assert [d.name for d in g.backbone.domains] == [
        "t*", "x_A*", "t*", "x_B*", "t*", "x_C*", "t1*"]
    assert g.buffer1.key == "x_A.t"
    assert g.buffer2.key == "x_B.t"
    assert g.linker.key == "x_C.t1.j0"
    assert g.buffers_initial == (g.buffer1, g.buffer2)
    assert g.stages == ("Fresh", "R1Bound", "R2Bound", "FinalBound",
                        "LinkerBound")


def test_shared_first_reactant_shares_buffer_identity():
    crn = make_crn([("A", "B"), ("A", "C")])
    sys_ = compile_crn(crn)
    assert sys_.gadgets[0].buffer1.key == sys_.gadgets[1].buffer1.key == "x_A.t"


def test_gadget_strand_layout_invariants():
    rng = random.Random(5)
    for _ in range(20):
        sys_ = compile_crn(random_valid_crn(rng))
        for g in sys_.gadgets:
            sp = [d.name for d in g.buffer1.domains]
            assert sp == [f"x_{g.reaction.reactants[0]}", "t"]
            if g.reaction.arity == 3:
                assert [d.name for d in g.buffer2.domains] == [
                    f"x_{g.reaction.reactants[1]}", "t"]
            else:
                assert g.buffer2 is None
            fin = final_reactant(g.reaction)
            assert [d.name for d in g.linker.domains[:2]] == [
                f"x_{fin}", g.linker_toehold.label]
            assert g.linker.role is Role.LINKER
            assert g.backbone.role is Role.GATE_BACKBONE


def test_compile_crn_on_example(example_crn, example_system):
    assert len(example_system.gadgets) == 4
    assert example_system.assignment.label_count() == 3
    assert example_system.initial_counts["g1.r0.Fresh"] == 100
    assert example_system.initial_counts["t.x_A0"] == 20
    assert example_system.initial_counts["t.x_O1"] == 0


def test_compile_rejects_ordering_violation():
    crn = make_crn([("X", "Y", "Z1"), ("W", "X", "V")])
    with pytest.raises(CompileError) as exc:
        compile_crn(crn)
    assert exc.value.kind == "ordering"
    assert [(v.species, v.first_in, v.second_in)
            for v in exc.value.violations] == [("X", 0, 1)]
    fixed = compile_crn(crn, CompileOptions(fix_order=True))
    assert validate_ordering(fixed.crn) == []


def test_compile_rejects_infeasible_repair():
    with pytest.raises(CompileError) as exc:
        compile_crn(make_crn([("X", "X", "Z")]), CompileOptions(fix_order=True))
    assert exc.value.kind == "infeasible"
    assert exc.value.witness == frozenset({0})


def test_compile_rejects_unimolecular():
    crn = parse_crn("A -> B")
    with pytest.raises(CompileError) as exc:
        compile_crn(crn)
    assert exc.value.kind == "arity"


def test_compile_empty_crn():
    sys_ = compile_crn(make_crn([]))
    assert sys_.gadgets == ()
    assert sys_.initial_counts == {}
    assert sys_.gc_sinks == frozenset()


def test_buffer_sets_disjoint_iff_ordering_valid():
    valid = compile_crn(make_crn([("A", "B", "Z"), ("C", "D")]))
    b1, b2 = buffer_sets(valid)
    assert not (b1 & b2)
    assert b2 == valid.gc_sinks

    invalid = make_crn([("X", "Y", "Z1"), ("W", "X", "V")])
    forced = build_system(invalid, allocate_toeholds(invalid))
    b1, b2 = buffer_sets(forced)
    assert "x_X.t" in b1 and "x_X.t" in b2


def test_bimolecular_only_has_empty_buffer2_set():
    sys_ = compile_crn(make_crn([("A", "B"), ("C", "D")]))
    _, b2 = buffer_sets(sys_)
    assert b2 == frozenset()
    assert sys_.gc_sinks == frozenset()


def test_compile_is_deterministic(example_crn):
    opts = CompileOptions(initial={"A0": 20, "A1": 20, "B0": 20, "B1": 20,
                                   "Z": 20})
    first = to_json(system_to_dict(compile_crn(example_crn, opts)))
    second = to_json(system_to_dict(compile_crn(example_crn, opts)))
    assert first == second


def test_allocator_minimality_against_brute_force_random():
    rng = random.Random(23)
    for _ in range(40):
        crn = random_crn(rng, max_reactions=5, max_species=4)
        asg = allocate_toeholds(crn)
        for group in final_groups(crn).values():
            labels = [asg.linker_of[rid].label for rid in group]
            assert len(set(labels)) == len(labels)
        expected = max((len(v) for v in final_groups(crn).values()), default=0)
        assert asg.label_count() == expected
        if crn.reactions:
            assert brute_force_min_labels(crn) == expected


def test_sabotage_mutates_exactly_one_thing(example_crn):
    from crn2dsd import (sabotage_linker_equals_t,
                         sabotage_share_linker_toehold, sabotage_swap_order)
    sys_ = compile_crn(example_crn)
    shared = sabotage_share_linker_toehold(sys_.crn, sys_.assignment)
    diff = [rid for rid in shared.linker_of
            if shared.linker_of[rid] != sys_.assignment.linker_of[rid]]
    assert len(diff) == 1

    equal_t = sabotage_linker_equals_t(sys_.crn, sys_.assignment)
    diff = [rid for rid in equal_t.linker_of
            if equal_t.linker_of[rid] != sys_.assignment.linker_of[rid]]
    assert len(diff) == 1
    assert equal_t.linker_of[diff[0]] == equal_t.universal

    swapped = sabotage_swap_order(sys_.crn)
    changed = [r.id for r, s in zip(sys_.crn.reactions, swapped.reactions)
               if r.reactants != s.reactants]
    assert len(changed) == 1
    before = sys_.crn.reactions[changed[0]]
    after = swapped.reactions[changed[0]]
    assert after.reactants == (before.reactants[1], before.reactants[0],
                               before.reactants[2])
    assert after.products == before.products
