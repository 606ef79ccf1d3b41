import itertools

import pytest

from chansynth import dense
from chansynth.channel import DYADIC, is_clifford, naive_mul
from chansynth.genset import (CLIFFORD_CS, CLIFFORD_T, Action, action_space, action_unitary,
                              canonical_cs_pair, cs_class, cs_count_formula, enumerate_cs, enumerate_t)
from chansynth.pauli import commutes

from conftest import oracle_channel


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_t_generator_count(n):
    space = enumerate_t(n)
    assert len(space) == 4 ** n - 1
    assert space.num_actions == 2 * (4 ** n - 1)
    assert space.num_slots == 2 * 4 ** n
    assert [g[0] for g in space.generators] == list(range(1, 4 ** n))


def test_identity_slots_are_masked():
    space = enumerate_t(2)
    assert space.action_at(0) is None and space.action_at(16) is None
    assert sum(space.action_at(s) is not None for s in range(space.num_slots)) == 30


def _ordered_commuting_pairs(n):
    d = 4 ** n
    return [(p, q) for p, q in itertools.permutations(range(1, d), 2) if commutes(p, q)]


def test_cs_generator_count_two_ways():
    pairs = _ordered_commuting_pairs(2)
    assert len(pairs) == 90
    classes = {canonical_cs_pair(p, q) for p, q in pairs}
    assert len(classes) == 15 == len(enumerate_cs(2))
    assert cs_count_formula(2) == 15


def test_cs_classes_partition_pairs():
    pairs = _ordered_commuting_pairs(2)
    seen = {}
    for p, q in pairs:
        seen.setdefault(canonical_cs_pair(p, q), set()).add((p, q))
    assert all(len(v) == 6 for v in seen.values())
    for rep, members in seen.items():
        assert set(cs_class(*rep)) == members


def test_cs_class_members_agree_up_to_clifford():
    space = enumerate_cs(2)
    for rep in space.generators:
        base = oracle_channel(dense.g_unitary(*rep, 2), DYADIC)
        for p, q in cs_class(*rep):
            other = oracle_channel(dense.g_unitary(p, q, 2), DYADIC)
            assert is_clifford(naive_mul(base.transpose(), other))


def test_no_two_cs_generators_share_a_class():
    space = enumerate_cs(3)
    reps = [canonical_cs_pair(*g) for g in space.generators]
    assert len(set(reps)) == len(reps) == len(space)


@pytest.mark.parametrize("flavor, n", [(CLIFFORD_T, 2), (CLIFFORD_CS, 2), (CLIFFORD_T, 3)])
def test_index_roundtrip(flavor, n):
    space = action_space(n, flavor)
    for a in space.actions():
        assert space.action_at(space.slot(a)) == a
        assert space.action_from_json(space.action_to_json(a)) == a
        assert space.index_of(space.gen_label(a.gen)) == a.gen


def test_cs_index_accepts_any_class_member():
    space = enumerate_cs(2)
    for i, rep in enumerate(space.generators):
        for p, q in cs_class(*rep):
            assert space.index_of((p, q)) == i


def test_action_unitary_shared_between_sides():
    space = enumerate_t(1)
    assert action_unitary(space, Action(0, "left")) is action_unitary(space, Action(0, "right"))
    with pytest.raises(IndexError):
        action_unitary(space, Action(5, "left"))
    with pytest.raises(ValueError):
        Action(0, "middle")


def test_enumeration_is_deterministic():
    enumerate_cs.cache_clear()
    first = enumerate_cs(2).generators
    enumerate_cs.cache_clear()
    assert enumerate_cs(2).generators == first


def test_cs_space_is_empty_on_one_qubit():
    assert len(enumerate_cs(1)) == 0
