from functools import lru_cache

import numpy as np
import pytest

from chansynth import dense
from chansynth.channel import identity, is_clifford, naive_mul, sde_profile
from chansynth.genset import CLIFFORD_CS, CLIFFORD_T, action_space
from chansynth.prune import (DEC, INC, SAME, EmptyMaskError, action_mask, classify_oracle,
                             classify_three_way, classify_two_way, interaction_table, select_mask,
                             side_labels)

from conftest import SMALL_SPACES, oracle_channel, reachable_states, ring_of


@lru_cache(maxsize=None)
def _dense_generators(flavor, n):
    space = action_space(n, flavor)
    if flavor == CLIFFORD_T:
        return [oracle_channel(dense.r_unitary(g[0], n)) for g in space.generators]
    return [oracle_channel(dense.g_unitary(g[0], g[1], n), "dyadic") for g in space.generators]


def _brute_labels(m, flavor, n):
    out = []
    for g in _dense_generators(flavor, n):
        k = naive_mul(g, m).sde()
        out.append(INC if k > m.sde() else SAME if k == m.sde() else DEC)
    return np.array(out)


@pytest.mark.parametrize("flavor, n", SMALL_SPACES)
def test_classifiers_match_brute_force(flavor, n):
    space = action_space(n, flavor)
    for m in reachable_states(flavor, n, 40, seed=101):
        for view in (m, m.transpose()):
            ref = _brute_labels(view, flavor, n)
            prof = sde_profile(view)
            assert (classify_three_way(view, prof, space) == ref).all()
            assert (classify_two_way(view, prof, space) == (ref == INC)).all()
        assert (classify_oracle(m, space, "right") == side_labels(m, space)[1]).all()


def test_identity_labels():
    for flavor, n in SMALL_SPACES:
        space = action_space(n, flavor)
        m = identity(n, ring_of(flavor))
        assert (classify_three_way(m, None, space) == _brute_labels(m, flavor, n)).all()
        assert (classify_three_way(m, None, space) == INC).all()


def test_t_channel_labels():
    space = action_space(1, CLIFFORD_T)
    t = oracle_channel(dense.T)
    labels = classify_three_way(t, None, space)
    assert labels[space.index_of("Z")] != INC
    assert (labels == _brute_labels(t, CLIFFORD_T, 1)).all()


def test_dec_example():
    # T^dagger T style state: the only max column pair collapses, nothing else keeps k_max
    space = action_space(1, CLIFFORD_T)
    t = oracle_channel(dense.T)
    labels = classify_three_way(t.transpose(), None, space)
    assert labels[space.index_of("Z")] == DEC


def test_copy_row_keeps_same():
    space = action_space(2, CLIFFORD_T)
    found = 0
    for m in reachable_states(CLIFFORD_T, 2, 60, seed=303):
        prof = sde_profile(m)
        if prof.k_max == 0:
            continue
        max_rows = prof.max_mask.any(axis=1)
        labels = classify_three_way(m, prof, space)
        for i in range(len(space)):
            g = space.channel(i)
            if labels[i] != INC and (max_rows & ~g.mixed).any():
                assert labels[i] == SAME
                found += 1
    assert found > 0


def test_interaction_table_matches_generators():
    space = action_space(2, CLIFFORD_T)
    tab = interaction_table(space)
    for i in range(len(space)):
        g = space.channel(i)
        pairs = tab.pairs(i)
        assert len(pairs) == len(g.mixed_rows) // 2
        for r, s in pairs:
            assert g.partners[r, 0] == s and g.partners[s, 0] == r


def test_select_mask_rules():
    left = np.array([INC, INC, SAME, INC])
    right = np.array([DEC, SAME, INC, INC])
    lm, rm = select_mask(left, right)
    assert lm.tolist() == [False, False, True, False]
    assert rm.tolist() == [True, True, False, False]  # tie goes to non-inc
    lm, _ = select_mask(np.array([INC, INC]), np.array([SAME, SAME]))
    assert lm.tolist() == [True, True]
    with pytest.raises(EmptyMaskError):
        select_mask(np.array([], dtype=np.int8), np.array([], dtype=np.int8))


@pytest.mark.parametrize("flavor, n", SMALL_SPACES)
def test_mask_never_empty(flavor, n):
    space = action_space(n, flavor)
    for m in reachable_states(flavor, n, 80, seed=202, d_max=25):
        if is_clifford(m):
            continue
        _, _, lm, rm = action_mask(m, space)
        assert lm.any() or rm.any()


def test_toffoli_has_only_increasing_moves():
    from chansynth.harness.fixtures import fixture
    m = fixture("toffoli")
    left, right, lm, rm = action_mask(m, action_space(3, CLIFFORD_T))
    assert (left == INC).all() and (right == INC).all()
    assert lm.all() and rm.all()
