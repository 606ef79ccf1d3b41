import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chansynth import dense
from chansynth.channel import (DYADIC, SQRT2, ChannelMatrix, coset_label, extract_residue,
                               generator_channel, identity, is_clifford, kron_identity, left_mul_fast,
                               naive_mul, random_clifford_action, right_mul_fast, sde_profile)
from chansynth.genset import CLIFFORD_CS, CLIFFORD_T, action_space
from chansynth.pauli import commutes, from_string
from chansynth.ring import SqrtExt

from conftest import SMALL_SPACES, oracle_channel, reachable_states, ring_of

X, Z, Y = 1, 2, 3


def _gens(flavor, n):
    space = action_space(n, flavor)
    return [space.channel(i) for i in range(len(space))]


# --- construction ------------------------------------------------------------------------

@pytest.mark.parametrize("ring", [SQRT2, DYADIC])
@pytest.mark.parametrize("n", [1, 2])
def test_identity(ring, n):
    m = identity(n, ring)
    assert m.dim == 4 ** n and m.sde() == 0 and is_clifford(m)
    assert m == oracle_channel(dense.eye(2 ** n), ring)
    assert m.transpose() == m


def test_t_channel_example():
    m = oracle_channel(dense.T)
    h = SqrtExt(1, 0, 1)
    assert m.entry(X, X) == h and m.entry(Y, X) == h
    assert m.entry(X, Y) == -h and m.entry(Y, Y) == h
    assert m.entry(0, 0) == SqrtExt(1, 0, 0) and m.entry(Z, Z) == SqrtExt(1, 0, 0)
    assert m.sde() == 1 and not is_clifford(m)


def test_cs_channel_entries():
    m = oracle_channel(dense.CS)
    allowed = {SqrtExt(0, 0, 0), SqrtExt(1, 0, 0), SqrtExt(-1, 0, 0), SqrtExt(1, 0, 2), SqrtExt(-1, 0, 2)}
    assert {e for row in m.entries() for e in row} <= allowed
    assert oracle_channel(dense.CS, DYADIC).sde() == 1


def test_json_roundtrip():
    for m in reachable_states(CLIFFORD_T, 2, 5, seed=1) + reachable_states(CLIFFORD_CS, 2, 5, seed=2):
        assert ChannelMatrix.from_json(m.to_json()) == m


def test_from_entries_matches_dense_floats():
    for m in reachable_states(CLIFFORD_T, 1, 10, seed=3):
        f = m.to_float()
        assert np.allclose(f.T @ f, np.eye(4))
        back = ChannelMatrix.from_entries(1, SQRT2, m.entries())
        assert back == m


# --- generators --------------------------------------------------------------------------

def test_rz_row_actions():
    g = generator_channel((Z,), 1)
    assert set(g.copy_rows.tolist()) == {0, Z}
    assert sorted(g.mixed_rows.tolist()) == [X, Y]
    assert g.partners[X, 0] == Y and g.partners[Y, 0] == X


@pytest.mark.parametrize("n", [1, 2])
def test_r_channels_match_dense(n):
    for p in range(1, 4 ** n):
        g = generator_channel((p,), n)
        assert g.to_channel() == oracle_channel(dense.r_unitary(p, n))
        assert len(g.copy_rows) == 4 ** n // 2
        for r in g.mixed_rows:
            assert g.partners[r, 0] == r ^ p


def test_g_channels_match_dense_all_ordered_pairs():
    n = 2
    for p1, p2 in itertools.permutations(range(1, 16), 2):
        if not commutes(p1, p2):
            continue
        g = generator_channel((p1, p2), n)
        assert g.to_channel() == oracle_channel(dense.g_unitary(p1, p2, n), DYADIC)
        for r in range(16):
            both = commutes(r, p1) and commutes(r, p2)
            assert bool(g.mixed[r]) == (not both)
            if not both:
                assert sorted(g.partners[r].tolist()) == sorted([r ^ p1, r ^ p2, r ^ p1 ^ p2])


def test_cs_is_the_z_pair_generator():
    g = generator_channel((from_string("ZI"), from_string("IZ")), 2)
    assert g.to_channel() == oracle_channel(dense.CS, DYADIC)


def test_invalid_pair_rejected():
    with pytest.raises(ValueError):
        generator_channel((X, Z), 1)
    with pytest.raises(ValueError):
        generator_channel((Z, Z), 1)


# --- multiplication ----------------------------------------------------------------------

@pytest.mark.parametrize("flavor, n", SMALL_SPACES)
def test_fast_equals_naive(flavor, n):
    gens = _gens(flavor, n)
    rng = np.random.default_rng(7)
    for m in reachable_states(flavor, n, 40, seed=11):
        g = gens[int(rng.integers(len(gens)))]
        gm = g.to_channel()
        left = left_mul_fast(g, m)
        right = right_mul_fast(m, g)
        assert left == naive_mul(gm, m)
        assert right == naive_mul(m, gm)
        assert abs(left.sde() - m.sde()) <= 1 and abs(right.sde() - m.sde()) <= 1
        # transposition identity
        assert left_mul_fast(g, m.transpose()).transpose() == right_mul_fast(m, g.transpose())


@pytest.mark.parametrize("flavor, n", SMALL_SPACES)
def test_generator_times_identity(flavor, n):
    eye = identity(n, ring_of(flavor))
    for g in _gens(flavor, n):
        assert left_mul_fast(g, eye) == g.to_channel() == right_mul_fast(eye, g)


def test_naive_mul_properties():
    states = reachable_states(CLIFFORD_T, 1, 9, seed=5)
    eye = identity(1)
    for a, b, c in zip(states[::3], states[1::3], states[2::3]):
        assert naive_mul(a, eye) == a == naive_mul(eye, a)
        assert naive_mul(naive_mul(a, b), c) == naive_mul(a, naive_mul(b, c))
        assert naive_mul(a, b).transpose() == naive_mul(b.transpose(), a.transpose())


@pytest.mark.parametrize("flavor, n", SMALL_SPACES)
def test_orthogonality_preserved(flavor, n):
    for m in reachable_states(flavor, n, 10, seed=21, d_max=20):
        assert naive_mul(m.transpose(), m) == identity(n, ring_of(flavor))


def test_large_entries_promote_instead_of_overflowing():
    gens = _gens(CLIFFORD_T, 1)
    m = identity(1)
    rng = np.random.default_rng(0)
    last = None
    steps = 0
    while m.sde() < 140:
        g = gens[int(rng.integers(3))]
        nxt = left_mul_fast(g, m)
        if nxt.sde() > m.sde():
            m = nxt
        steps += 1
        assert steps < 10_000
    assert m.a.dtype == object
    f = m.to_float()
    assert np.allclose(f.T @ f, np.eye(4))
    assert naive_mul(m.transpose(), m) == identity(1)


# --- profile, Clifford detection ---------------------------------------------------------

def test_profile_identity_and_t():
    p = sde_profile(identity(2))
    assert p.k_max == 0
    assert [list(s) for s in p.s_col] == [[j] for j in range(16)]
    t = sde_profile(oracle_channel(dense.T))
    assert t.k_max == 1
    assert list(t.s_col[X]) == [X, Y] and list(t.s_col[Y]) == [X, Y]
    assert len(t.s_col[0]) == 0 and len(t.s_col[Z]) == 0


@pytest.mark.parametrize("flavor, n", SMALL_SPACES)
def test_profile_against_scan(flavor, n):
    for m in reachable_states(flavor, n, 20, seed=31):
        p = sde_profile(m)
        sde = m.entry_sde()
        odd = (m.entry_arrays()[0] % 2).astype(bool)
        k = p.k_max
        assert k == sde.max()
        for j in range(m.dim):
            col = sde[:, j]
            if k > 0:
                assert list(p.s_col[j]) == list(np.flatnonzero(col == k))
                # one level down, only odd canonical numerators count (this excludes zeros at level 0)
                assert list(p.s_col_second[j]) == list(np.flatnonzero((col == k - 1) & odd[:, j]))
        if k > 0:
            assert list(p.s_col1) == [j for j in range(m.dim) if (sde[:, j] == k).sum() == 1]


def test_is_clifford_and_residue():
    assert not is_clifford(oracle_channel(dense.T))
    rng = np.random.default_rng(3)
    for _ in range(10):
        perm = rng.permutation(16)
        signs = rng.choice([-1, 1], 16)
        m = ChannelMatrix.from_signed_permutation(2, SQRT2, perm, signs)
        assert is_clifford(m)
        r = extract_residue(m)
        assert r.to_channel(2, SQRT2) == m
    with pytest.raises(ValueError):
        extract_residue(oracle_channel(dense.T))


def test_cz_and_h_channels_are_clifford():
    assert is_clifford(oracle_channel(dense.CZ))
    assert is_clifford(oracle_channel(dense.H))
    assert is_clifford(oracle_channel(dense.CNOT, DYADIC))


def test_kron_identity_matches_dense():
    t_on_1 = kron_identity(oracle_channel(dense.T), [1], 2)
    assert t_on_1 == oracle_channel(dense.embed(dense.T, [1], 2))


# --- coset labels ------------------------------------------------------------------------

@pytest.mark.parametrize("flavor, n", SMALL_SPACES)
def test_coset_label_invariance(flavor, n):
    rng = np.random.default_rng(41)
    for m in reachable_states(flavor, n, 30, seed=42):
        lab = coset_label(m)
        assert coset_label(lab) == lab
        c = random_clifford_action(m, rng)
        assert c.sde() == m.sde()
        assert coset_label(c) == lab


def test_coset_label_identity():
    lab = coset_label(identity(1))
    assert is_clifford(lab) and (lab.a >= 0).all()


def _clifford_group_1q():
    gens = [oracle_channel(dense.H), oracle_channel(dense.S)]
    group = {identity(1).key(): identity(1)}
    frontier = [identity(1)]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = naive_mul(g, m)
                if p.key() not in group:
                    group[p.key()] = p
                    nxt.append(p)
        frontier = nxt
    return list(group.values())


def test_distinct_cosets_have_distinct_labels():
    cliffords = _clifford_group_1q()
    assert len(cliffords) == 24
    t = oracle_channel(dense.T)
    prods = [naive_mul(c, t) for c in cliffords]
    for a, b in itertools.combinations(prods, 2):
        same_coset = is_clifford(naive_mul(a.transpose(), b))
        assert (coset_label(a) == coset_label(b)) == same_coset


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_random_clifford_action_is_signed_permutation(seed):
    m = reachable_states(CLIFFORD_T, 1, 1, seed=seed)[0]
    c = random_clifford_action(m, seed)
    q = naive_mul(m.transpose(), c)
    assert is_clifford(q)
