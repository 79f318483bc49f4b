import random

import pytest
import sympy
from hypothesis import given, strategies as st

from codedagg.commitment import (
    CommitmentSet,
    PrimeOrderGroup,
    PublicParams,
    commit,
    commit_user,
    default_group,
    find_group,
    trusted_setup,
    verify_round1,
    verify_round2,
)
from codedagg.errors import DimensionMismatch, InvalidGroup, RoundTwoNotApplicable
from codedagg.field import MERSENNE_61, PrimeField
from codedagg.sharing import build_round1_poly, build_round2_poly, make_shares, partition_update, MaskSet


def dlog_oracle(group, beta, v):
    """commit(v) computed as g^<v, (1, beta, beta^2, ...)> with the trapdoor."""
    e = sum(x * pow(beta, j, group.p) for j, x in enumerate(v)) % group.p
    return pow(group.g, e, group.q)


def setup_user(group, K, T, dim, rng, beta=None):
    pp, beta = trusted_setup(group, dim, rng.randrange(1 << 30), beta=beta)
    p = group.p
    w = tuple(rng.randrange(p) for _ in range(K * dim))
    u = partition_update(1, w, K)
    z = tuple(tuple(rng.randrange(p) for _ in range(dim)) for _ in range(T))
    r = tuple(tuple(rng.randrange(p) for _ in range(dim)) for _ in range(T))
    masks = MaskSet(z, r)
    cs = commit_user(pp, 1, u.partitions, z, r)
    return pp, beta, u, masks, cs


def test_setup_example(tiny_group):
    pp, beta = trusted_setup(tiny_group, 2, 0, beta=3)
    assert beta == 3
    assert pp.powers == (4, 18)
    assert trusted_setup(tiny_group, 1, 0)[0].powers == (4,)
    assert set(trusted_setup(tiny_group, 5, 0, beta=1)[0].powers) == {4}


def test_commit_example(tiny_group):
    pp, _ = trusted_setup(tiny_group, 2, 0, beta=3)
    assert commit(pp, (2, 1)) == 12
    assert commit(pp, (0, 0)) == 1
    assert commit(pp, (2, 1)) == commit(pp, (2, 1))


def test_commit_length_mismatch(tiny_group):
    pp, _ = trusted_setup(tiny_group, 2, 0)
    with pytest.raises(DimensionMismatch):
        commit(pp, (1, 2, 3))


def test_setup_samples_nonzero_beta(tiny_group):
    for seed in range(40):
        _, beta = trusted_setup(tiny_group, 1, seed)
        assert 1 <= beta < 11
    with pytest.raises(ValueError):
        trusted_setup(tiny_group, 0, 0)


@pytest.mark.parametrize("bad", [(11, 23, 1), (11, 23, 5), (11, 29, 4), (12, 25, 4), (11, 13, 4)])
def test_degenerate_groups_rejected(bad):
    with pytest.raises(InvalidGroup):
        PrimeOrderGroup(*bad)


def test_find_group_small_primes():
    for p in (11, 17, 31, 101):
        grp = find_group(p)
        assert sympy.isprime(grp.q) and (grp.q - 1) % p == 0
        assert grp.g != 1 and pow(grp.g, p, grp.q) == 1


def test_default_group():
    grp = default_group()
    assert grp.p == MERSENNE_61
    assert (grp.q - 1) % grp.p == 0 and sympy.isprime(grp.q)
    assert grp.q.bit_length() == 67
    assert grp.security_warning(128) is not None
    assert grp.security_warning(30) is None


@given(st.lists(st.integers(0, 10), min_size=3, max_size=3), st.lists(st.integers(0, 10), min_size=3, max_size=3),
       st.integers(0, 10), st.integers(1, 10))
def test_homomorphism_and_trapdoor_oracle(v1, v2, c, beta):
    grp = PrimeOrderGroup(11, 23, 4)
    F = PrimeField(11)
    pp, _ = trusted_setup(grp, 3, 0, beta=beta)
    assert commit(pp, v1) == dlog_oracle(grp, beta, v1)
    assert commit(pp, F.vadd(v1, v2)) == commit(pp, v1) * commit(pp, v2) % 23
    assert commit(pp, F.vscale(c, v1)) == pow(commit(pp, v1), c, 23)


def test_binding_exhaustive_dim_one(tiny_group):
    pp, _ = trusted_setup(tiny_group, 1, 0)
    assert len({commit(pp, (v,)) for v in range(11)}) == 11


def test_public_params_blob(tiny_group):
    pp, _ = trusted_setup(tiny_group, 3, 9)
    blob = pp.to_bytes()
    assert blob[:4] == b"CAGG"
    assert PublicParams.from_bytes(blob) == pp
    big, _ = trusted_setup(default_group(), 4, 1)
    assert PublicParams.from_bytes(big.to_bytes()) == big
    with pytest.raises(ValueError):
        PublicParams.from_bytes(b"XXXX" + blob[4:])
    with pytest.raises(ValueError):
        PublicParams.from_bytes(blob[:-1])


def test_commitment_set_layout(tiny_group):
    rng = random.Random(0)
    pp, beta, u, masks, cs = setup_user(tiny_group, 2, 1, 2, rng)
    assert len(cs.h) == 4
    assert cs.h[0] == dlog_oracle(tiny_group, beta, u.partitions[0])
    assert cs.h[2] == dlog_oracle(tiny_group, beta, masks.z[0])
    assert cs.h[3] == dlog_oracle(tiny_group, beta, masks.r[0])
    assert len(cs.to_bytes(tiny_group)) == 4
    with pytest.raises(DimensionMismatch):
        CommitmentSet(1, 2, 1, (1, 2, 3))


def test_identity_case_k1_t0(tiny_group):
    pp, _ = trusted_setup(tiny_group, 2, 0, beta=3)
    cs = commit_user(pp, 1, [(2, 1)], [], [])
    for alpha in range(1, 11):
        assert verify_round1(pp, cs, (2, 1), alpha)
        assert not verify_round1(pp, cs, (2, 2), alpha)


@pytest.mark.parametrize("p", [11, 17, 31])
def test_completeness_both_rounds(p):
    grp = find_group(p)
    F = grp.field
    rng = random.Random(p)
    for _ in range(20):
        K, T, dim = rng.randint(2, 3), rng.randint(0, 2), rng.randint(1, 3)
        pp, _, u, masks, cs = setup_user(grp, K, T, dim, rng)
        alphas = list(range(1, p))
        for a, s1, s2 in zip(alphas, make_shares(F, build_round1_poly(u, masks), alphas),
                             make_shares(F, build_round2_poly(u, masks), alphas)):
            assert verify_round1(pp, cs, s1, a)
            assert verify_round2(pp, cs, s2, a)


def test_single_coordinate_tampering_always_rejected():
    grp = default_group()
    F = grp.field
    rng = random.Random(2024)
    rejected = 0
    for _ in range(100):
        pp, _, u, masks, cs = setup_user(grp, 2, 2, 4, rng)
        alpha = rng.randint(1, 15)
        rnd = rng.choice((1, 2))
        poly = build_round1_poly(u, masks) if rnd == 1 else build_round2_poly(u, masks)
        share = list(make_shares(F, poly, [alpha])[0])
        k = rng.randrange(len(share))
        share[k] = (share[k] + rng.randrange(1, grp.p)) % grp.p
        check = verify_round1 if rnd == 1 else verify_round2
        v = check(pp, cs, share, alpha)
        assert not v and v.reason == "mismatch"
        rejected += 1
    assert rejected == 100


def test_cross_round_confusion_rejected():
    grp = default_group()
    F = grp.field
    rng = random.Random(3)
    for _ in range(30):
        pp, _, u, masks, cs = setup_user(grp, 2, 1, 3, rng)
        alpha = rng.randint(2, 15)
        s1 = make_shares(F, build_round1_poly(u, masks), [alpha])[0]
        s2 = make_shares(F, build_round2_poly(u, masks), [alpha])[0]
        assert not verify_round2(pp, cs, s1, alpha)
        assert not verify_round1(pp, cs, s2, alpha)


def test_symmetric_coincidence(tiny_group):
    pp, _ = trusted_setup(tiny_group, 2, 0, beta=3)
    part = (5, 7)
    u = partition_update(1, part + part, 2)
    cs = commit_user(pp, 1, u.partitions, [], [])
    masks = MaskSet((), ())
    F = tiny_group.field
    s1 = make_shares(F, build_round1_poly(u, masks), [1])[0]
    assert verify_round2(pp, cs, s1, 1)


def test_round_two_needs_two_partitions(tiny_group):
    pp, _ = trusted_setup(tiny_group, 1, 0)
    cs = commit_user(pp, 1, [(3,)], [(1,)], [(2,)])
    with pytest.raises(RoundTwoNotApplicable):
        verify_round2(pp, cs, (3,), 1)


def test_malformed_inputs_give_reason_codes(tiny_group):
    pp, _ = trusted_setup(tiny_group, 2, 0, beta=3)
    cs = commit_user(pp, 1, [(2, 1)], [], [])
    assert verify_round1(pp, cs, (2,), 1).reason == "share_length"
    assert verify_round1(pp, cs, (2, 11), 1).reason == "share_out_of_range"
    bad = CommitmentSet(1, 1, 0, (23,))
    assert verify_round1(pp, bad, (2, 1), 1).reason == "commitment_out_of_range"
