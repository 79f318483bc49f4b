import itertools
import random

import pytest

from codedagg.errors import DecodingFailed, DimensionMismatch, DuplicateEvaluationPoint, NotEnoughObservations
from codedagg.field import MERSENNE_61, PrimeField
from codedagg.reed_solomon import CodedObservation, decode, decode_vectors

from conftest import naive_eval

F17 = PrimeField(17)


def make_instance(rng, p, d, a, e, slack):
    """Random codeword of degree <= d with e erasures and exactly a errors."""
    F = PrimeField(p)
    n = d + 1 + 2 * a + e + slack
    coeffs = [rng.randrange(p) for _ in range(d + 1)]
    alphas = rng.sample(range(1, p), n)
    values = [naive_eval(coeffs, x, p) for x in alphas]
    idx = rng.sample(range(n), e + a)
    erased, wrong = idx[:e], idx[e:]
    for k in erased:
        values[k] = None
    for k in wrong:
        values[k] = (values[k] + rng.randrange(1, p)) % p
    obs = [CodedObservation(x, v) for x, v in zip(alphas, values)]
    return F, obs, coeffs, sorted(alphas[k] for k in wrong)


def test_error_free_is_interpolation():
    obs = [CodedObservation(x, naive_eval((3, 5), x, 17)) for x in (1, 2)]
    assert decode(F17, obs, 1, 0).coeffs == (3, 5)


def test_example_single_corruption():
    obs = [CodedObservation(x, 0 if x == 4 else naive_eval((3, 5), x, 17)) for x in range(1, 6)]
    out = decode(F17, obs, 1, 1)
    assert out.coeffs == (3, 5)
    assert out.error_alphas == (4,)


def test_all_single_corruptions_p17():
    clean = [naive_eval((3, 5), x, 17) for x in range(1, 6)]
    for pos, wrong in itertools.product(range(5), range(17)):
        if wrong == clean[pos]:
            continue
        vals = list(clean)
        vals[pos] = wrong
        out = decode(F17, [CodedObservation(x, v) for x, v in zip(range(1, 6), vals)], 1, 1)
        assert out.coeffs == (3, 5) and out.error_alphas == (pos + 1,)


def test_too_few_observations():
    obs = [CodedObservation(x, 1) for x in range(1, 4)]  # d+1+2a-1 = 3
    with pytest.raises(NotEnoughObservations):
        decode(F17, obs, 1, 1)


def test_erasures_do_not_count():
    obs = [CodedObservation(x, None if x > 3 else 1) for x in range(1, 8)]
    with pytest.raises(NotEnoughObservations):
        decode(F17, obs, 1, 1)


def test_duplicate_points_rejected():
    with pytest.raises(DuplicateEvaluationPoint):
        decode(F17, [CodedObservation(1, 1), CodedObservation(18, 2)], 0, 0)


def test_too_many_errors_is_detected():
    rng = random.Random(8)
    for _ in range(50):
        # two real errors among d + 1 + 2*2 points, decoded with a budget of one
        F, obs, _, _ = make_instance(rng, MERSENNE_61, 3, 2, 0, 0)
        with pytest.raises(DecodingFailed):
            decode(F, obs, 3, 1)


def test_fuzz_grid():
    """d <= 8, a <= 3, e <= 3, n - e >= d + 1 + 2a: exact recovery and error positions."""
    rng = random.Random(20240)
    count = 0
    grid = list(itertools.product(range(9), range(4), range(4), range(3)))
    while count < 10_000:
        for d, a, e, slack in grid:
            p = rng.choice((257, 65537, MERSENNE_61))
            F, obs, coeffs, wrong = make_instance(rng, p, d, a, e, slack)
            out = decode(F, obs, d, a)
            assert list(out.coeffs) == coeffs
            assert sorted(out.error_alphas) == wrong
            count += 1
    assert count >= 10_000


def test_fewer_errors_than_budget():
    rng = random.Random(1)
    for _ in range(200):
        d, a = rng.randint(0, 5), rng.randint(1, 3)
        F, obs, coeffs, wrong = make_instance(rng, 65537, d, rng.randint(0, a), 0, 0)
        # instance carries fewer errors than a; pad with extra honest points to n = d+1+2a
        need = d + 1 + 2 * a
        used = {o.alpha for o in obs}
        extra = [x for x in range(1, 65537) if x not in used][: max(0, need - len(obs))]
        obs += [CodedObservation(x, naive_eval(coeffs, x, 65537)) for x in extra]
        out = decode(F, obs, d, a)
        assert list(out.coeffs) == coeffs
        assert sorted(out.error_alphas) == wrong


@pytest.mark.parametrize("d,a", [(0, 1), (1, 1), (4, 2), (8, 3)])
def test_boundary_count_fails(d, a):
    rng = random.Random(d * 10 + a)
    for e in range(4):
        F, obs, _, _ = make_instance(rng, MERSENNE_61, d, 0, e, 0)
        live = [o for o in obs if o.value is not None]
        erased = [o for o in obs if o.value is None]
        # n - e = d + 2a: one short of the requirement
        extra_alphas = rng.sample(range(10**6, 10**7), 2 * a - 1)
        short = live + [CodedObservation(x, 0) for x in extra_alphas] + erased
        assert len(short) - e == d + 2 * a
        with pytest.raises(NotEnoughObservations):
            decode(F, short, d, a)


def test_determinism():
    rng = random.Random(3)
    F, obs, _, _ = make_instance(rng, 65537, 4, 2, 1, 1)
    assert decode(F, obs, 4, 2) == decode(F, obs, 4, 2)


def test_vector_decoding_shared_locator():
    rng = random.Random(5)
    p = MERSENNE_61
    F = PrimeField(p)
    d, a, width = 3, 2, 5
    coeffs = [[rng.randrange(p) for _ in range(width)] for _ in range(d + 1)]
    alphas = list(range(1, d + 2 + 2 * a + 2))
    values = [tuple(naive_eval([c[t] for c in coeffs], x, p) for t in range(width)) for x in alphas]
    values[1] = tuple(rng.randrange(p) for _ in range(width))
    values[4] = None
    values[6] = tuple(rng.randrange(p) for _ in range(width))
    out = decode_vectors(F, alphas, values, d, a)
    assert [list(c) for c in out.poly.coeffs] == coeffs
    assert sorted(out.error_alphas) == [2, 7]


def test_vector_decoding_fallback():
    # adversary leaves coordinate 0 intact so its locator misses the error
    p = MERSENNE_61
    F = PrimeField(p)
    coeffs = [[1, 2, 3], [4, 5, 6]]
    alphas = [1, 2, 3, 4, 5]
    values = [tuple(naive_eval([c[t] for c in coeffs], x, p) for t in range(3)) for x in alphas]
    values[2] = (values[2][0], 99, values[2][2])
    values[3] = (values[3][0], values[3][1], 77)
    out = decode_vectors(F, alphas, values, 1, 1)
    assert [list(c) for c in out.poly.coeffs] == coeffs
    assert sorted(out.error_alphas) == [3, 4]


def test_vector_shape_errors():
    F = PrimeField(17)
    with pytest.raises(DimensionMismatch):
        decode_vectors(F, [1, 2], [(1,)], 0, 0)
    with pytest.raises(DimensionMismatch):
        decode_vectors(F, [1, 2], [(1,), (1, 2)], 0, 0)
