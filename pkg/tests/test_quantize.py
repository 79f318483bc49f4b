import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from codedagg.errors import OverflowDetected, UnsafeQuantization
from codedagg.field import MERSENNE_61
from codedagg.quantize import QuantizationConfig, decode, encode, lift_all

P = MERSENNE_61
CFG = QuantizationConfig(scale_bits=8, clip=1.0, p=P)


def test_examples():
    assert encode([0.5], CFG) == (128,)
    assert encode([-0.25], CFG) == (P - 64,)
    assert encode([0.0], CFG) == (0,)
    assert decode([P - 64], CFG) == [-0.25]


def test_clipping_and_half_even():
    assert encode([3.0, -7.0], CFG) == (256, P - 256)
    # 0.5/256 and 1.5/256 land on .5 exactly: ties go to even
    assert encode([0.5 / 256, 1.5 / 256, 2.5 / 256], CFG) == (0, 2, 2)
    with pytest.raises(ValueError):
        encode([float("nan")], CFG)


def test_grid_round_trip():
    grid = [k / 256 for k in range(-256, 257)]
    assert decode(encode(grid, CFG), CFG) == grid


def test_sum_error_bound_exhaustive_small_grid():
    # values on a finer grid than the quantizer; sums of m of them
    vals = [k / 1000 for k in range(-1000, 1001, 37)]
    for m in (1, 2, 3):
        for combo in itertools.islice(itertools.product(vals, repeat=m), 4000):
            acc = [0]
            for v in combo:
                acc = [(acc[0] + encode([v], CFG)[0]) % P]
            got = decode(acc, CFG, summands=m)[0]
            assert abs(got - sum(combo)) <= m * 2 ** (-8 - 1) + 1e-12


def test_overflow_detected():
    with pytest.raises(OverflowDetected):
        decode([257], CFG)
    assert decode([512], CFG, summands=2) == [2.0]


def test_safety_violations():
    small = QuantizationConfig(scale_bits=8, clip=1.0, p=10007)
    msgs = small.violations(length=1000, summands=5)
    assert len(msgs) == 1 and "distance safety" in msgs[0]
    with pytest.raises(UnsafeQuantization):
        small.check(length=1000)
    assert QuantizationConfig(scale_bits=8, clip=1.0, p=1021).violations(summands=2) != []
    assert QuantizationConfig(-1, 1.0, P).violations()
    assert QuantizationConfig(8, 0.0, P).violations()
    assert QuantizationConfig(8, 1.0, P, rounding="up").violations()
    assert CFG.violations(length=1000, summands=5) == []


def test_boundary_is_exact():
    # L*(2Qmax)^2 < p/2 with equality counting as failure
    cfg = QuantizationConfig(scale_bits=0, clip=1.0, p=11)
    assert cfg.violations(length=1, summands=1) == []     # 2*4 = 8 < 11
    cfg = QuantizationConfig(scale_bits=0, clip=1.0, p=7)
    assert cfg.violations(length=1, summands=1)           # 8 >= 7


def test_stochastic_rounding_is_unbiased():
    cfg = QuantizationConfig(scale_bits=4, clip=1.0, p=P, rounding="stochastic")
    rng = np.random.default_rng(0)
    x = 0.3
    vals = decode(encode([x] * 20000, cfg, rng), cfg)
    assert abs(np.mean(vals) - x) < 0.002
    with pytest.raises(ValueError):
        encode([x], cfg)


@given(st.lists(st.integers(-(P // 2), P // 2), max_size=10))
def test_lift_involution(xs):
    assert lift_all([x % P for x in xs], P) == xs
