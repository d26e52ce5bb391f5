import math
from fractions import Fraction

import numpy as np
import pytest

from codsum.analytic import (
    DEFAULT_SEGMENT_SIZE,
    Extrapolation,
    RatioState,
    accumulate_ratio,
    count_primes_2_mod_3,
    crossing_extrapolation,
    euler_product_check,
    iter_prime_blocks,
    ratio_term,
    reciprocal_model_gap,
    zeta,
)
from codsum.errors import CheckpointError


def test_ratio_term_examples():
    exact, log = ratio_term(2)
    assert exact == Fraction(13, 11)
    assert abs(math.exp(log) - 13 / 11) < 1e-15
    exact5, _ = ratio_term(5)
    assert exact5 == Fraction(7813, 6773)  # reduces to 601/521
    assert exact5 == Fraction(601, 521)


def test_ratio_term_bounds_exact():
    from codsum.arith import primes_up_to

    for p in primes_up_to(10**5):
        exact, _ = ratio_term(p)
        assert 1 < exact < 1 + Fraction(1, p)


def test_accumulate_small_limits():
    assert accumulate_ratio(1).r_estimate == 1.0
    s4 = accumulate_ratio(4)
    assert s4.prime_count == 1
    assert abs(s4.r_estimate - 13 / 11) < 1e-15
    s11 = accumulate_ratio(11)
    assert s11.prime_count == 3  # 2, 5, 11
    expect = float(Fraction(13, 11) * Fraction(601, 521) * Fraction(14521, 13421))
    assert abs(s11.r_estimate - expect) < 1e-14


def test_accumulate_monotone_state():
    s1 = accumulate_ratio(10**3)
    s2 = accumulate_ratio(10**4, s1)
    assert s2.log_r > s1.log_r >= 0
    assert s2.recip_sum > s1.recip_sum
    assert s2.prime_count > s1.prime_count
    with pytest.raises(ValueError):
        accumulate_ratio(10, s2)


def test_accumulate_block_associativity():
    # arbitrary split points, same segment size: bit-identical results
    direct = accumulate_ratio(10**6)
    s = None
    for stop in (17, 1000, 54321, 10**5 + 7, 10**6):
        s = accumulate_ratio(stop, s)
    assert s == direct


def test_exact_rational_agreement_to_1e3():
    exact = Fraction(1)
    for block in iter_prime_blocks(1000):
        for p in block.tolist():
            if p % 3 == 2:
                exact *= ratio_term(p)[0]
    state = accumulate_ratio(1000)
    rel = abs(state.r_estimate - float(exact)) / float(exact)
    assert rel < 1e-12


def test_sieve_against_reference():
    def reference(limit):
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, math.isqrt(limit) + 1):
            if sieve[p]:
                start = p * p
                sieve[start::p] = b"\x00" * ((limit - start) // p + 1)
        return [i for i, v in enumerate(sieve) if v]

    ref = reference(10**6)
    assert count_primes_2_mod_3(10**6) == sum(1 for p in ref if p % 3 == 2)
    streamed = np.concatenate(list(iter_prime_blocks(10**6)))
    assert streamed.tolist() == ref


def test_sieve_segment_size_independent():
    a = count_primes_2_mod_3(10**5, segment_size=DEFAULT_SEGMENT_SIZE)
    b = count_primes_2_mod_3(10**5, segment_size=997)
    assert a == b


def test_checkpoint_roundtrip(tmp_path):
    state = accumulate_ratio(10**5)
    path = tmp_path / "ck.json"
    state.save(str(path))
    loaded = RatioState.load(str(path))
    assert loaded == state
    resumed = accumulate_ratio(10**6, loaded)
    direct = accumulate_ratio(10**6)
    assert resumed == direct


def test_checkpoint_corruption_refused(tmp_path):
    state = accumulate_ratio(10**4)
    path = tmp_path / "ck.json"
    state.save(str(path))
    text = path.read_text()
    path.write_text(text.replace('"prime_count":', '"prime_count":9', 1))
    with pytest.raises(CheckpointError):
        RatioState.load(str(path))
    path.write_text("not json")
    with pytest.raises(CheckpointError):
        RatioState.load(str(path))
    with pytest.raises(CheckpointError):
        RatioState.load(str(tmp_path / "missing.json"))


def test_checkpoint_segment_size_mismatch():
    state = accumulate_ratio(10**4)
    with pytest.raises(CheckpointError):
        accumulate_ratio(10**5, state, segment_size=123456)


def test_reciprocal_model_gap():
    state = accumulate_ratio(10**6)
    gap = reciprocal_model_gap(state)
    assert math.isfinite(gap)
    assert math.isfinite(reciprocal_model_gap(accumulate_ratio(100)))
    with pytest.raises(ValueError):
        reciprocal_model_gap(accumulate_ratio(50))


def test_zeta_values():
    assert abs(zeta(2).value - math.pi**2 / 6) < 1e-13
    assert abs(zeta(4).value - math.pi**4 / 90) < 1e-13
    assert abs(zeta(10).value - math.pi**10 / 93555) < 1e-13
    assert abs(zeta(5).value - 1.0369277551433699) < 1e-13
    assert zeta(2).value > zeta(3).value > zeta(4).value > 1
    with pytest.raises(ValueError):
        zeta(1)


def test_euler_product_examples():
    small = euler_product_check(2, 2)
    assert small.partial == 1.25
    mid = euler_product_check(2, 10**5)
    assert abs(mid.target - 15 / math.pi**2) < 1e-13
    assert abs(mid.gap) < 1e-4
    tight = euler_product_check(5, 10**6)
    assert abs(tight.gap) < 1e-12


def test_extrapolation_self_consistency():
    state = accumulate_ratio(10**6)
    ex = crossing_extrapolation(state, target=state.r_estimate)
    assert not ex.degenerate
    assert abs(ex.log10_limit - math.log10(state.limit_processed)) < 1e-9
    degenerate = crossing_extrapolation(state, target=1.0)
    assert degenerate.degenerate and degenerate.log10_limit == 0.0
    big = crossing_extrapolation(state, target=21.0)
    assert big.log10_limit > 50  # far beyond any computable range
    with pytest.raises(ValueError):
        crossing_extrapolation(accumulate_ratio(10**4), target=21.0)


def test_progress_callback():
    seen = []
    accumulate_ratio(3 * 10**6, progress=seen.append, progress_stride=10**6)
    assert seen
    assert all(isinstance(s, RatioState) for s in seen)
    limits = [s.limit_processed for s in seen]
    assert limits == sorted(limits)
