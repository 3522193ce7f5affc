import itertools

import numpy as np
import pytest

from hqis.adversary import (
    Scenario,
    build_scenario_state,
    correlation_check,
    exact_detection_probability,
    missed_detection_probability,
)
from hqis.channel import PartySizes
from hqis.qstate import RegisterCapError

ALL_SIZES = list(itertools.product((1, 2, 3), repeat=2))


def _support_bits(state):
    total = state.num_qubits
    for idx in np.flatnonzero(np.abs(state.amplitudes) > 1e-15):
        yield [(int(idx) >> (total - 1 - q)) & 1 for q in range(total)]


def test_honest_state_is_the_channel():
    state = build_scenario_state(PartySizes(1, 1), Scenario.HONEST)
    assert state.num_qubits == 3
    expected = np.zeros(8, dtype=complex)
    expected[0b000] = expected[0b001] = expected[0b110] = 0.5
    expected[0b111] = -0.5
    np.testing.assert_allclose(state.amplitudes, expected)


def test_attack_state_is_channel_times_fake():
    state = build_scenario_state(PartySizes(1, 1), Scenario.INTERCEPT_RESEND)
    assert state.num_qubits == 5
    assert abs(np.sum(np.abs(state.amplitudes) ** 2) - 1) < 1e-12
    # sixteen nonzero amplitudes: four channel terms times four fake terms
    assert np.count_nonzero(np.abs(state.amplitudes) > 1e-15) == 16


def test_attack_state_cap_is_signaled(monkeypatch):
    monkeypatch.setenv("HQIS_MAX_QUBITS", "8")
    build_scenario_state(PartySizes(3, 2), Scenario.HONEST)
    with pytest.raises(RegisterCapError):
        build_scenario_state(PartySizes(3, 2), Scenario.INTERCEPT_RESEND)
    # the exact path must keep working at the same sizes
    assert exact_detection_probability(PartySizes(3, 2)) == pytest.approx(0.5, abs=1e-12)


def test_honest_support_has_perfect_correlations():
    for m, n in ALL_SIZES:
        state = build_scenario_state(PartySizes(m, n), Scenario.HONEST)
        for bits in _support_bits(state):
            assert all(b == bits[0] for b in bits[1 : 1 + m])
            assert len(set(bits[1 + m :])) == 1


def test_attack_support_keeps_intra_group_agreement():
    # delivered B bits still agree with each other, as do delivered C bits,
    # so only comparisons against Alice can expose the attack
    for m, n in [(2, 2), (3, 1), (1, 3)]:
        sizes = PartySizes(m, n)
        state = build_scenario_state(sizes, Scenario.INTERCEPT_RESEND)
        offset = 1 + m + n
        for bits in _support_bits(state):
            delivered_b = bits[offset : offset + m]
            delivered_c = bits[offset + m :]
            assert len(set(delivered_b)) == 1
            assert len(set(delivered_c)) == 1


@pytest.mark.parametrize("m,n", ALL_SIZES)
def test_exact_rates(m, n):
    sizes = PartySizes(m, n)
    assert exact_detection_probability(sizes) == pytest.approx(0.5, abs=1e-12)
    assert exact_detection_probability(sizes, Scenario.HONEST) == pytest.approx(0.0, abs=1e-12)


def test_extra_bobs_add_no_detection_power():
    rates = {exact_detection_probability(PartySizes(m, 2)) for m in (1, 2, 3)}
    assert all(abs(r - 0.5) < 1e-12 for r in rates)


def test_honest_check_is_exactly_clean():
    stats = correlation_check(PartySizes(2, 3), Scenario.HONEST, 500, np.random.default_rng(8))
    assert stats.alice_bob_match_rates == (1.0, 1.0)
    assert stats.charlie_group_consistent_rate == 1.0
    assert not stats.detected
    assert stats.rounds == 500


def test_attack_check_detects():
    stats = correlation_check(
        PartySizes(1, 1), Scenario.INTERCEPT_RESEND, 100_000, np.random.default_rng(9)
    )
    for rate in stats.alice_bob_match_rates:
        assert rate == pytest.approx(0.5, abs=0.01)
    assert stats.charlie_group_consistent_rate == 1.0
    assert stats.detected


def test_sampled_rate_converges_to_exact():
    rounds = 100_000
    for m, n in [(1, 1), (2, 2), (3, 3)]:
        sizes = PartySizes(m, n)
        stats = correlation_check(
            sizes, Scenario.INTERCEPT_RESEND, rounds, np.random.default_rng(1000 + m + 10 * n)
        )
        exact = exact_detection_probability(sizes)
        stderr = np.sqrt(exact * (1 - exact) / rounds)
        for rate in stats.alice_bob_match_rates:
            assert abs((1 - rate) - exact) <= 3 * stderr


def test_multi_round_miss_probability():
    sizes = PartySizes(2, 1)
    for rounds in (1, 8, 64):
        assert missed_detection_probability(sizes, rounds) == pytest.approx(
            0.5**rounds, rel=1e-12
        )
    assert missed_detection_probability(sizes, 64) <= 2.0**-64


def test_check_reproducible_for_seed():
    sizes = PartySizes(2, 2)
    a = correlation_check(sizes, Scenario.INTERCEPT_RESEND, 2000, np.random.default_rng(4))
    b = correlation_check(sizes, Scenario.INTERCEPT_RESEND, 2000, np.random.default_rng(4))
    assert a == b


def test_rounds_must_be_positive():
    with pytest.raises(ValueError):
        correlation_check(PartySizes(1, 1), Scenario.HONEST, 0, np.random.default_rng(0))
