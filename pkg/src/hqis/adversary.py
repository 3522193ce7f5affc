"""Intercept-resend eavesdropping and its correlation-based detection.

Eve captures the agents' qubits in flight and forwards a look-alike channel
with no A qubit.  That preserves the correlations inside each agent group
but cuts the link to Alice, so sacrificed rounds of computational-basis
comparison expose her: each Alice-vs-Bob comparison mismatches with
probability 1/2 per round.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import PartySizes, make_channel, make_fake_channel
from .qstate import MeasBasis, StateVector, project, tensor


class Scenario(Enum):
    HONEST = "honest"
    INTERCEPT_RESEND = "intercept-resend"


@dataclass(frozen=True)
class CheckStats:
    """Tallies of one correlation-check session."""

    rounds: int
    alice_bob_match_rates: tuple[float, ...]
    charlie_group_consistent_rate: float
    detected: bool
    detection_rule: str


def build_scenario_state(sizes: PartySizes, scenario: Scenario) -> StateVector:
    """Joint state of every qubit in play for the scenario.

    Honest: the channel itself.  Under attack: channel (Alice + Eve's
    captured block) tensored with the fake channel the agents receive.
    Raises RegisterCapError when the combined register exceeds the cap;
    use :func:`exact_detection_probability` for sizes past that point.
    """
    honest = make_channel(sizes)
    if scenario is Scenario.HONEST:
        return honest
    return tensor(honest, make_fake_channel(sizes))


def _delivered_qubits(sizes: PartySizes, scenario: Scenario) -> tuple[int, list[int], list[int]]:
    """(alice qubit, delivered Bob qubits, delivered Charlie qubits)."""
    if scenario is Scenario.HONEST:
        offset = 1
    else:
        offset = 1 + sizes.m + sizes.n
    bobs = [offset + i for i in range(sizes.m)]
    charlies = [offset + sizes.m + j for j in range(sizes.n)]
    return 0, bobs, charlies


def correlation_check(
    sizes: PartySizes,
    scenario: Scenario,
    rounds: int,
    rng: np.random.Generator,
    threshold: float = 0.99,
) -> CheckStats:
    """Run sacrificed check rounds where everyone measures computationally.

    Eve's retained block never enters the statistics, so it is left
    unmeasured.  All the measured observables commute, which lets each
    round be one draw from the joint outcome distribution.
    """
    if rounds < 1:
        raise ValueError(f"need at least one round, got {rounds}")
    state = build_scenario_state(sizes, scenario)
    alice_q, bob_qs, charlie_qs = _delivered_qubits(sizes, scenario)

    probs = np.abs(state.amplitudes) ** 2
    probs /= probs.sum()
    draws = rng.choice(probs.size, size=rounds, p=probs)

    total = state.num_qubits

    def bit(q):
        return (draws >> (total - 1 - q)) & 1

    alice_bits = bit(alice_q)
    bob_matches = [int(np.sum(bit(q) == alice_bits)) for q in bob_qs]
    charlie_bits = np.stack([bit(q) for q in charlie_qs])
    charlies_agree = int(np.sum(np.all(charlie_bits == charlie_bits[0], axis=0)))

    match_rates = tuple(count / rounds for count in bob_matches)
    rule = f"flag when any Alice-vs-Bob computational match rate drops below {threshold}"
    return CheckStats(
        rounds=rounds,
        alice_bob_match_rates=match_rates,
        charlie_group_consistent_rate=charlies_agree / rounds,
        detected=any(rate < threshold for rate in match_rates),
        detection_rule=rule,
    )


def _chained_match_probability(state: StateVector, first: int, rest: list[int], bit: int) -> float:
    """P(qubit `first` = bit and every qubit in `rest` = bit), by projection."""
    prob, conditioned = project(state, first, MeasBasis.COMPUTATIONAL, bit)
    if conditioned is None:
        return 0.0
    for q in rest:
        step, conditioned = project(conditioned, q, MeasBasis.COMPUTATIONAL, bit)
        if conditioned is None:
            return 0.0
        prob *= step
    return prob


def exact_detection_probability(
    sizes: PartySizes, scenario: Scenario = Scenario.INTERCEPT_RESEND
) -> float:
    """Per-round probability that some Alice-vs-Bob comparison mismatches.

    Computed from projection probabilities alone, no sampling.  Under
    attack the fake channel is independent of Alice's qubit, so the two
    factors are chained separately; this path stays within the register
    cap even when the joint sampling state of
    :func:`build_scenario_state` would not.
    """
    honest = make_channel(sizes)
    bob_qs = [1 + i for i in range(sizes.m)]
    match_prob = 0.0
    if scenario is Scenario.HONEST:
        for bit in (0, 1):
            match_prob += _chained_match_probability(honest, 0, bob_qs, bit)
    else:
        fake = make_fake_channel(sizes)
        fake_bob_qs = list(range(sizes.m))
        for bit in (0, 1):
            alice_prob, _ = project(honest, 0, MeasBasis.COMPUTATIONAL, bit)
            match_prob += alice_prob * _chained_match_probability(
                fake, fake_bob_qs[0], fake_bob_qs[1:], bit
            )
    return 1.0 - match_prob


def missed_detection_probability(sizes: PartySizes, rounds: int) -> float:
    """Chance that `rounds` independent check rounds all fail to flag an attack."""
    return (1.0 - exact_detection_probability(sizes)) ** rounds
