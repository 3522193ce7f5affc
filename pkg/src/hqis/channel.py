"""Entangled-channel construction for the splitting protocol.

The honest channel over (A, B-block, C-block) puts amplitude +1/2 on the
basis states where the B bits track A and the C bits agree among themselves,
with a minus sign on the all-ones string.  ``make_standard_form`` builds the
same state from its graph product form so tests can cross-check the two
constructions against each other.
"""

from dataclasses import dataclass

import numpy as np

from .qstate import RegisterCapError, SecretState, StateVector, register_cap, tensor

__all__ = [
    "PartySizes",
    "SecretState",
    "make_channel",
    "make_standard_form",
    "make_fake_channel",
    "compose_with_secret",
]


@dataclass(frozen=True)
class PartySizes:
    """Number of higher-grade agents (m Bobs) and lower-grade agents (n Charlies)."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"need at least one agent per grade, got m={self.m}, n={self.n}")
        cap = register_cap()
        if 1 + self.m + self.n + 1 > cap:
            raise RegisterCapError(
                f"m={self.m}, n={self.n} needs {2 + self.m + self.n} qubits "
                f"with the secret attached, above the cap of {cap}"
            )

    @property
    def channel_qubits(self) -> int:
        return 1 + self.m + self.n


def _bits_index(bits: list[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    return idx


def make_channel(sizes: PartySizes) -> StateVector:
    """The (1+m+n)-qubit channel shared by Alice, the Bobs, and the Charlies."""
    m, n = sizes.m, sizes.n
    amps = np.zeros(2**sizes.channel_qubits, dtype=complex)
    for a_bit, b_bit, c_bit, sign in ((0, 0, 0, 1), (0, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, -1)):
        amps[_bits_index([a_bit] + [b_bit] * m + [c_bit] * n)] = 0.5 * sign
    return StateVector(sizes.channel_qubits, amps)


def make_standard_form(sizes: PartySizes) -> StateVector:
    """The channel in graph product form, built from its sign expansion.

    Expanding the product (|0_A> + |1_A> Z_B1)(|0_B1> + |1_B1> Z_B2..Z_Bm Z_C1)
    (|0_B2>+|1_B2>)..(|0_C1> + |1_C1> Z_C2..Z_Cn).. gives one term per bit
    string, with sign -1 raised to the number of "both ends set" pairs along
    the edges A-B1, B1-Bi, B1-C1, and C1-Cj.  Equivalent to Hadamards on every
    qubit except B1 and C1 of :func:`make_channel`; deliberately not computed
    that way, so the equivalence stays a two-path check.
    """
    m, n = sizes.m, sizes.n
    total = sizes.channel_qubits
    a_q, b1_q, c1_q = 0, 1, 1 + m
    shifts = total - 1 - np.arange(total)
    bits = (np.arange(2**total)[:, None] >> shifts[None, :]) & 1
    other_bobs = bits[:, 2 : 1 + m].sum(axis=1)
    other_charlies = bits[:, 2 + m :].sum(axis=1)
    exponent = (
        bits[:, a_q] * bits[:, b1_q]
        + bits[:, b1_q] * (other_bobs + bits[:, c1_q])
        + bits[:, c1_q] * other_charlies
    )
    amps = np.where(exponent % 2 == 0, 1.0, -1.0).astype(complex)
    return StateVector(total, amps / 2 ** (total / 2))


def make_fake_channel(sizes: PartySizes) -> StateVector:
    """Eve's (m+n)-qubit substitute: the channel structure with no A qubit."""
    m, n = sizes.m, sizes.n
    amps = np.zeros(2 ** (m + n), dtype=complex)
    for b_bit, c_bit, sign in ((0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1)):
        amps[_bits_index([b_bit] * m + [c_bit] * n)] = 0.5 * sign
    return StateVector(m + n, amps)


def compose_with_secret(secret: SecretState, channel: StateVector) -> StateVector:
    """Prepend the secret qubit S to the channel register."""
    return tensor(secret.as_state(), channel)
