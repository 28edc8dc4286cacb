"""Voting matrix, masked ballots, self-tally, and the auditor cross-check.

The masking scheme: every voter owns one row of an N x N integer matrix whose
row sums are divisible by N+1.  Voter i's masked ballot is the sum of the
column it received plus its vote bit, reduced mod N+1; summing all masked
ballots mod N+1 therefore yields the number of 1-votes.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

DEFAULT_ENTRY_BOUND = 2**16


def ballot_bit_length(num_voters: int) -> int:
    """k = ceil(log2 N); each masked ballot is committed as 2k bits."""
    if num_voters < 2:
        raise ValueError("need at least two voters")
    return max(1, (num_voters - 1).bit_length())


def generate_row(i: int, num_voters: int, entry_bound: int, rng: np.random.Generator) -> list[int]:
    """Row i of the voting matrix.

    Off-diagonal entries are uniform in [0, entry_bound]; the diagonal entry
    is the smallest positive integer making the row sum divisible by N+1.
    """
    if num_voters < 2:
        raise ValueError("need at least two voters")
    if entry_bound < 1:
        raise ValueError("entry_bound must be >= 1")
    if not 0 <= i < num_voters:
        raise ValueError(f"voter index {i} out of range")
    row = [int(v) for v in rng.integers(0, entry_bound + 1, size=num_voters)]
    modulus = num_voters + 1
    off_sum = sum(row) - row[i]
    diagonal = (-off_sum) % modulus
    if diagonal == 0:
        diagonal = modulus
    row[i] = diagonal
    return row


@dataclass(frozen=True)
class VoteMatrix:
    """N x N non-negative integer matrix with row sums divisible by N+1."""

    num_voters: int
    entries: tuple[tuple[int, ...], ...]
    entry_bound: int = DEFAULT_ENTRY_BOUND

    def __post_init__(self):
        n = self.num_voters
        if n < 2:
            raise ValueError("need at least two voters")
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise ValueError("entries must be an N x N matrix")
        for i, row in enumerate(self.entries):
            if sum(row) % (n + 1) != 0:
                raise ValueError(f"row {i} sum is not divisible by N+1")
            if row[i] <= 0:
                raise ValueError(f"diagonal entry {i} must be strictly positive")
            for j, value in enumerate(row):
                if j != i and not 0 <= value <= self.entry_bound:
                    raise ValueError(f"off-diagonal entry ({i},{j}) out of bounds")

    @classmethod
    def generate(
        cls, num_voters: int, rng: np.random.Generator, entry_bound: int = DEFAULT_ENTRY_BOUND
    ) -> "VoteMatrix":
        rows = tuple(
            tuple(generate_row(i, num_voters, entry_bound, rng)) for i in range(num_voters)
        )
        return cls(num_voters, rows, entry_bound)

    def column(self, j: int) -> list[int]:
        """What voter j receives: entry V[i][j] from every voter i (incl. itself)."""
        return [self.entries[i][j] for i in range(self.num_voters)]

    def to_json(self) -> str:
        return json.dumps(
            {"num_voters": self.num_voters, "entry_bound": self.entry_bound,
             "entries": [list(row) for row in self.entries]},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "VoteMatrix":
        data = json.loads(text)
        return cls(
            data["num_voters"],
            tuple(tuple(row) for row in data["entries"]),
            data["entry_bound"],
        )


@dataclass(frozen=True)
class MaskedBallot:
    """A voter's blinded vote: value in [0, N] plus its 2k-bit encoding."""

    voter: int
    value: int
    bits: tuple[int, ...]

    def to_json_obj(self) -> dict:
        return {"voter": self.voter, "value": self.value, "bits": "".join(map(str, self.bits))}


def encode_bits(value: int, width: int) -> tuple[int, ...]:
    """Big-endian, zero-padded binary encoding."""
    if value < 0 or value >= 2**width:
        raise ValueError(f"value {value} does not fit in {width} bits")
    return tuple((value >> (width - 1 - i)) & 1 for i in range(width))


def decode_bits(bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def masked_ballot(received_column, vote: int, num_voters: int, voter: int = 0) -> MaskedBallot:
    """Masked ballot from the received matrix column and the vote bit.

    The value is reduced mod N+1 so that it always fits the 2k committed bits;
    the reduction does not change the final tally.
    """
    if vote not in (0, 1):
        raise ValueError(f"vote must be 0 or 1; got {vote}")
    if len(received_column) != num_voters:
        raise ValueError("received column must have one entry per voter")
    value = (sum(int(v) for v in received_column) + vote) % (num_voters + 1)
    bits = encode_bits(value, 2 * ballot_bit_length(num_voters))
    return MaskedBallot(voter=voter, value=value, bits=bits)


def tally(ballots, num_voters: int) -> int:
    """Sum of masked ballots mod N+1: the number of 1-votes when all are honest."""
    ballots = list(ballots)
    if len(ballots) != num_voters:
        raise ValueError(f"expected {num_voters} ballots, got {len(ballots)}")
    return sum(b.value for b in ballots) % (num_voters + 1)


class AuditVerdict(enum.Enum):
    HONEST = "honest"
    CHEATING = "cheating"


@dataclass(frozen=True)
class AuditClaim:
    """Both parties' answers to "what is V[i][j]?" collected by an auditor."""

    asker: str
    i: int
    j: int
    value_from_i: int
    value_from_j: int


def audit(claim: AuditClaim) -> AuditVerdict:
    if claim.value_from_i == claim.value_from_j:
        return AuditVerdict.HONEST
    return AuditVerdict.CHEATING
