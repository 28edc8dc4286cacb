"""Quantum Byzantine agreement among three miners over shared Aharonov copies.

Measuring every pair of one Aharonov copy in the computational basis hands
the three miners pairwise-distinct trits, uniform over the six permutations
of (0, 1, 2).  A broadcast round uses T such triples: the leader sends its
bit along with the copy indices where its own trit equals that bit; receivers
check those indices against their own trits, exchange consistency flags, and
fall back to a convince step when both look consistent yet disagree.

A round terminates in one of two valid states: SUCCESSFUL (the receivers
agree on a bit) or DETECTABLE (the round is flagged, no agreement claimed).
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .quantum import MeasBasis, measure, prepare_aharonov

PERMUTATIONS = np.array(list(itertools.permutations((0, 1, 2))), dtype=np.int64)

NUM_MINERS = 3


@dataclass(frozen=True)
class AharonovBatch:
    """T measured copies; columns are the leader's, R1's and R2's trits."""

    trits: np.ndarray  # shape (T, 3), each row a permutation of (0, 1, 2)

    @property
    def copies(self) -> int:
        return self.trits.shape[0]


def _measure_one_copy(rng: np.random.Generator) -> tuple[int, int, int]:
    state = prepare_aharonov()
    bits = []
    for q in range(6):
        outcome, state = measure(state, q, MeasBasis.Z, rng)
        bits.append(outcome)
    return tuple(2 * bits[2 * p] + bits[2 * p + 1] for p in range(3))


def sample_copies(T: int, rng: np.random.Generator, source: str = "ideal") -> AharonovBatch:
    """Sample the trits the three parties hold after measuring T copies.

    ``ideal`` draws uniform permutations directly; ``statevector`` prepares
    each 6-qubit copy and measures all pairs in the computational basis.  The
    two sources produce identical distributions.
    """
    if T < 0:
        raise ValueError("copy count must be >= 0")
    if source == "ideal":
        trits = PERMUTATIONS[rng.integers(0, 6, size=T)]
    elif source == "statevector":
        trits = np.array([_measure_one_copy(rng) for _ in range(T)], dtype=np.int64).reshape(T, 3)
    else:
        raise ValueError(f"unknown source {source!r}")
    return AharonovBatch(trits=trits)


class ComplicitRole(enum.Enum):
    LEADER = "leader"
    RECEIVER_1 = "receiver_1"
    RECEIVER_2 = "receiver_2"


@dataclass(frozen=True)
class AdversaryModel:
    """Placement of the (at most one) complicit miner.

    gamma = None: everyone honest; gamma = 0: a uniformly random miner is
    complicit in each iteration; gamma = i in 1..3: miner i is always
    complicit.  A complicit leader sends differing bits with their honestly
    computed index sets; a complicit receiver claims a consistent flag for
    the opposite bit and fabricates convince indices.
    """

    gamma: int | None = None

    def __post_init__(self):
        if self.gamma is not None and self.gamma not in range(NUM_MINERS + 1):
            raise ValueError(f"gamma must be None or 0..{NUM_MINERS}; got {self.gamma}")

    def complicit_miner(self, rng: np.random.Generator) -> int | None:
        if self.gamma is None:
            return None
        if self.gamma == 0:
            return int(rng.integers(NUM_MINERS))
        return self.gamma - 1


HONEST = AdversaryModel(gamma=None)


class OutcomeKind(enum.Enum):
    SUCCESSFUL = "successful"
    DETECTABLE = "detectable"


class Flag(enum.Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class BroadcastOutcome:
    kind: OutcomeKind
    agreed_bit: int | None
    receiver_bits: tuple[int, int]
    receiver_flags: tuple[Flag, Flag]
    complicit_role: ComplicitRole | None
    convince_used: bool = False
    convinced: bool | None = None


_DERIVE = object()


def run_broadcast(
    x: int,
    batch: AharonovBatch,
    adversary: AdversaryModel,
    lam: float,
    rng: np.random.Generator,
    *,
    complicit_role=_DERIVE,
    reference_bits: tuple[int, int] | None = None,
) -> BroadcastOutcome:
    """One broadcast round of the leader's bit ``x`` over a fresh batch.

    ``complicit_role`` fixes which role the complicit party plays; when left
    to derive, an adversarial model places it uniformly (callers that track
    miner identities resolve the role themselves).  ``reference_bits`` are
    the receivers' own copies of the bit from decommitment; a received bit
    contradicting the reference makes that receiver's flag inconsistent.
    """
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"lambda must be in (0, 1]; got {lam}")
    if x not in (0, 1):
        raise ValueError(f"broadcast bit must be 0 or 1; got {x}")
    if complicit_role is _DERIVE:
        if adversary.gamma is None:
            complicit_role = None
        else:
            complicit_role = list(ComplicitRole)[int(rng.integers(NUM_MINERS))]

    trits = batch.trits
    a_leader, a_r1, a_r2 = trits[:, 0], trits[:, 1], trits[:, 2]

    # Leader phase: a complicit leader splits the receivers but keeps each
    # index set honest for the bit it claims, which passes both receivers'
    # individual consistency checks.
    if complicit_role is ComplicitRole.LEADER:
        sent_bits = (x, 1 - x)
    else:
        sent_bits = (x, x)
    index_sets = tuple(np.flatnonzero(a_leader == bit) for bit in sent_bits)

    reported_bits = [0, 0]
    flags = [Flag.CONSISTENT, Flag.CONSISTENT]
    receiver_trits = (a_r1, a_r2)
    complicit_receiver = {ComplicitRole.RECEIVER_1: 0, ComplicitRole.RECEIVER_2: 1}.get(
        complicit_role
    )
    for p in range(2):
        if p == complicit_receiver:
            # Lies: claims the opposite bit with a straight face.
            reported_bits[p] = 1 - sent_bits[p]
            flags[p] = Flag.CONSISTENT
            continue
        reported_bits[p] = sent_bits[p]
        ref_ok = reference_bits is None or sent_bits[p] == reference_bits[p]
        idx_ok = not np.any(receiver_trits[p][index_sets[p]] == sent_bits[p])
        flags[p] = Flag.CONSISTENT if (ref_ok and idx_ok) else Flag.INCONSISTENT

    convince_used = False
    convinced = None
    if flags[0] == flags[1] == Flag.CONSISTENT and reported_bits[0] == reported_bits[1]:
        kind, agreed = OutcomeKind.SUCCESSFUL, reported_bits[0]
        final_bits = (reported_bits[0], reported_bits[1])
    elif flags[0] != flags[1]:
        # The inconsistent receiver adopts the consistent one's bit.
        keeper = 0 if flags[0] is Flag.CONSISTENT else 1
        kind, agreed = OutcomeKind.SUCCESSFUL, reported_bits[keeper]
        final_bits = (agreed, agreed)
    elif flags[0] == flags[1] == Flag.CONSISTENT:
        # Both consistent, bits differ: R1 tries to convince R2.
        convince_used = True
        if complicit_receiver == 0:
            # Fabricated evidence: indices outside the set the leader sent,
            # chosen where R1's own trit matches the lie's opposite answer.
            claimed = reported_bits[0]
            outside = np.ones(batch.copies, dtype=bool)
            outside[index_sets[0]] = False
            evidence = np.flatnonzero(outside & (a_r1 == 1 - claimed))
        else:
            evidence = index_sets[0][a_r1[index_sets[0]] == 1 - reported_bits[0]]
        if complicit_receiver == 1:
            convinced = False  # refuses whatever the evidence says
        elif len(evidence) == 0:
            convinced = False
        else:
            in_i2 = np.isin(evidence, index_sets[1])
            valid = (~in_i2) & (a_r2[evidence] == 2)
            convinced = bool(np.mean(valid) >= lam)
        if convinced:
            kind, agreed = OutcomeKind.SUCCESSFUL, reported_bits[0]
            final_bits = (reported_bits[0], reported_bits[0])
        else:
            kind, agreed = OutcomeKind.DETECTABLE, None
            final_bits = (reported_bits[0], reported_bits[1])
    else:
        # Both inconsistent: abort with detection.
        kind, agreed = OutcomeKind.DETECTABLE, None
        final_bits = (reported_bits[0], reported_bits[1])

    if kind is OutcomeKind.SUCCESSFUL:
        honest = [final_bits[p] for p in range(2) if p != complicit_receiver]
        assert len(set(honest)) <= 1, "successful round with disagreeing honest receivers"

    return BroadcastOutcome(
        kind=kind,
        agreed_bit=agreed,
        receiver_bits=tuple(final_bits),
        receiver_flags=tuple(flags),
        complicit_role=complicit_role,
        convince_used=convince_used,
        convinced=convinced,
    )


@dataclass(frozen=True)
class ConsensusRound:
    bit_index: int
    leader: int
    receivers: tuple[int, int]
    complicit_miner: int | None
    outcome: BroadcastOutcome


@dataclass(frozen=True)
class ConsensusResult:
    agreed_bits: tuple
    kinds: tuple
    rounds: tuple[ConsensusRound, ...]

    @property
    def all_successful(self) -> bool:
        return all(kind is OutcomeKind.SUCCESSFUL for kind in self.kinds)


def consensus_on_ballot(
    bits,
    copies_per_bit: int,
    adversary: AdversaryModel,
    lam: float,
    rng: np.random.Generator,
    *,
    miner_bits=None,
    source: str = "ideal",
    sampler=None,
) -> ConsensusResult:
    """Run one broadcast per ballot bit with a fresh uniform leader each time.

    ``miner_bits`` gives each of the three miners its own reference copy of
    the ballot (defaults to the shared ``bits``); the leader broadcasts its
    own copy and receivers cross-check against theirs.  Each round consumes a
    fresh batch of ``copies_per_bit`` Aharonov copies, drawn from ``sampler``
    (a callable of (copies, leader, receivers) -> AharonovBatch, used by the
    network simulation to distribute real registers) when given, else from
    :func:`sample_copies` with the given source.
    """
    bits = tuple(int(b) for b in bits)
    if miner_bits is None:
        miner_bits = (bits, bits, bits)
    if len(miner_bits) != NUM_MINERS:
        raise ValueError(f"exactly {NUM_MINERS} miners are required")
    agreed = []
    kinds = []
    rounds = []
    for i in range(len(bits)):
        complicit = adversary.complicit_miner(rng)
        leader = int(rng.integers(NUM_MINERS))
        receivers = tuple(m for m in range(NUM_MINERS) if m != leader)
        if complicit is None:
            role = None
        elif complicit == leader:
            role = ComplicitRole.LEADER
        elif complicit == receivers[0]:
            role = ComplicitRole.RECEIVER_1
        else:
            role = ComplicitRole.RECEIVER_2
        if sampler is not None:
            batch = sampler(copies_per_bit, leader, receivers)
        else:
            batch = sample_copies(copies_per_bit, rng, source)
        outcome = run_broadcast(
            miner_bits[leader][i],
            batch,
            adversary,
            lam,
            rng,
            complicit_role=role,
            reference_bits=(miner_bits[receivers[0]][i], miner_bits[receivers[1]][i]),
        )
        agreed.append(outcome.agreed_bit)
        kinds.append(outcome.kind)
        rounds.append(
            ConsensusRound(
                bit_index=i,
                leader=leader,
                receivers=receivers,
                complicit_miner=complicit,
                outcome=outcome,
            )
        )
    return ConsensusResult(agreed_bits=tuple(agreed), kinds=tuple(kinds), rounds=tuple(rounds))


@dataclass(frozen=True)
class CurvePoint:
    """One row of the success-probability curve.

    ``p_successful`` is estimated over rounds where the complicit party led
    (can the honest receivers still reach agreement?); ``p_detectable`` over
    rounds where it received (is the disruption flagged?).  In honest runs
    both are computed over all rounds and are trivially 1.
    """

    T: int
    trials: int
    p_detectable: float
    p_successful: float
    stderr_detectable: float
    stderr_successful: float
    leader_rounds: int = 0
    receiver_rounds: int = 0


def _rate(hits: int, count: int) -> tuple[float, float]:
    if count == 0:
        return math.nan, math.nan
    p = hits / count
    return p, math.sqrt(p * (1.0 - p) / count)


def estimate_success(
    T_range, lam: float, gamma: int | None, trials: int, rng: np.random.Generator
) -> list[CurvePoint]:
    """Monte-Carlo curve of broadcast success/detection probabilities per T."""
    T_values = [int(T) for T in T_range]
    if not T_values:
        raise ValueError("empty T range")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    adversary = AdversaryModel(gamma=gamma)
    points = []
    for T in T_values:
        leader_rounds = leader_successes = 0
        receiver_rounds = receiver_detections = 0
        honest_successes = 0
        for _ in range(trials):
            x = int(rng.integers(0, 2))
            complicit = adversary.complicit_miner(rng)
            leader = int(rng.integers(NUM_MINERS))
            receivers = tuple(m for m in range(NUM_MINERS) if m != leader)
            if complicit is None:
                role = None
            elif complicit == leader:
                role = ComplicitRole.LEADER
            elif complicit == receivers[0]:
                role = ComplicitRole.RECEIVER_1
            else:
                role = ComplicitRole.RECEIVER_2
            batch = sample_copies(T, rng, "ideal")
            outcome = run_broadcast(x, batch, adversary, lam, rng, complicit_role=role)
            if role is None:
                honest_successes += outcome.kind is OutcomeKind.SUCCESSFUL
            elif role is ComplicitRole.LEADER:
                leader_rounds += 1
                leader_successes += outcome.kind is OutcomeKind.SUCCESSFUL
            else:
                receiver_rounds += 1
                receiver_detections += outcome.kind is OutcomeKind.DETECTABLE
        if gamma is None:
            p_succ, se_succ = _rate(honest_successes, trials)
            p_det, se_det = 1.0, 0.0  # no adversarial rounds to detect
        else:
            p_succ, se_succ = _rate(leader_successes, leader_rounds)
            p_det, se_det = _rate(receiver_detections, receiver_rounds)
        points.append(
            CurvePoint(
                T=T,
                trials=trials,
                p_detectable=p_det,
                p_successful=p_succ,
                stderr_detectable=se_det,
                stderr_successful=se_succ,
                leader_rounds=leader_rounds,
                receiver_rounds=receiver_rounds,
            )
        )
    return points


def complicit_leader_success_probability(T: int) -> float:
    """Closed form 1 - (5/6)^T: some copy has (leader, R1, R2) = (x, 1-x, 2)."""
    return 1.0 - (5.0 / 6.0) ** T
