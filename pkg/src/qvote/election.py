"""End-to-end election orchestration and the experiment runners.

``run_election`` wires the full pipeline through the simulated network:
registration, voting-matrix distribution, masked-ballot computation, one
CSQBC session per voter/miner pair, opening with bounded retries, per-bit
Byzantine agreement, tallying, and a full-pairs audit.  Everything derives
from one seeded generator, so a config+seed pair reproduces the result and
transcript byte for byte.

The ``run_experiment_*`` functions are the Monte-Carlo harnesses behind the
CLI; they consume per-point child streams of the caller's generator so that
results do not depend on worker parallelism.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from collections import Counter

import numpy as np

from . import ballot as ballot_mod
from . import csqbc, qba
from .ballot import AuditClaim, MaskedBallot, audit, ballot_bit_length, generate_row, masked_ballot
from .csqbc import CommitmentRecord, CsqbcParams, DecodeStatus, decode_commitment
from .netsim import Network, Register, Role
from .quantum import (
    LABEL_BASIS,
    LABEL_BIT,
    DensityMatrix,
    MeasBasis,
    StateLabel,
    depolarize,
    fidelity,
    prepare_aharonov,
)

NUM_MINERS = 3


# --- Configuration -----------------------------------------------------------


@dataclass(frozen=True)
class ElectionAdversary:
    """One optional misbehaving party.

    kind "none": everyone honest.  "qba": a complicit miner (placement gamma)
    disrupts the consensus rounds.  "probe": the given miner ships a known
    unbalanced probe sequence in every commitment session.  "reveal": the
    given voter opens every commitment with a random alternative CS.
    "lie": matrix shares listed in ``lies`` arrive corrupted by delta.
    """

    kind: str = "none"
    gamma: int | None = None
    miner: int | None = None
    voter: int | None = None
    lies: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        if self.kind not in ("none", "qba", "probe", "reveal", "lie"):
            raise ValueError(f"unknown adversary kind {self.kind!r}")
        if self.kind == "qba" and self.gamma is None:
            raise ValueError("qba adversary needs gamma")
        if self.kind == "probe" and self.miner is None:
            raise ValueError("probe adversary needs a miner index")
        if self.kind == "reveal" and self.voter is None:
            raise ValueError("reveal adversary needs a voter index")
        if self.kind == "lie" and not self.lies:
            raise ValueError("lie adversary needs at least one (i, j, delta)")

    @classmethod
    def parse(cls, text: str) -> "ElectionAdversary":
        parts = text.split(":")
        if parts[0] == "none":
            return cls()
        if parts[0] == "qba":
            return cls(kind="qba", gamma=int(parts[1]))
        if parts[0] == "probe":
            return cls(kind="probe", miner=int(parts[1]))
        if parts[0] == "reveal":
            return cls(kind="reveal", voter=int(parts[1]))
        if parts[0] == "lie":
            return cls(kind="lie", lies=((int(parts[1]), int(parts[2]), int(parts[3])),))
        raise ValueError(f"cannot parse adversary {text!r}")

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "gamma": self.gamma,
            "miner": self.miner,
            "voter": self.voter,
            "lies": [list(l) for l in self.lies],
        }


@dataclass(frozen=True)
class ElectionConfig:
    voters: int
    votes: object = "random"  # bit string/sequence or "random"
    n: int = 16
    m: int = 3
    copies: int = 30
    lam: float = 0.9
    seed: int = 0
    miners: int = NUM_MINERS
    entry_bound: int = ballot_mod.DEFAULT_ENTRY_BOUND
    qba_source: str = "ideal"
    max_retries: int = 3
    adversary: ElectionAdversary = field(default_factory=ElectionAdversary)

    def __post_init__(self):
        if self.voters < 2:
            raise ValueError("need at least two voters")
        if self.miners != NUM_MINERS:
            raise ValueError(f"exactly {NUM_MINERS} miners are supported")
        CsqbcParams(self.n, self.m, ballot_bit_length(self.voters))  # validates n, m
        if not 0.0 < self.lam <= 1.0:
            raise ValueError(f"lambda must be in (0, 1]; got {self.lam}")
        if self.copies < 0:
            raise ValueError("copies must be >= 0")
        if self.qba_source not in ("ideal", "statevector"):
            raise ValueError(f"unknown qba source {self.qba_source!r}")
        if self.votes != "random":
            resolved = tuple(int(v) for v in self.votes)
            if len(resolved) != self.voters or any(v not in (0, 1) for v in resolved):
                raise ValueError("votes must be one bit per voter")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")

    def as_dict(self, resolved_votes=None) -> dict:
        votes = resolved_votes if resolved_votes is not None else self.votes
        if votes != "random":
            votes = "".join(str(int(v)) for v in votes)
        return {
            "voters": self.voters,
            "votes": votes,
            "n": self.n,
            "m": self.m,
            "copies": self.copies,
            "lambda": self.lam,
            "seed": self.seed,
            "miners": self.miners,
            "entry_bound": self.entry_bound,
            "qba_source": self.qba_source,
            "max_retries": self.max_retries,
            "adversary": self.adversary.as_dict(),
        }


@dataclass
class ElectionResult:
    config: dict
    outcome: str  # completed | aborted_commitment | aborted_decode | aborted_consensus
    tally: int | None
    true_yes_count: int
    votes: tuple[int, ...]
    masked_values: tuple[int, ...]
    agreed_values: tuple  # consensus result per voter (None where not reached)
    decoded: dict  # miner -> voter -> value
    consensus_kinds: dict  # voter -> list of outcome kind strings
    retries: dict  # "Vi->Mj" -> retry count
    audit_flags: list  # [{"i", "j", "verdict"}]
    events: list  # structured notes: detections, probe stats, abort reasons
    transcript_jsonl: str = field(repr=False, default="")

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "outcome": self.outcome,
            "tally": self.tally,
            "true_yes_count": self.true_yes_count,
            "votes": "".join(str(v) for v in self.votes),
            "masked_values": list(self.masked_values),
            "agreed_values": list(self.agreed_values),
            "decoded": self.decoded,
            "consensus_kinds": self.consensus_kinds,
            "retries": self.retries,
            "audit_flags": self.audit_flags,
            "events": self.events,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"


# --- The election run --------------------------------------------------------


class _AbortCommitment(Exception):
    pass


class _AbortDecode(Exception):
    pass


class _AbortConsensus(Exception):
    pass


class _Session:
    """State of one voter->miner commitment: records plus the voter's secrets."""

    def __init__(self):
        self.records: list[CommitmentRecord] = []
        self.cs_values: list[tuple[int, ...]] = []
        self.session_id = 0


def _verify_sequence(net, owner, register, labels, rng) -> bool:
    """Voter-side BUS verification through the ownership-checked network API."""
    counts = Counter(labels)
    n = len(labels)
    ok = n % 4 == 0 and all(counts.get(lab, 0) == n // 4 for lab in StateLabel)
    for pos, lab in enumerate(labels):
        if net.measure(owner, register, pos, LABEL_BASIS[lab], rng) != LABEL_BIT[lab]:
            ok = False
    return ok


class _ElectionRun:
    def __init__(self, config: ElectionConfig):
        self.config = config
        self.rng = np.random.default_rng(config.seed)
        self.net = Network()
        self.k = ballot_bit_length(config.voters)
        self.events: list[dict] = []
        self.retries: dict[str, int] = {}
        self._session_counter = 0

    # -- setup and ballot preparation --

    def _setup(self):
        cfg = self.config
        self.voters = [
            self.net.register_party(Role.VOTER, f"voter-{i}") for i in range(cfg.voters)
        ]
        self.miners = [
            self.net.register_party(Role.MINER, f"miner-{j}") for j in range(cfg.miners)
        ]
        self.auditor = self.net.register_party(Role.AUDITOR, "auditor-0")
        if cfg.votes == "random":
            self.votes = tuple(int(v) for v in self.rng.integers(0, 2, size=cfg.voters))
        else:
            self.votes = tuple(int(v) for v in cfg.votes)

    def _prepare_ballots(self):
        cfg = self.config
        n_voters = cfg.voters
        lies = {(i, j): delta for i, j, delta in cfg.adversary.lies} if cfg.adversary.kind == "lie" else {}
        self.rows = [generate_row(i, n_voters, cfg.entry_bound, self.rng) for i in range(n_voters)]
        # received[j][i] = the value of V[i][j] as told to voter j
        self.received = [[0] * n_voters for _ in range(n_voters)]
        for i in range(n_voters):
            for j in range(n_voters):
                if i == j:
                    self.received[j][i] = self.rows[i][i]
                    continue
                value = self.rows[i][j] + lies.get((i, j), 0)
                self.net.send_classical(
                    self.voters[i], self.voters[j], "MATRIX_SHARE",
                    {"i": i, "j": j, "value": value},
                )
                self.received[j][i] = value
        self.ballots: list[MaskedBallot] = []
        for j in range(n_voters):
            column = [self.received[j][i] for i in range(n_voters)]
            self.ballots.append(masked_ballot(column, self.votes[j], n_voters, voter=j))

    # -- commitment sessions --

    def _prepare_sequences(
        self, miner_idx: int, count: int
    ) -> list[tuple[tuple[StateLabel, ...], Register]]:
        """Miner-side BUS preparation; a probing miner ships one known probe."""
        cfg = self.config
        sequences = []
        cheat_probe = cfg.adversary.kind == "probe" and cfg.adversary.miner == miner_idx
        for s in range(count):
            if cheat_probe and s == 0:
                labels = tuple([StateLabel.Z0] * cfg.n)
            else:
                labels = csqbc.balanced_labels(cfg.n, self.rng)
            register = self.net.new_register(self.miners[miner_idx], labels)
            sequences.append((labels, register))
        return sequences

    def _commit_session(self, voter_idx: int, miner_idx: int, bits) -> _Session:
        """One commitment session carrying len(bits)/2 two-bit groups."""
        cfg = self.config
        k_session = len(bits) // 2
        params = CsqbcParams(cfg.n, cfg.m, k_session)
        voter, miner = self.voters[voter_idx], self.miners[miner_idx]
        session = _Session()
        session.session_id = self._session_counter
        self._session_counter += 1
        sid = session.session_id

        total = params.m + params.k
        sequences = self._prepare_sequences(miner_idx, total)
        for s, (_, register) in enumerate(sequences):
            self.net.transfer_quantum(
                miner, voter, register, "BUS_TRANSFER", {"session": sid, "sequence": s}
            )
        chosen = sorted(int(c) for c in self.rng.choice(total, size=params.m, replace=False))
        self.net.send_classical(voter, miner, "REVEAL_REQUEST", {"session": sid, "sequences": chosen})
        self.net.send_classical(
            miner, voter, "REVEAL_LABELS",
            {"session": sid, "labels": {str(s): [lab.value for lab in sequences[s][0]] for s in chosen}},
        )
        verdict = True
        for s in chosen:
            labels, register = sequences[s]
            if not _verify_sequence(self.net, voter, register, labels, self.rng):
                verdict = False
        self.net.send_classical(voter, miner, "VERIFY_VERDICT", {"session": sid, "pass": verdict})
        if not verdict:
            self.events.append(
                {"event": "bus_verification_failed", "voter": voter_idx, "miner": miner_idx}
            )
            raise _AbortCommitment()
        if cfg.adversary.kind == "probe" and cfg.adversary.miner == miner_idx:
            retained_probe = 0 not in chosen
            self.events.append(
                {"event": "probe_retained" if retained_probe else "probe_escaped_verification",
                 "voter": voter_idx, "miner": miner_idx}
            )

        retained = [sequences[s] for s in range(total) if s not in set(chosen)]
        for g, (labels, register) in enumerate(retained):
            pair = bits[2 * g: 2 * g + 2]
            theta = csqbc.commit_theta(pair)
            for pos in range(cfg.n):
                self.net.apply_rx(voter, register, pos, theta)
            cs = tuple(int(c) for c in self.rng.integers(0, 2, size=cfg.n // 2))
            for p, flag in enumerate(cs):
                if flag:
                    self.net.swap_within(voter, register, 2 * p, 2 * p + 1)
            session.cs_values.append(cs)
            self.net.transfer_quantum(
                voter, miner, register, "COMMIT_TRANSFER", {"session": sid, "group": g}
            )
            bases, outcomes = [], []
            for pos in range(cfg.n):
                basis = (MeasBasis.Z, MeasBasis.Y)[int(self.rng.integers(0, 2))]
                bases.append(basis)
                outcomes.append(self.net.measure(miner, register, pos, basis, self.rng))
            session.records.append(
                CommitmentRecord(
                    params=params,
                    qs_labels=labels,
                    meas_bases=tuple(bases),
                    meas_outcomes=tuple(outcomes),
                )
            )
        return session

    def _open_group(self, voter_idx: int, miner_idx: int, session: _Session, g: int):
        """Reveal one group's CS and decode it; returns (status, bits)."""
        cfg = self.config
        voter, miner = self.voters[voter_idx], self.miners[miner_idx]
        cs = session.cs_values[g]
        if cfg.adversary.kind == "reveal" and cfg.adversary.voter == voter_idx:
            cs = self._alternative_cs(cs)
        self.net.send_classical(
            voter, miner, "CS_REVEAL",
            {"session": session.session_id, "group": g, "cs": list(cs)},
        )
        result = decode_commitment(session.records[g].with_cs(cs))
        self.net.send_classical(
            miner, voter, "DECODE_RESULT",
            {"session": session.session_id, "group": g, "status": result.status.value,
             "bits": None if result.bits is None else list(result.bits)},
        )
        return result.status, result.bits

    def _alternative_cs(self, cs) -> tuple[int, ...]:
        """A dishonest opening: any CS different from the true one."""
        while True:
            alt = tuple(int(c) for c in self.rng.integers(0, 2, size=len(cs)))
            if alt != tuple(cs):
                return alt

    def _commitment_phase(self):
        self.sessions: dict[tuple[int, int], _Session] = {}
        for v in range(self.config.voters):
            for mj in range(self.config.miners):
                self.sessions[(v, mj)] = self._commit_session(v, mj, self.ballots[v].bits)

    def _opening_phase(self):
        """Decode every commitment.

        An AMBIGUOUS group is retried with a fresh single-group commitment
        session (one group with its own fresh decoys) up to the retry budget;
        anything INCONSISTENT is treated as detected cheating.
        """
        cfg = self.config
        self.decoded_bits: dict[tuple[int, int], tuple[int, ...]] = {}
        for v in range(cfg.voters):
            for mj in range(cfg.miners):
                key = f"{self.voters[v]}->{self.miners[mj]}"
                session = self.sessions[(v, mj)]
                groups: list[tuple[int, int]] = []
                for g in range(self.k):
                    status, bits = self._open_group(v, mj, session, g)
                    attempts = 0
                    while status is DecodeStatus.AMBIGUOUS and attempts < cfg.max_retries:
                        attempts += 1
                        self.retries[key] = self.retries.get(key, 0) + 1
                        pair = tuple(self.ballots[v].bits[2 * g: 2 * g + 2])
                        retry_session = self._commit_session(v, mj, pair)
                        status, bits = self._open_group(v, mj, retry_session, 0)
                    if status is DecodeStatus.INCONSISTENT:
                        self.events.append(
                            {"event": "decode_inconsistent", "voter": v, "miner": mj}
                        )
                        raise _AbortDecode()
                    if status is DecodeStatus.AMBIGUOUS:
                        self.events.append(
                            {"event": "decode_retries_exhausted", "voter": v, "miner": mj}
                        )
                        raise _AbortDecode()
                    groups.append(bits)
                self.decoded_bits[(v, mj)] = tuple(b for group in groups for b in group)

    # -- consensus, tally, audit --

    def _distribute_aharonov_batch(self, copies: int, leader: int, receivers) -> qba.AharonovBatch:
        """Statevector-mode copies: the leader prepares each 6-qubit register,
        transfers one pair to each receiver, and all three measure."""
        rows = np.empty((copies, 3), dtype=np.int64)
        leader_party = self.miners[leader]
        for c in range(copies):
            reg = self.net.new_aharonov_register(leader_party)
            pair_r1 = self.net.split_register(leader_party, reg, 2, 4)
            pair_r2 = self.net.split_register(leader_party, reg, 2, 4)
            self.net.transfer_quantum(
                leader_party, self.miners[receivers[0]], pair_r1, "AHARONOV_TRANSFER"
            )
            self.net.transfer_quantum(
                leader_party, self.miners[receivers[1]], pair_r2, "AHARONOV_TRANSFER"
            )
            for column, (party, pair) in enumerate(
                ((leader_party, reg),
                 (self.miners[receivers[0]], pair_r1),
                 (self.miners[receivers[1]], pair_r2))
            ):
                b0 = self.net.measure(party, pair, 0, MeasBasis.Z, self.rng)
                b1 = self.net.measure(party, pair, 1, MeasBasis.Z, self.rng)
                rows[c, column] = 2 * b0 + b1
        return qba.AharonovBatch(trits=rows)

    def _consensus_phase(self):
        cfg = self.config
        adversary = (
            qba.AdversaryModel(gamma=cfg.adversary.gamma)
            if cfg.adversary.kind == "qba"
            else qba.HONEST
        )
        sampler = self._distribute_aharonov_batch if cfg.qba_source == "statevector" else None
        self.consensus_kinds: dict[str, list[str]] = {}
        self.agreed_values: list[int | None] = []
        detectable = False
        for v in range(cfg.voters):
            miner_bits = tuple(self.decoded_bits[(v, mj)] for mj in range(cfg.miners))
            result = qba.consensus_on_ballot(
                miner_bits[0],
                cfg.copies,
                adversary,
                cfg.lam,
                self.rng,
                miner_bits=miner_bits,
                source=cfg.qba_source,
                sampler=sampler,
            )
            for rnd in result.rounds:
                leader = self.miners[rnd.leader]
                for r in rnd.receivers:
                    self.net.send_classical(
                        leader, self.miners[r], "CONSENSUS_BROADCAST",
                        {"voter": v, "bit_index": rnd.bit_index, "copies": cfg.copies},
                    )
                self.net.send_classical(
                    self.miners[rnd.receivers[0]], self.miners[rnd.receivers[1]],
                    "CONSENSUS_OUTCOME",
                    {"voter": v, "bit_index": rnd.bit_index,
                     "kind": rnd.outcome.kind.value,
                     "agreed": rnd.outcome.agreed_bit},
                )
            self.consensus_kinds[str(self.voters[v])] = [kind.value for kind in result.kinds]
            if result.all_successful:
                value = ballot_mod.decode_bits(result.agreed_bits) % (cfg.voters + 1)
                self.agreed_values.append(value)
            else:
                detectable = True
                self.agreed_values.append(None)
        if detectable:
            self.events.append({"event": "consensus_detectable"})
            raise _AbortConsensus()

    def _audit_phase(self) -> list[dict]:
        flags = []
        for i in range(self.config.voters):
            for j in range(self.config.voters):
                if i == j:
                    continue
                self.net.send_classical(self.auditor, self.voters[i], "AUDIT_QUERY", {"i": i, "j": j})
                self.net.send_classical(
                    self.voters[i], self.auditor, "AUDIT_RESPONSE",
                    {"i": i, "j": j, "value": self.rows[i][j]},
                )
                self.net.send_classical(self.auditor, self.voters[j], "AUDIT_QUERY", {"i": i, "j": j})
                self.net.send_classical(
                    self.voters[j], self.auditor, "AUDIT_RESPONSE",
                    {"i": i, "j": j, "value": self.received[j][i]},
                )
                claim = AuditClaim(
                    asker=str(self.auditor), i=i, j=j,
                    value_from_i=self.rows[i][j], value_from_j=self.received[j][i],
                )
                verdict = audit(claim)
                flags.append({"i": i, "j": j, "verdict": verdict.value})
        return flags

    def run(self) -> ElectionResult:
        self._setup()
        self._prepare_ballots()
        outcome = "completed"
        tally_value: int | None = None
        try:
            self._commitment_phase()
            self._opening_phase()
            self._consensus_phase()
            tally_value = sum(v for v in self.agreed_values) % (self.config.voters + 1)
        except _AbortCommitment:
            outcome = "aborted_commitment"
        except _AbortDecode:
            outcome = "aborted_decode"
        except _AbortConsensus:
            outcome = "aborted_consensus"
        audit_flags = self._audit_phase()
        decoded = {
            str(self.miners[mj]): {
                str(self.voters[v]): ballot_mod.decode_bits(bits) % (self.config.voters + 1)
                for (v, mjj), bits in sorted(getattr(self, "decoded_bits", {}).items())
                if mjj == mj
            }
            for mj in range(self.config.miners)
        }
        return ElectionResult(
            config=self.config.as_dict(resolved_votes=self.votes),
            outcome=outcome,
            tally=tally_value,
            true_yes_count=sum(self.votes),
            votes=self.votes,
            masked_values=tuple(b.value for b in self.ballots),
            agreed_values=tuple(getattr(self, "agreed_values", [None] * self.config.voters)),
            decoded=decoded,
            consensus_kinds=getattr(self, "consensus_kinds", {}),
            retries=dict(sorted(self.retries.items())),
            audit_flags=audit_flags,
            events=self.events,
            transcript_jsonl=self.net.transcript_jsonl(),
        )


def run_election(config: ElectionConfig) -> ElectionResult:
    """Execute one full election; aborts surface as structured outcomes."""
    return _ElectionRun(config).run()


# --- Experiment runners -------------------------------------------------------


def _binomial_stderr(p: float, count: int) -> float:
    if count <= 0 or math.isnan(p):
        return math.nan
    return math.sqrt(p * (1.0 - p) / count)


def _csqbc_point(args) -> dict:
    n, m, trials, rng = args
    params = CsqbcParams(n, m, 1)
    successes = 0
    for _ in range(trials):
        # The verification-subset draw is part of the scheme even though the
        # decoys cannot influence an honest decode.
        rng.choice(m + 1, size=m, replace=False)
        bits = (int(rng.integers(0, 2)), int(rng.integers(0, 2)))
        record = csqbc.sample_commitment(params, bits, rng)
        result = decode_commitment(record)
        successes += result.status is DecodeStatus.OK and result.bits == bits
    rate = successes / trials
    return {"n": n, "m": m, "trials": trials, "success_rate": rate,
            "stderr": _binomial_stderr(rate, trials)}


def _map_points(worker, point_args, jobs: int) -> list[dict]:
    if jobs <= 1 or len(point_args) <= 1:
        return [worker(args) for args in point_args]
    with ProcessPoolExecutor(max_workers=min(jobs, len(point_args))) as pool:
        return list(pool.map(worker, point_args))


def run_experiment_csqbc(n_values, m: int, trials: int, rng: np.random.Generator, jobs: int = 1):
    """Honest commitment success rate per sequence length n."""
    n_values = [int(n) for n in n_values]
    if trials < 1:
        raise ValueError("trials must be >= 1")
    streams = rng.spawn(len(n_values))
    return _map_points(_csqbc_point, [(n, m, trials, s) for n, s in zip(n_values, streams)], jobs)


def _qba_point(args) -> dict:
    T, lam, gamma, trials, rng = args
    point = qba.estimate_success([T], lam, gamma, trials, rng)[0]
    return {
        "T": point.T,
        "trials": point.trials,
        "p_detectable": point.p_detectable,
        "p_successful": point.p_successful,
        "stderr_detectable": point.stderr_detectable,
        "stderr_successful": point.stderr_successful,
    }


def run_experiment_qba(T_range, lam: float, gamma: int | None, trials: int,
                       rng: np.random.Generator, jobs: int = 1):
    """Broadcast success/detection curves over the number of Aharonov copies."""
    T_values = [int(T) for T in T_range]
    if not T_values:
        raise ValueError("empty T range")
    streams = rng.spawn(len(T_values))
    return _map_points(
        _qba_point, [(T, lam, gamma, trials, s) for T, s in zip(T_values, streams)], jobs
    )


def _voter_cheat_point(args) -> dict:
    n, m, trials, rng = args
    rate = csqbc.simulate_voter_cheat(CsqbcParams(n, m, 1), trials, rng)
    return {
        "mode": "voter", "n": n, "m": m, "trials": trials,
        "success_rate": rate, "stderr": _binomial_stderr(rate, trials),
        "analytic_rate": csqbc.analytic_voter_cheat_rate(n),
    }


def _miner_cheat_point(args) -> dict:
    n, m, trials, rng = args
    result = csqbc.simulate_miner_cheat(CsqbcParams(n, m, 1), trials, rng)
    return {
        "mode": "miner", "n": n, "m": m, "trials": trials,
        "success_rate": result.success_rate, "detection_rate": result.detection_rate,
        "stderr": _binomial_stderr(result.success_rate, trials),
        "expected_rate": 1.0 / (m + 1),
        "analytic_rate": csqbc.analytic_miner_cheat_rate(n, m),
    }


def run_experiment_cheat(mode: str, trials: int, rng: np.random.Generator, *,
                         n_values=(4, 8, 12, 16), m_values=(1, 2, 3, 7),
                         n: int = 16, m: int = 3, jobs: int = 1):
    """Cheat-strategy success rates with analytic comparison rates alongside."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if mode == "voter":
        points = [int(v) for v in n_values]
        streams = rng.spawn(len(points))
        return _map_points(
            _voter_cheat_point, [(nv, m, trials, s) for nv, s in zip(points, streams)], jobs
        )
    if mode == "miner":
        points = [int(v) for v in m_values]
        streams = rng.spawn(len(points))
        return _map_points(
            _miner_cheat_point, [(n, mv, trials, s) for mv, s in zip(points, streams)], jobs
        )
    raise ValueError(f"unknown cheat mode {mode!r}")


def run_experiment_fidelity(noise_levels, rng: np.random.Generator):
    """Fidelity of the Aharonov state under per-qubit depolarizing noise."""
    ideal = DensityMatrix.from_state(prepare_aharonov())
    rows = []
    for p in noise_levels:
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"noise level must be in [0, 1]; got {p}")
        rho = ideal
        for qubit in range(6):
            rho = depolarize(rho, qubit, p)
        rows.append({"p": p, "fidelity": fidelity(rho, ideal)})
    return rows


# --- CSV emission --------------------------------------------------------------


def rows_to_csv(rows, columns, config_note: dict | None = None) -> str:
    """Render experiment rows as CSV with an optional leading config comment."""
    lines = []
    if config_note is not None:
        lines.append("# config: " + json.dumps(config_note, sort_keys=True))
    lines.append(",".join(columns))
    for row in rows:
        cells = []
        for col in columns:
            value = row[col]
            if isinstance(value, float):
                cells.append(repr(float(value)))
            else:
                cells.append(str(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
