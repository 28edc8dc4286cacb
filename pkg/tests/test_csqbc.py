import itertools
import math

import numpy as np
import pytest

from qvote.csqbc import (
    Bus,
    CommitmentRecord,
    CsqbcParams,
    DecodeStatus,
    balanced_labels,
    commit_bits,
    decode_commitment,
    honest_decode_success_probability,
    miner_measure,
    analytic_miner_cheat_rate,
    analytic_voter_cheat_rate,
    prepare_bus,
    sample_commitment,
    select_and_verify,
    simulate_miner_cheat,
    simulate_voter_cheat,
    verify_bus,
)
from qvote.quantum import (
    LABEL_BASIS,
    LABEL_BIT,
    MeasBasis,
    QuantumState,
    QubitFabric,
    StateLabel,
    label_rotate,
    states_equal,
)


class _FixedBitsRng:
    """Stub generator returning a scripted bit vector from integers()."""

    def __init__(self, bits):
        self.bits = np.array(bits, dtype=np.int64)

    def integers(self, low, high, size=None):
        assert size == len(self.bits)
        return self.bits.copy()


def fabric_commitment(params, bits, rng):
    """Full register-path session: prepare, verify, commit, measure, record."""
    fabric = QubitFabric()
    sequences = [prepare_bus(fabric, params, rng) for _ in range(params.m + params.k)]
    selection = select_and_verify(fabric, sequences, params, rng)
    assert selection.passed
    qs = selection.retained[0]
    cs = commit_bits(fabric, qs, bits, rng)
    bases, outcomes = miner_measure(fabric, qs.qubits, rng)
    record = CommitmentRecord(
        params=params,
        qs_labels=qs.labels,
        meas_bases=bases,
        meas_outcomes=outcomes,
        cs=cs,
        committed_bits=tuple(bits),
    )
    return record, fabric


def test_params_validation():
    CsqbcParams(4, 1)
    with pytest.raises(ValueError):
        CsqbcParams(5, 1)
    with pytest.raises(ValueError):
        CsqbcParams(0, 1)
    with pytest.raises(ValueError):
        CsqbcParams(4, 0)
    with pytest.raises(ValueError):
        CsqbcParams(4, 1, 0)


def test_prepare_bus_is_balanced_and_seed_deterministic():
    rng = np.random.default_rng(4)
    bus = prepare_bus(QubitFabric(), CsqbcParams(4, 1), rng)
    assert sorted(lab.value for lab in bus.labels) == sorted(l.value for l in StateLabel)
    a = prepare_bus(QubitFabric(), CsqbcParams(16, 1), np.random.default_rng(13))
    b = prepare_bus(QubitFabric(), CsqbcParams(16, 1), np.random.default_rng(13))
    assert a.labels == b.labels


def test_verify_bus_passes_honest_preparation():
    rng = np.random.default_rng(1)
    for _ in range(50):
        fabric = QubitFabric()
        bus = prepare_bus(fabric, CsqbcParams(8, 1), rng)
        assert verify_bus(fabric, bus.qubits, bus.labels, rng)


def test_verify_bus_fails_unbalanced_counts():
    rng = np.random.default_rng(2)
    fabric = QubitFabric()
    labels = (StateLabel.Z0, StateLabel.Z0, StateLabel.Z1, StateLabel.Z1)
    qubits = [fabric.alloc(lab) for lab in labels]
    # outcomes all match, but counts are (2, 2, 0, 0)
    assert not verify_bus(fabric, qubits, labels, rng)


def test_verify_bus_fails_on_orthogonal_preparation():
    rng = np.random.default_rng(3)
    for _ in range(20):
        fabric = QubitFabric()
        labels = balanced_labels(4, rng)
        qubits = [fabric.alloc(lab) for lab in labels]
        lied = (StateLabel.Z1 if labels[0] is StateLabel.Z0 else StateLabel.Z0,) + labels[1:]
        # claiming the orthogonal state in the same basis fails with certainty
        if labels[0] in (StateLabel.Z0, StateLabel.Z1):
            assert not verify_bus(fabric, qubits, lied, rng)


def test_verify_bus_rejects_length_mismatch():
    fabric = QubitFabric()
    qubits = [fabric.alloc() for _ in range(4)]
    with pytest.raises(ValueError):
        verify_bus(fabric, qubits, (StateLabel.Z0,), np.random.default_rng(0))


def _probe_bus(fabric, n):
    labels = tuple([StateLabel.Z0] * n)
    return Bus(labels=labels, qubits=[fabric.alloc(StateLabel.Z0) for _ in range(n)])


@pytest.mark.parametrize("m,expected", [(1, 0.5), (3, 0.25)])
def test_select_and_verify_retains_dishonest_sequence_at_rate(m, expected):
    rng = np.random.default_rng(14)
    params = CsqbcParams(4, m)
    trials = 10_000
    retained_probe = 0
    for _ in range(trials):
        fabric = QubitFabric()
        sequences = [_probe_bus(fabric, 4)] + [
            prepare_bus(fabric, params, rng) for _ in range(m)
        ]
        selection = select_and_verify(fabric, sequences, params, rng)
        if sequences[0] in selection.retained:
            retained_probe += 1
            assert selection.passed  # probe escaped verification
        else:
            assert not selection.passed  # unbalanced probe always fails
    sigma = math.sqrt(expected * (1 - expected) / trials)
    assert abs(retained_probe / trials - expected) <= 3 * sigma


def test_select_and_verify_honest_path_and_count_check():
    rng = np.random.default_rng(15)
    params = CsqbcParams(8, 2, 1)
    fabric = QubitFabric()
    sequences = [prepare_bus(fabric, params, rng) for _ in range(3)]
    selection = select_and_verify(fabric, sequences, params, rng)
    assert selection.passed
    assert len(selection.retained) == 1
    with pytest.raises(ValueError):
        select_and_verify(fabric, sequences[:2], params, rng)


def test_commit_bits_identity_case():
    rng = np.random.default_rng(16)
    fabric = QubitFabric()
    bus = prepare_bus(fabric, CsqbcParams(8, 1), rng)
    before = [fabric.statevector([q]) for q in bus.qubits]
    cs = commit_bits(fabric, bus, (0, 0), _FixedBitsRng([0, 0, 0, 0]))
    assert cs == (0, 0, 0, 0)
    for q, state in zip(bus.qubits, before):
        assert states_equal(fabric.statevector([q]), state)


def test_commit_bits_01_advances_each_label_one_step():
    rng = np.random.default_rng(17)
    fabric = QubitFabric()
    bus = prepare_bus(fabric, CsqbcParams(8, 1), rng)
    commit_bits(fabric, bus, (0, 1), _FixedBitsRng([0, 0, 0, 0]))
    for q, label in zip(bus.qubits, bus.labels):
        expected = QuantumState.single(label_rotate(label, math.pi / 2))
        assert states_equal(fabric.statevector([q]), expected)


def test_commit_bits_single_pair_swap():
    fabric = QubitFabric()
    labels = (StateLabel.Z0, StateLabel.Z1, StateLabel.Y_PLUS, StateLabel.Y_MINUS,
              StateLabel.Z0, StateLabel.Z1, StateLabel.Y_PLUS, StateLabel.Y_MINUS)
    bus = Bus(labels=labels, qubits=[fabric.alloc(lab) for lab in labels])
    commit_bits(fabric, bus, (0, 0), _FixedBitsRng([1, 0, 0, 0]))
    # only qubits 0 and 1 exchanged
    swapped = list(labels)
    swapped[0], swapped[1] = swapped[1], swapped[0]
    for q, label in zip(bus.qubits, swapped):
        assert states_equal(fabric.statevector([q]), QuantumState.single(label))


def test_miner_measure_basis_balance_and_label_reproduction():
    rng = np.random.default_rng(18)
    z_count = 0
    trials = 1000
    n = 16
    cross, cross_ones = 0, 0
    for _ in range(trials):
        fabric = QubitFabric()
        bus = prepare_bus(fabric, CsqbcParams(n, 1), rng)
        bases, outcomes = miner_measure(fabric, bus.qubits, rng)
        for label, basis, outcome in zip(bus.labels, bases, outcomes):
            if basis is MeasBasis.Z:
                z_count += 1
            if basis is LABEL_BASIS[label]:
                assert outcome == LABEL_BIT[label]  # eigenstate, always reproduced
            else:
                cross += 1
                cross_ones += outcome
    total = trials * n
    sigma = math.sqrt(total * 0.25)
    assert abs(z_count - total / 2) <= 3 * sigma
    sigma_cross = math.sqrt(cross * 0.25)
    assert abs(cross_ones - cross / 2) <= 3 * sigma_cross


def test_decode_roundtrip_all_bit_pairs():
    rng = np.random.default_rng(19)
    params = CsqbcParams(16, 3)
    for bits in itertools.product((0, 1), repeat=2):
        decoded_ok = 0
        for _ in range(1000):
            record = sample_commitment(params, bits, rng)
            result = decode_commitment(record)
            assert result.status is not DecodeStatus.INCONSISTENT
            if result.status is DecodeStatus.OK:
                assert result.bits == bits
                decoded_ok += 1
        assert decoded_ok > 900  # success probability ~0.98 at n=16


def test_decode_register_path_roundtrip():
    rng = np.random.default_rng(20)
    params = CsqbcParams(8, 2)
    hits = 0
    for _ in range(200):
        bits = (int(rng.integers(0, 2)), int(rng.integers(0, 2)))
        record, _ = fabric_commitment(params, bits, rng)
        result = decode_commitment(record)
        assert result.status is not DecodeStatus.INCONSISTENT
        if result.status is DecodeStatus.OK:
            assert result.bits == bits
            hits += 1
    assert hits > 100


def _enumerated_ambiguous_rate(n: int) -> float:
    """Exact honest AMBIGUOUS probability by enumerating basis/coin patterns.

    Structure derived from the protocol: the true rotation is always
    consistent; the opposite rotation is consistent iff no qubit was measured
    in its matching basis; each odd rotation constrains exactly the
    cross-basis qubits, whose outcomes are fair coins, and the two odd
    rotations require complementary coin values.
    """
    total = 0.0
    for matched in itertools.product((0, 1), repeat=n):
        d = n - sum(matched)
        base_weight = 0.5**n
        for coins in itertools.product((0, 1), repeat=d):
            weight = base_weight * 0.5**d
            plus_ok = all(c == 0 for c in coins)   # agrees with rotation k+1
            minus_ok = all(c == 1 for c in coins)  # agrees with rotation k+3
            opposite_ok = d == n
            if plus_ok or minus_ok or opposite_ok:
                total += weight
    return total


def test_decode_ambiguity_rate_matches_enumeration_oracle_n4():
    rng = np.random.default_rng(21)
    params = CsqbcParams(4, 1)
    trials = 4000
    ambiguous = 0
    for _ in range(trials):
        record = sample_commitment(params, (1, 1), rng)
        if decode_commitment(record).status is DecodeStatus.AMBIGUOUS:
            ambiguous += 1
    exact = _enumerated_ambiguous_rate(4)
    union_bound = 2 * (3 / 4) ** 4 + (1 / 2) ** 4
    assert exact <= union_bound
    assert exact == pytest.approx(1.0 - honest_decode_success_probability(4), abs=1e-12)
    sigma = math.sqrt(exact * (1 - exact) / trials)
    assert abs(ambiguous / trials - exact) <= 3 * sigma


def test_decode_never_silently_returns_flipped_record():
    rng = np.random.default_rng(22)
    flips_checked = 0
    while flips_checked < 200:
        bits = (int(rng.integers(0, 2)), int(rng.integers(0, 2)))
        record = sample_commitment(CsqbcParams(8, 1), bits, rng)
        if decode_commitment(record).status is not DecodeStatus.OK:
            continue
        # flip one deterministic-set outcome (a slot whose rotated label lies
        # in the measured basis)
        step = 2 * bits[0] + bits[1]
        positions = list(range(8))
        for p, flag in enumerate(record.cs):
            if flag:
                positions[2 * p], positions[2 * p + 1] = positions[2 * p + 1], positions[2 * p]
        target = None
        for slot in range(8):
            rotated = label_rotate(record.qs_labels[slot], step * math.pi / 2)
            if LABEL_BASIS[rotated] is record.meas_bases[positions[slot]]:
                target = positions[slot]
                break
        if target is None:
            continue
        outcomes = list(record.meas_outcomes)
        outcomes[target] ^= 1
        tampered = CommitmentRecord(
            params=record.params,
            qs_labels=record.qs_labels,
            meas_bases=record.meas_bases,
            meas_outcomes=tuple(outcomes),
            cs=record.cs,
        )
        result = decode_commitment(tampered)
        assert not (result.status is DecodeStatus.OK and result.bits == bits)
        flips_checked += 1


def test_decode_requires_revealed_cs_of_right_length():
    rng = np.random.default_rng(23)
    record = sample_commitment(CsqbcParams(8, 1), (0, 1), rng)
    with pytest.raises(ValueError):
        decode_commitment(
            CommitmentRecord(
                params=record.params,
                qs_labels=record.qs_labels,
                meas_bases=record.meas_bases,
                meas_outcomes=record.meas_outcomes,
            )
        )
    with pytest.raises(ValueError):
        decode_commitment(record.with_cs((0, 1)))


def test_sampler_and_register_path_agree_statistically():
    # decode success rates from both execution paths at n=8 within 3 sigma
    params = CsqbcParams(8, 1)
    trials = 1500
    rng_a = np.random.default_rng(24)
    fast = sum(
        decode_commitment(
            sample_commitment(params, (1, 0), rng_a)
        ).status is DecodeStatus.OK
        for _ in range(trials)
    )
    rng_b = np.random.default_rng(25)
    register = 0
    for _ in range(trials):
        record, _ = fabric_commitment(params, (1, 0), rng_b)
        register += decode_commitment(record).status is DecodeStatus.OK
    p = honest_decode_success_probability(8)
    sigma = math.sqrt(p * (1 - p) / trials)
    assert abs(fast / trials - p) <= 3 * sigma
    assert abs(register / trials - p) <= 3 * sigma


def test_concealment_chi_square_over_committed_values():
    scipy_stats = pytest.importorskip("scipy.stats")
    rng = np.random.default_rng(26)
    params = CsqbcParams(16, 1)
    trials = 10_000
    table = np.zeros((4, 4), dtype=np.int64)  # committed value x (basis, outcome) cell
    for value, bits in enumerate(itertools.product((0, 1), repeat=2)):
        for _ in range(trials):
            record = sample_commitment(params, bits, rng)
            for basis, outcome in zip(record.meas_bases, record.meas_outcomes):
                cell = 2 * (basis is MeasBasis.Y) + outcome
                table[value, cell] += 1
    statistic = scipy_stats.chi2_contingency(table).statistic
    assert statistic < scipy_stats.chi2.ppf(0.999, df=9)


def test_resource_count_per_commitment():
    rng = np.random.default_rng(27)
    for m in (1, 3):
        params = CsqbcParams(16, m, 1)
        fabric = QubitFabric()
        sequences = [prepare_bus(fabric, params, rng) for _ in range(m + 1)]
        selection = select_and_verify(fabric, sequences, params, rng)
        commit_bits(fabric, selection.retained[0], (1, 1), rng)
        miner_measure(fabric, selection.retained[0].qubits, rng)
        assert fabric.total_allocated == (m + 1) * 16


def test_voter_cheat_matches_statevector_oracle_exactly_at_n4():
    from oracles import oracle_binding_failure

    rng = np.random.default_rng(28)
    rate, trials = simulate_voter_cheat(CsqbcParams(4, 1), 300, rng, collect=True)
    oracle_flags = [oracle_binding_failure(t.record) for t in trials]
    assert [t.success for t in trials] == oracle_flags
    assert rate == sum(oracle_flags) / len(oracle_flags)


def test_voter_cheat_rate_decays_with_n():
    rng = np.random.default_rng(29)
    rates = [simulate_voter_cheat(CsqbcParams(n, 1), 400, rng) for n in (4, 8, 12, 16)]
    assert all(a > b for a, b in zip(rates, rates[1:]))


def test_voter_cheat_rejects_zero_trials():
    with pytest.raises(ValueError):
        simulate_voter_cheat(CsqbcParams(4, 1), 0, np.random.default_rng(0))


def test_miner_cheat_rates():
    rng = np.random.default_rng(30)
    for m, expected in ((1, 0.5), (3, 0.25)):
        result = simulate_miner_cheat(CsqbcParams(8, m), 10_000, rng)
        sigma = math.sqrt(expected * (1 - expected) / 10_000)
        assert abs(result.success_rate - expected) <= 3 * sigma
        assert result.success_rate + result.detection_rate == pytest.approx(1.0)


def test_miner_cheat_requires_k1_and_trials():
    with pytest.raises(ValueError):
        simulate_miner_cheat(CsqbcParams(8, 1, 2), 10, np.random.default_rng(0))
    with pytest.raises(ValueError):
        simulate_miner_cheat(CsqbcParams(8, 1), 0, np.random.default_rng(0))


def test_analytic_rates_reported_values():
    assert analytic_voter_cheat_rate(4) == 0.5**4
    assert analytic_miner_cheat_rate(8, 3) == pytest.approx((1 - 0.25**8) / 4)


def test_decode_correctness_invariant_bulk():
    # over honest runs decode never returns wrong bits; failures are AMBIGUOUS
    rng = np.random.default_rng(31)
    params = CsqbcParams(16, 1)
    wrong = 0
    for _ in range(100_000):
        bits = (int(rng.integers(0, 2)), int(rng.integers(0, 2)))
        result = decode_commitment(sample_commitment(params, bits, rng))
        assert result.status is not DecodeStatus.INCONSISTENT
        if result.status is DecodeStatus.OK and result.bits != bits:
            wrong += 1
    assert wrong == 0
