import json

import numpy as np
import pytest

from qvote.csqbc import balanced_labels
from qvote.netsim import Network, OwnershipError, PartyId, RegistrationError, Role
from qvote.quantum import LABEL_BASIS, LABEL_BIT, MeasBasis, StateLabel, states_equal


def test_registration_and_party_lists():
    net = Network()
    voters = [net.register_party(Role.VOTER, f"v{i}") for i in range(2)]
    miners = [net.register_party(Role.MINER, f"m{i}") for i in range(3)]
    net.register_party(Role.AUDITOR, "aud")
    assert voters[0] == PartyId(Role.VOTER, 0)
    assert [str(m) for m in miners] == ["M0", "M1", "M2"]
    assert len(net.parties(Role.MINER)) == 3


def test_duplicate_credentials_rejected():
    net = Network()
    net.register_party(Role.VOTER, "dev-1")
    with pytest.raises(RegistrationError):
        net.register_party(Role.MINER, "dev-1")


def test_eps_exists_and_cannot_be_registered():
    net = Network()
    assert str(net.eps) == "EPS0"
    with pytest.raises(RegistrationError):
        net.register_party(Role.EPS, "eps-2")


def test_send_classical_appends_ordered_transcript():
    net = Network()
    a = net.register_party(Role.VOTER, "a")
    b = net.register_party(Role.VOTER, "b")
    start = len(net.transcript)
    for i in range(1000):
        net.send_classical(a, b, "PING", {"i": i})
    seqs = [entry.seq for entry in net.transcript]
    assert seqs == list(range(1, start + 1001))


def test_send_classical_rejects_unregistered_parties():
    net = Network()
    a = net.register_party(Role.VOTER, "a")
    ghost = PartyId(Role.VOTER, 99)
    with pytest.raises(RegistrationError):
        net.send_classical(ghost, a, "PING", {})
    with pytest.raises(RegistrationError):
        net.send_classical(a, ghost, "PING", {})


def test_transfer_quantum_hands_off_ownership():
    rng = np.random.default_rng(1)
    net = Network()
    miner = net.register_party(Role.MINER, "m")
    voter = net.register_party(Role.VOTER, "v")
    labels = balanced_labels(8, rng)
    reg = net.new_register(miner, labels)
    net.transfer_quantum(miner, voter, reg, "BUS_TRANSFER")
    # receiver can verify the sequence
    for pos, lab in enumerate(labels):
        assert net.measure(voter, reg, pos, LABEL_BASIS[lab], rng) == LABEL_BIT[lab]
    # sender lost access
    with pytest.raises(OwnershipError):
        net.measure(miner, reg, 0, MeasBasis.Z, rng)
    quantum_entries = [e for e in net.transcript if e.channel == "quantum"]
    assert len(quantum_entries) == 1
    assert quantum_entries[0].payload_type == "BUS_TRANSFER"


def test_transfer_roundtrip_preserves_state():
    rng = np.random.default_rng(2)
    net = Network()
    miner = net.register_party(Role.MINER, "m")
    voter = net.register_party(Role.VOTER, "v")
    labels = (StateLabel.Y_PLUS, StateLabel.Z1)
    reg = net.new_register(miner, labels)
    before = net.register_state(miner, reg)
    net.transfer_quantum(miner, voter, reg)
    net.transfer_quantum(voter, miner, reg)
    assert states_equal(net.register_state(miner, reg), before)


def test_transfer_requires_ownership():
    net = Network()
    miner = net.register_party(Role.MINER, "m")
    voter = net.register_party(Role.VOTER, "v")
    reg = net.new_register(miner, (StateLabel.Z0,))
    with pytest.raises(OwnershipError):
        net.transfer_quantum(voter, miner, reg)


def test_transcript_jsonl_is_parseable_and_deterministic():
    def build():
        net = Network()
        rng = np.random.default_rng(3)
        a = net.register_party(Role.VOTER, "a")
        b = net.register_party(Role.MINER, "b")
        reg = net.new_register(a, balanced_labels(4, rng))
        net.send_classical(a, b, "HELLO", {"x": 1})
        net.transfer_quantum(a, b, reg, "BUS_TRANSFER", {"session": 0})
        net.measure(b, reg, 0, MeasBasis.Z, rng)
        return net.transcript_jsonl()

    text_a, text_b = build(), build()
    assert text_a == text_b
    for line in text_a.strip().splitlines():
        entry = json.loads(line)
        assert set(entry) == {"seq", "from", "to", "channel", "type", "payload"}


def test_split_register():
    net = Network()
    m = net.register_party(Role.MINER, "m")
    reg = net.new_register(m, (StateLabel.Z0, StateLabel.Z1, StateLabel.Y_PLUS))
    part = net.split_register(m, reg, 1, 3)
    assert len(reg) == 1 and len(part) == 2
    assert part.owner == m
