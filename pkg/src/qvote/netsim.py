"""Deterministic simulated network: parties, channels, and the transcript.

Channels are ideal (ordered, lossless, authenticated); the value of this
layer is the transcript: a strictly ordered, typed log of every classical
message and quantum transfer, which is what the independent auditor reads.
One Network instance is single-threaded by design so that a fixed seed and
configuration reproduce the transcript byte for byte.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .quantum import MeasBasis, QubitFabric, StateLabel, swap_transfer


class Role(enum.Enum):
    VOTER = "V"
    MINER = "M"
    EPS = "EPS"
    AUDITOR = "A"


@dataclass(frozen=True)
class PartyId:
    role: Role
    index: int

    def __str__(self) -> str:
        return f"{self.role.value}{self.index}"


class RegistrationError(ValueError):
    pass


class OwnershipError(PermissionError):
    pass


@dataclass(frozen=True)
class TranscriptEntry:
    seq: int
    sender: PartyId
    receiver: PartyId
    channel: str  # "classical" | "quantum"
    payload_type: str
    payload: dict

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "seq": self.seq,
                "from": str(self.sender),
                "to": str(self.receiver),
                "channel": self.channel,
                "type": self.payload_type,
                "payload": self.payload,
            },
            sort_keys=True,
            separators=(",", ":"),
        )


@dataclass
class Register:
    """A party-owned ordered group of fabric qubits."""

    id: int
    owner: PartyId
    qubits: list[int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.qubits)


class Network:
    """Single-threaded event hub owning the parties, transcript, and fabric."""

    def __init__(self):
        self.fabric = QubitFabric()
        self.transcript: list[TranscriptEntry] = []
        self._credentials: set[str] = set()
        self._parties: set[PartyId] = set()
        self._role_counts: dict[Role, int] = {role: 0 for role in Role}
        self._next_register = 0
        self.eps = self._admit(Role.EPS, "eps")

    # -- registration --------------------------------------------------------

    def _admit(self, role: Role, credentials: str) -> PartyId:
        if credentials in self._credentials:
            raise RegistrationError(f"credentials {credentials!r} already registered")
        party = PartyId(role, self._role_counts[role])
        self._role_counts[role] += 1
        self._credentials.add(credentials)
        self._parties.add(party)
        return party

    def register_party(self, role: Role, credentials: str) -> PartyId:
        """Admit a device as a voter/miner/auditor through the EPS."""
        if role is Role.EPS:
            raise RegistrationError("the EPS is created with the network")
        party = self._admit(role, credentials)
        self._log(self.eps, party, "classical", "REGISTERED", {"credentials": credentials})
        return party

    def parties(self, role: Role) -> list[PartyId]:
        return sorted(
            (p for p in self._parties if p.role is role), key=lambda p: p.index
        )

    def _check_registered(self, *parties: PartyId) -> None:
        for party in parties:
            if party not in self._parties:
                raise RegistrationError(f"party {party} is not registered")

    # -- transcript -----------------------------------------------------------

    def _log(self, sender, receiver, channel, payload_type, payload) -> TranscriptEntry:
        entry = TranscriptEntry(
            seq=len(self.transcript) + 1,
            sender=sender,
            receiver=receiver,
            channel=channel,
            payload_type=payload_type,
            payload=payload,
        )
        self.transcript.append(entry)
        return entry

    def send_classical(self, sender: PartyId, receiver: PartyId, payload_type: str, payload: dict) -> int:
        """Deliver an authenticated classical message; returns its sequence number."""
        self._check_registered(sender, receiver)
        return self._log(sender, receiver, "classical", payload_type, payload).seq

    def transcript_jsonl(self) -> str:
        return "\n".join(entry.to_json_line() for entry in self.transcript) + "\n"

    # -- quantum plane ---------------------------------------------------------

    def new_register(self, owner: PartyId, labels) -> Register:
        """Allocate a fresh register of qubits prepared in the given labels."""
        self._check_registered(owner)
        qubits = [self.fabric.alloc(label) for label in labels]
        reg = Register(id=self._next_register, owner=owner, qubits=qubits)
        self._next_register += 1
        return reg

    def new_aharonov_register(self, owner: PartyId) -> Register:
        self._check_registered(owner)
        reg = Register(id=self._next_register, owner=owner, qubits=self.fabric.alloc_aharonov())
        self._next_register += 1
        return reg

    def split_register(self, owner: PartyId, register: Register, start: int, stop: int) -> Register:
        """Carve qubits [start:stop) out of a register into a new one."""
        self._check_owner(owner, register)
        taken = register.qubits[start:stop]
        del register.qubits[start:stop]
        reg = Register(id=self._next_register, owner=owner, qubits=taken)
        self._next_register += 1
        return reg

    def _check_owner(self, party: PartyId, register: Register) -> None:
        self._check_registered(party)
        if register.owner != party:
            raise OwnershipError(
                f"{party} does not own register {register.id} (owner: {register.owner})"
            )

    def transfer_quantum(
        self,
        sender: PartyId,
        receiver: PartyId,
        register: Register,
        payload_type: str = "QUBIT_TRANSFER",
        meta: dict | None = None,
    ) -> None:
        """Move a register to a new owner by SWAPping into fresh target qubits.

        After the transfer the sender can no longer operate on the register
        (no-cloning discipline enforced through ownership).
        """
        self._check_owner(sender, register)
        self._check_registered(receiver)
        blanks = [self.fabric.alloc(StateLabel.Z0) for _ in register.qubits]
        swap_transfer(self.fabric, register.qubits, blanks)
        self.fabric.discard(register.qubits)
        register.qubits = blanks
        register.owner = receiver
        payload = {"register": register.id, "qubits": len(register.qubits)}
        if meta:
            payload.update(meta)
        self._log(sender, receiver, "quantum", payload_type, payload)

    def apply_rx(self, owner: PartyId, register: Register, position: int, theta: float) -> None:
        self._check_owner(owner, register)
        self.fabric.apply_rx(register.qubits[position], theta)

    def swap_within(self, owner: PartyId, register: Register, p: int, q: int) -> None:
        self._check_owner(owner, register)
        self.fabric.swap(register.qubits[p], register.qubits[q])

    def measure(
        self,
        owner: PartyId,
        register: Register,
        position: int,
        basis: MeasBasis,
        rng: np.random.Generator,
    ) -> int:
        self._check_owner(owner, register)
        return self.fabric.measure(register.qubits[position], basis, rng)

    def register_state(self, owner: PartyId, register: Register):
        """Joint statevector of a register (testing/verification hook)."""
        self._check_owner(owner, register)
        return self.fabric.statevector(register.qubits)
