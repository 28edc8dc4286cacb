"""Exact statevector/density-matrix simulation of small qubit registers.

Conventions used throughout the package:

- Qubit 0 is the most significant bit of a basis-state index, so the
  amplitude vector of ``|q0 q1 ... q(n-1)>`` lives at index
  ``int("q0q1...q(n-1)", 2)``.
- Global phases are ignored: two states are "equal" when the magnitude of
  their overlap is 1 within ``ATOL``.
- Randomness always comes from an explicit ``numpy.random.Generator`` so
  every caller owns its stream.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 12
ATOL = 1e-9

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class StateLabel(enum.Enum):
    """The four single-qubit preparation states used by the commitment."""

    Z0 = "Z0"          # |0>
    Z1 = "Z1"          # |1>
    Y_PLUS = "Y+"      # (|0> + i|1>)/sqrt(2)
    Y_MINUS = "Y-"     # (|0> - i|1>)/sqrt(2)


class MeasBasis(enum.Enum):
    Z = "Z"
    Y = "Y"


# R_X(pi/2) advances a label one step along this cycle.
ROTATION_CYCLE = (StateLabel.Z0, StateLabel.Y_MINUS, StateLabel.Z1, StateLabel.Y_PLUS)
CYCLE_INDEX = {label: i for i, label in enumerate(ROTATION_CYCLE)}

# Outcome encoding: 0 <-> |0>, 1 <-> |1> in Z; 0 <-> |+i>, 1 <-> |-i> in Y.
LABEL_BASIS = {
    StateLabel.Z0: MeasBasis.Z,
    StateLabel.Z1: MeasBasis.Z,
    StateLabel.Y_PLUS: MeasBasis.Y,
    StateLabel.Y_MINUS: MeasBasis.Y,
}
LABEL_BIT = {
    StateLabel.Z0: 0,
    StateLabel.Z1: 1,
    StateLabel.Y_PLUS: 0,
    StateLabel.Y_MINUS: 1,
}

_LABEL_VECTORS = {
    StateLabel.Z0: np.array([1.0, 0.0], dtype=complex),
    StateLabel.Z1: np.array([0.0, 1.0], dtype=complex),
    StateLabel.Y_PLUS: np.array([_INV_SQRT2, 1j * _INV_SQRT2], dtype=complex),
    StateLabel.Y_MINUS: np.array([_INV_SQRT2, -1j * _INV_SQRT2], dtype=complex),
}

# Basis change with rows <+i| and <-i|: maps a Y measurement to a Z one.
_Y_TO_Z = np.array([[_INV_SQRT2, -1j * _INV_SQRT2], [_INV_SQRT2, 1j * _INV_SQRT2]], dtype=complex)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def eigenstate(basis: MeasBasis, outcome: int) -> StateLabel:
    """Label of the post-measurement state for a given basis and outcome."""
    table = {
        (MeasBasis.Z, 0): StateLabel.Z0,
        (MeasBasis.Z, 1): StateLabel.Z1,
        (MeasBasis.Y, 0): StateLabel.Y_PLUS,
        (MeasBasis.Y, 1): StateLabel.Y_MINUS,
    }
    return table[(basis, outcome)]


def label_rotate(label: StateLabel, theta: float) -> StateLabel:
    """Advance ``label`` by R_X(theta) for theta a multiple of pi/2 in [0, 2*pi).

    Agrees with :func:`apply_rx` up to global phase.
    """
    steps = theta / (math.pi / 2.0)
    k = round(steps)
    if abs(steps - k) > 1e-9 or not 0 <= k < 4:
        raise ValueError(f"theta must be one of 0, pi/2, pi, 3*pi/2; got {theta}")
    return ROTATION_CYCLE[(CYCLE_INDEX[label] + k) % 4]


@dataclass(frozen=True)
class QuantumState:
    """Pure state of ``num_qubits`` qubits as a dense amplitude vector."""

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in 1..{MAX_QUBITS}")
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (2**self.num_qubits,):
            raise ValueError("amplitude vector has wrong length")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state is not normalized (norm={norm})")
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def zero(cls, num_qubits: int) -> "QuantumState":
        amp = np.zeros(2**num_qubits, dtype=complex)
        amp[0] = 1.0
        return cls(num_qubits, amp)

    @classmethod
    def single(cls, label: StateLabel) -> "QuantumState":
        return cls(1, _LABEL_VECTORS[label].copy())

    def tensor(self, other: "QuantumState") -> "QuantumState":
        return QuantumState(
            self.num_qubits + other.num_qubits, np.kron(self.amplitudes, other.amplitudes)
        )

    def _shaped(self) -> np.ndarray:
        return self.amplitudes.reshape([2] * self.num_qubits)


def overlap(a: QuantumState, b: QuantumState) -> complex:
    if a.num_qubits != b.num_qubits:
        raise ValueError("qubit counts differ")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def states_equal(a: QuantumState, b: QuantumState, tol: float = ATOL) -> bool:
    """Equality up to global phase."""
    return abs(abs(overlap(a, b)) - 1.0) <= tol


def _apply_one_qubit(state: QuantumState, qubit: int, matrix: np.ndarray) -> QuantumState:
    if not 0 <= qubit < state.num_qubits:
        raise IndexError(f"qubit {qubit} out of range for {state.num_qubits}-qubit state")
    shaped = state._shaped()
    out = np.tensordot(matrix, shaped, axes=([1], [qubit]))
    out = np.moveaxis(out, 0, qubit)
    return QuantumState(state.num_qubits, out.reshape(-1))


def rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def apply_rx(state: QuantumState, qubit: int, theta: float) -> QuantumState:
    """Rotate one qubit by R_X(theta) = cos(t/2) I - i sin(t/2) X."""
    return _apply_one_qubit(state, qubit, rx_matrix(theta))


def swap_qubits(state: QuantumState, a: int, b: int) -> QuantumState:
    """Exchange the contents of two qubits of one register (a SWAP gate)."""
    for q in (a, b):
        if not 0 <= q < state.num_qubits:
            raise IndexError(f"qubit {q} out of range")
    if a == b:
        return state
    shaped = np.swapaxes(state._shaped(), a, b)
    return QuantumState(state.num_qubits, np.ascontiguousarray(shaped).reshape(-1))


def measure(
    state: QuantumState, qubit: int, basis: MeasBasis, rng: np.random.Generator
) -> tuple[int, QuantumState]:
    """Born-rule measurement of one qubit; returns (outcome, post-state).

    Outcome encoding follows :class:`MeasBasis`: in Z, 0 <-> |0>; in Y,
    0 <-> |+i>.  The post-state is the renormalized projection, so repeating
    the measurement in the same basis is idempotent.
    """
    if not 0 <= qubit < state.num_qubits:
        raise IndexError(f"qubit {qubit} out of range for {state.num_qubits}-qubit state")
    shaped = state._shaped()
    if basis is MeasBasis.Y:
        shaped = np.moveaxis(np.tensordot(_Y_TO_Z, shaped, axes=([1], [qubit])), 0, qubit)
    probs = np.sum(np.abs(shaped) ** 2, axis=tuple(i for i in range(state.num_qubits) if i != qubit))
    p1 = float(probs[1])
    outcome = 1 if rng.random() < p1 else 0
    index = [slice(None)] * state.num_qubits
    index[qubit] = 1 - outcome
    shaped = shaped.copy()
    shaped[tuple(index)] = 0.0
    shaped /= math.sqrt(probs[outcome])
    if basis is MeasBasis.Y:
        shaped = np.moveaxis(np.tensordot(_Y_TO_Z.conj().T, shaped, axes=([1], [qubit])), 0, qubit)
    return outcome, QuantumState(state.num_qubits, shaped.reshape(-1))


# --- Aharonov state -------------------------------------------------------

# Six-qubit form of the three-qutrit singlet with trit encoding 0 -> 00,
# 1 -> 01, 2 -> 10: cyclic permutations of (0,1,2) carry +, the rest -.
_AHARONOV_TERMS = (
    ("000110", +1),  # (0,1,2)
    ("011000", +1),  # (1,2,0)
    ("100001", +1),  # (2,0,1)
    ("001001", -1),  # (0,2,1)
    ("010010", -1),  # (1,0,2)
    ("100100", -1),  # (2,1,0)
)


def prepare_aharonov() -> QuantumState:
    """The 6-qubit Aharonov state; qubit pairs (0,1), (2,3), (4,5) hold the trits."""
    amp = np.zeros(64, dtype=complex)
    for bits, sign in _AHARONOV_TERMS:
        amp[int(bits, 2)] = sign / math.sqrt(6.0)
    return QuantumState(6, amp)


# --- Density matrices ------------------------------------------------------


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state of ``num_qubits`` qubits; validated on construction."""

    num_qubits: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in 1..{MAX_QUBITS}")
        mat = np.asarray(self.matrix, dtype=complex)
        dim = 2**self.num_qubits
        if mat.shape != (dim, dim):
            raise ValueError("density matrix has wrong shape")
        if np.max(np.abs(mat - mat.conj().T)) > 1e-9:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > 1e-9:
            raise ValueError("density matrix trace is not 1")
        if float(np.linalg.eigvalsh(mat)[0]) < -1e-8:
            raise ValueError("density matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_state(cls, state: QuantumState) -> "DensityMatrix":
        amp = state.amplitudes
        return cls(state.num_qubits, np.outer(amp, amp.conj()))

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityMatrix":
        dim = 2**num_qubits
        return cls(num_qubits, np.eye(dim, dtype=complex) / dim)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


def _conjugate_one_qubit(mat: np.ndarray, num_qubits: int, qubit: int, op: np.ndarray) -> np.ndarray:
    """A rho A^dagger with A acting on one qubit of a 2^n x 2^n matrix."""
    shaped = mat.reshape([2] * (2 * num_qubits))
    out = np.tensordot(op, shaped, axes=([1], [qubit]))
    out = np.moveaxis(out, 0, qubit)
    out = np.tensordot(out, op.conj().T, axes=([num_qubits + qubit], [0]))
    out = np.moveaxis(out, -1, num_qubits + qubit)
    return out.reshape(mat.shape)


def depolarize(rho: DensityMatrix, qubit: int, p: float) -> DensityMatrix:
    """Single-qubit depolarizing channel rho -> (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing probability must be in [0, 1]; got {p}")
    if not 0 <= qubit < rho.num_qubits:
        raise IndexError(f"qubit {qubit} out of range")
    mat = (1.0 - p) * rho.matrix
    for pauli in (PAULI_X, PAULI_Y, PAULI_Z):
        mat = mat + (p / 3.0) * _conjugate_one_qubit(rho.matrix, rho.num_qubits, qubit, pauli)
    return DensityMatrix(rho.num_qubits, mat)


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(mat)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(rho: DensityMatrix, rho0: DensityMatrix) -> float:
    """Uhlmann fidelity F(rho, rho0) = [Tr sqrt(sqrt(rho) rho0 sqrt(rho))]^2.

    When either argument is pure this reduces to <psi| other |psi>, which is
    used as a shortcut.
    """
    if rho.num_qubits != rho0.num_qubits:
        raise ValueError("density matrices have different dimensions")
    for candidate, other in ((rho0, rho), (rho, rho0)):
        if candidate.purity() > 1.0 - 1e-12:
            vals, vecs = np.linalg.eigh(candidate.matrix)
            psi = vecs[:, -1]
            value = float(np.real(psi.conj() @ other.matrix @ psi))
            return min(max(value, 0.0), 1.0)
    root = _psd_sqrt(rho.matrix)
    inner = _psd_sqrt(root @ rho0.matrix @ root)
    value = float(np.trace(inner).real) ** 2
    return min(max(value, 0.0), 1.0)


# --- Qubit fabric: registers backed by small statevector blobs -------------


class _Blob:
    __slots__ = ("state", "qubits")

    def __init__(self, state: np.ndarray, qubits: list[int]):
        self.state = state  # shaped (2,) * len(qubits)
        self.qubits = qubits


class QubitFabric:
    """Backing store for protocol qubits.

    Each allocated qubit id maps into a small statevector blob (one qubit for
    BUS states, six for an Aharonov copy).  SWAPs between qubits of different
    blobs are performed by exchanging the id -> slot mappings, which is exact
    SWAP semantics for any observer addressing qubits through their ids; this
    is the usual virtual-qubit trick of network simulators and keeps blob
    sizes bounded by what entanglement actually requires.
    """

    def __init__(self):
        self._blobs: dict[int, _Blob] = {}
        self._loc: dict[int, tuple[int, int]] = {}  # qubit id -> (blob id, axis)
        self._next_qubit = 0
        self._next_blob = 0
        self.total_allocated = 0

    def _new_ids(self, count: int) -> list[int]:
        ids = list(range(self._next_qubit, self._next_qubit + count))
        self._next_qubit += count
        self.total_allocated += count
        return ids

    def alloc(self, label: StateLabel = StateLabel.Z0) -> int:
        (qid,) = self.alloc_state(QuantumState.single(label))
        return qid

    def alloc_state(self, state: QuantumState) -> list[int]:
        qids = self._new_ids(state.num_qubits)
        blob_id = self._next_blob
        self._next_blob += 1
        self._blobs[blob_id] = _Blob(state.amplitudes.reshape([2] * state.num_qubits).copy(), list(qids))
        for axis, qid in enumerate(qids):
            self._loc[qid] = (blob_id, axis)
        return qids

    def alloc_aharonov(self) -> list[int]:
        return self.alloc_state(prepare_aharonov())

    def _lookup(self, qid: int) -> tuple[_Blob, int]:
        try:
            blob_id, axis = self._loc[qid]
        except KeyError:
            raise KeyError(f"unknown or discarded qubit id {qid}") from None
        return self._blobs[blob_id], axis

    def apply_rx(self, qid: int, theta: float) -> None:
        blob, axis = self._lookup(qid)
        mat = rx_matrix(theta)
        out = np.tensordot(mat, blob.state, axes=([1], [axis]))
        blob.state = np.moveaxis(out, 0, axis)

    def measure(self, qid: int, basis: MeasBasis, rng: np.random.Generator) -> int:
        blob, axis = self._lookup(qid)
        n = blob.state.ndim
        shaped = blob.state
        if basis is MeasBasis.Y:
            shaped = np.moveaxis(np.tensordot(_Y_TO_Z, shaped, axes=([1], [axis])), 0, axis)
        probs = np.sum(np.abs(shaped) ** 2, axis=tuple(i for i in range(n) if i != axis))
        outcome = 1 if rng.random() < float(probs[1]) else 0
        index = [slice(None)] * n
        index[axis] = 1 - outcome
        shaped = shaped.copy()
        shaped[tuple(index)] = 0.0
        shaped /= math.sqrt(float(probs[outcome]))
        if basis is MeasBasis.Y:
            shaped = np.moveaxis(np.tensordot(_Y_TO_Z.conj().T, shaped, axes=([1], [axis])), 0, axis)
        blob.state = shaped
        return outcome

    def swap(self, a: int, b: int) -> None:
        """SWAP two qubits; exact whether or not they share a blob."""
        if a == b:
            return
        blob_a, axis_a = self._lookup(a)
        blob_b, axis_b = self._lookup(b)
        if blob_a is blob_b:
            blob_a.state = np.swapaxes(blob_a.state, axis_a, axis_b).copy()
        else:
            self._loc[a], self._loc[b] = self._loc[b], self._loc[a]
            blob_a.qubits[axis_a], blob_b.qubits[axis_b] = b, a

    def statevector(self, qids: list[int]) -> QuantumState:
        """Joint pure state of the listed qubits, in the listed order.

        The listed qubits must exactly cover every blob they touch (partial
        views of entangled blobs are not pure states).
        """
        blob_ids = []
        for qid in qids:
            bid = self._loc[qid][0] if qid in self._loc else None
            if bid is None:
                raise KeyError(f"unknown qubit id {qid}")
            if bid not in blob_ids:
                blob_ids.append(bid)
        covered = [q for bid in blob_ids for q in self._blobs[bid].qubits]
        if sorted(covered) != sorted(qids):
            raise ValueError("requested qubits must cover whole blobs")
        joint = self._blobs[blob_ids[0]].state
        order = list(self._blobs[blob_ids[0]].qubits)
        for bid in blob_ids[1:]:
            blob = self._blobs[bid]
            joint = np.tensordot(joint, blob.state, axes=0)
            order.extend(blob.qubits)
        perm = [order.index(qid) for qid in qids]
        joint = np.transpose(joint, perm)
        return QuantumState(len(qids), joint.reshape(-1))

    def discard(self, qids: list[int]) -> None:
        """Drop ids whose blobs are fully covered by the discard set."""
        drop = set(qids)
        for qid in qids:
            if qid not in self._loc:
                continue
            bid = self._loc[qid][0]
            blob = self._blobs[bid]
            if all(q in drop for q in blob.qubits):
                for q in blob.qubits:
                    self._loc.pop(q, None)
                self._blobs.pop(bid, None)


def swap_transfer(fabric: QubitFabric, src_qubits: list[int], dst_qubits: list[int]) -> None:
    """Exchange the quantum contents of two disjoint qubit lists via SWAPs.

    Transcript recording is the caller's job (see ``netsim``).
    """
    if len(src_qubits) != len(dst_qubits):
        raise ValueError("source and destination qubit lists differ in length")
    if set(src_qubits) & set(dst_qubits):
        raise ValueError("source and destination registers overlap")
    for a, b in zip(src_qubits, dst_qubits):
        fabric.swap(a, b)
