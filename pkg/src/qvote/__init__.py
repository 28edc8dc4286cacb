"""qvote: a deterministic simulator of a quantum binary voting protocol.

Self-tallying masked ballots, cheat-sensitive quantum bit commitment from
voters to miners, and qutrit-based Byzantine agreement among three miners,
with adversary models and Monte-Carlo experiment harnesses.
"""

from .ballot import (
    AuditClaim,
    AuditVerdict,
    MaskedBallot,
    VoteMatrix,
    audit,
    ballot_bit_length,
    generate_row,
    masked_ballot,
    tally,
)
from .csqbc import (
    Bus,
    CommitmentRecord,
    CsqbcParams,
    DecodeResult,
    DecodeStatus,
    commit_bits,
    decode_commitment,
    miner_measure,
    prepare_bus,
    sample_commitment,
    select_and_verify,
    simulate_miner_cheat,
    simulate_voter_cheat,
    verify_bus,
)
from .election import (
    ElectionAdversary,
    ElectionConfig,
    ElectionResult,
    run_election,
    run_experiment_cheat,
    run_experiment_csqbc,
    run_experiment_fidelity,
    run_experiment_qba,
)
from .netsim import Network, PartyId, Register, Role, TranscriptEntry
from .qba import (
    AdversaryModel,
    AharonovBatch,
    BroadcastOutcome,
    OutcomeKind,
    consensus_on_ballot,
    estimate_success,
    run_broadcast,
    sample_copies,
)
from .quantum import (
    DensityMatrix,
    MeasBasis,
    QuantumState,
    QubitFabric,
    StateLabel,
    apply_rx,
    depolarize,
    fidelity,
    label_rotate,
    measure,
    prepare_aharonov,
    states_equal,
    swap_transfer,
)

__version__ = "0.1.0"
