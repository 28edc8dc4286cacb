"""Independent oracles used by the unit and acceptance tests.

Everything here is computed from first principles (explicit 2x2 linear
algebra, exhaustive enumeration, closed-form combinatorics) without touching
the package's decode tables, so it can serve as the second route of each
dual-route check.
"""
import itertools
import math

import numpy as np

from qvote.quantum import MeasBasis

VEC = {
    "Z0": np.array([1, 0], dtype=complex),
    "Z1": np.array([0, 1], dtype=complex),
    "Y+": np.array([1, 1j], dtype=complex) / math.sqrt(2),
    "Y-": np.array([1, -1j], dtype=complex) / math.sqrt(2),
}
EIGEN = {
    (MeasBasis.Z, 0): VEC["Z0"],
    (MeasBasis.Z, 1): VEC["Z1"],
    (MeasBasis.Y, 0): VEC["Y+"],
    (MeasBasis.Y, 1): VEC["Y-"],
}


def rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def oracle_binding_failure(record) -> bool:
    """Brute force over every alternative CS and target bit pair.

    A candidate opening is consistent iff every slot's recorded outcome has
    nonzero Born probability under the rotation it implies.
    """
    n = record.params.n
    true_step = 2 * record.committed_bits[0] + record.committed_bits[1]
    true_cs = record.cs
    for cs_bits in itertools.product((0, 1), repeat=n // 2):
        if cs_bits == true_cs:
            continue
        position = list(range(n))
        for p, flag in enumerate(cs_bits):
            if flag:
                position[2 * p], position[2 * p + 1] = position[2 * p + 1], position[2 * p]
        for step in range(4):
            if step == true_step:
                continue
            consistent = True
            for slot in range(n):
                vec = rx(step * math.pi / 2) @ VEC[record.qs_labels[slot].value]
                meas = EIGEN[(record.meas_bases[position[slot]],
                              record.meas_outcomes[position[slot]])]
                if abs(np.vdot(meas, vec)) ** 2 < 1e-12:
                    consistent = False
                    break
            if consistent:
                return True
    return False


def enumerated_honest_rates(n: int) -> tuple[float, float]:
    """(success, ambiguous) probabilities of an honest decode by enumeration.

    Enumerates every basis-match pattern and every cross-basis coin pattern.
    The true rotation is always consistent; the opposite rotation is
    consistent iff no qubit was measured in its matching basis; each odd
    rotation constrains exactly the cross-basis qubits, whose outcomes are
    fair coins, and the two odd rotations require complementary coin values.
    """
    ambiguous = 0.0
    for matched in itertools.product((0, 1), repeat=n):
        d = n - sum(matched)
        base_weight = 0.5**n
        for coins in itertools.product((0, 1), repeat=d):
            weight = base_weight * 0.5**d
            plus_ok = all(c == 0 for c in coins)
            minus_ok = all(c == 1 for c in coins)
            opposite_ok = d == n
            if plus_ok or minus_ok or opposite_ok:
                ambiguous += weight
    return 1.0 - ambiguous, ambiguous
