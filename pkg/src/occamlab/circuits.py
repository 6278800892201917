"""Exhaustive tables of small threshold circuits.

For ``n <= 4`` inputs every circuit with at most two gates and integer weights
in ``[-wmax, wmax]`` is folded into a table indexed by truth table: for each
reachable boolean function the table keeps the shortest canonical encoding
(ties go to the circuit enumerated first). One-gate circuits are enumerated
before two-gate ones; a two-gate circuit's output gate must read the first
gate.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import kernels
from .core import ThresholdCircuit, ThresholdGate
from .errors import InfeasibleError
from .prefix import int_code_length, signed_code_length

UNREACHED = np.iinfo(np.int64).max
MAX_TABLE_INPUTS = 4


def _node_base_len(gate_id, weights, input_ids):
    """Gate encoding length without the threshold field."""
    used = [(int(w), i) for w, i in zip(weights, input_ids) if w]
    return (int_code_length(gate_id) + int_code_length(len(used))
            + sum(signed_code_length(w) + int_code_length(i) for w, i in used))


def _gate(gate_id, weights, threshold, input_ids):
    used = [(int(w), i) for w, i in zip(weights, input_ids) if w]
    return ThresholdGate(gate_id, tuple(w for w, _ in used), int(threshold),
                         tuple(i for _, i in used))


@dataclass
class CircuitTable:
    n: int
    wmax: int
    max_gates: int
    w1: np.ndarray            # one-gate weight rows over the n variables
    w2: np.ndarray            # output-gate rows over (x_1..x_n, g1), last weight nonzero
    g1_functions: np.ndarray  # truth tables usable as the first gate, enumeration order
    best_len: np.ndarray      # indexed by truth table
    best_row: np.ndarray
    best_theta: np.ndarray
    len1: np.ndarray          # one-gate-only tables (witnesses for the first gate)
    row1: np.ndarray
    theta1: np.ndarray

    @property
    def reachable(self) -> np.ndarray:
        return np.flatnonzero(self.best_len != UNREACHED)

    @property
    def class_size(self) -> int:
        return int(len(self.reachable))

    def witness(self, tt: int) -> ThresholdCircuit:
        n = self.n
        if self.best_len[tt] == UNREACHED:
            raise KeyError(f"truth table {tt} is not reachable")
        row, theta = int(self.best_row[tt]), int(self.best_theta[tt])
        variables = list(range(1, n + 1))
        if row < len(self.w1):
            return ThresholdCircuit(n, (_gate(n + 1, self.w1[row], theta, variables),))
        q = row - len(self.w1)
        f = int(self.g1_functions[q // len(self.w2)])
        first = _gate(n + 1, self.w1[int(self.row1[f])], int(self.theta1[f]), variables)
        second = _gate(n + 2, self.w2[q % len(self.w2)], theta, variables + [n + 1])
        return ThresholdCircuit(n, (first, second))

    def order_key(self, tts: np.ndarray):
        """Sort keys (length, enumeration row, threshold) for candidate truth tables."""
        return self.best_len[tts], self.best_row[tts], self.best_theta[tts]


@lru_cache(maxsize=8)
def circuit_table(n: int, wmax: int = 2, max_gates: int = 2) -> CircuitTable:
    if not 1 <= n <= MAX_TABLE_INPUTS:
        raise InfeasibleError(f"circuit enumeration supports 1 <= n <= {MAX_TABLE_INPUTS}")
    if max_gates not in (1, 2):
        raise InfeasibleError("circuit enumeration supports at most two gates")
    points = 1 << n
    size = 1 << points
    var_tts = [sum(1 << p for p in range(points) if p >> i & 1) for i in range(n)]
    variables = list(range(1, n + 1))
    span = range(-wmax, wmax + 1)

    w1 = np.array(list(product(span, repeat=n)), dtype=np.int64)
    base1 = np.array([int_code_length(1) + _node_base_len(n + 1, w, variables) for w in w1],
                     dtype=np.int64)
    len1 = np.full(size, UNREACHED, dtype=np.int64)
    row1 = np.full(size, -1, dtype=np.int64)
    theta1 = np.zeros(size, dtype=np.int64)
    kernels.threshold_layer(np.array(var_tts, dtype=np.int64), points, w1, base1,
                            len1, row1, theta1, 0)

    best_len, best_row, best_theta = len1.copy(), row1.copy(), theta1.copy()
    w2 = np.array([w for w in product(span, repeat=n + 1) if w[-1]], dtype=np.int64)
    g1 = np.flatnonzero(len1 != UNREACHED)
    if max_gates == 2:
        base2 = np.array([int_code_length(2) + _node_base_len(n + 2, w, variables + [n + 1])
                          for w in w2], dtype=np.int64)
        header1 = int_code_length(1)
        for idx, f in enumerate(g1):
            inputs = np.array(var_tts + [int(f)], dtype=np.int64)
            node1 = len1[f] - header1
            kernels.threshold_layer(inputs, points, w2, base2 + node1, best_len, best_row,
                                    best_theta, len(w1) + idx * len(w2))
    return CircuitTable(n, wmax, max_gates, w1, w2, g1, best_len, best_row, best_theta,
                        len1, row1, theta1)


def random_circuit(n: int, rng: np.random.Generator, max_gates: int = 3, wmax: int = 2):
    """A random layered circuit; later gates read variables and earlier gates."""
    gates = []
    for g in range(int(rng.integers(1, max_gates + 1))):
        gid = n + 1 + g
        ids = list(range(1, gid))
        weights = rng.integers(-wmax, wmax + 1, size=len(ids))
        if g and not weights[-1]:
            weights[-1] = rng.choice([-wmax, wmax])
        lo = int(np.minimum(weights, 0).sum())
        hi = int(np.maximum(weights, 0).sum())
        theta = int(rng.integers(lo, hi + 2))
        gates.append(_gate(gid, weights, theta, ids))
    return ThresholdCircuit(n, tuple(gates))
