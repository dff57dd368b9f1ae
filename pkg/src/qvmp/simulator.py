"""Dense statevector execution engine.

Amplitude index convention: bit q of the index is the value of global
qubit q, so |q2 q1 q0> = |110> sits at index 6. Histogram keys follow the
same rule on classical bits: bit 0 is the rightmost character.

Bare X gates are tracked as an index-relabelling frame (an XOR mask over
amplitude indices) instead of physically permuting memory; the remaining
kernels take the frame into account through control polarities and a
conjugated Hadamard variant. The frame is resolved once when amplitudes,
probabilities or samples leave the engine.
"""
from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import CCX, CX, H, MCX, MCZ, MEASURE, X, Z, Circuit
from .errors import ContractError, FormatError, ResourceError

__all__ = [
    "DEFAULT_MAX_QUBITS",
    "Statevector",
    "Histogram",
    "statevector",
    "probabilities",
    "run",
    "use_backend",
    "backend_name",
    "qubit_cap",
]

DEFAULT_MAX_QUBITS = 26

_kernels = kernels.active


def use_backend(name: str) -> str:
    """Switch the kernel backend at runtime (used by the benchmark and the
    backend-parity tests). Returns the name now active."""
    global _kernels
    _kernels = kernels.load_backend(name)
    return _kernels.NAME


def backend_name() -> str:
    return _kernels.NAME


def qubit_cap() -> int:
    env = os.environ.get("QVMP_SIM_MAX_QUBITS")
    return int(env) if env else DEFAULT_MAX_QUBITS


@dataclass(frozen=True)
class Statevector:
    num_qubits: int
    amplitudes: np.ndarray

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def probability(self, index: int) -> float:
        return float(np.abs(self.amplitudes[index]) ** 2)

    def __len__(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class Histogram:
    counts: dict[str, int]
    shots: int

    def __post_init__(self) -> None:
        if sum(self.counts.values()) != self.shots:
            raise FormatError("histogram counts do not sum to shots")

    def to_csv(self) -> str:
        out = io.StringIO()
        for key in sorted(self.counts):
            out.write(f"{key},{self.counts[key]}\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> Histogram:
        counts: dict[str, int] = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            try:
                key, val = line.split(",")
                counts[key] = int(val)
            except ValueError as e:
                raise FormatError(f"bad histogram line {line!r}") from e
        return cls(counts, sum(counts.values()))

    def to_json(self) -> str:
        return json.dumps({"shots": self.shots, "counts": self.counts}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> Histogram:
        obj = json.loads(text)
        return cls(dict(obj["counts"]), int(obj["shots"]))


def _evolve(circuit: Circuit, initial: int, cap: int | None) -> np.ndarray:
    """Run all unitary gates; returns the true-indexed amplitude array."""
    n = circuit.num_qubits
    limit = cap if cap is not None else qubit_cap()
    if n > limit:
        raise ResourceError(f"{n} qubits exceeds the cap of {limit}")
    size = 1 << n
    if not 0 <= initial < size:
        raise ContractError(f"initial basis index {initial} out of range")
    state = np.zeros(size, dtype=np.complex128)
    state[initial] = 1.0
    frame = 0
    gates = circuit.gates
    i = 0
    while i < len(gates):
        g = gates[i]
        kind = g.kind
        if kind == X:
            frame ^= 1 << g.targets[0]
        elif kind == H:
            q = g.targets[0]
            _kernels.apply_h(state, q, bool((frame >> q) & 1))
        elif kind == Z:
            bit = 1 << g.targets[0]
            _kernels.apply_phase(state, bit, bit & ~frame)
        elif kind in (CX, CCX, MCX):
            cmask = 0
            for c in g.controls:
                cmask |= 1 << c
            # Fuse runs of controlled-X gates sharing one control set
            # (each table-lookup chunk emits such a run): the joint action
            # pairs s with s ^ tmask, one sweep instead of one per gate.
            tmask = 1 << g.targets[0]
            while i + 1 < len(gates) and gates[i + 1].kind in (CX, CCX, MCX):
                nxt = gates[i + 1]
                c2 = 0
                for c in nxt.controls:
                    c2 |= 1 << c
                if c2 != cmask:
                    break
                tmask ^= 1 << nxt.targets[0]
                i += 1
            if tmask:
                _kernels.apply_mcx(state, tmask, cmask, cmask & ~frame)
        elif kind == MCZ:
            mask = 1 << g.targets[0]
            for c in g.controls:
                mask |= 1 << c
            _kernels.apply_phase(state, mask, mask & ~frame)
        elif kind == MEASURE:
            pass  # terminal; sampling happens on the final state
        else:  # pragma: no cover - KINDS is closed
            raise ContractError(f"cannot simulate {kind}")
        i += 1
    if frame:
        state = state[np.arange(size) ^ frame]
    return state


def statevector(circuit: Circuit, initial: int = 0, *, max_qubits: int | None = None) -> Statevector:
    """Exact amplitudes of the circuit applied to a basis state."""
    if circuit.has_measurement():
        raise ContractError("statevector of a circuit with measurement")
    return Statevector(circuit.num_qubits, _evolve(circuit, initial, max_qubits))


def _marginal(probs: np.ndarray, n: int, qubits: list[int]) -> np.ndarray:
    """Marginal over the given qubits; result index bit r is the qubit at
    ascending rank r of the sorted qubit list."""
    drop = tuple(n - 1 - q for q in range(n) if q not in set(qubits))
    reduced = probs.reshape((2,) * n).sum(axis=drop) if drop else probs.reshape((2,) * n)
    return reduced.reshape(-1)


def probabilities(circuit: Circuit, qubits=None) -> dict[str, float]:
    """Exact Born probabilities, marginalized onto the named qubits.

    Key convention: the i-th listed qubit is bit i of the key, i.e. the
    rightmost character belongs to the first qubit in the list.
    """
    if circuit.has_measurement():
        raise ContractError("probabilities of a circuit with measurement")
    n = circuit.num_qubits
    if qubits is None:
        chosen = list(range(n))
    else:
        chosen = [circuit._resolve(q) for q in qubits]
    if len(set(chosen)) != len(chosen):
        raise ContractError("duplicate qubit in marginal")
    state = _evolve(circuit, 0, None)
    probs = np.abs(state) ** 2
    k = len(chosen)
    ordered = sorted(chosen)
    marg = _marginal(probs, n, ordered)
    rank = {q: r for r, q in enumerate(ordered)}
    out: dict[str, float] = {}
    for v in range(1 << k):
        key_val = 0
        for i, q in enumerate(chosen):
            key_val |= ((v >> rank[q]) & 1) << i
        out[format(key_val, f"0{k}b")] = float(marg[v])
    return out


def run(circuit: Circuit, shots: int, seed: int) -> Histogram:
    """Evolve once, then draw shots from the Born distribution on the
    measured qubits via a single inverse-CDF pass. Deterministic per seed."""
    measured = circuit.measured_qubits()
    if not measured:
        raise ContractError("run() needs a circuit that ends in measurement")
    if shots < 1:
        raise ContractError("shots must be >= 1")
    n = circuit.num_qubits
    state = _evolve(circuit, 0, None)
    probs = np.abs(state) ** 2
    qubits = [q for q, _ in measured]
    ordered = sorted(qubits)
    marg = _marginal(probs, n, ordered)
    marg = np.maximum(marg, 0.0)
    cdf = np.cumsum(marg)
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    draws = np.searchsorted(cdf, rng.random(shots), side="right")
    draws = np.minimum(draws, marg.size - 1)
    values, freq = np.unique(draws, return_counts=True)
    rank = {q: r for r, q in enumerate(ordered)}
    width = circuit.classical_bits
    counts: dict[str, int] = {}
    for v, c in zip(values, freq):
        bits = 0
        for q, cbit in measured:
            bits |= ((int(v) >> rank[q]) & 1) << cbit
        key = format(bits, f"0{width}b")
        counts[key] = counts.get(key, 0) + int(c)
    return Histogram(counts, shots)
