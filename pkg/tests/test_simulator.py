import math
import random

import numpy as np
import pytest

from qvmp.circuit import Circuit
from qvmp.errors import ContractError, FormatError, ResourceError
from qvmp.kernels import available_backends
from qvmp.simulator import (
    Histogram,
    backend_name,
    probabilities,
    run,
    statevector,
    use_backend,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def bell_circuit(classical=0):
    c = Circuit((("q", 2),), classical_bits=classical)
    c.h(0)
    c.cx(0, 1)
    return c


def random_circuit(num_qubits, num_gates, rng):
    c = Circuit((("q", num_qubits),))
    for _ in range(num_gates):
        kind = rng.choice(["x", "h", "z", "cx", "ccx", "mcx", "mcz"])
        order = rng.sample(range(num_qubits), num_qubits)
        if kind in ("x", "h", "z"):
            getattr(c, kind)(order[0])
        elif kind == "cx":
            c.cx(order[0], order[1])
        elif kind == "ccx":
            c.ccx(order[0], order[1], order[2])
        elif kind == "mcx":
            c.mcx(order[:3], order[3])
        else:
            c.mcz(order[:2], order[2])
    return c


class TestStatevector:
    def test_empty_circuit(self):
        sv = statevector(Circuit((("q", 3),)))
        assert sv.amplitudes[0] == 1.0
        assert np.all(sv.amplitudes[1:] == 0.0)

    def test_single_hadamard(self):
        c = Circuit((("q", 1),))
        c.h(0)
        sv = statevector(c)
        assert np.allclose(sv.amplitudes, [INV_SQRT2, INV_SQRT2])

    def test_bell_state(self):
        sv = statevector(bell_circuit())
        assert np.allclose(sv.amplitudes, [INV_SQRT2, 0.0, 0.0, INV_SQRT2])

    def test_initial_basis_state(self):
        c = Circuit((("q", 2),))
        c.cx(0, 1)
        sv = statevector(c, initial=1)
        assert sv.amplitudes[3] == 1.0

    def test_x_frame_with_hadamard(self):
        # H applied after X must act on |1>: amplitudes (1, -1)/sqrt(2)
        c = Circuit((("q", 1),))
        c.x(0)
        c.h(0)
        sv = statevector(c)
        assert np.allclose(sv.amplitudes, [INV_SQRT2, -INV_SQRT2])

    def test_x_frame_with_controls(self):
        c = Circuit((("q", 2),))
        c.x(0)
        c.cx(0, 1)
        sv = statevector(c)
        assert sv.amplitudes[3] == 1.0

    def test_x_frame_with_phase(self):
        c = Circuit((("q", 1),))
        c.x(0)
        c.z(0)
        sv = statevector(c)
        assert sv.amplitudes[1] == -1.0

    def test_trailing_x_resolved(self):
        c = Circuit((("q", 3),))
        c.h(0)
        c.x(2)
        sv = statevector(c)
        assert np.allclose(sv.amplitudes[4], INV_SQRT2)
        assert np.allclose(sv.amplitudes[5], INV_SQRT2)

    def test_rejects_measurement(self):
        c = Circuit((("q", 1),), classical_bits=1)
        c.measure(0, 0)
        with pytest.raises(ContractError):
            statevector(c)

    def test_qubit_cap(self, monkeypatch):
        monkeypatch.setenv("QVMP_SIM_MAX_QUBITS", "4")
        c = Circuit((("q", 5),))
        with pytest.raises(ResourceError):
            statevector(c)
        sv = statevector(c, max_qubits=5)
        assert sv.amplitudes.size == 32

    def test_norm_preserved_at_every_prefix(self):
        rng = random.Random(0)
        c = random_circuit(5, 25, rng)
        for cut in range(len(c.gates) + 1):
            prefix = Circuit(c.registers)
            for g in c.gates[:cut]:
                prefix.append(g)
            sv = statevector(prefix)
            assert abs(sv.norm_sq() - 1.0) < 1e-9

    def test_self_inverse_gates_restore(self):
        rng = random.Random(1)
        base = random_circuit(5, 12, rng)
        before = statevector(base).amplitudes
        for g in list(base.gates[-6:]):
            doubled = Circuit(base.registers)
            for gg in base.gates:
                doubled.append(gg)
            doubled.append(g)
            doubled.append(g)
            after = statevector(doubled).amplitudes
            assert np.max(np.abs(after - before)) < 1e-12


class TestProbabilities:
    def test_uniform_three_qubits(self):
        c = Circuit((("q", 3),))
        for q in range(3):
            c.h(q)
        probs = probabilities(c)
        assert set(probs) == {format(v, "03b") for v in range(8)}
        assert all(abs(p - 0.125) < 1e-12 for p in probs.values())

    def test_bell_marginal(self):
        probs = probabilities(bell_circuit(), qubits=[0])
        assert abs(probs["0"] - 0.5) < 1e-12
        assert abs(probs["1"] - 0.5) < 1e-12

    def test_key_order_follows_listing(self):
        c = Circuit((("q", 2),))
        c.x(0)
        assert probabilities(c, qubits=[0, 1]) == {"00": 0.0, "01": 1.0, "10": 0.0, "11": 0.0}
        assert probabilities(c, qubits=[1, 0]) == {"00": 0.0, "01": 0.0, "10": 1.0, "11": 0.0}

    def test_sums_to_one(self):
        rng = random.Random(2)
        c = random_circuit(6, 30, rng)
        probs = probabilities(c, qubits=[1, 3, 5])
        assert abs(sum(probs.values()) - 1.0) < 1e-9

    def test_unknown_qubit(self):
        c = Circuit((("q", 2),))
        with pytest.raises(ContractError):
            probabilities(c, qubits=[7])

    def test_rejects_measurement(self):
        c = bell_circuit(classical=2)
        c.measure(0, 0)
        with pytest.raises(ContractError):
            probabilities(c)


class TestRun:
    def test_deterministic_outcome(self):
        c = Circuit((("q", 1),), classical_bits=1)
        c.x(0)
        c.measure(0, 0)
        hist = run(c, 100, seed=0)
        assert hist.counts == {"1": 100}

    def test_bell_five_sigma(self):
        c = bell_circuit(classical=2)
        c.measure(0, 0)
        c.measure(1, 1)
        shots = 4096
        hist = run(c, shots, seed=3)
        sigma = math.sqrt(shots * 0.25)
        assert abs(hist.counts.get("00", 0) - shots / 2) < 5 * sigma
        assert abs(hist.counts.get("11", 0) - shots / 2) < 5 * sigma
        assert hist.counts.get("01", 0) == 0
        assert hist.counts.get("10", 0) == 0

    def test_determinism(self):
        c = bell_circuit(classical=2)
        c.measure(0, 0)
        c.measure(1, 1)
        assert run(c, 500, seed=42).counts == run(c, 500, seed=42).counts
        assert run(c, 500, seed=42).counts != run(c, 500, seed=43).counts

    def test_classical_bit_mapping(self):
        # qubit 0 measured into classical bit 1 and vice versa
        c = Circuit((("q", 2),), classical_bits=2)
        c.x(0)
        c.measure(0, 1)
        c.measure(1, 0)
        hist = run(c, 10, seed=0)
        assert hist.counts == {"10": 10}

    def test_sampling_matches_probabilities(self):
        rng = random.Random(4)
        c = random_circuit(4, 15, rng)
        probs = probabilities(c)
        measured = Circuit(c.registers, classical_bits=4)
        for g in c.gates:
            measured.append(g)
        for q in range(4):
            measured.measure(q, q)
        shots = 8192
        hist = run(measured, shots, seed=5)
        for key, p in probs.items():
            sigma = math.sqrt(max(shots * p * (1 - p), 1.0))
            assert abs(hist.counts.get(key, 0) - shots * p) < 5 * sigma

    def test_requires_measurement(self):
        with pytest.raises(ContractError):
            run(bell_circuit(), 10, seed=0)

    def test_requires_positive_shots(self):
        c = Circuit((("q", 1),), classical_bits=1)
        c.measure(0, 0)
        with pytest.raises(ContractError):
            run(c, 0, seed=0)


class TestHistogramFormats:
    def test_csv_round_trip(self):
        h = Histogram({"00": 3, "11": 7}, 10)
        assert h.to_csv() == "00,3\n11,7\n"
        assert Histogram.from_csv(h.to_csv()) == h

    def test_json_round_trip(self):
        h = Histogram({"01": 4, "10": 6}, 10)
        assert Histogram.from_json(h.to_json()) == h

    def test_counts_must_sum(self):
        with pytest.raises(FormatError):
            Histogram({"0": 1}, 2)

    def test_bad_csv(self):
        with pytest.raises(FormatError):
            Histogram.from_csv("bitstring,count,extra\n")


@pytest.mark.skipif(
    "cython" not in available_backends(), reason="compiled kernels not built"
)
class TestBackendParity:
    def test_identical_amplitudes(self):
        rng = random.Random(6)
        try:
            for _ in range(10):
                c = random_circuit(6, 40, rng)
                use_backend("cython")
                a = statevector(c).amplitudes
                use_backend("python")
                b = statevector(c).amplitudes
                assert np.array_equal(a, b)
        finally:
            use_backend("auto")

    def test_backend_name_reports(self):
        try:
            assert use_backend("python") == "python"
            assert backend_name() == "python"
            assert use_backend("cython") == "cython"
        finally:
            use_backend("auto")
