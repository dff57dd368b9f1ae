#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-NumPy fallback.

Builds one representative search circuit and times full statevector
simulation under each available backend.

    python benchmarks/bench_kernels.py --n 16 --m 8 --iterations 3
"""
import argparse
import statistics
import time

from qvmp.grover import build_grover_state
from qvmp.kernels import available_backends
from qvmp.runner import generate_instance
from qvmp.simulator import statevector, use_backend


def time_backend(name: str, circuit, repeats: int) -> list[float]:
    use_backend(name)
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        statevector(circuit)
        samples.append(time.perf_counter() - start)
    return samples


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=16)
    parser.add_argument("--m", type=int, default=8)
    parser.add_argument("--mismatches", type=int, default=1)
    parser.add_argument("--iterations", type=int, default=3)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    inst = generate_instance(args.n, args.m, args.mismatches, args.seed)
    circuit = build_grover_state(inst, args.iterations)
    print(
        f"search circuit: n={args.n} m={args.m} iterations={args.iterations} "
        f"-> {circuit.num_qubits} qubits, {len(circuit.gates)} gates"
    )

    results = {}
    for name in available_backends():
        samples = time_backend(name, circuit, args.repeats)
        results[name] = statistics.median(samples)
        print(f"{name:>8}: {results[name] * 1000:9.2f} ms (median of {args.repeats})")
    use_backend("auto")
    if len(results) == 2:
        print(f"speedup: {results['python'] / results['cython']:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
