"""Time the compiled kernels against the numpy fallback on realistic inputs.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--quick]
"""
import argparse
import timeit

import numpy as np

from amelab import codes, invariants as inv, kernels
from amelab.constructions import build_psi6
from amelab.tensor_core import random_ket


def workloads(quick=False):
    rng = np.random.default_rng(0)
    k = random_ket(5, rng)
    f12 = inv.F12_2
    tables = inv.comb_tables(f12, k.amps)
    slots = f12.slots()
    coeffs = np.array(f12.coeffs, dtype=complex)
    c = codes.CodeBasis([build_psi6()])
    strings = list(codes.pauli_strings(6, 2 if quick else 3))
    x, z, ny = codes._mask_arrays(strings)
    u = c.matrix()
    return {
        "comb_sum F12 (19683 terms)": lambda m: m.comb_sum(tables, slots, coeffs, f12.index_count),
        f"pauli_block n=6 ({len(strings)} strings)": lambda m: m.pauli_block(u, x, z, ny),
        "balanced_multisets (5, 6)" if not quick else "balanced_multisets (4, 4)":
            (lambda m: m.balanced_multisets(5, 6)) if not quick else (lambda m: m.balanced_multisets(4, 4)),
    }


def run(repeat=5, quick=False):
    """Return rows ``(name, {backend: best seconds})``."""
    backends = {b: kernels.load_backend(b) for b in kernels.available_backends()}
    rows = []
    for name, fn in workloads(quick).items():
        times = {}
        for b, mod in backends.items():
            times[b] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=repeat))
        rows.append((name, times))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="small inputs, for smoke testing")
    args = ap.parse_args(argv)
    rows = run(args.repeat, args.quick)
    print(f"{'kernel':40s} {'cython [ms]':>12s} {'python [ms]':>12s} {'speedup':>8s}")
    for name, t in rows:
        cy = t.get("cython")
        py = t["python"]
        cys = f"{cy * 1e3:12.3f}" if cy is not None else f"{'n/a':>12s}"
        sp = f"{py / cy:8.1f}" if cy else f"{'n/a':>8s}"
        print(f"{name:40s} {cys} {py * 1e3:12.3f} {sp}")
    return rows


if __name__ == "__main__":
    main()
