"""Compare the compiled and pure-Python integrators on realistic Matsubara batches.

Usage: ``python benchmarks/bench_kernel.py [--terms N] [--repeat R]``
"""
import argparse
import timeit

import numpy as np

from lifshitz_audit import _quad, kernel
from lifshitz_audit import constants as const
from lifshitz_audit.lifshitz import matsubara_frequency
from lifshitz_audit.materials import CarrierModel, OscillatorSet, ScreenedConductor, ScreeningKind, Statistics
from lifshitz_audit.schemes import ModifiedScreened, StandardFresnel


def gold():
    carriers = CarrierModel(5.874493427470349e28, mobility=33.07646746327886e-4, statistics=Statistics.FERMI_DIRAC)
    return ScreenedConductor(OscillatorSet(), carriers, ScreeningKind.THOMAS_FERMI)


def batches(n_terms, a=1e-6, T=300.0):
    xi = matsubara_frequency(T, np.arange(1, n_terms + 1))
    zeta = 2 * a * xi / const.c
    for scheme in (StandardFresnel(gold()), ModifiedScreened(gold())):
        code, rows = scheme.terms(xi, a, T)
        yield scheme.name, code, zeta, rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--terms", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = {"python": _quad.integrate_terms}
    if "compiled" in kernel.available_backends():
        from lifshitz_audit import _kernel

        backends["compiled"] = _kernel.integrate_terms
    print(f"{'scheme':<10} {'backend':<9} {'terms':>6} {'best_s':>10} {'us/term':>9} {'max_rel_diff':>13}")
    for name, code, zeta, rows in batches(args.terms):
        ref = None
        for label, fn in backends.items():
            run = lambda: fn(code, zeta, rows, kernel.ENERGY, kernel.BOTH, 1e-10, 1e-300)  # noqa: E731
            best = min(timeit.repeat(run, number=1, repeat=args.repeat))
            values = run()[0]
            if ref is None:
                ref, diff = values, 0.0
            else:
                # subnormal terms carry only a few significant bits
                live = np.abs(ref) > np.finfo(float).tiny
                diff = float(np.max(np.abs(values[live] - ref[live]) / np.abs(ref[live])))
            print(f"{name:<10} {label:<9} {len(zeta):>6} {best:>10.4f} {1e6 * best / len(zeta):>9.2f} {diff:>13.2e}")


if __name__ == "__main__":
    main()
