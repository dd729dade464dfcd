"""Time the compiled and pure-Python kernels side by side.

Each column swaps in all of that module's kernels, whatever the default
dispatch in ``pixetendue.kernels`` picks.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import math
import timeit

import numpy as np

from pixetendue import kernels
from pixetendue.etendue import FootprintPatch, GaussLegendreTensor, PupilDisc, QuadratureSpec, quadrature_etendue
from pixetendue.mc import SamplingSpec, Thermal, simulate_pixel


def _cases():
    rng = np.random.default_rng(0)
    uniforms = rng.random((200_000, 8))
    log_q = math.log(0.3) - math.log1p(0.3)
    counts = rng.poisson(3.0, 2_000_000).astype(np.int64)
    patch = FootprintPatch.rectangle(0.4, 0.3, 1.0, tilt=0.3)
    pupil = PupilDisc(0.6, 0.1, 0.0)
    quad = QuadratureSpec(GaussLegendreTensor(16), 1e-12)
    mc = SamplingSpec(Thermal(0.3), n_modes=8, trials=500_000, seed=1)
    return {
        "quadrature GL16->32": lambda: quadrature_etendue(patch, pupil, quad),
        "thermal_counts 200k x 8": lambda: kernels.thermal_counts(uniforms, log_q),
        "power_sums 2M": lambda: kernels.power_sums(counts),
        "simulate_pixel 500k x 8": lambda: simulate_pixel(mc),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    impls = kernels.backends()
    names = sorted(impls)
    cases = _cases()
    times = {}
    for backend in names:
        impl = impls[backend]
        for fn in ("etendue_sum", "thermal_counts", "power_sums"):
            setattr(kernels, fn, getattr(impl, fn))
        for label, call in cases.items():
            times[label, backend] = min(timeit.repeat(call, number=1, repeat=args.repeat))

    print(f"{'case':28s}" + "".join(f"{n:>12s}" for n in names) + ("    speedup" if len(names) > 1 else ""))
    for label in cases:
        row = [times[label, n] for n in names]
        line = f"{label:28s}" + "".join(f"{t * 1e3:10.1f}ms" for t in row)
        if len(names) > 1:
            line += f"   {times[label, 'python'] / times[label, 'cython']:7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
