"""Time the numba and numpy flavour of each kernel on the same inputs.

    python benchmarks/bench_backends.py [--repeat 5]
"""
import argparse
import math
import timeit

import numpy as np

from wignerbell import _kernels, bell, phase_space as ps


def cases():
    w = bell.transformed_mixtures(bell.TransformationSettings.optimal(), 2.0, 0.5)[3]
    xs = ps.GridSpec(-4, 4, 401).points()
    m = ps.marginal_x(w)
    rng = np.random.default_rng(0)
    pts = rng.normal(scale=2, size=(200_000, 4))
    n = 1_000_000
    u = rng.random(n)
    z = rng.standard_normal((n, 4))
    cumw = np.cumsum(w.weights)
    sds = np.sqrt(w.variances)
    samples = _kernels.assemble_samples_numpy(cumw, w.means, sds, u, z)
    angles = np.arange(32) * (math.pi / 32)
    var = w.variances
    return {
        "marginal_grid 401x401": ("marginal_grid", (m.weights, m.mean_x1, m.mean_x2, m.var1, m.var2, xs)),
        "eval_points 2e5": ("eval_points", (w.weights, w.means, var[:, 0].copy(), var[:, 1].copy(), pts)),
        "assemble_samples 1e6": ("assemble_samples", (cumw, w.means, sds, u, z)),
        "sign_product_sum 1e6": ("sign_product_sum", (samples, 1.0, 0.0, math.cos(0.3), math.sin(0.3))),
        "chsh_scan res=32": ("chsh_scan", (angles, math.erf(2.0) ** 2)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':<24}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for label, (name, a) in cases().items():
        f_np = getattr(_kernels, name + "_numpy")
        f_nb = getattr(_kernels, name + "_numba")
        f_nb(*a)  # compile
        t_np = min(timeit.repeat(lambda: f_np(*a), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: f_nb(*a), number=1, repeat=args.repeat)) * 1e3
        print(f"{label:<24}{t_np:>12.2f}{t_nb:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
