"""Compiled vs pure-Python kernels on the reference traversal.

    python benchmarks/bench_kernels.py [--repeat 3]

Times the two per-step kernels (conflict resolution, water-filling) on
the full 16-carriage, 1 ms grid, then one full simulation run per
backend, and checks the backends agree bit for bit.
"""

import argparse
import time

import numpy as np

from hstbeam import _backend
from hstbeam.beam_scheduler import initial_selection
from hstbeam.config import ScenarioConfig
from hstbeam.geometry import carriage_positions, distance_and_angle, time_grid
from hstbeam.phased_array import ArrayModel
from hstbeam.sim import RunMode, run


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def kernel_inputs(config, array, ns):
    t = time_grid(config)
    d, theta = distance_and_angle(carriage_positions(config, t), config.h)
    D = array.directivity_all(theta)
    order = array.rank_beams(D).astype(np.intp)
    sel = initial_selection(order, ns)
    g = (sel * D).sum(axis=-1) * d**-config.path_loss_exponent / config.noise_power
    return order, sel, d, np.ascontiguousarray(g)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--ns", type=int, default=2)
    args = parser.parse_args()

    backends = _backend.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the fallback is available")

    config = ScenarioConfig(theta_bias=0.02)
    array = ArrayModel(config.beam_count)
    order, sel, d, g = kernel_inputs(config, array, args.ns)
    print(f"grid: {order.shape[0]} steps x {order.shape[1]} carriages x {order.shape[2]} beams\n")

    rows = {}
    outputs = {}
    for name, mod in backends.items():
        t_res, res = best_of(lambda: (lambda a: (a, mod.resolve_conflicts_batch(a, order, d, args.ns)))(sel.copy()),
                             args.repeat)
        t_wf, wf = best_of(lambda: mod.waterfill_batch(g, config.total_power), args.repeat)
        saved = _backend.kernels
        _backend.kernels = mod
        try:
            t_run, trace = best_of(lambda: run(config, RunMode(beams_per_carriage=args.ns), array), args.repeat)
        finally:
            _backend.kernels = saved
        rows[name] = (t_res, t_wf, t_run)
        outputs[name] = (res[0], wf[0], trace.service)

    print(f"{'backend':<10}{'resolve':>12}{'waterfill':>12}{'full run':>12}")
    for name, (a, b, c) in rows.items():
        print(f"{name:<10}{a:>11.3f}s{b:>11.3f}s{c:>11.3f}s")
    if len(rows) == 2:
        (pa, pb, pc), (ca, cb, cc) = rows["python"], rows["cython"]
        print(f"{'speedup':<10}{pa / ca:>11.1f}x{pb / cb:>11.1f}x{pc / cc:>11.1f}x")
        same = all(np.array_equal(x, y) for x, y in zip(outputs["python"], outputs["cython"]))
        print(f"\nbit-identical outputs: {same}")


if __name__ == "__main__":
    main()
