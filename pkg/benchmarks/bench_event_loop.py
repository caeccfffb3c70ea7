"""Throughput comparison of the compiled event-loop kernel against the
pure-Python twin on identical inputs.

Run:  python3 benchmarks/bench_event_loop.py
"""

import time

import numpy as np

import jjphotonics.dynamics.source as source_mod
from jjphotonics._kernels import USING_COMPILED, _pure, thinning_chunk
from jjphotonics.dynamics import SourceParams, simulate_source

EC = 9.05e-25


def run(duration, label, kernel):
    params = SourceParams(base_rate=0.3 / 1.64e-9, rc_time=1.64e-9,
                          charging_energy=EC, t_eff=0.021, kappa=1 / 0.28e-9)
    source_mod.thinning_chunk = kernel
    t0 = time.perf_counter()
    rec = simulate_source(params, duration, seed=42)
    dt = time.perf_counter() - t0
    print(f"{label:10s}: {rec.times.size:9d} events in {dt:8.3f} s "
          f"({rec.times.size / dt:.3e} events/s)")
    return rec, dt


def main():
    original = source_mod.thinning_chunk
    try:
        rec_py, t_py = run(2e-4, "pure", _pure.thinning_chunk)
        if USING_COMPILED:
            rec_cy, t_cy = run(2e-4, "compiled", thinning_chunk)
            assert np.array_equal(rec_py.times, rec_cy.times), "kernels disagree"
            print(f"identical output, speedup x{t_py / t_cy:.1f} at small size")
            run(2e-2, "compiled", thinning_chunk)
        else:
            print("compiled kernel unavailable; pure fallback only")
    finally:
        source_mod.thinning_chunk = original


if __name__ == "__main__":
    main()
