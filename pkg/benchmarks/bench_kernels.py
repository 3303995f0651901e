"""Compare the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter, since the backend is fixed at import time
by EXTISING_DISABLE_NUMBA. Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "pentagon_k3": "from extising.fsymbols import all_f_symbols, verify_pentagon\n"
                   "from extising.model import build_extended_ising\n"
                   "f = all_f_symbols(build_extended_ising(3))[0]\n"
                   "run = lambda: verify_pentagon(f)",
    "hexagon_solve_k2": "from extising.fsymbols import all_f_symbols\n"
                        "from extising.model import build_extended_ising\n"
                        "from extising import rsymbols as rs\n"
                        "fs = all_f_symbols(build_extended_ising(2))\n"
                        "run = lambda: [rs.solve_r(f) for f in fs[:2]]",
    "perm_census_order8": "from extising.census import symmetric_column_permutation_census\n"
                          "run = lambda: symmetric_column_permutation_census(8)",
    "twist_closure_k3": "from extising.twists import generate_group\n"
                        "run = lambda: generate_group(3)",
}

RUNNER = """
import json, time
{setup}
run()  # warm-up, includes JIT compilation
ts = []
for _ in range({repeat}):
    t = time.perf_counter(); run(); ts.append(time.perf_counter() - t)
from extising._accel import USE_NUMBA
print(json.dumps({{"numba": USE_NUMBA, "best": min(ts)}}))
"""


def time_workload(name, disable, repeat):
    env = dict(os.environ, EXTISING_DISABLE_NUMBA="1" if disable else "0")
    code = RUNNER.format(setup=WORKLOADS[name], repeat=repeat)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--only", choices=sorted(WORKLOADS))
    args = ap.parse_args(argv)
    names = [args.only] if args.only else list(WORKLOADS)
    print(f"{'workload':<22} {'numba':>10} {'numpy':>10} {'speedup':>8}")
    for name in names:
        nb = time_workload(name, False, args.repeat)
        npy = time_workload(name, True, args.repeat)
        assert nb["numba"] and not npy["numba"]
        print(f"{name:<22} {nb['best']:>9.3f}s {npy['best']:>9.3f}s {npy['best'] / nb['best']:>7.1f}x")


if __name__ == "__main__":
    main()
