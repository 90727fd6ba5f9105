"""Compare the compiled and pure-Python kernels on the hot paths.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

from scld import HAVE_EXTENSION, use_backend
from scld.attack import symbolic_attack
from scld.constructions import packing_to_scld, projective_plane, x3_code
from scld.trace import trace_scld
from scld.verify import is_scld


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    x8 = x3_code(8)
    x6 = x3_code(6)
    plane = packing_to_scld(projective_plane(4))
    d = symbolic_attack(x8, (17, 200))
    return [
        ("is_scld x3 l=6 (2080 coalitions)", lambda: is_scld(x6, 2)),
        ("is_scld plane q=4 (5565 coalitions)", lambda: is_scld(plane, 2)),
        ("is_scld x3 l=8 (32896 coalitions)", lambda: is_scld(x8, 2)),
        ("trace_scld x3 l=8 x200", lambda: [trace_scld(x8, 2, None, d) for _ in range(200)]),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if HAVE_EXTENSION else [])
    print(f"{'case':40s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases():
        times = []
        for b in backends:
            with use_backend(b):
                times.append(_time(fn, args.repeat))
        row = f"{name:40s}" + "".join(f"{x:11.4f}s" for x in times)
        if len(times) > 1:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
