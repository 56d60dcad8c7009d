"""Time the compiled kernels against the pure-Python fallback.

Usage::

    python3 benchmarks/bench_core.py [--repeat 5]
"""

import argparse
import math
import timeit

from momentkit import _core_py

try:
    from momentkit import _core as _compiled
except ImportError:
    _compiled = None


def _workloads():
    scale = 1 << 600
    vals = [scale // (k * k + 3 * k + 4) for k in range(301)]
    thresholds = [1 << (n + 1) for n in range(301)]
    inv = 1 / math.gamma(0.75)
    return {
        "difference_table N=300": lambda m: m.difference_table(vals, 300),
        "scan_signs N=300": lambda m: m.scan_signs(vals, 300, 0, 1, thresholds),
        "lommel_h x200": lambda m: [m.lommel_h(0.75, 0.25 * i + 0.1, inv, 1e-12)
                                    for i in range(200)],
    }


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    mods = {"python": _core_py}
    if _compiled is not None:
        mods["compiled"] = _compiled
    print(f"{'workload':<26}" + "".join(f"{name:>12}" for name in mods) + f"{'speedup':>10}")
    for label, fn in _workloads().items():
        best = {name: min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
                for name, mod in mods.items()}
        row = f"{label:<26}" + "".join(f"{best[n] * 1e3:>10.2f}ms" for n in mods)
        if "compiled" in best:
            row += f"{best['python'] / best['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
