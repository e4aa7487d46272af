"""Compare the compiled series kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly, so the result does not depend on
QTJINV_PURE. Outputs are checked for equality before timing.
"""

import argparse
import random
import timeit

from qtjinv import _pykernels
from qtjinv.exactfield import Field

try:
    from qtjinv import _ckernels
except ImportError:
    _ckernels = None

CASES = [(3, 1, 64), (3, 1, 256), (2, 2, 128), (5, 1, 256), (3, 2, 128)]


def _args(F, n, rng):
    a = [rng.randrange(F.q) for _ in range(n)]
    b = [rng.randrange(F.q) for _ in range(n)]
    a[0] = b[0] = 1
    return a, b


def bench(repeat: int):
    rng = random.Random(7)
    print(f"{'q':>4} {'n':>5} {'kernel':>10} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for p, m, n in CASES:
        F = Field(p, m)
        a, b = _args(F, n, rng)
        c = 2 % F.q or 1
        calls = {
            "mul_trunc": lambda k: k.mul_trunc(a, b, n, F.p, F.q, F.addt, F.mult, F.invt),
            "inv_trunc": lambda k: k.inv_trunc(a, n, F.p, F.q, F.addt, F.mult, F.invt),
            "axpy": lambda k: k.axpy(a, b, c, n, F.p, F.q, F.addt, F.mult),
        }
        for name, call in calls.items():
            t_py = min(timeit.repeat(lambda: call(_pykernels), number=1, repeat=repeat)) * 1e3
            if _ckernels is None:
                print(f"{F.q:>4} {n:>5} {name:>10} {t_py:>10.3f} {'n/a':>10} {'':>8}")
                continue
            if call(_ckernels) != call(_pykernels):
                raise SystemExit(f"backends disagree on {name} at q={F.q}, n={n}")
            t_c = min(timeit.repeat(lambda: call(_ckernels), number=1, repeat=repeat)) * 1e3
            print(f"{F.q:>4} {n:>5} {name:>10} {t_py:>10.3f} {t_c:>10.3f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    bench(ap.parse_args().repeat)
