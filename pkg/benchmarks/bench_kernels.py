"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from anisolp import kernels


def cases(rng):
    pts = rng.standard_normal((200_000, 3)) * 10
    a = np.array([1.0, 1.5, 2.0])
    bands = np.abs(rng.standard_normal((8, 256, 256)))
    w = 2.0 ** (0.5 * np.arange(8))
    return {
        "aniso_distance 2e5x3": (lambda m: m.aniso_distance_many(pts, a)),
        "band_lq q=2 8x256^2": (lambda m: m.band_lq(bands, w, 2.0)),
        "band_lq q=0.5 8x256^2": (lambda m: m.band_lq(bands, w, 0.5)),
        "band_lq q=inf 8x256^2": (lambda m: m.band_lq(bands, w, np.inf)),
        "band_lq q=3 8x256^2": (lambda m: m.band_lq(bands, w, 3.0)),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"numpy": kernels.python}
    if kernels.compiled is not None:
        backends["cython"] = kernels.compiled
    else:
        print("compiled extension not built; timing numpy only")
    print(f"{'kernel':26s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases(np.random.default_rng(0)).items():
        times = {b: min(timeit.repeat(lambda m=m: fn(m), number=1, repeat=args.repeat)) for b, m in backends.items()}
        line = f"{name:26s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times.values())
        if len(times) > 1:
            line += f"{times['numpy'] / times['cython']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
