"""Compare the compiled and pure numpy transport kernels.

Transports the identity frame around loops of a Fuchsian 2x2 system and
reports wall time per kernel and the largest disagreement between them.

    python3 bench/benchmark.py [--repeat N] [--segments S]
"""

import argparse
import time

import numpy as np

from painlab import _transport_py
from painlab.numkit import ComplexPath, IntegratorConfig, RationalMatrix, transport_rational

try:
    from painlab import _transport as _compiled
except ImportError:
    _compiled = None


def _system():
    rng = np.random.default_rng(1)
    res = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3)]
    return RationalMatrix([], [(0.0, 1, res[0]), (0.4 + 0.5j, 1, res[1]), (1.0, 1, res[2])])


def _time(kernel, A, paths, cfg, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = [transport_rational(A, np.eye(2), p, cfg, kernel=kernel) for p in paths]
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--segments", type=int, default=64)
    args = ap.parse_args(argv)
    A = _system()
    paths = [ComplexPath.circle(c, 0.25, args.segments) for c in (0.0, 0.4 + 0.5j, 1.0)]
    paths.append(ComplexPath.circle(0.5, 2.0, args.segments))
    cfg = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)
    tp, ref = _time(_transport_py, A, paths, cfg, args.repeat)
    print(f"python    {tp * 1e3:9.2f} ms")
    if _compiled is None:
        print("compiled  unavailable (extension not built)")
        return 0
    tc, out = _time(_compiled, A, paths, cfg, args.repeat)
    diff = max(float(np.max(np.abs(a - b))) for a, b in zip(ref, out))
    print(f"compiled  {tc * 1e3:9.2f} ms")
    print(f"speedup   {tp / tc:9.1f}x")
    print(f"max |diff| {diff:.3e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
