"""Compare the compiled kernels with their pure-Python twins.

    python benchmarks/bench_kernels.py [--repeat N]

Times the two hot kernels directly: ``rref_work`` replays the matrices
recorded from the example workload (small entries, native fast path),
``rref_big`` uses random matrices whose entries outgrow machine words
(Python-integer fallback), ``mul_terms`` multiplies random polynomials.
Then it runs an
end-to-end workload (the resolution of R/(y) and the operator pipeline)
once per backend in a subprocess, since the backend is fixed at import.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from ezdops import _pykernels

try:
    from ezdops import _ckernels
except ImportError:
    _ckernels = None


def sparse_matrix(rng, nrows, ncols, density, bound=5):
    rows = []
    for _ in range(nrows):
        r = {c: rng.randint(-bound, bound) for c in range(ncols) if rng.random() < density}
        rows.append({c: v for c, v in r.items() if v})
    return rows


def recorded_matrices():
    """The integer matrices the library itself eliminates while resolving
    R/(y) and deciding the two homotopy questions of the example."""
    from ezdops import linalg
    from ezdops import reference as ref
    from ezdops.homotopy import ext_class_nonzero
    from ezdops.operators import operator_pipeline
    from ezdops.resolution import ModulePresentation, extend_resolution, minimal_resolution

    seen = []
    orig = linalg.rref_int

    def spy(rows, ncols):
        seen.append(([dict(r) for r in rows], ncols))
        return orig(rows, ncols)

    linalg.rref_int = spy
    try:
        S, R = ref.rings()
        minimal_resolution(R, ModulePresentation.cyclic(R, ["y"]), 4, 9)
        F = extend_resolution(ref.complex_over(R), 1, 9)
        B = operator_pipeline(F, S, ref.F_TEXT, ref.G_TEXT, ["t"])
        ext_class_nonzero(B.phi, (0, 4))
        ext_class_nonzero(B.psi_z["t"], (0, 4))
    finally:
        linalg.rref_int = orig
    return seen


def random_terms(rng, nvars, nterms, maxdeg=4):
    out = {}
    for _ in range(nterms):
        m = tuple(rng.randint(0, maxdeg) for _ in range(nvars))
        out[m] = rng.randint(-9, 9) or 1
    return out


WORKLOAD = """
import time
from ezdops import BACKEND
from ezdops import reference as ref
from ezdops.resolution import ModulePresentation, minimal_resolution
from ezdops.operators import operator_pipeline
from ezdops.resolution import extend_resolution
t = time.perf_counter()
S, R = ref.rings()
res = minimal_resolution(R, ModulePresentation.cyclic(R, ["y"]), 4, 10)
F = extend_resolution(ref.complex_over(R), 1, 9)
operator_pipeline(F, S, ref.F_TEXT, ref.G_TEXT, ["t"], "randomized", 1)
print(BACKEND, time.perf_counter() - t)
"""


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(0)
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])

    mats = [sparse_matrix(rng, 120, 150, 0.08) for _ in range(3)]
    recorded = recorded_matrices()
    print(f"recorded {len(recorded)} matrices from the example workload, "
          f"largest {max(len(r) for r, _ in recorded)} x {max(n for _, n in recorded)}")
    polys = [(random_terms(rng, 5, 60), random_terms(rng, 5, 60)) for _ in range(20)]
    print(f"{'kernel':<12}{'backend':<10}{'best of ' + str(args.repeat) + ' (s)':>18}")
    base = {}
    for kname, fn in (
        ("rref_work", lambda k: [k.rref_int([dict(r) for r in m], n) for m, n in recorded]),
        ("rref_big", lambda k: [k.rref_int([dict(r) for r in m], 150) for m in mats]),
        ("mul_terms", lambda k: [k.mul_terms(a, b) for a, b in polys]),
    ):
        ref_out = fn(_pykernels)
        for bname, mod in backends:
            assert fn(mod) == ref_out, f"{bname} {kname} disagrees with the Python twin"
            best = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
            base.setdefault(kname, best)
            print(f"{kname:<12}{bname:<10}{best:>18.4f}   x{base[kname] / best:.2f}")

    print("\nend-to-end (resolution to step 4 + randomized operator pipeline):")
    for flag in ("1", "0"):
        env = dict(os.environ, EZDOPS_PURE_PYTHON=flag)
        out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
        name, secs = out.stdout.split()
        print(f"  {name:<8}{float(secs):8.3f} s")


if __name__ == "__main__":
    main()
