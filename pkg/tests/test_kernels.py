import json
import os
import random
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ezdops import _pykernels, kernels

try:
    from ezdops import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def random_rows(rng, nr, nc, density, size):
    return [{j: rng.randint(-size, size) for j in range(nc) if rng.random() < density} for _ in range(nr)]


@st.composite
def int_matrices(draw):
    seed = draw(st.integers(0, 2**32))
    rng = random.Random(seed)
    size = draw(st.sampled_from([3, 1000, 10**30]))
    return random_rows(rng, rng.randint(0, 12), rng.randint(1, 12), rng.random(), size), 12


def test_backend_flag():
    assert kernels.BACKEND in ("python", "cython")
    if _ckernels is not None and os.environ.get("EZDOPS_PURE_PYTHON", "") in ("", "0"):
        assert kernels.BACKEND == "cython"


def test_pure_python_override():
    env = dict(os.environ, EZDOPS_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from ezdops import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_rref_python_basic():
    prows, pcols = _pykernels.rref_int([{0: 2, 1: 4}, {0: 1, 1: 3}], 2)
    assert pcols == [0, 1]
    assert all(len(r) == 1 for r in prows)


@needs_c
@settings(max_examples=150)
@given(int_matrices())
def test_rref_backends_agree(m):
    rows, n = m
    assert _ckernels.rref_int([dict(r) for r in rows], n) == _pykernels.rref_int([dict(r) for r in rows], n)


@needs_c
@settings(max_examples=100)
@given(st.integers(0, 2**32))
def test_mul_terms_backends_agree(seed):
    rng = random.Random(seed)

    def poly():
        return {
            tuple(rng.randint(0, 3) for _ in range(3)): Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            for _ in range(rng.randint(0, 6))
        }

    a, b = poly(), poly()
    a = {k: v for k, v in a.items() if v}
    b = {k: v for k, v in b.items() if v}
    assert _ckernels.mul_terms(a, b) == _pykernels.mul_terms(a, b)


def test_end_to_end_backends_agree():
    """The shipped example gives the same report under both backends."""
    script = (
        "import json; from ezdops.reproduce import reproduce_example; r = reproduce_example();"
        "[i.pop('seconds', None) for i in r['items']]; print(json.dumps([i['status'] for i in r['items']]))"
    )
    outs = []
    for flag in ("1", "0"):
        env = dict(os.environ, EZDOPS_PURE_PYTHON=flag)
        p = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True, text=True, check=True)
        outs.append(json.loads(p.stdout))
    assert outs[0] == outs[1]
    assert set(outs[0]) == {"pass"}
