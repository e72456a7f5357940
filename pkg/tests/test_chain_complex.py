import random

import pytest

from ezdops.chain_complex import (
    ComplexMap,
    FreeMap,
    GradedComplex,
    GradedFreeModule,
    chain_map_residuals,
    compose,
    degreewise_matrix,
    identity_map,
    is_chain_map,
    validate_complex,
    zero_map,
)
from ezdops.ring import make_ring
from helpers import periodic_complex, uv_rings


def koszul2():
    R = make_ring(["x", "y"])
    F0 = GradedFreeModule((0,), R)
    F1 = GradedFreeModule((-1, -1), R)
    F2 = GradedFreeModule((-2,), R)
    d1 = FreeMap(F1, F0, [["x", "y"]], 0)
    d2 = FreeMap(F2, F1, [["y"], ["-x"]], 0)
    return R, GradedComplex(R, {0: F0, 1: F1, 2: F2}, {1: d1, 2: d2}, bounded_below=True)


def test_module_basics():
    R, K = koszul2()
    M = K.module(1)
    assert M.rank == 2 and M.gen_degree(0) == 1
    assert str(M) == "R(-1)^2"
    assert len(M.piece_basis(2)) == 4
    assert K.module(-1).rank == 0 and K.module(5) is None


def test_validate_koszul():
    R, K = koszul2()
    assert validate_complex(K).ok
    d2 = FreeMap(K.module(2), K.module(1), [["y"], ["x"]], 0)
    bad = GradedComplex(R, K.modules, {1: K.diff(1), 2: d2})
    rep = validate_complex(bad)
    assert not rep.ok and any("d1*d2" in v for v in rep.violations)


def test_inhomogeneous_differential_flagged():
    R, K = koszul2()
    d1 = FreeMap(K.module(1), K.module(0), [["x", "y^2"]], 0)
    F = GradedComplex(R, {0: K.module(0), 1: K.module(1)}, {1: d1})
    assert not validate_complex(F).ok


def test_shape_errors():
    R, K = koszul2()
    with pytest.raises(ValueError):
        FreeMap(K.module(1), K.module(0), [["x"]], 0)
    with pytest.raises(ValueError):
        GradedComplex(R, {0: K.module(0), 2: K.module(2)}, {})
    with pytest.raises(ValueError):
        GradedComplex(R, {0: K.module(0), 1: K.module(1)}, {})


def test_diff_outside_window():
    R, K = koszul2()
    assert K.diff(0).is_zero() and K.diff(0).shape == (0, 1)
    assert K.diff(3) is None


def test_entry_degree_convention():
    R, K = koszul2()
    d1 = K.diff(1)
    # entry (0, j) must have degree gen_deg(src j) + 0 - gen_deg(tgt 0) = 1
    assert d1.entry_degree(0, 1) == 1
    assert d1.homogeneity_violations() == []


def test_identity_and_composition():
    R, K = koszul2()
    idm = identity_map(K)
    assert is_chain_map(idm)
    twice = compose(idm, idm)
    assert all(twice.component(i).rows == idm.component(i).rows for i in K.indices())


def test_odd_maps_anticommute():
    R = make_ring(["u"], relations=["u^2"])
    P = periodic_complex(R, "u", "u", 5, random.Random(1))
    # drop the bound below so the equation at index 0 involves the unknown g_(-1)
    P = GradedComplex(R, P.modules, P.diffs, bounded_below=False)
    coef = [P.diff(i).rows[0][0].lc() for i in range(1, 6)]
    # g_i = c_i: P_i -> P_(i+1) with d g_i = -g_(i-1) d forces c_i = -c_(i-1) a_i / a_(i+1)
    c = [1]
    for i in range(1, 5):
        c.append(-c[-1] * coef[i - 1] / coef[i])
    comps = {i: FreeMap(P.module(i), P.module(i + 1), [[c[i]]], 1, R) for i in range(5)}
    g = ComplexMap(P, P, 1, comps, 1)
    assert is_chain_map(g)
    comps[2] = FreeMap(P.module(2), P.module(3), [[-c[2]]], 1, R)
    assert not is_chain_map(ComplexMap(P, P, 1, comps, 1))


def test_chain_map_residual_detects_failure():
    R, K = koszul2()
    comps = {0: FreeMap(K.module(0), K.module(0), [["1"]], 0), 1: zero_map(K.module(1), K.module(1), 0)}
    g = ComplexMap(K, K, 0, comps, 0)
    assert not is_chain_map(g)


def test_degreewise_matrix():
    R, K = koszul2()
    m = degreewise_matrix(K.diff(1), 1)
    # F1 in degree 1 is spanned by the two generators; target R_1 = <x, y>
    assert len(m) == 2 and len(m[0]) == 2
    assert sorted(sum(abs(v) for v in row) for row in m) == [1, 1]


def test_over_changes_ring():
    S, R = uv_rings()
    d = FreeMap(GradedFreeModule((-1,), S), GradedFreeModule((0,), S), [["u + v"]], 0)
    assert str(d.over(R).rows[0][0]) == "v"


def _random_map(R, src, tgt, e, rng):
    from ezdops.ring import random_homogeneous

    rows = []
    for i in range(tgt.rank):
        row = []
        for j in range(src.rank):
            k = src.gen_degree(j) + e - tgt.gen_degree(i)
            row.append(random_homogeneous(R, k, rng).rep if k >= 0 else 0)
        rows.append(row)
    return FreeMap(src, tgt, rows, e, R)


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]) if B else 0)] for i in range(len(A))]


@pytest.mark.parametrize("seed", range(6))
def test_degreewise_functoriality(s4, seed):
    S, R = s4
    rng = random.Random(seed)
    A = GradedFreeModule(tuple(-rng.randint(0, 2) for _ in range(2)), R)
    B = GradedFreeModule(tuple(-rng.randint(0, 2) for _ in range(2)), R)
    C = GradedFreeModule(tuple(-rng.randint(0, 2) for _ in range(2)), R)
    h = _random_map(R, A, B, 1, rng)
    g = _random_map(R, B, C, 1, rng)
    gh = g.compose(h)
    gh.degree = 2
    for d in range(0, 5):
        M = degreewise_matrix(gh, d)
        N = _matmul(degreewise_matrix(g, d + 1), degreewise_matrix(h, d))
        if M and M[0]:
            assert M == N


def test_validate_iff_composites_vanish(s4):
    S, R = s4
    rng = random.Random(3)
    F0, F1, F2 = (GradedFreeModule(t, R) for t in [(0,), (-1, -1), (-2,)])
    for _ in range(20):
        d1 = _random_map(R, F1, F0, 0, rng)
        d2 = _random_map(R, F2, F1, 0, rng)
        F = GradedComplex(R, {0: F0, 1: F1, 2: F2}, {1: d1, 2: d2})
        assert validate_complex(F).ok == d1.compose(d2).is_zero()
