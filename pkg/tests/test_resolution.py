import pytest

from ezdops import reference as ref
from ezdops.chain_complex import GradedFreeModule
from ezdops.resolution import ModulePresentation, extend_resolution, minimal_resolution, verify_resolution_window
from ezdops.ring import make_ring
from helpers import uv_rings


def test_koszul_betti():
    R = make_ring(["x", "y", "z"])
    M = ModulePresentation.cyclic(R, ["x", "y", "z"])
    res = minimal_resolution(R, M, 3, 6)
    b = res.betti_multisets()
    assert b[1] == [-1, -1, -1] and b[2] == [-2, -2, -2] and b[3] == [-3]
    assert all(res.certified[k] for k in (1, 2, 3))
    assert verify_resolution_window(res.complex, M, 6).ok


def test_periodic_resolution_over_hypersurface():
    S, R = uv_rings()
    M = ModulePresentation.cyclic(S, ["u"])
    res = minimal_resolution(S, M, 5, 8)
    assert [res.betti[k] for k in range(6)] == [(0,), (-1,), (-2,), (-3,), (-4,), (-5,)]
    assert verify_resolution_window(res.complex, M, 6).ok


def test_free_module_has_empty_resolution():
    R = make_ring(["x"])
    M = ModulePresentation.cyclic(R, [])
    res = minimal_resolution(R, M, 2, 4)
    assert res.betti[1] == () and res.betti[2] == ()


def test_example_betti(s4):
    S, R = s4
    res = minimal_resolution(R, ModulePresentation.cyclic(R, ["y"]), 3, 10)
    for k in (1, 2, 3):
        assert res.betti_multisets()[k] == sorted(ref.BETTI[k], reverse=True)
        assert res.certified[k]
    js = res.to_json()
    assert js["steps"][3]["counts"] == {"-4": 4, "-5": 6, "-6": 6}


def test_small_dmax_is_uncertified(s4):
    S, R = s4
    res = minimal_resolution(R, ModulePresentation.cyclic(R, ["y"]), 3, 3)
    assert not res.certified[3]
    assert res.to_json()["steps"][3]["status"] == "uncertified"


def test_given_complex_is_a_resolution(s4_complex):
    M = ModulePresentation.cyclic(s4_complex.ring, ["y"])
    rep = verify_resolution_window(s4_complex, M, 8)
    assert rep.ok, rep.failures


def test_window_check_catches_non_exactness():
    R = make_ring(["x", "y"])
    M = ModulePresentation.cyclic(R, ["x", "y"])
    res = minimal_resolution(R, M, 1, 4)
    rep = verify_resolution_window(res.complex, M, 4)
    assert rep.ok
    # drop one relation: F_1 -> F_0 no longer presents M
    wrong = ModulePresentation.cyclic(R, ["x"])
    assert not verify_resolution_window(res.complex, wrong, 4).ok


def test_extend(s4_complex4):
    assert s4_complex4.hi == 4
    assert verify_resolution_window(s4_complex4, None, 7).ok


def test_argument_errors():
    R = make_ring(["x"], relations=["x^2 - 1"], graded=False)
    with pytest.raises(ValueError):
        minimal_resolution(R, ModulePresentation(GradedFreeModule((0,), R)), 1, 2)
    R = make_ring(["x"])
    with pytest.raises(ValueError):
        minimal_resolution(R, ModulePresentation.cyclic(R, ["x"]), 0, 2)


@pytest.mark.slow
@pytest.mark.parametrize("perm", [(2, 0, 1, 3, 4), (4, 3, 2, 1, 0)])
def test_betti_independent_of_monomial_order(perm):
    S, R = ref.rings(perm)
    res = minimal_resolution(R, ModulePresentation.cyclic(R, ["y"]), 3, 8)
    for k in (1, 2, 3):
        assert res.betti_multisets()[k] == sorted(ref.BETTI[k], reverse=True)
