import random
import pytest

from ezdops import reference as ref
from ezdops.chain_complex import compose, is_chain_map
from ezdops.operators import (
    LiftError,
    NotDivisibleError,
    build_phi,
    build_psi,
    lift_complex,
    operator_pipeline,
    phi_contract_residuals,
    psi_contract_residuals,
)
from helpers import nilpotent_complex, random_ann_element, random_s4_case, uv_rings


def _entry_degrees_ok(g):
    return not g.homogeneity_violations()


def test_example_bundle(s4_bundle):
    B = s4_bundle
    assert B.contracts() == {"psi_tilde": True, "phi_tilde": True}
    assert B.psi_z["t"].degree == -1 and B.phi.degree == -4
    assert is_chain_map(B.psi_z["t"]) and is_chain_map(B.phi)
    assert not B.warnings


def test_canonical_psi2(s4, s4_complex):
    S, R = s4
    L = lift_complex(s4_complex, S)
    psi = build_psi(L, S.elem(ref.F_TEXT))
    assert [str(e) for e in psi.component(2).rows[0]] == ["t", "0", "y^2", "0"]


def test_reference_matrices_satisfy_contracts(s4, s4_complex):
    S, R = s4
    L = lift_complex(s4_complex, S)
    psi, phi = ref.operator_maps(L.tilde)
    assert not psi_contract_residuals(L, psi, S.elem(ref.F_TEXT))
    assert not phi_contract_residuals(L, psi, phi, S.elem(ref.G_TEXT))


def test_bilinear_in_z(s4_bundle):
    B = s4_bundle
    a, b = B.psi_for("t"), B.psi_for("y^2")
    s = B.psi_for("t + y^2")
    assert all(s.component(i) == (a + b).component(i) for i in s.comps)
    assert all(B.psi_for("3*t").component(i) == a.scale(3).component(i) for i in a.comps)
    with pytest.raises(ValueError):
        B.psi_for("x")


def test_bad_z_rejected(s4, s4_complex4):
    S, _ = s4
    with pytest.raises(ValueError):
        operator_pipeline(s4_complex4, S, ref.F_TEXT, ref.G_TEXT, ["x"])


def test_not_exact_pair_rejected(s4, s4_complex4):
    S, _ = s4
    with pytest.raises(ValueError):
        operator_pipeline(s4_complex4, S, ref.F_TEXT, "x^2+y^2")


def test_supplied_lift_must_project(s4, s4_complex):
    S, _ = s4
    given = {i: d.rows for i, d in s4_complex.diffs.items()}
    assert lift_complex(s4_complex, S, "supplied", supplied=given).policy == "supplied"
    # d1 = [y]; replacing it by [x] does not reduce to the complex over R
    with pytest.raises(LiftError):
        lift_complex(s4_complex, S, "supplied", supplied={**given, 1: [["x"]]})
    with pytest.raises(LiftError):
        lift_complex(s4_complex, S, "supplied", supplied={})


def test_non_divisible_is_error(s4):
    # d1 = [y], d2 = [t]: yt = 0 in R but the lifted composite is not a multiple of f
    S, R = s4
    from ezdops.chain_complex import FreeMap, GradedComplex, GradedFreeModule

    mods = {0: GradedFreeModule((0,), R), 1: GradedFreeModule((-1,), R), 2: GradedFreeModule((-2,), R)}
    diffs = {1: FreeMap(mods[1], mods[0], [["y"]], 0), 2: FreeMap(mods[2], mods[1], [["t"]], 0)}
    L = lift_complex(GradedComplex(R, mods, diffs), S)
    with pytest.raises(NotDivisibleError) as e:
        build_psi(L, S.elem(ref.F_TEXT))
    assert e.value.index == 2


def test_uv_warns_when_annihilator_vanishes():
    S, R = uv_rings()
    F = nilpotent_complex(R, 4, 1, random.Random(0))
    with pytest.warns(UserWarning, match="ann_R"):
        B = operator_pipeline(F, S, "u", "v")
    assert B.phi.degree == -2


@pytest.mark.parametrize("seed", range(8))
def test_randomized_lift_contracts(seed):
    rng = random.Random(seed)
    S, R, F = random_s4_case(rng, length=5)
    B = operator_pipeline(F, S, ref.F_TEXT, ref.G_TEXT, policy="randomized", seed=seed, check_pair=False)
    assert all(B.contracts().values())
    assert is_chain_map(B.phi)
    assert _entry_degrees_ok(B.phi)


@pytest.mark.parametrize("seed", range(8))
def test_psi_commute_exactly(seed):
    rng = random.Random(seed)
    S, R, F = random_s4_case(rng, length=6)
    gens = [R.elem(a) for a in ref.ANN_G_IN_R]
    z1 = random_ann_element(R, ref.G_TEXT, rng, gens)
    z2 = random_ann_element(R, ref.G_TEXT, rng, gens)
    B = operator_pipeline(F, S, ref.F_TEXT, ref.G_TEXT, [("a", z1), ("b", z2)], check_pair=False)
    ab = compose(B.psi_z["a"], B.psi_z["b"])
    ba = compose(B.psi_z["b"], B.psi_z["a"])
    assert set(ab.comps) == set(ba.comps)
    assert all(ab.component(i) == ba.component(i) for i in ab.comps)


def test_to_json_shape(s4_bundle):
    js = s4_bundle.to_json()
    assert set(js) == {"psi_tilde", "phi_tilde", "phi", "psi", "z", "warnings"}
    assert js["z"]["t"] == "t"
    assert js["phi"]["homological_degree"] == -3
