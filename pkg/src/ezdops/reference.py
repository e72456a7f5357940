"""The worked example: an exact pair in a small Artinian ring.

S = Q[x,y,z,w,t]/(x^4, y^4, w^4, z^4, x^2y^2, y^2w^2, z^2w^2, xt, zt, wt),
f = x^2+y^2+z^2+w^2, g = x^2+y^2-z^2-w^2, R = S/(f), M = R/(y).
"""

from __future__ import annotations

from functools import lru_cache

from .chain_complex import ComplexMap, FreeMap, GradedComplex, GradedFreeModule
from .ring import make_ring, quotient_by

VARS = ("x", "y", "z", "w", "t")
S_RELATIONS = ("x^4", "y^4", "w^4", "z^4", "x^2*y^2", "y^2*w^2", "z^2*w^2", "x*t", "z*t", "w*t")
F_TEXT = "x^2+y^2+z^2+w^2"
G_TEXT = "x^2+y^2-z^2-w^2"

ANN_G_IN_R = ("t", "y^2", "z^2", "w^2")

# Q-basis of R_2 as listed for the example (no z^2: it is eliminated by f)
R2_MONOMIALS = ("x^2", "y^2", "w^2", "t^2", "x*y", "x*z", "x*w", "y*z", "y*w", "z*w", "y*t")

BETTI = {0: (0,), 1: (-1,), 2: (-3, -4, -4, -4), 3: (-4,) * 4 + (-5,) * 6 + (-6,) * 6}

D1 = [["y"]]
D2 = [["y*t", "y*w^2", "y*z^2", "y^3"]]
D3 = [
    ["w", "z", "y", "x", 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, "t", 0, 0, "y", 0, 0, "w^2", "z^2", 0, 0, 0, 0],
    [0, 0, 0, 0, 0, "t", 0, 0, "y", 0, 0, 0, "w^2", 0, "z^2", 0],
    [0, 0, 0, 0, 0, 0, "t", 0, 0, "y", 0, 0, 0, "w^2", 0, "z^2"],
]

PSI2 = [["t", 0, "z^2-x^2+w^2", 0]]
PSI3 = [[0, 0, "t", 0, 0, 0, "y*t", 0, "z^2-x^2+w^2", 0, 0, 0, 0, 0, 0, "y*(z^2-x^2+w^2)"]]
PHI3 = [[0, 0, 0, 0, 0, 0, "t", 0, 0, 0, 0, 0, "w^2", 0, "y^2+z^2", "-y^2"]]

# expected composites over S
D1D2 = [["y^2*t", 0, "y^2*z^2", 0]]
D2D3 = [[0, 0, "y^2*t", 0, 0, 0, "y^3*t", 0, "y^2*z^2", 0, 0, 0, 0, 0, 0, "y^3*z^2"]]
COMMUTATOR3 = [[0, 0, 0, 0, 0, 0, "y^2*t", 0, 0, 0, 0, 0, "x^2*w^2", 0, "z^2*x^2", "y^2*z^2"]]


@lru_cache(maxsize=None)
def rings(perm=None):
    """``(S, R)``; ``perm`` optionally reorders the variables in the term order."""
    S = make_ring(VARS, relations=S_RELATIONS, perm=perm, name="S")
    R = quotient_by(S, S.elem(F_TEXT), name="R")
    return S, R


def modules(R):
    return {
        0: GradedFreeModule(BETTI[0], R),
        1: GradedFreeModule(BETTI[1], R),
        2: GradedFreeModule(BETTI[2], R),
        3: GradedFreeModule(BETTI[3], R),
    }


def complex_over(R):
    """The displayed start of the minimal resolution of R/(y), F_0..F_3."""
    mods = modules(R)
    diffs = {
        1: FreeMap(mods[1], mods[0], D1, 0, R),
        2: FreeMap(mods[2], mods[1], D2, 0, R),
        3: FreeMap(mods[3], mods[2], D3, 0, R),
    }
    return GradedComplex(R, mods, diffs, bounded_below=True, name="F")


def matrix_map(F, i, hdeg, rows, degree):
    """A single-component complex map read from literal rows."""
    R = F.ring
    return FreeMap(F.module(i), F.module(i + hdeg), rows, degree, R)


def operator_maps(T):
    """The displayed psi~_2, psi~_3 and phi~_3 as complex maps on ``T``."""
    S = T.ring
    psi = ComplexMap(T, T, -2, {2: matrix_map(T, 2, -2, PSI2, -2), 3: matrix_map(T, 3, -2, PSI3, -2)}, -2)
    phi = ComplexMap(T, T, -3, {3: matrix_map(T, 3, -3, PHI3, -4)}, -4)
    assert psi.ring is S
    return psi, phi
