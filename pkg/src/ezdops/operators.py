"""Lifting a complex over R = S/(x) to S and building the operators.

Given an exact pair (x, y) in S and a complex F of free R-modules:

* lift the differentials to S (``d~``), which need not square to zero;
* divide ``d~ o d~`` by x modulo the relations of S to get ``psi~``;
* divide ``d~ psi~ - psi~ d~`` by y to get ``phi~``;
* reduce to R: ``psi_z = z * psi`` for z annihilating y in R, and ``phi``.

Every division is certified and every identity is re-checked before a
result is returned.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field

from .chain_complex import ComplexMap, FreeMap, GradedComplex, chain_map_residuals
from .groebner import certified_divide
from .ring import RingElem, annihilator, check_exact_pair, random_homogeneous

__all__ = [
    "LiftedComplex",
    "OperatorBundle",
    "NotDivisibleError",
    "lift_complex",
    "build_psi",
    "build_phi",
    "reduce_operators",
    "operator_pipeline",
    "psi_contract_residuals",
    "phi_contract_residuals",
]


class NotDivisibleError(ArithmeticError):
    """An entry that should be divisible by x (or y) modulo I_S is not."""

    def __init__(self, what, index, row, col, entry):
        super().__init__(f"{what}: entry ({row},{col}) at index {index} = {entry} is not divisible")
        self.index, self.row, self.col, self.entry = index, row, col, entry


class LiftError(ValueError):
    pass


@dataclass
class LiftedComplex:
    """A lifting of ``base`` (over R) to ``tilde`` (same shapes, over S)."""

    base: GradedComplex
    tilde: GradedComplex
    S: object
    R: object
    policy: str

    def diff(self, i):
        return self.tilde.diff(i)


def _check_projection(base_map, lifted, R, index):
    for a, (rb, rl) in enumerate(zip(base_map.rows, lifted.rows)):
        for b, (eb, el) in enumerate(zip(rb, rl)):
            if R.reduce(el) != eb:
                raise LiftError(f"lift of d{index} entry {a},{b} does not project to {eb}")


def lift_complex(F, S, policy="canonical", seed=None, supplied=None):
    """Lift a complex over R = S/(x) to a sequence of maps over S.

    ``policy``: ``canonical`` (normal-form representatives), ``randomized``
    (add random multiples of x to every entry, reproducible via ``seed``) or
    ``supplied`` (``supplied`` maps index -> matrix over S).
    """
    R = F.ring
    if R.cover is not S and R.cover is not None and R.cover.ideal != S.ideal:
        raise LiftError("complex is not over a quotient of S")
    x = R.modulus.rep if R.modulus is not None else None
    rng = random.Random(seed)
    mods = {i: type(m)(m.twists, S) for i, m in F.modules.items()}
    diffs = {}
    for i, d in sorted(F.diffs.items()):
        src, tgt = mods[i], mods[i - 1]
        if policy == "canonical":
            rows = d.rows
        elif policy == "randomized":
            if x is None:
                raise LiftError("randomized lifting needs R = S/(x)")
            rows = []
            for a, r in enumerate(d.rows):
                row = []
                for b, e in enumerate(r):
                    if S.graded:
                        k = d.entry_degree(a, b, 0) - x.degree()
                        extra = random_homogeneous(S, k, rng).rep if k >= 0 else None
                    else:
                        extra = random_homogeneous(S, rng.randint(0, 2), rng).rep
                    row.append(e + x * extra if extra else e)
                rows.append(row)
        elif policy == "supplied":
            if supplied is None or i not in supplied:
                raise LiftError(f"no supplied lift for d{i}")
            m = supplied[i]
            rows = m.rows if isinstance(m, FreeMap) else m
        else:
            raise ValueError(f"unknown lifting policy {policy!r}")
        lifted = FreeMap(src, tgt, rows, 0 if S.graded else None, S)
        _check_projection(d, lifted, R, i)
        if S.graded:
            bad = lifted.homogeneity_violations(0)
            if bad:
                raise LiftError(f"lift of d{i} is not homogeneous: {bad[0]}")
        diffs[i] = lifted
    tilde = GradedComplex(S, mods, diffs, F.bounded_below, F.name)
    return LiftedComplex(F, tilde, S, R, policy)


def _divide_map(P, divisor, S, what, index, expected_degree):
    """Entrywise certified division of a matrix over S."""
    cache = {}
    rows = []
    for a, r in enumerate(P.rows):
        row = []
        for b, e in enumerate(r):
            if not e:
                row.append(S.poly.zero())
                continue
            q = cache.get(e)
            if q is None:
                cert = certified_divide(e, divisor, S.ideal)
                if cert is None:
                    raise NotDivisibleError(what, index, a, b, e)
                q = cert.quotient
                if expected_degree is not None:
                    q = S.reduce(q.homogeneous_part(e.degree() - divisor.degree()))
                    if S.reduce(divisor * q - e):
                        raise NotDivisibleError(what, index, a, b, e)
                cache[e] = q
            row.append(q)
        rows.append(row)
    return FreeMap(P.source, P.target, rows, expected_degree, S, reduce=False)


def build_psi(L, x):
    """``psi~`` with ``x psi~ = d~ d~`` modulo the relations of S."""
    S = L.S
    x = S.reduce(x.rep if isinstance(x, RingElem) else x)
    T = L.tilde
    deg = -x.degree() if S.graded else None
    comps = {}
    for i in range(T.lo, T.hi + 1):
        d_i, d_prev = T.diff(i), T.diff(i - 1)
        if d_i is None or d_prev is None:
            continue
        P = d_prev.compose(d_i)
        comps[i] = _divide_map(P, x, S, "psi", i, deg)
    psi = ComplexMap(T, T, -2, comps, deg)
    bad = psi_contract_residuals(L, psi, x)
    if bad:
        raise AssertionError(f"psi contract failed at {bad}")
    return psi


def build_phi(L, psi, y):
    """``phi~`` with ``y phi~ = d~ psi~ - psi~ d~`` modulo the relations of S."""
    S = L.S
    y = S.reduce(y.rep if isinstance(y, RingElem) else y)
    T = L.tilde
    deg = psi.degree - y.degree() if S.graded else None
    comps = {}
    for i in range(T.lo, T.hi + 1):
        Q = _commutator(T, psi, i)
        if Q is None:
            continue
        comps[i] = _divide_map(Q, y, S, "phi", i, deg)
    phi = ComplexMap(T, T, -3, comps, deg)
    bad = phi_contract_residuals(L, psi, phi, y)
    if bad:
        raise AssertionError(f"phi contract failed at {bad}")
    return phi


def _commutator(T, psi, i):
    d_i, d_low = T.diff(i), T.diff(i - 2)
    p_i, p_prev = psi.component(i), psi.component(i - 1)
    if None in (d_i, d_low, p_i, p_prev):
        return None
    return d_low.compose(p_i) - p_prev.compose(d_i)


def psi_contract_residuals(L, psi, x):
    """Indices where ``x psi~_i != d~_(i-1) d~_i`` modulo I_S."""
    S = L.S
    x = S.reduce(x.rep if isinstance(x, RingElem) else x)
    bad = []
    for i, p in psi.comps.items():
        d_i, d_prev = L.diff(i), L.diff(i - 1)
        if d_i is None or d_prev is None:
            bad.append(i)
            continue
        if not (p.scale(x) - d_prev.compose(d_i)).is_zero():
            bad.append(i)
    return bad


def phi_contract_residuals(L, psi, phi, y):
    """Indices where ``y phi~_i != d~ psi~_i - psi~_(i-1) d~`` modulo I_S."""
    S = L.S
    y = S.reduce(y.rep if isinstance(y, RingElem) else y)
    bad = []
    for i, p in phi.comps.items():
        Q = _commutator(L.tilde, psi, i)
        if Q is None or not (p.scale(y) - Q).is_zero():
            bad.append(i)
    return bad


@dataclass
class OperatorBundle:
    lifted: LiftedComplex
    x: RingElem
    y: RingElem
    psi_tilde: ComplexMap
    phi_tilde: ComplexMap
    psi: ComplexMap  # psi~ tensored down to R, before multiplying by z
    phi: ComplexMap
    psi_z: dict = field(default_factory=dict)
    z_elems: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    @property
    def complex(self):
        return self.lifted.base

    def psi_for(self, z):
        """``psi_z`` for any z in ann_R(y) (checked)."""
        R = self.lifted.R
        z = R.elem(z)
        if not (z * R.elem(self.y.rep)).is_zero():
            raise ValueError(f"{z} does not annihilate {self.y} in R")
        return self.psi.scale(z)

    def contracts(self):
        L = self.lifted
        return {
            "psi_tilde": not psi_contract_residuals(L, self.psi_tilde, self.x),
            "phi_tilde": not phi_contract_residuals(L, self.psi_tilde, self.phi_tilde, self.y),
        }

    def to_json(self):
        out = {
            "psi_tilde": self.psi_tilde.to_json(),
            "phi_tilde": self.phi_tilde.to_json(),
            "phi": self.phi.to_json(),
            "psi": {name: m.to_json() for name, m in self.psi_z.items()},
            "z": {name: str(z) for name, z in self.z_elems.items()},
            "warnings": list(self.warnings),
        }
        return out


def _chain_check(g, what):
    res = chain_map_residuals(g)
    if res and not all(r.is_zero() for r in res.values()):
        bad = sorted(i for i, r in res.items() if not r.is_zero())
        raise AssertionError(f"{what} is not a chain map (indices {bad})")
    return bool(res)


def reduce_operators(L, psi_tilde, phi_tilde, x, y, zs=()):
    """Tensor down to R; ``zs`` is a list of z (or (name, z) pairs) in ann_R(y)."""
    R, F = L.R, L.base
    psi = psi_tilde.over(R, F, F)
    phi = phi_tilde.over(R, F, F)
    yR = R.elem(y.rep if isinstance(y, RingElem) else y)
    bundle = OperatorBundle(L, L.S.elem(x), L.S.elem(y), psi_tilde, phi_tilde, psi, phi)
    for item in zs:
        name, z = item if isinstance(item, tuple) else (None, item)
        z = R.elem(z)
        if not (z * yR).is_zero():
            raise ValueError(f"{z} is not in ann_R({yR})")
        name = name or str(z)
        m = psi.scale(z)
        bundle.psi_z[name] = m
        bundle.z_elems[name] = z
        if not _chain_check(m, f"psi_{name}"):
            bundle.warnings.append(f"psi_{name}: window too small to test the chain-map identity")
    if not _chain_check(phi, "phi"):
        bundle.warnings.append("phi: window too small to test the chain-map identity")
    return bundle


def operator_pipeline(F, S, x, y, zs=(), policy="canonical", seed=None, supplied=None, check_pair=True):
    """Lift, divide, reduce, and verify in one call."""
    x = S.elem(x)
    y = S.elem(y)
    if check_pair:
        rep = check_exact_pair(S, x, y)
        if not rep.exact:
            raise ValueError("not an exact pair: " + "; ".join(rep.failures))
    L = lift_complex(F, S, policy, seed, supplied)
    psi_t = build_psi(L, x)
    phi_t = build_phi(L, psi_t, y)
    bundle = reduce_operators(L, psi_t, phi_t, x, y, zs)
    R = L.R
    if not annihilator(R, R.elem(y.rep)):
        msg = "ann_R(y) = 0: every psi_z vanishes, only phi is informative"
        bundle.warnings.append(msg)
        warnings.warn(msg, stacklevel=2)
    return bundle
