"""Null-homotopies of chain maps on a finite window, decided exactly.

A map ``g`` of homological degree ``m`` is null-homotopic on the window
``[a, b]`` if there is ``theta`` (degree ``m + 1``) with

    g_i = d theta_i - s * theta_(i-1) d      for a <= i <= b,

where ``s = (-1)^(m+1)`` (convention ``"hom"``, the Hom-complex
differential) or ``s = -(-1)^(m+1)`` (convention ``"plus"``).  Each entry of
``theta`` is a linear combination of standard monomials of the degree
forced by the twists, so the question is a finite linear system over Q.
Infeasibility comes with a left-nullspace witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .chain_complex import ComplexMap, FreeMap, compose
from .poly import Polynomial

__all__ = [
    "HomotopyProblem",
    "HomotopyCertificate",
    "InfeasibilityCertificate",
    "NaturalityReport",
    "null_homotopy",
    "homotopic",
    "check_naturality",
    "ext_class_nonzero",
    "homotopy_residuals",
    "apply_homotopy",
]


@dataclass
class HomotopyProblem:
    g: ComplexMap
    window: tuple
    convention: str = "hom"
    graded: bool | None = None
    bound: int = 3  # ungraded mode: unknown entries use monomials of degree <= bound

    def __post_init__(self):
        if self.convention not in ("hom", "plus"):
            raise ValueError(f"unknown sign convention {self.convention!r}")
        a, b = self.window
        if a > b:
            raise ValueError("empty window")
        if self.graded is None:
            self.graded = bool(self.g.ring.graded) and self.g.degree is not None
        if self.graded and self.g.degree is None:
            raise ValueError("graded mode needs a homogeneous map")

    @property
    def source(self):
        return self.g.source

    @property
    def target(self):
        return self.g.target

    @property
    def sign(self):
        """Coefficient of ``theta d`` in the homotopy equation."""
        s = -1 if (self.g.hdeg + 1) % 2 else 1
        return -s if self.convention == "hom" else s


def _theta_shape(p, j):
    return p.source.module(j), p.target.module(j + p.g.hdeg + 1)


def equation_indices(p):
    """Window indices where every map in the homotopy equation is available."""
    F, G, m = p.source, p.target, p.g.hdeg
    out = []
    a, b = p.window
    for i in range(a, b + 1):
        if p.g.component(i) is None:
            continue
        if G.diff(i + m + 1) is None or F.diff(i) is None:
            continue
        if None in _theta_shape(p, i) or None in _theta_shape(p, i - 1):
            continue
        out.append(i)
    return out


def apply_homotopy(theta, sign, i):
    """``d theta_i + sign * theta_(i-1) d`` at index ``i``."""
    F, G, k = theta.source, theta.target, theta.hdeg
    t_i, t_prev = theta.component(i), theta.component(i - 1)
    dG, dF = G.diff(i + k), F.diff(i)
    lhs = dG.compose(t_i)
    rhs = t_prev.compose(dF)
    return lhs + rhs if sign > 0 else lhs - rhs


def homotopy_residuals(g, theta, sign, indices):
    return {i: apply_homotopy(theta, sign, i) - g.component(i) for i in indices}


@dataclass
class HomotopyCertificate:
    theta: ComplexMap
    indices: list
    convention: str
    sign: int
    graded: bool
    bounded: bool = False

    feasible = True

    def check(self, g):
        res = homotopy_residuals(g, self.theta, self.sign, self.indices)
        return all(r.is_zero() for r in res.values())

    def to_json(self):
        return {
            "verdict": "null-homotopic on window",
            "equation_indices": self.indices,
            "convention": self.convention,
            "sign": self.sign,
            "bounded": self.bounded,
            "theta": self.theta.to_json(),
        }


def _frac(c):
    return str(c) if c.denominator != 1 else str(c.numerator)


@dataclass
class InfeasibilityCertificate:
    """``witness . A = 0`` and ``witness . rhs != 0`` for the assembled system."""

    rows: list  # sparse {col: Fraction}
    ncols: int
    rhs: dict
    witness: dict
    row_labels: list
    col_labels: list
    indices: list
    convention: str
    bounded: bool = False

    feasible = False

    def pairing(self):
        return sum(v * self.rhs.get(i, 0) for i, v in self.witness.items())

    def check(self, g=None):
        """Pure arithmetic re-check of the witness identities."""
        acc = {}
        for i, v in self.witness.items():
            for c, a in self.rows[i].items():
                acc[c] = acc.get(c, 0) + v * a
        return all(v == 0 for v in acc.values()) and self.pairing() != 0

    def to_json(self):
        return {
            "verdict": "not null-homotopic",
            "equation_indices": self.indices,
            "convention": self.convention,
            "bounded": self.bounded,
            "ncols": self.ncols,
            "rows": [{str(c): _frac(Fraction(a)) for c, a in sorted(r.items())} for r in self.rows],
            "rhs": {str(i): _frac(Fraction(b)) for i, b in sorted(self.rhs.items())},
            "witness": {str(i): _frac(Fraction(v)) for i, v in sorted(self.witness.items())},
            "row_labels": [list(lab) for lab in self.row_labels],
            "pairing": _frac(Fraction(self.pairing())),
        }


def _unknown_monomials(p, R, src, tgt, r, c):
    if p.graded:
        deg = src.gen_degree(c) + p.g.degree - tgt.gen_degree(r)
        return R.standard_monomials(deg) if deg >= 0 else ()
    out = []
    for k in range(p.bound + 1):
        out.extend(R.standard_monomials(k))
    return out


def null_homotopy(p):
    """Solve ``g = D(theta)`` on the window; see the module docstring."""
    R = p.g.ring
    nf = R.basis.nf_monomial
    eqs = equation_indices(p)
    if not eqs:
        raise ValueError(f"window {p.window} is too small to pose any homotopy equation")
    F, G, m = p.source, p.target, p.g.hdeg
    sign = p.sign
    blocks = sorted({i for i in eqs} | {i - 1 for i in eqs})

    cols = []  # (j, r, c, monomial)
    for j in blocks:
        src, tgt = _theta_shape(p, j)
        for r in range(tgt.rank):
            for c in range(src.rank):
                for u in _unknown_monomials(p, R, src, tgt, r, c):
                    cols.append((j, r, c, u))

    row_index = {}
    row_labels = []
    entries = {}  # (row, col) -> coeff

    def rid(key):
        k = row_index.get(key)
        if k is None:
            k = row_index[key] = len(row_labels)
            row_labels.append(key)
        return k

    def add_poly(i, r, c, col, coeffs, u, scale):
        for mt, a in coeffs.items():
            mm = tuple(x + y for x, y in zip(mt, u))
            for ms, b in nf(mm).items():
                k = (rid((i, r, c, ms)), col)
                v = entries.get(k, 0) + scale * a * b
                if v:
                    entries[k] = v
                else:
                    entries.pop(k, None)

    eqset = set(eqs)
    for col, (j, r, c, u) in enumerate(cols):
        # theta_j = unit at (r, c) times u
        if j in eqset:
            # d^G theta_j: F_j -> G_(j+m): entries (r2, c) get dG[r2][r] * u
            dG = G.diff(j + m + 1)
            for r2 in range(dG.target.rank):
                e = dG.rows[r2][r]
                if e:
                    add_poly(j, r2, c, col, e.coeffs, u, 1)
        if j + 1 in eqset:
            # theta_j d^F_(j+1): F_(j+1) -> G_(j+1+m): entries (r, c2) get u * dF[c][c2]
            dF = F.diff(j + 1)
            for c2 in range(dF.source.rank):
                e = dF.rows[c][c2]
                if e:
                    add_poly(j + 1, r, c2, col, e.coeffs, u, sign)

    rhs = {}
    for i in eqs:
        gi = p.g.component(i)
        for r, row in enumerate(gi.rows):
            for c, e in enumerate(row):
                for ms, a in e.coeffs.items():
                    rhs[rid((i, r, c, ms))] = Fraction(a)

    rows = [dict() for _ in row_labels]
    for (k, col), v in entries.items():
        rows[k][col] = v
    ncols = len(cols)
    bounded = not p.graded

    sol = linalg.solve(rows, ncols, rhs)
    if sol is None:
        wit = linalg.infeasibility_witness(rows, ncols, rhs)
        cert = InfeasibilityCertificate(rows, ncols, rhs, wit, row_labels, cols, eqs, p.convention, bounded)
        if wit is None or not cert.check():
            raise AssertionError("solver and witness disagree")
        return cert

    theta = _assemble(p, blocks, cols, sol)
    cert = HomotopyCertificate(theta, eqs, p.convention, sign, p.graded, bounded)
    if not cert.check(p.g):
        raise AssertionError("homotopy residual is not zero")
    return cert


def _assemble(p, blocks, cols, sol):
    R = p.g.ring
    acc = {}
    for k, v in sol.items():
        j, r, c, u = cols[k]
        d = acc.setdefault((j, r, c), {})
        d[u] = d.get(u, 0) + v
    comps = {}
    for j in blocks:
        src, tgt = _theta_shape(p, j)
        rows = [[R.poly.zero()] * src.rank for _ in range(tgt.rank)]
        for r in range(tgt.rank):
            for c in range(src.rank):
                d = acc.get((j, r, c))
                if d:
                    rows[r][c] = Polynomial(R.poly, {u: Fraction(a) for u, a in d.items() if a})
        comps[j] = FreeMap(src, tgt, rows, p.g.degree if p.graded else None, R, reduce=False)
    return ComplexMap(p.source, p.target, p.g.hdeg + 1, comps, p.g.degree if p.graded else None)


def homotopic(g1, g2, window, convention="hom", graded=None, bound=3):
    if g1.hdeg != g2.hdeg:
        raise ValueError("homological degree mismatch")
    if g1.degree != g2.degree and g1.degree is not None and g2.degree is not None:
        raise ValueError(f"internal degree mismatch ({g1.degree} vs {g2.degree})")
    diff = g1 - g2
    if diff.degree is None and g1.degree is not None:
        diff.degree = g1.degree if g2.degree is None else g2.degree
    return null_homotopy(HomotopyProblem(diff, tuple(window), convention, graded, bound))


def ext_class_nonzero(g, window, convention="hom"):
    """``(True, witness)`` if ``g`` is not null-homotopic on the window.

    ``(False, homotopy)`` only means "zero on this window".
    """
    cert = null_homotopy(HomotopyProblem(g, tuple(window), convention))
    return (not cert.feasible), cert


@dataclass
class NaturalityReport:
    checks: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(c.feasible for c in self.checks.values())

    def to_json(self):
        return {
            "ok": self.ok,
            "checks": {k: c.feasible for k, c in self.checks.items()},
        }


def check_naturality(f, BF, BG, window, zs=None, convention="hom"):
    """Compare ``psi'_z f`` with ``f psi_z`` and ``phi' f`` with ``(-1)^k f phi``."""
    k = f.hdeg
    rep = NaturalityReport()
    names = zs if zs is not None else sorted(set(BF.psi_z) & set(BG.psi_z))
    for name in names:
        a = compose(BG.psi_z[name], f)
        b = compose(f, BF.psi_z[name])
        rep.checks[f"psi_{name}"] = homotopic(a, b, window, convention)
    a = compose(BG.phi, f)
    b = compose(f, BF.phi)
    if k % 2:
        b = -b
    rep.checks["phi"] = homotopic(a, b, window, convention)
    return rep
