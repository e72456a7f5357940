"""Graded free modules, maps between them, complexes and chain maps.

Conventions: a module is ``sum_j R(twist_j)``, so its j-th generator sits in
internal degree ``-twist_j``.  Matrices act on column vectors and have shape
``target.rank x source.rank``; ``g.compose(h)`` is the matrix product
``g * h``.  A map of internal degree ``e`` has entry ``(i, j)`` homogeneous of
degree ``gen_deg(source, j) + e - gen_deg(target, i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .kernels import mul_terms
from .poly import Polynomial
from .ring import RingElem

__all__ = [
    "GradedFreeModule",
    "FreeMap",
    "ComplexMap",
    "GradedComplex",
    "ValidationReport",
    "validate_complex",
    "compose",
    "is_chain_map",
    "chain_map_residuals",
    "degreewise_matrix",
    "degreewise_sparse",
    "identity_map",
    "zero_map",
]


@dataclass(frozen=True)
class GradedFreeModule:
    twists: tuple
    ring: object = field(compare=False, repr=False)

    def __init__(self, twists, ring):
        object.__setattr__(self, "twists", tuple(int(t) for t in twists))
        object.__setattr__(self, "ring", ring)

    @property
    def rank(self):
        return len(self.twists)

    def gen_degree(self, j):
        return -self.twists[j]

    def piece_basis(self, d):
        """Labels ``(j, monomial)`` spanning the degree-``d`` piece."""
        R = self.ring
        out = []
        for j, t in enumerate(self.twists):
            for m in R.standard_monomials(d + t):
                out.append((j, m))
        return out

    def __str__(self):
        if not self.twists:
            return "0"
        parts = []
        run = None
        for t in self.twists:
            if run and run[0] == t:
                run[1] += 1
            else:
                run = [t, 1]
                parts.append(run)
        return " + ".join(f"R({t})" + (f"^{n}" if n > 1 else "") for t, n in parts)


def _as_poly(R, e):
    if isinstance(e, RingElem):
        return R.reduce(e.rep)
    if isinstance(e, Polynomial):
        return R.reduce(e)
    if isinstance(e, str):
        return R.reduce(R.poly.parse(e))
    return R.poly.const(e)


class FreeMap:
    """A matrix of ring elements between two graded free modules."""

    __slots__ = ("source", "target", "rows", "degree", "ring")

    def __init__(self, source, target, rows, degree=None, ring=None, reduce=True):
        self.ring = ring or source.ring
        self.source = source
        self.target = target
        R = self.ring
        rows = [list(r) for r in rows]
        if len(rows) != target.rank or any(len(r) != source.rank for r in rows):
            raise ValueError(
                f"matrix shape {len(rows)}x{len(rows[0]) if rows else source.rank} "
                f"does not match {target.rank}x{source.rank}"
            )
        if reduce:
            rows = [[_as_poly(R, e) for e in r] for r in rows]
        self.rows = tuple(tuple(r) for r in rows)
        self.degree = degree

    @property
    def shape(self):
        return (self.target.rank, self.source.rank)

    def entry(self, i, j):
        return self.rows[i][j]

    def entry_degree(self, i, j, e=None):
        e = self.degree if e is None else e
        return self.source.gen_degree(j) + e - self.target.gen_degree(i)

    def is_zero(self):
        return all(not e for r in self.rows for e in r)

    def compose(self, other):
        """Matrix product ``self * other`` (apply ``other`` first)."""
        if other.target.twists != self.source.twists:
            raise ValueError("shape mismatch in composition")
        R = self.ring
        n, k, m = self.target.rank, self.source.rank, other.source.rank
        rows = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = {}
                for t in range(k):
                    a = self.rows[i][t]
                    b = other.rows[t][j]
                    if a and b:
                        for mono, c in mul_terms(a.coeffs, b.coeffs).items():
                            v = acc.get(mono, 0) + c
                            if v:
                                acc[mono] = v
                            else:
                                acc.pop(mono, None)
                row.append(Polynomial(R.poly, R.reduce_coeffs(acc)))
            rows.append(row)
        deg = None
        if self.degree is not None and other.degree is not None:
            deg = self.degree + other.degree
        return FreeMap(other.source, self.target, rows, deg, R, reduce=False)

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        rows = [
            [a + b if sign > 0 else a - b for a, b in zip(ra, rb)]
            for ra, rb in zip(self.rows, other.rows)
        ]
        deg = self.degree if self.degree == other.degree else None
        return FreeMap(self.source, self.target, rows, deg, self.ring, reduce=False)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c):
        if isinstance(c, RingElem):
            c = c.rep
        rows = [[e * c for e in r] for r in self.rows]
        deg = self.degree
        if isinstance(c, Polynomial) and self.degree is not None and c:
            if c.is_homogeneous():
                deg = self.degree + c.degree()
        return FreeMap(self.source, self.target, rows, deg, self.ring)

    def __neg__(self):
        return self.scale(-1)

    def over(self, ring):
        """The same matrix read in another ring sharing the polynomial ring
        (projection S -> R is just re-reduction)."""
        src = GradedFreeModule(self.source.twists, ring)
        tgt = GradedFreeModule(self.target.twists, ring)
        return FreeMap(src, tgt, self.rows, self.degree, ring)

    def homogeneity_violations(self, e=None):
        e = self.degree if e is None else e
        out = []
        if e is None:
            return out
        for i, r in enumerate(self.rows):
            for j, p in enumerate(r):
                if not p:
                    continue
                want = self.entry_degree(i, j, e)
                if not p.is_homogeneous() or p.degree() != want:
                    out.append((i, j, str(p), want))
        return out

    def to_json(self):
        return [[str(e) for e in r] for r in self.rows]

    def __eq__(self, other):
        return (
            isinstance(other, FreeMap)
            and self.source.twists == other.source.twists
            and self.target.twists == other.target.twists
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"FreeMap({self.target.rank}x{self.source.rank}, deg={self.degree})"


def zero_map(source, target, degree=None, ring=None):
    ring = ring or source.ring
    z = ring.poly.zero()
    return FreeMap(source, target, [[z] * source.rank for _ in range(target.rank)], degree, ring, reduce=False)


class GradedComplex:
    """Free modules ``F_lo .. F_hi`` with differentials ``d_i: F_i -> F_(i-1)``
    for ``lo < i <= hi``.  With ``bounded_below`` every ``F_i`` with ``i < lo``
    is the zero module, as for a resolution."""

    def __init__(self, ring, modules, diffs, bounded_below=False, name=None):
        self.ring = ring
        self.modules = dict(modules)
        if not self.modules:
            raise ValueError("a complex needs at least one module")
        self.lo = min(self.modules)
        self.hi = max(self.modules)
        if sorted(self.modules) != list(range(self.lo, self.hi + 1)):
            raise ValueError("module indices must form a contiguous window")
        self.diffs = dict(diffs)
        for i, d in self.diffs.items():
            if i - 1 not in self.modules or i not in self.modules:
                raise ValueError(f"d{i} has no source/target in the window")
            if d.source.twists != self.modules[i].twists or d.target.twists != self.modules[i - 1].twists:
                raise ValueError(f"d{i} does not match the modules")
        missing = [i for i in range(self.lo + 1, self.hi + 1) if i not in self.diffs]
        if missing:
            raise ValueError(f"missing differentials {missing}")
        self.bounded_below = bounded_below
        self.name = name

    def module(self, i):
        if i in self.modules:
            return self.modules[i]
        if self.bounded_below and i < self.lo:
            return GradedFreeModule((), self.ring)
        return None

    def diff(self, i):
        """``d_i: F_i -> F_(i-1)``, a zero map where known to be zero, or None."""
        if i in self.diffs:
            return self.diffs[i]
        src, tgt = self.module(i), self.module(i - 1)
        if src is None or tgt is None:
            return None
        if src.rank == 0 or tgt.rank == 0:
            return zero_map(src, tgt, 0, self.ring)
        return None

    def indices(self):
        return range(self.lo, self.hi + 1)

    def over(self, ring):
        mods = {i: GradedFreeModule(m.twists, ring) for i, m in self.modules.items()}
        diffs = {i: d.over(ring) for i, d in self.diffs.items()}
        return GradedComplex(ring, mods, diffs, self.bounded_below, self.name)

    def truncate(self, lo, hi):
        mods = {i: m for i, m in self.modules.items() if lo <= i <= hi}
        diffs = {i: d for i, d in self.diffs.items() if lo < i <= hi}
        return GradedComplex(self.ring, mods, diffs, self.bounded_below and lo == self.lo, self.name)

    def __repr__(self):
        mods = ", ".join(f"F{i}={m}" for i, m in sorted(self.modules.items()))
        return f"GradedComplex({mods})"


class ComplexMap:
    """A family ``g_i: F_i -> G_(i+m)`` of homological degree ``m``."""

    def __init__(self, source, target, hdeg, comps, degree=None):
        self.source = source
        self.target = target
        self.hdeg = hdeg
        self.degree = degree
        self.comps = dict(comps)
        for i, c in self.comps.items():
            s, t = source.module(i), target.module(i + hdeg)
            if s is None or t is None or c.source.twists != s.twists or c.target.twists != t.twists:
                raise ValueError(f"component {i} does not fit the complexes")

    @property
    def ring(self):
        return self.target.ring

    def component(self, i):
        c = self.comps.get(i)
        if c is not None:
            return c
        s, t = self.source.module(i), self.target.module(i + self.hdeg)
        if s is None or t is None:
            return None
        if s.rank == 0 or t.rank == 0:
            return zero_map(s, t, self.degree, self.ring)
        return None

    def indices(self):
        return sorted(self.comps)

    def compose(self, other):
        return compose(self, other)

    def _combine(self, other, sign):
        if self.hdeg != other.hdeg:
            raise ValueError("homological degree mismatch")
        comps = {}
        for i in set(self.comps) | set(other.comps):
            a, b = self.component(i), other.component(i)
            if a is None or b is None:
                continue
            comps[i] = a + b if sign > 0 else a - b
        deg = self.degree if self.degree == other.degree else None
        return ComplexMap(self.source, self.target, self.hdeg, comps, deg)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c):
        comps = {i: m.scale(c) for i, m in self.comps.items()}
        deg = self.degree
        if isinstance(c, RingElem):
            c = c.rep
        if isinstance(c, Polynomial) and deg is not None:
            deg = deg + c.degree() if c else deg
        return ComplexMap(self.source, self.target, self.hdeg, comps, deg)

    def __neg__(self):
        return self.scale(-1)

    def over(self, ring, source=None, target=None):
        source = source or self.source.over(ring)
        target = target or self.target.over(ring)
        comps = {i: c.over(ring) for i, c in self.comps.items()}
        return ComplexMap(source, target, self.hdeg, comps, self.degree)

    def is_zero(self):
        return all(c.is_zero() for c in self.comps.values())

    def homogeneity_violations(self):
        out = []
        for i, c in sorted(self.comps.items()):
            for v in c.homogeneity_violations(self.degree):
                out.append((i,) + v)
        return out

    def to_json(self):
        return {
            "homological_degree": self.hdeg,
            "internal_degree": self.degree,
            "components": {str(i): c.to_json() for i, c in sorted(self.comps.items())},
        }

    def __repr__(self):
        return f"ComplexMap(hdeg={self.hdeg}, deg={self.degree}, idx={self.indices()})"


def identity_map(F):
    R = F.ring
    comps = {}
    for i, m in F.modules.items():
        rows = [[R.poly.one() if a == b else R.poly.zero() for b in range(m.rank)] for a in range(m.rank)]
        comps[i] = FreeMap(m, m, rows, 0, R, reduce=False)
    return ComplexMap(F, F, 0, comps, 0)


def compose(g, h):
    """``g o h`` for complex maps (or single free maps)."""
    if isinstance(g, FreeMap):
        return g.compose(h)
    if h.target is not g.source and any(
        (h.target.module(i) or GradedFreeModule((), None)).twists
        != (g.source.module(i) or GradedFreeModule((), None)).twists
        for i in h.target.indices()
    ):
        raise ValueError("h.target must equal g.source")
    comps = {}
    for i in h.comps:
        a = g.component(i + h.hdeg)
        b = h.component(i)
        if a is None or b is None:
            continue
        comps[i] = a.compose(b)
    deg = None
    if g.degree is not None and h.degree is not None:
        deg = g.degree + h.degree
    return ComplexMap(h.source, g.target, g.hdeg + h.hdeg, comps, deg)


@dataclass
class ValidationReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "violations": self.violations}


def validate_complex(F, graded=None):
    """Check ``d_(i-1) d_i = 0`` and internal degree 0 of each differential."""
    graded = F.ring.graded if graded is None else graded
    bad = []
    for i in sorted(F.diffs):
        d = F.diffs[i]
        if graded:
            for v in d.homogeneity_violations(0):
                bad.append(f"d{i} entry {v[0]},{v[1]} = {v[2]} is not of degree {v[3]}")
        prev = F.diff(i - 1)
        if prev is not None:
            comp = prev.compose(d)
            for a, r in enumerate(comp.rows):
                for b, e in enumerate(r):
                    if e:
                        bad.append(f"d{i - 1}*d{i} entry {a},{b} = {e}")
    return ValidationReport(not bad, bad)


def chain_map_residuals(g):
    """Residuals ``d g_i - (-1)^m g_(i-1) d`` at every evaluable index."""
    F, G, m = g.source, g.target, g.hdeg
    sign = -1 if m % 2 else 1
    out = {}
    for i in range(F.lo - 1, F.hi + 2):
        gi, gprev = g.component(i), g.component(i - 1)
        dG, dF = G.diff(i + m), F.diff(i)
        if gi is None or gprev is None or dG is None or dF is None:
            continue
        lhs = dG.compose(gi)
        rhs = gprev.compose(dF)
        out[i] = lhs - rhs if sign > 0 else lhs + rhs
    return out


def is_chain_map(g):
    """Commutation for even, anticommutation for odd homological degree."""
    res = chain_map_residuals(g)
    if not res:
        raise ValueError("window too small to evaluate any chain-map equation")
    return all(r.is_zero() for r in res.values())


def degreewise_sparse(fmap, d, e=None):
    """Sparse Q-matrix of ``fmap`` on the degree-``d`` piece of its source.

    Returns ``(columns, source_labels, target_labels)`` where ``columns[k]``
    is a dict {target index: coefficient}.
    """
    R = fmap.ring
    if not R.graded:
        raise ValueError("degreewise matrices need a graded ring")
    e = fmap.degree if e is None else e
    if e is None:
        raise ValueError("map has no internal degree")
    src = fmap.source.piece_basis(d)
    tgt = fmap.target.piece_basis(d + e)
    tindex = {lab: k for k, lab in enumerate(tgt)}
    nf = R.basis.nf_monomial
    cols = []
    for j, m in src:
        col = {}
        for i in range(fmap.target.rank):
            p = fmap.rows[i][j]
            if not p:
                continue
            for mt, c in p.coeffs.items():
                mm = tuple(a + b for a, b in zip(m, mt))
                for ms, cs in nf(mm).items():
                    k = tindex[(i, ms)]
                    v = col.get(k, 0) + c * cs
                    if v:
                        col[k] = v
                    else:
                        col.pop(k, None)
        cols.append(col)
    return cols, src, tgt


def degreewise_matrix(g, i_or_d, d=None):
    """Dense Q-matrix of a map restricted to one internal degree.

    ``degreewise_matrix(free_map, d)`` or ``degreewise_matrix(complex_map, i, d)``.
    Rows are indexed by the target piece basis, columns by the source one.
    """
    if isinstance(g, ComplexMap):
        fmap = g.component(i_or_d)
        if fmap is None:
            raise ValueError(f"no component at index {i_or_d}")
        e = g.degree
    else:
        fmap, d, e = g, i_or_d, g.degree
    cols, src, tgt = degreewise_sparse(fmap, d, e)
    mat = [[Fraction(0)] * len(src) for _ in tgt]
    for j, col in enumerate(cols):
        for k, v in col.items():
            mat[k][j] = v
    return mat
