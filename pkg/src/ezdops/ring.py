"""Graded quotient rings P/I presented over a free polynomial ring."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .groebner import (
    IdealPresentation,
    groebner_basis,
    ideal_quotient,
)
from .poly import PolyRing, Polynomial

__all__ = [
    "PresentedRing",
    "RingElem",
    "GradedPieceBasis",
    "ExactPairReport",
    "make_ring",
    "quotient_by",
    "graded_basis",
    "annihilator",
    "ideal_equal_in",
    "check_exact_pair",
]


class InhomogeneousError(ValueError):
    pass


class PresentedRing:
    """``P / I`` with ``P`` a free polynomial ring; elements are stored as
    normal forms with respect to the reduced basis of ``I``."""

    def __init__(self, poly_ring, ideal, graded=True, name=None, cover=None, modulus=None):
        self.poly = poly_ring
        self.ideal = ideal
        self.graded = graded
        self.name = name
        self.cover = cover
        self.modulus = modulus
        if graded:
            for g in ideal.generators:
                if not g.is_homogeneous():
                    raise InhomogeneousError(f"relation {g} is not homogeneous")
        self.basis = groebner_basis(ideal)
        self._graded_cache = {}

    def __repr__(self):
        rel = ", ".join(str(g) for g in self.ideal.generators)
        return f"PresentedRing({self.name or ''} Q[{','.join(self.poly.names)}]/({rel}))"

    @property
    def names(self):
        return self.poly.names

    @property
    def degrees(self):
        return self.poly.degrees

    def reduce(self, p):
        return self.basis.normal_form(p)

    def reduce_coeffs(self, coeffs):
        return self.basis.nf_coeffs(coeffs)

    def elem(self, p):
        if isinstance(p, str):
            p = self.poly.parse(p)
        elif isinstance(p, RingElem):
            p = p.rep
        elif isinstance(p, (int, Fraction)):
            p = self.poly.const(p)
        return RingElem(self, self.reduce(p))

    def parse(self, text):
        return self.elem(text)

    def zero(self):
        return RingElem(self, self.poly.zero())

    def one(self):
        return self.elem(1)

    def gens(self):
        return [self.elem(v) for v in self.poly.gens()]

    def standard_monomials(self, d):
        """Standard monomials of weighted degree ``d``, descending."""
        got = self._graded_cache.get(d)
        if got is None:
            key = self.poly.order.key
            got = tuple(
                sorted(
                    (m for m in self.poly.monomials_of_degree(d) if self.basis.is_standard(m)),
                    key=key,
                    reverse=True,
                )
            )
            self._graded_cache[d] = got
        return got

    def dim(self, d):
        return len(self.standard_monomials(d))

    # projection/lift between a quotient and its cover
    def project(self, elem):
        """Image of an element of the cover ring (S -> S/(x))."""
        if isinstance(elem, RingElem):
            elem = elem.rep
        return RingElem(self, self.reduce(elem))

    def lift(self, elem):
        """Canonical lift to the cover ring: the normal-form representative."""
        if self.cover is None:
            raise ValueError("ring has no cover ring")
        return self.cover.elem(elem.rep)


class RingElem:
    """An element of a :class:`PresentedRing` in canonical form."""

    __slots__ = ("owner", "rep")

    def __init__(self, owner, rep):
        self.owner = owner
        self.rep = rep

    def _other(self, other):
        if isinstance(other, RingElem):
            if other.owner is not self.owner:
                other = self.owner.elem(other.rep)
            return other.rep
        if isinstance(other, Polynomial):
            return other
        return self.owner.poly.const(other)

    def __add__(self, other):
        return RingElem(self.owner, self.owner.reduce(self.rep + self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return RingElem(self.owner, self.owner.reduce(self.rep - self._other(other)))

    def __rsub__(self, other):
        return RingElem(self.owner, self.owner.reduce(self._other(other) - self.rep))

    def __neg__(self):
        return RingElem(self.owner, -self.rep)

    def __mul__(self, other):
        return RingElem(self.owner, self.owner.reduce(self.rep * self._other(other)))

    __rmul__ = __mul__

    def __pow__(self, n):
        out = self.owner.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (RingElem, Polynomial, int, Fraction)):
            return self.rep == self.owner.reduce(self._other(other))
        return NotImplemented

    def __hash__(self):
        return hash(self.rep)

    def is_zero(self):
        return self.rep.is_zero()

    def __bool__(self):
        return not self.rep.is_zero()

    def degree(self):
        """Internal degree of a homogeneous element (None for zero)."""
        if self.rep.is_zero():
            return None
        if not self.rep.is_homogeneous():
            raise ValueError(f"{self.rep} is not homogeneous")
        return self.rep.degree()

    def __str__(self):
        return str(self.rep)

    def __repr__(self):
        return f"RingElem({self.rep})"


@dataclass
class GradedPieceBasis:
    degree: int
    monomials: tuple
    ring: PresentedRing = field(repr=False)

    def __len__(self):
        return len(self.monomials)

    def coordinates(self, p):
        """Coordinates of (the normal form of) ``p`` in this basis."""
        nf = self.ring.reduce_coeffs(p.coeffs if isinstance(p, Polynomial) else p.rep.coeffs)
        idx = {m: i for i, m in enumerate(self.monomials)}
        vec = [Fraction(0)] * len(self.monomials)
        for m, c in nf.items():
            if m not in idx:
                raise ValueError("element is not in this graded piece")
            vec[idx[m]] = c
        return vec


def make_ring(names, degrees=None, relations=(), graded=True, order="grevlex", perm=None, name=None):
    """Build ``Q[names]/(relations)``; relations may be strings."""
    P = PolyRing(names, degrees, order, perm)
    rels = [P.parse(r) if isinstance(r, str) else r for r in relations]
    return PresentedRing(P, IdealPresentation(rels, P), graded=graded, name=name)


def quotient_by(S, x, name=None):
    """``S/(x)`` presented over the same polynomial ring as ``S``."""
    if isinstance(x, RingElem):
        x = x.rep
    x = S.reduce(x)
    if x.is_zero():
        raise ValueError("cannot take the quotient by zero")
    R = PresentedRing(S.poly, S.ideal + x, graded=S.graded, name=name, cover=S, modulus=S.elem(x))
    return R


def graded_basis(R, d):
    if d < 0:
        return GradedPieceBasis(d, (), R)
    return GradedPieceBasis(d, R.standard_monomials(d), R)


def _prune(R, gens):
    """Drop generators lying in the ideal generated by the others (mod I)."""
    gens = sorted({g.content_scale(1 / g.lc()) for g in gens if g}, key=lambda p: (p.degree(), len(p), p))
    kept = list(gens)
    for g in sorted(gens, key=lambda p: (-p.degree(), -len(p))):
        rest = [h for h in kept if h != g]
        J = IdealPresentation(list(R.ideal.generators) + rest, R.poly)
        if groebner_basis(J, False).contains(g):
            kept = rest
    return kept


def annihilator(R, a):
    """Generators of ``ann_R(a)`` as ring elements."""
    if isinstance(a, RingElem):
        a = a.rep
    a = R.reduce(a)
    if a.is_zero():
        raise ValueError("annihilator of zero is the whole ring")
    Q = ideal_quotient(R.ideal, a)
    gens = [R.reduce(g) for g in Q.generators]
    return [RingElem(R, g) for g in _prune(R, gens)]


def ideal_equal_in(R, gens_a, gens_b):
    """Equality of the ideals of ``R`` generated by two lists (mutual membership)."""
    base = list(R.ideal.generators)
    A = [g.rep if isinstance(g, RingElem) else g for g in gens_a]
    B = [g.rep if isinstance(g, RingElem) else g for g in gens_b]
    GA = groebner_basis(IdealPresentation(base + A, R.poly), False)
    GB = groebner_basis(IdealPresentation(base + B, R.poly), False)
    return all(GA.contains(b) for b in B) and all(GB.contains(a) for a in A)


@dataclass
class ExactPairReport:
    exact: bool
    ann_x: list
    ann_y: list
    failures: list

    def to_json(self):
        return {
            "exact": self.exact,
            "ann_x": [str(g) for g in self.ann_x],
            "ann_y": [str(g) for g in self.ann_y],
            "failures": self.failures,
        }


def check_exact_pair(S, x, y):
    """Decide ``ann(x) = (y)`` and ``ann(y) = (x)`` in ``S``."""
    x = S.elem(x)
    y = S.elem(y)
    if x.is_zero() or y.is_zero():
        raise ValueError("exact pair members must be nonzero")
    ann_x = annihilator(S, x)
    ann_y = annihilator(S, y)
    failures = []
    if not (x * y).is_zero():
        failures.append("x*y != 0")
    if not ideal_equal_in(S, ann_x, [y]):
        failures.append("ann(x) != (y)")
    if not ideal_equal_in(S, ann_y, [x]):
        failures.append("ann(y) != (x)")
    return ExactPairReport(not failures, ann_x, ann_y, failures)


def random_homogeneous(R, d, rng, coeff_range=3, density=0.6):
    """A random homogeneous element of degree ``d`` (possibly zero)."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    out = {}
    for m in R.standard_monomials(d):
        if rng.random() < density:
            c = rng.randint(-coeff_range, coeff_range)
            if c:
                out[m] = Fraction(c)
    return RingElem(R, Polynomial(R.poly, out))
