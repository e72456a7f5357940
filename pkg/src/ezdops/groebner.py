"""Buchberger's algorithm with cofactor tracking, plus the ideal operations
built on it: membership, ideal quotients and certified division."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .kernels import mul_terms
from .poly import PolyRing, Polynomial, divides, mono_lcm

__all__ = [
    "IdealPresentation",
    "GroebnerBasis",
    "DivisionCertificate",
    "DegenerateDivisor",
    "buchberger",
    "groebner_basis",
    "normal_form",
    "ideal_member",
    "ideal_quotient",
    "ideal_contains",
    "ideals_equal",
    "certified_divide",
    "exact_divide",
]


class DegenerateDivisor(ValueError):
    """Raised when a divisor already lies in the ideal it is taken modulo."""


def _add(a, b):
    return tuple(i + j for i, j in zip(a, b))


def _sub(a, b):
    return tuple(i - j for i, j in zip(a, b))


def _axpy(target, coef, mono, src):
    """target += coef * mono * src, in place."""
    for m, c in src.items():
        mm = _add(mono, m)
        v = target.get(mm, 0) + coef * c
        if v:
            target[mm] = v
        else:
            target.pop(mm, None)


def _dict_add(a, b, scale=1):
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _reduce(p, basis, key, quots=None):
    """Full reduction of coefficient map ``p`` by ``basis``.

    ``basis`` is a list of ``(lm, lc, coeffs)``.  If ``quots`` is a list of
    dicts (one per basis element) the quotients are accumulated into it, so
    that ``p = sum(quots[k] * basis[k]) + remainder``.
    """
    p = dict(p)
    rem = {}
    heap = [(tuple(-k for k in key(m)), m) for m in p]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        c = p.get(m)
        if c is None:
            continue
        for idx, (lm, lc, g) in enumerate(basis):
            if divides(lm, m):
                u = _sub(m, lm)
                coef = c / lc
                for mt, ct in g.items():
                    mm = _add(u, mt)
                    old = p.get(mm)
                    v = (old or 0) - coef * ct
                    if v:
                        p[mm] = v
                        if old is None:
                            heapq.heappush(heap, (tuple(-k for k in key(mm)), mm))
                    else:
                        p.pop(mm, None)
                if quots is not None:
                    q = quots[idx]
                    v = q.get(u, 0) + coef
                    if v:
                        q[u] = v
                    else:
                        q.pop(u, None)
                break
        else:
            rem[m] = c
            del p[m]
    return rem


@dataclass(frozen=True)
class IdealPresentation:
    """A finite generating set of an ideal of a free polynomial ring."""

    ring: PolyRing
    generators: tuple

    def __init__(self, generators, ring=None):
        gens = []
        seen = set()
        for g in generators:
            if ring is None:
                ring = g.ring
            if g.ring.nvars != ring.nvars:
                raise ValueError("generator lives in a different ring")
            if g and g not in seen:
                seen.add(g)
                gens.append(Polynomial(ring, g.coeffs))
        if ring is None:
            raise ValueError("cannot infer the ring of an empty ideal")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", tuple(gens))

    @property
    def order(self):
        return self.ring.order

    def __len__(self):
        return len(self.generators)

    def __add__(self, other):
        if isinstance(other, Polynomial):
            other = [other]
        elif isinstance(other, IdealPresentation):
            other = other.generators
        return IdealPresentation(list(self.generators) + list(other), self.ring)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


class GroebnerBasis:
    """Reduced Groebner basis, optionally carrying, for every element, its
    expression as a combination of the original generators."""

    def __init__(self, ideal, elements, cofactors):
        self.ideal = ideal
        self.ring = ideal.ring
        self.order = ideal.ring.order
        self.elements = elements
        self.cofactors = cofactors
        self._basis = [(g.lm(), g.lc(), g.coeffs) for g in elements]
        self.leading_monomials = [b[0] for b in self._basis]
        self._nf_cache = {}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def _check_ring(self, p):
        if p.ring.nvars != self.ring.nvars:
            raise ValueError("polynomial and basis live in incompatible rings")

    def is_standard(self, mono):
        return not any(divides(lm, mono) for lm in self.leading_monomials)

    def is_unit_ideal(self):
        return any(not any(lm) for lm in self.leading_monomials)

    def nf_monomial(self, mono):
        """Normal form of a single monomial as a coefficient map (cached)."""
        out = self._nf_cache.get(mono)
        if out is None:
            out = _reduce({mono: Fraction(1)}, self._basis, self.order.key)
            self._nf_cache[mono] = out
        return out

    def nf_coeffs(self, coeffs):
        out = {}
        for m, c in coeffs.items():
            for mm, cc in self.nf_monomial(m).items():
                v = out.get(mm, 0) + c * cc
                if v:
                    out[mm] = v
                else:
                    out.pop(mm, None)
        return out

    def normal_form(self, p):
        self._check_ring(p)
        return Polynomial(self.ring, self.nf_coeffs(p.coeffs))

    def reduce_tracked(self, p):
        """Return ``(remainder, cofactors)`` with
        ``p = sum(cofactors[j] * generators[j]) + remainder``."""
        self._check_ring(p)
        if self.cofactors is None:
            raise ValueError("basis was computed without cofactor tracking")
        quots = [{} for _ in self.elements]
        rem = _reduce(p.coeffs, self._basis, self.order.key, quots)
        ngen = len(self.ideal.generators)
        cof = [{} for _ in range(ngen)]
        for q, ccof in zip(quots, self.cofactors):
            if not q:
                continue
            for j in range(ngen):
                if ccof[j]:
                    cof[j] = _dict_add(cof[j], mul_terms(q, ccof[j].coeffs))
        return (
            Polynomial(self.ring, rem),
            [Polynomial(self.ring, c) for c in cof],
        )

    def contains(self, p):
        return not self.nf_coeffs(p.coeffs)

    def check_cofactors(self):
        """Expand every cofactor identity; True if all hold exactly."""
        if self.cofactors is None:
            return True
        gens = self.ideal.generators
        for g, cof in zip(self.elements, self.cofactors):
            total = self.ring.zero()
            for c, h in zip(cof, gens):
                total = total + c * h
            if total != g:
                return False
        return True

    def spolys_reduce_to_zero(self):
        key = self.order.key
        b = self._basis
        for i in range(len(b)):
            for j in range(i + 1, len(b)):
                s = _spoly(b[i], b[j])
                if _reduce(s, b, key):
                    return False
        return True

    def is_reduced(self):
        for i, (lm, lc, g) in enumerate(self._basis):
            if lc != 1:
                return False
            for j, (lm2, _, _) in enumerate(self._basis):
                if i != j and any(divides(lm2, m) for m in g):
                    return False
        return True


def _spoly(bi, bj):
    lmi, lci, gi = bi
    lmj, lcj, gj = bj
    L = mono_lcm(lmi, lmj)
    s = {}
    _axpy(s, 1 / lci, _sub(L, lmi), gi)
    _axpy(s, -1 / lcj, _sub(L, lmj), gj)
    return s


def buchberger(ideal, track=True):
    """Reduced Groebner basis of ``ideal`` in its ring's term order.

    Normal selection strategy with Buchberger's product and chain criteria.
    With ``track`` the result carries exact cofactor vectors.
    """
    if not isinstance(ideal, IdealPresentation):
        ideal = IdealPresentation(ideal)
    ring = ideal.ring
    key = ring.order.key
    deg = ring.mono_degree
    gens = [g.coeffs for g in ideal.generators]
    ngen = len(gens)

    basis = []  # (lm, lc, coeffs)
    cofs = []  # list of per-generator coefficient maps
    pending = set()
    heap = []

    def push_pairs(new):
        lmn = basis[new][0]
        for k in range(new):
            L = mono_lcm(basis[k][0], lmn)
            pending.add((k, new))
            heapq.heappush(heap, (deg(L), key(L), k, new))

    def add(coeffs, cof):
        lm = max(coeffs, key=key)
        lc = coeffs[lm]
        inv = 1 / lc
        coeffs = {m: c * inv for m, c in coeffs.items()}
        if track:
            cof = [{m: c * inv for m, c in cj.items()} for cj in cof]
        basis.append((lm, Fraction(1), coeffs))
        cofs.append(cof)
        push_pairs(len(basis) - 1)

    for j, g in enumerate(gens):
        cof = None
        if track:
            cof = [{} for _ in range(ngen)]
            cof[j] = {ring.one_mono: Fraction(1)}
        add(dict(g), cof)

    while heap:
        _, _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        lmi, lmj = basis[i][0], basis[j][0]
        if all(a == 0 or b == 0 for a, b in zip(lmi, lmj)):
            continue
        L = mono_lcm(lmi, lmj)
        chain = False
        for k in range(len(basis)):
            if k in (i, j) or not divides(basis[k][0], L):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                chain = True
                break
        if chain:
            continue
        s = _spoly(basis[i], basis[j])
        quots = [{} for _ in basis] if track else None
        r = _reduce(s, basis, key, quots)
        if not r:
            continue
        cof = None
        if track:
            ui, uj = _sub(L, lmi), _sub(L, lmj)
            cof = []
            for t in range(ngen):
                c = {}
                _axpy(c, Fraction(1), ui, cofs[i][t])
                _axpy(c, Fraction(-1), uj, cofs[j][t])
                for k, q in enumerate(quots):
                    if q and cofs[k][t]:
                        c = _dict_add(c, mul_terms(q, cofs[k][t]), -1)
                cof.append(c)
        add(r, cof)

    # minimal basis: drop elements whose leading monomial is divisible by another's
    keep = []
    for i, (lm, _, _) in enumerate(basis):
        redundant = False
        for j, (lm2, _, _) in enumerate(basis):
            if j == i:
                continue
            if divides(lm2, lm) and (lm2 != lm or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    minimal = [basis[i] for i in keep]

    elements = []
    cofactors = [] if track else None
    for pos, i in enumerate(keep):
        others = minimal[:pos] + minimal[pos + 1:]
        quots = [{} for _ in others] if track else None
        r = _reduce(basis[i][2], others, key, quots)
        lc = r[max(r, key=key)]
        inv = 1 / lc
        r = {m: c * inv for m, c in r.items()}
        elements.append(Polynomial(ring, r))
        if track:
            okeep = keep[:pos] + keep[pos + 1:]
            cof = []
            for t in range(ngen):
                c = dict(cofs[i][t])
                for k, q in zip(okeep, quots):
                    if q and cofs[k][t]:
                        c = _dict_add(c, mul_terms(q, cofs[k][t]), -1)
                cof.append(Polynomial(ring, {m: v * inv for m, v in c.items()}))
            cofactors.append(cof)

    order = sorted(range(len(elements)), key=lambda t: key(elements[t].lm()))
    elements = [elements[t] for t in order]
    if track:
        cofactors = [cofactors[t] for t in order]
    return GroebnerBasis(ideal, elements, cofactors)


@lru_cache(maxsize=256)
def groebner_basis(ideal, track=True):
    """Cached :func:`buchberger`."""
    return buchberger(ideal, track)


def normal_form(p, G):
    if isinstance(G, IdealPresentation):
        G = groebner_basis(G, False)
    return G.normal_form(p)


def ideal_member(p, ideal):
    """Return ``(is_member, certificate)``; the certificate is a cofactor
    vector over ``ideal.generators`` when ``p`` is a member."""
    G = groebner_basis(ideal)
    rem, cof = G.reduce_tracked(p)
    if rem:
        return False, None
    return True, cof


def ideal_contains(ideal, other):
    """True if every generator of ``other`` lies in ``ideal``."""
    G = groebner_basis(ideal, False)
    return all(G.contains(g) for g in other.generators)


def ideals_equal(a, b):
    return ideal_contains(a, b) and ideal_contains(b, a)


def exact_divide(h, a):
    """``h / a`` in the free polynomial ring; raises if ``a`` does not divide."""
    key = h.ring.order.key
    lm_a = a.lm()
    lc_a = a.lc()
    rest = dict(h.coeffs)
    q = {}
    while rest:
        m = max(rest, key=key)
        if not divides(lm_a, m):
            raise ValueError(f"{a} does not divide {h}")
        u = _sub(m, lm_a)
        coef = rest[m] / lc_a
        q[u] = coef
        _axpy(rest, -coef, u, a.coeffs)
    return Polynomial(h.ring, q)


def _fresh_name(names):
    base = "T_"
    k = 0
    while f"{base}{k}" in names:
        k += 1
    return f"{base}{k}"


def ideal_quotient(ideal, a):
    """Generators of ``(ideal : a)`` via a tag-variable elimination."""
    if not a:
        raise ValueError("ideal quotient by the zero polynomial")
    ring = ideal.ring
    if not any(any(m) for m in a.coeffs):
        return IdealPresentation(ideal.generators, ring)
    n = ring.nvars
    big = PolyRing(
        (_fresh_name(ring.names),) + ring.names,
        (1,) + ring.degrees,
        "elim",
        perm=(0,) + tuple(p + 1 for p in ring.order.perm),
        block=1,
    )

    def embed(p, tpow=0):
        return Polynomial(big, {(tpow,) + m: c for m, c in p.coeffs.items()})

    T = big.monomial((1,) + (0,) * n)
    gens = [embed(g, 1) for g in ideal.generators]
    gens.append(embed(a) - T * embed(a))
    G = buchberger(IdealPresentation(gens, big), track=False)
    out = []
    for g in G.elements:
        if all(m[0] == 0 for m in g.coeffs):
            h = Polynomial(ring, {m[1:]: c for m, c in g.coeffs.items()})
            out.append(exact_divide(h, a))
    if not out:
        out = [ring.zero()]
    return IdealPresentation(out, ring)


@dataclass(frozen=True)
class DivisionCertificate:
    """``dividend = divisor * quotient + sum(witness[j] * generators[j])``."""

    dividend: Polynomial
    divisor: Polynomial
    quotient: Polynomial
    witness: tuple
    generators: tuple

    def check(self):
        total = self.divisor * self.quotient
        for w, g in zip(self.witness, self.generators):
            total = total + w * g
        return total == self.dividend


def certified_divide(r, a, ideal):
    """Find ``q`` with ``r - a*q`` in ``ideal``; ``None`` if impossible.

    ``q`` is the cofactor of ``a`` from tracked reduction against the basis of
    ``(a) + ideal``, reduced modulo ``ideal``.
    """
    G_I = groebner_basis(ideal)
    if G_I.contains(a):
        raise DegenerateDivisor(f"divisor {a} lies in the ideal")
    ring = ideal.ring
    gens = ideal.generators
    if not r:
        return DivisionCertificate(r, a, ring.zero(), tuple(ring.zero() for _ in gens), gens)
    aug = groebner_basis(IdealPresentation([a] + list(gens), ring))
    aug_gens = aug.ideal.generators
    rem, cof = aug.reduce_tracked(r)
    if rem:
        return None
    # the augmented presentation deduplicates; map cofactors back by identity
    q = ring.zero()
    w = [ring.zero() for _ in gens]
    gen_pos = {g: j for j, g in enumerate(gens)}
    for c, h in zip(cof, aug_gens):
        if h == a:
            q = q + c
        else:
            w[gen_pos[h]] = w[gen_pos[h]] + c
    q_red, h = G_I.reduce_tracked(q)
    w = tuple(wj + a * hj for wj, hj in zip(w, h))
    cert = DivisionCertificate(r, a, q_red, w, gens)
    if not cert.check():
        raise AssertionError("division certificate failed its own identity")
    return cert
