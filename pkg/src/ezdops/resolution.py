"""Minimal graded free resolutions by degreewise exact linear algebra."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .chain_complex import (
    FreeMap,
    GradedComplex,
    GradedFreeModule,
    degreewise_sparse,
    validate_complex,
)
from .poly import Polynomial
from .ring import RingElem

__all__ = [
    "ModulePresentation",
    "ResolutionResult",
    "minimal_resolution",
    "extend_resolution",
    "verify_resolution_window",
]


@dataclass
class ModulePresentation:
    """``coker(relations: F_rel -> generators)``; ``relations`` may be None."""

    generators: GradedFreeModule
    relations: FreeMap | None = None

    @classmethod
    def cyclic(cls, R, elems):
        """``R / (elems)`` for homogeneous elements."""
        elems = [R.elem(e) if not isinstance(e, RingElem) else e for e in elems]
        elems = [e for e in elems if not e.is_zero()]
        gens = GradedFreeModule((0,), R)
        if not elems:
            return cls(gens, None)
        src = GradedFreeModule(tuple(-e.degree() for e in elems), R)
        rel = FreeMap(src, gens, [[e.rep for e in elems]], 0, R)
        return cls(gens, rel)

    @property
    def ring(self):
        return self.generators.ring


@dataclass
class ResolutionResult:
    complex: GradedComplex
    betti: dict
    dmax: int
    certified_through: dict = field(default_factory=dict)
    certified: dict = field(default_factory=dict)

    def betti_multisets(self):
        return {k: sorted(v, reverse=True) for k, v in self.betti.items()}

    def to_json(self):
        steps = []
        for k in sorted(self.betti):
            tw = sorted(self.betti[k], reverse=True)
            counts = {}
            for t in tw:
                counts[str(t)] = counts.get(str(t), 0) + 1
            steps.append(
                {
                    "step": k,
                    "twists": tw,
                    "counts": counts,
                    "certified_through_degree": self.certified_through.get(k),
                    "status": "certified" if self.certified.get(k) else "uncertified",
                }
            )
        return {"dmax": self.dmax, "steps": steps}


def _multiples(module, d, gen_cols, gen_degs):
    """All ``m * g`` in degree ``d`` for standard monomials ``m``."""
    R = module.ring
    nf = R.basis.nf_monomial
    labels = module.piece_basis(d)
    index = {lab: k for k, lab in enumerate(labels)}
    out = []
    for col, e in zip(gen_cols, gen_degs):
        for m in R.standard_monomials(d - e):
            vec = {}
            for j, p in enumerate(col):
                for mt, c in p.coeffs.items():
                    mm = tuple(a + b for a, b in zip(m, mt))
                    for ms, cs in nf(mm).items():
                        k = index[(j, ms)]
                        v = vec.get(k, 0) + c * cs
                        if v:
                            vec[k] = v
                        else:
                            vec.pop(k, None)
            if vec:
                out.append(vec)
    return out


def _column_from_vector(module, d, vec):
    R = module.ring
    labels = module.piece_basis(d)
    first = min(vec)
    sign = -1 if vec[first] < 0 else 1
    coeffs = [dict() for _ in range(module.rank)]
    for k, c in vec.items():
        j, m = labels[k]
        coeffs[j][m] = sign * c
    return [Polynomial.from_dict(R.poly, c) for c in coeffs]


def _minimal_generators(module, lo, dmax, candidates_at):
    """Choose minimal generators of a graded submodule degree by degree.

    ``candidates_at(d)`` returns vectors spanning the submodule in degree
    ``d``; a candidate becomes a generator iff it is outside the span of the
    multiples of the generators chosen so far.
    """
    gen_cols, gen_degs = [], []
    for d in range(lo, dmax + 1):
        if not module.piece_basis(d):
            continue
        span = linalg.Span()
        for v in _multiples(module, d, gen_cols, gen_degs):
            span.add(v)
        new = []
        for v in candidates_at(d):
            if span.add(v):
                new.append(v)
        for v in new:
            gen_cols.append(_column_from_vector(module, d, v))
            gen_degs.append(d)
    return gen_cols, gen_degs


def _kernel_candidates(dmap):
    def at(d):
        cols, src, tgt = degreewise_sparse(dmap, d, 0)
        rows = linalg.transpose(cols, len(tgt))
        return linalg.nullspace(rows, len(src))

    return at


def _image_candidates(rel, module):
    def at(d):
        return _multiples(module, d, [list(c) for c in zip(*rel.rows)], [rel.source.gen_degree(j) for j in range(rel.source.rank)])

    return at


def _step(R, prev_module, dmax, candidates_at):
    lo = min((-t for t in prev_module.twists), default=0)
    cols, degs = _minimal_generators(prev_module, lo, dmax, candidates_at)
    new_module = GradedFreeModule(tuple(-e for e in degs), R)
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(prev_module.rank)]
    return new_module, FreeMap(new_module, prev_module, rows, 0, R, reduce=False)


def _certify(prev_module, new_module, dmax):
    prev_top = max((-t for t in prev_module.twists), default=None)
    if prev_top is None:
        return dmax, True
    through = dmax - prev_top
    found = [-t for t in new_module.twists]
    ok = through >= prev_top + 1 and all(e <= through for e in found)
    return through, ok


def minimal_resolution(R, M, hmax, dmax):
    """Resolve ``M`` up to homological step ``hmax`` using internal degrees
    ``<= dmax``.  Steps whose generators may be truncated are marked
    uncertified."""
    if not R.graded:
        raise ValueError("resolutions need a graded ring")
    if hmax < 1:
        raise ValueError("hmax must be at least 1")
    F0 = M.generators
    modules = {0: F0}
    diffs = {}
    betti = {0: F0.twists}
    through, cert = {0: dmax}, {0: True}
    if M.relations is None:
        cand = lambda d: []
    else:
        cand = _image_candidates(M.relations, F0)
    prev = F0
    for k in range(1, hmax + 1):
        new, dk = _step(R, prev, dmax, cand)
        modules[k] = new
        diffs[k] = dk
        betti[k] = new.twists
        through[k], cert[k] = _certify(prev, new, dmax)
        if not cert.get(k - 1, True):
            cert[k] = False
        cand = _kernel_candidates(dk)
        prev = new
    F = GradedComplex(R, modules, diffs, bounded_below=True, name="resolution")
    return ResolutionResult(F, betti, dmax, through, cert)


def extend_resolution(F, steps, dmax):
    """Append ``steps`` more syzygy steps to the top of a complex."""
    R = F.ring
    modules = dict(F.modules)
    diffs = dict(F.diffs)
    top = F.hi
    if top == F.lo:
        raise ValueError("need at least one differential to extend")
    cand = _kernel_candidates(F.diffs[top])
    prev = F.modules[top]
    for k in range(top + 1, top + steps + 1):
        new, dk = _step(R, prev, dmax, cand)
        modules[k] = new
        diffs[k] = dk
        cand = _kernel_candidates(dk)
        prev = new
    return GradedComplex(R, modules, diffs, F.bounded_below, F.name)


@dataclass
class WindowReport:
    ok: bool
    failures: list
    checked: list

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "failures": self.failures, "checked": self.checked}


def _rank(dmap, d):
    cols, src, tgt = degreewise_sparse(dmap, d, 0)
    return linalg.rank(cols, len(tgt)), len(src)


def verify_resolution_window(F, M=None, dmax=8):
    """Check d^2 = 0, minimality and degreewise exactness up to ``dmax``."""
    failures = []
    checked = []
    rep = validate_complex(F)
    failures.extend(rep.violations)
    for i, d in sorted(F.diffs.items()):
        for a, row in enumerate(d.rows):
            for b, e in enumerate(row):
                if e and e.constant_term():
                    failures.append(f"d{i} entry {a},{b} = {e} has a unit part (not minimal)")
    for i in range(F.lo + 1, F.hi):
        di, dnext = F.diffs[i], F.diffs[i + 1]
        for d in range(0, dmax + 1):
            rk_i, dim_src = _rank(di, d)
            rk_next, _ = _rank(dnext, d)
            kernel = dim_src - rk_i
            checked.append({"index": i, "degree": d, "ker": kernel, "im": rk_next})
            if kernel != rk_next:
                failures.append(f"not exact at index {i} in degree {d}: dim ker {kernel} != rank {rk_next}")
    if M is not None and F.lo in F.modules and F.lo + 1 in F.diffs:
        d1 = F.diffs[F.lo + 1]
        F0 = F.modules[F.lo]
        if F0.twists != M.generators.twists:
            failures.append("F_0 does not match the module generators")
        else:
            rel_cols = [] if M.relations is None else [list(c) for c in zip(*M.relations.rows)]
            rel_degs = [] if M.relations is None else [M.relations.source.gen_degree(j) for j in range(M.relations.source.rank)]
            for d in range(0, dmax + 1):
                if not F0.piece_basis(d):
                    continue
                K = linalg.Span()
                for v in _multiples(F0, d, rel_cols, rel_degs):
                    K.add(v)
                cols, _, _ = degreewise_sparse(d1, d, 0)
                image = linalg.Span()
                inside = True
                for c in cols:
                    if c:
                        image.add(c)
                        if c not in K:
                            inside = False
                checked.append({"index": F.lo, "degree": d, "relations": len(K), "im": len(image)})
                if not inside or len(image) != len(K):
                    failures.append(f"image of d{F.lo + 1} differs from the relations in degree {d}")
    return WindowReport(not failures, failures, checked)
