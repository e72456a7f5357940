"""JSON encodings of rings, complexes and certificates, and a verifier.

The verifier rebuilds everything from the JSON alone and re-checks the
claimed identities; it never trusts a verdict without recomputing it.
"""

from __future__ import annotations

from fractions import Fraction

from .chain_complex import ComplexMap, FreeMap, GradedComplex, GradedFreeModule, chain_map_residuals, validate_complex
from .homotopy import homotopy_residuals
from .ring import annihilator, ideal_equal_in, make_ring, quotient_by

SCHEMA = "ezdops.report/1"

__all__ = [
    "SCHEMA",
    "ring_to_json",
    "ring_from_json",
    "complex_to_json",
    "complex_from_json",
    "cmap_to_json",
    "cmap_from_json",
    "verify_certificate",
    "verify_report",
]


def ring_to_json(R):
    return {
        "vars": list(R.names),
        "degrees": list(R.degrees),
        "relations": [str(g) for g in R.ideal.generators],
        "graded": R.graded,
        "perm": list(R.poly.order.perm),
    }


def ring_from_json(d):
    return make_ring(d["vars"], d["degrees"], d["relations"], d.get("graded", True), perm=d.get("perm"))


def complex_to_json(F):
    return {
        "modules": {str(i): list(m.twists) for i, m in sorted(F.modules.items())},
        "differentials": {str(i): d.to_json() for i, d in sorted(F.diffs.items())},
        "bounded_below": F.bounded_below,
    }


def complex_from_json(d, R):
    mods = {int(i): GradedFreeModule(tw, R) for i, tw in d["modules"].items()}
    diffs = {int(i): FreeMap(mods[int(i)], mods[int(i) - 1], rows, 0 if R.graded else None, R) for i, rows in d["differentials"].items()}
    return GradedComplex(R, mods, diffs, d.get("bounded_below", False))


def cmap_to_json(g):
    return g.to_json()


def cmap_from_json(d, F, G=None):
    G = G or F
    R = F.ring
    m = d["homological_degree"]
    comps = {}
    for i, rows in d["components"].items():
        i = int(i)
        comps[i] = FreeMap(F.module(i), G.module(i + m), rows, d.get("internal_degree"), R)
    return ComplexMap(F, G, m, comps, d.get("internal_degree"))


def _q(s):
    return Fraction(s)


# -- verification ------------------------------------------------------------


def _verify_exact_pair(c):
    S = ring_from_json(c["ring"])
    x, y = S.elem(c["x"]), S.elem(c["y"])
    ann_x = annihilator(S, x)
    ann_y = annihilator(S, y)
    exact = (x * y).is_zero() and ideal_equal_in(S, ann_x, [y]) and ideal_equal_in(S, ann_y, [x])
    return exact == c["exact"]


def _verify_annihilator(c):
    R = ring_from_json(c["ring"])
    a = R.elem(c["element"])
    gens = [R.elem(g) for g in c["generators"]]
    if any(not (g * a).is_zero() for g in gens):
        return False
    return ideal_equal_in(R, annihilator(R, a), gens)


def _verify_resolution(c):
    R = ring_from_json(c["ring"])
    F = complex_from_json(c["complex"], R)
    if not validate_complex(F).ok:
        return False
    for d in F.diffs.values():
        for row in d.rows:
            if any(e and e.constant_term() for e in row):
                return False
    return True


def _verify_operators(c):
    S = ring_from_json(c["S"])
    x, y = S.elem(c["x"]), S.elem(c["y"])
    R = quotient_by(S, x)
    T = complex_from_json(c["lifted"], S)
    psi = cmap_from_json(c["psi_tilde"], T)
    phi = cmap_from_json(c["phi_tilde"], T)
    for i, p in psi.comps.items():
        d_i, d_prev = T.diff(i), T.diff(i - 1)
        if not (p.scale(x) - d_prev.compose(d_i)).is_zero():
            return False
    for i, p in phi.comps.items():
        q = T.diff(i - 2).compose(psi.component(i)) - psi.component(i - 1).compose(T.diff(i))
        if not (p.scale(y) - q).is_zero():
            return False
    F = T.over(R)
    for name, z in c.get("z", {}).items():
        z = R.elem(z)
        if not (z * R.elem(y)).is_zero():
            return False
        g = psi.over(R, F, F).scale(z)
        if any(not r.is_zero() for r in chain_map_residuals(g).values()):
            return False
    g = phi.over(R, F, F)
    return all(r.is_zero() for r in chain_map_residuals(g).values())


def _verify_infeasibility(c):
    rows = [{int(k): _q(v) for k, v in r.items()} for r in c["rows"]]
    rhs = {int(k): _q(v) for k, v in c["rhs"].items()}
    wit = {int(k): _q(v) for k, v in c["witness"].items()}
    acc = {}
    for i, v in wit.items():
        for col, a in rows[i].items():
            acc[col] = acc.get(col, 0) + v * a
    pairing = sum(v * rhs.get(i, 0) for i, v in wit.items())
    return all(v == 0 for v in acc.values()) and pairing != 0


def _verify_homotopy(c):
    R = ring_from_json(c["ring"])
    F = complex_from_json(c["complex"], R)
    g = cmap_from_json(c["map"], F)
    theta = cmap_from_json(c["theta"], F)
    res = homotopy_residuals(g, theta, c["sign"], c["equation_indices"])
    return all(r.is_zero() for r in res.values())


_CHECKERS = {
    "exact_pair": _verify_exact_pair,
    "annihilator": _verify_annihilator,
    "resolution": _verify_resolution,
    "operators": _verify_operators,
    "infeasibility": _verify_infeasibility,
    "homotopy": _verify_homotopy,
}


def verify_certificate(c):
    kind = c.get("kind")
    if kind not in _CHECKERS:
        raise ValueError(f"unknown certificate kind {kind!r}")
    return bool(_CHECKERS[kind](c))


def _certificates(node, path="$"):
    if isinstance(node, dict):
        if "kind" in node and node.get("kind") in _CHECKERS:
            yield path, node
            return
        for k, v in node.items():
            yield from _certificates(v, f"{path}.{k}")
    elif isinstance(node, list):
        for k, v in enumerate(node):
            yield from _certificates(v, f"{path}[{k}]")


def verify_report(report):
    """``[(json path, ok), ...]`` for every certificate found in a report."""
    if report.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {report.get('schema')!r}")
    return [(path, verify_certificate(c)) for path, c in _certificates(report)]
