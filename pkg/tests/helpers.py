"""Small complexes used by the property tests."""

import random
import warnings
from fractions import Fraction

from ezdops import reference as ref
from ezdops.chain_complex import FreeMap, GradedComplex, GradedFreeModule
from ezdops.ring import make_ring, quotient_by

# pairs (a, b) with ab = 0 in R = S/(f) of the worked example
S4_PAIRS = [("t", "x^2+y^2-z^2-w^2"), ("x", "t"), ("t", "z"), ("w", "t"), ("y^2", "x^2+y^2-z^2-w^2"), ("t", "y^2*z")]


def uv_rings():
    S = make_ring(["u", "v"], relations=["u*v"], name="S")
    R = quotient_by(S, S.elem("u"), "R")
    return S, R


def periodic_complex(R, a, b, length, rng=None, start=0):
    """``F_0 <- F_1 <- ... <- F_length`` of rank one, d alternating a, b."""
    rng = rng or random.Random(0)
    a, b = R.elem(a), R.elem(b)
    assert (a * b).is_zero() and (b * a).is_zero()
    degs = [start]
    entries = {}
    for i in range(1, length + 1):
        e = a if i % 2 else b
        c = Fraction(rng.choice([1, -1, 2, -3, 1, 1]), rng.choice([1, 1, 2]))
        entries[i] = e * c
        degs.append(degs[-1] + e.degree())
    mods = {i: GradedFreeModule((-degs[i],), R) for i in range(length + 1)}
    diffs = {i: FreeMap(mods[i], mods[i - 1], [[entries[i]]], 0, R) for i in range(1, length + 1)}
    return GradedComplex(R, mods, diffs, bounded_below=True, name="P")


def direct_sum(F, G):
    R = F.ring
    assert F.lo == G.lo and F.hi == G.hi
    mods = {i: GradedFreeModule(F.modules[i].twists + G.modules[i].twists, R) for i in F.modules}
    diffs = {}
    zero = R.poly.zero()
    for i, d in F.diffs.items():
        e = G.diffs[i]
        rows = [list(r) + [zero] * e.source.rank for r in d.rows]
        rows += [[zero] * d.source.rank + list(r) for r in e.rows]
        diffs[i] = FreeMap(mods[i], mods[i - 1], rows, 0, R, reduce=False)
    return GradedComplex(R, mods, diffs, bounded_below=True, name="FG")


def nilpotent_complex(R, length, k, rng):
    """Over Q[v]: every F_i = R + R(-k), d_i = [[0, c v^k], [0, 0]]."""
    mods = {i: GradedFreeModule((0, -k), R) for i in range(length + 1)}
    diffs = {}
    for i in range(1, length + 1):
        c = rng.choice([1, -1, 2, 3])
        diffs[i] = FreeMap(mods[i], mods[i - 1], [[0, f"{c}*v^{k}"], [0, 0]], 0, R)
    return GradedComplex(R, mods, diffs, bounded_below=True, name="N")


def random_s4_case(rng, length=7):
    """A random complex over the example R: a periodic complex, possibly
    summed with a second one."""
    S, R = ref.rings()
    a, b = rng.choice(S4_PAIRS)
    if rng.random() < 0.5:
        a, b = b, a
    F = periodic_complex(R, a, b, length, rng)
    if rng.random() < 0.3:
        a2, b2 = rng.choice(S4_PAIRS)
        F = direct_sum(F, periodic_complex(R, a2, b2, length, rng))
    return S, R, F


def random_ann_element(R, y, rng, gens=None):
    """A random homogeneous element of ann_R(y), built from known generators."""
    from ezdops.ring import annihilator, random_homogeneous

    gens = gens if gens is not None else annihilator(R, R.elem(y))
    if not gens:
        return R.zero()
    g = rng.choice(gens)
    extra = rng.randint(0, 1)
    m = random_homogeneous(R, extra, rng) if extra else R.elem(rng.choice([1, -1, 2]))
    z = g * m
    return z if z else g


def syzygy_walk(R, first, length, rng, width=2, slack=2, start=None, spread=2, levels=2):
    """A complex built by repeatedly keeping ``width`` random homogeneous
    combinations of the kernel generators of the last differential.

    The result has d^2 = 0 but is not exact; ranks stay small, so long
    windows are cheap while the operators stay nontrivial.
    """
    from ezdops.resolution import extend_resolution

    if start is None:
        first = [R.elem(a) for a in first]
        mods = {0: GradedFreeModule((0,), R), 1: GradedFreeModule(tuple(-a.degree() for a in first), R)}
        diffs = {1: FreeMap(mods[1], mods[0], [[a.rep for a in first]], 0, R)}
        F = GradedComplex(R, mods, diffs, bounded_below=True)
    else:
        F = start
    for k in range(F.hi + 1, length + 1):
        top = max(-t for t in F.modules[k - 1].twists)
        for extra in range(slack, slack + 4):
            d = extend_resolution(F, 1, top + extra).diffs[k]
            if d.source.rank:
                break
        else:
            break
        degs = [d.source.gen_degree(j) for j in range(d.source.rank)]
        picks = []
        low = sorted(set(degs))[:levels]
        for _ in range(width):
            e = rng.choice(low)
            same = [j for j, dj in enumerate(degs) if dj == e]
            coefs = {j: Fraction(rng.choice([1, -1, 2, 3]), rng.choice([1, 2])) for j in rng.sample(same, min(len(same), rng.randint(1, spread)))}
            picks.append((e, coefs))
        picks.sort(key=lambda p: p[0])
        new = GradedFreeModule(tuple(-e for e, _ in picks), R)
        zero = R.poly.zero()
        rows = []
        for i in range(d.target.rank):
            row = []
            for _, coefs in picks:
                acc = zero
                for j, c in coefs.items():
                    acc = acc + d.rows[i][j] * c
                row.append(acc)
            rows.append(row)
        mods = dict(F.modules)
        diffs = dict(F.diffs)
        mods[k] = new
        diffs[k] = FreeMap(new, mods[k - 1], rows, 0, R)
        F = GradedComplex(R, mods, diffs, bounded_below=True, name="W")
    return F


# -- property-suite cases ----------------------------------------------------


class Case:
    """One randomized instance: a complex over R = S/(x), the pair (x, y),
    two elements of ann_R(y), and windows for the homotopy checks."""

    def __init__(self, label, S, R, F, x, y, zs, windows, seed, lift_complex=None):
        self.label, self.S, self.R, self.F = label, S, R, F
        self.x, self.y, self.zs = x, y, zs
        self.windows = windows
        self.seed = seed
        self.lift_source = lift_complex if lift_complex is not None else F
        self._bundle = None

    def bundle(self):
        from ezdops.operators import operator_pipeline

        if self._bundle is None:
            zs = [(f"z{k}", z) for k, z in enumerate(self.zs)]
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                self._bundle = operator_pipeline(self.F, self.S, self.x, self.y, zs, check_pair=False)
        return self._bundle

    def random_bundles(self):
        from ezdops.operators import operator_pipeline

        out = []
        for s in (self.seed, self.seed + 7919):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                out.append(
                    operator_pipeline(self.lift_source, self.S, self.x, self.y, [("z0", self.zs[0])],
                                      policy="randomized", seed=s, check_pair=False)
                )
        return out

    def __repr__(self):
        return f"Case({self.label})"


_RES = {}


def example_resolution(extra, dmax=10):
    key = (extra, dmax)
    if key not in _RES:
        from ezdops.resolution import extend_resolution

        S, R = ref.rings()
        _RES[key] = extend_resolution(ref.complex_over(R), extra, dmax)
    return _RES[key]


def property_cases(n=50):
    """``n`` fixed-seed cases: mostly syzygy walks over the example ring,
    a few on its actual resolution, and a fifth over Q[u,v]/(uv)."""
    S, R = ref.rings()
    ann = [R.elem(a) for a in ref.ANN_G_IN_R]
    n_uv = n // 5
    n_res = 4
    out = []
    for k in range(n - n_uv - n_res):
        rng = random.Random(1000 + k)
        F = syzygy_walk(R, None, 7, rng, width=6, slack=2, start=ref.complex_over(R), spread=50, levels=3)
        zs = [random_ann_element(R, ref.G_TEXT, rng, ann) for _ in range(2)]
        # (2, 5) for d is much slower on a few seeds and finds nothing new
        w = {"b": (4, 6), "c": (5, 7), "d": (2, 4)}
        out.append(Case(f"walk-{k}", S, R, F, ref.F_TEXT, ref.G_TEXT, zs, w, 1000 + k))
    for k in range(n_res):
        rng = random.Random(2000 + k)
        zs = [random_ann_element(R, ref.G_TEXT, rng, ann) for _ in range(2)]
        w = {"b": (4, 5), "c": (4, 5), "d": (2, 4)}
        out.append(Case(f"resolution-{k}", S, R, example_resolution(2), ref.F_TEXT, ref.G_TEXT, zs, w, 2000 + k,
                        lift_complex=example_resolution(1, 9)))
    Suv, Ruv = uv_rings()
    for k in range(n_uv):
        rng = random.Random(3000 + k)
        F = nilpotent_complex(Ruv, 7, rng.randint(1, 2), rng)
        # ann_R(v) = 0 in R = Q[v], so every psi_z is psi_0 = 0
        zs = [Ruv.zero(), Ruv.zero()]
        w = {"b": (4, 6), "c": (5, 7), "d": (2, 5)}
        out.append(Case(f"uv-{k}", Suv, Ruv, F, "u", "v", zs, w, 3000 + k))
    return out
