"""Exact sparse linear algebra over Q.

Matrices are lists of sparse rows ``{column: value}`` with int or Fraction
values.  All elimination goes through :func:`ezdops.kernels.rref_int` on
integer-scaled rows, so no precision is ever lost.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .kernels import rref_int

__all__ = [
    "to_int_row",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "infeasibility_witness",
    "transpose",
    "matvec",
    "vecmat",
    "Span",
]


def to_int_row(row):
    """Scale a rational sparse row to a primitive integer row."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction) and v.denominator != 1:
            den = lcm(den, v.denominator)
    out = {}
    for k, v in row.items():
        if v:
            v = v * den
            out[k] = int(v) if not isinstance(v, int) else v
    g = 0
    for v in out.values():
        g = gcd(g, v)
    if g > 1:
        out = {k: v // g for k, v in out.items()}
    return out


def rref(rows, ncols):
    """Return ``(pivot_rows, pivot_cols)`` of the reduced echelon form."""
    return rref_int([to_int_row(r) for r in rows], ncols)


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of {v : A v = 0} as primitive integer sparse vectors, one per
    free column, ordered by that column."""
    prows, pcols = rref(rows, ncols)
    pivset = set(pcols)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        vec = {f: Fraction(1)}
        for r, c in zip(prows, pcols):
            v = r.get(f)
            if v:
                vec[c] = Fraction(-v, r[c])
        out.append(to_int_row(vec))
    return out


def solve(rows, ncols, rhs):
    """A particular solution of ``A u = rhs`` or ``None`` if infeasible.

    ``rhs`` is a sparse dict {row index: value}.  Free variables are set to 0.
    """
    aug = []
    for i, r in enumerate(rows):
        r = dict(r)
        b = rhs.get(i)
        if b:
            r[ncols] = b
        aug.append(r)
    for i, b in rhs.items():
        if i >= len(rows) and b:
            return None
    prows, pcols = rref(aug, ncols + 1)
    if pcols and pcols[-1] == ncols:
        return None
    sol = {}
    for r, c in zip(prows, pcols):
        b = r.get(ncols)
        if b:
            sol[c] = Fraction(b, r[c])
    return sol


def transpose(rows, ncols=None):
    cols = {}
    for i, r in enumerate(rows):
        for j, v in r.items():
            if v:
                cols.setdefault(j, {})[i] = v
    n = ncols if ncols is not None else (max(cols) + 1 if cols else 0)
    return [cols.get(j, {}) for j in range(n)]


def matvec(rows, vec):
    out = {}
    for i, r in enumerate(rows):
        s = 0
        for j, v in r.items():
            w = vec.get(j)
            if w:
                s += v * w
        if s:
            out[i] = s
    return out


def vecmat(vec, rows):
    out = {}
    for i, y in vec.items():
        if not y:
            continue
        for j, v in rows[i].items():
            s = out.get(j, 0) + y * v
            if s:
                out[j] = s
            else:
                out.pop(j, None)
    return out


def infeasibility_witness(rows, ncols, rhs):
    """A vector ``y`` with ``y A = 0`` and ``y . rhs != 0``, or ``None`` if
    the system is solvable."""
    nrows = len(rows)
    left = nullspace(transpose(rows, ncols), nrows)
    for y in left:
        pairing = sum(v * rhs.get(i, 0) for i, v in y.items())
        if pairing:
            return y
    return None


class Span:
    """Incrementally grown subspace of Q^n, kept fully reduced."""

    def __init__(self):
        self.rows = {}  # pivot column -> primitive integer row

    def __len__(self):
        return len(self.rows)

    def _reduce(self, vec):
        vec = to_int_row(vec)
        for c, r in self.rows.items():
            b = vec.get(c)
            if not b:
                continue
            a = r[c]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            new = {k: v * ma for k, v in vec.items()}
            for k, v in r.items():
                nv = new.get(k, 0) - v * mb
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            vec = new
        return vec

    def __contains__(self, vec):
        return not self._reduce(vec)

    def add(self, vec):
        """Add ``vec``; return True if it enlarged the span."""
        red = self._reduce(vec)
        if not red:
            return False
        red = to_int_row(red)
        c = min(red)
        a = red[c]
        for pc, r in list(self.rows.items()):
            b = r.get(c)
            if not b:
                continue
            g = gcd(a, b)
            ma, mb = a // g, b // g
            new = {k: v * ma for k, v in r.items()}
            for k, v in red.items():
                nv = new.get(k, 0) - v * mb
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            self.rows[pc] = to_int_row(new)
        self.rows[c] = red
        return True
