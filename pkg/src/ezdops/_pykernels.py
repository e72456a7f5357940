"""Pure-Python versions of the hot kernels.

Must stay behaviourally identical to ``_ckernels.pyx``; the test suite runs
both against the same inputs.
"""

from math import gcd


def mul_terms(a, b):
    """Product of two coefficient maps {monomial tuple: coeff}."""
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple([i + j for i, j in zip(ma, mb)])
            v = get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _primitive(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def rref_int(rows, ncols):
    """Reduced row echelon form of a sparse integer matrix.

    ``rows`` is a list of dicts {column: int}.  Elimination is fraction-free:
    each update is ``row = (a*row - b*pivot_row)`` followed by division by
    the row content, so every stored row stays primitive.  Returns
    ``(pivot_rows, pivot_cols)`` where ``pivot_rows[k]`` is the unique row
    with a nonzero entry in column ``pivot_cols[k]``; columns increase.
    """
    work = {}
    col_rows = {}
    for i, r in enumerate(rows):
        r = {c: v for c, v in r.items() if v}
        if not r:
            continue
        r = _primitive(r)
        work[i] = r
        for c in r:
            s = col_rows.get(c)
            if s is None:
                col_rows[c] = {i}
            else:
                s.add(i)
    active = set(work)
    pivots = []
    for c in range(ncols):
        holders = col_rows.get(c)
        if not holders:
            continue
        best = -1
        best_len = 0
        for i in holders:
            if i in active:
                n = len(work[i])
                if best < 0 or n < best_len or (n == best_len and i < best):
                    best, best_len = i, n
        if best < 0:
            continue
        active.discard(best)
        prow = work[best]
        a = prow[c]
        for i in list(holders):
            if i == best:
                continue
            r = work[i]
            b = r[c]
            g = gcd(a, b)
            ma = a // g
            mb = b // g
            if a < 0:
                ma, mb = -ma, -mb
            new = {}
            if ma == 1:
                new.update(r)
            else:
                for k, v in r.items():
                    new[k] = v * ma
            for k, v in prow.items():
                nv = new.get(k, 0) - v * mb
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            new = _primitive(new)
            for k in r:
                if k not in new:
                    col_rows[k].discard(i)
            for k in new:
                if k not in r:
                    s = col_rows.get(k)
                    if s is None:
                        col_rows[k] = {i}
                    else:
                        s.add(i)
            if new:
                work[i] = new
            else:
                del work[i]
                active.discard(i)
        pivots.append((c, best))
    return [work[i] for _, i in pivots], [c for c, _ in pivots]
