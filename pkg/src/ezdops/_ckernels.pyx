# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot kernels (see ``_pykernels.py``).

``rref_int`` first runs on machine integers with overflow checks and only
falls back to Python integers when an entry outgrows 62 bits.  Both paths
make the same pivot choices as the pure-Python twin, so results agree.
"""

from math import gcd
from libc.stdlib cimport free, malloc, realloc

cdef extern from * nogil:
    """
    static inline int ez_mul_ovf(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int ez_sub_ovf(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    #define EZ_LIMIT (1LL << 62)
    """
    const long long LIMIT "EZ_LIMIT"
    int ez_mul_ovf(long long a, long long b, long long *r)
    int ez_sub_ovf(long long a, long long b, long long *r)


def mul_terms(dict a, dict b):
    cdef dict out = {}
    cdef tuple ma, mb, m
    cdef Py_ssize_t n, k
    cdef object ca, cb, v
    if len(a) > len(b):
        a, b = b, a
    for ma, ca in a.items():
        n = len(ma)
        for mb, cb in b.items():
            m = tuple([<long>ma[k] + <long>mb[k] for k in range(n)])
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


cdef dict _primitive(dict row):
    cdef object g = 0
    cdef object v
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def _rref_obj(list rows, Py_ssize_t ncols):
    cdef dict work = {}
    cdef dict col_rows = {}
    cdef dict r, prow, new
    cdef set s, holders, active
    cdef list pivots = []
    cdef Py_ssize_t i, c, best, best_len, n
    cdef object a, b, g, ma, mb, k, v, nv
    for i in range(len(rows)):
        r = {cc: vv for cc, vv in (<dict>rows[i]).items() if vv}
        if not r:
            continue
        r = _primitive(r)
        work[i] = r
        for k in r:
            s = col_rows.get(k)
            if s is None:
                col_rows[k] = {i}
            else:
                s.add(i)
    active = set(work)
    for c in range(ncols):
        holders = col_rows.get(c)
        if not holders:
            continue
        best = -1
        best_len = 0
        for i in holders:
            if i in active:
                n = len(<dict>work[i])
                if best < 0 or n < best_len or (n == best_len and i < best):
                    best = i
                    best_len = n
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
                ma = -ma
                mb = -mb
            if ma == 1:
                new = dict(r)
            else:
                new = {}
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
                    (<set>col_rows[k]).discard(i)
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
    return [work[p[1]] for p in pivots], [p[0] for p in pivots]


cdef struct Row:
    Py_ssize_t n
    Py_ssize_t cap
    Py_ssize_t *cols
    long long *vals


cdef inline long long _cgcd(long long a, long long b) noexcept nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef inline Py_ssize_t _find(Row *r, Py_ssize_t c) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = r.n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if r.cols[mid] < c:
            lo = mid + 1
        else:
            hi = mid
    if lo < r.n and r.cols[lo] == c:
        return lo
    return -1


cdef inline void _primitive_c(Row *r) noexcept nogil:
    cdef long long g = 0
    cdef Py_ssize_t k
    for k in range(r.n):
        g = _cgcd(g, r.vals[k])
        if g == 1:
            return
    if g > 1:
        for k in range(r.n):
            r.vals[k] = r.vals[k] // g


cdef int _grow(Row *r, Py_ssize_t cap) noexcept nogil:
    cdef Py_ssize_t *nc
    cdef long long *nv
    if cap <= r.cap:
        return 0
    nc = <Py_ssize_t *> realloc(r.cols, cap * sizeof(Py_ssize_t))
    if nc == NULL:
        return 1
    r.cols = nc
    nv = <long long *> realloc(r.vals, cap * sizeof(long long))
    if nv == NULL:
        return 1
    r.vals = nv
    r.cap = cap
    return 0


cdef struct Bucket:
    Py_ssize_t n
    Py_ssize_t cap
    Py_ssize_t *ids


cdef int _push(Bucket *b, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t cap
    cdef Py_ssize_t *nd
    if b.n == b.cap:
        cap = 4 if b.cap == 0 else 2 * b.cap
        nd = <Py_ssize_t *> realloc(b.ids, cap * sizeof(Py_ssize_t))
        if nd == NULL:
            return 1
        b.ids = nd
        b.cap = cap
    b.ids[b.n] = i
    b.n += 1
    return 0


cdef int _combine(Row *r, Row *p, long long ma, long long mb, Py_ssize_t *tc, long long *tv,
                  Bucket *buckets, Py_ssize_t ri) noexcept nogil:
    """r <- ma*r - mb*p (sorted merge); returns 1 on overflow.  Columns new
    to r are registered in ``buckets`` (stale entries are filtered later)."""
    cdef Py_ssize_t i = 0, j = 0, n = 0
    cdef long long x, y, v
    if _grow(r, r.n + p.n):
        return 1
    while i < r.n or j < p.n:
        if j >= p.n or (i < r.n and r.cols[i] < p.cols[j]):
            if ez_mul_ovf(r.vals[i], ma, &v):
                return 1
            tc[n] = r.cols[i]
            i += 1
        elif i >= r.n or p.cols[j] < r.cols[i]:
            if ez_mul_ovf(p.vals[j], mb, &y):
                return 1
            v = -y
            tc[n] = p.cols[j]
            if _push(&buckets[p.cols[j]], ri):
                return 1
            j += 1
        else:
            if ez_mul_ovf(r.vals[i], ma, &x) or ez_mul_ovf(p.vals[j], mb, &y) or ez_sub_ovf(x, y, &v):
                return 1
            tc[n] = r.cols[i]
            i += 1
            j += 1
        if v >= LIMIT or v <= -LIMIT:
            return 1
        if v != 0:
            tv[n] = v
            n += 1
    r.n = n
    for i in range(n):
        r.cols[i] = tc[i]
        r.vals[i] = tv[i]
    return 0


def rref_int(list rows, Py_ssize_t ncols):
    """Fraction-free Gauss-Jordan elimination on sparse integer rows.

    Returns ``(pivot_rows, pivot_cols)`` exactly as the Python twin does.
    """
    cdef Py_ssize_t nrows = len(rows), i, k, c, best, best_len, pos, npiv = 0
    cdef Row *R
    cdef char *alive
    cdef char *active
    cdef Py_ssize_t *piv_row
    cdef Py_ssize_t *piv_col
    cdef Py_ssize_t *tc
    cdef long long *tv
    cdef Bucket *buckets
    cdef Py_ssize_t q
    cdef long long a, b, g, ma, mb
    cdef dict d
    cdef int overflow = 0
    cdef list keys
    cdef object v

    if ncols <= 0 or nrows == 0:
        return [], []
    R = <Row *> malloc(nrows * sizeof(Row))
    alive = <char *> malloc(nrows)
    active = <char *> malloc(nrows)
    piv_row = <Py_ssize_t *> malloc(ncols * sizeof(Py_ssize_t))
    piv_col = <Py_ssize_t *> malloc(ncols * sizeof(Py_ssize_t))
    tc = <Py_ssize_t *> malloc(ncols * sizeof(Py_ssize_t))
    tv = <long long *> malloc(ncols * sizeof(long long))
    buckets = <Bucket *> malloc(ncols * sizeof(Bucket))
    for c in range(ncols):
        buckets[c].n = 0
        buckets[c].cap = 0
        buckets[c].ids = NULL
    for i in range(nrows):
        R[i].n = 0
        R[i].cap = 0
        R[i].cols = NULL
        R[i].vals = NULL
        alive[i] = 0
        active[i] = 0
    try:
        for i in range(nrows):
            d = <dict> rows[i]
            keys = sorted(k2 for k2, v2 in d.items() if v2)
            if len(keys) > ncols or _grow(&R[i], len(keys) + 1):
                overflow = 1
                break
            for k in range(len(keys)):
                c = keys[k]
                if c < 0 or c >= ncols:
                    overflow = 1
                    break
                v = d[c]
                if v >= LIMIT or v <= -LIMIT:
                    overflow = 1
                    break
                R[i].cols[k] = c
                R[i].vals[k] = v
            if overflow:
                break
            R[i].n = len(keys)
            for k in range(R[i].n):
                if _push(&buckets[R[i].cols[k]], i):
                    overflow = 1
            if R[i].n:
                _primitive_c(&R[i])
                alive[i] = 1
            active[i] = alive[i]
        if not overflow:
            with nogil:
                for c in range(ncols):
                    best = -1
                    best_len = 0
                    for q in range(buckets[c].n):
                        i = buckets[c].ids[q]
                        if active[i] and _find(&R[i], c) >= 0:
                            if best < 0 or R[i].n < best_len or (R[i].n == best_len and i < best):
                                best = i
                                best_len = R[i].n
                    if best < 0:
                        continue
                    active[best] = 0
                    a = R[best].vals[_find(&R[best], c)]
                    for q in range(buckets[c].n):
                        i = buckets[c].ids[q]
                        if i == best or not alive[i]:
                            continue
                        pos = _find(&R[i], c)
                        if pos < 0:
                            continue
                        b = R[i].vals[pos]
                        g = _cgcd(a, b)
                        ma = a // g
                        mb = b // g
                        if a < 0:
                            ma = -ma
                            mb = -mb
                        if _combine(&R[i], &R[best], ma, mb, tc, tv, buckets, i):
                            overflow = 1
                            break
                        _primitive_c(&R[i])
                        if R[i].n == 0:
                            alive[i] = 0
                            active[i] = 0
                    if overflow:
                        break
                    piv_row[npiv] = best
                    piv_col[npiv] = c
                    npiv += 1
        if overflow:
            return _rref_obj(rows, ncols)
        out_rows = []
        out_cols = []
        for k in range(npiv):
            i = piv_row[k]
            out_rows.append({R[i].cols[pos]: R[i].vals[pos] for pos in range(R[i].n)})
            out_cols.append(piv_col[k])
        return out_rows, out_cols
    finally:
        for i in range(nrows):
            free(R[i].cols)
            free(R[i].vals)
        free(R)
        free(alive)
        free(active)
        free(piv_row)
        free(piv_col)
        free(tc)
        free(tv)
        for c in range(ncols):
            free(buckets[c].ids)
        free(buckets)
