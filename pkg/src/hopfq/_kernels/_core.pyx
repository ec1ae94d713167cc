# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the pure-Python kernels (see pure.py).

The arithmetic still runs on Python Fraction objects; the win is the
typed loop bookkeeping, dict access and tuple handling around them.
Semantics must match pure.py exactly.
"""

from fractions import Fraction

_ZERO = Fraction(0)

BACKEND = "cython"


def ts_mul(tuple a, tuple b):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i, j
    cdef list out = [_ZERO] * n
    cdef object ai, bj
    for i in range(n):
        ai = a[i]
        if not ai:
            continue
        for j in range(n - i):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return tuple(out)


def free_word_mul(dict ta, dict tb, Py_ssize_t maxdeg):
    cdef dict out = {}
    cdef tuple wa, wb, w
    cdef object ca, cb, c
    cdef Py_ssize_t la, room
    for wa, ca in ta.items():
        la = len(wa)
        if la > maxdeg or not ca:
            continue
        room = maxdeg - la
        for wb, cb in tb.items():
            if len(wb) > room or not cb:
                continue
            w = wa + wb
            c = out.get(w)
            if c is None:
                out[w] = ca * cb
            else:
                c = c + ca * cb
                if c:
                    out[w] = c
                else:
                    del out[w]
    return out


def rref_fraction(list rows, Py_ssize_t ncols):
    cdef list pivots = []
    cdef Py_ssize_t r = 0
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t c, i, j, piv
    cdef object inv, f
    cdef list row_r, row_i
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if (<list>rows[i])[c]:
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        row_r = <list>rows[r]
        inv = 1 / row_r[c]
        if inv != 1:
            for j in range(c, ncols):
                if row_r[j]:
                    row_r[j] = row_r[j] * inv
        for i in range(nrows):
            if i == r:
                continue
            row_i = <list>rows[i]
            f = row_i[c]
            if f:
                for j in range(c, ncols):
                    if row_r[j]:
                        row_i[j] = row_i[j] - f * row_r[j]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    del rows[r:]
    return pivots
