"""Pure-Python reference implementations of the hot kernels.

The compiled twin lives in ``_core.pyx``; both expose the same three
functions and must agree exactly (they are compared in the benchmark and
in the test suite).  Coefficients are ``fractions.Fraction`` throughout,
words are tuples of small ints, truncated series are tuples of Fractions.
"""

from fractions import Fraction

_ZERO = Fraction(0)

BACKEND = "pure"


def ts_mul(a, b):
    """Cauchy product of two coefficient tuples, truncated to len(a)."""
    n = len(a)
    out = [_ZERO] * n
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j in range(n - i):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return tuple(out)


def free_word_mul(ta, tb, maxdeg):
    """Concatenation product of two sparse word->coeff dicts.

    Words are tuples; the product of words is concatenation, and any
    result longer than ``maxdeg`` is dropped (silent truncation, as the
    series type documents).
    """
    out = {}
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


def rref_fraction(rows, ncols):
    """In-place reduced row echelon form over Fraction.

    ``rows`` is a list of lists (each of length ``ncols``).  Returns the
    list of pivot column indices; ``rows`` is mutated to RREF with zero
    rows removed.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        row_r = rows[r]
        if inv != 1:
            for j in range(c, ncols):
                if row_r[j]:
                    row_r[j] *= inv
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f:
                row_i = rows[i]
                for j in range(c, ncols):
                    if row_r[j]:
                        row_i[j] -= f * row_r[j]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    del rows[r:]
    return pivots
