"""Dense exact rational linear algebra on top of the RREF kernel."""

from fractions import Fraction

from ._kernels import rref_fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def rref(rows, ncols):
    """Reduce ``rows`` in place; returns pivot column indices."""
    return rref_fraction(rows, ncols)


def rank(rows, ncols) -> int:
    work = [list(r) for r in rows]
    return len(rref_fraction(work, ncols))


def nullspace(rows, ncols):
    """Basis of the right kernel of the matrix given as a list of rows."""
    work = [list(r) for r in rows]
    pivots = rref_fraction(work, ncols)
    pivset = set(pivots)
    out = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [_ZERO] * ncols
        v[free] = _ONE
        for r, p in enumerate(pivots):
            if work[r][free]:
                v[p] = -work[r][free]
        out.append(v)
    return out


def solve_columns(cols, rhs):
    """Solve sum_i x_i * cols[i] = rhs exactly; free unknowns are set to 0.

    ``cols`` are sparse dicts keyed by arbitrary hashables, ``rhs`` too.
    Returns a list of Fractions, or None if the system is inconsistent.
    """
    keys = set(rhs)
    for c in cols:
        keys.update(c)
    keys = sorted(keys, key=repr)
    n = len(cols)
    rows = []
    for k in keys:
        row = [c.get(k, _ZERO) for c in cols]
        row.append(rhs.get(k, _ZERO))
        if any(row):
            rows.append(row)
    pivots = rref_fraction(rows, n + 1)
    if n in pivots:
        return None
    x = [_ZERO] * n
    for r, p in enumerate(pivots):
        x[p] = rows[r][n]
    return x
