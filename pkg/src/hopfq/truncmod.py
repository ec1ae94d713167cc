"""Exact arithmetic over Q and Q[h]/(h^N), and finite-rank filtered linear algebra.

Everything downstream is built on three types:

* ``TruncSeries`` -- an element of Q[h]/(h^N), a tuple of N exact rationals.
* ``HModule``     -- a free module over Q[h]/(h^N) with named, degree-tagged
  basis labels.  Labels are always tuples so that tensor products flatten.
* ``HMap``        -- a sparse linear map between HModules, stored
  column-major, carrying a validity degree: the largest total input degree
  for which the map is exact under the active truncation.  Composing or
  applying past the budget raises ``BudgetExceededError`` instead of
  silently returning a wrong answer.

No floating point appears anywhere; every equality check is exact.
"""

from __future__ import annotations

from fractions import Fraction

from ._kernels import ts_mul as _ts_mul

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class TruncError(Exception):
    pass


class OrderMismatchError(TruncError):
    pass


class BasisMismatchError(TruncError):
    pass


class BudgetExceededError(TruncError):
    pass


class NonUnitError(TruncError):
    pass


class PreconditionError(TruncError):
    pass


def rat(x) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def rat_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


class TruncSeries:
    """Element of Q[h]/(h^N); immutable."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs=()):
        cs = [_ZERO] * order
        for i, c in enumerate(coeffs):
            if i >= order:
                break
            cs[i] = rat(c)
        self.order = order
        self.coeffs = tuple(cs)

    @staticmethod
    def const(order: int, value) -> "TruncSeries":
        return TruncSeries(order, (rat(value),))

    @staticmethod
    def hbar(order: int, power: int = 1) -> "TruncSeries":
        cs = [_ZERO] * order
        if power < order:
            cs[power] = _ONE
        return TruncSeries(order, cs)

    def _chk(self, other: "TruncSeries"):
        if self.order != other.order:
            raise OrderMismatchError(f"orders {self.order} != {other.order}")

    def __add__(self, other):
        self._chk(other)
        return TruncSeries(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._chk(other)
        return TruncSeries(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return TruncSeries(self.order, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            self._chk(other)
            return TruncSeries(self.order, _ts_mul(self.coeffs, other.coeffs))
        return TruncSeries(self.order, [a * rat(other) for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, TruncSeries)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int:
        """Largest k with self in h^k * R; equals order for 0."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return self.order

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by h^k."""
        if k == 0:
            return self
        return TruncSeries(self.order, (_ZERO,) * k + self.coeffs[: self.order - k])

    def divide_hbar(self, k: int) -> "TruncSeries":
        """Exact division by h^k; requires valuation >= k.

        The top k coefficients of the result are not determined by self
        (they sit above the truncation); they are set to 0, which is exact
        whenever the result multiplies something of valuation >= k, as in
        the full-pivot elimination below.
        """
        if k == 0:
            return self
        if self.valuation() < k:
            raise PreconditionError("not divisible by h^%d" % k)
        return TruncSeries(self.order, self.coeffs[k:] + (_ZERO,) * k)

    def invert(self) -> "TruncSeries":
        if not self.coeffs[0]:
            raise NonUnitError("constant term is zero")
        inv0 = 1 / self.coeffs[0]
        out = [inv0] + [_ZERO] * (self.order - 1)
        for k in range(1, self.order):
            s = _ZERO
            for i in range(1, k + 1):
                if self.coeffs[i]:
                    s += self.coeffs[i] * out[k - i]
            out[k] = -inv0 * s
        return TruncSeries(self.order, out)

    def exp(self) -> "TruncSeries":
        if self.coeffs[0]:
            raise PreconditionError("exp needs zero constant term")
        out = TruncSeries.const(self.order, 1)
        term = TruncSeries.const(self.order, 1)
        for k in range(1, self.order):
            term = term * self * Fraction(1, k)
            out = out + term
        return out

    def log(self) -> "TruncSeries":
        if self.coeffs[0] != 1:
            raise PreconditionError("log needs constant term 1")
        u = self - TruncSeries.const(self.order, 1)
        out = TruncSeries(self.order)
        term = TruncSeries.const(self.order, 1)
        for k in range(1, self.order):
            term = term * u
            out = out + term * Fraction((-1) ** (k + 1), k)
        return out

    def to_json(self):
        return [rat_str(c) for c in self.coeffs]

    @staticmethod
    def from_json(data, order=None):
        if order is None:
            order = len(data)
        return TruncSeries(order, [rat(c) for c in data])

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(rat_str(c) if i == 0 else f"{rat_str(c)}*h^{i}")
        return " + ".join(parts) if parts else "0"


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


def series_invert(a: TruncSeries) -> TruncSeries:
    return a.invert()


def series_exp(a: TruncSeries) -> TruncSeries:
    return a.exp()


def series_log(a: TruncSeries) -> TruncSeries:
    return a.log()


# ---------------------------------------------------------------------------
# Modules


def _as_label(x):
    return x if isinstance(x, tuple) else (x,)


class HModule:
    """Free module over Q[h]/(h^N) with tuple labels and degree tags.

    ``annihilators`` marks torsion generators produced by quotients: a
    label with annihilator k represents a copy of R/(h^k).
    """

    __slots__ = ("order", "basis", "degrees", "annihilators", "_index")

    def __init__(self, order: int, basis, degrees=None, annihilators=None):
        basis = tuple(_as_label(b) for b in basis)
        if len(set(basis)) != len(basis):
            raise BasisMismatchError("duplicate basis labels")
        self.order = order
        self.basis = basis
        self.degrees = {_as_label(k): int(v) for k, v in (degrees or {}).items()}
        self.annihilators = dict(annihilators or {})
        self._index = {b: i for i, b in enumerate(basis)}

    def degree(self, label) -> int:
        return self.degrees.get(label, 0)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, label):
        return label in self._index

    def index(self, label) -> int:
        return self._index[label]

    def __eq__(self, other):
        return (
            isinstance(other, HModule)
            and self.order == other.order
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.order, self.basis))

    def __repr__(self):
        return f"HModule(order={self.order}, dim={self.dim})"


def unit_module(order: int) -> HModule:
    return HModule(order, [()])


def tensor_module(a: HModule, b: HModule) -> HModule:
    if a.order != b.order:
        raise OrderMismatchError("tensor of modules with different orders")
    basis = []
    degrees = {}
    for x in a.basis:
        dx = a.degree(x)
        for y in b.basis:
            lab = x + y
            basis.append(lab)
            d = dx + b.degree(y)
            if d:
                degrees[lab] = d
    return HModule(a.order, basis, degrees)


def tensor_power(m: HModule, k: int) -> HModule:
    out = unit_module(m.order)
    for _ in range(k):
        out = tensor_module(out, m)
    return out


# Vectors are sparse dicts label -> TruncSeries.


def vec_zero() -> dict:
    return {}


def vec_basis(module: HModule, label, coeff=None) -> dict:
    label = _as_label(label)
    if label not in module:
        raise BasisMismatchError(f"label {label} not in module")
    return {label: coeff if coeff is not None else TruncSeries.const(module.order, 1)}


def vec_add_into(dst: dict, src: dict, coeff: TruncSeries | None = None):
    for lab, c in src.items():
        v = c if coeff is None else c * coeff
        if not v:
            continue
        cur = dst.get(lab)
        if cur is None:
            dst[lab] = v
        else:
            cur = cur + v
            if cur:
                dst[lab] = cur
            else:
                del dst[lab]
    return dst


def vec_scale(v: dict, coeff) -> dict:
    out = {}
    for lab, c in v.items():
        w = c * coeff
        if w:
            out[lab] = w
    return out


def vec_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for lab, c in b.items():
        cur = out.get(lab)
        if cur is None:
            out[lab] = -c
        else:
            cur = cur - c
            if cur:
                out[lab] = cur
            else:
                del out[lab]
    return out


def vec_eq(a: dict, b: dict) -> bool:
    return not vec_sub(a, b)


def vec_degree(module: HModule, v: dict) -> int:
    return max((module.degree(lab) for lab in v), default=0)


# ---------------------------------------------------------------------------
# Maps


class HMap:
    """Sparse linear map, column-major: cols[col_label][row_label] = series.

    ``validity`` is the exactness budget (None means unbounded): applying
    the map to a vector containing a basis label of degree > validity
    raises instead of returning a possibly truncated answer.
    """

    __slots__ = ("domain", "codomain", "cols", "validity", "_raise")

    def __init__(self, domain: HModule, codomain: HModule, cols=None, validity=None):
        if domain.order != codomain.order:
            raise OrderMismatchError("map between modules of different orders")
        self.domain = domain
        self.codomain = codomain
        self.cols = {}
        self.validity = validity
        self._raise = None
        for c, col in (cols or {}).items():
            c = _as_label(c)
            if c not in domain:
                raise BasisMismatchError(f"column label {c} not in domain")
            clean = {}
            for r, val in col.items():
                r = _as_label(r)
                if r not in codomain:
                    raise BasisMismatchError(f"row label {r} not in codomain")
                if val:
                    clean[r] = val
            if clean:
                self.cols[c] = clean

    @property
    def order(self) -> int:
        return self.domain.order

    def degree_raise(self) -> int:
        """Max over entries of (output degree - input degree); >= 0."""
        if self._raise is None:
            r = 0
            for c, col in self.cols.items():
                dc = self.domain.degree(c)
                for row in col:
                    r = max(r, self.codomain.degree(row) - dc)
            self._raise = r
        return self._raise

    def entry(self, row, col) -> TruncSeries:
        col = _as_label(col)
        row = _as_label(row)
        v = self.cols.get(col, {}).get(row)
        return v if v is not None else TruncSeries(self.order)

    def apply(self, vec: dict) -> dict:
        if self.validity is not None:
            for lab in vec:
                if self.domain.degree(lab) > self.validity:
                    raise BudgetExceededError(
                        f"input degree {self.domain.degree(lab)} exceeds validity "
                        f"{self.validity}"
                    )
        out = {}
        for lab, coeff in vec.items():
            col = self.cols.get(lab)
            if col:
                vec_add_into(out, col, coeff)
        return out

    def __call__(self, vec: dict) -> dict:
        return self.apply(vec)

    def is_zero(self) -> bool:
        return not self.cols

    def to_triplets(self):
        out = []
        for c in sorted(self.cols, key=str):
            for r in sorted(self.cols[c], key=str):
                out.append(["|".join(map(str, r)), "|".join(map(str, c)),
                            self.cols[c][r].to_json()])
        return out

    def __repr__(self):
        n = sum(len(c) for c in self.cols.values())
        return f"HMap({self.domain.dim}->{self.codomain.dim}, {n} entries, validity={self.validity})"


def identity_map(module: HModule, validity=None) -> HMap:
    one = TruncSeries.const(module.order, 1)
    return HMap(module, module, {b: {b: one} for b in module.basis}, validity)


def zero_map(domain: HModule, codomain: HModule) -> HMap:
    return HMap(domain, codomain, {})


def hmap_from_columns(domain: HModule, codomain: HModule, colfn, validity=None) -> HMap:
    cols = {}
    for b in domain.basis:
        v = colfn(b)
        if v:
            cols[b] = v
    return HMap(domain, codomain, cols, validity)


def _merge_validity(*vals):
    vs = [v for v in vals if v is not None]
    return min(vs) if vs else None


def hmap_compose(f: HMap, g: HMap) -> HMap:
    """f after g."""
    if g.codomain != f.domain:
        raise BasisMismatchError("compose: domain/codomain mismatch")
    validity = _merge_validity(
        g.validity, None if f.validity is None else f.validity - g.degree_raise()
    )
    cols = {}
    for c, col in g.cols.items():
        out = {}
        for r, val in col.items():
            fcol = f.cols.get(r)
            if fcol:
                vec_add_into(out, fcol, val)
        if out:
            cols[c] = out
    return HMap(g.domain, f.codomain, cols, validity)


def hmap_add(f: HMap, g: HMap) -> HMap:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise BasisMismatchError("add: shape mismatch")
    cols = {c: dict(col) for c, col in f.cols.items()}
    for c, col in g.cols.items():
        vec_add_into(cols.setdefault(c, {}), col)
        if not cols[c]:
            del cols[c]
    return HMap(f.domain, f.codomain, cols, _merge_validity(f.validity, g.validity))


def hmap_scale(f: HMap, coeff) -> HMap:
    cols = {}
    for c, col in f.cols.items():
        sc = vec_scale(col, coeff)
        if sc:
            cols[c] = sc
    return HMap(f.domain, f.codomain, cols, f.validity)


def hmap_sub(f: HMap, g: HMap) -> HMap:
    return hmap_add(f, hmap_scale(g, Fraction(-1)))


def hmap_tensor(f: HMap, g: HMap) -> HMap:
    if f.order != g.order:
        raise OrderMismatchError("tensor of maps with different orders")
    dom = tensor_module(f.domain, g.domain)
    cod = tensor_module(f.codomain, g.codomain)
    cols = {}
    for cf, colf in f.cols.items():
        for cg, colg in g.cols.items():
            col = {}
            for rf, vf in colf.items():
                for rg, vg in colg.items():
                    v = vf * vg
                    if v:
                        col[rf + rg] = v
            if col:
                cols[cf + cg] = col
    return HMap(dom, cod, cols, _merge_validity(f.validity, g.validity))


def hmap_eq(f: HMap, g: HMap) -> bool:
    if f.domain != g.domain or f.codomain != g.codomain:
        return False
    labs = set(f.cols) | set(g.cols)
    return all(vec_eq(f.cols.get(c, {}), g.cols.get(c, {})) for c in labs)


def neumann_invert(f: HMap) -> HMap:
    """Invert f = id + r with r h-divisible; exact via sum of (-r)^k, k<N."""
    if f.domain != f.codomain:
        raise BasisMismatchError("neumann_invert needs an endomorphism")
    idm = identity_map(f.domain)
    r = hmap_sub(f, idm)
    for col in r.cols.values():
        for v in col.values():
            if v.valuation() < 1:
                raise PreconditionError("f - id is not h-divisible")
    out = identity_map(f.domain, validity=f.validity)
    power = idm
    for _ in range(1, f.order):
        power = hmap_compose(hmap_scale(r, Fraction(-1)), power)
        if power.is_zero():
            break
        out = hmap_add(out, power)
    out.validity = f.validity
    return out


def endo_log(f: HMap) -> HMap:
    """log of f = id + r with r h-divisible; truncated series, exact."""
    if f.domain != f.codomain:
        raise BasisMismatchError("endo_log needs an endomorphism")
    r = hmap_sub(f, identity_map(f.domain))
    for col in r.cols.values():
        for v in col.values():
            if v.valuation() < 1:
                raise PreconditionError("f - id is not h-divisible")
    out = zero_map(f.domain, f.domain)
    power = identity_map(f.domain)
    for k in range(1, f.order):
        power = hmap_compose(r, power)
        if power.is_zero():
            break
        out = hmap_add(out, hmap_scale(power, Fraction((-1) ** (k + 1), k)))
    out.validity = f.validity
    return out


def endo_exp(f: HMap) -> HMap:
    """exp of an h-divisible endomorphism; truncated series, exact."""
    if f.domain != f.codomain:
        raise BasisMismatchError("endo_exp needs an endomorphism")
    for col in f.cols.values():
        for v in col.values():
            if v.valuation() < 1:
                raise PreconditionError("f is not h-divisible")
    out = identity_map(f.domain, validity=f.validity)
    power = identity_map(f.domain)
    for k in range(1, f.order):
        power = hmap_compose(f, power)
        if power.is_zero():
            break
        out = hmap_add(out, hmap_scale(power, Fraction(1, _fact(k))))
    out.validity = f.validity
    return out


def _fact(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# Quotients over Q[h]/(h^N)


class QuotientResult:
    __slots__ = ("module", "projection", "section", "annihilators")

    def __init__(self, module, projection, section, annihilators):
        self.module = module
        self.projection = projection
        self.section = section
        self.annihilators = annihilators


def submodule_quotient(module: HModule, gens) -> QuotientResult:
    """Quotient of a free module by the span of ``gens``.

    Diagonalizes the generator matrix to entries h^k by full-pivot row and
    column elimination (the base ring is a local principal quotient ring),
    returning the quotient basis, the projection, and -- when the quotient
    is free -- a section.  Torsion generators keep their annihilator
    exponent in ``module.annihilators``.
    """
    N = module.order
    n = module.dim
    gens = [dict(g) for g in gens]
    k = len(gens)
    A = [[TruncSeries(N) for _ in range(k)] for _ in range(n)]
    for j, g in enumerate(gens):
        for lab, c in g.items():
            A[module.index(_as_label(lab))][j] = c

    one = TruncSeries.const(N, 1)
    U = [[one if i == j else TruncSeries(N) for j in range(n)] for i in range(n)]
    Uinv = [[one if i == j else TruncSeries(N) for j in range(n)] for i in range(n)]

    pivot_rows = {}
    done_rows: set = set()
    done_cols: set = set()
    while True:
        best = None
        for i in range(n):
            if i in done_rows:
                continue
            for j in range(k):
                if j in done_cols:
                    continue
                v = A[i][j].valuation()
                if v < N and (best is None or v < best[0]):
                    best = (v, i, j)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        val, pi, pj = best
        unit = A[pi][pj].divide_hbar(val)
        uinv = unit.invert()
        # normalize pivot row: multiply row pi by uinv
        for j in range(k):
            A[pi][j] = A[pi][j] * uinv
        for j in range(n):
            U[pi][j] = U[pi][j] * uinv
            Uinv[j][pi] = Uinv[j][pi] * unit
        # clear the pivot column (row ops, tracked in U / Uinv)
        for i in range(n):
            if i == pi:
                continue
            e = A[i][pj]
            if not e:
                continue
            f = e.divide_hbar(val)  # exact: all remaining entries have val >= `val`
            for j in range(k):
                A[i][j] = A[i][j] - f * A[pi][j]
            for j in range(n):
                U[i][j] = U[i][j] - f * U[pi][j]
                Uinv[j][pi] = Uinv[j][pi] + f * Uinv[j][i]
        # clear the pivot row (column ops on A only; span unchanged)
        for j in range(k):
            if j == pj:
                continue
            e = A[pi][j]
            if not e:
                continue
            f = e.divide_hbar(val)
            for i in range(n):
                A[i][j] = A[i][j] - f * A[i][pj]
        pivot_rows[pi] = val
        done_rows.add(pi)
        done_cols.add(pj)

    labels = []
    annihilators = {}
    proj_rows = []  # (new label, original row index)
    for i in range(n):
        v = pivot_rows.get(i)
        if v == 0:
            continue  # killed
        lab = (f"q{len(labels)}",)
        labels.append(lab)
        proj_rows.append((lab, i))
        if v is not None:
            annihilators[lab] = v
    qmod = HModule(N, labels, annihilators=annihilators)

    cols = {}
    for ci, b in enumerate(module.basis):
        col = {}
        for lab, i in proj_rows:
            c = U[i][ci]
            ann = annihilators.get(lab)
            if ann is not None:
                c = TruncSeries(N, c.coeffs[:ann])
            if c:
                col[lab] = c
        if col:
            cols[b] = col
    projection = HMap(module, qmod, cols)

    section = None
    if not annihilators:
        scols = {}
        for lab, i in proj_rows:
            col = {}
            for r in range(n):
                c = Uinv[r][i]
                if c:
                    col[module.basis[r]] = c
            if col:
                scols[lab] = col
        section = HMap(qmod, module, scols)
    return QuotientResult(qmod, projection, section, annihilators)


def quotient_reduce(qmod: HModule, vec: dict) -> dict:
    """Reduce quotient coordinates modulo their annihilator exponents."""
    out = {}
    for lab, c in vec.items():
        ann = qmod.annihilators.get(lab)
        if ann is not None:
            c = TruncSeries(qmod.order, c.coeffs[:ann])
        if c:
            out[lab] = c
    return out


def hmap_kernel(f: HMap) -> list:
    """All kernel generators of f over Q[h]/(h^N).

    Flattens to the block-Toeplitz rational system over the h-coefficients
    (equivalent to solving mod h and lifting degree by degree) and returns
    a list of domain vectors spanning the kernel.
    """
    from . import linalg

    N = f.order
    dom = f.domain.basis
    ncols = len(dom) * N
    rows_map: dict = {}
    for ci, b in enumerate(dom):
        col = f.cols.get(b, {})
        for r, val in col.items():
            for i, c in enumerate(val.coeffs):
                if not c:
                    continue
                for j in range(N - i):
                    # h^j * column contributes at output power i + j
                    rows_map.setdefault((r, i + j), {})[ci * N + j] = (
                        rows_map.get((r, i + j), {}).get(ci * N + j, _ZERO) + c
                    )
    rows = []
    for _, rowdict in rows_map.items():
        row = [_ZERO] * ncols
        for j, c in rowdict.items():
            row[j] = c
        rows.append(row)
    null = linalg.nullspace(rows, ncols)
    out = []
    for v in null:
        vec = {}
        for ci, b in enumerate(dom):
            coeffs = v[ci * N : (ci + 1) * N]
            t = TruncSeries(N, coeffs)
            if t:
                vec[b] = t
        if vec:
            out.append(vec)
    return out
