"""Lazy linear operators on sparse vectors over tensor-product labels.

The quantization pipelines compose many structure maps on tensor powers
whose total dimension is far too large to materialize, so operators are
represented by memoized column functions and only the final structure
maps are frozen into HMaps.  Labels are flat tuples of base-module
labels; a base label is always a 1-tuple, so tuple position == slot.

LinOp supports +, -, composition (``a * b`` applies b first), scalar
multiplication by Fraction/TruncSeries, exp/log of h-divisible
operators, and evaluation of NCSeries at operator arguments.
"""

from __future__ import annotations

from fractions import Fraction

from .freealg import NCSeries
from .truncmod import (
    HMap,
    PreconditionError,
    TruncSeries,
    hmap_from_columns,
    vec_add_into,
    vec_scale,
)


class LinOp:
    __slots__ = ("order", "_colfn", "_memo")

    def __init__(self, order: int, colfn):
        self.order = order
        self._colfn = colfn
        self._memo = {}

    def col(self, label) -> dict:
        v = self._memo.get(label)
        if v is None:
            v = self._colfn(label)
            self._memo[label] = v
        return v

    def __call__(self, vec: dict) -> dict:
        out = {}
        for lab, coeff in vec.items():
            c = self.col(lab)
            if c:
                vec_add_into(out, c, coeff)
        return out

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, LinOp):
            return LinOp(self.order, lambda lab: self(other.col(lab)))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, coeff):
        if isinstance(coeff, int):
            coeff = Fraction(coeff)
        return LinOp(self.order, lambda lab: vec_scale(self.col(lab), coeff))

    def __add__(self, other):
        def colfn(lab):
            out = dict(self.col(lab))
            vec_add_into(out, other.col(lab))
            return out

        return LinOp(self.order, colfn)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def __neg__(self):
        return self.scale(Fraction(-1))

    @staticmethod
    def identity(order: int) -> "LinOp":
        one = TruncSeries.const(order, 1)
        return LinOp(order, lambda lab: {lab: one})

    @staticmethod
    def zero(order: int) -> "LinOp":
        return LinOp(order, lambda lab: {})

    @staticmethod
    def perm(order: int, p) -> "LinOp":
        """Output slot k carries input slot p[k]."""
        p = tuple(p)
        one = TruncSeries.const(order, 1)
        return LinOp(order, lambda lab: {tuple(lab[i] for i in p): one})

    @staticmethod
    def from_hmap(f: HMap) -> "LinOp":
        return LinOp(f.order, lambda lab: dict(f.cols.get(lab, {})))

    @staticmethod
    def on_slots(order: int, start: int, width: int, colfn) -> "LinOp":
        """Apply a narrow map at slots [start, start+width); pass the rest.

        ``colfn`` maps a width-tuple to a Vec over (possibly different
        width) tuples.
        """

        def col(lab):
            mid = colfn(lab[start : start + width])
            out = {}
            head, tail = lab[:start], lab[start + width :]
            for m, c in mid.items():
                out[head + m + tail] = c
            return out

        return LinOp(order, col)

    # -- analytic ops -------------------------------------------------------

    def exp(self) -> "LinOp":
        """Operator exponential; terminates because powers gain h each step."""

        def col(lab):
            one = TruncSeries.const(self.order, 1)
            out = {lab: one}
            term = {lab: one}
            for k in range(1, self.order + 1):
                term = vec_scale(self(term), Fraction(1, k))
                if not term:
                    break
                vec_add_into(out, term)
            else:
                if term:
                    raise PreconditionError("exp did not terminate: not h-divisible")
            return out

        return LinOp(self.order, col)

    def log_from_identity(self) -> "LinOp":
        """log(self) for self = id + r with r h-divisible."""
        r = self - LinOp.identity(self.order)

        def col(lab):
            out = {}
            term = {lab: TruncSeries.const(self.order, 1)}
            for k in range(1, self.order + 1):
                term = r(term)
                if not term:
                    break
                vec_add_into(out, vec_scale(term, Fraction((-1) ** (k + 1), k)))
            else:
                if term:
                    raise PreconditionError("log did not terminate: not h-divisible")
            return out

        return LinOp(self.order, col)

    def to_hmap(self, domain, codomain, validity=None) -> HMap:
        return hmap_from_columns(domain, codomain, self.col, validity)


def series_op(series: NCSeries, img0: LinOp, img1: LinOp, order: int) -> LinOp:
    """Evaluate a two-generator NCSeries at operator arguments.

    Used for a^Phi = Phi(t_12, t_23) and for GT-series deformations; the
    arguments must be h-divisible so that the sum terminates under
    truncation (words of length >= order contribute 0).
    """
    images = {0: img0, 1: img1}
    ident = LinOp.identity(order)

    def col(lab):
        out = {}
        cache = {(): {lab: TruncSeries.const(order, 1)}}

        def vec_for(w):
            v = cache.get(w)
            if v is None:
                v = images[w[-1]](vec_for(w[:-1]))
                cache[w] = v
            return v

        for w, c in series.terms.items():
            if len(w) >= order and w:
                continue  # h^{|w|} = 0
            vec_add_into(out, vec_scale(vec_for(w), c))
        return out

    del ident
    return LinOp(order, col)


def op_eq_on(op_a: LinOp, op_b: LinOp, labels) -> bool:
    from .truncmod import vec_eq

    return all(vec_eq(op_a.col(lab), op_b.col(lab)) for lab in labels)
