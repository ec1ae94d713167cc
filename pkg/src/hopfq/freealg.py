"""Truncated free associative series, free Lie (Lyndon) bases, and the
normal-ordered truncated Drinfeld-Kohno algebras U(t3), U(t4).

NCSeries is a formal series in non-commuting generators truncated past a
fixed total degree; words are tuples of generator indices and coefficients
are exact rationals.  Degree truncation is silent in multiplication only,
as documented; equality is exact.

U(t3) and U(t4) are realized by the semidirect splittings

    t3 = Q*c (+) f2,   c = t12+t13+t23 central,  f2 free on t12, t13
    t4 = f3 (x) t3,    f3 free on t14, t24, t34 (an ideal)

so normal-ordered monomials are (f3 word, c power, f2 word); U of a free
Lie algebra is the tensor algebra, hence plain words index the PBW basis.
"""

from __future__ import annotations

from fractions import Fraction

from ._kernels import free_word_mul
from .truncmod import PreconditionError, rat, rat_str

_ZERO = Fraction(0)
_ONE = Fraction(1)


class NCSeries:
    """Sparse truncated series in non-commuting generators."""

    __slots__ = ("alphabet", "max_degree", "terms")

    def __init__(self, alphabet, max_degree, terms=None):
        self.alphabet = tuple(alphabet)
        self.max_degree = max_degree
        self.terms = {}
        for w, c in (terms or {}).items():
            c = rat(c)
            if c and len(w) <= max_degree:
                self.terms[tuple(w)] = c

    @staticmethod
    def unit(alphabet, max_degree, coeff=1) -> "NCSeries":
        return NCSeries(alphabet, max_degree, {(): rat(coeff)})

    @staticmethod
    def gen(alphabet, max_degree, i: int) -> "NCSeries":
        return NCSeries(alphabet, max_degree, {(i,): _ONE})

    def _chk(self, other: "NCSeries"):
        if self.alphabet != other.alphabet or self.max_degree != other.max_degree:
            raise PreconditionError("alphabet or degree mismatch")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NCSeries.unit(self.alphabet, self.max_degree, other)
        self._chk(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            v = terms.get(w, _ZERO) + c
            if v:
                terms[w] = v
            else:
                terms.pop(w, None)
        return NCSeries(self.alphabet, self.max_degree, terms)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NCSeries.unit(self.alphabet, self.max_degree, other)
        return self + (other * Fraction(-1))

    def __neg__(self):
        return self * Fraction(-1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NCSeries(
                self.alphabet,
                self.max_degree,
                {w: c * rat(other) for w, c in self.terms.items()},
            )
        self._chk(other)
        return NCSeries(
            self.alphabet,
            self.max_degree,
            free_word_mul(self.terms, other.terms, self.max_degree),
        )

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        return (
            isinstance(other, NCSeries)
            and self.alphabet == other.alphabet
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.alphabet, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((), _ZERO)

    def valuation(self) -> int:
        return min((len(w) for w in self.terms), default=self.max_degree + 1)

    def component(self, d: int) -> "NCSeries":
        return NCSeries(
            self.alphabet,
            self.max_degree,
            {w: c for w, c in self.terms.items() if len(w) == d},
        )

    def truncated(self, d: int) -> "NCSeries":
        return NCSeries(
            self.alphabet, d, {w: c for w, c in self.terms.items() if len(w) <= d}
        )

    def coefficient(self, word) -> Fraction:
        return self.terms.get(tuple(word), _ZERO)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            name = "".join(self.alphabet[i] for i in w) or "1"
            bits.append(f"{rat_str(self.terms[w])}*{name}")
        return " + ".join(bits[:12]) + (" + ..." if len(bits) > 12 else "")

    def to_json(self):
        return {
            "alphabet": list(self.alphabet),
            "max_degree": self.max_degree,
            "terms": [
                ["".join(self.alphabet[i] for i in w), rat_str(c)]
                for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))
            ],
        }

    @staticmethod
    def from_json(data) -> "NCSeries":
        alphabet = tuple(data["alphabet"])
        idx = {a: i for i, a in enumerate(alphabet)}
        terms = {}
        for wstr, c in data["terms"]:
            terms[tuple(idx[ch] for ch in wstr)] = rat(c)
        return NCSeries(alphabet, data["max_degree"], terms)


def nc_mul(a: NCSeries, b: NCSeries) -> NCSeries:
    return a * b


def nc_exp(a: NCSeries) -> NCSeries:
    if a.constant_term():
        raise PreconditionError("nc_exp needs zero constant term")
    out = NCSeries.unit(a.alphabet, a.max_degree)
    term = out
    for k in range(1, a.max_degree + 1):
        term = term * a * Fraction(1, k)
        if not term:
            break
        out = out + term
    return out


def nc_log(a: NCSeries) -> NCSeries:
    if a.constant_term() != 1:
        raise PreconditionError("nc_log needs constant term 1")
    u = a - 1
    out = NCSeries(a.alphabet, a.max_degree)
    term = NCSeries.unit(a.alphabet, a.max_degree)
    for k in range(1, a.max_degree + 1):
        term = term * u
        if not term:
            break
        out = out + term * Fraction((-1) ** (k + 1), k)
    return out


def nc_invert(a: NCSeries) -> NCSeries:
    c0 = a.constant_term()
    if not c0:
        raise PreconditionError("non-unit: constant term is zero")
    u = a * (1 / c0) - 1
    out = NCSeries.unit(a.alphabet, a.max_degree)
    term = out
    for _ in range(a.max_degree):
        term = term * u * Fraction(-1)
        if not term:
            break
        out = out + term
    return out * (1 / c0)


def commutator(a: NCSeries, b: NCSeries) -> NCSeries:
    return a * b - b * a


# --- tensor square, coproduct, group-likeness ------------------------------


class NCSeries2:
    """Element of the tensor square of the truncated free algebra."""

    __slots__ = ("alphabet", "max_degree", "terms")

    def __init__(self, alphabet, max_degree, terms=None):
        self.alphabet = tuple(alphabet)
        self.max_degree = max_degree
        self.terms = {}
        for (w1, w2), c in (terms or {}).items():
            c = rat(c)
            if c and len(w1) + len(w2) <= max_degree:
                self.terms[(tuple(w1), tuple(w2))] = c

    def __add__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            v = terms.get(k, _ZERO) + c
            if v:
                terms[k] = v
            else:
                terms.pop(k, None)
        return NCSeries2(self.alphabet, self.max_degree, terms)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NCSeries2(
                self.alphabet,
                self.max_degree,
                {k: c * rat(other) for k, c in self.terms.items()},
            )
        out = {}
        md = self.max_degree
        for (a1, a2), ca in self.terms.items():
            la = len(a1) + len(a2)
            for (b1, b2), cb in other.terms.items():
                if la + len(b1) + len(b2) > md:
                    continue
                k = (a1 + b1, a2 + b2)
                v = out.get(k, _ZERO) + ca * cb
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return NCSeries2(self.alphabet, md, out)

    def __sub__(self, other):
        return self + (other * Fraction(-1))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, NCSeries2) and self.terms == other.terms


def coproduct(a: NCSeries) -> NCSeries2:
    """Algebra morphism with every generator primitive."""
    out = NCSeries2(a.alphabet, a.max_degree)
    gen_imgs = {
        i: NCSeries2(
            a.alphabet, a.max_degree, {((i,), ()): _ONE, ((), (i,)): _ONE}
        )
        for i in range(len(a.alphabet))
    }
    cache = {(): NCSeries2(a.alphabet, a.max_degree, {((), ()): _ONE})}

    def img(w):
        if w in cache:
            return cache[w]
        v = img(w[:-1]) * gen_imgs[w[-1]]
        cache[w] = v
        return v

    for w, c in a.terms.items():
        out = out + img(w) * c
    return out


def tensor_pair(a: NCSeries, b: NCSeries) -> NCSeries2:
    terms = {}
    md = a.max_degree
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            if len(w1) + len(w2) <= md:
                terms[(w1, w2)] = terms.get((w1, w2), _ZERO) + c1 * c2
    return NCSeries2(a.alphabet, md, terms)


def is_grouplike(a: NCSeries) -> bool:
    if a.constant_term() != 1:
        return False
    return not (coproduct(a) - tensor_pair(a, a))


def is_primitive(a: NCSeries) -> bool:
    one = NCSeries.unit(a.alphabet, a.max_degree)
    return not (coproduct(a) - (tensor_pair(a, one) + tensor_pair(one, a)))


# --- substitution, T_G, diamond -------------------------------------------


def substitute(a: NCSeries, images: dict) -> NCSeries:
    """Unique algebra-morphism extension of generator -> image.

    Every image must have zero constant term (filtration positivity), so
    the substituted series is well defined under truncation.
    """
    for i in range(len(a.alphabet)):
        img = images.get(i)
        if img is None:
            raise PreconditionError(f"no image for generator {i}")
        if img.constant_term():
            raise PreconditionError("image has nonzero constant term")
    some = next(iter(images.values()))
    out = NCSeries(some.alphabet, some.max_degree)
    cache = {(): NCSeries.unit(some.alphabet, some.max_degree)}

    def img(w):
        if w in cache:
            return cache[w]
        v = img(w[:-1]) * images[w[-1]]
        cache[w] = v
        return v

    for w, c in sorted(a.terms.items(), key=lambda t: (len(t[0]), t[0])):
        out = out + img(w) * c
    return out


def t_g(g: NCSeries, s: NCSeries) -> NCSeries:
    """The algebra morphism A -> A, B -> G^{-1} B G applied to s."""
    ginv = nc_invert(g)
    a_img = NCSeries.gen(g.alphabet, g.max_degree, 0)
    b_img = ginv * NCSeries.gen(g.alphabet, g.max_degree, 1) * g
    return substitute(s, {0: a_img, 1: b_img})


def t_g_inverse(g: NCSeries, s: NCSeries) -> NCSeries:
    """Inverse of t_g, computed degree by degree on the B-image."""
    beta = NCSeries.gen(g.alphabet, g.max_degree, 1)
    a_img = NCSeries.gen(g.alphabet, g.max_degree, 0)
    for _ in range(g.max_degree + 1):
        err = t_g(g, beta) - NCSeries.gen(g.alphabet, g.max_degree, 1)
        if not err:
            break
        beta = beta - err
    else:
        raise PreconditionError("t_g inverse iteration did not converge")
    return substitute(s, {0: a_img, 1: beta})


def diamond(g1: NCSeries, g2: NCSeries) -> NCSeries:
    """g1 * T_{g1}(g2); associative with unit 1 on group-like elements."""
    if not (is_grouplike(g1) and is_grouplike(g2)):
        raise PreconditionError("diamond needs group-like inputs")
    return g1 * t_g(g1, g2)


def inv_diamond(g: NCSeries) -> NCSeries:
    """Two-sided diamond inverse T_G^{-1}(G^{-1})."""
    if not is_grouplike(g):
        raise PreconditionError("inv_diamond needs a group-like input")
    return t_g_inverse(g, nc_invert(g))


# --- Lyndon bases ----------------------------------------------------------


def lyndon_words(n_letters: int, d: int):
    """Duval's algorithm: Lyndon words of length exactly d."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == d:
            out.append(tuple(w))
        while len(w) < d:
            w.append(w[-m])
        while w and w[-1] == n_letters - 1:
            w.pop()
    return [w for w in out if len(w) == d]


def _is_lyndon(w) -> bool:
    n = len(w)
    if n == 0:
        return False
    for i in range(1, n):
        if w[i:] <= w:
            return False
    return True


def _lyndon_factor(w):
    """Standard factorization w = uv with v the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if _is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise PreconditionError(f"{w} is not a Lyndon word of length >= 2")


def lyndon_bracketing(w):
    """Nested-pair representation of the standard bracketing of a Lyndon word."""
    if len(w) == 1:
        return w[0]
    u, v = _lyndon_factor(w)
    return (lyndon_bracketing(u), lyndon_bracketing(v))


def bracket_expand(expr, alphabet, max_degree) -> NCSeries:
    if isinstance(expr, int):
        return NCSeries.gen(alphabet, max_degree, expr)
    u = bracket_expand(expr[0], alphabet, max_degree)
    v = bracket_expand(expr[1], alphabet, max_degree)
    return commutator(u, v)


def lyndon_basis(alphabet, d: int):
    """Basis of the degree-d part of the free Lie algebra.

    Returns a list of (word, bracketing, NCSeries expansion).
    """
    if d < 1:
        raise PreconditionError("degree must be >= 1")
    alphabet = tuple(alphabet)
    out = []
    for w in lyndon_words(len(alphabet), d):
        br = lyndon_bracketing(w)
        out.append((w, br, bracket_expand(br, alphabet, max(d, 1))))
    return out


# --- generic series evaluation ---------------------------------------------


def eval_series(series: NCSeries, images: dict, one):
    """Evaluate an NCSeries at given generator images in any algebra.

    ``one`` is the unit of the target algebra; elements must support
    +, * and scalar multiplication by Fraction.  Word products are
    prefix-cached.
    """
    cache = {(): one}

    def img(w):
        v = cache.get(w)
        if v is None:
            v = img(w[:-1]) * images[w[-1]]
            cache[w] = v
        return v

    out = None
    for w, c in sorted(series.terms.items(), key=lambda t: (len(t[0]), t[0])):
        term = img(w) * c
        out = term if out is None else out + term
    if out is None:
        out = one * _ZERO
    return out


# ---------------------------------------------------------------------------
# Drinfeld-Kohno algebras


class DKAlgebra:
    """Truncated U(t3) or U(t4) in normal-ordered PBW form.

    Labels: strands=3 -> (cpow, f2word); strands=4 -> (f3word, cpow, f2word).
    f2 letters: 0 = t12, 1 = t13.  f3 letters: 0 = t14, 1 = t24, 2 = t34.
    """

    GEN_NAMES_3 = ("t12", "t13", "t23")
    GEN_NAMES_4 = ("t12", "t13", "t23", "t14", "t24", "t34")

    def __init__(self, strands: int, max_degree: int):
        if strands not in (3, 4):
            raise PreconditionError("strands must be 3 or 4")
        self.strands = strands
        self.max_degree = max_degree
        self._push_memo = {}
        # bracket table [g, a] for g in {t12, t13, c}, a in f3 letters,
        # values: list of (word over f3 letters, coeff)
        f3 = {
            ("t12", 0): [((0, 1), _ONE), ((1, 0), -_ONE)],   # [t12,t14]=[t14,t24]
            ("t12", 1): [((1, 0), _ONE), ((0, 1), -_ONE)],   # [t12,t24]=[t24,t14]
            ("t12", 2): [],
            ("t13", 0): [((0, 2), _ONE), ((2, 0), -_ONE)],   # [t13,t14]=[t14,t34]
            ("t13", 1): [],
            ("t13", 2): [((2, 0), _ONE), ((0, 2), -_ONE)],   # [t13,t34]=[t34,t14]
            ("t23", 0): [],
            ("t23", 1): [((1, 2), _ONE), ((2, 1), -_ONE)],   # [t23,t24]=[t24,t34]
            ("t23", 2): [((2, 1), _ONE), ((1, 2), -_ONE)],   # [t23,t34]=[t34,t24]
        }
        self._bracket_f2 = {
            (0, a): f3[("t12", a)] for a in range(3)
        }
        self._bracket_f2.update({(1, a): f3[("t13", a)] for a in range(3)})
        self._bracket_c = {
            a: [
                (w, c)
                for g in ("t12", "t13", "t23")
                for (w, c) in f3[(g, a)]
            ]
            for a in range(3)
        }

    # -- elements ---------------------------------------------------------

    def zero(self) -> "DKElement":
        return DKElement(self, {})

    def one(self) -> "DKElement":
        lab = ((), 0, ()) if self.strands == 4 else (0, ())
        return DKElement(self, {lab: _ONE})

    def gen(self, name: str) -> "DKElement":
        if self.strands == 3:
            if name == "t12":
                return DKElement(self, {(0, (0,)): _ONE})
            if name == "t13":
                return DKElement(self, {(0, (1,)): _ONE})
            if name == "t23":
                # t23 = c - t12 - t13
                return DKElement(
                    self, {(1, ()): _ONE, (0, (0,)): -_ONE, (0, (1,)): -_ONE}
                )
            raise PreconditionError(f"unknown t3 generator {name}")
        if name in ("t14", "t24", "t34"):
            i = ("t14", "t24", "t34").index(name)
            return DKElement(self, {((i,), 0, ()): _ONE})
        if name == "t12":
            return DKElement(self, {((), 0, (0,)): _ONE})
        if name == "t13":
            return DKElement(self, {((), 0, (1,)): _ONE})
        if name == "t23":
            return DKElement(
                self,
                {((), 1, ()): _ONE, ((), 0, (0,)): -_ONE, ((), 0, (1,)): -_ONE},
            )
        raise PreconditionError(f"unknown t4 generator {name}")

    def degree(self, label) -> int:
        if self.strands == 3:
            k, w = label
            return k + len(w)
        u, k, w = label
        return len(u) + k + len(w)

    # -- multiplication ----------------------------------------------------

    def _push_block(self, cpow: int, f2word, letter: int):
        """Normal-order (c^cpow * f2word) * f3letter; memoized.

        Returns dict label -> coeff in U(t4).
        """
        key = (cpow, f2word, letter)
        hit = self._push_memo.get(key)
        if hit is not None:
            return hit
        out = {}
        if f2word:
            head, g = f2word[:-1], f2word[-1]
            # (c^k head) * (letter * g + [g, letter])
            for lab, c in self._push_block(cpow, head, letter).items():
                u, m, v = lab
                _acc(out, (u, m, v + (g,)), c)
            for bw, bc in self._bracket_f2[(g, letter)]:
                for lab, c in self._block_times_f3word(cpow, head, bw).items():
                    _acc(out, lab, c * bc)
        elif cpow > 0:
            # c^k * a = (c^{k-1} * a) * c + c^{k-1} * [c, a]
            for lab, c in self._push_block(cpow - 1, (), letter).items():
                u, m, v = lab
                _acc(out, (u, m + 1, v), c)
            for bw, bc in self._bracket_c[letter]:
                for lab, c in self._block_times_f3word(cpow - 1, (), bw).items():
                    _acc(out, lab, c * bc)
        else:
            out[((letter,), 0, ())] = _ONE
        self._push_memo[key] = out
        return out

    def _block_times_f3word(self, cpow: int, f2word, f3word):
        """(c^cpow * f2word) * f3word, all in normal order."""
        acc = {((), cpow, f2word): _ONE}
        for letter in f3word:
            nxt = {}
            for (u, m, v), c in acc.items():
                for (u2, m2, v2), c2 in self._push_block(m, v, letter).items():
                    _acc(nxt, (u + u2, m2, v2), c * c2)
            acc = nxt
        return acc

    def mul_labels(self, la, lb):
        """Product of two normal-form basis labels; dict label -> coeff."""
        if self.strands == 3:
            ka, wa = la
            kb, wb = lb
            if ka + len(wa) + kb + len(wb) > self.max_degree:
                return {}
            return {(ka + kb, wa + wb): _ONE}
        ua, ka, wa = la
        ub, kb, wb = lb
        if self.degree(la) + self.degree(lb) > self.max_degree:
            return {}
        out = {}
        for (u, m, v), c in self._block_times_f3word(ka, wa, ub).items():
            _acc(out, (ua + u, m + kb, v + wb), c)
        return out


def _acc(d, k, c):
    v = d.get(k, _ZERO) + c
    if v:
        d[k] = v
    else:
        d.pop(k, None)


class DKElement:
    """Normal-ordered element of a truncated Drinfeld-Kohno algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: DKAlgebra, terms=None):
        self.algebra = algebra
        self.terms = {}
        for lab, c in (terms or {}).items():
            c = rat(c)
            if c and algebra.degree(lab) <= algebra.max_degree:
                self.terms[lab] = c

    def __add__(self, other):
        terms = dict(self.terms)
        for lab, c in other.terms.items():
            _acc(terms, lab, c)
        return DKElement(self.algebra, terms)

    def __sub__(self, other):
        return self + (other * Fraction(-1))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return DKElement(
                self.algebra, {lab: c * rat(other) for lab, c in self.terms.items()}
            )
        alg = self.algebra
        md = alg.max_degree
        out = {}
        for la, ca in self.terms.items():
            da = alg.degree(la)
            for lb, cb in other.terms.items():
                if da + alg.degree(lb) > md:
                    continue
                for lab, c in alg.mul_labels(la, lb).items():
                    _acc(out, lab, ca * cb * c)
        return DKElement(alg, out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, DKElement) and self.terms == other.terms

    def component(self, d: int) -> "DKElement":
        return DKElement(
            self.algebra,
            {lab: c for lab, c in self.terms.items() if self.algebra.degree(lab) == d},
        )

    def valuation(self) -> int:
        return min(
            (self.algebra.degree(lab) for lab in self.terms),
            default=self.algebra.max_degree + 1,
        )

    def exp(self) -> "DKElement":
        if self.valuation() < 1:
            raise PreconditionError("exp needs a degree >= 1 element")
        out = self.algebra.one()
        term = out
        for k in range(1, self.algebra.max_degree + 1):
            term = term * self * Fraction(1, k)
            if not term:
                break
            out = out + term
        return out

    def __repr__(self):
        return f"DKElement({len(self.terms)} terms)"


def dk_normal_form(raw_word, strands: int, max_degree: int, algebra=None) -> DKElement:
    """Normal form of a raw product of t_{ij} generators (by name)."""
    alg = algebra if algebra is not None else DKAlgebra(strands, max_degree)
    out = alg.one()
    for name in raw_word:
        out = out * alg.gen(name)
    return out
