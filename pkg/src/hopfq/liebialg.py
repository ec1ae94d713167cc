"""Finite-dimensional Lie bialgebras over Q, their Drinfeld-Yetter modules,
and the symmetric Cartier structure (infinitesimal braiding, associator
deformations) at finite hbar-order.

Conventions: the base symmetric category is strictified, so associativity
and unit constraints are identities and the braiding is the tensor flip.
When ``hbar_scaled`` is set on the base, every use of the cobracket /
coaction carries one factor of hbar; the input structure constants stay
rational.  Only left-action / right-coaction modules are implemented.
"""

from __future__ import annotations

from fractions import Fraction

from .associator import Associator, Report
from .freealg import NCSeries
from .ops import LinOp, series_op
from .truncmod import (
    HModule,
    PreconditionError,
    TruncSeries,
    rat,
    tensor_module,
)

_ZERO = Fraction(0)


def _norm_constants(table):
    out = {}
    for key, val in table.items():
        clean = {k: rat(c) for k, c in val.items() if rat(c)}
        if clean:
            out[key] = clean
    return out


class LieBialgebra:
    """Structure constants for ([.,.], delta) on a named basis.

    bracket[(i,j)][k] is the coefficient of e_k in [e_i, e_j];
    cobracket[i][(j,k)] is the coefficient of e_j x e_k in delta(e_i).
    """

    def __init__(self, names, bracket, cobracket, hbar_scaled=True):
        self.names = tuple(names)
        self.dim = len(self.names)
        self.bracket = _norm_constants(bracket)
        self.cobracket = _norm_constants(cobracket)
        self.hbar_scaled = bool(hbar_scaled)

    def bk(self, i: int, j: int) -> dict:
        return self.bracket.get((i, j), {})

    def cb(self, i: int) -> dict:
        return self.cobracket.get(i, {})

    @staticmethod
    def borel_sl2(hbar_scaled=True) -> "LieBialgebra":
        """[H,E] = 2E, delta(H) = 0, delta(E) = E@H - H@E."""
        return LieBialgebra(
            ("H", "E"),
            {(0, 1): {1: 2}, (1, 0): {1: -2}},
            {1: {(1, 0): 1, (0, 1): -1}},
            hbar_scaled,
        )

    @staticmethod
    def abelian(n: int, cobracket=None, hbar_scaled=True) -> "LieBialgebra":
        return LieBialgebra(
            tuple(f"x{i}" for i in range(n)), {}, cobracket or {}, hbar_scaled
        )

    def to_json(self):
        from .truncmod import rat_str

        return {
            "dim": self.dim,
            "basis": list(self.names),
            "bracket": [
                [i, j, k, rat_str(c)]
                for (i, j), col in sorted(self.bracket.items())
                for k, c in sorted(col.items())
            ],
            "cobracket": [
                [i, j, k, rat_str(c)]
                for i, col in sorted(self.cobracket.items())
                for (j, k), c in sorted(col.items())
            ],
            "hbar_scaled": self.hbar_scaled,
        }

    @staticmethod
    def from_json(data) -> "LieBialgebra":
        bracket = {}
        for i, j, k, c in data.get("bracket", []):
            bracket.setdefault((i, j), {})[k] = rat(c)
        cobracket = {}
        for i, j, k, c in data.get("cobracket", []):
            cobracket.setdefault(i, {})[(j, k)] = rat(c)
        return LieBialgebra(
            data["basis"], bracket, cobracket, data.get("hbar_scaled", True)
        )


def _pair_add(d, k, c):
    v = d.get(k, _ZERO) + c
    if v:
        d[k] = v
    else:
        d.pop(k, None)


def _ad_on_pair(b: LieBialgebra, x: int, pair: dict) -> dict:
    """x . (sum c e_j @ e_k) via ad@id + id@ad."""
    out = {}
    for (j, k), c in pair.items():
        for m, cm in b.bk(x, j).items():
            _pair_add(out, (m, k), c * cm)
        for m, cm in b.bk(x, k).items():
            _pair_add(out, (j, m), c * cm)
    return out


def validate_bialgebra(b: LieBialgebra) -> Report:
    rep = Report("lie-bialgebra")
    ok = True
    for i in range(b.dim):
        for j in range(b.dim):
            s = dict(b.bk(i, j))
            for k, c in b.bk(j, i).items():
                _pair_add(s, k, c)
            if s:
                ok = False
    rep.add("bracket.antisymmetry", ok)
    ok = True
    for i in range(b.dim):
        flipped = {(k, j): c for (j, k), c in b.cb(i).items()}
        s = dict(b.cb(i))
        for k, c in flipped.items():
            _pair_add(s, k, c)
        if s:
            ok = False
    rep.add("cobracket.antisymmetry", ok)
    ok = True
    for i in range(b.dim):
        for j in range(b.dim):
            for k in range(b.dim):
                acc: dict = {}
                for (x, y, z) in ((i, j, k), (j, k, i), (k, i, j)):
                    for m, c in b.bk(x, y).items():
                        for n, cn in b.bk(m, z).items():
                            _pair_add(acc, n, c * cn)
                if acc:
                    ok = False
    rep.add("jacobi", ok)
    ok = True
    for i in range(b.dim):
        acc = {}
        for (j, k), c in b.cb(i).items():
            for (u, v), cu in b.cb(j).items():
                # cyclic sum of (delta @ id) delta
                _pair_add(acc, (u, v, k), c * cu)
                _pair_add(acc, (k, u, v), c * cu)
                _pair_add(acc, (v, k, u), c * cu)
        if acc:
            ok = False
    rep.add("cojacobi", ok)
    ok = True
    for i in range(b.dim):
        for j in range(b.dim):
            lhs = {}
            for k, c in b.bk(i, j).items():
                for pair, cp in b.cb(k).items():
                    _pair_add(lhs, pair, c * cp)
            rhs = _ad_on_pair(b, i, b.cb(j))
            for pair, c in _ad_on_pair(b, j, b.cb(i)).items():
                _pair_add(rhs, pair, -c)
            for pair, c in rhs.items():
                _pair_add(lhs, pair, -c)
            if lhs:
                ok = False
    rep.add("cocycle", ok)
    return rep


class DYModule:
    """(V, pi, rho) over a LieBialgebra.

    action[(i, a)][b]   : coefficient of v_b in pi(e_i x v_a)
    coaction[a][(b, i)] : coefficient of v_b x e_i in rho(v_a)

    When the base is hbar_scaled the working coaction is hbar * rho.
    """

    def __init__(self, base: LieBialgebra, names, action, coaction, degrees=None):
        self.base = base
        self.names = tuple(names)
        self.dim = len(self.names)
        self.action = _norm_constants(action)
        self.coaction = _norm_constants(coaction)
        self.degrees = dict(degrees or {})

    def act(self, i: int, a: int) -> dict:
        return self.action.get((i, a), {})

    def coact(self, a: int) -> dict:
        return self.coaction.get(a, {})

    def hmodule(self, order: int) -> HModule:
        return HModule(
            order,
            [(n,) for n in self.names],
            degrees={(n,): self.degrees.get(n, 0) for n in self.names},
        )

    @staticmethod
    def trivial(base: LieBialgebra, dim: int = 1) -> "DYModule":
        return DYModule(base, tuple(f"v{i}" for i in range(dim)), {}, {})

    @staticmethod
    def from_json(base: LieBialgebra, data) -> "DYModule":
        action = {}
        for i, a, bb, c in data.get("action", []):
            action.setdefault((i, a), {})[bb] = rat(c)
        coaction = {}
        for a, bb, i, c in data.get("coaction", []):
            coaction.setdefault(a, {})[(bb, i)] = rat(c)
        names = data.get("basis") or [f"v{i}" for i in range(data["dim"])]
        return DYModule(base, names, action, coaction)


def borel_standard_module() -> DYModule:
    """A 2-dimensional Drinfeld-Yetter module over the sl2 Borel.

    pi is the defining representation; the coaction constants are forced
    by the compatibility equation (exact solve, checked in dy_validate).
    """
    b = LieBialgebra.borel_sl2()
    action = {
        (0, 0): {0: 1},
        (0, 1): {1: -1},
        (1, 1): {0: 1},
    }
    coaction = {
        0: {(0, 0): Fraction(1, 2), (1, 1): 2},
        1: {(1, 0): Fraction(-1, 2)},
    }
    return DYModule(b, ("u", "w"), action, coaction)


def dy_validate(v: DYModule) -> Report:
    """Exact check of module, comodule and mixed compatibility."""
    b = v.base
    rep = Report("dy-module")
    ok = True
    for i in range(b.dim):
        for j in range(b.dim):
            for a in range(v.dim):
                acc = {}
                for k, c in b.bk(i, j).items():
                    for bb, cb in v.act(k, a).items():
                        _pair_add(acc, bb, c * cb)
                for bb, cb in v.act(j, a).items():
                    for cc, c2 in v.act(i, bb).items():
                        _pair_add(acc, cc, -cb * c2)
                for bb, cb in v.act(i, a).items():
                    for cc, c2 in v.act(j, bb).items():
                        _pair_add(acc, cc, cb * c2)
                if acc:
                    ok = False
    rep.add("lie-module", ok)
    ok = True
    for a in range(v.dim):
        acc = {}
        # (id @ delta) rho - (rho @ id) rho + sigma_23 (rho @ id) rho = 0
        for (bb, i), c in v.coact(a).items():
            for (j, k), cd in b.cb(i).items():
                _pair_add(acc, (bb, j, k), c * cd)
        for (bb, i), c in v.coact(a).items():
            for (cc, j), c2 in v.coact(bb).items():
                _pair_add(acc, (cc, j, i), -c * c2)
                _pair_add(acc, (cc, i, j), c * c2)
        if acc:
            ok = False
    rep.add("lie-comodule", ok)
    ok = True
    for i in range(b.dim):
        for a in range(v.dim):
            acc = {}
            # rho(pi(x, v))
            for bb, c in v.act(i, a).items():
                for (cc, j), c2 in v.coact(bb).items():
                    _pair_add(acc, (cc, j), c * c2)
            # - (pi @ id)(id @ rho)
            for (bb, j), c in v.coact(a).items():
                for cc, c2 in v.act(i, bb).items():
                    _pair_add(acc, (cc, j), -c * c2)
            # - (id @ [.,.]) tau_12 (id @ rho)
            for (bb, j), c in v.coact(a).items():
                for k, c2 in b.bk(i, j).items():
                    _pair_add(acc, (bb, k), -c * c2)
            # - (pi @ id) tau_23 (delta @ id)
            for (j, k), c in b.cb(i).items():
                for bb, c2 in v.act(j, a).items():
                    _pair_add(acc, (bb, k), -c * c2)
            if acc:
                ok = False
    rep.add("compatibility", ok)
    return rep


def dy_tensor(v: DYModule, w: DYModule) -> DYModule:
    if v.base is not w.base and v.base.to_json() != w.base.to_json():
        raise PreconditionError("tensor of modules over different bases")
    names = tuple((a, c) for a in v.names for c in w.names)
    idx = {}
    for ia, a in enumerate(v.names):
        for ic, c in enumerate(w.names):
            idx[(ia, ic)] = len(idx)
    action = {}
    for i in range(v.base.dim):
        for (ia, ic), n in idx.items():
            col = {}
            for bb, c in v.act(i, ia).items():
                _pair_add(col, idx[(bb, ic)], c)
            for bb, c in w.act(i, ic).items():
                _pair_add(col, idx[(ia, bb)], c)
            if col:
                action[(i, n)] = col
    coaction = {}
    for (ia, ic), n in idx.items():
        col = {}
        for (bb, j), c in w.coact(ic).items():
            _pair_add(col, (idx[(ia, bb)], j), c)
        for (bb, j), c in v.coact(ia).items():
            _pair_add(col, (idx[(bb, ic)], j), c)
        if col:
            coaction[n] = col
    degrees = {}
    for (a, c) in names:
        d = v.degrees.get(a, 0) + w.degrees.get(c, 0)
        if d:
            degrees[(a, c)] = d
    return DYModule(v.base, names, action, coaction, degrees)


# ---------------------------------------------------------------------------
# Cartier operator factory


class CartierOps:
    """Operator factory on tensor products of DY modules at order N."""

    def __init__(self, base: LieBialgebra, order: int):
        self.base = base
        self.order = order
        self.hbar = (
            TruncSeries.hbar(order) if base.hbar_scaled else TruncSeries.const(order, 1)
        )

    def _name_index(self, module: DYModule):
        return {(n,): i for i, n in enumerate(module.names)}

    def t_colfn(self, v: DYModule, w: DYModule):
        """t(x@y) = -x0 @ (x1 . y) - (y1 . x) @ y0, one hbar per coaction."""
        iv = {n: i for i, n in enumerate(v.names)}
        iw = {n: i for i, n in enumerate(w.names)}
        hbar = self.hbar

        def col(pair):
            a, c = iv[pair[0]], iw[pair[1]]
            out = {}
            for (b_, i), cr in v.coact(a).items():
                for d_, ca in w.act(i, c).items():
                    lab = (v.names[b_], w.names[d_])
                    cur = out.get(lab)
                    val = hbar * (-cr * ca)
                    out[lab] = val if cur is None else cur + val
            for (d_, i), cr in w.coact(c).items():
                for b_, ca in v.act(i, a).items():
                    lab = (v.names[b_], w.names[d_])
                    cur = out.get(lab)
                    val = hbar * (-cr * ca)
                    out[lab] = val if cur is None else cur + val
            return {k: val for k, val in out.items() if val}

        return col

    def t_linop(self, modules, i: int) -> LinOp:
        """Infinitesimal braiding on adjacent slots (i, i+1)."""
        return LinOp.on_slots(
            self.order, i, 2, self.t_colfn(modules[i], modules[i + 1])
        )

    def t_hmap(self, v: DYModule, w: DYModule):
        dom = tensor_module(v.hmodule(self.order), w.hmodule(self.order))
        return self.t_linop([v, w], 0).to_hmap(dom, dom)

    def flip(self, nslots: int, i: int) -> LinOp:
        p = list(range(nslots))
        p[i], p[i + 1] = p[i + 1], p[i]
        return LinOp.perm(self.order, p)

    def sigma_phi(self, modules, i: int, lam) -> LinOp:
        """sigma^Phi = flip o exp(lam * t) on slots (i, i+1)."""
        if not self.base.hbar_scaled:
            raise PreconditionError("deformed braiding needs an hbar-scaled base")
        t = self.t_linop(modules, i)
        return self.flip(len(modules), i) * t.scale(rat(lam)).exp()

    def a_phi(self, modules, phi: NCSeries, i: int = 0) -> LinOp:
        """a^Phi = Phi(t_{i,i+1}, t_{i+1,i+2}) on three adjacent slots."""
        if not self.base.hbar_scaled:
            raise PreconditionError("deformed associativity needs an hbar-scaled base")
        t12 = self.t_linop(modules, i)
        t23 = self.t_linop(modules, i + 1)
        return series_op(phi, t12, t23, self.order)


def inf_braiding(v: DYModule, w: DYModule, order: int):
    """t_{V,W} as an HMap on V (x) W."""
    if v.base is not w.base and v.base.to_json() != w.base.to_json():
        raise PreconditionError("infinitesimal braiding needs a common base")
    return CartierOps(v.base, order).t_hmap(v, w)


def cartier_verify(v: DYModule, w: DYModule, z: DYModule, order: int = 2) -> Report:
    """Infinitesimal hexagons and sigma-compatibility on one triple, exactly."""
    from .truncmod import hmap_eq

    ops = CartierOps(v.base, order)
    rep = Report("cartier")
    mods = [v, w, z]
    vw = dy_tensor(v, w)
    wz = dy_tensor(w, z)
    dom3 = tensor_module(
        tensor_module(v.hmodule(order), w.hmodule(order)), z.hmodule(order)
    )

    def mat(op):
        return op.to_hmap(dom3, dom3)

    # t_{V, W@Z} = t_{V,W} @ id + (flip_12)(id @ t_{V,Z})(flip_12);
    # labels are flat, so reinterpret the composite-module names in place
    def col_v_wz(lab):
        inner = ops.t_colfn(v, wz)((lab[0], (lab[1], lab[2])))
        return {(m[0],) + m[1]: c for m, c in inner.items()}

    lhs = LinOp(ops.order, col_v_wz)
    f12 = ops.flip(3, 0)
    rhs = ops.t_linop(mods, 0) + f12 * LinOp.on_slots(
        ops.order, 1, 2, ops.t_colfn(v, z)
    ) * f12
    rep.add("hexagon.one", hmap_eq(mat(lhs), mat(rhs)))

    def col_vw_z(lab):
        inner = ops.t_colfn(vw, z)(((lab[0], lab[1]), lab[2]))
        return {m[0] + (m[1],): c for m, c in inner.items()}

    lhs2 = LinOp(ops.order, col_vw_z)
    f23 = ops.flip(3, 1)
    rhs2 = ops.t_linop(mods, 1) + f23 * LinOp.on_slots(
        ops.order, 0, 2, ops.t_colfn(v, z)
    ) * f23
    rep.add("hexagon.two", hmap_eq(mat(lhs2), mat(rhs2)))

    dom2 = tensor_module(v.hmodule(order), w.hmodule(order))
    cod2 = tensor_module(w.hmodule(order), v.hmodule(order))
    tvw = LinOp.on_slots(ops.order, 0, 2, ops.t_colfn(v, w))
    twv = LinOp.on_slots(ops.order, 0, 2, ops.t_colfn(w, v))
    fl = LinOp.perm(ops.order, (1, 0))
    rep.add(
        "sigma-compat",
        hmap_eq((fl * tvw).to_hmap(dom2, cod2), (twv * fl).to_hmap(dom2, cod2)),
    )

    # t must be a morphism of Drinfeld-Yetter modules (this is where the
    # DY axioms bite; the hexagon shapes above hold for arbitrary tensors)
    both = dy_tensor(v, w)
    ok_act = True
    ok_coact = True
    one = TruncSeries.const(order, 1)
    tfn = ops.t_colfn(v, w)
    hb = ops.hbar
    for i in range(v.base.dim):
        for ia, a in enumerate(v.names):
            for ic, c in enumerate(w.names):
                n = ia * w.dim + ic
                # t(x . (a@c)) vs x . t(a@c)
                lhs = {}
                for bb, cb in both.act(i, n).items():
                    pa, pc = both.names[bb]
                    for lab, cc in tfn((pa, pc)).items():
                        cur = lhs.get(lab)
                        val = cc * cb
                        lhs[lab] = val if cur is None else cur + val
                rhs = {}
                for lab, cc in tfn((a, c)).items():
                    la, lc = v.names.index(lab[0]), w.names.index(lab[1])
                    nn = la * w.dim + lc
                    for bb, cb in both.act(i, nn).items():
                        pa, pc = both.names[bb]
                        cur = rhs.get((pa, pc))
                        val = cc * cb
                        rhs[(pa, pc)] = val if cur is None else cur + val
                for k in set(lhs) | set(rhs):
                    if lhs.get(k, one * 0) != rhs.get(k, one * 0):
                        ok_act = False
    for ia, a in enumerate(v.names):
        for ic, c in enumerate(w.names):
            n = ia * w.dim + ic
            # (t @ id) coact vs coact t
            lhs = {}
            for (bb, j), cb in both.coact(n).items():
                pa, pc = both.names[bb]
                for lab, cc in tfn((pa, pc)).items():
                    key = (lab[0], lab[1], j)
                    cur = lhs.get(key)
                    val = hb * (cc * cb)
                    lhs[key] = val if cur is None else cur + val
            rhs = {}
            for lab, cc in tfn((a, c)).items():
                la, lc = v.names.index(lab[0]), w.names.index(lab[1])
                nn = la * w.dim + lc
                for (bb, j), cb in both.coact(nn).items():
                    pa, pc = both.names[bb]
                    key = (pa, pc, j)
                    cur = rhs.get(key)
                    val = hb * (cc * cb)
                    rhs[key] = val if cur is None else cur + val
            for k in set(lhs) | set(rhs):
                zero = one * 0
                if lhs.get(k, zero) != rhs.get(k, zero):
                    ok_coact = False
    rep.add("t-is-module-morphism", ok_act)
    rep.add("t-is-comodule-morphism", ok_coact)
    return rep


def deformed_ops(assoc: Associator, modules, order: int):
    """Concrete a^Phi on triples and sigma^Phi on pairs for listed modules."""
    base = modules[0].base
    ops = CartierOps(base, order)

    def a_phi(i=0):
        return ops.a_phi(modules, assoc.phi, i)

    def sigma(i=0):
        return ops.sigma_phi(modules, i, assoc.lam)

    return {"cartier": ops, "a_phi": a_phi, "sigma_phi": sigma}
