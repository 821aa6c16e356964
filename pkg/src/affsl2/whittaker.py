"""Concrete module constructions with basis-indexed exact generator actions.

Every module here exposes the same contract:

    act(symbol, vector) -> vector        linear, exact
    level                                the scalar the center acts by
    weight_of_label(label)               total mode depth of a basis label
    creator_symbols(max_weight)          PBW-ordered generator list for box
                                         enumeration

Basis labels are PBW-sorted tuples of creator symbols; the empty tuple is
the cyclic vector.  act() normal-orders the product of the incoming symbol
with the label's factors, then evaluates annihilation and central tails on
the cyclic vector by the module's eigenvalue rules.  The critical quotient
additionally resolves f(n), n <= 0, into stored vectors obtained by solving
the central constraints, which is what makes its basis e/h-monomials only.

Results of act on single labels are memoized per module instance; callers
treat returned dicts as immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .algebra import AFFINE_SL2, BOREL_VIR, D, check_symbol, sym
from .exact import Q, QONE, QZERO, RowSpace, kernel_basis, vec_iadd, vec_scale
from .quadratic import L_mode, Laurent, pair_words
from .rewrite import ORDERS, borel_vir_slot, borel_vir_slot_symbol, normal_order


@dataclass(frozen=True)
class TruncationBox:
    """Finite window: max_weight bounds total mode depth (-sum of modes),
    max_length bounds the number of factors in a basis label."""

    max_weight: int
    max_length: int


class PBWModule:
    """Shared engine for modules whose basis is a set of PBW creator words."""

    algebra = AFFINE_SL2
    order = "sl2"

    def __init__(self):
        self._act_memo = {}

    # subclasses implement _tail_scalar(symbol) -> rational | None
    # (None marks a basis factor: creator, or replacement where supported)

    def weight_of_label(self, label):
        return -sum(m for _, m in label)

    def cyclic(self):
        return {(): QONE}

    def act(self, g, v):
        out = {}
        for label, c in v.items():
            vec_iadd(out, self._act_label(g, label), c)
        return out

    def apply_word(self, word, v):
        """Apply a product of symbols (left factor acts last)."""
        for s in reversed(word):
            if not v:
                return {}
            v = self.act(s, v)
        return v

    def _act_label(self, g, label):
        key = (g, label)
        hit = self._act_memo.get(key)
        if hit is None:
            check_symbol(self.algebra, g)
            hit = {}
            for mono, c in normal_order(self.algebra, (g,) + label, self.order).items():
                vec_iadd(hit, self._eval_monomial(mono), c)
            self._act_memo[key] = hit
        return hit

    def _eval_monomial(self, mono):
        scalar = QONE
        i = len(mono)
        while i > 0:
            val = self._tail_scalar(mono[i - 1])
            if val is None:
                break
            if not val:
                return {}
            scalar *= val
            i -= 1
        return self._eval_head(mono[:i], scalar)

    def _eval_head(self, head, scalar):
        return {head: scalar}


class UniversalWhittaker(PBWModule):
    """The universal level-k module with cyclic vector rules
    e(0) -> lam, f(1) -> mu, e(n>0) = h(n>0) = f(n>1) -> 0."""

    def __init__(self, lam, mu, kappa):
        super().__init__()
        self.lam, self.mu, self.level = Q(lam), Q(mu), Q(kappa)

    def _tail_scalar(self, s):
        fam, n = s
        if fam == "c":
            return self.level
        if fam == "e":
            return None if n <= -1 else (self.lam if n == 0 else QZERO)
        if fam == "h":
            return None if n <= 0 else QZERO
        # f-family
        return None if n <= 0 else (self.mu if n == 1 else QZERO)

    def creator_symbols(self, max_weight):
        syms = [sym("e", -n) for n in range(1, max_weight + 1)]
        syms += [sym("h", -n) for n in range(0, max_weight + 1)]
        syms += [sym("f", -n) for n in range(0, max_weight + 1)]
        return sorted(syms, key=ORDERS[self.order])

    # (i, j, k) exponent-vector triples <-> labels: slot m in i is e(-m),
    # in j is h(-m+1), in k is f(-m+1)

    @staticmethod
    def label_of_ijk(i, j, k):
        factors = []
        for m in sorted(i, reverse=True):
            factors += [sym("e", -m)] * i[m]
        for m in sorted(j, reverse=True):
            factors += [sym("h", -m + 1)] * j[m]
        for m in sorted(k, reverse=True):
            factors += [sym("f", -m + 1)] * k[m]
        return tuple(factors)

    @staticmethod
    def ijk_of_label(label):
        i, j, k = {}, {}, {}
        for fam, n in label:
            if fam == "e":
                m = -n
                i[m] = i.get(m, 0) + 1
            elif fam == "h":
                m = -n + 1
                j[m] = j.get(m, 0) + 1
            else:
                m = -n + 1
                k[m] = k.get(m, 0) + 1
        return i, j, k


class BorelVirModule(PBWModule):
    """The Borel-plus-Virasoro module with rules e(0) -> lam, L(1) -> mu,
    higher e/h/L annihilating, and two central scalars."""

    algebra = BOREL_VIR
    order = "borel_vir"

    def __init__(self, lam, mu, kappa1, kappa):
        super().__init__()
        self.lam, self.mu = Q(lam), Q(mu)
        self.kappa1, self.level = Q(kappa1), Q(kappa)

    def _tail_scalar(self, s):
        fam, n = s
        if fam == "c":
            return self.level
        if fam == "c1":
            return self.kappa1
        if fam == "e":
            return None if n <= -1 else (self.lam if n == 0 else QZERO)
        if fam == "h":
            return None if n <= 0 else QZERO
        # L-family
        return None if n <= 0 else (self.mu if n == 1 else QZERO)

    def creator_symbols(self, max_weight):
        out = []
        for slot in range(1, 3 * max_weight + 4):
            s = borel_vir_slot_symbol(slot)
            if -s[1] <= max_weight:
                out.append(s)
        return sorted(out, key=ORDERS[self.order])

    @staticmethod
    def ev_of_label(label):
        out = {}
        for s in label:
            slot = borel_vir_slot(s)
            out[slot] = out.get(slot, 0) + 1
        return out

    @staticmethod
    def label_of_ev(i):
        factors = []
        for slot in sorted(i, reverse=True):
            factors += [borel_vir_slot_symbol(slot)] * i[slot]
        return tuple(factors)


class CriticalQuotient(PBWModule):
    """Level -2 quotient by the central character: T(n) acts by c_n for
    n <= 0, which resolves every f(n), n <= 0, into an e/h-monomial vector.

    Requires lam != 0 (the resolution divides by it) and a weight-2 series
    supported in modes <= 0.
    """

    order = "sl2_critical"

    def __init__(self, lam, mu, c_series):
        super().__init__()
        self.lam, self.mu = Q(lam), Q(mu)
        if not self.lam:
            raise ValueError("the critical quotient needs lam != 0")
        if c_series.convention != "weight2":
            raise ValueError("c_series must use the weight2 convention")
        if any(n > 0 for n in c_series.support()):
            raise ValueError("c_series must be supported in modes <= 0")
        self.c_series = c_series
        self.level = Q(-2)
        self._f_memo = {}

    def _tail_scalar(self, s):
        fam, n = s
        if fam == "c":
            return self.level
        if fam == "e":
            return None if n <= -1 else (self.lam if n == 0 else QZERO)
        if fam == "h":
            return None if n <= 0 else QZERO
        # f: nonpositive modes are resolved, not basis factors
        return None if n <= 0 else (self.mu if n == 1 else QZERO)

    def creator_symbols(self, max_weight):
        syms = [sym("e", -n) for n in range(1, max_weight + 1)]
        syms += [sym("h", -n) for n in range(0, max_weight + 1)]
        return sorted(syms, key=ORDERS[self.order])

    def t_scalar(self, n):
        """The scalar T(n) acts by on the whole module."""
        if n <= 0:
            return self.c_series[n]
        if n == 1:
            return self.lam * self.mu
        return QZERO

    def _eval_head(self, head, scalar):
        i = len(head)
        while i > 0 and head[i - 1][0] == "f":
            i -= 1
        if i == len(head):
            return {head: scalar}
        vec = vec_scale(self.f_vector(head[-1][1]), scalar)
        for s in reversed(head[:-1]):
            vec = self.act(s, vec)
        return vec

    def f_vector(self, m):
        """The e/h-monomial expansion of f(m) applied to the cyclic vector,
        solved from the central constraint at mode m.

        The quadratic central mode at m contains the unknown exactly once,
        as the normal form (f(m), e(0)) evaluating to lam * f(m)w; every
        other term involves only f-modes closer to zero, so the recursion
        is well founded.
        """
        if m > 1:
            return {}
        if m == 1:
            return {(): self.mu}
        hit = self._f_memo.get(m)
        if hit is not None:
            return hit
        expansion = {}
        for k in range(m - 2, 3):
            for coeff, word in pair_words(m, k):
                vec_iadd(expansion, normal_order(self.algebra, word, self.order), coeff)
        pivot = expansion.pop((sym("f", m), sym("e", 0)), QZERO)
        if pivot != QONE:
            raise RuntimeError(f"unexpected pivot coefficient {pivot} at mode {m}")
        rest = {}
        for mono, c in expansion.items():
            vec_iadd(rest, self._eval_monomial(mono), c)
        out = {(): self.c_series[m]}
        vec_iadd(out, rest, -QONE)
        out = vec_scale(out, QONE / self.lam)
        self._f_memo[m] = out
        return out


class InducedModule:
    """Free polynomial extension by the derivation: labels (d-power, base
    label); x(n) transports through d-powers binomially."""

    def __init__(self, base):
        self.base = base
        self.level = base.level

    def weight_of_label(self, label):
        k, base_label = label
        return self.base.weight_of_label(base_label)

    def cyclic(self):
        return {(0, ()): QONE}

    def embed(self, v, d_power=0):
        return {(d_power, lbl): c for lbl, c in v.items()}

    def act(self, g, v):
        out = {}
        if g == D:
            for (k, lbl), c in v.items():
                vec_iadd(out, {(k + 1, lbl): c})
            return out
        fam, n = g
        for (k, lbl), c in v.items():
            base_out = self.base.act(g, {lbl: QONE})
            for j in range(k + 1):
                coeff = c * comb(k, j) * Q(-n) ** (k - j)
                if not coeff:
                    continue
                for blbl, bc in base_out.items():
                    vec_iadd(out, {(j, blbl): bc * coeff})
        return out

    def act_central_mode(self, n, v):
        """The critical central mode T(n) on the induced module: the base
        acts by its scalar, transported through d-powers like any mode-n
        operator."""
        out = {}
        t = self.base.t_scalar(n)
        for (k, lbl), c in v.items():
            for j in range(k + 1):
                coeff = c * t * comb(k, j) * Q(-n) ** (k - j)
                if coeff:
                    vec_iadd(out, {(j, lbl): coeff})
        return out


class GradedDerivation:
    """A PBW module whose derivation acts semisimply on labels: the cyclic
    vector has eigenvalue d_dot and each creator of mode -n lowers it by n."""

    def __init__(self, base, d_dot):
        self.base = base
        self.d_dot = Q(d_dot)
        self.level = base.level

    def weight_of_label(self, label):
        return self.base.weight_of_label(label)

    def cyclic(self):
        return self.base.cyclic()

    def act(self, g, v):
        if g == D:
            out = {}
            for lbl, c in v.items():
                eig = self.d_dot - self.base.weight_of_label(lbl)
                if eig and c:
                    out[lbl] = c * eig
            return out
        return self.base.act(g, v)


class DerivationWrapper:
    """A noncritical module with the derivation acting as a - L(0); the
    grading operator any semisimple-d quotient provides."""

    def __init__(self, base, a):
        self.base = base
        self.a = Q(a)
        self.level = base.level

    def weight_of_label(self, label):
        return self.base.weight_of_label(label)

    def cyclic(self):
        return self.base.cyclic()

    def act(self, g, v):
        if g == D:
            out = vec_scale(v, self.a)
            vec_iadd(out, L_mode(0, self.base, v), -QONE)
            return out
        return self.base.act(g, v)


# ---------------------------------------------------------------------------
# box enumeration and the solver


def box_labels(handle, box):
    """All PBW labels with weight <= box.max_weight, length <= box.max_length."""
    creators = handle.creator_symbols(box.max_weight)
    out = []

    def rec(start, current, w, length):
        out.append(tuple(current))
        if length == box.max_length:
            return
        for idx in range(start, len(creators)):
            s = creators[idx]
            dw = -s[1]
            if w + dw > box.max_weight:
                continue
            current.append(s)
            rec(idx, current, w + dw, length + 1)
            current.pop()

    rec(0, [], 0, 0)
    return out


def whittaker_vector_solver(handle, lam, mu, box):
    """Exact basis of box-span vectors killed by the defining constraints.

    Constraints: (e(0)-lam)v = (f(1)-mu)v = 0 and e(n)v = f(n+1)v = h(n)v = 0
    for 1 <= n <= box.max_weight + 1; constraint images that leave the box
    are evaluated in the enlarged span before solving.
    """
    lam, mu = Q(lam), Q(mu)
    labels = box_labels(handle, box)
    constraints = [(sym("e", 0), lam), (sym("f", 1), mu)]
    for n in range(1, box.max_weight + 2):
        constraints += [(sym("e", n), QZERO), (sym("f", n + 1), QZERO), (sym("h", n), QZERO)]
    rows = {}
    for col, u in enumerate(labels):
        uvec = {u: QONE}
        for ci, (g, scalar) in enumerate(constraints):
            img = handle.act(g, uvec)
            if scalar:
                img = dict(img)
                vec_iadd(img, uvec, -scalar)
            for lbl, c in img.items():
                rows.setdefault((ci, lbl), {})[col] = c
    basis = kernel_basis(list(rows.values()), list(range(len(labels))))
    return [{labels[col]: c for col, c in v.items()} for v in basis]


def casimir_omega(handle, v):
    """The quadratic degree-preserving operator

        2(c+2)d + h(0)^2/2 + h(0) + 2 f(0)e(0) + 2 sum_{n>=1} (e(-n)f(n)
            + f(-n)e(n) + h(-n)h(n)/2)

    applied through any handle carrying a d-action; the tail truncates on
    restricted vectors, with a widening check on the final slice."""
    if not v:
        return {}
    kappa = handle.level
    out = vec_scale(handle.act(D, v), 2 * (kappa + 2))
    h0v = handle.act(sym("h", 0), v)
    vec_iadd(out, handle.act(sym("h", 0), h0v), Q(1, 2))
    vec_iadd(out, h0v)
    vec_iadd(out, handle.act(sym("f", 0), handle.act(sym("e", 0), v)), Q(2))
    bound = max(handle.weight_of_label(lbl) for lbl in v) + 2
    for n in range(1, bound + 1):
        slice_total = {}
        vec_iadd(slice_total, handle.act(sym("e", -n), handle.act(sym("f", n), v)), Q(2))
        vec_iadd(slice_total, handle.act(sym("f", -n), handle.act(sym("e", n), v)), Q(2))
        vec_iadd(slice_total, handle.act(sym("h", -n), handle.act(sym("h", n), v)), QONE)
        if n == bound and slice_total:
            raise RuntimeError("casimir tail truncation too tight")
        vec_iadd(out, slice_total)
    return out


def sugawara_basis_vector(handle, i, j, k):
    """The basis-certificate vector: e- and h-blocks act directly, the
    f-block is replaced by Virasoro modes L(-m+1) per unit of slot m."""
    if handle.level == Q(-2):
        raise ValueError("basis certificate needs level != -2")
    v = handle.cyclic()
    for m in sorted(k):
        for _ in range(k[m]):
            v = L_mode(-m + 1, handle, v)
    for m in sorted(j):
        word = (sym("h", -m + 1),) * j[m]
        v = handle.apply_word(word, v)
    for m in sorted(i):
        word = (sym("e", -m),) * i[m]
        v = handle.apply_word(word, v)
    return v


@dataclass
class TruncatedQuotient:
    relation_rows: list
    complement: list
    warning: bool
    _solver: RowSpace

    def project(self, v):
        """Coordinates of v modulo the relation span, in the complement
        labels; None when v falls outside the solved span."""
        coords = self._solver.express(v)
        if coords is None:
            return None
        return {tag[1]: c for tag, c in coords.items() if tag[0] == "lbl"}


def truncated_quotient(handle, relation, a, box):
    """Desk-scale quotient data for the relation (L(0)-a) or
    (h(0)/2 - L(0) - a): the span of box words applied to relation*w,
    a complement basis, and the projection map."""
    a = Q(a)
    w = handle.cyclic()
    l0w = L_mode(0, handle, w)
    if relation == "L0_minus_a":
        rvec = dict(l0w)
        vec_iadd(rvec, w, -a)
    elif relation == "h0_half_minus_L0_minus_a":
        rvec = vec_scale(handle.act(sym("h", 0), w), Q(1, 2))
        vec_iadd(rvec, l0w, -QONE)
        vec_iadd(rvec, w, -a)
    else:
        raise ValueError(f"unknown relation {relation!r}")

    labels = box_labels(handle, box)
    label_set = set(labels)
    solver = RowSpace()
    rows = []
    for u in labels:
        row = handle.apply_word(u, rvec)
        if row:
            rows.append(row)
            solver.add_row(row, tag=("rel", len(rows)))
    warning = not rows or any(lbl not in label_set for lbl in rvec)
    complement = [u for u in labels if solver.add_row({u: QONE}, tag=("lbl", u))]
    return TruncatedQuotient(rows, complement, warning, solver)


def label_json(label, d_power=0):
    """The external form of a PBW label: family -> {mode: exponent}."""
    out = {"e": {}, "h": {}, "f": {}, "d": d_power}
    for fam, n in label:
        fam_map = out.setdefault(fam, {})
        key = str(n)
        fam_map[key] = fam_map.get(key, 0) + 1
    return out
