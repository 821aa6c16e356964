"""Whittaker module for the localized Weyl algebra, lattice style.

The state space is spanned by labels (d0_power, c_part, d_part) standing for
d(0)^k c(-i_1)...c(-i_r) d(-j_1)...d(-j_s) w, where c and d are the isotropic
Heisenberg directions with [c(n), d(m)] = 2n delta_{n+m,0} and w is the
cyclic vector.  The exponential shift operators for the isotropic direction c
have exactly finite mode expansions, so every action below is closed form:
no truncation windows are needed on this side.

Conventions:
  a(n)      modes of the weight-1 shift field for +c
  a_inv(n)  modes of the weight -1 shift field for -c, a_inv(n) z^{-n+1}
  a(0) w = lam w, a_inv(0) w = (1/lam) w, both kill w for n >= 1
  c(0) acts by the scalar -1 on every vector; d(0) is a free variable
  e^{eps c} conjugates the d(0) variable: p(d0) -> lam^eps p(d0 - 2 eps)
  T(n) acts by the scalar chi[n] (weight-2 Laurent data)
"""

from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial

from .algebra import sym
from .exact import (
    Q,
    QONE,
    QZERO,
    RowSpace,
    format_rational,
    vec_eq,
    vec_iadd,
    vec_scale,
)
from .quadratic import Laurent, T_mode
from .rewrite import ORDERS
from .whittaker import CriticalQuotient, box_labels

_CYC = (0, (), ())


def _insert(part, entry):
    return tuple(sorted(part + (entry,), reverse=True))


def _drop_one(part, entry):
    out = list(part)
    out.remove(entry)
    return tuple(out)


@lru_cache(maxsize=None)
def _partitions(n):
    """All partitions of n as weakly decreasing tuples (including () for 0)."""
    if n == 0:
        return ((),)
    out = []

    def grow(remaining, max_entry, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for e in range(min(remaining, max_entry), 0, -1):
            acc.append(e)
            grow(remaining - e, e, acc)
            acc.pop()

    grow(n, n, [])
    return tuple(out)


def _removals(part):
    """Sub-multisets of a partition with their entry multiplicities, as
    (kept_tuple, {entry: removed_count}) pairs."""
    entries = sorted(set(part), reverse=True)
    counts = [part.count(e) for e in entries]
    out = []

    def grow(i, removed):
        if i == len(entries):
            kept = []
            for e, t in zip(entries, counts):
                kept.extend([e] * (t - removed.get(e, 0)))
            out.append((tuple(kept), dict(removed)))
            return
        for m in range(counts[i] + 1):
            if m:
                removed[entries[i]] = m
            grow(i + 1, removed)
            removed.pop(entries[i], None)

    grow(0, {})
    return out


class PiModule:
    """Whittaker module over the localized Weyl algebra, tensored with the
    one-dimensional central-character module given by chi (weight-2 data,
    with chi[1] = lam * mu encoding the f(1) eigenvalue)."""

    def __init__(self, lam, chi):
        lam = Q(lam)
        if not lam:
            raise ValueError("the shift operators need lam != 0")
        self.lam = lam
        if not isinstance(chi, Laurent):
            chi = Laurent("weight2", chi)
        self.chi = chi
        self.mu = chi[1] / lam
        self.level = Q(-2)
        self.cyclic_label = _CYC
        self._act_memo = {}

    # -- label bookkeeping ------------------------------------------------

    def weight_of_label(self, label):
        d0, cpart, dpart = label
        return sum(cpart) + sum(dpart)

    def length_of_label(self, label):
        d0, cpart, dpart = label
        return d0 + len(cpart) + len(dpart)

    def cyclic(self):
        return {_CYC: QONE}

    def box_labels(self, box):
        out = []
        for wc in range(box.max_weight + 1):
            for cpart in _partitions(wc):
                for wd in range(box.max_weight - wc + 1):
                    for dpart in _partitions(wd):
                        room = box.max_length - len(cpart) - len(dpart)
                        for d0 in range(max(room, -1) + 1):
                            out.append((d0, cpart, dpart))
        return sorted(
            (lbl for lbl in out if self.length_of_label(lbl) <= box.max_length),
            key=lambda lbl: (self.weight_of_label(lbl), lbl),
        )

    # -- action -----------------------------------------------------------

    def act(self, g, v):
        out = {}
        for label, coeff in v.items():
            vec_iadd(out, self._act_label(g, label), coeff)
        return out

    def apply_word(self, word, v):
        for g in reversed(word):
            if not v:
                return {}
            v = self.act(g, v)
        return v

    def _act_label(self, g, label):
        hit = self._act_memo.get((g, label))
        if hit is None:
            hit = self._eval(g, label)
            self._act_memo[(g, label)] = hit
        return hit

    def _eval(self, g, label):
        fam, n = g
        if fam == "c":
            return self._c_label(n, label)
        if fam == "d":
            return self._d_label(n, label)
        if fam == "alpha":
            return self._half_sum(n, label, QONE)
        if fam == "beta":
            return self._half_sum(n, label, Q(-1))
        if fam == "a" or fam == "e":
            return self._exp_label(1, n, label)
        if fam == "ainv":
            return self._exp_label(-1, n - 2, label)
        if fam == "astar":
            return vec_scale(self._w_label(n, label), Q(-1))
        if fam == "h":
            return vec_scale(self._half_sum(n, label, Q(-1)), Q(-2))
        if fam == "f":
            return self._f_label(n, label)
        if fam == "L":
            return self._l_label(n, label)
        if fam == "T":
            return {label: self.chi[n]} if self.chi[n] else {}
        raise ValueError(f"family {fam!r} does not act here")

    def _c_label(self, n, label):
        d0, cpart, dpart = label
        if n < 0:
            return {(d0, _insert(cpart, -n), dpart): QONE}
        if n == 0:
            return {label: Q(-1)}
        t = dpart.count(n)
        if not t:
            return {}
        return {(d0, cpart, _drop_one(dpart, n)): Q(2 * n * t)}

    def _d_label(self, n, label):
        d0, cpart, dpart = label
        if n < 0:
            return {(d0, cpart, _insert(dpart, -n)): QONE}
        if n == 0:
            return {(d0 + 1, cpart, dpart): QONE}
        t = cpart.count(n)
        if not t:
            return {}
        return {(d0, _drop_one(cpart, n), dpart): Q(2 * n * t)}

    def _half_sum(self, n, label, d_sign):
        """alpha(n) = (c(n) + d(n))/2 or beta(n) = (c(n) - d(n))/2."""
        out = {}
        vec_iadd(out, self._c_label(n, label), Q(1, 2))
        vec_iadd(out, self._d_label(n, label), d_sign / 2)
        return out

    def _exp_label(self, eps, m, label):
        """Mode m of the shift field for eps*c, evaluated in closed form.

        The annihilation factor removes d-entries (each removal carries
        -2*eps times a multiplicity binomial), the creation factor appends a
        partition of c-entries with coefficient prod eps^r / (j^r * r!), and
        the zero-mode part multiplies by lam^eps while substituting
        d(0) -> d(0) - 2*eps.
        """
        d0, cpart, dpart = label
        lam_shift = self.lam if eps == 1 else QONE / self.lam
        out = {}
        for kept, removed in _removals(dpart):
            q = sum(e * r for e, r in removed.items())
            p = q - m - 1 + eps
            if p < 0:
                continue
            coeff = lam_shift
            for e, r in removed.items():
                coeff *= Q(-2 * eps) ** r * comb(dpart.count(e), r)
            for extra in _partitions(p):
                pcoeff = coeff
                for j in set(extra):
                    r = extra.count(j)
                    pcoeff *= Q(eps) ** r / (Q(j) ** r * factorial(r))
                newc = tuple(sorted(cpart + extra, reverse=True))
                # binomial expansion of (d0 - 2 eps)^d0_power
                for i in range(d0 + 1):
                    term = pcoeff * comb(d0, i) * Q(-2 * eps) ** (d0 - i)
                    vec_iadd(out, {(i, newc, kept): term})
        return out

    def _d_weight(self, label):
        return sum(label[2])

    def _max_entry(self, label):
        parts = label[1] + label[2]
        return max(parts) if parts else 0

    def _w_label(self, n, label):
        """Mode n (weight-0 indexing) of the normally ordered product of the
        alpha field with the weight -1 shift field; astar(n) is its negative."""
        out = {}
        # creation side: alpha(k), k <= -1, after the shift operator
        for k in range(n - self._d_weight(label), 0):
            inner = self._act_label(sym("ainv", n - k), label)
            for lbl2, c2 in inner.items():
                vec_iadd(out, self._act_label(sym("alpha", k), lbl2), c2)
        # annihilation side: alpha(k), k >= 0, first
        for k in range(0, self._max_entry(label) + 1):
            inner = self._act_label(sym("alpha", k), label)
            for lbl2, c2 in inner.items():
                vec_iadd(out, self._act_label(sym("ainv", n - k), lbl2), c2)
        return out

    def _f_label(self, n, label):
        """f(n) = sum_k chi[k] a_inv(n-k) - P(n) + D(n) where P is the
        normally ordered alpha * (alpha shift^{-1}) cube and D the normally
        ordered (d/dz alpha) shift^{-1} product."""
        out = {}
        for k in self.chi.support():
            vec_iadd(out, self._exp_label(-1, n - k - 2, label), self.chi[k])

        # P(n): creation arm alpha(k) W(n-k), k <= -1; W dies above
        # d_weight + max_entry + 1, giving the finite window.
        v = {label: QONE}
        reach = self._d_weight(label) + self._max_entry(label) + 1
        for k in range(n - reach - 1, 0):
            img = self._w_vec(n - k, v)
            for lbl2, c2 in img.items():
                vec_iadd(out, self._act_label(sym("alpha", k), lbl2), -c2)
        for k in range(0, self._max_entry(label) + 1):
            img = self._act_label(sym("alpha", k), label)
            vec_iadd(out, self._w_vec(n - k, img), Q(-1))

        # D(n): modes of the derivative field carry -k-1.
        for k in range(n - self._d_weight(label), -1):
            inner = self._act_label(sym("ainv", n - k), label)
            for lbl2, c2 in inner.items():
                vec_iadd(
                    out, self._act_label(sym("alpha", k), lbl2), Q(-k - 1) * c2
                )
        for k in range(-1, self._max_entry(label) + 1):
            if k == -1:
                continue  # the mode coefficient -k-1 vanishes
            inner = self._act_label(sym("alpha", k), label)
            for lbl2, c2 in inner.items():
                vec_iadd(
                    out, self._act_label(sym("ainv", n - k), lbl2), Q(-k - 1) * c2
                )
        return out

    def _w_vec(self, n, v):
        out = {}
        for lbl, c in v.items():
            vec_iadd(out, self._w_label(n, lbl), c)
        return out

    def _l_label(self, n, label):
        """L(n) from the lattice Virasoro vector: one half the normally
        ordered c d sum plus (n+1)/2 times d(n)."""
        # the lattice directions reuse the letters c and d, so build the
        # mode tuples directly instead of going through sym(), which
        # reserves those names for modeless central and grading elements
        out = {}
        for k in range(n - self._max_entry(label), 0):
            inner = self._act_label(("d", n - k), label)
            for lbl2, c2 in inner.items():
                vec_iadd(out, self._act_label(("c", k), lbl2), c2 / 2)
        for k in range(1, self._max_entry(label) + 1):
            inner = self._act_label(("c", k), label)
            for lbl2, c2 in inner.items():
                vec_iadd(out, self._act_label(("d", n - k), lbl2), c2 / 2)
        # k = 0 of the pair sum contributes -d(n)/2; with the derivative
        # term (n+1)/2 d(n) the total d(n) coefficient is n/2.
        if n:
            vec_iadd(out, self._d_label(n, label), Q(n, 2))
        return out


def label_to_json(label):
    d0, cpart, dpart = label
    return {"d0": d0, "c": list(cpart), "d": list(dpart), "sector": 0}


def label_from_json(data):
    if data.get("sector"):
        raise ValueError("nonzero sectors collapse into the d0 polynomial")
    return (
        int(data["d0"]),
        tuple(sorted(int(x) for x in data["c"])[::-1]),
        tuple(sorted(int(x) for x in data["d"])[::-1]),
    )


# ---------------------------------------------------------------------------
# reports


def _scalar_checks(handle, expected, zeros):
    checks = {}
    v = handle.cyclic()
    for name, (g, want) in expected.items():
        checks[name] = vec_eq(handle.act(g, v), vec_scale(v, want))
    for name, g in zeros.items():
        checks[name] = not handle.act(g, v)
    mismatches = sorted(name for name, ok in checks.items() if not ok)
    return checks, mismatches


def whittaker_vector_report(handle, n_max=4):
    """The cyclic vector's eigen-list: e(0) = lam, f(1) = mu, and the
    vanishing of e(n+1), h(n+1), f(n+2)."""
    expected = {
        "e(0)": (sym("e", 0), handle.lam),
        "f(1)": (sym("f", 1), handle.mu),
        "h(1)": (sym("h", 1), QZERO),
    }
    zeros = {}
    for n in range(1, n_max + 1):
        zeros[f"e({n})"] = sym("e", n)
        zeros[f"h({n + 1})"] = sym("h", n + 1)
        zeros[f"f({n + 2})"] = sym("f", n + 2)
    expected["h(1)"] = (sym("h", 1), QZERO)
    checks, mismatches = _scalar_checks(handle, expected, zeros)
    return {"checks": checks, "mismatches": mismatches, "ok": not mismatches}


def weyl_pair_report(handle, box, mode_bound=2):
    """[a(n), astar(m)] = delta_{n+m,0} on every box label."""
    labels = handle.box_labels(box)
    mismatches = []
    for n in range(-mode_bound, mode_bound + 1):
        for m in range(-mode_bound, mode_bound + 1):
            x, y = sym("a", n), sym("astar", m)
            for lbl in labels:
                v = {lbl: QONE}
                lhs = handle.act(x, handle.act(y, v))
                vec_iadd(lhs, handle.act(y, handle.act(x, v)), Q(-1))
                want = v if n + m == 0 else {}
                if not vec_eq(lhs, want):
                    mismatches.append({"n": n, "m": m, "label": lbl})
    return {
        "labels": len(labels),
        "mismatches": mismatches,
        "ok": not mismatches,
    }


def identity_field_report(handle, box, n_range=(-2, 2)):
    """The composite of the two shift fields is the identity field: for each
    n, sum_k a(k) a_inv(n-k) v = delta_{n,0} v on box labels."""
    labels = handle.box_labels(box)
    mismatches = []
    for n in range(n_range[0], n_range[1] + 1):
        for lbl in labels:
            v = {lbl: QONE}
            dw = handle._d_weight(lbl)
            got = {}
            for k in range(n - dw, dw + n * (n > 0) + 1):
                inner = handle.act(sym("ainv", n - k), v)
                if inner:
                    vec_iadd(got, handle.act(sym("a", k), inner))
            want = v if n == 0 else {}
            if not vec_eq(got, want):
                mismatches.append({"n": n, "label": lbl})
    return {
        "labels": len(labels),
        "mismatches": mismatches,
        "ok": not mismatches,
    }


def l0_grading_report(handle, box):
    """L(0) acts on each box label by its total c/d weight; the zero
    eigenspace inside the box is exactly the d(0)-power family."""
    labels = handle.box_labels(box)
    mismatches = []
    lowest = []
    for lbl in labels:
        v = {lbl: QONE}
        wt = handle.weight_of_label(lbl)
        if not vec_eq(handle.act(sym("L", 0), v), vec_scale(v, Q(wt))):
            mismatches.append(lbl)
        if wt == 0:
            lowest.append(lbl)
    d0_only = all(lbl[1] == () and lbl[2] == () for lbl in lowest)
    return {
        "labels": len(labels),
        "mismatches": mismatches,
        "lowest_component": len(lowest),
        "lowest_is_d0_family": d0_only,
        "ok": not mismatches and d0_only,
    }


def m_side_span_report(handle, box, word_length=None):
    """Weyl-side cyclicity: words in a(-n-1), astar(-n) modes applied to the
    cyclic vector span every box label."""
    # pure d-direction labels are only reached through cancellations
    # between longer words, so the word pool must overshoot the target
    # box in both weight and length
    if word_length is None:
        word_length = 2 * box.max_length
    weight_cap = box.max_weight + 2
    creators = [sym("a", -n) for n in range(1, weight_cap + 1)]
    creators += [sym("astar", -n) for n in range(0, weight_cap + 1)]
    space = RowSpace()
    count = 0
    for r in range(word_length + 1):
        for word in combinations_with_replacement(creators, r):
            wt = -sum(m for _, m in word)
            if wt > weight_cap:
                continue
            space.add_row(handle.apply_word(word, handle.cyclic()), tag=word)
            count += 1
    targets = handle.box_labels(box)
    missed = [lbl for lbl in targets if space.residual({lbl: QONE})]
    return {
        "words": count,
        "rank": space.rank,
        "targets": len(targets),
        "targets_missed": missed,
        "ok": not missed,
    }


def sugawara_character_report(handle, lo=None, hi=None):
    """The quadratic central modes built from the realized e, h, f agree
    with the declared chi scalars on the cyclic vector."""
    support = handle.chi.support()
    if lo is None:
        lo = (support[0] if support else 0) - 1
    if hi is None:
        hi = max(support[-1] if support else 0, 1) + 1
    v = handle.cyclic()
    mismatches = []
    measured = {}
    for n in range(lo, hi + 1):
        got = T_mode(n, handle, v)
        want = handle.chi[n]
        if not vec_eq(got, vec_scale(v, want)):
            mismatches.append(n)
        cyc = got.get(handle.cyclic_label, QZERO)
        measured[n] = format_rational(cyc) if set(got) <= {handle.cyclic_label} else None
    return {
        "modes": [lo, hi],
        "measured": measured,
        "mismatches": mismatches,
        "ok": not mismatches,
    }


def d_semisimple_report(handle, box, mode_bound=2):
    """With d := -L(0), check [d, x(n)] v = n x(n) v on box labels for the
    three realized families; the equality holds exactly when chi is
    supported at mode 0."""
    labels = handle.box_labels(box)
    gens = [
        sym(fam, n)
        for fam in ("e", "h", "f")
        for n in range(-mode_bound, mode_bound + 1)
    ]
    L0 = sym("L", 0)
    residuals = []
    for g in gens:
        for lbl in labels:
            v = {lbl: QONE}
            gv = handle.act(g, v)
            got = vec_scale(handle.act(L0, gv), Q(-1))
            vec_iadd(got, handle.act(g, handle.act(L0, v)))
            vec_iadd(got, gv, Q(-g[1]))
            if got:
                residuals.append({"generator": g, "label": lbl})
    graded = set(handle.chi.support()) <= {0}
    return {
        "labels": len(labels),
        "generators": len(gens),
        "residuals": residuals,
        "chi_graded": graded,
        "ok": (not residuals) == graded,
    }


_EH_KEY = ORDERS["sl2_critical"]


def compare_realization(lam, chi, box, mode_bound=3):
    """Action-matrix comparison between this realization and the quotient
    module with the matching central series.

    chi carries the full weight-2 character: chi[1] = lam*mu and the
    nonpositive modes give the quotient's central series.
    """
    handle = PiModule(lam, chi)
    top = handle.chi.max_mode()
    if top is not None and top > 1:
        raise ValueError("character modes above 1 have no quotient analogue")
    series = Laurent(
        "weight2", {m: handle.chi[m] for m in handle.chi.support() if m <= 0}
    )
    crit = CriticalQuotient(handle.lam, handle.mu, series)
    words = box_labels(crit, box)

    psi = {}

    def psi_of(word):
        hit = psi.get(word)
        if hit is None:
            hit = handle.apply_word(word, handle.cyclic())
            psi[word] = hit
        return hit

    space = RowSpace()
    for wd in words:
        space.add_row(psi_of(wd), tag=wd)
    independent = space.rank == len(words)

    gens = [
        sym(fam, n)
        for fam in ("e", "h", "f")
        for n in range(-mode_bound, mode_bound + 1)
    ]
    mismatches = []
    for g in gens:
        for wd in words:
            left = handle.act(g, psi_of(wd))
            predicted = {}
            for u, cu in crit.act(g, {wd: QONE}).items():
                vec_iadd(predicted, psi_of(u), cu)
            if not vec_eq(left, predicted):
                mismatches.append({"generator": g, "word": wd})

    t_match = sugawara_character_report(handle)
    return {
        "words": len(words),
        "independent": independent,
        "generators": len(gens),
        "mismatches": mismatches,
        "character_check": t_match["ok"],
        "ok": independent and not mismatches and t_match["ok"],
    }
