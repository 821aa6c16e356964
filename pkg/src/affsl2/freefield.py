"""Free-field realization: a rank-one Weyl pair tensored with a Heisenberg
mode family, carrying a level-kappa action of the affine algebra.

Labels are triples (a_part, astar_part, b_part) of weakly decreasing tuples
of positive ints:

    a_part entry v       <->  a(-v) factor, weight v
    astar_part entry v   <->  a*(1-v) factor, weight v-1 (entry 1 is a*(0))
    b_part entry v       <->  b(-v) factor, weight v

The "tensor" variant keeps the b factors as free creators with tail
eigenvalues chi_0, chi_1 (any level except -2 makes sense).  The "onedim"
variant forces level -2 and collapses every b(n) to the scalar chi_n.
"""

from itertools import combinations_with_replacement

from .algebra import sym, spectral_flow
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
from .quadratic import Laurent, T_mode, central_character_from_chi
from .rewrite import ORDERS
from .whittaker import CriticalQuotient, TruncationBox, box_labels

VARIANTS = ("tensor", "onedim")

_CYC = ((), (), ())


def _insert(part, entry):
    return tuple(sorted(part + (entry,), reverse=True))


def _drop_one(part, entry):
    out = list(part)
    out.remove(entry)
    return tuple(out)


class WakimotoModule:
    """Module over the affine algebra realized on Weyl/Heisenberg labels.

    e(n) acts as a(n).  h(n) and f(n) act by normally ordered quadratic and
    cubic mode sums in a, a*, b.  All sums are finite on a fixed label: an
    annihilator contributes only by pairing an entry actually present, so
    its mode is bounded by the label's weight, and creator depth is then
    bounded by the fixed total mode of the term.
    """

    def __init__(self, lam, mu, kappa, chi, variant="tensor"):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        if isinstance(chi, Laurent):
            if chi.convention != "weight1":
                raise ValueError("chi must use the weight1 convention")
            chi = chi.coeffs
        self.chi = Laurent("weight1", chi)
        self.lam, self.mu = Q(lam), Q(mu)
        self.level = Q(kappa)
        self.variant = variant
        if variant == "tensor":
            if any(n not in (0, 1) for n in self.chi.support()):
                raise ValueError(
                    "the tensor variant fixes Heisenberg tails only at modes 0 and 1"
                )
        elif self.level != Q(-2):
            raise ValueError("the onedim variant requires level -2")
        self.cyclic_label = _CYC
        self._act_memo = {}

    # ------------------------------------------------------------------
    # handle protocol

    def weight_of_label(self, label):
        a, s, b = label
        return sum(a) + sum(u - 1 for u in s) + sum(b)

    def cyclic(self):
        return {_CYC: QONE}

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
            hit = self._eval(g, label)
            self._act_memo[key] = hit
        return hit

    def _eval(self, g, label):
        fam = g[0]
        if fam == "c":
            return {label: self.level}
        n = g[1]
        if fam in ("e", "a"):
            return self._a_label(n, label)
        if fam == "astar":
            return self._astar_label(n, label)
        if fam == "b":
            return self._b_label(n, label)
        if fam == "h":
            return self._h_label(n, label)
        if fam == "f":
            return self._f_label(n, label)
        if fam == "phi":
            return self._phi_label(n, label)
        raise ValueError(f"symbol {g!r} does not act on this realization")

    # ------------------------------------------------------------------
    # primitive mode actions

    def _a_label(self, n, label):
        a, s, b = label
        if n <= -1:
            return {(_insert(a, -n), s, b): QONE}
        out = {}
        mult = s.count(n + 1)
        if mult:
            out[(a, _drop_one(s, n + 1), b)] = Q(mult)
        if n == 0 and self.lam:
            out[label] = out.get(label, QZERO) + self.lam
        return out

    def _astar_label(self, n, label):
        a, s, b = label
        if n <= 0:
            return {(a, _insert(s, 1 - n), b): QONE}
        out = {}
        mult = a.count(n)
        if mult:
            out[(_drop_one(a, n), s, b)] = Q(-mult)
        if n == 1 and self.mu:
            out[label] = out.get(label, QZERO) + self.mu
        return out

    def _b_label(self, n, label):
        if self.variant == "onedim":
            c = self.chi[n]
            return {label: c} if c else {}
        a, s, b = label
        if n <= -1:
            return {(a, s, _insert(b, -n)): QONE}
        out = {}
        mult = b.count(n)
        if mult:
            out[(a, s, _drop_one(b, n))] = Q(2 * mult * n) * (self.level + 2)
        tail = self.chi[n] if n in (0, 1) else QZERO
        if tail:
            out[label] = out.get(label, QZERO) + tail
        return out

    def _chain(self, label, ops):
        """Apply primitive (kind, mode) factors, rightmost first."""
        table = {"a": self._a_label, "s": self._astar_label, "b": self._b_label}
        vec = {label: QONE}
        for kind, mode in reversed(ops):
            prim = table[kind]
            nxt = {}
            for lb, co in vec.items():
                vec_iadd(nxt, prim(mode, lb), co)
            if not nxt:
                return {}
            vec = nxt
        return vec

    # ------------------------------------------------------------------
    # quadratic and cubic mode formulas

    def _h_label(self, n, label):
        wx = self.weight_of_label(label)
        reach = max(wx, 1)
        quad = {}
        for k in range(n - reach - 1, 0):
            vec_iadd(quad, self._chain(label, (("a", k), ("s", n - k))))
        for k in range(0, wx + 2):
            vec_iadd(quad, self._chain(label, (("s", n - k), ("a", k))))
        out = vec_scale(quad, Q(-2))
        vec_iadd(out, self._b_label(n, label))
        return out

    def _f_label(self, m, label):
        wx = self.weight_of_label(label)
        reach = max(wx, 1)
        out = {}
        lo = m - reach - 1
        for p in range(lo, reach + 1):
            for t in range(lo, reach + 1):
                k = m - p - t
                if k > -1:
                    continue
                vec_iadd(
                    out,
                    self._chain(label, (("a", k), ("s", p), ("s", t))),
                    -QONE,
                )
        for k in range(0, wx + 2):
            for t in range(m - k - reach - 1, reach + 1):
                p = m - k - t
                vec_iadd(
                    out,
                    self._chain(label, (("s", p), ("s", t), ("a", k))),
                    -QONE,
                )
        if m:
            vec_iadd(out, self._astar_label(m, label), -self.level * m)
        if self.variant == "onedim":
            for s_mode in self.chi.support():
                c = self.chi[s_mode]
                vec_iadd(out, self._astar_label(m - s_mode, label), c)
        else:
            for p in range(m - reach - 1, reach + 1):
                vec_iadd(out, self._chain(label, (("s", p), ("b", m - p))))
        return out

    def _phi_label(self, n, label):
        wx = self.weight_of_label(label)
        reach = max(wx, 1)
        out = {}
        if n:
            for k in range(n - reach - 1, reach + 2):
                vec_iadd(out, self._chain(label, (("s", k), ("a", n - k))))
        else:
            for k in range(-reach - 1, 0):
                vec_iadd(out, self._chain(label, (("a", k), ("s", -k))))
            for k in range(0, wx + 2):
                vec_iadd(out, self._chain(label, (("s", -k), ("a", k))))
        return vec_scale(out, Q(-2))

    # ------------------------------------------------------------------
    # enumeration

    def box_labels(self, box):
        """All labels with weight <= box.max_weight, length <= box.max_length."""
        w, l = box.max_weight, box.max_length

        def parts(max_entry, cost0, w_left, l_left):
            found = [()]
            for e in range(1, max_entry + 1):
                c = e - cost0
                if c > w_left or l_left == 0:
                    continue
                for rest in parts(e, cost0, w_left - c, l_left - 1):
                    found.append((e,) + rest)
            return found

        a_parts = parts(w, 0, w, l)
        s_parts = parts(w + 1, 1, w, l)
        b_parts = [()] if self.variant == "onedim" else a_parts
        out = []
        for pa in a_parts:
            for ps in s_parts:
                for pb in b_parts:
                    lbl = (pa, ps, pb)
                    if len(pa) + len(ps) + len(pb) > l:
                        continue
                    if self.weight_of_label(lbl) > w:
                        continue
                    out.append(lbl)
        out.sort(key=lambda lbl: (self.weight_of_label(lbl), lbl))
        return out


# ---------------------------------------------------------------------------
# eigenvalue reports on the cyclic vector


def _scalar_checks(handle, expected, zeros, extra=()):
    v = handle.cyclic()
    cyc = handle.cyclic_label
    checks = {}
    for name, g, scalar in expected:
        got = handle.act(g, v)
        want = {cyc: scalar} if scalar else {}
        checks[name] = vec_eq(got, want)
    for name, g in zeros:
        checks[name] = not handle.act(g, v)
    for name, g, vec in extra:
        checks[name] = vec_eq(handle.act(g, v), vec)
    mismatches = sorted(name for name, ok in checks.items() if not ok)
    return {"checks": checks, "mismatches": mismatches, "ok": not mismatches}


def cyclic_identity_report(handle, n_max=4):
    """Eigen-identities of the cyclic vector when the Heisenberg tail stops
    at mode 1: the f(1) value has a*(0) and a(-1) components, f(2), e(0),
    h(1) are scalars, and everything deeper vanishes.
    """
    if any(n >= 2 for n in handle.chi.support()):
        raise ValueError("identities assume the Heisenberg tail stops at mode 1")
    lam, mu, kap = handle.lam, handle.mu, handle.level
    chi0, chi1 = handle.chi[0], handle.chi[1]
    cyc = handle.cyclic_label
    f1 = {}
    vec_iadd(f1, {((), (1,), ()): QONE}, chi1 - 2 * mu * lam)
    vec_iadd(f1, {cyc: QONE}, mu * (chi0 - kap))
    vec_iadd(f1, {((1,), (), ()): QONE}, -mu * mu)
    expected = [
        ("f(2) scalar", sym("f", 2), mu * (chi1 - lam * mu)),
        ("e(0) scalar", sym("e", 0), lam),
        ("h(1) scalar", sym("h", 1), chi1 - 2 * lam * mu),
    ]
    zeros = []
    for n in range(1, n_max + 1):
        zeros.append((f"e({n}) vanishes", sym("e", n)))
        zeros.append((f"h({n + 1}) vanishes", sym("h", n + 1)))
        zeros.append((f"f({n + 2}) vanishes", sym("f", n + 2)))
    return _scalar_checks(handle, expected, zeros, [("f(1) value", sym("f", 1), f1)])


def _top_mode(handle):
    p = handle.chi.max_mode()
    if p is None or p < 2:
        raise ValueError("needs a Heisenberg tail whose top mode is at least 2")
    return p


def generalized_whittaker_check(handle, n_max=4):
    """Eigen-conditions of the cyclic vector when the tail's top mode p is
    at least 2; mismatches are reported, not raised."""
    p = _top_mode(handle)
    lam, mu, chi = handle.lam, handle.mu, handle.chi
    expected = [
        ("e(0) scalar", sym("e", 0), lam),
        ("h(1) scalar", sym("h", 1), chi[1] - 2 * lam * mu),
        (f"f({p + 1}) scalar", sym("f", p + 1), mu * chi[p]),
    ]
    for k in range(2, p + 1):
        expected.append((f"h({k}) scalar", sym("h", k), chi[k]))
    zeros = []
    for n in range(1, n_max + 1):
        zeros.append((f"e({n}) vanishes", sym("e", n)))
        zeros.append((f"h({n + p}) vanishes", sym("h", n + p)))
        zeros.append((f"f({n + p + 1}) vanishes", sym("f", n + p + 1)))
    report = _scalar_checks(handle, expected, zeros)
    report["top_mode"] = p
    return report


def twisted_act(handle, s, g, v):
    """Action pre-composed with the mode-shifting automorphism."""
    out = {}
    for image, c in spectral_flow(s, g).items():
        vec_iadd(out, handle.act(image, v), c)
    return out


def twisted_whittaker_check(handle, s, n_max=4):
    """The cyclic vector's eigen-conditions after twisting by the
    mode-shifting automorphism of amount s."""
    p = _top_mode(handle)
    lam, mu, chi = handle.lam, handle.mu, handle.chi
    v = handle.cyclic()
    cyc = handle.cyclic_label
    checks = {}

    def scalar_ok(g, scalar):
        want = {cyc: scalar} if scalar else {}
        return vec_eq(twisted_act(handle, s, g, v), want)

    checks[f"e({s}) scalar"] = scalar_ok(sym("e", s), lam)
    checks["h(1) scalar"] = scalar_ok(sym("h", 1), chi[1] - 2 * lam * mu)
    for k in range(2, p + 1):
        checks[f"h({k}) scalar"] = scalar_ok(sym("h", k), chi[k])
    checks[f"f({p + 1 - s}) scalar"] = scalar_ok(sym("f", p + 1 - s), mu * chi[p])
    for n in range(1, n_max + 1):
        checks[f"e({n + s}) vanishes"] = scalar_ok(sym("e", n + s), QZERO)
        checks[f"h({n + p}) vanishes"] = scalar_ok(sym("h", n + p), QZERO)
        checks[f"f({n + p + 1 - s}) vanishes"] = scalar_ok(
            sym("f", n + p + 1 - s), QZERO
        )
    mismatches = sorted(name for name, ok in checks.items() if not ok)
    return {
        "twist": s,
        "top_mode": p,
        "checks": checks,
        "mismatches": mismatches,
        "ok": not mismatches,
    }


# ---------------------------------------------------------------------------
# central series at level -2


def realized_central_series(chi):
    """Exact T-eigen series of the level -2 realization with tail chi.

    The series is half of central_character_from_chi(chi), i.e. the
    coefficient of z^(-m-2) is (1/4) sum_k chi_k chi_(m-k) + (m+1)/2 chi_m.
    The half is forced by the normalization of the quadratic modes, whose
    mode 1 acts by lam*mu on every cyclic vector; central_series_report
    measures the same numbers directly.
    """
    if not isinstance(chi, Laurent):
        chi = Laurent("weight1", chi)
    doubled = central_character_from_chi(chi)
    return Laurent(
        "weight2", {m: doubled[m] / 2 for m in doubled.support()}
    )


def central_series_report(handle, extra_modes=2):
    """Measure T(n) on the cyclic vector and compare with the predicted
    series; modes outside the predicted support must act by zero."""
    if handle.level != Q(-2):
        raise ValueError("the central series lives at level -2")
    predicted = realized_central_series(handle.chi)
    support = predicted.support()
    lo = (support[0] if support else 0) - extra_modes
    hi = (support[-1] if support else 0) + extra_modes
    v = handle.cyclic()
    cyc = handle.cyclic_label
    measured = {}
    mismatches = []
    for n in range(lo, hi + 1):
        got = T_mode(n, handle, v)
        want = predicted[n]
        if not vec_eq(got, vec_scale(v, want)):
            mismatches.append(n)
        scalar = got.get(cyc, QZERO) if set(got) <= {cyc} else None
        measured[n] = None if scalar is None else format_rational(scalar)
    return {
        "modes": [lo, hi],
        "predicted": {m: format_rational(predicted[m]) for m in support},
        "measured": measured,
        "mismatches": mismatches,
        "ok": not mismatches,
    }


# ---------------------------------------------------------------------------
# structural probes


def _closure(handle, start, gens, rounds, inside, until=None):
    """Breadth-first span closure of a vector under single generator
    applications, restricted to the inside window.  Stops early once the
    until predicate holds for a produced vector."""
    space = RowSpace()
    space.add_row(start, tag=())
    frontier = [start]
    found = bool(until and until(start))
    applications = 0
    for _ in range(rounds):
        if found:
            break
        grew = []
        for vec in frontier:
            for g in gens:
                img = handle.act(g, vec)
                applications += 1
                if img and inside(img) and space.add_row(img, tag=applications):
                    grew.append(img)
                    if until and until(img):
                        found = True
        if not grew:
            break
        frontier = grew
    return space, applications, found


def cyclicity_probe(handle, box, gen_modes=None, rounds=None, indices=(1, 2)):
    """Two-part irreducibility evidence for the subalgebra generated by the
    e and phi mode families.

    Part one (cyclicity): the closure of the cyclic vector under single
    e(n) / phi(n) applications spans every Weyl-pair unit label inside the
    box.  Part two (sample regain): starting from each such unit label, the
    same closure recovers a vector with a nonzero cyclic coefficient.  The
    report also records the direct check that phi(i_1)...phi(i_r) applied
    to a(-i_1)...a(-i_r) times the cyclic vector lands on the cyclic line
    with a nonzero coefficient.
    """
    if not handle.lam:
        raise ValueError("the probe needs a nonzero a(0) eigenvalue")
    if gen_modes is None:
        gen_modes = range(-box.max_weight - 1, box.max_weight + 2)
    gens = [sym(fam, m) for fam in ("e", "phi") for m in gen_modes]
    weight_cap = box.max_weight + 2
    entry_cap = 2 * box.max_length + 2
    if rounds is None:
        rounds = box.max_weight * max(box.max_length, 1) + 2

    def inside(vec):
        return all(
            handle.weight_of_label(lbl) <= weight_cap
            and sum(len(part) for part in lbl) <= entry_cap
            for lbl in vec
        )

    space, applications, _ = _closure(
        handle, handle.cyclic(), gens, rounds, inside
    )
    targets = [lbl for lbl in handle.box_labels(box) if not lbl[2]]
    missed = [lbl for lbl in targets if space.residual({lbl: QONE})]

    cyc = handle.cyclic_label

    def hits_cyclic(vec):
        return bool(vec.get(cyc))

    not_regained = []
    for lbl in targets:
        if lbl == cyc:
            continue
        _, more, found = _closure(
            handle, {lbl: QONE}, gens, rounds, inside, until=hits_cyclic
        )
        applications += more
        if not found:
            not_regained.append(lbl)

    word = tuple(sym("phi", i) for i in sorted(indices))
    start = handle.apply_word(
        tuple(sym("a", -i) for i in sorted(indices)), handle.cyclic()
    )
    landed = handle.apply_word(word, start)
    coeff = landed.get(cyc, QZERO)
    pure = set(landed) <= {cyc}
    return {
        "applications": applications,
        "span_rank": space.rank,
        "targets": len(targets),
        "targets_missed": missed,
        "not_regained": not_regained,
        "annihilation_indices": list(indices),
        "annihilation_pure": pure,
        "annihilation_coefficient": format_rational(coeff),
        "ok": not missed and not not_regained and bool(coeff),
    }


def nonisomorphism_fingerprint(handle):
    """Invariants separating the level -2 realizations: eigen-scalars of the
    cyclic vector, read off by acting, plus the induced weight-2 series."""
    if handle.variant != "onedim":
        raise ValueError("fingerprints compare level -2 realizations")
    v = handle.cyclic()
    cyc = handle.cyclic_label

    def scalar(g):
        got = handle.act(g, v)
        if not got:
            return QZERO
        if set(got) == {cyc}:
            return got[cyc]
        return None

    p = handle.chi.max_mode()
    top = max(p if p is not None else 1, 1)
    fp = {
        "e0": format_rational(scalar(sym("e", 0))),
        "h": {},
        "f_mode": top + 1,
    }
    for k in range(1, top + 1):
        s = scalar(sym("h", k))
        fp["h"][k] = None if s is None else format_rational(s)
    s = scalar(sym("f", top + 1))
    fp["f"] = None if s is None else format_rational(s)
    series = realized_central_series(handle.chi)
    fp["central"] = {m: format_rational(series[m]) for m in series.support()}
    return fp


# ---------------------------------------------------------------------------
# basis and cross-realization certificates

_EH_KEY = ORDERS["sl2_critical"]


def _eh_words(box):
    """Creator words in e(-n-1), h(-m) sorted the same way the level -2
    quotient sorts its labels."""
    creators = [sym("e", -n) for n in range(1, box.max_weight + 1)]
    creators += [sym("h", -n) for n in range(0, box.max_weight + 1)]
    creators.sort(key=_EH_KEY)
    out = []
    for r in range(box.max_length + 1):
        for combo in combinations_with_replacement(creators, r):
            if -sum(m for _, m in combo) <= box.max_weight:
                out.append(combo)
    return sorted(out, key=lambda wd: (-sum(m for _, m in wd), len(wd), wd))


def basis_certificate(handle, box, span_box=None):
    """Linear-independence (and optionally spanning) certificate for the
    images of the e/h creator words applied to the cyclic vector."""
    words = _eh_words(box)
    space = RowSpace()
    for wd in words:
        space.add_row(handle.apply_word(wd, handle.cyclic()), tag=wd)
    report = {
        "words": len(words),
        "rank": space.rank,
        "independent": space.rank == len(words),
    }
    if span_box is not None:
        # spanning a label with several astar entries takes words about
        # twice as long: the leading term of each h letter is an a/astar
        # pair, and the unwanted a entries only cancel against longer words
        pool = TruncationBox(
            max(box.max_weight, span_box.max_weight + 1),
            max(box.max_length, 2 * span_box.max_length),
        )
        pool_words = _eh_words(pool)
        for wd in pool_words:
            space.add_row(handle.apply_word(wd, handle.cyclic()), tag=wd)
        targets = handle.box_labels(span_box)
        missed = [lbl for lbl in targets if space.residual({lbl: QONE})]
        report["span_pool_words"] = len(pool_words)
        report["span_targets"] = len(targets)
        report["span_missed"] = missed
        report["spans"] = not missed
    report["ok"] = report["independent"] and report.get("spans", True)
    return report


def critical_match_report(lam, mu, chi, box, mode_bound=3):
    """Compare the onedim realization against the PBW quotient whose central
    series is realized_central_series(chi): same creator words, same action
    matrices.

    The comparison is only meaningful when the realization's cyclic vector
    satisfies the same plain eigen-conditions as the quotient's, which pins
    mu = 0, chi_1 = 0, and chi supported in nonpositive modes.
    """
    if not isinstance(chi, Laurent):
        chi = Laurent("weight1", chi)
    if Q(mu):
        raise ValueError("the cyclic vectors only correspond when mu = 0")
    if chi[1]:
        raise ValueError("the cyclic vectors only correspond when chi_1 = 0")
    top = chi.max_mode()
    if top is not None and top > 0:
        raise ValueError("the quotient needs chi supported in modes <= 0")
    wak = WakimotoModule(lam, mu, Q(-2), chi, variant="onedim")
    series = realized_central_series(chi)
    crit = CriticalQuotient(lam, mu, series)
    words = box_labels(crit, box)

    psi = {}

    def psi_of(word):
        hit = psi.get(word)
        if hit is None:
            hit = wak.apply_word(word, wak.cyclic())
            psi[word] = hit
        return hit

    space = RowSpace()
    for wd in words:
        space.add_row(psi_of(wd), tag=wd)
    independent = space.rank == len(words)

    gens = [sym(fam, n) for fam in ("e", "h", "f") for n in range(-mode_bound, mode_bound + 1)]
    mismatches = []
    for g in gens:
        for wd in words:
            left = wak.act(g, psi_of(wd))
            predicted = {}
            for u, cu in crit.act(g, {wd: QONE}).items():
                vec_iadd(predicted, psi_of(u), cu)
            if not vec_eq(left, predicted):
                mismatches.append({"generator": g, "word": wd})
    return {
        "words": len(words),
        "independent": independent,
        "generators": len(gens),
        "series": {m: format_rational(series[m]) for m in series.support()},
        "series_convention": "half-squared-character",
        "mismatches": mismatches,
        "ok": independent and not mismatches,
    }
