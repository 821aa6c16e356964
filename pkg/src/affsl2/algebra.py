"""Generator symbols and bracket tables for the algebras in play.

A generator symbol is a plain tuple (family, mode): ("e", -3), ("h", 0),
("T", -2), ... with the central elements ("c", 0), ("c1", 0) and the
derivation ("d", 0) carrying mode 0.  Six bracket tables share this
alphabet; `bracket` is the single source of truth for structure constants,
and module actions specialize central symbols to scalars later, never here.

Algebra ids:
    affine_sl2    e, f, h, c           loop algebra plus center
    extended_sl2  ... plus d           the derivation added
    borel_vir     L, h, e, c1, c       Borel subalgebra extended by Virasoro
    borel_t       h, e, c, T, d        Borel subalgebra joined with the
                                       commutative T-family and d
    ttilde        T, d                 the T-family with the derivation alone
    borel1        h, e, c              same shape as the Borel subalgebra but
                                       the h-family carries the bracket
                                       [h(n),h(m)] = -4n delta c (it plays the
                                       role of the phi-modes downstream)
"""

from __future__ import annotations

from math import gcd

from .exact import Q, QONE, QZERO, vec_iadd, vec_scale

AFFINE_SL2 = "affine_sl2"
EXTENDED_SL2 = "extended_sl2"
BOREL_VIR = "borel_vir"
BOREL_T = "borel_t"
TTILDE = "ttilde"
BOREL1 = "borel1"

ALGEBRAS = (AFFINE_SL2, EXTENDED_SL2, BOREL_VIR, BOREL_T, TTILDE, BOREL1)

ALPHABETS = {
    AFFINE_SL2: ("e", "f", "h", "c"),
    EXTENDED_SL2: ("e", "f", "h", "c", "d"),
    BOREL_VIR: ("L", "h", "e", "c1", "c"),
    BOREL_T: ("h", "e", "c", "T", "d"),
    TTILDE: ("T", "d"),
    BOREL1: ("h", "e", "c"),
}

_MODELESS = {"c", "c1", "d"}


def sym(family, mode=0):
    if family in _MODELESS and mode != 0:
        raise ValueError(f"{family} carries mode 0, got {mode}")
    return (family, mode)


C = sym("c")
C1 = sym("c1")
D = sym("d")


def check_symbol(alg, x):
    fam, mode = x
    if fam not in ALPHABETS[alg]:
        raise ValueError(f"symbol {x} not in the {alg} alphabet")
    if fam in _MODELESS and mode != 0:
        raise ValueError(f"{fam} carries mode 0, got {mode}")


def alphabet_symbols(alg, max_mode):
    """All alphabet symbols of alg with |mode| <= max_mode."""
    out = []
    for fam in ALPHABETS[alg]:
        if fam in _MODELESS:
            out.append(sym(fam))
        else:
            out.extend(sym(fam, n) for n in range(-max_mode, max_mode + 1))
    return out


def bracket(alg, x, y):
    """[x, y] in the algebra alg, as a dict {symbol: rational}."""
    check_symbol(alg, x)
    check_symbol(alg, y)
    fx, nx = x
    fy, ny = y

    if fx in ("c", "c1") or fy in ("c", "c1"):
        return {}

    if fx == "d":
        if fy == "d":
            return {}
        # [d, y(n)] = n y(n) for every mode family present alongside d
        return {y: Q(ny)} if ny else {}
    if fy == "d":
        return {x: Q(-nx)} if nx else {}

    pair = fx + fy
    n, m = nx, ny

    if pair == "ee" or pair == "ff" or pair == "TT":
        return {}
    if pair == "ef":
        out = {sym("h", n + m): QONE}
        if n + m == 0 and n:
            out[C] = Q(n)
        return out
    if pair == "fe":
        out = {sym("h", n + m): -QONE}
        if n + m == 0 and m:
            out[C] = Q(-m)
        return out
    if pair == "he":
        return {sym("e", n + m): Q(2)}
    if pair == "eh":
        return {sym("e", n + m): Q(-2)}
    if pair == "hf":
        return {sym("f", n + m): Q(-2)}
    if pair == "fh":
        return {sym("f", n + m): Q(2)}
    if pair == "hh":
        if n + m == 0 and n:
            # borel1's h-family is the phi-family: different central term
            return {C: Q(-4 * n) if alg == BOREL1 else Q(2 * n)}
        return {}
    if pair == "LL":
        out = {}
        if n != m:
            out[sym("L", n + m)] = Q(n - m)
        if n + m == 0 and n:
            out[C1] = Q(n**3 - n, 12)
        return out
    if pair == "Lh":
        return {sym("h", n + m): Q(-m)} if m else {}
    if pair == "hL":
        return {sym("h", n + m): Q(n)} if n else {}
    if pair == "Le":
        return {sym("e", n + m): Q(-m)} if m else {}
    if pair == "eL":
        return {sym("e", n + m): Q(n)} if n else {}
    if pair in ("Th", "hT", "Te", "eT", "Tf", "fT", "TL", "LT"):
        return {}
    raise ValueError(f"no bracket rule for {x}, {y} in {alg}")


def bracket_vec(alg, u, v):
    """Bilinear extension of bracket to vectors of symbols."""
    out = {}
    for x, cx in u.items():
        for y, cy in v.items():
            vec_iadd(out, bracket(alg, x, y), cx * cy)
    return out


# ---------------------------------------------------------------------------
# symmetry maps


def sigma(x):
    """The order-reversal twist on the extended algebra, linear on symbols.

    e(n) -> f(n+1), f(n) -> e(n-1), h(n) -> -h(n) + delta_{n,0} c,
    c -> c, d -> d + h(0)/2.
    """
    check_symbol(EXTENDED_SL2, x)
    fam, n = x
    if fam == "e":
        return {sym("f", n + 1): QONE}
    if fam == "f":
        return {sym("e", n - 1): QONE}
    if fam == "h":
        out = {sym("h", n): -QONE}
        if n == 0:
            out[C] = QONE
        return out
    if fam == "c":
        return {C: QONE}
    return {D: QONE, sym("h", 0): Q(1, 2)}


def sigma_vec(v):
    out = {}
    for x, c in v.items():
        vec_iadd(out, sigma(x), c)
    return out


def spectral_flow(s, x):
    """Mode-shifting automorphism: e(n) -> e(n-s), f(n) -> f(n+s),
    h(n) -> h(n) - s delta_{n,0} c, c -> c."""
    check_symbol(AFFINE_SL2, x)
    fam, n = x
    if fam == "e":
        return {sym("e", n - s): QONE}
    if fam == "f":
        return {sym("f", n + s): QONE}
    if fam == "h":
        out = {sym("h", n): QONE}
        if n == 0 and s:
            out[C] = Q(-s)
        return out
    return {C: QONE}


def spectral_flow_vec(s, v):
    out = {}
    for x, c in v.items():
        vec_iadd(out, spectral_flow(s, x), c)
    return out


# ---------------------------------------------------------------------------
# the homomorphism into the rank-2 solvable algebra b = Ch + Ce, [h,e] = 2e
#
# Targets are formal monomials keyed ("h", 1) for h and ("e", k) for e^k
# (k >= 0; e^0 is the unit).


def phi_chi_s(s_set, chi, x):
    """Image of x in {d} union {T(i)} under the character-twisted map.

    s_set: nonempty set of negative integers; chi: map defined (and nonzero)
    on s_set, optionally at 0.  r is the positive generator of the subgroup
    of Z generated by s_set; d maps to -(r/2) h and T(i) maps to
    chi(i) e^{-i/r} for i in s_set union {0}, to 0 elsewhere.
    """
    s_set = set(s_set)
    if not s_set or any((not isinstance(i, int)) or i >= 0 for i in s_set):
        raise ValueError("s_set must be a nonempty set of negative integers")
    for i in s_set:
        if not Q(chi.get(i, 0)):
            raise ValueError(f"chi({i}) must be nonzero on s_set")
    r = 0
    for i in s_set:
        r = gcd(r, -i)

    fam, n = x
    if fam == "d":
        return {("h", 1): Q(-r, 2)}
    if fam != "T":
        raise ValueError(f"phi is defined on d and the T-family, got {x}")
    if n in s_set or n == 0:
        coeff = Q(chi.get(n, 0))
        if not coeff:
            return {}
        return {("e", -n // r): coeff}
    return {}


def b2_bracket(u, v):
    """Bracket in b = Ch + Ce extended to powers of e: [h, e^k] = 2k e^k."""
    out = {}
    for x, cx in u.items():
        for y, cy in v.items():
            if x[0] == "h" and y[0] == "e":
                vec_iadd(out, {y: Q(2 * y[1])}, cx * cy)
            elif x[0] == "e" and y[0] == "h":
                vec_iadd(out, {x: Q(-2 * x[1])}, cx * cy)
    return out
