"""PBW normal ordering for enveloping-algebra words, and monomial orders.

A word is a tuple of generator symbols read left to right as a product.
normal_order rewrites a word into the chosen PBW order by adjacent
transpositions, substituting x y = y x + [x, y] whenever two neighbours
are out of order.  Each swap strictly lowers the inversion count at fixed
length and each bracket substitution shortens the word, so the rewriting
terminates; results are memoized per (algebra, order, word).

Orders are registered key functions symbol -> sortable tuple.  Keys are
injective on the alphabet, classify symbols into creator / annihilator /
central bands, and fix the display layout of each module's basis:

    sl2            e-block (deepest first), h-block, f-block; then
                   annihilation modes; centrals last
    sl2_critical   the same with f(n<=0) pulled into their own band between
                   creators and annihilators (the quotient resolves them
                   recursively, they are not basis factors there)
    borel_vir      creators interleaved by depth, h L e within each depth,
                   matching the slot numbering below

Exponent vectors (finitely supported maps slot -> multiplicity, slots
starting at 1) carry the degree function and the three total orders used
by the basis certificates.
"""

from __future__ import annotations

from .exact import Q, QONE, vec_iadd, vec_scale
from .algebra import bracket, sym

# ---------------------------------------------------------------------------
# PBW sort keys


def _sl2_key(x):
    fam, n = x
    if fam == "c":
        return (2, 0, 0)
    block = {"e": 0, "h": 1, "f": 2}[fam]
    creator = (fam == "e" and n <= -1) or (fam == "h" and n <= 0) or (fam == "f" and n <= 0)
    return (0 if creator else 1, block, n)


def _sl2_critical_key(x):
    fam, n = x
    if fam == "c":
        return (3, 0, 0)
    if fam == "f":
        return (1, 0, n) if n <= 0 else (2, 2, n)
    block = {"e": 0, "h": 1}[fam]
    creator = (fam == "e" and n <= -1) or (fam == "h" and n <= 0)
    return (0 if creator else 2, block, n)


def borel_vir_slot(x):
    """Slot index of a creator symbol in the interleaved-depth layout:
    e(-n-1) -> 3n+1, L(-n) -> 3n+2, h(-n) -> 3n+3."""
    fam, m = x
    if fam == "e" and m <= -1:
        return -3 * m - 2
    if fam == "L" and m <= 0:
        return -3 * m + 2
    if fam == "h" and m <= 0:
        return -3 * m + 3
    raise ValueError(f"{x} is not a creator of the borel_vir layout")


def borel_vir_slot_symbol(slot):
    """Inverse of borel_vir_slot."""
    if slot < 1:
        raise ValueError("slots start at 1")
    k, j = divmod(slot - 1, 3)
    if j == 0:
        return sym("e", -k - 1)
    if j == 1:
        return sym("L", -k)
    return sym("h", -k)


def _borel_vir_key(x):
    fam, n = x
    if fam == "c1":
        return (2, 0, 0)
    if fam == "c":
        return (2, 1, 0)
    creator = (fam == "e" and n <= -1) or (fam in ("h", "L") and n <= 0)
    if creator:
        return (0, -borel_vir_slot(x), 0)
    block = {"e": 0, "h": 1, "L": 2}[fam]
    return (1, block, n)


ORDERS = {
    "sl2": _sl2_key,
    "sl2_critical": _sl2_critical_key,
    "borel_vir": _borel_vir_key,
}

_NO_MEMO = {}


def normal_order(alg, factors, order, coeff=QONE):
    """Rewrite the word into PBW order; dict {sorted word tuple: coefficient}."""
    out = _no(alg, tuple(factors), order, ORDERS[order])
    return vec_scale(out, coeff) if coeff != QONE else dict(out)


def _no(alg, factors, order, key):
    memo_key = (alg, order, factors)
    hit = _NO_MEMO.get(memo_key)
    if hit is not None:
        return hit
    out = None
    for i in range(len(factors) - 1):
        x, y = factors[i], factors[i + 1]
        if key(x) > key(y):
            swapped = factors[:i] + (y, x) + factors[i + 2:]
            out = dict(_no(alg, swapped, order, key))
            for z, c in bracket(alg, x, y).items():
                shorter = factors[:i] + (z,) + factors[i + 2:]
                vec_iadd(out, _no(alg, shorter, order, key), c)
            break
    if out is None:
        out = {factors: QONE}
    _NO_MEMO[memo_key] = out
    return out


# ---------------------------------------------------------------------------
# exponent vectors and the three total orders


def ev(*pairs):
    """Build an exponent vector from (slot, multiplicity) pairs."""
    out = {}
    for slot, mult in pairs:
        if slot < 1:
            raise ValueError("slots start at 1")
        if mult:
            out[slot] = out.get(slot, 0) + mult
    return {s: m for s, m in out.items() if m}


def unit_ev(slot):
    return {slot: 1}


def ev_size(i):
    return sum(i.values())


def degree_D(i):
    """Weighted degree: slot 3k+j (j = 1,2,3) contributes k per unit."""
    return sum(((s - 1) // 3) * m for s, m in i.items())


def _as_ev(i):
    return dict(i) if not isinstance(i, dict) else i


def cmp_revlex(i, j):
    """Total order refining: smaller minimal occupied slot means larger.

    Concretely the first slot (scanning upward) where the vectors differ
    decides, larger multiplicity there meaning larger vector.
    """
    i, j = _as_ev(i), _as_ev(j)
    for s in sorted(set(i) | set(j)):
        a, b = i.get(s, 0), j.get(s, 0)
        if a != b:
            return 1 if a > b else -1
    return 0


def cmp_principal(i, j):
    """(degree_D, size, revlex) compared lexicographically."""
    i, j = _as_ev(i), _as_ev(j)
    da, db = degree_D(i), degree_D(j)
    if da != db:
        return 1 if da > db else -1
    sa, sb = ev_size(i), ev_size(j)
    if sa != sb:
        return 1 if sa > sb else -1
    return cmp_revlex(i, j)


def cmp_size_highslot(i, j):
    """(size, then highest differing slot, larger multiplicity larger)."""
    i, j = _as_ev(i), _as_ev(j)
    sa, sb = ev_size(i), ev_size(j)
    if sa != sb:
        return 1 if sa > sb else -1
    for s in sorted(set(i) | set(j), reverse=True):
        a, b = i.get(s, 0), j.get(s, 0)
        if a != b:
            return 1 if a > b else -1
    return 0


def cmp_kji_triple(a, b):
    """Triple order: third component first, then second, then first, each
    by cmp_size_highslot."""
    for idx in (2, 1, 0):
        c = cmp_size_highslot(a[idx], b[idx])
        if c:
            return c
    return 0


def compare(order, i, j):
    """Dispatch: order in {revlex, principal, kji}; returns -1/0/1."""
    is_triple = isinstance(i, tuple) and len(i) == 3 and all(
        isinstance(p, dict) for p in i
    )
    js_triple = isinstance(j, tuple) and len(j) == 3 and all(
        isinstance(p, dict) for p in j
    )
    if is_triple != js_triple:
        raise ValueError("cannot compare a triple with a single vector")
    if order == "kji":
        if is_triple:
            return cmp_kji_triple(i, j)
        return cmp_size_highslot(i, j)
    if is_triple:
        raise ValueError(f"order {order} compares single vectors")
    if order == "revlex":
        return cmp_revlex(i, j)
    if order == "principal":
        return cmp_principal(i, j)
    raise ValueError(f"unknown order {order}")


def ev_freeze(i):
    return tuple(sorted(i.items()))


def ev_thaw(frozen):
    return dict(frozen)


def leading_term(v, cmp=cmp_principal):
    """The cmp-maximal label of a nonzero vector keyed by frozen exponent
    vectors (or anything the comparator accepts)."""
    if not v:
        raise ValueError("zero vector has no leading term")
    best = None
    for label in v:
        if best is None or cmp(_thaw_if_needed(label), _thaw_if_needed(best)) > 0:
            best = label
    return best


def _thaw_if_needed(label):
    if isinstance(label, dict):
        return label
    if isinstance(label, tuple) and all(
        isinstance(p, tuple) and len(p) == 2 and isinstance(p[0], int) for p in label
    ):
        return dict(label)
    return label
