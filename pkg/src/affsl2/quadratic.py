"""Derived quadratic operators on restricted module handles.

L_mode implements the normally ordered quadratic Virasoro modes

    L(n) = 1/(2(k+2)) sum_k [ :e(k)f(n-k): + :f(k)e(n-k): + 1/2 :h(k)h(n-k): ]

for level k != -2, with the convention that the factor with negative mode
stands left.  T_mode is the same bilinear sum without the 1/(k+2) factor,
defined exactly at level -2, where its modes are central.  Both take any
module handle exposing act(symbol, vector), level and weight_of_label;
mode sums truncate at a bound derived from the vector's weight and a
widening check asserts the extreme slices contribute nothing.

Laurent is the shared container for finitely supported series data with an
explicit index convention: weight1 means chi(z) = sum chi_n z^{-n-1},
weight2 means c(z) = sum c_n z^{-n-2}.
"""

from __future__ import annotations

from .exact import Q, QONE, QZERO, vec_iadd, vec_scale
from .algebra import sym


class Laurent:
    __slots__ = ("convention", "coeffs")

    def __init__(self, convention, coeffs=None):
        if convention not in ("weight1", "weight2"):
            raise ValueError(f"unknown convention {convention!r}")
        self.convention = convention
        self.coeffs = {}
        for n, c in (coeffs or {}).items():
            c = Q(c)
            if c:
                self.coeffs[int(n)] = c

    def __getitem__(self, n):
        return self.coeffs.get(n, QZERO)

    def __eq__(self, other):
        return (
            isinstance(other, Laurent)
            and self.convention == other.convention
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"Laurent({self.convention!r}, {self.coeffs!r})"

    def support(self):
        return sorted(self.coeffs)

    def max_mode(self):
        return max(self.coeffs, default=None)


def central_character_from_chi(chi):
    """The weight-2 series c(z) = 1/2 (chi(z)^2 - 2 d/dz chi(z)).

    In modes: c_m = 1/2 sum_k chi_k chi_{m-k} + (m+1) chi_m.
    """
    if chi.convention != "weight1":
        raise ValueError("chi must use the weight1 convention")
    out = {}
    ks = chi.support()
    for k in ks:
        for l in ks:
            m = k + l
            out[m] = out.get(m, QZERO) + Q(1, 2) * chi[k] * chi[l]
    for k in ks:
        out[k] = out.get(k, QZERO) + Q(k + 1) * chi[k]
    return Laurent("weight2", out)


# ---------------------------------------------------------------------------
# quadratic mode sums


def pair_words(n, k):
    """The k-slice of the unnormalized sum, as (coeff, word) pairs with the
    negative-mode factor left."""
    out = []
    for f1, f2, c in (("e", "f", Q(1, 2)), ("f", "e", Q(1, 2)), ("h", "h", Q(1, 4))):
        a, b = sym(f1, k), sym(f2, n - k)
        out.append((c, (a, b) if k < 0 else (b, a)))
    return out


def _vector_weight(handle, v):
    return max((handle.weight_of_label(lbl) for lbl in v), default=0)


def _apply_word(handle, word, v):
    for s in reversed(word):
        if not v:
            return {}
        v = handle.act(s, v)
    return v


def _mode_sum(handle, n, v):
    """The unnormalized sum 1/2 [ef + fe + hh/2] at mode n applied to v."""
    if not v:
        return {}
    bound = _vector_weight(handle, v) + abs(n) + 2
    out = {}
    for k in range(-bound, bound + 1):
        slice_total = {}
        for coeff, word in pair_words(n, k):
            vec_iadd(slice_total, _apply_word(handle, word, v), coeff)
        if abs(k) == bound and slice_total:
            raise RuntimeError(
                f"mode-sum truncation too tight at k={k} for n={n}"
            )
        vec_iadd(out, slice_total)
    return out


def L_mode(n, handle, v):
    """Virasoro mode L(n) acting through the handle; level must not be -2."""
    kappa = handle.level
    if kappa == Q(-2):
        raise ValueError("L(n) is undefined at level -2; use T_mode")
    return vec_scale(_mode_sum(handle, n, v), QONE / (kappa + 2))


def T_mode(n, handle, v):
    """Central field mode T(n) at level -2 (the unnormalized sum)."""
    if handle.level != Q(-2):
        raise ValueError("T(n) is defined only at level -2")
    return _mode_sum(handle, n, v)


def virasoro_residual(n, m, handle, v):
    """[L(n),L(m)]v - (n-m) L(n+m)v - (n^3-n)/12 * 3k/(k+2) delta_{n+m,0} v.

    Identically zero on every vector of a genuine level-k module.
    """
    kappa = handle.level
    out = L_mode(n, handle, L_mode(m, handle, v))
    vec_iadd(out, L_mode(m, handle, L_mode(n, handle, v)), -QONE)
    vec_iadd(out, L_mode(n + m, handle, v), Q(m - n))
    if n + m == 0 and n:
        cc = Q(3) * kappa / (kappa + 2)
        vec_iadd(out, v, -Q(n**3 - n, 12) * cc)
    return out
