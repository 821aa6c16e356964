"""Exact rational scalars, sparse vectors and exact linear algebra.

Every computation in this package runs over Q with arbitrary precision.
Scalars are gmpy2.mpq when available (much faster), fractions.Fraction
otherwise; both are always-reduced and hash/compare-compatible.

Vectors are plain dicts {label: rational} over opaque hashable labels,
with the invariant that no zero coefficient is ever stored.  The linear
algebra below (RowSpace) keeps a reduced row echelon form incrementally,
which gives rank, kernel bases, span membership and exact coordinates in
a chosen spanning set.

    >>> rows = [{"x": Q(1), "y": Q(1)}, {"y": Q(1), "z": Q(1)}]
    >>> [sorted(v.items()) for v in kernel_basis(rows, ["x", "y", "z"])]
    [[('x', mpq(1,1)), ('y', mpq(-1,1)), ('z', mpq(1,1))]]
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as _RAT
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _RAT


def Q(a=0, b=1):
    """Exact rational. Accepts ints, 'p/q' strings, or another rational."""
    return _RAT(a, b) if b != 1 else _RAT(a)


QZERO = Q(0)
QONE = Q(1)


def parse_rational(text):
    """Parse the external 'p/q' (or 'p') text form."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return Q(int(num), int(den))
    return Q(int(text))


def format_rational(q):
    """Render a rational in the external 'p/q' (or 'p') text form."""
    s = str(q)
    return s


# ---------------------------------------------------------------------------
# sparse vectors: dict label -> nonzero rational


def vec_iadd(dst, src, coeff=QONE):
    """In-place dst += coeff*src, dropping entries that cancel to zero."""
    if not coeff:
        return dst
    for label, c in src.items():
        new = dst.get(label, QZERO) + coeff * c
        if new:
            dst[label] = new
        else:
            dst.pop(label, None)
    return dst


def vec_scale(v, coeff):
    if not coeff:
        return {}
    return {label: coeff * c for label, c in v.items()}


def vec_sub(u, v):
    out = dict(u)
    vec_iadd(out, v, -QONE)
    return out


def vec_add(u, v):
    out = dict(u)
    vec_iadd(out, v)
    return out


def vec_is_zero(v):
    return not v


def vec_eq(u, v):
    return u == v


def vec_normalize(v):
    """Drop explicit zeros (vectors built by hand may carry them)."""
    return {label: c for label, c in v.items() if c}


# ---------------------------------------------------------------------------
# incremental exact row reduction


class RowSpace:
    """A growing row space kept in reduced row echelon form.

    Columns are opaque hashable labels ordered by first appearance (or by a
    declared order via declare_columns).  Each inserted row is reduced
    against the current pivots; if nonzero it is normalized, its pivot
    column is eliminated from every stored row, and it is stored together
    with an expression of it in terms of the inserted rows' tags.  That
    expression is what lets express() return exact coordinates.
    """

    def __init__(self):
        self._order = {}          # column label -> rank (insertion order)
        self._pivots = {}         # pivot column -> (row vector, tag combo)
        self._ntags = 0

    def declare_columns(self, cols):
        for c in cols:
            if c not in self._order:
                self._order[c] = len(self._order)

    def _col_rank(self, col):
        r = self._order.get(col)
        if r is None:
            r = len(self._order)
            self._order[col] = r
        return r

    def _leading(self, row):
        return min(row, key=self._col_rank)

    def _reduce(self, row, combo):
        # full reduction: stored pivot rows contain no other pivot columns,
        # so each elimination step strictly removes one pivot column.
        while True:
            hit = None
            for col in row:
                if col in self._pivots:
                    if hit is None or self._col_rank(col) < self._col_rank(hit):
                        hit = col
            if hit is None:
                return row, combo
            prow, pcombo = self._pivots[hit]
            c = row[hit]
            vec_iadd(row, prow, -c)
            vec_iadd(combo, pcombo, -c)

    def add_row(self, row, tag=None):
        """Insert a row; returns True when the rank grew."""
        if tag is None:
            tag = ("#", self._ntags)
        self._ntags += 1
        row = dict(vec_normalize(row))
        for col in row:
            self._col_rank(col)
        combo = {tag: QONE}
        row, combo = self._reduce(row, combo)
        if not row:
            return False
        lead = self._leading(row)
        inv = QONE / row[lead]
        row = vec_scale(row, inv)
        combo = vec_scale(combo, inv)
        # keep existing rows reduced against the new pivot
        for col, (prow, pcombo) in self._pivots.items():
            c = prow.get(lead)
            if c:
                vec_iadd(prow, row, -c)
                vec_iadd(pcombo, combo, -c)
        self._pivots[lead] = (row, combo)
        return True

    @property
    def rank(self):
        return len(self._pivots)

    def pivot_columns(self):
        return set(self._pivots)

    def residual(self, vec):
        """vec reduced against the space: zero iff vec is in the span."""
        row, _ = self._reduce(dict(vec_normalize(vec)), {})
        return row

    def contains(self, vec):
        return not self.residual(vec)

    def express(self, vec):
        """Exact coordinates of vec in the inserted rows' tags, or None."""
        row, combo = self._reduce(dict(vec_normalize(vec)), {})
        if row:
            return None
        return vec_scale(combo, -QONE)

    def kernel_basis(self, cols):
        """Basis of the kernel of the matrix whose rows were inserted.

        cols is the full ordered column universe (free columns that no row
        touches still contribute kernel vectors).
        """
        self.declare_columns(cols)
        basis = []
        pivot_cols = self._pivots
        for free in cols:
            if free in pivot_cols:
                continue
            v = {free: QONE}
            for pcol, (prow, _) in pivot_cols.items():
                c = prow.get(free)
                if c:
                    v[pcol] = -c
            basis.append(v)
        return basis


def rank_of(rows):
    rs = RowSpace()
    for r in rows:
        rs.add_row(r)
    return rs.rank


def kernel_basis(rows, cols):
    """Exact kernel basis of the sparse matrix given as rows over cols."""
    rs = RowSpace()
    rs.declare_columns(cols)
    for r in rows:
        rs.add_row(r)
    return rs.kernel_basis(cols)


def matrix_apply(rows, v):
    """Apply a matrix (list of row dicts) to a column vector dict."""
    out = []
    for row in rows:
        s = QZERO
        for col, c in row.items():
            s += c * v.get(col, QZERO)
        out.append(s)
    return out
