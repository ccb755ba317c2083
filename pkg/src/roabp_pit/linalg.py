"""Finite-field linear algebra: incremental row spans and the rank extractor.

Matrices of field elements are lists of rows (lists of ints); r x r matrices
get flattened row-major to r**2-vectors before any span operation.
"""

from .errors import DimensionMismatch, OrderTooSmall, TooLarge
from .field import Field, multiplicative_order

COUNT_BAD_ALPHAS_MAX_P = 1 << 16


class SpanBasis:
    """Row space kept in reduced row-echelon form, grown one vector at a time."""

    __slots__ = ("field", "m", "rows", "pivots", "_sealed")

    def __init__(self, field: Field, m: int):
        self.field = field
        self.m = m
        self.rows = []
        self.pivots = []
        self._sealed = False

    @property
    def rank(self) -> int:
        return len(self.rows)

    def seal(self):
        """Mark the basis immutable; further inserts are a bug."""
        self._sealed = True
        return self

    def _reduce(self, v):
        p = self.field.p
        v = [a % p for a in v]
        for row, piv in zip(self.rows, self.pivots):
            c = v[piv]
            if c:
                for j in range(piv, self.m):
                    v[j] = (v[j] - c * row[j]) % p
        return v

    def insert(self, v) -> bool:
        """Gaussian-elimination insert; True iff v was independent of the basis."""
        if self._sealed:
            raise RuntimeError("SpanBasis is sealed")
        if len(v) != self.m:
            raise DimensionMismatch(f"vector of dim {len(v)}, basis ambient dim {self.m}")
        v = self._reduce(v)
        piv = next((j for j, a in enumerate(v) if a), None)
        if piv is None:
            return False
        inv = self.field.inv(v[piv])
        p = self.field.p
        v = [a * inv % p for a in v]
        # keep the existing rows reduced against the new pivot
        for row in self.rows:
            c = row[piv]
            if c:
                for j in range(piv, self.m):
                    row[j] = (row[j] - c * v[j]) % p
        at = next((k for k, q in enumerate(self.pivots) if q > piv), len(self.pivots))
        self.rows.insert(at, v)
        self.pivots.insert(at, piv)
        return True

    def contains(self, v) -> bool:
        if len(v) != self.m:
            raise DimensionMismatch(f"vector of dim {len(v)}, basis ambient dim {self.m}")
        return all(a == 0 for a in self._reduce(v))


def span_insert(b: SpanBasis, v):
    """Functional wrapper: returns (b, grew)."""
    return b, b.insert(v)


def span_of(field: Field, m: int, vectors) -> SpanBasis:
    b = SpanBasis(field, m)
    for v in vectors:
        b.insert(v)
    return b


def span_equal(a: SpanBasis, b: SpanBasis) -> bool:
    if a.m != b.m:
        raise DimensionMismatch(f"ambient dims differ: {a.m} vs {b.m}")
    if a.rank != b.rank:
        return False
    return all(b.contains(row) for row in a.rows) and all(a.contains(row) for row in b.rows)


def matrix_rank(rows, field: Field) -> int:
    """Rank by destructive full Gaussian elimination (independent of SpanBasis)."""
    if not rows:
        return 0
    p = field.p
    mat = [[a % p for a in row] for row in rows]
    ncols = len(mat[0])
    rank = 0
    col = 0
    while rank < len(mat) and col < ncols:
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = field.inv(mat[rank][col])
        mat[rank] = [a * inv % p for a in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                c = mat[i][col]
                mat[i] = [(a - c * b) % p for a, b in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank


def flatten_matrix(m):
    return [a for row in m for a in row]


def mat_eval(layer, x: int):
    """Evaluate a matrix of UniPoly entries at a point."""
    return [[entry.eval(x) for entry in row] for row in layer]


def mat_mul(a, b, field: Field):
    p = field.p
    r = len(a)
    cols = len(b[0])
    inner = len(b)
    out = [[0] * cols for _ in range(r)]
    for i in range(r):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            c = ai[k]
            if c == 0:
                continue
            bk = b[k]
            for j in range(cols):
                oi[j] = (oi[j] + c * bk[j]) % p
    return out


def extractor_points(f: Field, omega: int, alpha: int, r2: int):
    """The geometric-progression seeds omega**l * alpha for l in [0, r2)."""
    p = f.p
    alpha %= p
    pts = []
    acc = alpha
    for _ in range(r2):
        pts.append(acc)
        acc = acc * omega % p
    return pts


def merged_span_evals(m_layer, n_layer, field: Field, omega: int, alpha: int, r2: int, n: int):
    """The r2 products M(w**l a) * N((w**l a)**n), the merged-layer evaluations.

    Requires ord(omega) >= n**2 so the underlying rank extractor applies.
    """
    if multiplicative_order(field, omega) < n * n:
        raise OrderTooSmall(f"ord(omega) must be >= n^2 = {n * n}")
    out = []
    for t in extractor_points(field, omega, alpha, r2):
        left = mat_eval(m_layer, t)
        right = mat_eval(n_layer, pow(t, n, field.p))
        out.append(mat_mul(left, right, field))
    return out


def count_bad_alphas(m_rows, field: Field, omega: int, r: int) -> int:
    """Exhaustively count seeds alpha whose extractor rows drop the rank of M.

    M is an n x r' matrix over a small field; a seed is bad when the first
    s = rank(M) rows of A_alpha M have rank < s, with (A_alpha)_{i,j} =
    (omega**i alpha)**j.  Test-support oracle only: refuses p > 2**16.
    """
    if field.p > COUNT_BAD_ALPHAS_MAX_P:
        raise TooLarge(f"count_bad_alphas is an exhaustive oracle; p = {field.p} > 2**16")
    s = matrix_rank(m_rows, field)
    if s == 0:
        return 0
    p = field.p
    n = len(m_rows)
    rprime = len(m_rows[0])
    bad = 0
    for alpha in range(p):
        seeds = extractor_points(field, omega, alpha, s)
        # rows i < s of A_alpha M, with (A_alpha)_{i, j} = seeds[i]**j
        rows = []
        for seed in seeds:
            acc = 1
            row = [0] * rprime
            for j in range(n):
                mj = m_rows[j]
                for t in range(rprime):
                    row[t] = (row[t] + acc * mj[t]) % p
                acc = acc * seed % p
            rows.append(row)
        if matrix_rank(rows, field) < s:
            bad += 1
    return bad
