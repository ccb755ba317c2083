"""Non-commutative polynomials and ABPs, and their black-box reduction to
set-multilinear ABPs via superdiagonal staircase matrices.

Words are tuples of variable indices; evaluating a word on the staircase
matrices records its letters at consecutive positions, which is what makes
the (0, l) entries of an evaluation recover the position-indexed commutative
image of the degree-l part.
"""

from .errors import (
    ArityMismatch,
    BadDegreeIndex,
    DegreeExceedsD,
    FieldTooSmall,
    FormatError,
    MalformedGraph,
    NonHomogeneousLabel,
    TooLarge,
)
from .field import Field
from .generator import gen_params_new, hitting_set
from .pit import PitVerdict, _padded_depth
from .roabp import SmAbp


class NcPoly:
    """Sparse non-commutative polynomial: ordered words mapped to nonzero
    coefficients."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field: Field, n: int, terms=None):
        self.field = field
        self.n = n
        clean = {}
        for word, c in (terms or {}).items():
            c %= field.p
            if c:
                if any(not 0 <= i < n for i in word):
                    raise ValueError(f"variable index out of range in word {word}")
                clean[tuple(word)] = c
        self.terms = clean

    @classmethod
    def constant(cls, field, n, c):
        return cls(field, n, {(): c})

    @classmethod
    def variable(cls, field, n, i):
        return cls(field, n, {(i,): 1})

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if self.field != other.field or self.n != other.n:
            raise ValueError("mixed rings")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = (out.get(w, 0) + c) % self.field.p
        return NcPoly(self.field, self.n, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = (out.get(w, 0) - c) % self.field.p
        return NcPoly(self.field, self.n, out)

    def __neg__(self):
        return NcPoly(self.field, self.n, {w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        self._check(other)
        p = self.field.p
        out = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                w = wa + wb
                out[w] = (out.get(w, 0) + ca * cb) % p
        return NcPoly(self.field, self.n, out)

    def scale(self, c):
        return NcPoly(self.field, self.n, {w: v * c for w, v in self.terms.items()})

    def hom(self, ell: int) -> "NcPoly":
        """Homogeneous part of word length ell."""
        return NcPoly(
            self.field, self.n, {w: c for w, c in self.terms.items() if len(w) == ell}
        )

    def __eq__(self, other):
        return (
            isinstance(other, NcPoly)
            and self.field == other.field
            and self.n == other.n
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"NcPoly(n={self.n}, {self.terms} mod {self.field.p})"


def phi(f: NcPoly) -> dict:
    """Commutative image: the word (i_1, ..., i_d) stands for the monomial
    x_{i_1, 1} * x_{i_2, 2} * ... * x_{i_d, d}.  Since every image monomial
    takes one variable per position, words map to distinct monomials and the
    word-keyed dict is already the canonical sparse form."""
    return dict(f.terms)


def phi_eval(table: dict, inst, field: Field) -> int:
    """Evaluate a phi image at an assignment inst[(i, pos)] with pos >= 1."""
    p = field.p
    total = 0
    for word, c in table.items():
        term = c
        for t, i in enumerate(word):
            term = term * inst[(i, t + 1)] % p
        total = (total + term) % p
    return total


def staircase_matrices(field: Field, n: int, D: int, inst):
    """The n instantiated staircase matrices: X_i is (D+1) x (D+1) with
    inst[(i, l)] at position (l-1, l) and zero elsewhere."""
    mats = []
    p = field.p
    for i in range(n):
        m = [[0] * (D + 1) for _ in range(D + 1)]
        for ell in range(1, D + 1):
            m[ell - 1][ell] = inst[(i, ell)] % p
        mats.append(m)
    return mats


def eval_nc_on_matrices(f, mats, field: Field):
    """Evaluate an NcPoly or NcAbp on arbitrary square matrices (constants
    act as multiples of the identity).  No degree checks; nilpotency
    experiments rely on that."""
    dim = len(mats[0]) if mats else 1
    p = field.p
    if isinstance(f, NcPoly):
        out = [[0] * dim for _ in range(dim)]
        for word, c in f.terms.items():
            if word:
                acc = mats[word[0]]
                for i in word[1:]:
                    acc = _mat_mul_int(acc, mats[i], p)
            else:
                acc = [[1 if a == b else 0 for b in range(dim)] for a in range(dim)]
            for a in range(dim):
                for b in range(dim):
                    out[a][b] = (out[a][b] + c * acc[a][b]) % p
        return out
    return f.eval_matrices(mats)


def _mat_mul_int(a, b, p):
    dim = len(a)
    cols = len(b[0])
    out = [[0] * cols for _ in range(dim)]
    for i in range(dim):
        ai = a[i]
        oi = out[i]
        for k in range(len(b)):
            c = ai[k]
            if c:
                bk = b[k]
                for j in range(cols):
                    oi[j] = (oi[j] + c * bk[j]) % p
    return out


def staircase_eval(f, inst, D: int):
    """Lemma-form evaluation on the D-position staircase: entry (0, l) of the
    result equals the degree-l commutative image at inst.  Requires degree
    (or depth) at most D."""
    if isinstance(f, NcPoly):
        field, n = f.field, f.n
        if f.degree > D:
            raise DegreeExceedsD(f"degree {f.degree} exceeds D = {D}")
    else:
        field, n = f.field, f.n
        if f.D > D:
            raise DegreeExceedsD(f"ABP depth {f.D} exceeds D = {D}")
    return eval_nc_on_matrices(f, staircase_matrices(field, n, D, inst), field)


class NcAbp:
    """Layered non-commutative ABP with affine edge labels (c, [a_0..a_{n-1}]);
    single source at level 0 and single sink at the last level."""

    __slots__ = ("field", "n", "counts", "edges")

    def __init__(self, field: Field, n: int, counts, edges):
        if len(counts) < 2 or counts[0] != 1 or counts[-1] != 1:
            raise MalformedGraph("need a single source and a single sink")
        if any(c < 1 for c in counts):
            raise MalformedGraph("empty level")
        D = len(counts) - 1
        p = field.p
        norm = []
        for (i, u, v, const, lin) in edges:
            if not 0 <= i < D:
                raise MalformedGraph(f"edge layer {i} out of range")
            if not (0 <= u < counts[i] and 0 <= v < counts[i + 1]):
                raise MalformedGraph(f"edge ({u}->{v}) out of range at layer {i}")
            if len(lin) != n:
                raise MalformedGraph(f"linear part has {len(lin)} coefficients, expected {n}")
            norm.append((i, u, v, const % p, [a % p for a in lin]))
        self.field = field
        self.n = n
        self.counts = list(counts)
        self.edges = norm

    @property
    def D(self) -> int:
        return len(self.counts) - 1

    @property
    def width(self) -> int:
        return max(self.counts)

    def _edges_by_layer(self):
        by = [[] for _ in range(self.D)]
        for e in self.edges:
            by[e[0]].append(e)
        return by

    def expand(self) -> NcPoly:
        """Sparse expansion by level-order DP (the white-box oracle)."""
        p = self.field.p
        vals = [{(): 1}]
        for i, layer in enumerate(self._edges_by_layer()):
            nxt = [dict() for _ in range(self.counts[i + 1])]
            for (_i, u, v, const, lin) in layer:
                src = vals[u]
                if not src:
                    continue
                tgt = nxt[v]
                for word, c in src.items():
                    if const:
                        tgt[word] = (tgt.get(word, 0) + c * const) % p
                    for j, a in enumerate(lin):
                        if a:
                            w = word + (j,)
                            tgt[w] = (tgt.get(w, 0) + c * a) % p
            vals = nxt
        return NcPoly(self.field, self.n, vals[0])

    def eval_matrices(self, mats):
        """Evaluate over a matrix algebra; labels become c*I + sum a_i X_i."""
        if len(mats) != self.n:
            raise ArityMismatch(f"expected {self.n} matrices, got {len(mats)}")
        dim = len(mats[0])
        p = self.field.p
        ident = [[1 if a == b else 0 for b in range(dim)] for a in range(dim)]
        zero = [[0] * dim for _ in range(dim)]
        vals = [[row[:] for row in ident]] + [
            [row[:] for row in zero] for _ in range(self.counts[0] - 1)
        ]
        for i, layer in enumerate(self._edges_by_layer()):
            nxt = [[row[:] for row in zero] for _ in range(self.counts[i + 1])]
            for (_, u, v, const, lin) in layer:
                label = [[const if a == b else 0 for b in range(dim)] for a in range(dim)]
                for j, a_j in enumerate(lin):
                    if a_j:
                        mj = mats[j]
                        for a in range(dim):
                            for b in range(dim):
                                label[a][b] = (label[a][b] + a_j * mj[a][b]) % p
                prod = _mat_mul_int(vals[u], label, p)
                tv = nxt[v]
                for a in range(dim):
                    for b in range(dim):
                        tv[a][b] = (tv[a][b] + prod[a][b]) % p
            vals = nxt
        return vals[0]


def _constant_closures(a: NcAbp):
    """P[j][jp] maps level j to level jp > j using only the constant parts."""
    p = a.field.p
    D = a.D
    consts = []
    for i in range(D):
        m = [[0] * a.counts[i + 1] for _ in range(a.counts[i])]
        consts.append(m)
    for (i, u, v, const, _lin) in a.edges:
        consts[i][u][v] = (consts[i][u][v] + const) % p
    closures = [dict() for _ in range(D + 1)]
    for j in range(D + 1):
        ident = [
            [1 if x == y else 0 for y in range(a.counts[j])] for x in range(a.counts[j])
        ]
        closures[j][j] = ident
        acc = ident
        for jp in range(j + 1, D + 1):
            acc = _mat_mul_int(acc, consts[jp - 1], p)
            closures[j][jp] = acc
    return closures


def homogeneous_part_abp(a: NcAbp, ell: int) -> NcAbp:
    """Degree-ell part as an ABP with homogeneous linear labels, depth ell and
    width at most (original width)*(D+1): new nodes pair an original node with
    a degree-so-far, constant sub-walks are folded into the linear steps."""
    if not 1 <= ell <= a.D:
        raise BadDegreeIndex(f"need 1 <= ell <= {a.D}, got {ell}")
    p = a.field.p
    D = a.D
    closures = _constant_closures(a)
    lin_by_layer = [[] for _ in range(D)]
    for (i, u, v, _const, lin) in a.edges:
        if any(lin):
            lin_by_layer[i].append((u, v, lin))
    offsets = []
    total = 0
    for j in range(D + 1):
        offsets.append(total)
        total += a.counts[j]

    def node(j, v):
        return offsets[j] + v

    def linear_step(j, u):
        """Targets (jp, v) with label vectors: constant-walk from (j, u), then
        one linear edge into level jp."""
        out = {}
        for jp in range(j + 1, D + 1):
            walk = closures[j][jp - 1]
            for (w, v, lin) in lin_by_layer[jp - 1]:
                c = walk[u][w]
                if c:
                    key = (jp, v)
                    vec = out.get(key)
                    if vec is None:
                        vec = [0] * a.n
                        out[key] = vec
                    for t in range(a.n):
                        if lin[t]:
                            vec[t] = (vec[t] + c * lin[t]) % p
        return {k: v for k, v in out.items() if any(v)}

    edges = []
    if ell == 1:
        # single layer: fold leading and trailing constant walks together
        vec_total = [0] * a.n
        for (jp, v), vec in linear_step(0, 0).items():
            tail = closures[jp][D][v][0]
            if tail:
                for t in range(a.n):
                    vec_total[t] = (vec_total[t] + vec[t] * tail) % p
        counts = [1, 1]
        if any(vec_total):
            edges.append((0, 0, 0, 0, vec_total))
        return NcAbp(a.field, a.n, counts, edges)

    counts = [1] + [total] * (ell - 1) + [1]
    for (jp, v), vec in linear_step(0, 0).items():
        edges.append((0, 0, node(jp, v), 0, vec))
    for k in range(1, ell - 1):
        for j in range(D + 1):
            for u in range(a.counts[j]):
                for (jp, v), vec in linear_step(j, u).items():
                    edges.append((k, node(j, u), node(jp, v), 0, vec))
    for j in range(D + 1):
        for u in range(a.counts[j]):
            vec_total = [0] * a.n
            hit = False
            for (jp, v), vec in linear_step(j, u).items():
                tail = closures[jp][D][v][0]
                if tail:
                    hit = True
                    for t in range(a.n):
                        vec_total[t] = (vec_total[t] + vec[t] * tail) % p
            if hit and any(vec_total):
                edges.append((ell - 1, node(j, u), 0, 0, vec_total))
    return NcAbp(a.field, a.n, counts, edges)


def nc_abp_to_sm_abp(a: NcAbp) -> SmAbp:
    """Relabel the linear form at layer j with the position-j copy of the
    variables; the result computes the commutative image of a's polynomial."""
    for (_i, _u, _v, const, _lin) in a.edges:
        if const:
            raise NonHomogeneousLabel("labels must be homogeneous linear")
    r = a.width
    layers = [
        [[[0] * a.n for _ in range(r)] for _ in range(r)] for _ in range(a.D)
    ]
    p = a.field.p
    for (i, u, v, _const, lin) in a.edges:
        vec = layers[i][u][v]
        for t in range(a.n):
            vec[t] = (vec[t] + lin[t]) % p
    return SmAbp(a.field, r, a.n, layers)


def nc_field_bound(n: int, r: int, D: int) -> int:
    return (2 * (D + 1) ** 5 * n * r**4) ** 2


class NcHittingSet:
    """Lazy hitting set over (D+1) x (D+1) matrix tuples: the commutative
    hitting set for the reduced set-multilinear class, pushed through the
    staircase instantiation x_{i,l} = v_{l-1}**i."""

    def __init__(self, n: int, r: int, D: int, field: Field):
        if field.p < nc_field_bound(n, r, D):
            raise FieldTooSmall(
                f"non-commutative PIT at (n={n}, r={r}, D={D}) needs "
                f"|F| >= (2(D+1)^5 n r^4)^2 = {nc_field_bound(n, r, D)}, have {field.p}"
            )
        self.n = n
        self.r = r
        self.D = D
        self.field = field
        width = r * (D + 1)
        self.params = gen_params_new(field, _padded_depth(D), max(n, 1), width)
        self.base = hitting_set(self.params)

    def __len__(self):
        return self.base.count

    def matrices_for_point(self, v):
        p = self.field.p
        inst = {}
        for i in range(self.n):
            for ell in range(1, self.D + 1):
                inst[(i, ell)] = pow(v[ell - 1], i, p)
        return tuple(staircase_matrices(self.field, self.n, self.D, inst))

    def __getitem__(self, k):
        return self.matrices_for_point(self.base[k])

    def iter_with_points(self, start=0, stop=None):
        for v in self.base.iter_points(start, stop):
            yield v, self.matrices_for_point(v)

    def __iter__(self):
        for _v, mats in self.iter_with_points():
            yield mats


def nc_hitting_set(n: int, r: int, D: int, field: Field) -> NcHittingSet:
    return NcHittingSet(n, r, D, field)


def blackbox_pit_ncabp(
    f, n: int = None, r: int = None, D: int = None, field: Field = None,
    hs: NcHittingSet = None, limit: int = None,
) -> PitVerdict:
    """Scan the matrix-tuple hitting set; nonzero iff some evaluation is a
    nonzero matrix.  Valid under the promise that f is computable by a
    width-r, depth-D non-commutative ABP on n variables."""
    if isinstance(f, NcAbp):
        n = f.n if n is None else n
        r = f.width if r is None else r
        D = f.D if D is None else D
        field = f.field if field is None else field
        oracle = lambda mats: eval_nc_on_matrices(f, list(mats), field)
    elif isinstance(f, NcPoly):
        n = f.n if n is None else n
        r = max(len(f.terms), 1) if r is None else r
        D = max(f.degree, 1) if D is None else D
        field = f.field if field is None else field
        oracle = lambda mats: eval_nc_on_matrices(f, list(mats), field)
    else:
        if n is None or r is None or D is None or field is None:
            raise TypeError("oracle form needs explicit n, r, D and field")
        oracle = f
    if hs is None:
        hs = NcHittingSet(n, r, D, field)
    stop = len(hs) if limit is None else min(limit, len(hs))
    tested = 0
    for v, mats in hs.iter_with_points(0, stop):
        tested += 1
        m = oracle(mats)
        if any(any(row) for row in m):
            again = oracle(mats)
            if not any(any(row) for row in again):
                raise RuntimeError("internal error: witness failed its re-check")
            return PitVerdict(is_zero=False, witness=mats, points_tested=tested)
    if stop < len(hs):
        raise TooLarge(
            f"scan limit {stop} exhausted without a witness; only the full "
            f"scan of {len(hs)} points can certify zero"
        )
    return PitVerdict(is_zero=True, witness=None, points_tested=tested)


def parse_ncabp(text: str) -> NcAbp:
    """NCABP format: header `NCABP p= nvars= width= depth=`, then lines
    `E <layer> <u> <v> <c> <a_0> ... <a_{n-1}>` for the label c + sum a_i x_i.
    Levels 0 and depth hold the single source and sink (node 0)."""
    from .roabp import _content_lines, _parse_header

    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty NCABP file")
    h = _parse_header(lines[0], "NCABP", ("p", "nvars", "width", "depth"))
    field = Field(h["p"])
    n, r, D = h["nvars"], h["width"], h["depth"]
    counts = [1] + [r] * max(D - 1, 0) + [1] if D >= 1 else [1, 1]
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if parts[0] != "E":
            raise FormatError(f"unexpected line: {line!r}")
        if len(parts) != 4 + 1 + n:
            raise FormatError(f"expected E <layer> <u> <v> <c> and {n} coefficients: {line!r}")
        i, u, v = int(parts[1]), int(parts[2]), int(parts[3])
        const = int(parts[4])
        lin = [int(t) for t in parts[5:]]
        edges.append((i, u, v, const, lin))
    return NcAbp(field, n, counts, edges)
