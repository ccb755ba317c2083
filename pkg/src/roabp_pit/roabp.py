"""Read-once oblivious ABPs in matrix normal form, plus the graph and
set-multilinear views and the conversions between them.

An ROABP of width r, depth D, individual degree < n is the product
M_0(x_0) * ... * M_{D-1}(x_{D-1}) of r x r matrices with univariate entries;
the computed polynomial is the (0,0) entry of the product.
"""

from array import array

from .errors import ArityMismatch, FormatError, MalformedGraph
from .field import Field, UniPoly
from .linalg import mat_eval, mat_mul


class Roabp:
    """Matrix normal form: layers[i] is an r x r matrix of UniPoly in x_i."""

    __slots__ = ("field", "r", "D", "n", "layers", "_flat")

    def __init__(self, field: Field, r: int, n: int, layers):
        if r < 1 or n < 1 or len(layers) < 1:
            raise ValueError("need r >= 1, n >= 1, D >= 1")
        for i, layer in enumerate(layers):
            if len(layer) != r or any(len(row) != r for row in layer):
                raise ValueError(f"layer {i} is not {r}x{r}")
            for row in layer:
                for entry in row:
                    if entry.field != field:
                        raise ValueError("layer entry over a different field")
                    if entry.degree >= n:
                        raise ValueError(
                            f"layer {i} entry degree {entry.degree} >= bound {n}"
                        )
        self.field = field
        self.r = r
        self.D = len(layers)
        self.n = n
        self.layers = layers
        self._flat = None

    def __repr__(self):
        return f"Roabp(p={self.field.p}, r={self.r}, D={self.D}, n={self.n})"

    def eval_matrix(self, point):
        if len(point) != self.D:
            raise ArityMismatch(f"point has {len(point)} coordinates, depth is {self.D}")
        acc = None
        for layer, x in zip(self.layers, point):
            m = mat_eval(layer, x % self.field.p)
            acc = m if acc is None else mat_mul(acc, m, self.field)
        return acc

    def eval(self, point) -> int:
        """Fast path over the flat coefficient buffer; same value as eval_matrix."""
        if len(point) != self.D:
            raise ArityMismatch(f"point has {len(point)} coordinates, depth is {self.D}")
        from ._backend import roabp_eval_block

        p = self.field.p
        pts = array("q", [x % p for x in point])
        return roabp_eval_block(p, self.r, self.D, self.n, self.flat_coeffs(), pts, 1)[0]

    def flat_coeffs(self):
        """Layer coefficients packed for the kernels (cached)."""
        if self._flat is None:
            r, n = self.r, self.n
            flat = array("q", bytes(8 * self.D * r * r * n))
            for i, layer in enumerate(self.layers):
                for u, row in enumerate(layer):
                    for v, entry in enumerate(row):
                        base = ((i * r + u) * r + v) * n
                        for j, c in enumerate(entry.coeffs):
                            flat[base + j] = c
            self._flat = flat
        return self._flat


def zero_roabp(field: Field, D: int, n: int = 1) -> Roabp:
    z = field.zero_poly()
    return Roabp(field, 1, n, [[[z]] for _ in range(D)])


class GraphAbp:
    """Layered-graph view: edges at layer i go from level i to level i+1 and
    carry univariates in x_i.  The designated source lives at level 0 and the
    designated sink at the last level (one of each).
    """

    __slots__ = ("field", "counts", "n", "edges", "source", "sink")

    def __init__(self, field: Field, counts, n: int, edges, source: int = 0, sink: int = 0):
        if len(counts) < 2:
            raise MalformedGraph("need at least levels 0 and 1")
        if any(c < 1 for c in counts):
            raise MalformedGraph("empty level")
        if not isinstance(source, int) or not isinstance(sink, int):
            raise MalformedGraph("exactly one source and one sink must be designated")
        if not 0 <= source < counts[0]:
            raise MalformedGraph(f"source {source} not a level-0 node")
        if not 0 <= sink < counts[-1]:
            raise MalformedGraph(f"sink {sink} not a last-level node")
        D = len(counts) - 1
        for (i, u, v, label) in edges:
            if not (0 <= i < D):
                raise MalformedGraph(f"edge layer {i} out of range (edges may not skip layers)")
            if not (0 <= u < counts[i] and 0 <= v < counts[i + 1]):
                raise MalformedGraph(f"edge ({u}->{v}) out of range at layer {i}")
            if label.field != field:
                raise MalformedGraph("edge label over a different field")
            if label.degree >= n:
                raise MalformedGraph(f"edge label degree {label.degree} >= bound {n}")
        self.field = field
        self.counts = list(counts)
        self.n = n
        self.edges = list(edges)
        self.source = source
        self.sink = sink

    @property
    def D(self) -> int:
        return len(self.counts) - 1

    @property
    def width(self) -> int:
        return max(self.counts)


def graph_to_matrix_form(a: GraphAbp) -> Roabp:
    """Node u of a level becomes row/column u; missing edges become zero
    entries.  The (0,0) output convention needs source and sink at node 0."""
    if a.source != 0 or a.sink != 0:
        raise MalformedGraph("source and sink must both be node 0 for the matrix form")
    r = a.width
    z = a.field.zero_poly()
    layers = [[[z for _ in range(r)] for _ in range(r)] for _ in range(a.D)]
    for (i, u, v, label) in a.edges:
        cur = layers[i][u][v]
        layers[i][u][v] = label if cur.is_zero() else cur + label
    return Roabp(a.field, r, a.n, layers)


def matrix_to_graph_form(a: Roabp) -> GraphAbp:
    """Inverse of graph_to_matrix_form; nonzero entries become edges."""
    counts = [a.r] * (a.D + 1)
    edges = []
    for i, layer in enumerate(a.layers):
        for u, row in enumerate(layer):
            for v, entry in enumerate(row):
                if not entry.is_zero():
                    edges.append((i, u, v, entry))
    return GraphAbp(a.field, counts, a.n, edges)


def eval_graph(a: GraphAbp, point) -> int:
    """Direct source-to-sink DP evaluation, independent of the matrix form."""
    if len(point) != a.D:
        raise ArityMismatch(f"point has {len(point)} coordinates, depth is {a.D}")
    p = a.field.p
    by_layer = [[] for _ in range(a.D)]
    for e in a.edges:
        by_layer[e[0]].append(e)
    vals = [0] * a.counts[0]
    vals[a.source] = 1
    for i in range(a.D):
        nxt = [0] * a.counts[i + 1]
        x = point[i] % p
        for (_, u, v, label) in by_layer[i]:
            if vals[u]:
                nxt[v] = (nxt[v] + vals[u] * label.eval(x)) % p
        vals = nxt
    return vals[a.sink]


def pad_to_power_of_two(a: Roabp) -> Roabp:
    """Append constant identity layers (in fresh variables) up to depth 2**ceil(lg D)."""
    target = 1 << (a.D - 1).bit_length()
    if target == a.D:
        return a
    one = a.field.one_poly()
    zero = a.field.zero_poly()
    ident = [[one if i == j else zero for j in range(a.r)] for i in range(a.r)]
    return Roabp(a.field, a.r, a.n, list(a.layers) + [ident] * (target - a.D))


class SmAbp:
    """Set-multilinear ABP in matrix form: entries of layer i are homogeneous
    linear forms in X_i = {x_{i,0}, ..., x_{i,n-1}}, stored as n-vectors."""

    __slots__ = ("field", "r", "D", "n", "layers")

    def __init__(self, field: Field, r: int, n: int, layers):
        for layer in layers:
            if len(layer) != r or any(len(row) != r for row in layer):
                raise ValueError("layer shape mismatch")
            for row in layer:
                for vec in row:
                    if len(vec) != n:
                        raise ValueError("linear-form vector of wrong length")
        self.field = field
        self.r = r
        self.D = len(layers)
        self.n = n
        self.layers = [
            [[[c % field.p for c in vec] for vec in row] for row in layer]
            for layer in layers
        ]

    def eval(self, assignment) -> int:
        """assignment[i][j] is the value of x_{i,j}; returns the (0,0) output."""
        vals = [0] * self.r
        vals[0] = 1
        p = self.field.p
        for i, layer in enumerate(self.layers):
            xi = assignment[i]
            nxt = [0] * self.r
            for u in range(self.r):
                if vals[u] == 0:
                    continue
                for v in range(self.r):
                    s = 0
                    for c, x in zip(layer[u][v], xi):
                        s += c * x
                    nxt[v] = (nxt[v] + vals[u] * s) % p
            vals = nxt
        return vals[0]


def sm_to_roabp(a: SmAbp) -> Roabp:
    """Kronecker map x_{i,j} -> x_i**j; a bijection on set-multilinear monomials."""
    layers = []
    for layer in a.layers:
        layers.append(
            [[UniPoly(a.field, vec) for vec in row] for row in layer]
        )
    return Roabp(a.field, a.r, max(a.n, 1), layers)


def coeff_matrices(layer, n: int, field: Field):
    """Split an r x r UniPoly layer into its n coefficient matrices."""
    r = len(layer)
    out = [[[0] * r for _ in range(r)] for _ in range(n)]
    for u, row in enumerate(layer):
        for v, entry in enumerate(row):
            for j, c in enumerate(entry.coeffs):
                out[j][u][v] = c
    return out


def sum_roabps(parts) -> Roabp:
    """Sum of ROABPs of equal depth by source/sink merging (block assembly)."""
    parts = list(parts)
    if not parts:
        raise ValueError("empty sum")
    field = parts[0].field
    D = parts[0].D
    if any(q.D != D or q.field != field for q in parts):
        raise ValueError("summands must share depth and field")
    if len(parts) == 1:
        return parts[0]
    n = max(q.n for q in parts)
    zero = field.zero_poly()
    if D == 1:
        entry = parts[0].layers[0][0][0]
        for q in parts[1:]:
            entry = entry + q.layers[0][0][0]
        return Roabp(field, 1, n, [[[entry]]])
    width = sum(q.r for q in parts)
    offs = []
    acc = 0
    for q in parts:
        offs.append(acc)
        acc += q.r
    layers = []
    for i in range(D):
        m = [[zero for _ in range(width)] for _ in range(width)]
        for q, off in zip(parts, offs):
            lay = q.layers[i]
            if i == 0:
                for v in range(q.r):
                    cur = m[0][off + v]
                    m[0][off + v] = lay[0][v] if cur.is_zero() else cur + lay[0][v]
            elif i == D - 1:
                for u in range(q.r):
                    cur = m[off + u][0]
                    m[off + u][0] = lay[u][0] if cur.is_zero() else cur + lay[u][0]
            else:
                for u in range(q.r):
                    for v in range(q.r):
                        m[off + u][off + v] = lay[u][v]
        layers.append(m)
    return Roabp(field, width, n, layers)


# ---------------------------------------------------------------------------
# text formats


def _content_lines(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def _parse_header(line, kind, keys):
    parts = line.split()
    if not parts or parts[0] != kind:
        raise FormatError(f"expected '{kind}' header, got: {line!r}")
    vals = {}
    for tok in parts[1:]:
        if "=" not in tok:
            raise FormatError(f"bad header token {tok!r}")
        k, v = tok.split("=", 1)
        vals[k] = int(v)
    missing = [k for k in keys if k not in vals]
    if missing:
        raise FormatError(f"{kind} header missing {missing}")
    return vals


def parse_roabp(text: str) -> Roabp:
    """ROABP format: header `ROABP p= width= depth= degree=`, then lines
    `L <i> <row> <col> <c0> <c1> ...` (low-to-high coefficients)."""
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty ROABP file")
    h = _parse_header(lines[0], "ROABP", ("p", "width", "depth", "degree"))
    field = Field(h["p"])
    r, D, n = h["width"], h["depth"], h["degree"]
    zero = field.zero_poly()
    layers = [[[zero for _ in range(r)] for _ in range(r)] for _ in range(D)]
    for line in lines[1:]:
        parts = line.split()
        if parts[0] != "L":
            raise FormatError(f"unexpected line: {line!r}")
        if len(parts) < 4:
            raise FormatError(f"short L line: {line!r}")
        i, u, v = int(parts[1]), int(parts[2]), int(parts[3])
        coeffs = [int(t) for t in parts[4:]]
        if not (0 <= i < D and 0 <= u < r and 0 <= v < r):
            raise FormatError(f"indices out of range: {line!r}")
        if len(coeffs) > n:
            raise FormatError(f"more than {n} coefficients: {line!r}")
        layers[i][u][v] = UniPoly(field, coeffs)
    return Roabp(field, r, n, layers)


def format_roabp(a: Roabp) -> str:
    out = [f"ROABP p={a.field.p} width={a.r} depth={a.D} degree={a.n}"]
    for i, layer in enumerate(a.layers):
        for u, row in enumerate(layer):
            for v, entry in enumerate(row):
                if not entry.is_zero():
                    coeffs = " ".join(str(c) for c in entry.coeffs)
                    out.append(f"L {i} {u} {v} {coeffs}")
    return "\n".join(out) + "\n"


def parse_smabp(text: str) -> SmAbp:
    """SMABP format: header `SMABP p= width= depth= degree=`, then lines
    `L <i> <row> <col> <a0> ... <a_{n-1}>` giving linear-form coefficients."""
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty SMABP file")
    h = _parse_header(lines[0], "SMABP", ("p", "width", "depth", "degree"))
    field = Field(h["p"])
    r, D, n = h["width"], h["depth"], h["degree"]
    layers = [[[[0] * n for _ in range(r)] for _ in range(r)] for _ in range(D)]
    for line in lines[1:]:
        parts = line.split()
        if parts[0] != "L":
            raise FormatError(f"unexpected line: {line!r}")
        i, u, v = int(parts[1]), int(parts[2]), int(parts[3])
        coeffs = [int(t) for t in parts[4:]]
        if not (0 <= i < D and 0 <= u < r and 0 <= v < r):
            raise FormatError(f"indices out of range: {line!r}")
        if len(coeffs) != n:
            raise FormatError(f"expected exactly {n} coefficients: {line!r}")
        layers[i][u][v] = coeffs
    return SmAbp(field, r, n, layers)
