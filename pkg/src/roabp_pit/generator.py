"""The hitting-set generator for read-once oblivious ABPs.

The generator G_d maps d+1 seed coordinates to D = 2**d outputs, indexed by
bit-vectors b (bit i of the output index is b_i).  Three equivalent forms are
provided: the defining sum (gen_direct), the two-branch recursion
(gen_recursive), and the width-r**2 branching-program form (gen_abp); their
agreement is the toolkit's main anti-regression test.  Evaluating the
generator over a grid S^(d+1) yields the hitting set.
"""

import threading
from array import array

from ._backend import gen_points_block
from .errors import ArityMismatch, DNotPowerOfTwo, FieldTooSmall
from .field import Field, UniPoly, find_element_of_order, lagrange_basis
from .roabp import Roabp


class GenParams:
    """Fixed generator constants: field, depth, degree/width bounds, the
    element of large order, the Lagrange basis on r**2 nodes, and the
    evaluation set S."""

    __slots__ = ("field", "d", "D", "n", "r", "omega", "basis", "S")

    def __init__(self, field, d, n, r, omega, basis, S):
        self.field = field
        self.d = d
        self.D = 1 << d
        self.n = n
        self.r = r
        self.omega = omega
        self.basis = basis
        self.S = S

    def __repr__(self):
        return (
            f"GenParams(p={self.field.p}, D={self.D}, n={self.n}, r={self.r}, "
            f"omega={self.omega}, |S|={len(self.S)})"
        )

    def branch_exponent(self, i: int) -> int:
        """Exponent of the power branch at level i."""
        return (1 << i) * self.n * self.r * self.r


def required_field_size(D: int, n: int, r: int) -> int:
    return (2 * D * n * r**3) ** 2


def gen_params_new(field: Field, D: int, n: int, r: int, check: bool = True) -> GenParams:
    """Canonical parameters: omega is the first element of order >= (D n r^2)^2,
    the interpolation nodes are 0..r^2-1, and S is the first D n^2 r^4 canonical
    elements.  D must already be a power of two (pad first).

    check=False is test mode: it drops the field-size requirement (the hitting
    property is then NOT guaranteed) and settles for the largest achievable
    order; exhaustive small-field experiments use this.
    """
    if D < 1 or D & (D - 1):
        raise DNotPowerOfTwo(f"depth {D} is not a power of two")
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    bound = required_field_size(D, n, r)
    if check and field.p < bound:
        raise FieldTooSmall(
            f"field size {field.p} below the required (2*D*n*r^3)^2 = {bound}"
        )
    r2 = r * r
    order_needed = (D * n * r2) ** 2
    if not check:
        if field.p < r2:
            raise FieldTooSmall(f"need r^2 = {r2} distinct interpolation nodes, p = {field.p}")
        order_needed = min(order_needed, field.p - 1)
    omega = find_element_of_order(field, order_needed)
    basis = lagrange_basis(field, range(r2))
    s_size = D * n * n * r**4
    if not check:
        s_size = min(s_size, field.p)
    return GenParams(field, D.bit_length() - 1, n, r, omega, basis, range(s_size))


def bits_for_index(k: int, d: int):
    """Output index -> bit vector (b_0 is the least-significant bit)."""
    return tuple((k >> i) & 1 for i in range(d))


def _check_arity(g: GenParams, bits, alpha):
    if len(bits) != g.d:
        raise ArityMismatch(f"expected {g.d} output bits, got {len(bits)}")
    if len(alpha) != g.d + 1:
        raise ArityMismatch(f"expected {g.d + 1} seed coordinates, got {len(alpha)}")


def gen_direct(g: GenParams, bits, alpha) -> int:
    """The defining sum, by literal enumeration of all r^(2d) index tuples."""
    _check_arity(g, bits, alpha)
    from itertools import product

    d = g.d
    p = g.field.p
    alpha = [a % p for a in alpha]
    if d == 0:
        return alpha[0]
    r2 = g.r * g.r
    polys = g.basis.polys
    omega = g.omega
    total = 0
    for tup in product(range(r2), repeat=d):
        term = 1
        for i in range(d):
            y = pow(omega, tup[i], p) * alpha[i] % p
            if bits[i]:
                y = pow(y, g.branch_exponent(i), p)
            term = term * (y if i == 0 else polys[tup[i - 1]].eval(y)) % p
        term = term * polys[tup[d - 1]].eval(alpha[d]) % p
        total = (total + term) % p
    return total


def gen_recursive(g: GenParams, bits, alpha) -> int:
    """Two-branch recursion peeling the last output bit; base case is the
    identity map."""
    _check_arity(g, bits, alpha)
    p = g.field.p
    return _gen_rec(g, tuple(bits), [a % p for a in alpha])


def _gen_rec(g, bits, alpha):
    d = len(bits)
    if d == 0:
        return alpha[0]
    p = g.field.p
    r2 = g.r * g.r
    polys = g.basis.polys
    exp = g.branch_exponent(d - 1)
    total = 0
    for ell in range(r2):
        seed = pow(g.omega, ell, p) * alpha[d - 1] % p
        if bits[-1]:
            seed = pow(seed, exp, p)
        child = _gen_rec(g, bits[:-1], alpha[: d - 1] + [seed])
        total = (total + child * polys[ell].eval(alpha[d])) % p
    return total


def _substituted(g: GenParams, prev_poly_coeffs, ell: int, exp: int) -> UniPoly:
    """prev_poly evaluated at (omega^ell * x)^exp, as a dense polynomial in x."""
    p = g.field.p
    if exp == 1:
        coeffs = [
            c * pow(g.omega, ell * j, p) % p for j, c in enumerate(prev_poly_coeffs)
        ]
        return UniPoly(g.field, coeffs)
    deg = len(prev_poly_coeffs) - 1
    coeffs = [0] * (deg * exp + 1 if deg >= 0 else 0)
    for j, c in enumerate(prev_poly_coeffs):
        if c:
            coeffs[j * exp] = c * pow(g.omega, ell * j * exp, p) % p
    return UniPoly(g.field, coeffs)


def gen_abp(g: GenParams, bits) -> Roabp:
    """The generator output as a width-r^2, depth-(d+1) ROABP whose (0,0)
    entry at a seed equals gen_direct at that seed."""
    if len(bits) != g.d:
        raise ArityMismatch(f"expected {g.d} output bits, got {len(bits)}")
    d = g.d
    r2 = g.r * g.r
    ident = [0, 1]
    degree_bound = g.D * g.n * g.r**4 + 1
    layers = []
    for i in range(d + 1):
        branch = bits[i] if i < d else 0
        exp = g.branch_exponent(i) if branch else 1
        layer = []
        for lprime in range(r2):
            prev = ident if i == 0 else g.basis.polys[lprime].coeffs
            layer.append([_substituted(g, prev, ell, exp) for ell in range(r2)])
        layers.append(layer)
    return Roabp(g.field, r2, degree_bound, layers)


def gen_eval_all(g: GenParams, alpha):
    """All D outputs at one seed, sharing subcomputations across the recursion
    tree (one level pass per output bit)."""
    if len(alpha) != g.d + 1:
        raise ArityMismatch(f"expected {g.d + 1} seed coordinates, got {len(alpha)}")
    p = g.field.p
    alpha = [a % p for a in alpha]
    d = g.d
    if d == 0:
        return [alpha[0]]
    r2 = g.r * g.r
    omega_pows = [pow(g.omega, ell, p) for ell in range(r2)]
    lag = [poly.coeffs + [0] * (r2 - len(poly.coeffs)) for poly in g.basis.polys]
    levels = None
    for i in range(d):
        a = alpha[i]
        y0 = [w * a % p for w in omega_pows]
        exp = g.branch_exponent(i)
        y1 = [pow(y, exp, p) for y in y0]
        if i == 0:
            levels = [y0, y1]
            continue
        evals = []
        for child in levels:
            q = [0] * r2
            for prev, cv in enumerate(child):
                if cv:
                    row = lag[prev]
                    for j in range(r2):
                        q[j] = (q[j] + cv * row[j]) % p
            evals.append(q)
        levels = [
            [_horner(q, y, p) for y in y0] for q in evals
        ] + [
            [_horner(q, y, p) for y in y1] for q in evals
        ]
    lagv = [poly.eval(alpha[d]) for poly in g.basis.polys]
    out = []
    for vec in levels:
        out.append(sum(v * w for v, w in zip(vec, lagv)) % p)
    return out


def _horner(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


PREFIX_CACHE_POINTS = 8192


class HittingSet:
    """Lazy enumeration of G_d(S^(d+1)) in row-major seed order (the last
    seed coordinate varies fastest).  Points are pure functions of their
    index, so disjoint index ranges can be scanned independently.  A small
    prefix of the enumeration is cached: repeated scans with shared
    parameters (the common case for instance families) start at index 0."""

    __slots__ = (
        "params", "count", "_sarr", "_omega_pows", "_lag", "_exps",
        "_prefix", "_prefix_len", "_lock",
    )

    def __init__(self, params: GenParams):
        self.params = params
        self.count = len(params.S) ** (params.d + 1)
        p = params.field.p
        r2 = params.r * params.r
        self._sarr = array("q", params.S)
        self._omega_pows = array("q", [pow(params.omega, ell, p) for ell in range(r2)])
        lag = array("q", bytes(8 * r2 * r2))
        for ell, poly in enumerate(params.basis.polys):
            for j, c in enumerate(poly.coeffs):
                lag[ell * r2 + j] = c
        self._lag = lag
        exps = array("q", bytes(8 * max(params.d, 1)))
        for i in range(max(params.d, 1)):
            e = params.branch_exponent(i)
            exps[i] = e if e < p - 1 else e % (p - 1)  # Fermat; bases of 0 are special-cased
        self._exps = exps
        self._prefix = array("q")
        self._prefix_len = 0

    def __len__(self):
        return self.count

    def seed_for_index(self, k: int):
        ns = len(self.params.S)
        digits = []
        for _ in range(self.params.d + 1):
            digits.append(self.params.S[k % ns])
            k //= ns
        return list(reversed(digits))

    def __getitem__(self, k: int):
        if not 0 <= k < self.count:
            raise IndexError(k)
        return tuple(gen_eval_all(self.params, self.seed_for_index(k)))

    def _raw_block(self, start: int, count: int):
        g = self.params
        return gen_points_block(
            g.field.p, g.d, g.r * g.r, self._sarr, self._omega_pows,
            self._lag, self._exps, start, count,
        )

    def point_block(self, start: int, count: int):
        """Flat array of D*count coordinates for indices [start, start+count)."""
        end = start + count
        if end > min(PREFIX_CACHE_POINTS, self.count):
            return self._raw_block(start, count)
        if end > self._prefix_len:
            self._prefix.extend(self._raw_block(self._prefix_len, end - self._prefix_len))
            self._prefix_len = end
        Dp = self.params.D
        return self._prefix[start * Dp : end * Dp]

    def iter_points(self, start: int = 0, stop: int = None, block: int = 2048):
        stop = self.count if stop is None else min(stop, self.count)
        d1 = self.params.D
        k = start
        while k < stop:
            m = min(block, stop - k)
            flat = self.point_block(k, m)
            for c in range(m):
                yield tuple(flat[c * d1 : (c + 1) * d1])
            k += m

    def __iter__(self):
        return self.iter_points()


def hitting_set(g: GenParams) -> HittingSet:
    return HittingSet(g)
