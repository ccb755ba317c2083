"""Prime-field arithmetic, orders, dense univariate polynomials, Lagrange bases.

Field elements are plain ints kept as canonical representatives in [0, p);
the Field object carries the modulus and provides the operations.  Everything
here is exact: products of two canonical representatives stay below 2**126,
so Python ints never round.
"""

from .errors import (
    DuplicatePoints,
    FieldMismatch,
    ModulusTooLarge,
    NonPrimeModulus,
    NoSuchElement,
    ZeroElement,
)

MAX_MODULUS = 1 << 63

# Witnesses making Miller-Rabin deterministic for all n < 3.3 * 10**24,
# which covers every modulus below 2**63.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for n < 2**63 (Miller-Rabin, fixed bases)."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factor_trial_division(n: int) -> dict:
    """Prime factorization by trial division; fine for the desk-scale moduli here."""
    factors = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


class Field:
    """The prime field F_p for a verified prime modulus p < 2**63."""

    __slots__ = ("p", "_unit_factors")

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 2:
            raise NonPrimeModulus(f"modulus must be an integer >= 2, got {p!r}")
        if p >= MAX_MODULUS:
            raise ModulusTooLarge(f"modulus {p} >= 2**63")
        if not is_prime(p):
            raise NonPrimeModulus(f"{p} is not prime")
        self.p = p
        self._unit_factors = None  # factorization of p-1, computed lazily

    def __repr__(self):
        return f"Field({self.p})"

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    # -- element arithmetic (ints in, canonical ints out) -----------------

    def elem(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        c = a + b
        return c - self.p if c >= self.p else c

    def sub(self, a: int, b: int) -> int:
        c = a - b
        return c + self.p if c < 0 else c

    def neg(self, a: int) -> int:
        return self.p - a if a else 0

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        """Inverse by the extended Euclidean algorithm."""
        if a % self.p == 0:
            raise ZeroElement("0 has no inverse")
        t, new_t = 0, 1
        r, new_r = self.p, a % self.p
        while new_r:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        return t % self.p

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def unit_group_factors(self) -> dict:
        if self._unit_factors is None:
            self._unit_factors = _factor_trial_division(self.p - 1)
        return self._unit_factors

    # -- polynomial constructors ------------------------------------------

    def poly(self, coeffs) -> "UniPoly":
        return UniPoly(self, coeffs)

    def zero_poly(self) -> "UniPoly":
        return UniPoly(self, [])

    def one_poly(self) -> "UniPoly":
        return UniPoly(self, [1])

    def x_poly(self) -> "UniPoly":
        return UniPoly(self, [0, 1])


def field_new(p: int) -> Field:
    return Field(p)


def multiplicative_order(f: Field, g: int) -> int:
    """Exact order of g in F_p*: the factorization of p-1 with factors stripped."""
    g %= f.p
    if g == 0:
        raise ZeroElement("0 has no multiplicative order")
    order = f.p - 1
    for q in f.unit_group_factors():
        while order % q == 0 and pow(g, order // q, f.p) == 1:
            order //= q
    return order


def find_element_of_order(f: Field, n: int) -> int:
    """First element (in canonical order 1, 2, 3, ...) of multiplicative order >= n."""
    if n > f.p - 1:
        raise NoSuchElement(f"no element of F_{f.p} has order >= {n} (max is p-1 = {f.p - 1})")
    for g in range(1, f.p):
        if multiplicative_order(f, g) >= n:
            return g
    raise NoSuchElement("unreachable: the group is cyclic of order p-1")


class UniPoly:
    """Dense univariate polynomial; coeffs[j] is the coefficient of x**j."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        p = field.p
        c = [a % p for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = c

    @property
    def degree(self) -> int:
        """Degree, with -1 standing in for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __eq__(self, other):
        return (
            isinstance(other, UniPoly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.p, tuple(self.coeffs)))

    def __repr__(self):
        return f"UniPoly({self.coeffs} mod {self.field.p})"

    def __add__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = (out[i] + v) % self.field.p
        return UniPoly(self.field, out)

    def __sub__(self, other):
        self._check(other)
        p = self.field.p
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [0] * (n - len(self.coeffs))
        b = other.coeffs + [0] * (n - len(other.coeffs))
        return UniPoly(self.field, [(x - y) % p for x, y in zip(a, b)])

    def __neg__(self):
        p = self.field.p
        return UniPoly(self.field, [(p - c) % p for c in self.coeffs])

    def __mul__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly(self.field, [])
        p = self.field.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
        return UniPoly(self.field, out)

    def scale(self, c: int) -> "UniPoly":
        p = self.field.p
        c %= p
        return UniPoly(self.field, [a * c % p for a in self.coeffs])

    def shift(self, k: int) -> "UniPoly":
        """Multiply by x**k."""
        if not self.coeffs:
            return self
        return UniPoly(self.field, [0] * k + self.coeffs)

    def eval(self, a: int) -> int:
        """Horner evaluation."""
        p = self.field.p
        a %= p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * a + c) % p
        return acc

    def compose(self, other: "UniPoly") -> "UniPoly":
        """self(other(x)), by Horner over polynomial arithmetic."""
        self._check(other)
        acc = UniPoly(self.field, [])
        for c in reversed(self.coeffs):
            acc = acc * other + UniPoly(self.field, [c])
        return acc

    def pow(self, e: int) -> "UniPoly":
        if e < 0:
            raise ValueError("negative polynomial power")
        result = self.field.one_poly()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


def poly_eval(q: UniPoly, a: int) -> int:
    return q.eval(a)


def poly_add(a: UniPoly, b: UniPoly) -> UniPoly:
    return a + b


def poly_mul(a: UniPoly, b: UniPoly) -> UniPoly:
    return a * b


def poly_compose(a: UniPoly, b: UniPoly) -> UniPoly:
    return a.compose(b)


class LagrangeBasis:
    """Interpolation basis on s distinct nodes: polys[l](betas[i]) = 1 iff i == l."""

    __slots__ = ("field", "s", "betas", "polys")

    def __init__(self, field, betas, polys):
        self.field = field
        self.s = len(betas)
        self.betas = list(betas)
        self.polys = list(polys)


def lagrange_basis(f: Field, betas) -> LagrangeBasis:
    """Basis from the product formula p_l(t) = prod_{i != l} (t - b_i)/(b_l - b_i).

    Computed as master(t) = prod_i (t - b_i) followed by one synthetic division
    per node, which is O(s^2) overall instead of O(s^3).
    """
    betas = [b % f.p for b in betas]
    if len(set(betas)) != len(betas):
        raise DuplicatePoints(f"interpolation nodes must be distinct: {betas}")
    if not betas:
        raise DuplicatePoints("need at least one node")
    p = f.p
    master = [1]
    for b in betas:
        nb = (p - b) % p
        nxt = [0] * (len(master) + 1)
        for i, c in enumerate(master):
            nxt[i + 1] = (nxt[i + 1] + c) % p
            nxt[i] = (nxt[i] + c * nb) % p
        master = nxt
    polys = []
    for b in betas:
        # synthetic division of master by (t - b); remainder is 0 by construction
        q = [0] * (len(master) - 1)
        acc = 0
        for i in range(len(master) - 1, 0, -1):
            acc = (acc * b + master[i]) % p
            q[i - 1] = acc
        denom = 0
        for c in reversed(q):
            denom = (denom * b + c) % p
        scale = f.inv(denom)
        polys.append(UniPoly(f, [c * scale % p for c in q]))
    return LagrangeBasis(f, betas, polys)
