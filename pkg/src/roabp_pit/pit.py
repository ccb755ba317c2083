"""Identity-testing drivers for ROABPs.

Four modes: black-box over the enumerated hitting set, white-box span
propagation, brute-force dense expansion (the independent oracle), and the
randomized evaluation tester.  A nonzero verdict always comes with a
re-checked witness where the mode can produce one.
"""

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from ._backend import roabp_eval_block
from .errors import FieldTooSmall, FieldTooSmallForDegree, TooLarge
from .field import Field
from .generator import GenParams, HittingSet, gen_params_new, hitting_set
from .linalg import SpanBasis
from .roabp import Roabp, coeff_matrices, pad_to_power_of_two

BRUTE_FORCE_GUARD = 10**6
SCAN_BLOCK = 2048


@dataclass(frozen=True)
class PitVerdict:
    is_zero: bool
    witness: Optional[tuple]
    points_tested: int


def _padded_depth(D: int) -> int:
    return 1 << (D - 1).bit_length()


def blackbox_field_bound(D: int, n: int, r: int) -> int:
    """Required field size for a black-box test of declared (r, n, D)."""
    return (2 * _padded_depth(D) * n * r**3) ** 2


def _roabp_block_scanner(a: Roabp, params: GenParams):
    padded = pad_to_power_of_two(a)
    coeffs = padded.flat_coeffs()
    p = a.field.p

    def scan(flat, m):
        vals = roabp_eval_block(p, padded.r, padded.D, padded.n, coeffs, flat, m)
        for i in range(m):
            if vals[i]:
                return i
        return None

    return scan


def _oracle_block_scanner(f, D: int, Dp: int, p: int):
    def scan(flat, m):
        for i in range(m):
            if f(tuple(flat[i * Dp : i * Dp + D])) % p:
                return i
        return None

    return scan


def _scan_hitting_set(hs: HittingSet, scan_block, stop=None, jobs: int = 1):
    """First index (and point) where scan_block reports a nonzero, or None.

    Blocks are processed in index order (in waves when jobs > 1), so the
    returned witness index is minimal regardless of parallelism.
    """
    count = hs.count if stop is None else min(stop, hs.count)
    Dp = hs.params.D

    def run_block(start, m):
        flat = hs.point_block(start, m)
        loc = scan_block(flat, m)
        if loc is None:
            return None
        return loc, tuple(flat[loc * Dp : (loc + 1) * Dp])

    if jobs <= 1:
        k = 0
        while k < count:
            m = min(SCAN_BLOCK, count - k)
            hit = run_block(k, m)
            if hit is not None:
                return k + hit[0], hit[1], count
            k += m
        return None, None, count
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        k = 0
        while k < count:
            wave = []
            while len(wave) < jobs and k < count:
                m = min(SCAN_BLOCK, count - k)
                wave.append((k, ex.submit(run_block, k, m)))
                k += m
            for start, fut in wave:
                hit = fut.result()
                if hit is not None:
                    return start + hit[0], hit[1], count
    return None, None, count


def blackbox_pit_roabp(
    f, r: int = None, n: int = None, D: int = None, field: Field = None,
    jobs: int = 1, params: GenParams = None,
) -> PitVerdict:
    """Hitting-set scan under the promise that f is computable by a width-r,
    depth-D, individual-degree-<n ROABP.

    f may be a Roabp (parameters default to its own) or an evaluation oracle
    on D field elements.  Arity is padded to the next power of two; the extra
    coordinates never reach the oracle.  A ZERO verdict requires the full
    scan and is only valid under the promise (violations are undetectable
    from evaluations alone).
    """
    if isinstance(f, Roabp):
        r = f.r if r is None else r
        n = f.n if n is None else n
        D = f.D if D is None else D
        field = f.field if field is None else field
    elif r is None or n is None or D is None or field is None:
        raise TypeError("oracle form needs explicit r, n, D and field")
    bound = blackbox_field_bound(D, n, r)
    if field.p < bound:
        raise FieldTooSmall(
            f"black-box PIT at (r={r}, n={n}, D={D}) needs |F| >= {bound}, have {field.p}"
        )
    if params is None:
        params = gen_params_new(field, _padded_depth(D), n, r)
    hs = hitting_set(params)
    if isinstance(f, Roabp):
        scanner = _roabp_block_scanner(f, params)
        recheck = lambda pt: f.eval(list(pt))
    else:
        scanner = _oracle_block_scanner(f, D, params.D, field.p)
        recheck = f
    idx, point, count = _scan_hitting_set(hs, scanner, jobs=jobs)
    if idx is None:
        return PitVerdict(is_zero=True, witness=None, points_tested=count)
    witness = tuple(point[:D])
    if recheck(witness) % field.p == 0:
        raise RuntimeError("internal error: witness failed its re-check")
    return PitVerdict(is_zero=False, witness=witness, points_tested=idx + 1)


def find_witness(f, r=None, n=None, D=None, field=None, limit=None, jobs: int = 1,
                 params: GenParams = None):
    """Lazy scan of at most `limit` hitting-set points; returns
    (index, witness) or None.  Finding no witness within a partial scan
    proves nothing; only blackbox_pit_roabp's full scan certifies zero."""
    if isinstance(f, Roabp):
        r = f.r if r is None else r
        n = f.n if n is None else n
        D = f.D if D is None else D
        field = f.field if field is None else field
    bound = blackbox_field_bound(D, n, r)
    if field.p < bound:
        raise FieldTooSmall(
            f"black-box PIT at (r={r}, n={n}, D={D}) needs |F| >= {bound}, have {field.p}"
        )
    if params is None:
        params = gen_params_new(field, _padded_depth(D), n, r)
    hs = hitting_set(params)
    if isinstance(f, Roabp):
        scanner = _roabp_block_scanner(f, params)
    else:
        scanner = _oracle_block_scanner(f, D, params.D, field.p)
    idx, point, _ = _scan_hitting_set(hs, scanner, stop=limit, jobs=jobs)
    if idx is None:
        return None
    return idx, tuple(point[:D])


def whitebox_pit_roabp(a: Roabp) -> PitVerdict:
    """Span propagation: push the row space of reachable prefix vectors
    through the coefficient matrices of each layer; the polynomial is zero
    iff no final vector has a nonzero output coordinate.  Polynomial time in
    (r, n, D); produces no witness."""
    field = a.field
    start = SpanBasis(field, a.r)
    e0 = [0] * a.r
    e0[0] = 1
    start.insert(e0)
    basis = start
    for layer in a.layers:
        cs = coeff_matrices(layer, a.n, field)
        nxt = SpanBasis(field, a.r)
        for v in basis.rows:
            for c in cs:
                w = [0] * a.r
                for u, vu in enumerate(v):
                    if vu:
                        cu = c[u]
                        for j in range(a.r):
                            w[j] = (w[j] + vu * cu[j]) % field.p
                nxt.insert(w)
        basis = nxt
        assert basis.rank <= a.r
    is_zero = all(row[0] == 0 for row in basis.rows)
    return PitVerdict(is_zero=is_zero, witness=None, points_tested=0)


def expand_dense(a: Roabp) -> dict:
    """Exact dense expansion: maps exponent tuples in [0,n)^D to nonzero
    coefficients, by symbolic layer-by-layer multiplication."""
    if a.n**a.D > BRUTE_FORCE_GUARD:
        raise TooLarge(f"dense expansion of size n^D = {a.n**a.D} exceeds {BRUTE_FORCE_GUARD}")
    p = a.field.p
    vec = [dict() for _ in range(a.r)]
    vec[0] = {(): 1}
    for layer in a.layers:
        nxt = [dict() for _ in range(a.r)]
        for u, poly_map in enumerate(vec):
            if not poly_map:
                continue
            row = layer[u]
            for v in range(a.r):
                coeffs = row[v].coeffs
                if not coeffs:
                    continue
                target = nxt[v]
                for key, c in poly_map.items():
                    for j, cj in enumerate(coeffs):
                        if cj:
                            nk = key + (j,)
                            nv = (target.get(nk, 0) + c * cj) % p
                            if nv:
                                target[nk] = nv
                            elif nk in target:
                                del target[nk]
        vec = nxt
    return vec[0]


def eval_table(table: dict, point, field: Field) -> int:
    p = field.p
    total = 0
    for exps, c in table.items():
        term = c
        for x, e in zip(point, exps):
            if e:
                term = term * pow(x, e, p) % p
        total = (total + term) % p
    return total


def bruteforce_pit(a: Roabp) -> PitVerdict:
    """Dense-expansion oracle; witness searched on the side-n grid (one is
    guaranteed there when |F| >= n)."""
    table = expand_dense(a)
    if not table:
        return PitVerdict(is_zero=True, witness=None, points_tested=0)
    side = min(a.n, a.field.p)
    tested = 0
    for pt in itertools.product(range(side), repeat=a.D):
        tested += 1
        if a.eval(list(pt)):
            return PitVerdict(is_zero=False, witness=tuple(pt), points_tested=tested)
    # only reachable when p < n, where grid interpolation has no guarantee
    return PitVerdict(is_zero=False, witness=None, points_tested=tested)


def schwartz_zippel(f, arity: int, total_degree: int, trials: int,
                    field: Field, rng_seed: int) -> PitVerdict:
    """Randomized tester: nonzero verdicts are certain; a zero verdict after
    t trials is wrong with probability at most (total_degree/|F|)^t."""
    import random

    if field.p <= total_degree:
        raise FieldTooSmallForDegree(
            f"need |F| > degree {total_degree}, have {field.p}"
        )
    rng = random.Random(rng_seed)
    p = field.p
    for t in range(1, trials + 1):
        pt = tuple(rng.randrange(p) for _ in range(arity))
        if f(pt) % p:
            return PitVerdict(is_zero=False, witness=pt, points_tested=t)
    return PitVerdict(is_zero=True, witness=None, points_tested=trials)
