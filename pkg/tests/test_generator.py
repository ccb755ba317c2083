import random
from itertools import product

import pytest

from roabp_pit import _kernels_py
from roabp_pit._backend import BACKEND, kernels
from roabp_pit.errors import ArityMismatch, DNotPowerOfTwo, FieldTooSmall
from roabp_pit.field import Field, multiplicative_order
from roabp_pit.generator import (
    GenParams,
    bits_for_index,
    gen_abp,
    gen_direct,
    gen_eval_all,
    gen_params_new,
    gen_recursive,
    hitting_set,
    required_field_size,
)

F4099 = Field(4099)  # smallest prime >= (2*2*2*2^3)^2 = 4096


def params_222():
    return gen_params_new(F4099, 2, 2, 2)


def test_gen_params_new_bounds():
    g = params_222()
    assert len(g.S) == 2 * 4 * 16  # D n^2 r^4 = 128
    assert multiplicative_order(g.field, g.omega) >= (2 * 2 * 4) ** 2
    assert g.basis.betas == [0, 1, 2, 3]
    with pytest.raises(DNotPowerOfTwo):
        gen_params_new(F4099, 3, 2, 2)
    with pytest.raises(FieldTooSmall) as e:
        gen_params_new(Field(31), 2, 2, 2)
    assert "4096" in str(e.value)
    assert required_field_size(2, 2, 2) == 4096


def test_gen_params_test_mode():
    g = gen_params_new(Field(31), 2, 2, 2, check=False)
    assert len(g.S) <= 31
    assert multiplicative_order(g.field, g.omega) == 30  # best achievable


def test_gen_direct_identity_at_depth_zero():
    g = gen_params_new(F4099, 1, 2, 2)
    for a in (0, 1, 7, 4098):
        assert gen_direct(g, (), [a]) == a % 4099
        assert gen_recursive(g, (), [a]) == a % 4099
        assert gen_eval_all(g, [a]) == [a % 4099]


def test_gen_direct_depth_one_formula():
    g = params_222()
    p = g.field.p
    rng = random.Random(23)
    for _ in range(20):
        a0, a1 = rng.randrange(p), rng.randrange(p)
        expect = 0
        for ell in range(4):
            expect = (
                expect
                + pow(g.omega, ell, p) * a0 * g.basis.polys[ell].eval(a1)
            ) % p
        assert gen_direct(g, (0,), [a0, a1]) == expect


def test_lagrange_collapse():
    # fixing the last seed at interpolation node beta_j picks out one term
    g = params_222()
    p = g.field.p
    rng = random.Random(24)
    for j, beta in enumerate(g.basis.betas):
        a0 = rng.randrange(p)
        assert gen_direct(g, (0,), [a0, beta]) == pow(g.omega, j, p) * a0 % p
        expect = pow(pow(g.omega, j, p) * a0 % p, g.branch_exponent(0), p)
        assert gen_direct(g, (1,), [a0, beta]) == expect


def test_gen_eval_all_depth_one_example():
    g = params_222()
    p = g.field.p
    a0 = 17
    out = gen_eval_all(g, [a0, g.basis.betas[0]])
    assert out == [a0, pow(a0, 2 * 4, p)]  # n * r^2 = 8


def test_arity_checks():
    g = params_222()
    with pytest.raises(ArityMismatch):
        gen_direct(g, (0,), [1, 2, 3])
    with pytest.raises(ArityMismatch):
        gen_direct(g, (0, 1), [1, 2])
    with pytest.raises(ArityMismatch):
        gen_eval_all(g, [1])
    with pytest.raises(ArityMismatch):
        gen_abp(g, (0, 1, 1))


def test_three_way_agreement_exhaustive_small_field():
    # test mode over F_31, d <= 1: exhaustive over all bit vectors and seeds
    f = Field(31)
    for d, n, r in [(0, 2, 2), (1, 2, 2), (1, 2, 1)]:
        g = gen_params_new(f, 1 << d, n, r, check=False)
        abps = {bits: gen_abp(g, bits) for bits in product((0, 1), repeat=d)}
        for bits in product((0, 1), repeat=d):
            for alpha in product(range(31), repeat=d + 1):
                v = gen_direct(g, bits, list(alpha))
                assert gen_recursive(g, bits, list(alpha)) == v
                assert abps[bits].eval(list(alpha)) == v


def test_three_way_agreement_random():
    rng = random.Random(25)
    for d in (2, 3):
        D = 1 << d
        p = 65537 if d == 3 else 16411
        g = gen_params_new(Field(p), D, 2, 2)
        abps = {}
        for _ in range(40):
            bits = tuple(rng.randrange(2) for _ in range(d))
            alpha = [rng.randrange(p) for _ in range(d + 1)]
            v = gen_direct(g, bits, alpha)
            assert gen_recursive(g, bits, alpha) == v
            if bits not in abps:
                abps[bits] = gen_abp(g, bits)
            assert abps[bits].eval(alpha) == v
            assert gen_eval_all(g, alpha)[sum(b << i for i, b in enumerate(bits))] == v


def test_gen_abp_shape():
    g = params_222()
    a = gen_abp(g, (1,))
    assert a.r == 4  # width r^2
    assert a.D == 2  # depth d+1
    assert a.n == 2 * 2 * 16 + 1  # degree bound D n r^4 + 1


def test_gen_eval_all_matches_independent_calls():
    g = params_222()
    rng = random.Random(26)
    for _ in range(25):
        alpha = [rng.randrange(4099) for _ in range(2)]
        out = gen_eval_all(g, alpha)
        for j in range(2):
            assert out[j] == gen_recursive(g, bits_for_index(j, 1), alpha)


def test_hitting_set_identity_at_depth_zero():
    g = gen_params_new(F4099, 1, 2, 1)
    hs = hitting_set(g)
    assert len(hs) == len(g.S)
    assert list(hs) == [(s,) for s in g.S]


def test_hitting_set_count_and_indexing():
    g = params_222()
    hs = hitting_set(g)
    assert len(hs) == 128 * 128
    # indexing is row-major over S^{d+1}: the last seed varies fastest
    assert hs.seed_for_index(0) == [0, 0]
    assert hs.seed_for_index(1) == [0, 1]
    assert hs.seed_for_index(128) == [1, 0]
    assert hs[5] == tuple(gen_eval_all(g, [0, 5]))
    with pytest.raises(IndexError):
        hs[128 * 128]


def test_point_block_matches_getitem():
    g = params_222()
    hs = hitting_set(g)
    rng = random.Random(27)
    starts = [0, 1, 127, 128, 5000, len(hs) - 3]
    for start in starts:
        m = min(3, len(hs) - start)
        flat = hs.point_block(start, m)
        for c in range(m):
            assert tuple(flat[c * 2 : c * 2 + 2]) == hs[start + c]
    # random spot checks
    for _ in range(20):
        k = rng.randrange(len(hs))
        flat = hs.point_block(k, 1)
        assert tuple(flat) == hs[k]


def test_backends_agree():
    g = params_222()
    hs = hitting_set(g)
    args = (
        g.field.p, g.d, 4, hs._sarr, hs._omega_pows, hs._lag, hs._exps,
    )
    a = kernels.gen_points_block(*args, 1000, 300)
    b = _kernels_py.gen_points_block(*args, 1000, 300)
    assert list(a) == list(b)


def test_point_block_deep():
    # deeper recursion: d = 3 over F_65537, block path vs per-index path
    g = gen_params_new(Field(65537), 8, 2, 2)
    hs = hitting_set(g)
    flat = hs.point_block(12345, 5)
    for c in range(5):
        assert tuple(flat[c * 8 : (c + 1) * 8]) == hs[12345 + c]


def test_degree_bound_lemma():
    # interpolated degree of each output in each seed coordinate is at most
    # D n r^4: take B+2 samples, the degree-(B+1) interpolant's leading
    # coefficient must vanish
    rng = random.Random(28)
    for d, n, r, p in [(0, 2, 2, 4099), (1, 2, 2, 4099), (2, 2, 1, 4099)]:
        f = Field(p)
        g = gen_params_new(f, 1 << d, n, r)
        bound = (1 << d) * n * r**4
        m = bound + 2
        xs = list(range(m))
        for _ in range(6):
            coord = rng.randrange(d + 1)
            j = rng.randrange(1 << d)
            fixed = [rng.randrange(p) for _ in range(d + 1)]
            ys = []
            for t in xs:
                seed = list(fixed)
                seed[coord] = t
                ys.append(gen_eval_all(g, seed)[j])
            # leading coefficient of the interpolant through (xs, ys):
            # sum_i y_i / prod_{k != i} (x_i - x_k)
            lead = 0
            for i in range(m):
                denom = 1
                for k in range(m):
                    if k != i:
                        denom = denom * (xs[i] - xs[k]) % p
                lead = (lead + ys[i] * f.inv(denom)) % p
            assert lead == 0


def test_span_preservation_small():
    # products over a full degree grid and over the generator's seed grid
    # span the same matrix space (exhaustive elimination comparison)
    from roabp_pit.field import UniPoly
    from roabp_pit.linalg import flatten_matrix, mat_mul, span_equal, span_of

    rng = random.Random(29)
    for d, n, r, p in [(0, 2, 2, 1031), (1, 2, 2, 4099), (2, 2, 1, 257)]:
        D = 1 << d
        f = Field(p)
        g = gen_params_new(f, D, n, r)
        for _ in range(3):
            mats = [
                [
                    [UniPoly(f, [rng.randrange(p) for _ in range(n)]) for _ in range(r)]
                    for _ in range(r)
                ]
                for _ in range(D)
            ]

            def prod_at(point):
                acc = None
                for layer, x in zip(mats, point):
                    m = [[e.eval(x) for e in row] for row in layer]
                    acc = m if acc is None else mat_mul(acc, m, f)
                return acc

            lhs = span_of(
                f, r * r,
                [flatten_matrix(prod_at(pt)) for pt in product(range(n), repeat=D)],
            )
            side = D * n * r**4 + 1
            rhs = span_of(
                f, r * r,
                [
                    flatten_matrix(prod_at(gen_eval_all(g, list(seed))))
                    for seed in product(range(side), repeat=d + 1)
                ],
            )
            assert span_equal(lhs, rhs)
