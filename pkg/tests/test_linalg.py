import random

import pytest

from roabp_pit.errors import DimensionMismatch, OrderTooSmall, TooLarge
from roabp_pit.field import Field, UniPoly, find_element_of_order, multiplicative_order
from roabp_pit.linalg import (
    SpanBasis,
    count_bad_alphas,
    extractor_points,
    flatten_matrix,
    mat_eval,
    mat_mul,
    matrix_rank,
    merged_span_evals,
    span_equal,
    span_insert,
    span_of,
)


def test_insert_basics():
    f = Field(7)
    b = SpanBasis(f, 2)
    _, grew = span_insert(b, [1, 0])
    assert grew
    _, grew = span_insert(b, [0, 1])
    assert grew
    assert b.rank == 2
    b2 = SpanBasis(f, 2)
    assert b2.insert([1, 1])
    assert not b2.insert([2, 2])
    assert b2.rank == 1
    with pytest.raises(DimensionMismatch):
        b2.insert([1, 2, 3])


def test_insert_matches_full_elimination():
    rng = random.Random(4)
    f = Field(7)
    vecs = [[rng.randrange(7) for _ in range(4)] for _ in range(50)]
    b = span_of(f, 4, vecs)
    assert b.rank == matrix_rank(vecs, f)


def test_rref_invariants():
    rng = random.Random(5)
    f = Field(13)
    b = SpanBasis(f, 5)
    for _ in range(20):
        b.insert([rng.randrange(13) for _ in range(5)])
    assert b.pivots == sorted(b.pivots)
    for i, (row, piv) in enumerate(zip(b.rows, b.pivots)):
        assert row[piv] == 1
        for other, other_piv in zip(b.rows, b.pivots):
            if other is not row:
                assert other[piv] == 0
    # re-reducing is a no-op
    for row in list(b.rows):
        assert not b.insert(list(row))


def test_seal():
    f = Field(7)
    b = SpanBasis(f, 2)
    b.insert([1, 0])
    b.seal()
    with pytest.raises(RuntimeError):
        b.insert([0, 1])


def test_span_equal():
    f = Field(7)
    a = span_of(f, 2, [[1, 0], [0, 1]])
    b = span_of(f, 2, [[1, 1], [1, 6]])
    assert span_equal(a, b)
    assert not span_equal(span_of(f, 2, [[1, 0]]), span_of(f, 2, [[0, 1]]))
    with pytest.raises(DimensionMismatch):
        span_equal(span_of(f, 2, [[1, 0]]), span_of(f, 3, [[1, 0, 0]]))


def test_span_invariant_under_recombination():
    rng = random.Random(6)
    f = Field(13)
    for _ in range(20):
        m = rng.randrange(2, 5)
        gens = [[rng.randrange(13) for _ in range(m)] for _ in range(m)]
        # random invertible recombination
        while True:
            t = [[rng.randrange(13) for _ in range(m)] for _ in range(m)]
            if matrix_rank(t, f) == m:
                break
        mixed = mat_mul(t, gens, f)
        assert span_equal(span_of(f, m, gens), span_of(f, m, mixed))


def test_span_equal_is_equivalence():
    rng = random.Random(7)
    f = Field(7)
    bases = []
    for _ in range(6):
        bases.append(span_of(f, 3, [[rng.randrange(7) for _ in range(3)] for _ in range(2)]))
    for a in bases:
        assert span_equal(a, a)
        for b in bases:
            assert span_equal(a, b) == span_equal(b, a)
            for c in bases:
                if span_equal(a, b) and span_equal(b, c):
                    assert span_equal(a, c)


def test_extractor_points():
    f = Field(7)
    assert extractor_points(f, 2, 1, 3) == [1, 2, 4]
    assert extractor_points(f, 2, 0, 3) == [0, 0, 0]


def test_extractor_points_distinct():
    rng = random.Random(8)
    f = Field(31)
    omega = find_element_of_order(f, 8)
    for _ in range(20):
        alpha = rng.randrange(1, 31)
        pts = extractor_points(f, omega, alpha, 8)
        assert len(set(pts)) == 8


def test_merged_span_evals_identity():
    f = Field(31)
    one, zero = f.one_poly(), f.zero_poly()
    ident = [[one, zero], [zero, one]]
    omega = find_element_of_order(f, 4)  # n = 2 needs order >= 4
    out = merged_span_evals(ident, ident, f, omega, 5, 4, 2)
    assert len(out) == 4
    for m in out:
        assert m == [[1, 0], [0, 1]]


def test_merged_span_evals_constant_layers():
    f = Field(31)
    a = [[f.poly([3]), f.poly([1])], [f.poly([0]), f.poly([2])]]
    b = [[f.poly([1]), f.poly([4])], [f.poly([5]), f.poly([0])]]
    prod = mat_mul(mat_eval(a, 0), mat_eval(b, 0), f)
    out = merged_span_evals(a, b, f, find_element_of_order(f, 1), 7, 3, 1)
    assert all(m == prod for m in out)


def test_merged_span_evals_order_too_small():
    f = Field(31)
    one = f.one_poly()
    zero = f.zero_poly()
    ident = [[one, zero], [zero, one]]
    with pytest.raises(OrderTooSmall):
        merged_span_evals(ident, ident, f, 1, 3, 4, 3)  # ord(1) = 1 < 9


def test_merged_span_containment_unconditional():
    # span of merged evaluations is always inside the span of the coefficient
    # matrices of M(x)N(y), for every seed alpha
    rng = random.Random(9)
    f = Field(31)
    n, r = 2, 2
    omega = find_element_of_order(f, n * n)
    for _ in range(10):
        m_layer = [
            [UniPoly(f, [rng.randrange(31) for _ in range(n)]) for _ in range(r)]
            for _ in range(r)
        ]
        n_layer = [
            [UniPoly(f, [rng.randrange(31) for _ in range(n)]) for _ in range(r)]
            for _ in range(r)
        ]
        coeff_span = SpanBasis(f, r * r)
        for i in range(n):
            for j in range(n):
                ci = [[e.coeffs[i] if len(e.coeffs) > i else 0 for e in row] for row in m_layer]
                cj = [[e.coeffs[j] if len(e.coeffs) > j else 0 for e in row] for row in n_layer]
                coeff_span.insert(flatten_matrix(mat_mul(ci, cj, f)))
        for alpha in range(31):
            for m in merged_span_evals(m_layer, n_layer, f, omega, alpha, r * r, n):
                assert coeff_span.contains(flatten_matrix(m))


def test_merged_span_equality_for_most_alphas():
    # equality of the two spans fails for fewer than (n*r)**2 seeds,
    # exhaustively over a small field
    rng = random.Random(10)
    f = Field(31)
    n, r = 2, 2
    omega = find_element_of_order(f, n * n)
    for _ in range(5):
        m_layer = [
            [UniPoly(f, [rng.randrange(31) for _ in range(n)]) for _ in range(r)]
            for _ in range(r)
        ]
        n_layer = [
            [UniPoly(f, [rng.randrange(31) for _ in range(n)]) for _ in range(r)]
            for _ in range(r)
        ]
        coeff_span = SpanBasis(f, r * r)
        for i in range(n):
            for j in range(n):
                ci = [[e.coeffs[i] if len(e.coeffs) > i else 0 for e in row] for row in m_layer]
                cj = [[e.coeffs[j] if len(e.coeffs) > j else 0 for e in row] for row in n_layer]
                coeff_span.insert(flatten_matrix(mat_mul(ci, cj, f)))
        bad = 0
        for alpha in range(31):
            ev_span = SpanBasis(f, r * r)
            for m in merged_span_evals(m_layer, n_layer, f, omega, alpha, r * r, n):
                ev_span.insert(flatten_matrix(m))
            if not span_equal(ev_span, coeff_span):
                bad += 1
        assert bad < (n * n * r * r) ** 2
        assert bad < 31  # some good seed exists in this field


def test_count_bad_alphas_identity():
    # M = 2x2 identity: A_alpha M has rows [1, alpha], [1, omega*alpha];
    # rank drops only at alpha = 0
    f = Field(13)
    omega = find_element_of_order(f, 2)
    m = [[1, 0], [0, 1]]
    assert count_bad_alphas(m, f, omega, 2) == 1


def test_count_bad_alphas_zero_matrix():
    f = Field(13)
    assert count_bad_alphas([[0, 0], [0, 0]], f, 2, 2) == 0


def test_count_bad_alphas_rank_one():
    rng = random.Random(11)
    f = Field(13)
    omega = find_element_of_order(f, 2)
    for _ in range(10):
        row = [rng.randrange(1, 13), rng.randrange(13)]
        scalars = [1, rng.randrange(1, 13)]
        m = [[s * c % 13 for c in row] for s in scalars]
        assert matrix_rank(m, f) == 1
        assert count_bad_alphas(m, f, omega, 2) < 2 * 2


def test_count_bad_alphas_refuses_large_field():
    f = Field(65539)  # first prime above 2**16
    with pytest.raises(TooLarge):
        count_bad_alphas([[1]], f, 1, 1)
