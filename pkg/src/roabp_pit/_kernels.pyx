# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: generator-point blocks and batch ROABP evaluation.

Same contracts as roabp_pit._kernels_py; moduli fit in 63 bits, so products
use a 128-bit intermediate.
"""

from array import array

cdef extern from *:
    """
    typedef unsigned __int128 rp_u128;
    """
    ctypedef unsigned long long rp_u128

BACKEND = "compiled"

ctypedef unsigned long long u64


cdef inline u64 mulmod(u64 a, u64 b, u64 p) nogil:
    return <u64>((<rp_u128>a) * b % p)


cdef inline u64 powmod(u64 base, u64 e, u64 p) nogil:
    cdef u64 acc = 1 % p
    cdef u64 b = base % p
    while e:
        if e & 1:
            acc = mulmod(acc, b, p)
        b = mulmod(b, b, p)
        e >>= 1
    return acc


cdef inline u64 horner(const long long * coeffs, Py_ssize_t n, u64 x, u64 p) nogil:
    cdef u64 acc = 0
    cdef Py_ssize_t k
    for k in range(n - 1, -1, -1):
        acc = (mulmod(acc, x, p) + <u64>coeffs[k]) % p
    return acc


def gen_points_block(p, d, r2, sarr, omega_pows, lag, exps, start, count):
    """See roabp_pit._kernels_py.gen_points_block."""
    cdef u64 cp = p
    cdef int cd = d
    cdef Py_ssize_t cr2 = r2
    cdef Py_ssize_t ccount = count
    cdef long long[::1] s_mv = sarr
    cdef long long[::1] om_mv = omega_pows
    cdef long long[::1] lag_mv = lag
    cdef long long[::1] exp_mv = exps
    cdef Py_ssize_t ns = s_mv.shape[0]
    cdef Py_ssize_t D = 1 << cd

    out = array("q", bytes(8 * D * ccount))
    cdef long long[::1] out_mv = out

    cdef Py_ssize_t c, t, i, j, k, cur, prev, ell, half, base
    cdef u64 acc, x, a, cv
    if cd == 0:
        for c in range(ccount):
            out_mv[c] = s_mv[(start + c) % ns]
        return out

    cdef object rem_obj = start  # start can exceed 64 bits for huge grids
    idx_arr = array("q", bytes(8 * (cd + 1)))
    alpha_arr = array("q", bytes(8 * (cd + 1)))
    cdef long long[::1] idx = idx_arr
    cdef long long[::1] alpha = alpha_arr
    for t in range(cd, -1, -1):
        idx[t] = rem_obj % ns
        rem_obj //= ns
    for t in range(cd + 1):
        alpha[t] = s_mv[idx[t]]

    # V level i holds (2 << i) row vectors of length r2, flat at voff[i]
    cdef Py_ssize_t vtotal = 0
    voff_arr = array("q", bytes(8 * cd))
    cdef long long[::1] voff = voff_arr
    for i in range(cd):
        voff[i] = vtotal
        vtotal += (2 << i) * cr2
    v_arr = array("q", bytes(8 * vtotal))
    cdef long long[::1] V = v_arr
    scratch = array("q", bytes(8 * 4 * cr2))
    cdef long long[::1] y0 = scratch[:cr2]
    cdef long long[::1] y1 = scratch[cr2:2 * cr2]
    cdef long long[::1] q = scratch[2 * cr2:3 * cr2]
    cdef long long[::1] lagv = scratch[3 * cr2:]

    cdef Py_ssize_t pos = 0
    cdef Py_ssize_t lev, vbase, cbase
    cdef u64 e
    for c in range(ccount):
        for lev in range(pos, cd):
            a = <u64>alpha[lev]
            e = <u64>exp_mv[lev]
            for cur in range(cr2):
                x = mulmod(<u64>om_mv[cur], a, cp)
                y0[cur] = <long long>x
                y1[cur] = <long long>(powmod(x, e, cp) if x else 0)
            if lev == 0:
                for cur in range(cr2):
                    V[cur] = y0[cur]
                    V[cr2 + cur] = y1[cur]
                continue
            half = 1 << lev
            vbase = voff[lev]
            cbase = voff[lev - 1]
            for k in range(half):
                for j in range(cr2):
                    q[j] = 0
                for prev in range(cr2):
                    cv = <u64>V[cbase + k * cr2 + prev]
                    if cv == 0:
                        continue
                    base = prev * cr2
                    for j in range(cr2):
                        q[j] = <long long>((<u64>q[j] + mulmod(cv, <u64>lag_mv[base + j], cp)) % cp)
                for cur in range(cr2):
                    V[vbase + k * cr2 + cur] = <long long>horner(&q[0], cr2, <u64>y0[cur], cp)
                    V[vbase + (k + half) * cr2 + cur] = <long long>horner(&q[0], cr2, <u64>y1[cur], cp)
        a = <u64>alpha[cd]
        for ell in range(cr2):
            lagv[ell] = <long long>horner(&lag_mv[ell * cr2], cr2, a, cp)
        base = c * D
        vbase = voff[cd - 1]
        for j in range(D):
            acc = 0
            for ell in range(cr2):
                acc = (acc + mulmod(<u64>V[vbase + j * cr2 + ell], <u64>lagv[ell], cp)) % cp
            out_mv[base + j] = <long long>acc
        # advance the seed index
        pos = cd
        idx[pos] += 1
        while idx[pos] == ns and pos > 0:
            idx[pos] = 0
            alpha[pos] = s_mv[0]
            pos -= 1
            idx[pos] += 1
        if idx[pos] < ns:
            alpha[pos] = s_mv[idx[pos]]
        else:
            idx[pos] = 0
            alpha[pos] = s_mv[0]
    return out


def roabp_eval_block(p, r, D, n, coeffs, points, count):
    """See roabp_pit._kernels_py.roabp_eval_block."""
    cdef u64 cp = p
    cdef Py_ssize_t cr = r
    cdef Py_ssize_t cD = D
    cdef Py_ssize_t cn = n
    cdef Py_ssize_t ccount = count
    cdef long long[::1] cf = coeffs
    cdef long long[::1] pts = points

    out = array("q", bytes(8 * ccount))
    cdef long long[::1] out_mv = out
    work = array("q", bytes(8 * 2 * cr))
    cdef long long[::1] vec = work[:cr]
    cdef long long[::1] nxt = work[cr:]
    cdef long long[::1] tmp

    cdef Py_ssize_t c, i, u, v, pbase, lbase, ebase
    cdef u64 x, acc, vu
    for c in range(ccount):
        pbase = c * cD
        for u in range(cr):
            vec[u] = 0
        vec[0] = 1
        for i in range(cD):
            x = <u64>pts[pbase + i]
            lbase = i * cr * cr * cn
            for v in range(cr):
                nxt[v] = 0
            for u in range(cr):
                vu = <u64>vec[u]
                if vu == 0:
                    continue
                ebase = lbase + u * cr * cn
                for v in range(cr):
                    acc = horner(&cf[ebase + v * cn], cn, x, cp)
                    if acc:
                        nxt[v] = <long long>((<u64>nxt[v] + mulmod(vu, acc, cp)) % cp)
            tmp = vec
            vec = nxt
            nxt = tmp
        out_mv[c] = vec[0]
    return out
