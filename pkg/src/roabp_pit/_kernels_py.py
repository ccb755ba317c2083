"""Pure-Python fallback for the hot kernels.

Mirrors the compiled module in roabp_pit._kernels exactly; see _backend.py
for how one of the two is selected at import time.

Both kernels work on flat array('q') buffers of canonical representatives:

  gen_points_block  -- hitting-set generator outputs for a contiguous index
                       range of the seed grid S^(d+1), in row-major order
                       (the last seed coordinate varies fastest).
  roabp_eval_block  -- (0,0) entries of the layer-matrix product of an ROABP
                       at a block of points.

The generator kernel follows the branching-program form of the generator:
one row-vector pass per level with the level's evaluation points, reusing
every level whose seed digit did not change between consecutive indices.
"""

from array import array

BACKEND = "python"


def _horner(coeffs, lo, hi, x, p):
    acc = 0
    for k in range(hi - 1, lo - 1, -1):
        acc = (acc * x + coeffs[k]) % p
    return acc


def gen_points_block(p, d, r2, sarr, omega_pows, lag, exps, start, count):
    """Return array('q') of D*count generator outputs, point-major.

    sarr       -- evaluation set S (canonical elements)
    omega_pows -- omega**l for l in [0, r2)
    lag        -- r2*r2 flat Lagrange coefficients, lag[l*r2+j] = coeff_j(p_l)
    exps       -- per-level power-branch exponents (each >= 1)
    """
    ns = len(sarr)
    D = 1 << d
    out = array("q", bytes(8 * D * count))
    if d == 0:
        for c in range(count):
            out[c] = sarr[(start + c) % ns]
        return out

    idx = [0] * (d + 1)
    rem = start
    for t in range(d, -1, -1):
        idx[t] = rem % ns
        rem //= ns
    alpha = [sarr[i] for i in idx]

    # V[i][k] is the r2-vector for output-bit prefix k at level i.
    V = [[[0] * r2 for _ in range(2 << i)] for i in range(d)]

    def rebuild(i):
        a = alpha[i]
        y0 = [w * a % p for w in omega_pows]
        e = exps[i]
        y1 = [pow(y, e, p) if y else 0 for y in y0]
        if i == 0:
            V[0][0][:] = y0
            V[0][1][:] = y1
            return
        half = 1 << i
        for k in range(half):
            child = V[i - 1][k]
            q = [0] * r2
            for prev in range(r2):
                cv = child[prev]
                if cv == 0:
                    continue
                base = prev * r2
                for j in range(r2):
                    q[j] = (q[j] + cv * lag[base + j]) % p
            row0 = V[i][k]
            row1 = V[i][k + half]
            for cur in range(r2):
                acc = 0
                x = y0[cur]
                for j in range(r2 - 1, -1, -1):
                    acc = (acc * x + q[j]) % p
                row0[cur] = acc
                acc = 0
                x = y1[cur]
                for j in range(r2 - 1, -1, -1):
                    acc = (acc * x + q[j]) % p
                row1[cur] = acc

    lagv = [0] * r2
    pos = 0  # levels >= pos are stale
    for c in range(count):
        if pos < d:
            for i in range(pos, d):
                rebuild(i)
        ad = alpha[d]
        for ell in range(r2):
            lagv[ell] = _horner(lag, ell * r2, ell * r2 + r2, ad, p)
        base = c * D
        Vd = V[d - 1]
        for j in range(D):
            row = Vd[j]
            acc = 0
            for ell in range(r2):
                acc += row[ell] * lagv[ell]
            out[base + j] = acc % p
        # advance the seed index, recording the lowest changed position
        pos = d
        idx[pos] += 1
        while idx[pos] == ns and pos > 0:
            idx[pos] = 0
            alpha[pos] = sarr[0]
            pos -= 1
            idx[pos] += 1
        if idx[pos] < ns:
            alpha[pos] = sarr[idx[pos]]
        else:  # wrapped past the end of the full grid
            idx[pos] = 0
            alpha[pos] = sarr[0]
    return out


def roabp_eval_block(p, r, D, n, coeffs, points, count):
    """Return array('q') of count values: (prod_i M_i(x_i))_{(0,0)} per point.

    coeffs -- D*r*r*n flat layer coefficients, entry (i, u, v) coefficient j
              at coeffs[((i*r + u)*r + v)*n + j]
    points -- count*D flat points, point-major
    """
    out = array("q", bytes(8 * count))
    vec = [0] * r
    nxt = [0] * r
    for c in range(count):
        pbase = c * D
        for u in range(r):
            vec[u] = 0
        vec[0] = 1
        for i in range(D):
            x = points[pbase + i]
            lbase = i * r * r * n
            for v in range(r):
                nxt[v] = 0
            for u in range(r):
                vu = vec[u]
                if vu == 0:
                    continue
                ebase = lbase + u * r * n
                for v in range(r):
                    cb = ebase + v * n
                    acc = 0
                    for j in range(n - 1, -1, -1):
                        acc = (acc * x + coeffs[cb + j]) % p
                    if acc:
                        nxt[v] = (nxt[v] + vu * acc) % p
            vec, nxt = nxt, vec
        out[c] = vec[0]
    return out
