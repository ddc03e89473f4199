"""Compiled inner loops for the eigensolvers.

Everything here works in place on float64 arrays and reports failure
through return codes; the public wrappers in ``eigen`` and ``pca`` turn
those into exceptions.
"""

import math

import numpy as np
from numba import njit

RADIX = 2.0
DEFLATION_TOL = 1e-12
SWEEPS_PER_DIM = 30


@njit(cache=True)
def balance(a):
    """Scale rows/columns by powers of two until their 1-norms are comparable.

    This is a similarity transform (D^-1 A D), so the spectrum is unchanged
    and the scaling introduces no rounding error.
    """
    n = a.shape[0]
    sqrdx = RADIX * RADIX
    done = False
    while not done:
        done = True
        for i in range(n):
            r = 0.0
            c = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j, i])
                    r += abs(a[i, j])
            if c != 0.0 and r != 0.0:
                g = r / RADIX
                f = 1.0
                s = c + r
                while c < g:
                    f *= RADIX
                    c *= sqrdx
                g = r * RADIX
                while c > g:
                    f /= RADIX
                    c /= sqrdx
                if (c + r) / f < 0.95 * s:
                    done = False
                    g = 1.0 / f
                    for j in range(n):
                        a[i, j] *= g
                    for j in range(n):
                        a[j, i] *= f


@njit(cache=True)
def hessenberg(a):
    """Reduce ``a`` to upper Hessenberg form with Householder reflections."""
    n = a.shape[0]
    v = np.empty(n)
    for k in range(n - 2):
        m = n - k - 1
        scale = 0.0
        for i in range(k + 1, n):
            scale += abs(a[i, k])
        if scale == 0.0:
            continue
        norm2 = 0.0
        for i in range(m):
            v[i] = a[k + 1 + i, k] / scale
            norm2 += v[i] * v[i]
        alpha = math.sqrt(norm2)
        if v[0] > 0:
            alpha = -alpha
        v[0] -= alpha
        vnorm2 = 0.0
        for i in range(m):
            vnorm2 += v[i] * v[i]
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        # H <- (I - beta v v^T) H, rows k+1..n-1
        for j in range(k, n):
            s = 0.0
            for i in range(m):
                s += v[i] * a[k + 1 + i, j]
            s *= beta
            for i in range(m):
                a[k + 1 + i, j] -= s * v[i]
        # H <- H (I - beta v v^T), columns k+1..n-1
        for i in range(n):
            s = 0.0
            for j in range(m):
                s += a[i, k + 1 + j] * v[j]
            s *= beta
            for j in range(m):
                a[i, k + 1 + j] -= s * v[j]
        for i in range(k + 2, n):
            a[i, k] = 0.0


@njit(cache=True)
def hessenberg_qr(h, wr, wi):
    """Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.

    ``h`` is destroyed. Real eigenvalues come from converged 1x1 blocks,
    conjugate pairs from 2x2 blocks. Returns the number of QR sweeps used,
    or -1 when the budget of ``SWEEPS_PER_DIM * n`` sweeps runs out.
    """
    n = h.shape[0]
    # 1-based working copy keeps the index arithmetic readable
    a = np.zeros((n + 1, n + 1))
    a[1:, 1:] = h
    anorm = 0.0
    for i in range(1, n + 1):
        for j in range(max(i - 1, 1), n + 1):
            anorm += abs(a[i, j])
    budget = SWEEPS_PER_DIM * n
    sweeps = 0
    nn = n
    t = 0.0
    x = y = z = w = p = q = r = 0.0
    while nn >= 1:
        its = 0
        while True:
            # look for a negligible subdiagonal element
            l = 1
            for ll in range(nn, 1, -1):
                s = abs(a[ll - 1, ll - 1]) + abs(a[ll, ll])
                if s == 0.0:
                    s = anorm
                if abs(a[ll, ll - 1]) <= DEFLATION_TOL * s:
                    a[ll, ll - 1] = 0.0
                    l = ll
                    break
            x = a[nn, nn]
            if l == nn:
                wr[nn - 1] = x + t
                wi[nn - 1] = 0.0
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + (z if p >= 0.0 else -z)
                    wr[nn - 2] = x + z
                    wr[nn - 1] = x + z
                    if z != 0.0:
                        wr[nn - 1] = x - w / z
                    wi[nn - 2] = 0.0
                    wi[nn - 1] = 0.0
                else:
                    wr[nn - 2] = x + p
                    wr[nn - 1] = x + p
                    wi[nn - 2] = z
                    wi[nn - 1] = -z
                nn -= 2
                break
            if sweeps >= budget:
                return -1
            if its > 0 and its % 10 == 0:
                # exceptional shift breaks cycles
                t += x
                for i in range(1, nn + 1):
                    a[i, i] -= x
                s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                x = 0.75 * s
                y = x
                w = -0.4375 * s * s
            its += 1
            sweeps += 1
            # find two consecutive small subdiagonals to start the bulge
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                if u + v == v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i, i - 2] = 0.0
                if i != m + 2:
                    a[i, i - 3] = 0.0
            # chase the bulge
            for k in range(m, nn):
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = 0.0
                    if k != nn - 1:
                        r = a[k + 2, k - 1]
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.sqrt(p * p + q * q + r * r)
                if p < 0.0:
                    s = -s
                if s != 0.0:
                    if k == m:
                        if l != m:
                            a[k, k - 1] = -a[k, k - 1]
                    else:
                        a[k, k - 1] = -s * x
                    p += s
                    x = p / s
                    y = q / s
                    z = r / s
                    q /= p
                    r /= p
                    for j in range(k, nn + 1):
                        p = a[k, j] + q * a[k + 1, j]
                        if k != nn - 1:
                            p += r * a[k + 2, j]
                            a[k + 2, j] -= p * z
                        a[k + 1, j] -= p * y
                        a[k, j] -= p * x
                    mmin = nn if nn < k + 3 else k + 3
                    for i in range(l, mmin + 1):
                        p = x * a[i, k] + y * a[i, k + 1]
                        if k != nn - 1:
                            p += z * a[i, k + 2]
                            a[i, k + 2] -= p * r
                        a[i, k + 1] -= p * q
                        a[i, k] -= p
            if l >= nn - 1:
                break
    return sweeps


@njit(cache=True)
def jacobi_eigh(a, v, max_sweeps):
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    On return the diagonal of ``a`` holds the eigenvalues and the columns of
    ``v`` the eigenvectors. Returns sweeps used, or -1 without convergence.
    """
    n = a.shape[0]
    for i in range(n):
        for j in range(n):
            v[i, j] = 1.0 if i == j else 0.0
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += a[i, j] * a[i, j]
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        if off <= 1e-30 * total or off == 0.0:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * (abs(a[p, p]) + abs(a[q, q])):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return -1
