# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops.  Signatures mirror ``sphx._pycore`` exactly."""

import numpy as np
from sphx.gausslegendre import gauss
cimport numpy as cnp
from libc.math cimport cos, sin, exp, log, sqrt, cosh, sinh, M_PI

cnp.import_array()


def _gauss(int n, double a, double b):
    return gauss(n, a, b)


def sl3_octant(double x0, double x1, double x2,
               double c1r, double c1i, double c2r, double c2i,
               int n_cos, int n_phi, int n_u):
    """Average of A1^c1 A2^c2 over SO(3) (see _pycore for the geometry)."""
    cdef cnp.ndarray[double] ct, wct, ph, wph
    ct, wct = _gauss(n_cos, 0.0, 1.0)
    ph, wph = _gauss(n_phi, 0.0, 0.5 * M_PI)
    cdef double w0 = exp(2 * x0), w1 = exp(2 * x1), w2 = exp(2 * x2)
    cdef double v0 = exp(-2 * x0), v1 = exp(-2 * x1), v2 = exp(-2 * x2)
    cdef int i, j, k
    cdef double c, s, cp, sp, A1, L1, m1, a1, E, F, G, P, S, Q, Lq, m2, acc_r, acc_i
    cdef double e0, e1, e2, f0, f1, n0, n1, n2, wk
    cdef double tot_r = 0.0, tot_i = 0.0
    cdef cnp.ndarray[double] cu = np.cos(2 * M_PI * (np.arange(n_u // 2 + 1)) / n_u)
    cdef cnp.ndarray[double] wu = np.full(n_u // 2 + 1, 2.0 / n_u)
    wu[0] = 1.0 / n_u
    if n_u % 2 == 0:
        wu[n_u // 2] = 1.0 / n_u
    cdef int nu2 = n_u // 2 + 1
    for i in range(n_cos):
        c = ct[i]
        s = sqrt(1.0 - c * c)
        for j in range(n_phi):
            cp = cos(ph[j])
            sp = sin(ph[j])
            n0 = s * cp; n1 = s * sp; n2 = c
            e0 = c * cp; e1 = c * sp; e2 = -s
            f0 = -sp; f1 = cp
            A1 = n0 * n0 * w0 + n1 * n1 * w1 + n2 * n2 * w2
            L1 = log(A1)
            m1 = exp(c1r * L1)
            a1 = c1i * L1
            E = e0 * e0 * v0 + e1 * e1 * v1 + e2 * e2 * v2
            F = f0 * f0 * v0 + f1 * f1 * v1
            G = e0 * f0 * v0 + e1 * f1 * v1
            P = 0.5 * (E + F)
            S = sqrt(0.25 * (E - F) * (E - F) + G * G)
            acc_r = 0.0
            acc_i = 0.0
            for k in range(nu2):
                Q = P + S * cu[k]
                Lq = log(Q)
                m2 = wu[k] * exp(c2r * Lq)
                acc_r += m2 * cos(c2i * Lq)
                acc_i += m2 * sin(c2i * Lq)
            wk = wct[i] * wph[j] * m1
            tot_r += wk * (acc_r * cos(a1) - acc_i * sin(a1))
            tot_i += wk * (acc_r * sin(a1) + acc_i * cos(a1))
    scale = 1.0 / (0.5 * M_PI)
    return complex(tot_r * scale, tot_i * scale)


def circle_phi(double[:] nu, double[:] r, int n_theta):
    """(1/pi) int_0^pi (cosh r - sinh r cos th)^(-1/2 - i nu) dth, trapezoid rule."""
    cdef int a = nu.shape[0], b = r.shape[0], i, j, k
    out = np.zeros((a, b), dtype=np.complex128)
    cdef double complex[:, :] o = out
    cdef cnp.ndarray[double] cth = np.cos(np.pi * np.arange(n_theta + 1) / n_theta)
    cdef cnp.ndarray[double] wth = np.full(n_theta + 1, 1.0 / n_theta)
    wth[0] = 0.5 / n_theta
    wth[n_theta] = 0.5 / n_theta
    cdef double ch, sh, sr, si
    # log and amplitude depend on (r, theta) only; hoist them out of the nu loop
    cdef double[:] L = np.empty(n_theta + 1)
    cdef double[:] amp = np.empty(n_theta + 1)
    for j in range(b):
        ch = cosh(r[j])
        sh = sinh(r[j])
        for k in range(n_theta + 1):
            L[k] = log(ch - sh * cth[k])
            amp[k] = wth[k] * exp(-0.5 * L[k])
        for i in range(a):
            sr = 0.0
            si = 0.0
            for k in range(n_theta + 1):
                sr += amp[k] * cos(nu[i] * L[k])
                si -= amp[k] * sin(nu[i] * L[k])
            o[i, j] = sr + 1j * si
    return out


def mehler_sum(double[:] r, double[:] nu, double[:] w, int n_s):
    """sum_j w_j phi_{nu_j}(r) on H2 via (sqrt2/pi) int_0^r cos(nu s) (cosh r - cosh s)^(-1/2) ds.

    Substituting s = r - v^2 removes the endpoint singularity; Gauss-Legendre in v.
    """
    cdef int b = r.shape[0], m = nu.shape[0], j, k, l
    out = np.zeros(b)
    cdef double[:] o = out
    cdef cnp.ndarray[double] xg, wg
    xg, wg = _gauss(n_s, 0.0, 1.0)
    cdef double rj, V, v, s, ker, F, acc, tot_w = 0.0
    cdef double c0 = sqrt(2.0) / M_PI
    for l in range(m):
        tot_w += w[l]
    for j in range(b):
        rj = r[j]
        if rj <= 0.0:
            o[j] = tot_w
            continue
        V = sqrt(rj)
        acc = 0.0
        for k in range(n_s):
            v = V * xg[k]
            s = rj - v * v
            ker = V * wg[k] * 2.0 * v / sqrt(2.0 * sinh(rj - 0.5 * v * v) * sinh(0.5 * v * v))
            F = 0.0
            for l in range(m):
                F += w[l] * cos(nu[l] * s)
            acc += ker * F
        o[j] = c0 * acc
    return out


def su3_schur(int l1, int l2, double[:, :] phi):
    """Schur polynomial s_(l1,l2,0) at (e^{i phi_0}, e^{i phi_1}, e^{i phi_2}) via Jacobi-Trudi.

    Complex products are written out in real arithmetic; C99 complex
    multiplication adds inf/nan recovery branches that dominate this loop.
    """
    cdef int npts = phi.shape[0], p, k, c
    cdef int top = l1 + 2
    out = np.zeros(npts, dtype=np.complex128)
    cdef double complex[:] o = out
    hr_buf = np.zeros(top + 1)
    hi_buf = np.zeros(top + 1)
    cdef double[:] hr = hr_buf
    cdef double[:] hi = hi_buf
    cdef double xr, xi, ar, ai, br, bi, tr
    for p in range(npts):
        # h_k(x0), then fold in x1 and x2: h_k(..., y) = h_k(...) + y h_{k-1}(..., y)
        xr = cos(phi[p, 0])
        xi = sin(phi[p, 0])
        hr[0] = 1.0
        hi[0] = 0.0
        for k in range(1, top + 1):
            hr[k] = hr[k - 1] * xr - hi[k - 1] * xi
            hi[k] = hr[k - 1] * xi + hi[k - 1] * xr
        for c in range(1, 3):
            xr = cos(phi[p, c])
            xi = sin(phi[p, c])
            for k in range(1, top + 1):
                tr = hr[k] + xr * hr[k - 1] - xi * hi[k - 1]
                hi[k] = hi[k] + xr * hi[k - 1] + xi * hr[k - 1]
                hr[k] = tr
        ar = hr[l1] * hr[l2] - hi[l1] * hi[l2]
        ai = hr[l1] * hi[l2] + hi[l1] * hr[l2]
        if l2 >= 1:
            br = hr[l1 + 1] * hr[l2 - 1] - hi[l1 + 1] * hi[l2 - 1]
            bi = hr[l1 + 1] * hi[l2 - 1] + hi[l1 + 1] * hr[l2 - 1]
        else:
            br = 0.0
            bi = 0.0
        o[p] = (ar - br) + 1j * (ai - bi)
    return out
