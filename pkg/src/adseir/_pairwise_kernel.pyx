# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise RHS kernel.

Must stay expression-for-expression identical to _pairwise_py.py.
State layout: [S, E, I, R, SS, SE, SI, EE, EI, II, <k>, <k^2-k>, phi].
"""

cdef inline double _mx(double d, double eps) nogil:
    return d if d > eps else eps


def closure_flat(double[::1] y, double n, double eps=1e-12):
    cdef double s = y[0], e = y[1], i = y[2]
    cdef double ss = y[4], se = y[5], si = y[6], ei = y[8], ii = y[9]
    cdef double k = y[10], k2k = y[11], phi = y[12]
    cdef double base, corr, ssi, esi, isi

    base = (k2k / _mx(k * k, eps)) * (si / _mx(s, eps))
    corr = phi * n / _mx(k, eps)
    ssi = base * ss * (1.0 - phi + corr * si / _mx(s * i, eps))
    esi = base * se * (1.0 - phi + corr * ei / _mx(e * i, eps))
    isi = base * si * (1.0 - phi + corr * ii / _mx(i * i, eps))
    return ssi, esi, isi


def pairwise_rhs_flat(double t, double[::1] y, double[::1] out,
                      double beta, double eta, double gamma,
                      double alpha, double omega, double n,
                      double eps=1e-12):
    cdef double s = y[0], e = y[1], i = y[2]
    cdef double ss = y[4], se = y[5], si = y[6], ee = y[7], ei = y[8], ii = y[9]
    cdef double k = y[10], k2k = y[11], phi = y[12]
    cdef double base, corr, ssi, esi, isi, aw

    base = (k2k / _mx(k * k, eps)) * (si / _mx(s, eps))
    corr = phi * n / _mx(k, eps)
    ssi = base * ss * (1.0 - phi + corr * si / _mx(s * i, eps))
    esi = base * se * (1.0 - phi + corr * ei / _mx(e * i, eps))
    isi = base * si * (1.0 - phi + corr * ii / _mx(i * i, eps))
    aw = alpha + omega

    out[0] = -beta * si
    out[1] = beta * si - eta * e
    out[2] = eta * e - gamma * i
    out[3] = gamma * i
    out[4] = -2.0 * beta * ssi + alpha * s * (s - 1.0) - aw * ss
    out[5] = beta * ssi - beta * esi - eta * se + alpha * s * e - aw * se
    out[6] = (eta * se - beta * si - beta * isi - gamma * si
              + alpha * s * i - aw * si)
    out[7] = 2.0 * beta * esi - 2.0 * eta * ee + alpha * e * (e - 1.0) - aw * ee
    out[8] = (beta * isi + beta * si + eta * ee - (gamma + eta) * ei
              + alpha * e * i - aw * ei)
    out[9] = 2.0 * eta * ei - 2.0 * gamma * ii + alpha * i * (i - 1.0) - aw * ii
    out[10] = alpha * (n - 1.0) - aw * k
    out[11] = 2.0 * alpha * (n - 2.0) * k - 2.0 * aw * k2k
    out[12] = 3.0 * alpha - (aw + 2.0 * alpha * (n - 2.0) * k / _mx(k2k, eps)) * phi
    return out
