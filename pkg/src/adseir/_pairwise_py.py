"""Pure-python pairwise RHS kernel.

Fallback twin of the compiled kernel in _pairwise_kernel.pyx; the two must
stay expression-for-expression identical so results do not depend on which
backend is active.

State layout: [S, E, I, R, SS, SE, SI, EE, EI, II, <k>, <k^2-k>, phi].
"""

EPS = 1e-12


def closure_flat(y, n, eps=EPS):
    """Regularized triple-closure values (SSI, ESI, ISI) from a flat state."""
    s = y[0]
    e = y[1]
    i = y[2]
    ss = y[4]
    se = y[5]
    si = y[6]
    ei = y[8]
    ii = y[9]
    k = y[10]
    k2k = y[11]
    phi = y[12]

    base = (k2k / max(k * k, eps)) * (si / max(s, eps))
    corr = phi * n / max(k, eps)
    ssi = base * ss * (1.0 - phi + corr * si / max(s * i, eps))
    esi = base * se * (1.0 - phi + corr * ei / max(e * i, eps))
    isi = base * si * (1.0 - phi + corr * ii / max(i * i, eps))
    return ssi, esi, isi


def pairwise_rhs_flat(t, y, out, beta, eta, gamma, alpha, omega, n, eps=EPS):
    """Full adaptive pairwise SEIR derivative, written into out (len 13)."""
    s = y[0]
    e = y[1]
    i = y[2]
    ss = y[4]
    se = y[5]
    si = y[6]
    ee = y[7]
    ei = y[8]
    ii = y[9]
    k = y[10]
    k2k = y[11]
    phi = y[12]

    ssi, esi, isi = closure_flat(y, n, eps)
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
    out[12] = 3.0 * alpha - (aw + 2.0 * alpha * (n - 2.0) * k / max(k2k, eps)) * phi
    return out
