"""Numpy implementation of the sweep kernels.

Semantics must match ``_sweeps.pyx`` exactly; the compiled module is a
drop-in replacement selected at import time.
"""

import numpy as np


def pv_excision_sweep(values, poles, half_widths, lo, hi):
    """Symmetric-excision principal-value sums around many poles.

    For pole index p and half-width m the sum is

        E = sum_{k >= m} w_k * (v[p + k] - v[p - k]) / k,   w_m = 1/2, else 1,

    with values treated as zero outside index range [lo, hi].  Multiplied
    by nothing: the grid spacing cancels between the measure and 1/t.
    Returns an array of shape (len(poles), len(half_widths)).
    """
    v = np.asarray(values)
    poles = np.asarray(poles, dtype=np.int64)
    half_widths = np.asarray(half_widths, dtype=np.int64)
    n = v.shape[0]
    kmax = 0
    for p in poles:
        kmax = max(kmax, hi - p, p - lo)
    kmax = max(int(kmax), int(half_widths.max()) if half_widths.size else 1)

    pad_lo = max(0, kmax - int(poles.min()))
    pad_hi = max(0, int(poles.max()) + kmax - (n - 1))
    vz = np.zeros(n + pad_lo + pad_hi, dtype=np.complex128)
    vz[pad_lo : pad_lo + n] = v
    mask = np.zeros_like(vz, dtype=bool)
    mask[pad_lo + lo : pad_lo + hi + 1] = True
    vz = np.where(mask, vz, 0.0)
    pz = poles + pad_lo

    k = np.arange(1, kmax + 1)
    plus = vz[pz[:, None] + k[None, :]]
    minus = vz[pz[:, None] - k[None, :]]
    g = (plus - minus) / k[None, :]

    # suffix sums over k, then trapezoid boundary correction at k = m
    suffix = np.cumsum(g[:, ::-1], axis=1)[:, ::-1]
    out = np.empty((poles.shape[0], half_widths.shape[0]), dtype=np.complex128)
    for j, m in enumerate(half_widths):
        m = int(m)
        if m > kmax:
            out[:, j] = 0.0
        else:
            out[:, j] = suffix[:, m - 1] - 0.5 * g[:, m - 1]
    return out


def bv_epsilon_sweep(values, spacing, t0, poles_pos, eps, power, lo, hi):
    """Regularized boundary-value sums over many poles.

    out[i, l] = spacing * sum_k v[k] / ((t_k - c_i) - 1j * eps[l])**power
    with t_k = t0 + k * spacing and k restricted to [lo, hi].  ``eps``
    entries are signed: negative values sit on the other side of the
    real axis.
    """
    v = np.asarray(values)[lo : hi + 1].astype(np.complex128)
    t = t0 + spacing * np.arange(lo, hi + 1)
    c = np.asarray(poles_pos, dtype=float)
    eps = np.asarray(eps, dtype=float)
    out = np.empty((c.shape[0], eps.shape[0]), dtype=np.complex128)
    for l, e in enumerate(eps):
        denom = (t[None, :] - c[:, None]) - 1j * e
        if power == 1:
            frac = v[None, :] / denom
        else:
            frac = v[None, :] / denom**power
        out[:, l] = spacing * frac.sum(axis=1)
    return out
