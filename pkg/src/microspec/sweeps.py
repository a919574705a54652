"""Batched singular pairings along uniform pole ladders.

Every estimator needs ``<u, tau_y f>`` for all y on a sampling grid.  For
principal values and boundary values that is one singular integral per
grid point, with the pole walking along a uniform ladder.  Poles near
the test function's support go through the excision/epsilon kernels on a
pole-aligned fine lattice; far poles see a smooth integrand and use
plain quadrature on the member's own samples.
"""

import math

import numpy as np

from ._kernels import bv_epsilon_sweep, pv_excision_sweep
from .errors import ExtrapolationDiverged
from .quadrature import neville_at_zero, panel_nodes

# samples across the member's support diameter
SWEEP_SAMPLES = 512
PAIR_SAMPLES = 4096
# excision half-widths in lattice steps, coarsest first (Richardson order 3)
EXCISION_STEPS = (16, 12, 8, 4)
NEAR_FACTOR = 4.0


def _uniform_spacing(poles):
    if poles.size < 2:
        return None
    d = np.diff(np.sort(poles))
    if d[0] <= 0 or np.max(np.abs(d - d[0])) > 1e-9 * d[0]:
        return None
    return float(d[0])


def _near_lattice(fn, poles_near, center, radius, target):
    """Fine lattice with every near pole exactly on it.

    Poles must be a single point or a uniform ladder; the lattice step
    divides the ladder spacing so every pole lands on a lattice node,
    which the symmetric excision sums require.
    """
    spacing = _uniform_spacing(poles_near)
    pmin = float(poles_near.min())
    if spacing is None:
        if poles_near.size > 1:
            raise ValueError("near poles must form a uniform ladder")
        step = target
    elif spacing <= target:
        step = spacing
    else:
        step = spacing / int(np.ceil(spacing / target))
    lo = min(pmin, center - radius) - 1.5 * radius
    hi = max(float(poles_near.max()), center + radius) + 1.5 * radius
    n_lo = int(np.floor((pmin - lo) / step)) + 1
    n_hi = int(np.floor((hi - pmin) / step)) + 2
    t0 = pmin - n_lo * step
    n = n_lo + n_hi + 1
    t = t0 + step * np.arange(n)
    idx = n_lo + np.round((poles_near - pmin) / step).astype(np.int64)
    values = np.asarray(fn(t), dtype=np.complex128)
    return t, values, idx, step


def _support_window(t, center, radius):
    lo = int(np.searchsorted(t, center - radius) - 1)
    hi = int(np.searchsorted(t, center + radius) + 1)
    return max(lo, 0), min(hi, t.size - 1)


def pv_pair_oscillatory(fn, center, radius, pole, omega):
    """Principal value of an oscillating integrand around one pole.

    Uses the symmetric-difference form, whose integrand is smooth through
    the excised point, on oscillation-sized GL panels; the excision limit
    is exact rather than extrapolated.
    """
    reach = 1.02 * radius + abs(pole - center)
    nodes, weights = panel_nodes(0.0, reach, omega=omega, min_panels=64)
    g = (np.asarray(fn(pole + nodes)) - np.asarray(fn(pole - nodes))) / nodes
    scale = float(np.max(np.abs(g), initial=0.0))
    return complex(np.sum(weights * g)), 1e-12 * scale * reach


def pv_sweep(fn, center, radius, poles, samples=SWEEP_SAMPLES, osc_rate=0.0):
    """Principal values PV int f(s)/(s - c) ds for a ladder of poles c.

    Near poles: symmetric excision around the pole at half-widths tied to
    the lattice step, Richardson-extrapolated to zero excision.  Far
    poles: the integrand is smooth; plain quadrature on the member's own
    samples.  Fast-oscillating integrands switch to per-pole GL panels
    which the excision lattice cannot resolve.  Returns (values, err).
    """
    poles = np.atleast_1d(np.asarray(poles, dtype=float))
    out = np.zeros(poles.shape, dtype=np.complex128)
    near = np.abs(poles - center) <= NEAR_FACTOR * radius
    err = 0.0

    if osc_rate * (2.0 * radius / samples) > 0.02:
        for i, c in enumerate(poles):
            if near[i]:
                out[i], e = pv_pair_oscillatory(fn, center, radius, c, osc_rate)
                err = max(err, e)
        if np.any(~near):
            far = poles[~near]
            nodes, weights = panel_nodes(center - 1.02 * radius, center + 1.02 * radius,
                                         omega=osc_rate, min_panels=32)
            fv = np.asarray(fn(nodes), dtype=np.complex128)
            denom = nodes[None, :] - far[:, None]
            out[~near] = (fv[None, :] * weights[None, :] / denom).sum(axis=1)
            err = max(err, 1e-13 * float(np.max(np.abs(fv), initial=0.0)))
        return out, err

    if np.any(near):
        pn = poles[near]
        if pn.size > 1 and _uniform_spacing(pn) is None:
            # arbitrary pole sets: one lattice per pole
            vals = np.empty(pn.shape, dtype=np.complex128)
            for i, c in enumerate(pn):
                v1, e1 = pv_sweep(fn, center, radius, np.array([c]), samples)
                vals[i] = v1[0]
                err = max(err, e1)
            out[near] = vals
        else:
            target = 2.0 * radius / samples
            t, v, idx, step = _near_lattice(fn, pn, center, radius, target)
            lo, hi = _support_window(t, center, radius)
            hw = np.asarray(EXCISION_STEPS, dtype=np.int64)
            table = pv_excision_sweep(v, idx, hw, lo, hi)
            etas = hw * step
            vals = np.empty(table.shape[0], dtype=np.complex128)
            corr = 0.0
            for i in range(table.shape[0]):
                vals[i], c = neville_at_zero(etas, table[i])
                corr = max(corr, c)
            out[near] = vals
            scale = float(np.max(np.abs(v))) if v.size else 0.0
            err = max(err, corr + scale * (2.0 / samples) ** 2)

    if np.any(~near):
        far = poles[~near]
        nodes, weights = panel_nodes(center - radius, center + radius,
                                     min_panels=max(8, samples // 16))
        fv = np.asarray(fn(nodes), dtype=np.complex128)
        denom = nodes[None, :] - far[:, None]
        out[~near] = (fv[None, :] * weights[None, :] / denom).sum(axis=1)
        err = max(err, 1e-13 * float(np.max(np.abs(fv))) if fv.size else 0.0)

    return out, err


def bv_spectral_near(fn, center, radius, poles, sign, power=1, band_factor=400.0):
    """Boundary values through the one-sided spectral representation.

    For u(s) = 1/(s + sign*i0)**a the pairing G(c) = int f(s) u(s - c) ds
    involves only one frequency half-line of f, so the delicate
    cancellation between the principal value and the half-residue (which
    any grid quadrature realizes only to its own relative accuracy) is
    built in exactly:

        sign = -1:  G(c) = i/(a-1)! int_0^inf (i w)^(a-1) fhat(w) e^{i w c} dw

    with the mirrored formula for sign = +1.  The frequency integral is
    cut where the transform of the smooth compactly supported f is below
    rounding.
    """
    poles = np.atleast_1d(np.asarray(poles, dtype=float))
    sigma_max = band_factor / radius
    span = float(np.max(np.abs(poles - center), initial=0.0)) + 1.05 * radius
    s_nodes, s_weights = panel_nodes(0.0, sigma_max, omega=span, min_panels=64)
    f_nodes, f_weights = panel_nodes(center - 1.05 * radius, center + 1.05 * radius,
                                     omega=sigma_max, min_panels=32)
    fv = np.asarray(fn(f_nodes), dtype=np.complex128) * f_weights
    if sign == -1:
        fhat = np.exp(-1j * np.outer(s_nodes, f_nodes)) @ fv
        kernel = (1j * s_nodes) ** (power - 1) * fhat * s_weights
        vals = (1j / math.factorial(power - 1)) * (
            np.exp(1j * np.outer(poles, s_nodes)) @ kernel)
    else:
        fhat = np.exp(1j * np.outer(s_nodes, f_nodes)) @ fv
        kernel = (-1j * s_nodes) ** (power - 1) * fhat * s_weights
        vals = (-1j / math.factorial(power - 1)) * (
            np.exp(-1j * np.outer(poles, s_nodes)) @ kernel)
    scale = max(float(np.max(np.abs(vals), initial=0.0)),
                float(np.max(np.abs(fv), initial=0.0)))
    return vals, 1e-12 * scale


def bv_power_sweep(fn, center, radius, poles, sign, power,
                   samples=SWEEP_SAMPLES, rel_tol=1e-3, osc_rate=0.0):
    """Boundary values of 1/((s - c) + sign*i0)**power along a pole ladder.

    Poles inside the support zone go through the one-sided spectral
    representation; far poles see a smooth integrand and use plain panel
    quadrature.
    """
    poles = np.atleast_1d(np.asarray(poles, dtype=float))
    out = np.zeros(poles.shape, dtype=np.complex128)
    near = np.abs(poles - center) <= NEAR_FACTOR * radius
    err = 0.0
    if np.any(near):
        vals, e = bv_spectral_near(fn, center, radius, poles[near], sign, power)
        out[near] = vals
        err = max(err, e)
    if np.any(~near):
        far = poles[~near]
        nodes, weights = panel_nodes(center - 1.02 * radius, center + 1.02 * radius,
                                     omega=osc_rate,
                                     min_panels=max(8, samples // 16))
        fv = np.asarray(fn(nodes), dtype=np.complex128)
        denom = nodes[None, :] - far[:, None]
        out[~near] = (fv[None, :] * weights[None, :] / denom**power).sum(axis=1)
        err = max(err, 1e-13 * float(np.max(np.abs(fv))) if fv.size else 0.0)
    return out, err


def pv_pair(fn, center, radius, pole):
    """Single principal-value pairing at full pairing resolution."""
    vals, err = pv_sweep(fn, center, radius, np.array([pole]), samples=PAIR_SAMPLES)
    return complex(vals[0]), err


def bv_epsilon_pair(fn, center, radius, pole, sign, power=1, omega=0.0,
                    eps_ladder=(1e-2, 3.16e-3, 1e-3, 3.16e-4, 1e-4), rel_tol=1e-3):
    """Epsilon-extrapolated boundary-value pairing via refined panels.

    Independent of the excision path: integrates f(s)/((s-c) + sign*i*eps)**power
    on panels geometrically refined toward the pole, then extrapolates the
    epsilon ladder to zero.
    """
    a, b = center - radius, center + radius
    vals = []
    for eps in eps_ladder:
        edges = {a, b}
        d = b - a
        while d > eps / 2.0:
            for side in (pole - d, pole + d):
                if a < side < b:
                    edges.add(side)
            d /= 2.0
        if omega:
            n_osc = int(np.ceil(abs(omega) * (b - a) / (1.5 * np.pi)))
            edges.update(np.linspace(a, b, n_osc + 1))
        edges = np.array(sorted(edges))
        total = 0.0 + 0.0j
        for lo, hi in zip(edges[:-1], edges[1:]):
            nodes, weights = panel_nodes(lo, hi, min_panels=1)
            fv = np.asarray(fn(nodes), dtype=np.complex128)
            denom = (nodes - pole) + sign * 1j * eps
            total += np.sum(weights * fv / denom**power)
        vals.append(total)
    limit, corr = neville_at_zero(np.asarray(eps_ladder), vals)
    rel = abs(vals[-1] - vals[-2]) / max(abs(vals[-1]), 1e-300)
    if rel > rel_tol:
        raise ExtrapolationDiverged(
            f"epsilon ladder relative change {rel:.2e} at finest epsilon"
        )
    return complex(limit), corr
