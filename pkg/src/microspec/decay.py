"""Three-way classification of scale-ladder decay.

A ladder of integral magnitudes is classified as rapidly decaying
(regular), at most polynomially bounded (singular), or indeterminate.
Rapid decay is accepted on either of two witnesses: a log-log slope over
the finest half of the ladder, or all finest-half magnitudes falling
below an absolute floor tied to the coarse rungs (super-polynomial decay
reaches machine noise quickly, where slopes are meaningless).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import BadRange

REGULAR = "Regular"
SINGULAR = "Singular"
INDETERMINATE = "Indeterminate"

N_RAPID_DEFAULT = 4.0
N_SING_DEFAULT = 1.5
FLOOR_FACTOR = 1e-11
_TINY = 1e-300


@dataclass(frozen=True)
class DecayFit:
    lambdas: tuple
    magnitudes: tuple
    slope: float
    r2: float
    floor_hit: bool
    classification: str
    trivial_order: float = 0.0
    n_rapid: float = N_RAPID_DEFAULT
    n_sing: float = N_SING_DEFAULT
    suffix_slope: float = None
    suffix_floor_hit: bool = None
    stability_demoted: bool = False
    degenerate: bool = False


def _classify(slope, floor_hit, trivial_order, n_rapid, n_sing):
    if floor_hit:
        return REGULAR
    excess = slope - trivial_order
    if excess >= n_rapid:
        return REGULAR
    if excess <= n_sing:
        return SINGULAR
    return INDETERMINATE


def _slope_fit(lams, mags):
    """Least-squares slope of log|I| against log(lambda) over the finest half,
    with the floor decision relative to the coarsest half."""
    n = len(lams)
    fine = slice(n // 2, n)
    coarse = slice(0, n // 2)
    floor = FLOOR_FACTOR * max(float(np.max(mags[coarse])), _TINY)
    floor_hit = bool(np.all(mags[fine] < floor))
    x = np.log(lams[fine])
    y = np.log(np.maximum(mags[fine], _TINY))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - float(np.sum(resid**2)) / ss_tot)
    return float(slope), float(r2), floor_hit


def _resolve(fit):
    """Classification with the ladder-suffix stability guard: a
    regular/singular flip against the 2-rung-shortened ladder demotes the
    verdict to indeterminate."""
    cls = _classify(fit.slope, fit.floor_hit, fit.trivial_order, fit.n_rapid, fit.n_sing)
    demoted = False
    if fit.suffix_slope is not None:
        cls_suffix = _classify(
            fit.suffix_slope, fit.suffix_floor_hit, fit.trivial_order, fit.n_rapid, fit.n_sing
        )
        if {cls, cls_suffix} == {REGULAR, SINGULAR}:
            cls = INDETERMINATE
            demoted = True
    return replace(fit, classification=cls, stability_demoted=demoted)


def fit_decay(lambdas, magnitudes, trivial_order=0.0,
              n_rapid=N_RAPID_DEFAULT, n_sing=N_SING_DEFAULT):
    """Fit and classify one ladder of cap-maximal integral magnitudes."""
    lams = np.asarray(list(lambdas), dtype=float)
    mags = np.asarray(list(magnitudes), dtype=float)
    if lams.size < 6:
        raise BadRange("decay fit needs at least 6 ladder rungs")
    if lams.shape != mags.shape:
        raise BadRange("ladder and magnitudes disagree in length")
    if not np.all(np.isfinite(mags)):
        raise BadRange("magnitudes must be finite")
    order = np.argsort(-lams)  # coarsest (largest lambda) first
    lams, mags = lams[order], mags[order]

    if np.all(mags == 0.0):
        fit = DecayFit(tuple(lams), tuple(mags), math.inf, 1.0, True, REGULAR,
                       trivial_order, n_rapid, n_sing, degenerate=True)
        return _resolve(fit)

    slope, r2, floor_hit = _slope_fit(lams, mags)
    suffix_slope = suffix_floor = None
    if lams.size >= 8:
        if np.all(mags[2:] == 0.0):
            suffix_slope, suffix_floor = math.inf, True
        else:
            suffix_slope, _, suffix_floor = _slope_fit(lams[2:], mags[2:])
    fit = DecayFit(tuple(lams), tuple(mags), slope, r2, floor_hit, INDETERMINATE,
                   trivial_order, n_rapid, n_sing, suffix_slope, suffix_floor)
    return _resolve(fit)


def polynomial_prefactor_adjust(fit, trivial_order):
    """Reclassify with the classification thresholds shifted by a known
    trivial scale power (for example the support-volume factor of a scaled
    family); the fitted slope itself is unchanged."""
    if not math.isfinite(trivial_order):
        raise BadRange("trivial order must be finite")
    return _resolve(replace(fit, trivial_order=float(trivial_order)))
