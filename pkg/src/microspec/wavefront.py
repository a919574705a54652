"""Wavefront-set estimators and their consistency checks.

Three estimators classify each sampled phase-space point (x, xi) by the
decay of localized transforms over a scale ladder: the classical route
(window times plane wave paired directly), the scaling-family route
(windowed transform of the pairing profile, universally quantified over
a family suite), and the single-profile route sampling a grid of
scaling exponents.  Direction caps are sampled in ambient Fourier space
and every estimate is emitted conically closed: classifications are
computed at unit directions and carried to the sampled multiples of
each direction, which is exactly the scale-reindexing argument that
makes the underlying sets conic.
"""

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .decay import INDETERMINATE, REGULAR, SINGULAR, fit_decay
from .grids import (
    DirectionSet,
    LambdaLadder,
    Window,
    centered_grid,
    make_direction_set,
    make_ladder,
    scaled_family,
    standard_profiles,
    TabulatedFamily,
    box_around,
    bump_profile,
)
from .oscillatory import classical_local_ft, windowed_scaled_ft

CONIC_MULTIPLIERS = (0.5, 2.0)
DEFAULT_WINDOW_RADIUS = 0.4
DEFAULT_LADDER = (0.25, 2.0 ** -0.5, 16)
DEFAULT_P_GRID = (1.0, 1.5, 2.0, 3.0)
DEFAULT_P_GRID_2D = (1.0, 1.5)


def default_ladder(dim=1):
    # one octave shallower in the plane: the grid budget binds there
    lam_max, ratio, count = DEFAULT_LADDER
    return make_ladder(lam_max, ratio, count)


@dataclass(frozen=True)
class PhasePoint:
    x: tuple
    xi: tuple

    def __post_init__(self):
        if np.linalg.norm(self.xi) <= 0:
            raise ValueError("direction must be nonzero")

    @property
    def key(self):
        return (tuple(np.round(self.x, 12)), tuple(np.round(self.xi, 12)))


@dataclass
class WavefrontEstimate:
    estimator: str
    samples: list                  # (PhasePoint, DecayFit) pairs
    config: dict
    config_digest: str
    probes: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    def classification_at(self, x, xi):
        key = PhasePoint(tuple(np.atleast_1d(x)), tuple(np.atleast_1d(xi))).key
        for point, fit in self.samples:
            if point.key == key:
                return fit.classification
        raise KeyError(f"no sample at {key}")

    def items(self):
        return list(self.samples)

    def singular_points(self):
        return [p for p, f in self.samples if f.classification == SINGULAR]


def config_digest(cfg):
    text = repr(sorted(cfg.items()))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _window_at(x, radius):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    grid = centered_grid(x, 1.25 * radius, radius / 8.0)
    return Window(tuple(x), float(radius), grid)


def effective_excess(fit):
    if fit.degenerate or fit.floor_hit:
        return math.inf
    return fit.slope - fit.trivial_order


def combine_family_fits(fits):
    """Universal-quantifier verdict over a family suite: any singular
    witness wins; regularity needs every family regular."""
    classes = [f.classification for f in fits]
    binding = min(fits, key=effective_excess)
    if SINGULAR in classes:
        return binding, SINGULAR
    if all(c == REGULAR for c in classes):
        return binding, REGULAR
    return binding, INDETERMINATE


def default_lattice(u, points_per_axis=None, span=None):
    """Sample positions: the distribution's feature points plus a coarse
    grid around each."""
    dim = u.dim
    if points_per_axis is None:
        points_per_axis = 9 if dim == 1 else 3
    features = [np.atleast_1d(np.asarray(p, dtype=float)) for p in u.feature_points]
    if not features:
        features = [np.zeros(dim)]
    if span is None:
        span = 2.0 if dim == 1 else 0.5
    offsets = np.linspace(-span, span, points_per_axis)
    seen = {}
    for f in features:
        if dim == 1:
            for o in offsets:
                p = np.round(f + o, 12)
                seen[tuple(p)] = p
        else:
            for o1 in offsets:
                for o2 in offsets:
                    p = np.round(f + np.array([o1, o2]), 12)
                    seen[tuple(p)] = p
    return [seen[k] for k in sorted(seen)]


def default_directions(dim, cap_radius=0.1, cap_samples=5):
    return make_direction_set(dim, 2 if dim == 1 else 8, cap_radius, cap_samples)


def default_family_suite(anchor, ladder, dim=1, seed=0):
    """Three scaled bump profiles plus one seeded phase-modulated family."""
    fams = [scaled_family(p, anchor, 1.0, dim=dim) for p in standard_profiles()]
    fams.append(TabulatedFamily(bump_profile(), tuple(np.atleast_1d(anchor)),
                                box_around(1.25, dim), ladder, seed, dim))
    return fams


def _cap_targets(dirs, unit_dirs):
    """All cap sample points of all directions, with the slices indexing them."""
    blocks = []
    slices = []
    start = 0
    for xi in unit_dirs:
        pts = dirs.cap_points(xi)
        blocks.append(pts)
        slices.append(slice(start, start + pts.shape[0]))
        start += pts.shape[0]
    return np.concatenate(blocks, axis=0), slices


def _emit_conic(samples_out, x, xi, fit):
    pt = PhasePoint(tuple(np.atleast_1d(x)), tuple(np.atleast_1d(xi)))
    samples_out.append((pt, fit))
    for mu in CONIC_MULTIPLIERS:
        scaled = PhasePoint(pt.x, tuple(mu * np.asarray(pt.xi)))
        samples_out.append((scaled, fit))


def _isolation_flags(x, unit_dirs, verdicts):
    """Isolated singular directions flanked by two regular neighbours on
    both sides (no indeterminate buffer) are flagged, not fixed."""
    flags = []
    n = len(unit_dirs)
    if n < 5:
        return flags
    for i, v in enumerate(verdicts):
        if v != SINGULAR:
            continue
        neigh = [verdicts[(i + d) % n] for d in (-2, -1, 1, 2)]
        if all(c == REGULAR for c in neigh):
            flags.append((tuple(np.atleast_1d(x)), tuple(unit_dirs[i])))
    return flags


def _run_per_x(x_samples, worker, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(worker, range(len(x_samples))))
    else:
        results = [worker(i) for i in range(len(x_samples))]
    return results


def estimate_wf_classical(u, x_samples=None, dirs=None, ladder=None,
                          window_radius=DEFAULT_WINDOW_RADIUS, threads=1,
                          n_rapid=None, n_sing=None):
    """Classification from the decay of the window-localized transform."""
    x_samples = default_lattice(u) if x_samples is None else x_samples
    dirs = default_directions(u.dim) if dirs is None else dirs
    ladder = default_ladder(u.dim) if ladder is None else ladder
    unit_dirs = [np.asarray(d) for d in dirs.directions]
    thresholds = {}
    if n_rapid is not None:
        thresholds["n_rapid"] = n_rapid
    if n_sing is not None:
        thresholds["n_sing"] = n_sing

    def worker(ix):
        x = x_samples[ix]
        window = _window_at(x, window_radius)
        targets, slices = _cap_targets(dirs, unit_dirs)
        mags = np.empty((len(unit_dirs), len(ladder)))
        for jl, lam in enumerate(ladder):
            records = classical_local_ft(u, window, lam, targets)
            values = np.array([abs(r.value) for r in records])
            for jd, sl in enumerate(slices):
                mags[jd, jl] = values[sl].max()
        out = []
        flags_in = []
        verdicts = []
        for jd, xi in enumerate(unit_dirs):
            fit = fit_decay(ladder.values, mags[jd], trivial_order=0.0, **thresholds)
            verdicts.append(fit.classification)
            _emit_conic(out, x, xi, fit)
        flags_in.extend(_isolation_flags(x, unit_dirs, verdicts))
        return out, flags_in

    results = _run_per_x(x_samples, worker, threads)
    samples, flags = [], []
    for out, fl in results:
        samples.extend(out)
        flags.extend(fl)
    cfg = dict(estimator="classical", window_radius=window_radius,
               ladder=(ladder.lambda_max, ladder.ratio, ladder.count),
               dirs=len(unit_dirs), cap_radius=dirs.cap_radius,
               cap_samples=dirs.cap_samples, distribution=u.label, **thresholds)
    return WavefrontEstimate("classical", samples, cfg, config_digest(cfg),
                             flags=flags)


def _scaling_like_estimate(u, x_samples, dirs, ladder, suites, trivial_orders,
                           estimator, window_radius, threads, seed, extra_cfg,
                           thresholds):
    """Shared machinery of the family-quantified estimators.

    ``suites(x, seed)`` yields the per-anchor list of testing families;
    ``trivial_orders[j]`` is the prefactor order of suite entry j.
    """
    unit_dirs = [np.asarray(d) for d in dirs.directions]
    rng = np.random.default_rng(seed)
    probe_picks = set()
    n_probes = 16
    for _ in range(n_probes):
        probe_picks.add((int(rng.integers(0, 4)), int(rng.integers(0, len(ladder)))))

    def worker(ix):
        x = x_samples[ix]
        window = Window(tuple(np.atleast_1d(np.asarray(x, dtype=float))),
                        float(window_radius),
                        centered_grid(x, 1.25 * window_radius, window_radius / 8.0))
        fams = suites(x, seed + ix)
        targets, slices = _cap_targets(dirs, unit_dirs)
        per_family_fits = [[] for _ in unit_dirs]
        probes = []
        for jf, fam in enumerate(fams):
            mags = np.empty((len(unit_dirs), len(ladder)))
            for jl, lam in enumerate(ladder):
                want_probe = ix == 0 and (jf, jl) in probe_picks
                probe_targets = [int(rng.integers(0, targets.shape[0]))] if want_probe else ()
                records, pr = windowed_scaled_ft(u, window, fam, lam, targets,
                                                 probe_targets=probe_targets)
                probes.extend(pr)
                values = np.array([abs(r.value) for r in records])
                for jd, sl in enumerate(slices):
                    mags[jd, jl] = values[sl].max()
            for jd in range(len(unit_dirs)):
                fit = fit_decay(ladder.values, mags[jd],
                                trivial_order=trivial_orders[jf], **thresholds)
                per_family_fits[jd].append(fit)
        out = []
        verdicts = []
        for jd, xi in enumerate(unit_dirs):
            binding, verdict = combine_family_fits(per_family_fits[jd])
            fit = replace(binding, classification=verdict)
            verdicts.append(verdict)
            _emit_conic(out, x, xi, fit)
        return out, _isolation_flags(x, unit_dirs, verdicts), probes

    results = _run_per_x(x_samples, worker, threads)
    samples, flags, probes = [], [], []
    for out, fl, pr in results:
        samples.extend(out)
        flags.extend(fl)
        probes.extend(pr)
    cfg = dict(estimator=estimator, window_radius=window_radius,
               ladder=(ladder.lambda_max, ladder.ratio, ladder.count),
               dirs=len(unit_dirs), cap_radius=dirs.cap_radius,
               cap_samples=dirs.cap_samples, distribution=u.label, seed=seed,
               **extra_cfg, **thresholds)
    return WavefrontEstimate(estimator, samples, cfg, config_digest(cfg),
                             probes=probes, flags=flags)


def estimate_wf_scaling(u, x_samples=None, dirs=None, ladder=None,
                        family_suite=None, window_radius=DEFAULT_WINDOW_RADIUS,
                        threads=1, seed=0, n_rapid=None, n_sing=None):
    """Universally quantified scaling-family estimator: singular claims are
    witnessed; regular means no family witnessed singular behaviour."""
    x_samples = default_lattice(u) if x_samples is None else x_samples
    dirs = default_directions(u.dim) if dirs is None else dirs
    ladder = default_ladder(u.dim) if ladder is None else ladder
    thresholds = {}
    if n_rapid is not None:
        thresholds["n_rapid"] = n_rapid
    if n_sing is not None:
        thresholds["n_sing"] = n_sing

    if family_suite is None:
        def suites(x, s):
            return default_family_suite(x, ladder, dim=u.dim, seed=s)
        trivials = [1.0 * u.dim] * 4
    else:
        def suites(x, s):
            return family_suite(x, s)
        trivials = [f.trivial_order(u.dim) for f in family_suite(np.zeros(u.dim), seed)]

    return _scaling_like_estimate(u, x_samples, dirs, ladder, suites, trivials,
                                  "scaling", window_radius, threads, seed, {},
                                  thresholds)


def estimate_wf_singlefamily(u, x_samples=None, dirs=None, ladder=None,
                             profile=None, p_grid=None,
                             window_radius=DEFAULT_WINDOW_RADIUS, threads=1,
                             seed=0, n_rapid=None, n_sing=None):
    """One profile, a grid of scaling exponents; regular requires rapid
    decay at every exponent after removing the volume prefactor p*m."""
    x_samples = default_lattice(u) if x_samples is None else x_samples
    dirs = default_directions(u.dim) if dirs is None else dirs
    ladder = default_ladder(u.dim) if ladder is None else ladder
    if p_grid is None:
        p_grid = DEFAULT_P_GRID if u.dim == 1 else DEFAULT_P_GRID_2D
    base = (profile if profile is not None else bump_profile()).normalized()
    thresholds = {}
    if n_rapid is not None:
        thresholds["n_rapid"] = n_rapid
    if n_sing is not None:
        thresholds["n_sing"] = n_sing

    def suites(x, s):
        return [scaled_family(base, x, p, dim=u.dim) for p in p_grid]

    trivials = [p * u.dim for p in p_grid]
    return _scaling_like_estimate(u, x_samples, dirs, ladder, suites, trivials,
                                  "single-family", window_radius, threads, seed,
                                  {"p_grid": tuple(p_grid)}, thresholds)


ESTIMATORS = {
    "classical": estimate_wf_classical,
    "scaling": estimate_wf_scaling,
    "single-family": estimate_wf_singlefamily,
}


# ---------------------------------------------------------------------------
# window robustness (multiplied windows, shrunken caps)

@dataclass(frozen=True)
class MultipliedWindow:
    """phi * h for a smooth multiplier phi given in centered coordinates."""

    base: Window
    mult: object
    mult_d1: object
    mult_d2: object
    name: str = "mult"

    @property
    def center(self):
        return self.base.center

    @property
    def radius(self):
        return self.base.radius

    @property
    def dim(self):
        return self.base.dim

    def _rel(self, y):
        c = np.asarray(self.base.center)
        y = np.asarray(y, dtype=float)
        if self.dim == 1 and (y.ndim == 0 or y.shape[-1:] != (1,)):
            return y - c[0]
        return y - c

    def __call__(self, y):
        return self.mult(self._rel(y)) * self.base(y)

    def d1(self, y):
        r = self._rel(y)
        return self.mult_d1(r) * self.base(y) + self.mult(r) * self.base.d1(y)

    def d2(self, y):
        r = self._rel(y)
        return (self.mult_d2(r) * self.base(y) + 2.0 * self.mult_d1(r) * self.base.d1(y)
                + self.mult(r) * self.base.d2(y))


def _cos_multiplier(dim):
    if dim == 1:
        return ("1+cos/2",
                lambda r: 1.0 + 0.5 * np.cos(r),
                lambda r: -0.5 * np.sin(r),
                lambda r: -0.5 * np.cos(r))

    def f(r):
        r = np.asarray(r, dtype=float)
        return 1.0 + 0.5 * np.prod(np.cos(r), axis=-1)

    return ("1+cos/2", f, None, None)


def _quad_multiplier(dim):
    if dim == 1:
        return ("1+y^2/2",
                lambda r: 1.0 + 0.5 * r * r,
                lambda r: 1.0 * r,
                lambda r: 1.0 + 0.0 * r)

    def f(r):
        r = np.asarray(r, dtype=float)
        return 1.0 + 0.5 * np.sum(r * r, axis=-1)

    return ("1+|y|^2/2", f, None, None)


def default_multipliers(dim):
    return [_cos_multiplier(dim), _quad_multiplier(dim)]


@dataclass
class RobustnessReport:
    multiplier_names: list
    flips: list        # (x, xi, multiplier) regular -> singular
    warnings: list     # (x, xi, multiplier) regular -> indeterminate
    passed: bool


def window_robustness_check(u, estimate, multipliers=None, cap_shrink=0.6,
                            threads=1):
    """Re-run the estimate's classification with multiplied windows and a
    shrunken direction cap; regular verdicts must not flip to singular."""
    cfg = estimate.config
    dim = u.dim
    multipliers = default_multipliers(dim) if multipliers is None else multipliers
    x_samples = sorted({p.key[0] for p, _ in estimate.samples})
    lam_max, ratio, count = cfg["ladder"]
    ladder = make_ladder(lam_max, ratio, count)
    base_dirs = make_direction_set(dim, cfg["dirs"], cfg["cap_radius"],
                                   cfg["cap_samples"])
    shrunk = DirectionSet(dim, base_dirs.directions,
                          cfg["cap_radius"] * cap_shrink, cfg["cap_samples"])
    thresholds = {k: cfg[k] for k in ("n_rapid", "n_sing") if k in cfg}

    flips, warnings = [], []
    for name, fm, fd1, fd2 in multipliers:
        def wrap_window(x):
            base = _window_at(np.asarray(x), cfg["window_radius"])
            return MultipliedWindow(base, fm, fd1, fd2, name)

        if estimate.estimator == "classical":
            redone = _reclassify_classical(u, x_samples, shrunk, ladder,
                                           wrap_window, threads, thresholds)
        else:
            redone = _reclassify_scaling(u, estimate, x_samples, shrunk, ladder,
                                         wrap_window, threads, thresholds)
        for (pt, fit) in estimate.samples:
            before = fit.classification
            after = redone.get((pt.key[0], _unit_key(pt.xi)))
            if after is None or before != REGULAR:
                continue
            if after == SINGULAR:
                flips.append((pt.key[0], pt.key[1], name))
            elif after == INDETERMINATE:
                warnings.append((pt.key[0], pt.key[1], name))
    return RobustnessReport([m[0] for m in multipliers], flips, warnings,
                            passed=not flips)


def _unit_key(xi):
    v = np.asarray(xi, dtype=float)
    return tuple(np.round(v / np.linalg.norm(v), 12))


def _reclassify_classical(u, x_samples, dirs, ladder, wrap_window, threads,
                          thresholds):
    unit_dirs = [np.asarray(d) for d in dirs.directions]
    out = {}
    for x in x_samples:
        window = wrap_window(x)
        targets, slices = _cap_targets(dirs, unit_dirs)
        mags = np.empty((len(unit_dirs), len(ladder)))
        for jl, lam in enumerate(ladder):
            records = classical_local_ft(u, window, lam, targets)
            values = np.array([abs(r.value) for r in records])
            for jd, sl in enumerate(slices):
                mags[jd, jl] = values[sl].max()
        for jd, xi in enumerate(unit_dirs):
            fit = fit_decay(ladder.values, mags[jd], trivial_order=0.0,
                            **thresholds)
            out[(tuple(np.round(np.atleast_1d(x), 12)), _unit_key(xi))] = fit.classification
    return out


def _reclassify_scaling(u, estimate, x_samples, dirs, ladder, wrap_window,
                        threads, thresholds):
    cfg = estimate.config
    unit_dirs = [np.asarray(d) for d in dirs.directions]
    seed = cfg.get("seed", 0)
    out = {}
    for ix, x in enumerate(x_samples):
        window = wrap_window(x)
        if estimate.estimator == "single-family":
            base = bump_profile().normalized()
            fams = [scaled_family(base, np.asarray(x), p, dim=u.dim)
                    for p in cfg["p_grid"]]
            trivials = [p * u.dim for p in cfg["p_grid"]]
        else:
            fams = default_family_suite(np.asarray(x), ladder, dim=u.dim,
                                        seed=seed + ix)
            trivials = [1.0 * u.dim] * len(fams)
        targets, slices = _cap_targets(dirs, unit_dirs)
        per_dir = [[] for _ in unit_dirs]
        for jf, fam in enumerate(fams):
            mags = np.empty((len(unit_dirs), len(ladder)))
            for jl, lam in enumerate(ladder):
                records, _ = windowed_scaled_ft(u, window, fam, lam, targets)
                values = np.array([abs(r.value) for r in records])
                for jd, sl in enumerate(slices):
                    mags[jd, jl] = values[sl].max()
            for jd in range(len(unit_dirs)):
                per_dir[jd].append(fit_decay(ladder.values, mags[jd],
                                             trivial_order=trivials[jf],
                                             **thresholds))
        for jd, xi in enumerate(unit_dirs):
            _, verdict = combine_family_fits(per_dir[jd])
            out[(tuple(np.round(np.atleast_1d(x), 12)), _unit_key(xi))] = verdict
    return out


# ---------------------------------------------------------------------------
# cross-validation

@dataclass
class AgreementReport:
    total_common: int
    decided_common: int
    disagreements: list
    disagreement_rate: float
    agreement_rate: float

    @property
    def passed(self):
        return self.agreement_rate >= 0.95


def cross_validate(estimates):
    """Pointwise agreement matrix over the shared lattice, indeterminate
    verdicts excluded from the rate."""
    keyed = []
    for est in estimates:
        keyed.append({p.key: f.classification for p, f in est.samples})
    common = set(keyed[0])
    for k in keyed[1:]:
        common &= set(k)
    decided = 0
    disagreements = []
    for key in sorted(common):
        votes = [k[key] for k in keyed]
        concrete = [v for v in votes if v != INDETERMINATE]
        if len(concrete) < 2:
            continue
        decided += 1
        if len(set(concrete)) > 1:
            disagreements.append((key, tuple(votes)))
    rate = len(disagreements) / decided if decided else 0.0
    return AgreementReport(len(common), decided, disagreements, rate, 1.0 - rate)
