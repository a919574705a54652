"""Grids, windows, scale ladders, direction sets and testing families.

Geometry layer shared by all estimators: uniform grids with bit-exact
reproducible coordinates, smooth compactly supported windows, geometric
scale ladders discretizing the small-scale limit, direction caps in
Fourier space, and the scale-parametrized families of localized test
functions used to probe a distribution near a point.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BadRange, RadiusTooSmall, SupportViolation
from .quadrature import panel_nodes


# ---------------------------------------------------------------------------
# smooth compactly supported profiles

def _bump_raw(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    sm = s[m]
    out[m] = np.exp(1.0 - 1.0 / (1.0 - sm * sm))
    return out


def _bump_d1(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    sm = s[m]
    q = 1.0 - sm * sm
    out[m] = np.exp(1.0 - 1.0 / q) * (-2.0 * sm / (q * q))
    return out


def _bump_d2(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    sm = s[m]
    q = 1.0 - sm * sm
    s2 = sm * sm
    out[m] = np.exp(1.0 - 1.0 / q) * (
        4.0 * s2 / q**4 - 2.0 / (q * q) - 8.0 * s2 / q**3
    )
    return out


@dataclass(frozen=True)
class Profile:
    """Smooth function of one real variable with compact support.

    ``fn`` and its derivatives accept and return numpy arrays; all vanish
    identically for |s| >= radius.
    """

    label: str
    fn: callable
    radius: float = 1.0
    d1: callable = None
    d2: callable = None

    @cached_property
    def sup_norm(self):
        s = np.linspace(-self.radius, self.radius, 20001)
        return float(np.max(np.abs(self.fn(s))))

    @cached_property
    def integral(self):
        nodes, weights = panel_nodes(-self.radius, self.radius, min_panels=64)
        return float(np.sum(weights * self.fn(nodes)))

    def normalized(self):
        """Rescaled so the integral (the zero-frequency transform) is 1."""
        c = self.integral
        if abs(c) < 1e-300:
            raise BadRange(f"profile {self.label!r} has vanishing integral")
        scale = 1.0 / c
        d1 = self.d1
        d2 = self.d2
        return Profile(
            label=self.label + "/norm",
            fn=lambda s, _f=self.fn: scale * _f(s),
            radius=self.radius,
            d1=None if d1 is None else (lambda s, _d=d1: scale * _d(s)),
            d2=None if d2 is None else (lambda s, _d=d2: scale * _d(s)),
        )


def bump_profile():
    return Profile("bump", _bump_raw, 1.0, _bump_d1, _bump_d2)


def _sharp(s):
    v = _bump_raw(s)
    return v * v


def _sharp_d1(s):
    return 2.0 * _bump_raw(s) * _bump_d1(s)


def _tilted(s):
    return _bump_raw(s) * (1.0 + 0.4 * np.sin(2.0 * np.asarray(s, float)))


def _tilted_d1(s):
    s = np.asarray(s, float)
    return _bump_d1(s) * (1.0 + 0.4 * np.sin(2.0 * s)) + _bump_raw(s) * 0.8 * np.cos(2.0 * s)


def standard_profiles():
    """The default profile suite: one even bump, one sharper even bump,
    one asymmetric bump."""
    return (
        bump_profile(),
        Profile("sharp", _sharp, 1.0, _sharp_d1),
        Profile("tilted", _tilted, 1.0, _tilted_d1),
    )


# ---------------------------------------------------------------------------
# grids

@dataclass(frozen=True)
class Grid:
    """Uniform tensor grid; coordinates are origin + index * spacing exactly."""

    origin: tuple
    spacing: tuple
    extent: tuple

    def __post_init__(self):
        object.__setattr__(self, "origin", tuple(float(v) for v in self.origin))
        object.__setattr__(self, "spacing", tuple(float(v) for v in self.spacing))
        object.__setattr__(self, "extent", tuple(int(v) for v in self.extent))
        if not (len(self.origin) == len(self.spacing) == len(self.extent)):
            raise BadRange("grid axis descriptors disagree in length")
        if any(s <= 0 for s in self.spacing):
            raise BadRange("grid spacing must be positive on every axis")
        if any(n < 8 for n in self.extent):
            raise BadRange("grid extent must be at least 8 points per axis")

    @property
    def dim(self):
        return len(self.extent)

    @property
    def size(self):
        return int(np.prod(self.extent))

    def axis(self, i):
        return self.origin[i] + self.spacing[i] * np.arange(self.extent[i])

    def axes(self):
        return [self.axis(i) for i in range(self.dim)]

    def coordinate(self, index):
        return tuple(self.origin[i] + self.spacing[i] * index[i] for i in range(self.dim))

    def points(self):
        """All grid points as an (size, dim) array (row-major order)."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


def grid_1d(lo, hi, n):
    return Grid((lo,), ((hi - lo) / (n - 1),), (n,))


def centered_grid(center, radius, spacing):
    """Grid of equal spacing per axis covering the ball of given radius."""
    center = np.atleast_1d(np.asarray(center, dtype=float))
    n = max(8, 2 * int(math.ceil(radius / spacing)) + 1)
    origin = tuple(c - spacing * (n // 2) for c in center)
    return Grid(origin, (spacing,) * len(center), (n,) * len(center))


# ---------------------------------------------------------------------------
# windows

@dataclass(frozen=True)
class Window:
    """Radial bump window: exactly 1 at its center, identically zero
    outside the ball of the given radius, smooth in between."""

    center: tuple
    radius: float
    grid: Grid

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    @property
    def dim(self):
        return len(self.center)

    def __call__(self, y):
        """Evaluate at points of shape (..., dim) (or (...,) when dim == 1)."""
        y = np.asarray(y, dtype=float)
        c = np.asarray(self.center)
        if self.dim == 1 and (y.ndim == 0 or y.shape[-1:] != (1,)):
            r = np.abs(y - c[0])
        else:
            r = np.linalg.norm(y - c, axis=-1)
        return _bump_raw(r / self.radius)

    def d1(self, y):
        """Radial-coordinate derivative; only meaningful for dim == 1."""
        y = np.asarray(y, dtype=float)
        return _bump_d1((y - self.center[0]) / self.radius) / self.radius

    def d2(self, y):
        y = np.asarray(y, dtype=float)
        return _bump_d2((y - self.center[0]) / self.radius) / self.radius**2

    @cached_property
    def values(self):
        pts = self.grid.points()
        if self.dim == 1:
            pts = pts[:, 0]
        return self(pts).reshape(self.grid.extent)


def make_bump(center, radius, grid):
    """Standard bump window centered on ``center`` with the given support
    radius, sampled on ``grid``."""
    center = np.atleast_1d(np.asarray(center, dtype=float))
    if radius <= 0:
        raise BadRange("window radius must be positive")
    max_sp = max(grid.spacing)
    if radius <= 2.0 * max_sp or 2.0 * radius / max_sp < 4.0:
        raise RadiusTooSmall(
            f"support radius {radius} resolved by fewer than 5 points per axis "
            f"(max spacing {max_sp})"
        )
    for i in range(grid.dim):
        lo = grid.origin[i]
        hi = grid.origin[i] + grid.spacing[i] * (grid.extent[i] - 1)
        if center[i] - radius < lo or center[i] + radius > hi:
            raise BadRange("window support ball extends outside the grid")
    return Window(tuple(center), float(radius), grid)


# ---------------------------------------------------------------------------
# scale ladders

@dataclass(frozen=True)
class LambdaLadder:
    """Geometric ladder lambda_j = lambda_max * ratio**j discretizing the
    small-scale limit; log-log fits over it are equispaced."""

    lambda_max: float
    ratio: float
    count: int

    @cached_property
    def values(self):
        return self.lambda_max * self.ratio ** np.arange(self.count)

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return self.count

    def finest_half(self):
        return self.values[self.count // 2 :]

    def reindexed(self, rho):
        """Ladder with every rung multiplied by rho (kept in range)."""
        return make_ladder(self.lambda_max * rho, self.ratio, self.count)


DEFAULT_LADDER = dict(lambda_max=0.25, ratio=2.0 ** -0.5, count=12)


def make_ladder(lambda_max, ratio, count):
    if not (0.0 < ratio < 1.0):
        raise BadRange(f"ratio must lie in (0, 1), got {ratio}")
    if not (0.0 < lambda_max < 1.0):
        raise BadRange(f"lambda_max must lie in (0, 1), got {lambda_max}")
    if count < 6:
        raise BadRange(f"ladder needs at least 6 rungs, got {count}")
    return LambdaLadder(float(lambda_max), float(ratio), int(count))


# ---------------------------------------------------------------------------
# direction sets

@dataclass(frozen=True)
class DirectionSet:
    """Unit directions with a ball-shaped sample cap around each.

    Cap points live in the ambient Fourier space (no renormalization), so
    conicity arguments survive sampling.
    """

    dim: int
    directions: tuple
    cap_radius: float
    cap_samples: int
    covering: bool = False

    def __post_init__(self):
        for d in self.directions:
            if abs(np.linalg.norm(d) - 1.0) > 1e-12:
                raise BadRange(f"direction {d} is not unit length")
        if self.cap_samples < 3:
            raise BadRange("need at least 3 cap samples")
        if self.covering and self.dim == 2:
            angles = sorted(math.atan2(d[1], d[0]) % (2 * math.pi) for d in self.directions)
            gaps = [b - a for a, b in zip(angles, angles[1:])]
            gaps.append(2 * math.pi - angles[-1] + angles[0])
            if any(math.sin(g / 2.0) > self.cap_radius for g in gaps):
                raise BadRange("caps do not cover the circle at this radius")

    def cap_points(self, xi):
        """The direction itself plus deterministic perturbations within the cap.

        Returns an array of shape (cap_samples, dim); the first row is xi.
        """
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        offsets = [np.zeros(self.dim)]
        if self.dim == 1:
            steps = [np.array([s]) for s in (-1.0, 1.0, -0.5, 0.5, -0.75, 0.75)]
        else:
            basis = np.eye(self.dim)
            steps = []
            for scale in (1.0, 0.5):
                for i in range(self.dim):
                    steps.append(scale * basis[i])
                    steps.append(-scale * basis[i])
        for s in steps:
            if len(offsets) >= self.cap_samples:
                break
            offsets.append(self.cap_radius * s)
        return xi[None, :] + np.stack(offsets)


def make_direction_set(dim, n_directions=8, cap_radius=0.1, cap_samples=5, covering=False):
    """Equi-angular unit directions on the sphere (dim 1: exactly {+1, -1})."""
    if n_directions < 2:
        raise BadRange("need at least 2 directions")
    if dim == 1:
        dirs = ((1.0,), (-1.0,))
    elif dim == 2:
        angles = 2.0 * math.pi * np.arange(n_directions) / n_directions
        dirs = tuple((math.cos(a), math.sin(a)) for a in angles)
    else:
        raise BadRange("equi-angular construction covers dim 1 and 2 only")
    return DirectionSet(dim, dirs, float(cap_radius), int(cap_samples), covering)


def direction_set_from_vectors(vectors, cap_radius=0.1, cap_samples=5):
    """Direction set over explicitly given vectors (normalized here)."""
    dirs = []
    dim = None
    for v in vectors:
        v = np.asarray(v, dtype=float)
        dim = v.size if dim is None else dim
        n = np.linalg.norm(v)
        if n == 0:
            raise BadRange("zero vector cannot be a direction")
        dirs.append(tuple(v / n))
    return DirectionSet(dim, tuple(dirs), float(cap_radius), int(cap_samples))


# ---------------------------------------------------------------------------
# sampled test functions

@dataclass(frozen=True)
class SampledFunction:
    """Test function sampled on a grid, optionally with an exact evaluator.

    ``bandwidth`` bounds the angular-frequency content and is checked by
    pairing routines against the Nyquist limit of ``grid``.
    """

    grid: Grid
    values: np.ndarray
    center: tuple
    support_radius: float
    bandwidth: float
    sup_norm: float
    fn: callable = None
    d1: callable = None

    @property
    def dim(self):
        return self.grid.dim

    def __call__(self, t):
        if self.fn is not None:
            return self.fn(t)
        t = np.asarray(t, dtype=float)
        if self.dim != 1:
            raise NotImplementedError("interpolation only implemented in 1d")
        return np.interp(t, self.grid.axis(0), np.real(self.values), left=0.0, right=0.0) + (
            1j * np.interp(t, self.grid.axis(0), np.imag(self.values), left=0.0, right=0.0)
            if np.iscomplexobj(self.values)
            else 0.0
        )


def sampled_from_callable(fn, center, support_radius, samples_per_width=48,
                          bandwidth=None, d1=None, dim=1, margin=1.25):
    center = np.atleast_1d(np.asarray(center, dtype=float))
    spacing = 2.0 * support_radius / samples_per_width
    grid = centered_grid(center, margin * support_radius, spacing)
    if dim == 1:
        vals = fn(grid.axis(0))
    else:
        vals = fn(grid.points()).reshape(grid.extent)
    if bandwidth is None:
        bandwidth = 0.5 * math.pi / spacing
    sup = float(np.max(np.abs(vals))) if np.size(vals) else 0.0
    return SampledFunction(grid, vals, tuple(center), float(support_radius),
                           float(bandwidth), sup, fn=fn, d1=d1)


# ---------------------------------------------------------------------------
# testing families

@dataclass(frozen=True)
class Box:
    """Bounded open box around the origin: the support region of a family."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(float(v) for v in self.lower))
        object.__setattr__(self, "upper", tuple(float(v) for v in self.upper))
        if any(u <= l for l, u in zip(self.lower, self.upper)):
            raise BadRange("box must have positive extent on every axis")

    @property
    def dim(self):
        return len(self.lower)

    @property
    def volume(self):
        return float(np.prod([u - l for l, u in zip(self.lower, self.upper)]))

    def contains_ball(self, radius, center=None):
        c = np.zeros(self.dim) if center is None else np.asarray(center, float)
        return all(
            c[i] - radius > self.lower[i] and c[i] + radius < self.upper[i]
            for i in range(self.dim)
        )

    def sample_outside(self, anchor, scale, rng, n):
        """Points outside scale * box + anchor (within 3x its size)."""
        anchor = np.atleast_1d(np.asarray(anchor, float))
        lo = anchor + scale * np.asarray(self.lower)
        hi = anchor + scale * np.asarray(self.upper)
        span = hi - lo
        out = []
        while len(out) < n:
            p = lo - span + rng.random(self.dim) * 3.0 * span
            if np.any(p <= lo) or np.any(p >= hi):
                out.append(p)
        return np.asarray(out)


def box_around(radius, dim=1):
    return Box((-radius,) * dim, (radius,) * dim)


def _radial_eval(profile, x, anchor, scale, dim):
    x = np.asarray(x, dtype=float)
    if dim == 1:
        arg = (x - anchor[0]) / scale
        return profile.fn(arg)
    r = np.linalg.norm(x - anchor, axis=-1)
    return profile.fn(r / scale)


@dataclass(frozen=True)
class ScaledProfileFamily:
    """Family whose member at scale lam is g(lam**-p (x - anchor)).

    Support of the member is contained in lam**p * (supp g) + anchor, and
    hence in lam * O + anchor whenever p >= 1 and lam <= 1.
    """

    profile: Profile
    anchor: tuple
    exponent: float
    region: Box
    dim: int = 1

    kind = "scaled"

    def __post_init__(self):
        object.__setattr__(self, "anchor", tuple(float(a) for a in np.atleast_1d(self.anchor)))
        if self.exponent < 1.0:
            raise BadRange("scaling exponent must be at least 1")
        if not self.region.contains_ball(self.profile.radius):
            raise SupportViolation(
                f"profile support radius {self.profile.radius} not inside region"
            )

    @property
    def sup_bound(self):
        return self.profile.sup_norm

    def trivial_order(self, dim=None):
        """Scale power carried by the member's support volume alone."""
        return self.exponent * (dim if dim is not None else self.dim)

    def member_scale(self, lam):
        return lam ** self.exponent

    def member_fn(self, lam):
        scale = self.member_scale(lam)
        anchor = np.asarray(self.anchor)
        prof = self.profile
        dim = self.dim

        def fn(x):
            return _radial_eval(prof, x, anchor, scale, dim)

        return fn

    def member_d1(self, lam):
        if self.profile.d1 is None or self.dim != 1:
            return None
        scale = self.member_scale(lam)
        x0 = self.anchor[0]
        d1 = self.profile.d1

        def fn(x):
            return d1((np.asarray(x, float) - x0) / scale) / scale

        return fn

    def member(self, lam, samples_per_width=48):
        scale = self.member_scale(lam)
        width = scale * self.profile.radius
        return sampled_from_callable(
            self.member_fn(lam),
            self.anchor,
            width,
            samples_per_width=samples_per_width,
            bandwidth=8.0 * math.pi / width,
            d1=self.member_d1(lam),
            dim=self.dim,
        )


@dataclass(frozen=True)
class TabulatedFamily:
    """Per-scale tabulated members: a bump modulated by a seeded random
    smooth phase, different at every rung.  Support and sup-norm follow
    the underlying bump, so membership in the testing class is preserved."""

    profile: Profile
    anchor: tuple
    region: Box
    ladder: LambdaLadder
    seed: int
    dim: int = 1

    kind = "tabulated"

    def __post_init__(self):
        object.__setattr__(self, "anchor", tuple(float(a) for a in np.atleast_1d(self.anchor)))
        if not self.region.contains_ball(self.profile.radius):
            raise SupportViolation("profile support not inside region")

    @cached_property
    def _phase_coeffs(self):
        rng = np.random.default_rng(self.seed)
        return rng.uniform(0.0, 0.7, (len(self.ladder), 3)), rng.uniform(
            0.0, 2.0 * math.pi, (len(self.ladder), 3)
        )

    @property
    def sup_bound(self):
        return self.profile.sup_norm

    def trivial_order(self, dim=None):
        # support-volume factor of any member supported in lam * O
        return float(dim if dim is not None else self.dim)

    def member_scale(self, lam):
        return lam

    def _rung(self, lam):
        vals = self.ladder.values
        j = int(np.argmin(np.abs(vals - lam)))
        if abs(vals[j] - lam) > 1e-9 * lam:
            raise BadRange(f"tabulated family has no member at scale {lam}")
        return j

    def member_fn(self, lam):
        j = self._rung(lam)
        amps, phases = self._phase_coeffs
        a, ph = amps[j], phases[j]
        anchor = np.asarray(self.anchor)
        prof = self.profile
        dim = self.dim
        radius = prof.radius

        def fn(x):
            x = np.asarray(x, dtype=float)
            if dim == 1:
                s = (x - anchor[0]) / lam
            else:
                s = np.linalg.norm(x - anchor, axis=-1) / lam
            theta = sum(
                a[r] * np.sin((r + 1) * math.pi * s / radius + ph[r]) for r in range(3)
            )
            base = prof.fn(s)
            return base * np.exp(1j * theta)

        return fn

    def member_d1(self, lam):
        return None

    def member(self, lam, samples_per_width=48):
        width = lam * self.profile.radius
        return sampled_from_callable(
            self.member_fn(lam), self.anchor, width,
            samples_per_width=samples_per_width,
            bandwidth=12.0 * math.pi / width, dim=self.dim,
        )


def scaled_family(profile, anchor, exponent=1.0, region=None, dim=None):
    """Family of test functions g(lam**-p (x - anchor)) supported in lam*O."""
    anchor = np.atleast_1d(np.asarray(anchor, dtype=float))
    dim = dim if dim is not None else anchor.size
    if region is None:
        region = box_around(1.25 * profile.radius, dim)
    return ScaledProfileFamily(profile, tuple(anchor), float(exponent), region, dim)


def verify_scaling_bound(family, ladder, k_vectors):
    """Margin of the volume bound |f_lam^(lam^-1 k)| <= vol(O) * sup * lam^m.

    Returns the largest ratio of transform magnitude to bound over the
    ladder and the given k's (must be <= 1 for families with p == 1).
    """
    c = family.region.volume * family.sup_bound
    dim = family.dim
    worst = 0.0
    for lam in ladder:
        member = family.member(lam, samples_per_width=64)
        pts = member.grid.points() if dim > 1 else member.grid.axis(0)
        vals = member.values.ravel()
        vol_el = float(np.prod(member.grid.spacing))
        for k in np.atleast_2d(np.asarray(k_vectors, dtype=float)):
            omega = k / lam
            phase = pts @ omega if dim > 1 else pts * omega[0]
            ft = vol_el * np.sum(vals * np.exp(-1j * phase))
            bound = c * lam ** dim
            worst = max(worst, abs(ft) / bound)
    return worst
