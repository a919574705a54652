"""Two-point functionals given by translation-invariant kernels.

A pair functional acts on test-function pairs through a kernel of the
difference of the two slot variables,

    phi_2(f1 (x) f2) = integral w(t1 - t2) f1(t1) f2(t2) dt1 dt2.

Everything the estimators need reduces to one-dimensional pairings of w:
against the cross-correlation of the two slot functions (smeared-family
evaluation), against the difference-coordinate projection of a plane
test function (the kernel viewed as a distribution on the product
space), and for the two-dimensional light-ray kernel one more projection
onto the null coordinate collapses the plane case to the line case.
"""

import math

import numpy as np

from .distributions import Distribution, PairingResult
from .errors import UnresolvedOscillation
from .grids import bump_profile
from .quadrature import panel_nodes
from .sweeps import bv_power_sweep, pv_sweep


def _callable_of(member):
    return member.fn if getattr(member, "fn", None) is not None else member


def _correlation_1d(f1, f2):
    """m(s) = integral f1(s + t) f2(t) dt as a vectorized callable, with
    support metadata.  This is the pairing profile of the functional under
    simultaneous translation of both slots."""
    c1, r1 = f1.center[0], f1.support_radius
    c2, r2 = f2.center[0], f2.support_radius
    nodes, weights = panel_nodes(c2 - 1.05 * r2, c2 + 1.05 * r2, min_panels=48)
    g1 = _callable_of(f1)
    fv2 = weights * np.asarray(_callable_of(f2)(nodes))

    def m(s):
        s = np.asarray(s, dtype=float)
        flat = s.reshape(-1)
        vals = np.asarray(g1(flat[:, None] + nodes[None, :])) @ fv2
        return vals.reshape(s.shape)

    center = c1 - c2
    radius = 1.02 * (r1 + r2)
    return m, center, radius


def _interp_callable(xgrid, values):
    re = np.real(values)
    im = np.imag(values)
    is_cplx = np.iscomplexobj(values)

    def fn(s):
        s = np.asarray(s, dtype=float)
        out = np.interp(s, xgrid, re, left=0.0, right=0.0)
        if is_cplx:
            out = out + 1j * np.interp(s, xgrid, im, left=0.0, right=0.0)
        return out

    return fn


def _projection_diff_2d(member):
    """Projection of a plane test function onto the difference coordinate:
    P(alpha) = integral f over the line t1 - t2 = alpha, in the rotated
    parametrization with the 1/2 Jacobian folded in by the caller."""
    c = np.asarray(member.center)
    r = member.support_radius
    fn = _callable_of(member)
    alpha_c = float(c[0] - c[1])
    beta_c = float(c[0] + c[1])
    reach = 1.05 * r * math.sqrt(2.0)
    agrid = np.linspace(alpha_c - reach, alpha_c + reach, 1601)
    nodes, weights = panel_nodes(beta_c - reach, beta_c + reach, min_panels=48)
    t1 = 0.5 * (agrid[:, None] + nodes[None, :])
    t2 = 0.5 * (nodes[None, :] - agrid[:, None])
    pts = np.stack([t1, t2], axis=-1)
    vals = np.asarray(fn(pts.reshape(-1, 2))).reshape(t1.shape) @ weights
    return _interp_callable(agrid, vals), alpha_c, reach, float(np.max(np.abs(vals)))


class DifferenceKernel:
    """Kernel of the difference variable; knows how to pair itself with a
    compactly supported profile along a uniform ladder of translates."""

    label = "?"
    hermitean = False
    smooth = False
    d = 1

    def pair_profile(self, fn, center, radius, offsets, osc_rate=0.0):
        """H(rho) = integral w(a) fn(a - rho) da for each offset rho."""
        raise NotImplementedError


class ConstantKernel(DifferenceKernel):
    smooth = True

    def __init__(self, value=1.0):
        self.value = complex(value)
        self.hermitean = abs(self.value.imag) == 0.0
        self.label = f"const:{value:g}" if self.value.imag == 0 else f"const:{value}"

    def pair_profile(self, fn, center, radius, offsets, osc_rate=0.0):
        nodes, weights = panel_nodes(center - radius, center + radius,
                                     omega=osc_rate, min_panels=32)
        total = self.value * np.sum(weights * np.asarray(fn(nodes)))
        out = np.full(np.atleast_1d(offsets).shape, total, dtype=np.complex128)
        return out, 1e-13 * abs(total)


class DeltaKernel(DifferenceKernel):
    hermitean = True
    label = "delta"

    def __init__(self, scale=1.0):
        self.scale = complex(scale)

    def pair_profile(self, fn, center, radius, offsets, osc_rate=0.0):
        rho = np.atleast_1d(np.asarray(offsets, dtype=float))
        return self.scale * np.asarray(fn(-rho), dtype=np.complex128), 0.0


class SmoothKernel(DifferenceKernel):
    smooth = True

    def __init__(self, profile=None, width=0.5):
        self.profile = profile if profile is not None else bump_profile()
        self.width = float(width)
        self.hermitean = True  # real even profile
        self.label = f"smooth:{self.profile.label}:{width:g}"

    def pair_profile(self, fn, center, radius, offsets, osc_rate=0.0):
        rho = np.atleast_1d(np.asarray(offsets, dtype=float))
        nodes, weights = panel_nodes(-self.width, self.width,
                                     omega=osc_rate, min_panels=32)
        wv = weights * self.profile.fn(nodes / self.width)
        args = nodes[None, :] - rho[:, None]
        vals = np.asarray(fn(args.reshape(-1))).reshape(args.shape) @ wv
        return vals.astype(np.complex128), 1e-13 * float(np.max(np.abs(vals), initial=0.0))


class BoundaryKernel(DifferenceKernel):
    """w(t) = scale / (t + sign*i0)**power.

    scale -1j with sign -1 is the hermitean positive-frequency model; the
    unit-scale variant keeps the same singular directions.
    """

    def __init__(self, sign=-1, power=1, scale=1.0):
        self.sign = int(sign)
        self.power = int(power)
        self.scale = complex(scale)
        tag = "-i0" if sign == -1 else "+i0"
        self.label = f"bv:{scale}:{tag}" + (f"^{power}" if power > 1 else "")
        # w hermitean iff conj(w(-t)) == w(t):
        # conj(scale)*(-1)**power / (t - sign*i0*(-1)...) resolves to the
        # simple parity rule below for power 1.
        self.hermitean = (power == 1) and abs(self.scale + np.conj(self.scale)) < 1e-15

    def pair_profile(self, fn, center, radius, offsets, osc_rate=0.0):
        rho = np.atleast_1d(np.asarray(offsets, dtype=float))
        # H(rho) = int w(a) fn(a - rho) da; substituting s = a - rho this is
        # the boundary-value pairing of fn with the pole at -rho.
        vals, err = bv_power_sweep(fn, center, radius, -rho, self.sign,
                                   self.power, osc_rate=osc_rate)
        return self.scale * vals, abs(self.scale) * err


class LightRayKernel(DifferenceKernel):
    """Plane kernel singular on a null line: w(u) = scale/((u0 - u1) + sign*i0).

    Pairings reduce to the line kernel after projecting onto the null
    coordinate u0 - u1 (rotation Jacobian 1/2).
    """

    d = 2

    def __init__(self, sign=-1, scale=-1j):
        self.sign = int(sign)
        self.scale = complex(scale)
        tag = "-i0" if sign == -1 else "+i0"
        self.label = f"lightray:{scale}:{tag}"
        self.hermitean = abs(self.scale + np.conj(self.scale)) < 1e-15

    def null_coordinate(self, v):
        v = np.asarray(v, dtype=float)
        return v[..., 0] - v[..., 1]

    def pair_reduced(self, reduced_fn, center, radius, gammas, osc_rate=0.0):
        """<w, tau_gamma M> for the null-coordinate reduction M of the
        translated profile; gamma is the null coordinate of the translate."""
        gam = np.atleast_1d(np.asarray(gammas, dtype=float))
        vals, err = bv_power_sweep(reduced_fn, center, radius, -gam, self.sign, 1)
        return 0.5 * self.scale * vals, 0.5 * abs(self.scale) * err


def _plane_integral(member):
    c = np.asarray(member.center)
    r = 1.05 * member.support_radius
    fn = _callable_of(member)
    nx, wx = panel_nodes(c[0] - r, c[0] + r, min_panels=24)
    ny, wy = panel_nodes(c[1] - r, c[1] + r, min_panels=24)
    pts = np.stack(np.meshgrid(nx, ny, indexing="ij"), axis=-1).reshape(-1, 2)
    vals = np.asarray(fn(pts)).reshape(nx.size, ny.size)
    return complex(wx @ vals @ wy)


def _null_projection(member):
    """P(beta) = integral of a plane test function over the line
    t0 - t1 = beta (sum-coordinate parametrization), on a fine grid."""
    c = np.asarray(member.center)
    r = member.support_radius
    fn = _callable_of(member)
    beta_c = float(c[0] - c[1])
    sum_c = float(c[0] + c[1])
    reach = 1.05 * r * math.sqrt(2.0)
    bgrid = np.linspace(beta_c - reach, beta_c + reach, 1201)
    nodes, weights = panel_nodes(sum_c - reach, sum_c + reach, min_panels=48)
    t0 = 0.5 * (bgrid[:, None] + nodes[None, :])
    t1 = 0.5 * (nodes[None, :] - bgrid[:, None])
    pts = np.stack([t0, t1], axis=-1)
    vals = np.asarray(fn(pts.reshape(-1, 2))).reshape(t0.shape) @ weights
    return bgrid, vals


class PairFunctional:
    """n = 2 functional with a translation-invariant difference kernel."""

    n = 2

    def __init__(self, kernel, d=1, label=None):
        self.kernel = kernel
        self.d = d
        self.label = label or f"pair[{kernel.label}]"

    @property
    def hermitean(self):
        return self.kernel.hermitean

    @property
    def smooth(self):
        return getattr(self.kernel, "smooth", False)

    def shifted(self, shift):
        """Simultaneous translation of both slots leaves the functional fixed."""
        return self

    def correlation(self, f1, f2):
        if self.d != 1:
            raise NotImplementedError
        return _correlation_1d(f1, f2)

    def translated_values(self, f1, f2, rho, osc_rate=0.0):
        """phi_2(tau_{y1} f1 (x) tau_{y2} f2) for rho = y1 - y2 ladders."""
        if self.d == 1:
            m, c, r = _correlation_1d(f1, f2)
            return self.kernel.pair_profile(m, c, r, rho, osc_rate)
        if isinstance(self.kernel, ConstantKernel):
            # separable: value independent of the translates
            i1 = _plane_integral(f1)
            i2 = _plane_integral(f2)
            rho = np.atleast_2d(np.asarray(rho, dtype=float))
            out = np.full(rho.shape[0], self.kernel.value * i1 * i2,
                          dtype=np.complex128)
            return out, 1e-13 * abs(i1 * i2)
        if not isinstance(self.kernel, LightRayKernel):
            raise NotImplementedError("plane functionals: light-ray or constant kernels")
        # project both slots onto the null coordinate, correlate the
        # projections, and hand the 1d reduction to the kernel:
        # M(alpha) = 1/2 * int P1(alpha + tau) P2(tau) dtau.
        b1, p1 = _null_projection(f1)
        b2, p2 = _null_projection(f2)
        h = min(b1[1] - b1[0], b2[1] - b2[0])
        n1 = int(math.ceil((b1[-1] - b1[0]) / h)) + 1
        n2 = int(math.ceil((b2[-1] - b2[0]) / h)) + 1
        g1 = b1[0] + h * np.arange(n1)
        g2 = b2[0] + h * np.arange(n2)
        q1 = _interp_callable(b1, p1)(g1)
        q2 = _interp_callable(b2, p2)(g2)
        # correlate(a, v)[k] = sum_n a[n + k - (len(v)-1)] conj(v[n])
        corr = 0.5 * h * np.correlate(q1, np.conj(q2), mode="full")
        alpha_axis = (b1[0] - b2[0]) + h * (np.arange(corr.size) - (n2 - 1))
        mfn = _interp_callable(alpha_axis, corr)
        center = 0.5 * (alpha_axis[0] + alpha_axis[-1])
        radius = 0.51 * (alpha_axis[-1] - alpha_axis[0])
        rho = np.atleast_2d(np.asarray(rho, dtype=float))
        gammas = rho[:, 0] - rho[:, 1]
        vals, err = self.kernel.pair_reduced(mfn, center, radius, gammas, osc_rate)
        interp_err = float(np.max(np.abs(corr))) * h**2
        return vals, err + interp_err

    def kernel_pair(self, f1, f2):
        """phi_2(f1 (x) f2) as a PairingResult."""
        if self.d == 1:
            rho = np.zeros(1)
        else:
            rho = np.zeros((1, 2))
        vals, err = self.translated_values(f1, f2, rho)
        return PairingResult(complex(vals[0]), f"kernel:{self.kernel.label}", err)

    def as_distribution(self):
        if self.d != 1:
            raise NotImplementedError("plane-kernel distributions are estimated "
                                      "through the correlation spectrum only")
        return KernelDistribution(self)


class KernelDistribution(Distribution):
    """A line pair-kernel viewed as a distribution on the plane."""

    def __init__(self, functional):
        self.functional = functional
        self.kernel = functional.kernel
        self.dim = 2
        self.label = f"as-dist[{self.kernel.label}]"
        self.is_real = False
        self.feature_points = ((0.0, 0.0),)

    def pair(self, phi):
        nyquist = math.pi / max(phi.grid.spacing)
        if phi.bandwidth > nyquist:
            raise UnresolvedOscillation("test function unresolved on its grid")
        pfn, a_c, reach, scale = _projection_diff_2d(phi)
        vals, err = self.kernel.pair_profile(pfn, a_c, reach, np.zeros(1))
        interp_err = scale * (2.0 * reach / 1600) ** 2
        return PairingResult(0.5 * complex(vals[0]),
                             f"kernel-projected:{self.kernel.label}", 0.5 * (err + interp_err))

    def pair_translates(self, member, offsets):
        pfn, a_c, reach, scale = _projection_diff_2d(member)
        rho = np.atleast_2d(np.asarray(offsets, dtype=float))
        alpha = rho[:, 0] - rho[:, 1]
        vals, err = self.kernel.pair_profile(pfn, a_c, reach, alpha)
        interp_err = scale * (2.0 * reach / 1600) ** 2
        return 0.5 * vals, 0.5 * (err + interp_err)

    def pair_modulated(self, window, omegas):
        # <u, e_omega chi> = 1/2 int w(a) e^{-i a mu} W(a; nu) da with
        # mu = (omega1 - omega2)/2, nu = (omega1 + omega2)/2 and W the
        # modulated chord integral of the window along t1 + t2.
        omegas = np.atleast_2d(np.asarray(omegas, dtype=float))
        c = np.asarray(window.center)
        R = window.radius
        alpha_c = float(c[0] - c[1])
        beta_c = float(c[0] + c[1])
        reach = 1.02 * R * math.sqrt(2.0)
        vals = np.empty(omegas.shape[0], dtype=np.complex128)
        err = 0.0
        for i, om in enumerate(omegas):
            mu = 0.5 * (om[0] - om[1])
            nu = 0.5 * (om[0] + om[1])

            def a_profile(a, _mu=mu, _nu=nu):
                a = np.asarray(a, dtype=float)
                flat = a.reshape(-1)
                nodes, weights = panel_nodes(beta_c - reach, beta_c + reach,
                                             omega=_nu, min_panels=24)
                t1 = 0.5 * (flat[:, None] + nodes[None, :])
                t2 = 0.5 * (nodes[None, :] - flat[:, None])
                pts = np.stack([t1, t2], axis=-1)
                chord = (np.asarray(window(pts)) * np.exp(-1j * _nu * nodes[None, :])) @ weights
                return (chord * np.exp(-1j * _mu * flat)).reshape(a.shape)

            v, e = self.kernel.pair_profile(a_profile, alpha_c, reach,
                                            np.zeros(1), osc_rate=abs(mu))
            vals[i] = 0.5 * v[0]
            err = max(err, 0.5 * e)
        return vals, err

    def translate(self, shift):
        return self  # translation invariant


# ---------------------------------------------------------------------------
# functional catalog

def functional_catalog():
    return {
        "kernel-bv": lambda: PairFunctional(BoundaryKernel(-1, 1, 1.0), 1),
        "kernel-bv-herm": lambda: PairFunctional(BoundaryKernel(-1, 1, -1j), 1),
        "kernel-delta": lambda: PairFunctional(DeltaKernel(), 1),
        "kernel-smooth": lambda: PairFunctional(SmoothKernel(width=0.5), 1),
        "kernel-const": lambda: PairFunctional(ConstantKernel(1.0), 1),
        "kernel-lightray-herm": lambda: PairFunctional(LightRayKernel(-1, -1j), 2),
    }


def functional_from_key(key):
    reg = functional_catalog()
    if key not in reg:
        raise KeyError(f"unknown functional key {key!r}")
    return reg[key]()
