"""Spherical and space curves.

Spherical curves are pointwise normalisations ``g / |g|`` of a closed
trigonometric series ``g``; their derivatives come from the quotient rule on
exact derivative jets.  The dual of ``gamma`` is fixed as
``gamma' x gamma / |gamma' x gamma|``.

Two geodesic-curvature conventions appear below.  ``geodesic_curvature``
returns the orientation-only quantity ``det(g, g', g'') / |g'|^3``.  The
caustic uses ``n' = -kappa_app gamma'`` with ``n`` the dual above, which works
out to ``kappa_app = -kappa_g``.
"""

from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, linprog

from . import _jets as J
from .errors import DualityViolation, GridTooCoarse, NonRegularCurve, UmbilicDegenerate, VanishingCurvature
from .series import TrigSeries, cross, dot, grid, scalar_times

EPS_ZERO = 1e-8
DEFAULT_GRID = 1024


@dataclass(frozen=True, eq=False)
class SphericalCurve:
    """Unit-sphere curve ``raw / |raw|`` with analytic derivatives."""

    raw: TrigSeries
    n_grid: int = DEFAULT_GRID

    def __post_init__(self):
        if self.raw.shape != (3,):
            raise ValueError("a spherical curve needs a 3-vector series")

    @classmethod
    def latitude(cls, phi, n_grid=DEFAULT_GRID):
        """The circle ``(cos t cos phi, sin t cos phi, sin phi)``."""
        c, s = np.cos(phi), np.sin(phi)
        raw = TrigSeries([0.0, 0.0, s], [[c, 0.0, 0.0]], [[0.0, c, 0.0]])
        return cls(raw, n_grid)

    @classmethod
    def constant(cls, vec, n_grid=DEFAULT_GRID):
        vec = np.asarray(vec, dtype=float)
        return cls(TrigSeries.constant(vec / np.linalg.norm(vec)), n_grid)

    @classmethod
    def from_samples(cls, values, n_grid=None):
        values = np.asarray(values, dtype=float)
        return cls(TrigSeries.from_samples(values), n_grid or len(values))

    def jet(self, t, order):
        g = self.raw.jet(t, order)
        inv = J.power(J.dot(g, g), -0.5)
        return J.scale(g, inv)

    def __call__(self, t):
        return self.jet(t, 0)[0]

    def derivative(self, t, order=1):
        return self.jet(t, order)[order]

    def grid(self):
        return grid(self.n_grid)

    def __neg__(self):
        return SphericalCurve(-self.raw, self.n_grid)

    def with_grid(self, n_grid):
        return SphericalCurve(self.raw, n_grid)


@dataclass(frozen=True, eq=False)
class SpaceCurve:
    """Curve in R^3: a closed series plus an optional linear drift (helices)."""

    periodic: TrigSeries
    drift: np.ndarray = field(default_factory=lambda: np.zeros(3))
    n_grid: int = DEFAULT_GRID

    def __post_init__(self):
        object.__setattr__(self, "drift", np.asarray(self.drift, dtype=float))

    @property
    def closed(self):
        return not np.any(self.drift)

    def jet(self, t, order):
        t = np.asarray(t, dtype=float)
        out = self.periodic.jet(t, order)
        out[0] = out[0] + np.multiply.outer(t, self.drift)
        if order >= 1:
            out[1] = out[1] + self.drift
        return out

    def __call__(self, t):
        return self.jet(t, 0)[0]

    def velocity_series(self):
        """``c'`` as an exact (closed) series."""
        return self.periodic.derivative() + self.drift

    def grid(self):
        return grid(self.n_grid)


def _regularity_tol(speed):
    return EPS_ZERO * float(np.max(speed, initial=0.0))


def _require_regular(gamma):
    t = gamma.grid()
    speed = np.linalg.norm(gamma.derivative(t), axis=-1)
    tol = _regularity_tol(speed)
    if tol == 0.0 or np.any(speed <= tol):
        raise NonRegularCurve("spherical curve has vanishing velocity on the grid")
    return speed


# duality ---------------------------------------------------------------


@dataclass(frozen=True)
class DualCurve:
    curve: SphericalCurve
    is_regular: bool
    singular_everywhere: bool
    inflections: np.ndarray


def dual_curve(gamma):
    """Dual front ``n = gamma' x gamma / |gamma' x gamma|`` and its regularity.

    ``gamma' x gamma`` is parallel to ``g' x g`` for ``gamma = g/|g|``, so the
    dual is again an exact normalised series.  Points where ``n'`` vanishes are
    the inflections of ``gamma`` (zeros of its geodesic curvature).
    """
    _require_regular(gamma)
    g = gamma.raw
    n = SphericalCurve(cross(g.derivative(), g), gamma.n_grid)
    t = gamma.grid()
    nspeed = np.linalg.norm(n.derivative(t), axis=-1)
    gspeed = np.linalg.norm(gamma.derivative(t), axis=-1)
    tol = EPS_ZERO * float(gspeed.max())
    small = nspeed <= tol
    kg = geodesic_curvature_values(gamma, t)
    infl = list(t[small])
    infl.extend(_sign_change_roots(lambda s: geodesic_curvature_values(gamma, s), t, kg, small))
    return DualCurve(n, not small.any(), bool(small.all()), np.sort(np.array(infl)))


def frame_functions(xi, nu, t, tol=1e-7):
    """``eta = xi x nu`` and the coefficients of ``xi' = mu1 eta``, ``nu' = mu2 eta``.

    Returns ``(eta, mu1, mu2, residuals)``.
    """

    xj = xi.jet(t, 1)
    nj = nu.jet(t, 1)
    eta = np.cross(xj[0], nj[0])
    mu1 = np.sum(xj[1] * eta, axis=-1)
    mu2 = np.sum(nj[1] * eta, axis=-1)
    res = {
        "xi_prime": float(np.max(np.linalg.norm(xj[1] - mu1[..., None] * eta, axis=-1))),
        "nu_prime": float(np.max(np.linalg.norm(nj[1] - mu2[..., None] * eta, axis=-1))),
    }
    for name, r in res.items():
        if r > tol:
            raise DualityViolation(f"{name} residual {r:.3e} exceeds {tol:g}", r, name)
    return eta, mu1, mu2, res


# geodesic curvature -----------------------------------------------------


def geodesic_curvature_jet(gamma, t, order=0):
    """Jet of ``det(gamma, gamma', gamma'') / |gamma'|^3``."""
    g = gamma.jet(t, order + 2)
    det = J.dot(g[: order + 1], J.cross(g[1: order + 2], g[2:]))
    speed2 = J.dot(g[1: order + 2], g[1: order + 2])
    return J.mul(det, J.power(speed2, -1.5))


def geodesic_curvature_values(gamma, t):
    return geodesic_curvature_jet(gamma, np.asarray(t, dtype=float), 0)[0]


Vertex = namedtuple("Vertex", "t kappa_g generic")


@dataclass(frozen=True)
class GeodesicCurvature:
    t: np.ndarray
    values: np.ndarray
    vertices: list
    constant: bool

    @property
    def min_abs(self):
        return float(np.min(np.abs(self.values)))


def geodesic_curvature(gamma, xtol=1e-12):
    """Geodesic curvature on the grid plus the vertex list.

    Vertices are sign changes of ``kappa_g'`` refined by bracketing; when
    ``kappa_g`` is constant within 1e-9 the vertex list is left empty and the
    ``constant`` flag set.
    """
    _require_regular(gamma)
    t = gamma.grid()
    jet = geodesic_curvature_jet(gamma, t, 2)
    kg = jet[0]
    if np.ptp(kg) < 1e-9:
        return GeodesicCurvature(t, kg, [], True)
    tol = EPS_ZERO * max(1.0, float(np.max(np.abs(kg))))

    def dk(s):
        return geodesic_curvature_jet(gamma, s, 1)[1]

    roots = _sign_change_roots(dk, t, jet[1], np.zeros(len(t), bool), xtol=xtol)
    verts = []
    for r in roots:
        j = geodesic_curvature_jet(gamma, np.array(r), 2)
        verts.append(Vertex(float(r), float(j[0]), bool(abs(j[2]) > tol)))
    return GeodesicCurvature(t, kg, verts, False)


def _sign_change_roots(func, t, values, skip, xtol=1e-13):
    """Roots of ``func`` bracketed by consecutive grid samples (circularly)."""
    n = len(t)
    roots = []
    for i in range(n):
        j = (i + 1) % n
        if skip[i] or skip[j]:
            continue
        if values[i] == 0.0:
            roots.append(float(t[i]))
            continue
        if values[i] * values[j] < 0.0:
            lo = t[i]
            hi = t[j] if j else t[-1] + (t[1] - t[0])
            r = brentq(lambda s: float(func(np.array(s))), lo, hi, xtol=xtol)
            roots.append(float(np.mod(r, 2 * np.pi)))
    return roots


# convexity ----------------------------------------------------------------


@dataclass(frozen=True)
class ConvexityReport:
    convex: bool
    simple: bool
    min_abs_kappa_g: float
    intersections: list

    def __bool__(self):
        return self.convex


def _arc_intersections(pts, block=128, limit=64):
    nxt = np.roll(pts, -1, axis=0)
    nrm = np.cross(pts, nxt)
    n = len(pts)
    idx = np.arange(n)
    found = []
    for start in range(0, n, block):
        i = idx[start:start + block]
        x = np.cross(nrm[i][:, None, :], nrm[None, :, :])
        xn = np.linalg.norm(x, axis=-1)
        with np.errstate(invalid="ignore", divide="ignore"):
            x = x / xn[..., None]
        hit = np.zeros(xn.shape, bool)
        for sgn in (1.0, -1.0):
            y = sgn * x
            on_i = (np.einsum("ijk,ik->ij", np.cross(pts[i][:, None, :], y), nrm[i]) >= 0) & (
                np.einsum("ijk,ik->ij", np.cross(y, nxt[i][:, None, :]), nrm[i]) >= 0
            )
            on_j = (np.einsum("ijk,jk->ij", np.cross(pts[None, :, :], y), nrm) >= 0) & (
                np.einsum("ijk,jk->ij", np.cross(y, nxt[None, :, :]), nrm) >= 0
            )
            hit |= on_i & on_j
        d = (idx[None, :] - i[:, None]) % n
        hit &= (d > 1) & (d < n - 1) & (xn > 1e-15) & (idx[None, :] > i[:, None])
        for a, b in zip(*np.nonzero(hit)):
            found.append((int(i[a]), int(b)))
            if len(found) >= limit:
                return found
    return found


def hemisphere_center(pts):
    """Unit ``c`` maximising ``min(pts @ c)``; returns ``(c, margin)``.

    A positive margin means the points lie in the open hemisphere about ``c``.
    """
    n = len(pts)
    # variables (c1, c2, c3, s): maximise s subject to pts @ c >= s, |c_i| <= 1
    cost = np.array([0.0, 0.0, 0.0, -1.0])
    a_ub = np.hstack([-pts, np.ones((n, 1))])
    res = linprog(cost, A_ub=a_ub, b_ub=np.zeros(n), bounds=[(-1, 1)] * 3 + [(None, 1)], method="highs")
    c = res.x[:3]
    norm = np.linalg.norm(c)
    if not res.success or norm == 0.0:
        return np.array([0.0, 0.0, 1.0]), -1.0
    c = c / norm
    return c, float(np.min(pts @ c))


def rotation_index(pts, center):
    """Rotation index of the gnomonic image (about ``center``) of a closed polyline."""
    e1 = np.cross(center, [1.0, 0.0, 0.0])
    if np.linalg.norm(e1) < 0.5:
        e1 = np.cross(center, [0.0, 1.0, 0.0])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(center, e1)
    proj = pts / (pts @ center)[:, None]
    xy = np.stack([proj @ e1, proj @ e2], axis=-1)
    edge = np.roll(xy, -1, axis=0) - xy
    nxt = np.roll(edge, -1, axis=0)
    turn = np.arctan2(edge[:, 0] * nxt[:, 1] - edge[:, 1] * nxt[:, 0], np.sum(edge * nxt, axis=-1))
    return int(np.rint(turn.sum() / (2 * np.pi)))


def is_convex(gamma, max_segment=0.1):
    """Simple closed curve with nowhere-vanishing geodesic curvature.

    A locally convex closed curve is simple exactly when it lies in an open
    hemisphere and its central projection turns once, so that case is
    decided in linear time.  Otherwise simplicity is checked by searching all
    pairs of non-adjacent great-circle arcs of the grid polyline.
    """
    _require_regular(gamma)
    t = gamma.grid()
    pts = gamma(t)
    seg = np.arccos(np.clip(np.sum(pts * np.roll(pts, -1, axis=0), axis=-1), -1.0, 1.0))
    if seg.max() > max_segment:
        raise GridTooCoarse(f"polyline segment of {seg.max():.3f} rad exceeds {max_segment}")
    kg = geodesic_curvature_values(gamma, t)
    min_kg = float(np.min(np.abs(kg)))
    if min_kg > EPS_ZERO:
        center, margin = hemisphere_center(pts)
        simple = margin > 0.0 and abs(rotation_index(pts, center)) == 1
        return ConvexityReport(simple, simple, min_kg, [])
    hits = _arc_intersections(pts)
    return ConvexityReport(False, not hits, min_kg, hits)


# parallels and caustics -------------------------------------------------


def spherical_parallel(gamma, theta):
    """``gamma cos(theta) + n sin(theta)`` with ``n`` the dual of ``gamma``."""
    if np.sin(theta) == 0.0:
        return gamma if np.cos(theta) > 0 else -gamma
    n = dual_curve(gamma).curve
    t = gamma.grid()
    return SphericalCurve.from_samples(np.cos(theta) * gamma(t) + np.sin(theta) * n(t), gamma.n_grid)


def tangent_indicatrix(gamma):
    """Unit tangent ``gamma'/|gamma'|`` as a spherical curve.

    For ``gamma = g/|g|`` the velocity is parallel to ``g'(g.g) - g(g.g')``,
    a polynomial in the coefficients, so the result is exact.
    """
    _require_regular(gamma)
    g = gamma.raw
    gp = g.derivative()
    raw = scalar_times(dot(g, g), gp) - scalar_times(dot(g, gp), g)
    return SphericalCurve(raw, gamma.n_grid)


@dataclass(frozen=True)
class SphericalCaustic:
    curve: SphericalCurve
    angle: np.ndarray
    kappa_app: np.ndarray
    diameter: float
    is_point: bool


def _diameter(pts):
    return float(np.linalg.norm(np.ptp(pts, axis=0)))


def spherical_caustic(gamma):
    """Caustic ``gamma cos A + n sin A`` with ``cos A - kappa_app sin A = 0``.

    ``A`` is taken in (-pi/2, pi/2]; ``A`` depends only on the geodesic
    curvature, so no reparametrisation is needed.  When the geodesic
    curvature vanishes identically or changes sign the branch jumps and
    ``UmbilicDegenerate`` is raised, carrying one sample array per branch.
    """
    _require_regular(gamma)
    t = gamma.grid()
    kg = geodesic_curvature_values(gamma, t)
    n = dual_curve(gamma).curve(t)
    g = gamma(t)
    if np.all(np.abs(kg) <= EPS_ZERO):
        raise UmbilicDegenerate("geodesic curvature vanishes identically")
    kapp = -kg
    angle = np.where(kapp == 0.0, np.pi / 2, np.arctan(1.0 / np.where(kapp == 0.0, 1.0, kapp)))
    pts = g * np.cos(angle)[:, None] + n * np.sin(angle)[:, None]
    sgn = np.sign(kg)
    if np.any(sgn > 0) and np.any(sgn < 0) or np.any(np.abs(kg) <= EPS_ZERO):
        cuts = np.nonzero(sgn != np.roll(sgn, 1))[0]
        pieces = np.split(np.roll(pts, -cuts[0], axis=0), cuts[1:] - cuts[0]) if len(cuts) else [pts]
        raise UmbilicDegenerate("geodesic curvature changes sign; caustic branch jumps", pieces)
    diam = _diameter(pts)
    return SphericalCaustic(SphericalCurve.from_samples(pts, gamma.n_grid), angle, kapp, diam, diam < 1e-8)


# space curves ---------------------------------------------------------------

Frenet = namedtuple("Frenet", "e n b kappa tau")


def frenet_data(c, t):
    """Frenet frame, curvature and torsion for an arbitrary-speed parametrisation."""
    t = np.asarray(t, dtype=float)
    jet = c.jet(t, 3)
    d1, d2, d3 = jet[1], jet[2], jet[3]
    speed = np.linalg.norm(d1, axis=-1)
    if np.any(speed <= EPS_ZERO):
        raise NonRegularCurve("space curve has vanishing velocity")
    c12 = np.cross(d1, d2)
    c12n = np.linalg.norm(c12, axis=-1)
    kappa = c12n / speed ** 3
    if np.any(kappa <= EPS_ZERO):
        raise VanishingCurvature("curvature vanishes; normal and binormal undefined")
    tau = np.sum(c12 * d3, axis=-1) / c12n ** 2
    e = d1 / speed[..., None]
    b = c12 / c12n[..., None]
    n = np.cross(b, e)
    return Frenet(e, n, b, kappa, tau)
