"""Named example quadruples.

Every constructor returns a :class:`~flatfront.frontal.Quadruple`.  Where a
direction field is a polynomial in the coefficients of the input series
(tangents, binormals, Darboux vectors) it is assembled from exact series
products; only genuinely non-polynomial densities such as ``|c'|`` are
interpolated on the grid.
"""

from dataclasses import dataclass, field

import numpy as np

from .curves import DEFAULT_GRID, SpaceCurve, SphericalCurve, dual_curve, frenet_data
from .errors import InvalidParameter
from .frontal import Quadruple
from .series import TrigSeries, cross, dot, scalar_times

GALLERY_NAMES = (
    "cone",
    "circle_cos_n",
    "cardioid_cylinder",
    "tangential_example54",
    "tangential_custom",
    "rectifying_custom",
    "plane",
)


@dataclass(frozen=True)
class GallerySpec:
    name: str
    params: dict = field(default_factory=dict)


def _check_phi(phi):
    if not abs(phi) < np.pi / 2:
        raise InvalidParameter(f"latitude phi must satisfy |phi| < pi/2, got {phi}")


def latitude_pair(phi, n_grid=DEFAULT_GRID):
    xi = SphericalCurve.latitude(phi, n_grid)
    return xi, dual_curve(xi).curve


def cone(phi=np.pi / 4, n_grid=DEFAULT_GRID):
    """``f = v xi_phi``: a cone over a latitude circle."""
    _check_phi(phi)
    xi, nu = latitude_pair(phi, n_grid)
    return Quadruple(TrigSeries.zero(), TrigSeries.zero(), xi, nu, n_grid)


def circle_cos_n(phi=np.pi / 4, n=2, n_grid=DEFAULT_GRID):
    """``alpha = cos(nt) dt`` over the latitude circle; closed for n >= 2."""
    _check_phi(phi)
    if int(n) != n or n < 2:
        raise InvalidParameter(f"n must be an integer >= 2, got {n}")
    n = int(n)
    xi, nu = latitude_pair(phi, n_grid)
    cos = np.zeros(n)
    cos[n - 1] = 1.0
    return Quadruple(TrigSeries(0.0, cos, []), TrigSeries.zero(), xi, nu, n_grid)


def cardioid_cylinder(n_grid=DEFAULT_GRID):
    """Cylinder over ``(1 - sin t)(cos t, sin t)`` on its double cover ``t = 2s``.

    The unit normal is the printed field divided by its constant length
    sqrt(2); it is anti-pi-periodic in ``s``.
    """

    def normal(s):
        c, sn, s2 = np.cos(s), np.sin(s), np.sin(2 * s)
        return np.stack([(c + sn) * (1 - 2 * s2), (c - sn) * (1 + 2 * s2), 0 * s], axis=-1) / np.sqrt(2)

    def sigma(s):
        t = 2 * s
        return np.stack([(1 - np.sin(t)) * np.cos(t), (1 - np.sin(t)) * np.sin(t), 0 * s], axis=-1)

    nu_raw = TrigSeries.from_function(normal, 64)
    sigma_s = TrigSeries.from_function(sigma, 64)
    xi = SphericalCurve.constant([0.0, 0.0, 1.0], n_grid)
    nu = SphericalCurve(nu_raw, n_grid)
    eta_raw = cross(xi.raw, nu_raw)
    b = dot(sigma_s.derivative(), eta_raw)
    return Quadruple(TrigSeries.zero(), b, xi, nu, n_grid)


def plane(n_grid=DEFAULT_GRID):
    """``(0, dt, e1, e3)``: an immersion whose Gauss map is constant."""
    return Quadruple(
        TrigSeries.zero(),
        TrigSeries.constant(1.0),
        SphericalCurve.constant([1.0, 0.0, 0.0], n_grid),
        SphericalCurve.constant([0.0, 0.0, 1.0], n_grid),
        n_grid,
    )


def example54_curve(n_grid=DEFAULT_GRID):
    """``((4 + cos 2t) cos t, (4 + cos 2t) sin t, sin 2t)``."""
    # (4 + cos2t) cos t = 4.5 cos t + 0.5 cos 3t ; (4 + cos2t) sin t = 3.5 sin t + 0.5 sin 3t
    cos = np.zeros((3, 3))
    sin = np.zeros((3, 3))
    cos[0, 0], cos[2, 0] = 4.5, 0.5
    sin[0, 1], sin[2, 1] = 3.5, 0.5
    sin[1, 2] = 1.0
    return SpaceCurve(TrigSeries(np.zeros(3), cos, sin), n_grid=n_grid)


def _speed_series(c):
    t = c.grid()
    return TrigSeries.from_samples(np.linalg.norm(c.jet(t, 1)[1], axis=-1))


def tangential_developable(c):
    """``f = c + v c'``: xi is the unit tangent, nu the binormal, a = |c'|, b = 0."""
    frenet_data(c, c.grid())
    d1 = c.velocity_series()
    d2 = d1.derivative()
    xi = SphericalCurve(d1, c.n_grid)
    nu = SphericalCurve(cross(d1, d2), c.n_grid)
    return Quadruple(_speed_series(c), TrigSeries.zero(), xi, nu, c.n_grid)


def rectifying_developable(c):
    """Envelope of the rectifying planes of ``c``; rulings along the Darboux vector.

    With ``r = sqrt(kappa^2 + tau^2)`` the data are ``xi = (tau e + kappa b)/r``,
    ``nu = n``, ``a = |c'| tau / r`` and ``b = -|c'| kappa / r`` in the curve's own
    parameter.
    """
    t = c.grid()
    fr = frenet_data(c, t)
    d1 = c.velocity_series()
    d2 = d1.derivative()
    d3 = d2.derivative()
    c12 = cross(d1, d2)
    # tau e + kappa b  is parallel to  det(c',c'',c''') |c'|^2 c' + |c' x c''|^2 (c' x c'')
    darboux = scalar_times(dot(c12, d3) * dot(d1, d1), d1) + scalar_times(dot(c12, c12), c12)
    xi = SphericalCurve(darboux, c.n_grid)
    nu = SphericalCurve(cross(c12, d1), c.n_grid)
    speed = np.linalg.norm(c.jet(t, 1)[1], axis=-1)
    r = np.hypot(fr.kappa, fr.tau)
    a = TrigSeries.from_samples(speed * fr.tau / r)
    b = TrigSeries.from_samples(-speed * fr.kappa / r)
    return Quadruple(a, b, xi, nu, c.n_grid)


def tangential_example54(n_grid=DEFAULT_GRID):
    return tangential_developable(example54_curve(n_grid))


def space_curve_from_params(params, n_grid=DEFAULT_GRID):
    """SpaceCurve from ``{"const": [..3], "cos": [[..3], ...], "sin": [...], "drift": [..3]}``."""
    try:
        const = params.get("const", [0.0, 0.0, 0.0])
        series = TrigSeries(const, params.get("cos", []), params.get("sin", []))
    except (ValueError, TypeError) as exc:
        raise InvalidParameter(f"bad space-curve coefficients: {exc}") from None
    if series.shape != (3,):
        raise InvalidParameter("space-curve coefficients must be 3-vectors")
    return SpaceCurve(series, params.get("drift", [0.0, 0.0, 0.0]), n_grid)


def gallery_build(spec, **params):
    """Build a gallery quadruple from a :class:`GallerySpec` or a name plus keywords."""
    if isinstance(spec, str):
        spec = GallerySpec(spec, params)
    p = dict(spec.params)
    name = spec.name
    if name not in GALLERY_NAMES:
        raise InvalidParameter(f"unknown gallery entry {name!r}; choose from {', '.join(GALLERY_NAMES)}")
    n_grid = int(p.pop("n_grid", DEFAULT_GRID))
    phi = float(p.pop("phi", np.pi / 4)) if name in ("cone", "circle_cos_n") else None
    n = p.pop("n", 2) if name == "circle_cos_n" else None
    curve = p.pop("curve", None) if name.endswith("_custom") else None
    if p:
        raise InvalidParameter(f"unknown parameters for {name}: {sorted(p)}")

    if name == "cone":
        return cone(phi, n_grid)
    if name == "circle_cos_n":
        return circle_cos_n(phi, n, n_grid)
    if name == "cardioid_cylinder":
        return cardioid_cylinder(n_grid)
    if name == "plane":
        return plane(n_grid)
    if name == "tangential_example54":
        return tangential_example54(n_grid)
    if curve is None:
        raise InvalidParameter(f"{name} needs a 'curve' parameter")
    if not isinstance(curve, SpaceCurve):
        curve = space_curve_from_params(curve, n_grid)
    build = tangential_developable if name == "tangential_custom" else rectifying_developable
    return build(curve)
