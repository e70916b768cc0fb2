import numpy as np

from flatfront import FlatFrontError, Quadruple, SphericalCurve, TrigSeries, dual_curve, is_convex, project_period

SQ2 = np.sqrt(2.0) / 2


def latitude_raw(phi):
    return SphericalCurve.latitude(phi).raw


def perturbed_latitude(phi=np.pi / 4, eps=0.05, k=3, n_grid=1024):
    """normalize(xi_phi + eps cos(k t) e3)."""
    raw = latitude_raw(phi)
    cos = np.zeros((k, 3))
    cos[0] = raw.cos[0]
    cos[k - 1, 2] += eps
    return SphericalCurve(TrigSeries(raw.const, cos, raw.sin), n_grid)


def random_convex_curve(rng, n_grid=1024, min_kappa=0.05, degree=4):
    """Randomly perturbed latitude circle; resampled until convex with |kappa_g| > min_kappa."""
    while True:
        phi = rng.uniform(0.2, 1.2) * rng.choice([-1.0, 1.0])
        raw = latitude_raw(phi)
        cos = np.zeros((degree, 3))
        sin = np.zeros((degree, 3))
        cos[0], sin[0] = raw.cos[0], raw.sin[0]
        scale = 0.08 / np.arange(1, degree + 1) ** 2
        cos += rng.normal(size=(degree, 3)) * scale[:, None]
        sin += rng.normal(size=(degree, 3)) * scale[:, None]
        xi = SphericalCurve(TrigSeries(raw.const + rng.normal(scale=0.02, size=3), cos, sin), n_grid)
        try:
            report = is_convex(xi)
        except FlatFrontError:
            continue
        if report.simple and report.min_abs_kappa_g > min_kappa:
            return xi


def random_scalar(rng, degree=6, scale=1.0):
    return TrigSeries(rng.normal() * scale, rng.normal(size=degree) * scale, rng.normal(size=degree) * scale)


def random_closed_quadruple(rng, n_grid=1024):
    xi = random_convex_curve(rng, n_grid)
    a = project_period(xi, random_scalar(rng))
    return Quadruple(a, TrigSeries.zero(), xi, dual_curve(xi).curve, n_grid)


def cos_latitude_front(n=2, phi=np.pi / 4, n_grid=1024):
    from flatfront import gallery_build

    return gallery_build("circle_cos_n", phi=phi, n=n, n_grid=n_grid)


def equator_quadruple(a=None, n_grid=1024):
    xi = SphericalCurve.latitude(0.0, n_grid)
    nu = SphericalCurve.constant([0.0, 0.0, -1.0], n_grid)
    return Quadruple(a or TrigSeries.zero(), TrigSeries.zero(), xi, nu, n_grid)


def fd_derivative(func, t, h=1e-5):
    """Fourth-order central difference."""
    return (-func(t + 2 * h) + 8 * func(t + h) - 8 * func(t - h) + func(t - 2 * h)) / (12 * h)
