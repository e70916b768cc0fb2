"""Quadruple data and the developable frontal it generates.

A quadruple ``(a dt, b dt, xi, nu)`` with ``xi`` and ``nu`` mutually dual
spherical curves produces

    f(t, v) = sigma(t) + v xi(t),   sigma' = a xi + b eta,   eta = xi x nu.

The frame coefficients ``xi' = mu1 eta`` and ``nu' = mu2 eta`` drive every
downstream criterion, and ``f_t x f_v = (b + v mu1) eta x xi``.
"""

import warnings
from collections import namedtuple
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional

import numpy as np

from . import _jets as J
from .curves import DEFAULT_GRID, EPS_ZERO, SphericalCurve
from .errors import DegenerateGram, DualityViolation, PeriodDefectWarning
from .series import TWO_PI, TrigSeries, grid

PERIOD_TOL = 1e-8
DUALITY_TOL = 1e-9

Frame = namedtuple("Frame", "xi nu eta mu1 mu2")


@dataclass(frozen=True, eq=False)
class Quadruple:
    a: TrigSeries
    b: TrigSeries
    xi: SphericalCurve
    nu: SphericalCurve
    n_grid: int = DEFAULT_GRID

    def grid(self):
        return grid(self.n_grid)

    def frame(self, t, order=0):
        """Jets (derivatives ``0..order``) of xi, nu, eta, mu1 and mu2 at ``t``."""
        t = np.asarray(t, dtype=float)
        xj = self.xi.jet(t, order + 1)
        nj = self.nu.jet(t, order + 1)
        eta = J.cross(xj, nj)
        mu1 = J.dot(xj[1:], eta[: order + 1])
        mu2 = J.dot(nj[1:], eta[: order + 1])
        return Frame(xj[: order + 1], nj[: order + 1], eta[: order + 1], mu1, mu2)

    def mu1(self, t):
        return self.frame(t).mu1[0]

    def mu2(self, t):
        return self.frame(t).mu2[0]

    def eta(self, t):
        return np.cross(self.xi(t), self.nu(t))

    @cached_property
    def eps(self):
        """Zero threshold: ``EPS_ZERO`` scaled by the largest frame derivative."""
        t = self.grid()
        s1 = np.linalg.norm(self.xi.derivative(t), axis=-1).max()
        s2 = np.linalg.norm(self.nu.derivative(t), axis=-1).max()
        return EPS_ZERO * max(1.0, float(s1), float(s2))

    def replace(self, **changes):
        return replace(self, **changes)

    def flipped(self):
        """The congruent data ``(a, b, -xi, -nu)``."""
        return replace(self, xi=-self.xi, nu=-self.nu)


def integrand(q, t):
    """``a xi + b eta`` at ``t``."""
    fr = q.frame(t)
    return q.a(t)[..., None] * fr.xi[0] + q.b(t)[..., None] * fr.eta[0]


# validation -----------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    residuals: dict
    tol: float

    @property
    def passed(self):
        return all(r < self.tol for r in self.residuals.values())

    @property
    def worst(self):
        return max(self.residuals.items(), key=lambda kv: kv[1])


def validate_quadruple(q, tol=DUALITY_TOL, raise_on_failure=True):
    """Sup-norm residuals of the duality relations on the grid."""
    t = q.grid()
    xj = q.xi.jet(t, 1)
    nj = q.nu.jet(t, 1)
    eta = np.cross(xj[0], nj[0])
    mu1 = np.sum(xj[1] * eta, axis=-1)
    mu2 = np.sum(nj[1] * eta, axis=-1)

    def sup(x):
        return float(np.max(np.abs(x)))

    res = {
        "nu.xi": sup(np.sum(nj[0] * xj[0], axis=-1)),
        "nu'.xi": sup(np.sum(nj[1] * xj[0], axis=-1)),
        "nu.xi'": sup(np.sum(nj[0] * xj[1], axis=-1)),
        "xi'-mu1*eta": sup(np.linalg.norm(xj[1] - mu1[:, None] * eta, axis=-1)),
        "nu'-mu2*eta": sup(np.linalg.norm(nj[1] - mu2[:, None] * eta, axis=-1)),
    }
    report = ValidationReport(res, tol)
    if raise_on_failure and not report.passed:
        name, r = report.worst
        raise DualityViolation(f"duality residual {name} = {r:.3e} exceeds {tol:g}", r, name)
    return report


# period condition -------------------------------------------------------


def _trapezoid(samples):
    # periodic trapezoid rule on the uniform grid
    return TWO_PI * np.mean(samples, axis=0)


def period_residual(xi, a, b=None, nu=None, n=None):
    """``int_0^{2pi} (a xi + b eta) dt`` by the periodic trapezoid rule.

    ``nu`` is only needed when ``b`` is non-zero; it defaults to the dual of
    ``xi``.
    """
    n = n or xi.n_grid
    t = grid(n)
    vals = a(t)[:, None] * xi(t)
    if b is not None and not b.is_zero():
        if nu is None:
            from .curves import dual_curve

            nu = dual_curve(xi).curve
        vals = vals + b(t)[:, None] * np.cross(xi(t), nu(t))
    return _trapezoid(vals)


def project_period(xi, a_raw, n=None, max_cond=1e8):
    """Remove from ``a_raw`` its L2 projection onto span{xi_1, xi_2, xi_3}.

    The result satisfies ``int a xi dt = 0``, the closing condition for a
    generator with ``b = 0``.
    """
    n = n or xi.n_grid
    t = grid(n)
    x = xi(t)
    gram = _trapezoid(x[:, :, None] * x[:, None, :])
    if np.linalg.cond(gram) > max_cond:
        raise DegenerateGram(f"Gram matrix of xi is singular (cond {np.linalg.cond(gram):.2e})")
    rhs = _trapezoid(a_raw(t)[:, None] * x)
    c = np.linalg.solve(gram, rhs)
    a = TrigSeries.from_samples(a_raw(t) - x @ c)
    post = np.linalg.norm(_trapezoid(a(t)[:, None] * x))
    if post > 1e-10 * max(1.0, float(np.max(np.abs(a_raw(t))))):
        raise DegenerateGram(f"projection left a period residual of {post:.2e}")
    return a


# the front ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FrontEvaluator:
    """Evaluator for ``f(t, v) = sigma(t) + v xi(t)``.

    ``sigma`` is the series primitive of the zero-mean part of the integrand
    plus the linear drift ``period_defect * t / 2pi``, so ``sigma' = a xi + b
    eta`` holds on the universal cover even when the generator is not closed.
    """

    quadruple: Quadruple
    sigma_periodic: TrigSeries
    period_defect: np.ndarray

    @property
    def drift(self):
        return self.period_defect / TWO_PI

    @property
    def closed(self):
        return float(np.linalg.norm(self.period_defect)) <= PERIOD_TOL

    def sigma(self, t):
        t = np.asarray(t, dtype=float)
        return self.sigma_periodic(t) + np.multiply.outer(t, self.drift)

    def sigma_prime(self, t):
        return self.sigma_periodic.derivative()(t) + self.drift

    def __call__(self, t, v):
        t, v = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(v, dtype=float))
        return self.sigma(t) + v[..., None] * self.quadruple.xi(t)

    f = __call__

    def f_t(self, t, v):
        t, v = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(v, dtype=float))
        return self.sigma_prime(t) + v[..., None] * self.quadruple.xi.derivative(t)

    def f_v(self, t, v):
        t, v = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(v, dtype=float))
        return self.quadruple.xi(t) + 0.0 * v[..., None]

    def normal(self, t):
        return self.quadruple.nu(t)

    def density(self, t, v):
        """``lambda = b + v mu1`` with ``f_t x f_v = lambda eta x xi``."""
        q = self.quadruple
        return q.b(t) + np.asarray(v) * q.mu1(t)


def build_front(q, validate=True):
    if validate:
        validate_quadruple(q)
    t = q.grid()
    vals = integrand(q, t)
    defect = _trapezoid(vals)
    series = TrigSeries.from_samples(vals)
    sigma = series.primitive()
    norm = float(np.linalg.norm(defect))
    if norm > PERIOD_TOL:
        warnings.warn(
            f"period defect {norm:.3e}: the generator does not close",
            PeriodDefectWarning,
            stacklevel=2,
        )
    return FrontEvaluator(q, sigma, defect)


# front condition ------------------------------------------------------------


@dataclass(frozen=True)
class FrontCondition:
    t: np.ndarray
    front: np.ndarray
    umbilic: np.ndarray

    @property
    def is_front(self):
        return bool(self.front.all())

    @property
    def umbilic_params(self):
        return self.t[self.umbilic & self.front]

    @property
    def via_umbilic_branch(self):
        return bool(np.any(self.umbilic & self.front))


def front_condition(q, n=None):
    """Pointwise front test: ``nu' != 0``, or ``xi' = nu' = 0`` with ``b != 0``."""
    t = grid(n or q.n_grid)
    xs = np.linalg.norm(q.xi.derivative(t), axis=-1)
    ns = np.linalg.norm(q.nu.derivative(t), axis=-1)
    b = np.abs(q.b(t))
    eps = q.eps
    umb = ns <= eps
    front = ~umb | ((xs <= eps) & umb & (b > eps))
    return FrontCondition(t, front, umb)


# gauge ------------------------------------------------------------------------


def regauge(q, phi):
    """``(a + phi', b + phi mu1, xi, nu)``: the congruent front ``f + phi xi``."""
    t = q.grid()
    return replace(q, a=q.a + phi.derivative(), b=q.b + TrigSeries.from_samples(phi(t) * q.mu1(t)))


# periodicity classes -------------------------------------------------------

ZERO, PI_PERIODIC, ANTI_PERIODIC, NEITHER = "zero", "pi-periodic", "anti-pi-periodic", "neither"


def classify_half_period(func, n, tol=1e-8):
    """Label ``func`` by its behaviour under ``t -> t + pi``; returns (label, residuals)."""
    t = grid(n)[: n // 2]
    g0 = np.asarray(func(t))
    g1 = np.asarray(func(t + np.pi))
    plus = float(np.max(np.abs(g1 - g0)))
    minus = float(np.max(np.abs(g1 + g0)))
    size = float(np.max(np.abs(np.concatenate([g0.ravel(), g1.ravel()]))))
    if size < tol:
        label = ZERO
    elif plus < tol:
        label = PI_PERIODIC
    elif minus < tol:
        label = ANTI_PERIODIC
    else:
        label = NEITHER
    return label, {"periodic": plus, "anti_periodic": minus}


def _is_pi(label):
    return label in (ZERO, PI_PERIODIC)


def _is_anti(label):
    return label in (ZERO, ANTI_PERIODIC)


@dataclass(frozen=True)
class PeriodicityClass:
    labels: dict
    residuals: dict
    covers_nonorientable: bool
    covers_noncoorientable: bool
    quotient_coorientable: Optional[bool]
    quotient_orientable: Optional[bool]

    @property
    def plain(self):
        return not (self.covers_nonorientable or self.covers_noncoorientable)

    @property
    def orientable(self):
        """Orientability of the quotient surface (the front itself if plain)."""
        if self.covers_nonorientable:
            return False
        if self.covers_noncoorientable:
            return bool(self.quotient_orientable)
        return True

    @property
    def co_orientable(self):
        if self.covers_noncoorientable:
            return False
        if self.covers_nonorientable:
            return bool(self.quotient_coorientable)
        return True

    def to_dict(self):
        return {
            "labels": dict(self.labels),
            "residuals": dict(self.residuals),
            "covers_nonorientable": self.covers_nonorientable,
            "covers_noncoorientable": self.covers_noncoorientable,
            "quotient_coorientable": self.quotient_coorientable,
            "quotient_orientable": self.quotient_orientable,
            "plain": self.plain,
            "orientable": self.orientable,
            "co_orientable": self.co_orientable,
        }


def periodicity_class(q, tol=1e-8):
    """Which double-cover structure, if any, the data on R/2piZ descends along.

    The identically-zero function is both pi-periodic and anti-pi-periodic and
    is labelled ``zero``; it satisfies whichever requirement is asked of it.
    """
    n = q.n_grid + (q.n_grid % 2)
    labels, residuals = {}, {}
    for name, func in (("xi", q.xi), ("nu", q.nu), ("a", q.a), ("b", q.b)):
        labels[name], residuals[name] = classify_half_period(func, n, tol)
    xi, nu, a, b = (labels[k] for k in ("xi", "nu", "a", "b"))
    covers_nonori = _is_anti(xi) and _is_anti(a) and xi != ZERO
    covers_noncoori = _is_anti(nu) and nu != ZERO
    coori = None
    if covers_nonori:
        if _is_pi(nu) and _is_anti(b):
            coori = True
        elif _is_anti(nu) and _is_pi(b):
            coori = False
    ori = None
    if covers_noncoori:
        if _is_pi(xi) and _is_pi(a) and _is_anti(b):
            ori = True
        elif _is_anti(xi) and _is_anti(a) and _is_pi(b):
            ori = False
    return PeriodicityClass(labels, residuals, covers_nonori, covers_noncoori, coori, ori)
