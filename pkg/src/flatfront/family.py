"""Parallel fronts, caustics, curvature data and completeness verdicts."""

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import _jets as J
from .curves import SphericalCurve, is_convex
from .errors import GridTooCoarse, NonRegularCurve, PeriodConditionViolated, UmbilicDegenerate
from .frontal import PERIOD_TOL, front_condition, integrand, _trapezoid
from .series import TWO_PI, TrigSeries, cross, dot, grid, scalar_times

CLOSED_TOL = 1e-10


def parallel(q, delta):
    """The parallel front ``f + delta nu``: only ``b`` changes, to ``b + delta mu2``."""
    delta = float(delta)
    if delta == 0.0:
        return q
    t = q.grid()
    return q.replace(b=q.b + TrigSeries.from_samples(delta * q.mu2(t), chop=False))


@dataclass(frozen=True, eq=False)
class Caustic:
    quadruple: object
    ruling_constant: bool
    degenerate_line: bool

    @property
    def flags(self):
        out = []
        if self.ruling_constant:
            out.append("caustic ruling direction is constant")
        if self.degenerate_line:
            out.append("caustic degenerates to a line")
        return out


def _require_no_umbilics(q, mu2):
    if np.min(np.abs(mu2)) <= q.eps:
        raise UmbilicDegenerate("mu2 vanishes: the front has umbilic rulings and no caustic")


def caustic(q):
    """Focal surface ``f + rho nu`` as a quadruple.

    The new asymptotic direction ``(mu2 xi - mu1 nu)/r`` and the new normal
    ``eta`` are built from exact products of the raw series, so only ``a`` and
    ``b`` of the caustic are interpolated.
    """
    t = q.grid()
    fr = q.frame(t, 1)
    mu1, mu2 = fr.mu1[0], fr.mu2[0]
    _require_no_umbilics(q, mu2)
    b = q.b.jet(t, 1)
    a = q.a(t)
    ratio = J.div(b, fr.mu2)[1]
    r = np.hypot(mu1, mu2)
    a_c = (a * mu2 + ratio * mu1) / r
    b_c = (-a * mu1 + ratio * mu2) / r

    g, h = q.xi.raw, q.nu.raw
    gh = cross(g, h)
    raw = scalar_times(dot(h.derivative(), gh), g) - scalar_times(dot(g.derivative(), gh), h)
    c_xi = SphericalCurve(raw, q.n_grid)
    eta = SphericalCurve(gh, q.n_grid)
    cq = q.replace(a=TrigSeries.from_samples(a_c), b=TrigSeries.from_samples(b_c), xi=c_xi, nu=eta)
    speed = np.linalg.norm(c_xi.derivative(t), axis=-1)
    const = bool(np.max(speed) <= q.eps)
    line = const and bool(np.max(np.abs(b_c)) <= q.eps)
    return Caustic(cq, const, line)


def curvature_radius(q, t, v):
    """``rho = -(b + v mu1)/mu2``; zero exactly on the singular set."""
    t = np.asarray(t, dtype=float)
    mu2 = q.mu2(t)
    if np.any(np.abs(mu2) <= q.eps):
        raise UmbilicDegenerate("mu2 vanishes: curvature radius undefined on umbilic rulings")
    return -(q.b(t) + np.asarray(v) * q.mu1(t)) / mu2


def lift_metric_coeffs(q, t, v):
    """Coefficients ``(E, F, G)`` of ``df.df + dnu.dnu`` in the ``(t, v)`` chart."""
    t = np.asarray(t, dtype=float)
    a = q.a(t)
    lam = q.b(t) + np.asarray(v) * q.mu1(t)
    E = a ** 2 + lam ** 2 + q.mu2(t) ** 2
    return E, a, np.ones_like(E)


@dataclass(frozen=True)
class CurvatureLine:
    t: np.ndarray
    v: np.ndarray
    closure_defect: float

    @property
    def closed(self):
        return abs(self.closure_defect) < CLOSED_TOL


def curvature_line(q, t0, v0, turns=1, n_per_turn=None):
    """The curvature line ``v' = -a`` through ``(t0, v0)`` over ``turns`` periods.

    Integrated from the series primitive, so the path is exact up to
    rounding.  The closure defect is the change of ``v`` over one turn.
    """
    turns = int(turns)
    n = (n_per_turn or q.n_grid) * max(turns, 1) + 1
    t = float(t0) + np.linspace(0.0, TWO_PI * turns, n)
    prim = q.a.primitive()
    mean = q.a.mean
    v = float(v0) - (prim(t) - prim(float(t0)) + mean * (t - float(t0)))
    return CurvatureLine(t, v, float(-TWO_PI * mean) + 0.0)


@dataclass(frozen=True)
class CompletenessReport:
    is_front: bool
    weakly_complete: bool
    complete: bool
    singular_set_compact: bool
    singular_set_nonempty: bool
    ends_embedded: Optional[bool]
    min_abs_mu1: float
    min_abs_mu2: float
    period_defect_norm: float
    flags: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def completeness_report(q, strict=True):
    """Front, weak completeness, completeness and embedded-ends verdicts.

    Completeness means: a front, closed generator, and a nonempty compact
    singular set.  Compactness fails when some ruling is entirely singular.
    Embeddedness of the ends is decided by convexity of ``xi`` and only
    reported for complete fronts with singularities.
    """
    from .singularities import singular_locus

    t = q.grid()
    defect = float(np.linalg.norm(_trapezoid(integrand(q, t))))
    flags = []
    if defect > PERIOD_TOL:
        if strict:
            raise PeriodConditionViolated(f"period defect {defect:.3e} exceeds {PERIOD_TOL:g}")
        flags.append("generator not closed")
    mu1 = np.abs(q.mu1(t))
    mu2 = np.abs(q.mu2(t))
    fc = front_condition(q)
    is_front = fc.is_front
    if fc.via_umbilic_branch:
        flags.append("front via umbilic branch on some rulings")
    locus = singular_locus(q)
    nonempty = not locus.empty
    whole = any(s.linear for s in locus.samples)
    compact = not whole
    weakly = is_front and defect <= PERIOD_TOL
    if weakly and fc.via_umbilic_branch:
        flags.append("weak completeness includes umbilic rulings")
    complete = weakly and nonempty and compact
    if not nonempty:
        flags.append("singular set empty; completeness criteria not applicable")
    ends = None
    if complete:
        try:
            ends = is_convex(q.xi).convex
        except GridTooCoarse:
            ends = is_convex(q.xi.with_grid(4 * q.n_grid)).convex
        except NonRegularCurve:
            ends = False
            flags.append("Gauss image not regular, hence not convex")
    return CompletenessReport(
        bool(is_front),
        bool(weakly),
        bool(complete),
        bool(compact),
        bool(nonempty),
        ends,
        float(mu1.min()),
        float(mu2.min()),
        defect,
        flags,
    )
