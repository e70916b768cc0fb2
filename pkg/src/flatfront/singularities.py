"""Singular locus, pointwise classification and related counts.

The singular set of ``f`` is ``{mu1(t) v + b(t) = 0}``.  Along the non-linear
part (``mu1 != 0``) the singular curve is ``v = -b/mu1`` and the null direction
is ``(1, -a)``, so the cuspidal-edge / swallowtail criteria reduce to the
function ``a - (b/mu1)'`` and its derivative.  Where ``mu1 = 0`` the whole
ruling is singular if also ``b = 0``.
"""

import enum
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import _jets as J
from .errors import EmptySingularLocus, LinearSingularityPresent, NotOnSingularLocus
from .frontal import build_front
from .series import TWO_PI, grid

LOCUS_TOL = 1e-10
CONE_DIAMETER = 1e-8


class SingularClass(str, enum.Enum):
    CUSPIDAL_EDGE = "CuspidalEdge"
    SWALLOWTAIL = "Swallowtail"
    LINEAR_CUSPIDAL_EDGE = "LinearCuspidalEdge"
    DEGENERATE = "Degenerate"
    WHOLE_RULING_SINGULAR = "WholeRulingSingular"

    def __str__(self):
        return self.value


CUSP_CLASSES = (SingularClass.CUSPIDAL_EDGE, SingularClass.LINEAR_CUSPIDAL_EDGE)


@dataclass(frozen=True)
class SingularSample:
    t: float
    v: float
    kind: Optional[SingularClass]
    diagnostics: dict = field(default_factory=dict)

    @property
    def linear(self):
        return self.kind in (SingularClass.LINEAR_CUSPIDAL_EDGE, SingularClass.WHOLE_RULING_SINGULAR) or (
            self.kind is SingularClass.DEGENERATE and self.diagnostics.get("linear", False)
        )

    def to_dict(self):
        return {"t": self.t, "v": self.v, "class": None if self.kind is None else self.kind.value, **self.diagnostics}


@dataclass
class SingularReport:
    samples: list
    cone_point: Optional[np.ndarray] = None
    image_diameter: Optional[float] = None
    noncusp_count: Optional[int] = None
    flags: list = field(default_factory=list)

    @property
    def counts(self):
        c = Counter("Unclassified" if s.kind is None else s.kind.value for s in self.samples)
        return dict(sorted(c.items()))

    @property
    def empty(self):
        return not self.samples

    def of_kind(self, kind):
        return [s for s in self.samples if s.kind == kind]

    def to_dict(self):
        return {
            "counts": self.counts,
            "n_samples": len(self.samples),
            "cone_point": None if self.cone_point is None else self.cone_point.tolist(),
            "image_diameter": self.image_diameter,
            "noncusp_count": self.noncusp_count,
            "flags": list(self.flags),
        }


# zero finding ---------------------------------------------------------------


def _runs(flags):
    """Maximal circular runs of True as (start, length)."""
    n = len(flags)
    if flags.all():
        return [(0, n)]
    if not flags.any():
        return []
    first_false = int(np.argmin(flags))
    rolled = np.roll(flags, -first_false)
    runs, i = [], 0
    while i < n:
        if rolled[i]:
            j = i
            while j < n and rolled[j]:
                j += 1
            runs.append(((i + first_false) % n, j - i))
            i = j
        else:
            i += 1
    return runs


def _refine(func, lo, hi):
    return float(np.mod(brentq(lambda s: float(func(np.array(s))), lo, hi, xtol=1e-14, rtol=1e-15), TWO_PI))


def _extremum(func, dfunc, lo, hi):
    """Point in [lo, hi] where ``|func|`` is smallest, via a root of ``dfunc`` when bracketed."""
    if dfunc is not None:
        d_lo, d_hi = float(dfunc(np.array(lo))), float(dfunc(np.array(hi)))
        if d_lo * d_hi < 0:
            return _refine(dfunc, lo, hi)
    res = minimize_scalar(
        lambda s: float(func(np.array(s))) ** 2, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13}
    )
    return float(np.mod(res.x, TWO_PI))


def zero_events(func, t, vals, mask, tol, dfunc=None):
    """Zeros of a periodic function sampled on the uniform grid ``t``.

    Returns ``("point", t0)`` for isolated zeros (sign changes refined by
    bracketing, or short runs of near-zero samples) and ``("interval", (t0, t1))``
    or ``("all", None)`` for extended near-zero stretches.  Only samples with
    ``mask`` set are considered.
    """
    n = len(t)
    h = TWO_PI / n
    small = mask & (np.abs(vals) <= tol)
    events = []
    for start, length in _runs(small):
        if length == n:
            return [("all", None)]
        if length > 2:
            events.append(("interval", (float(t[start]), float(t[start] + (length - 1) * h))))
            continue
        before, after = (start - 1) % n, (start + length) % n
        idx = [(start + k) % n for k in range(length)]
        best = min(idx, key=lambda i: abs(vals[i]))
        t0 = float(t[best])
        lo = t[start] - h
        if mask[before] and mask[after] and vals[before] * vals[after] < 0 and not small[before] and not small[after]:
            t0 = _refine(func, lo, lo + (length + 1) * h)
        else:
            t0 = _extremum(func, dfunc, lo, lo + (length + 1) * h)
        events.append(("point", t0))
    for i in range(n):
        j = (i + 1) % n
        if mask[i] and mask[j] and not small[i] and not small[j] and vals[i] * vals[j] < 0:
            events.append(("point", _refine(func, t[i], t[i] + h)))
    return events


def touching_zeros(func, dfunc, t, vals, mask, tol, window=1e-2):
    """Double zeros missed by sign-change detection.

    Local minima of ``|vals|`` without a neighbouring sign change are refined
    at a root of ``dfunc`` (or by minimising ``func**2``); those reaching
    ``tol`` are zeros.
    """
    n = len(t)
    h = TWO_PI / n
    mag = np.abs(vals)
    prev, nxt = np.roll(mag, 1), np.roll(mag, -1)
    same = (vals * np.roll(vals, 1) > 0) & (vals * np.roll(vals, -1) > 0)
    scale = max(1.0, float(mag.max()))
    cand = np.nonzero(mask & same & (mag <= prev) & (mag < nxt) & (mag > tol) & (mag < window * scale))[0]
    events = []
    for i in cand:
        s = _extremum(func, dfunc, t[i] - h, t[i] + h)
        if abs(float(func(np.array(s)))) <= tol:
            events.append(("point", s))
    return events


# helpers ------------------------------------------------------------------


def _jets(q, t, order=2):
    """mu1, mu2, a, b and b/mu1 jets (only meaningful where mu1 != 0)."""
    fr = q.frame(t, order)
    a = q.a.jet(t, order)
    b = q.b.jet(t, order)
    return fr, a, b


def _psi(q, t):
    """``a - (b/mu1)'`` and its derivative; the cuspidal-edge discriminant."""
    t = np.asarray(t, dtype=float)
    fr, a, b = _jets(q, t, 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = J.div(b, fr.mu1)
    return a[0] - ratio[1], a[1] - ratio[2], fr, a, b, ratio


# operations ----------------------------------------------------------------


def _classify_nonlinear(q, t):
    """Vectorised classification on rulings with ``mu1 != 0``."""
    eps = q.eps
    t = np.atleast_1d(np.asarray(t, dtype=float))
    d1, d2, fr, a, b, ratio = _psi(q, t)
    mu1, mu2 = fr.mu1[0], fr.mu2[0]
    cusp = (np.abs(mu2) > eps) & (np.abs(d1) > eps)
    swallow = ~cusp & (np.abs(mu2) > eps) & (np.abs(d2) > eps)
    out = []
    for i, ti in enumerate(t):
        kind = (
            SingularClass.CUSPIDAL_EDGE
            if cusp[i]
            else SingularClass.SWALLOWTAIL if swallow[i] else SingularClass.DEGENERATE
        )
        diag = {
            "a": float(a[0][i]),
            "a_prime": float(a[1][i]),
            "mu1": float(mu1[i]),
            "mu2": float(mu2[i]),
            "b_over_mu1_prime": float(ratio[1][i]),
            "b_over_mu1_second": float(ratio[2][i]),
            "linear": False,
        }
        out.append(SingularSample(float(ti), float(-b[0][i] / mu1[i]), kind, diag))
    return out


def classify_singular(q, t0, v0=None):
    """Classify the singular point on the ruling ``t0``.

    ``v0`` defaults to ``-b/mu1`` on non-linear rulings and to 0 on linear
    ones.  Near-threshold values come back as ``Degenerate``.
    """
    eps = q.eps
    fr = q.frame(np.asarray(float(t0)), 1)
    mu1, mu2 = float(fr.mu1[0]), float(fr.mu2[0])
    b = q.b.jet(np.asarray(float(t0)), 1)
    if abs(mu1) > eps:
        sample = _classify_nonlinear(q, t0)[0]
        if v0 is not None and abs(mu1 * v0 + b[0]) > eps * max(1.0, abs(v0)):
            raise NotOnSingularLocus(f"(t, v) = ({t0}, {v0}) is not singular")
        return sample
    if abs(b[0]) > eps:
        raise NotOnSingularLocus(f"ruling t = {t0} is linear (mu1 = 0) but b != 0: it is immersed")
    a = q.a.jet(np.asarray(float(t0)), 1)
    v = 0.0 if v0 is None else float(v0)
    nondeg = v * float(fr.mu1[1]) + float(b[1])
    diag = {
        "a": float(a[0]),
        "a_prime": float(a[1]),
        "mu1": mu1,
        "mu2": mu2,
        "b_over_mu1_prime": None,
        "b_over_mu1_second": None,
        "linear": True,
        "nondegeneracy": nondeg,
    }
    if abs(mu2) > eps and abs(nondeg) > eps:
        kind = SingularClass.LINEAR_CUSPIDAL_EDGE
    else:
        kind = SingularClass.DEGENERATE
    return SingularSample(float(t0), v, kind, diag)


def _linear_rulings(q, t, mu1, bvals, eps):
    lin = np.abs(mu1) <= eps
    found = []
    for kind, where in zero_events(q.b, t, bvals, lin, eps, q.b.derivative()):
        if kind == "point":
            found.append(where)
        elif kind == "interval":
            found.extend(t[(t >= where[0]) & (t <= where[1])])
        else:
            found.extend(t)
    # isolated zeros of mu1 at which b also vanishes
    for kind, where in zero_events(q.mu1, t, mu1, np.ones_like(lin), eps):
        if kind == "point" and abs(q.b(where)) <= eps and not any(abs(where - f) < 1e-9 for f in found):
            found.append(where)
    return sorted(float(x) for x in found)


def _image_stats(q, samples):
    pts = [(s.t, s.v) for s in samples if not s.linear]
    if not pts:
        return None, None
    tt, vv = np.array(pts).T
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        img = build_front(q, validate=False)(tt, vv)
    diam = float(np.linalg.norm(np.ptp(img, axis=0)))
    cone = img.mean(axis=0) if diam < CONE_DIAMETER else None
    return diam, cone


def singular_locus(q, n_samples=None):
    """Grid samples of the singular set, unclassified except for whole rulings."""
    n = n_samples or q.n_grid
    t = grid(n)
    eps = q.eps
    mu1 = q.mu1(t)
    bvals = q.b(t)
    samples = []
    nonlin = np.abs(mu1) > eps
    for ti, m, bv in zip(t[nonlin], mu1[nonlin], bvals[nonlin]):
        samples.append(SingularSample(float(ti), float(-bv / m), None, {}))
    for tr in _linear_rulings(q, t, mu1, bvals, eps):
        samples.append(SingularSample(tr, 0.0, SingularClass.WHOLE_RULING_SINGULAR, {"linear": True}))
    samples.sort(key=lambda s: s.t)
    diam, cone = _image_stats(q, samples)
    return SingularReport(samples, cone, diam)


def _noncusp_events(q, n):
    """Maximal non-cusp components on the non-linear part of the singular curve."""
    t = grid(n)
    eps = q.eps
    d1, _, fr, _, _, _ = _psi(q, t)
    mu1 = fr.mu1[0]
    mu2 = fr.mu2[0]
    mask = np.abs(mu1) > eps
    def psi(s):
        return _psi(q, s)[0]

    def dpsi(s):
        return _psi(q, s)[1]

    def dmu2(s):
        return q.frame(s, 1).mu2[1]

    ev = zero_events(psi, t, d1, mask, eps, dpsi)
    ev += touching_zeros(psi, dpsi, t, d1, mask, eps)
    ev += zero_events(q.mu2, t, mu2, mask, eps, dmu2)
    ev += touching_zeros(q.mu2, dmu2, t, mu2, mask, eps)
    if any(k == "all" for k, _ in ev):
        return [("all", None)]
    intervals = [w for k, w in ev if k == "interval"]
    points = []
    for k, w in ev:
        if k != "point":
            continue
        if any(lo - 1e-9 <= w <= hi + 1e-9 for lo, hi in intervals):
            continue
        if any(abs(np.angle(np.exp(1j * (w - p)))) < 1e-8 for p in points):
            continue
        points.append(w)
    return [("interval", w) for w in intervals] + [("point", p) for p in sorted(points)]


def analyze_singularities(q, n_samples=2048):
    """Classified singular samples plus the refined non-cusp points.

    Grid samples are classified by the pointwise criteria; zeros of the
    discriminant ``a - (b/mu1)'`` (and of ``mu2``) are located by bracketing and
    inserted as their own samples, replacing any grid sample within 1e-9.
    """
    locus = singular_locus(q, n_samples)
    events = _noncusp_events(q, n_samples)
    special = [classify_singular(q, w) for k, w in events if k == "point"]
    samples = list(special)

    def near_special(s):
        return any(abs(np.angle(np.exp(1j * (s.t - p.t)))) < 1e-9 for p in special)

    keep = [s for s in locus.samples if not near_special(s)]
    nonlin = [s.t for s in keep if not s.linear]
    if nonlin:
        samples.extend(_classify_nonlinear(q, nonlin))
    samples.extend(classify_singular(q, s.t, 0.0) for s in keep if s.linear)
    samples.sort(key=lambda s: s.t)
    flags = []
    count = len(events)
    if events and events[0][0] == "all":
        flags.append("singular curve degenerate everywhere")
    elif any(k == "interval" for k, _ in events):
        flags.append("non-cusp intervals counted as single components")
    count += sum(1 for s in samples if s.linear and s.kind not in CUSP_CLASSES)
    return SingularReport(samples, locus.cone_point, locus.image_diameter, count, flags)


def noncusp_count(q, n_samples=2048):
    """Number of connected non-cusp components of the singular set."""
    report = analyze_singularities(q, n_samples)
    if report.empty:
        raise EmptySingularLocus("the front has no singular points")
    return report.noncusp_count


def sign_changes(a, n=4096):
    """Sign changes of a periodic scalar over one period.

    Near-zero stretches are skipped, so touching zeros do not count and a
    flat zero interval between opposite signs counts once.
    """
    vals = a(grid(n))
    tol = 1e-8 * max(1.0, float(np.max(np.abs(vals))))
    signs = np.sign(vals[np.abs(vals) > tol])
    if len(signs) < 2:
        return 0
    return int(np.count_nonzero(signs != np.roll(signs, 1)))


# the Gamma set -------------------------------------------------------------


@dataclass(frozen=True)
class GammaSet:
    deltas: list
    whole_range: bool
    delta_range: tuple
    flags: list = field(default_factory=list)

    def to_dict(self):
        return {
            "deltas": list(self.deltas),
            "whole_range": self.whole_range,
            "delta_range": list(self.delta_range),
            "flags": list(self.flags),
        }


def _gamma_jets(q, t):
    fr, a, b = _jets(q, t, 3)
    ratio_b = J.div(b, fr.mu1)
    ratio_mu = J.div(fr.mu2, fr.mu1)
    base = a[:2] - ratio_b[1:3]
    r = ratio_mu[1:3]
    return base, r


def gamma_discriminant(q, t, delta):
    """``phi_delta`` and ``phi_delta'`` on a grid; ``phi_delta = a - (b/mu1)' - delta (mu2/mu1)'``."""
    base, r = _gamma_jets(q, t)
    delta = np.asarray(delta, dtype=float)[..., None]
    return base[0] - delta * r[0], base[1] - delta * r[1]


def gamma_set(q, delta_range=(-10.0, 10.0), resolution=2048):
    """Parallel distances whose front has a singular point that is neither a
    cuspidal edge nor a swallowtail.

    Parallel fronts share ``a``, ``xi`` and ``nu`` and have ``b + delta mu2``, so
    the bad set is where ``phi = a - (b/mu1)' - delta (mu2/mu1)'`` and ``phi'``
    vanish together.  Eliminating ``delta`` leaves a single function of ``t``,
    ``A r' - A' r``, whose zeros give the candidate ``delta = A/r``.
    """
    t = grid(resolution)
    eps = q.eps
    mu1 = q.mu1(t)
    if np.any(np.abs(mu1) <= eps):
        raise LinearSingularityPresent("mu1 vanishes; the Gamma set is defined for non-linear fronts")
    lo, hi = float(delta_range[0]), float(delta_range[1])
    base, r = _gamma_jets(q, t)
    A, Ap = base
    R, Rp = r
    scale = max(1.0, float(np.max(np.abs(A))), float(np.max(np.abs(Ap))))
    rscale = max(1.0, float(np.max(np.abs(R))), float(np.max(np.abs(Rp))))
    flat = (np.abs(R) + np.abs(Rp)) <= eps * rscale
    if np.any(flat & ((np.abs(A) + np.abs(Ap)) <= eps * scale)):
        return GammaSet([lo, hi], True, (lo, hi), ["every delta in range is degenerate"])

    def psi(s):
        (a0, a1), (r0, r1) = _gamma_jets(q, np.asarray(s, dtype=float))
        return a0 * r1 - a1 * r0

    vals = A * Rp - Ap * R
    tol = eps * scale * rscale
    deltas, flags = [], []
    for kind, where in zero_events(psi, t, vals, ~flat, tol):
        if kind == "all":
            flags.append("A r' - A' r vanishes identically")
            ts = t[~flat]
        elif kind == "interval":
            flags.append("extended zero interval")
            ts = np.array([0.5 * (where[0] + where[1])])
        else:
            ts = np.array([where])
        (a0, a1), (r0, r1) = _gamma_jets(q, ts)
        d = (a0 * r0 + a1 * r1) / (r0 ** 2 + r1 ** 2)
        res = np.abs(a0 - d * r0) + np.abs(a1 - d * r1)
        for di, ri in zip(d, res):
            if ri <= 1e-7 * scale * (1 + abs(di)) and lo <= di <= hi:
                deltas.append(float(di))
    deltas.sort()
    merged = []
    for d in deltas:
        if not merged or abs(d - merged[-1]) > 1e-9 * (1 + abs(d)):
            merged.append(d)
    return GammaSet(merged, False, (lo, hi), flags)
