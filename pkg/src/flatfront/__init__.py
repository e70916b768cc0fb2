"""Flat fronts in Euclidean 3-space from their generating quadruples.

A quadruple ``(a dt, b dt, xi, nu)`` on the circle, with ``xi`` and ``nu``
dual spherical curves, determines the developable front
``f(t, v) = sigma(t) + v xi(t)`` with ``sigma' = a xi + b (xi x nu)``.
"""

__version__ = "0.1.0"

from .curves import (
    SpaceCurve,
    SphericalCurve,
    dual_curve,
    geodesic_curvature,
    is_convex,
    spherical_caustic,
    spherical_parallel,
    tangent_indicatrix,
)
from .errors import *  # noqa: F401,F403
from .family import caustic, completeness_report, curvature_line, curvature_radius, lift_metric_coeffs, parallel
from .frontal import (
    Quadruple,
    build_front,
    front_condition,
    period_residual,
    periodicity_class,
    project_period,
    regauge,
    validate_quadruple,
)
from .gallery import GALLERY_NAMES, GallerySpec, gallery_build, rectifying_developable, tangential_developable
from .series import TrigSeries
from .singularities import (
    SingularClass,
    analyze_singularities,
    classify_singular,
    gamma_set,
    noncusp_count,
    sign_changes,
    singular_locus,
)
