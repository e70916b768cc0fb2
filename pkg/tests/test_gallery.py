import numpy as np
import pytest

from flatfront import (
    GALLERY_NAMES,
    InvalidParameter,
    SingularClass,
    SpaceCurve,
    TrigSeries,
    analyze_singularities,
    build_front,
    front_condition,
    gallery_build,
    rectifying_developable,
    singular_locus,
    tangential_developable,
    validate_quadruple,
)

CURVE_PARAMS = {"cos": [[1, 0, 0], [0, 0, 0.3]], "sin": [[0, 1, 0], [0, 0, 0]]}


def _build(name):
    if name.endswith("_custom"):
        return gallery_build(name, curve=CURVE_PARAMS)
    return gallery_build(name)


@pytest.mark.parametrize("name", GALLERY_NAMES)
def test_every_entry_validates(name):
    q = _build(name)
    report = validate_quadruple(q)
    assert report.passed and max(report.residuals.values()) < 1e-9


def test_cone_singular_set_is_the_apex():
    q = gallery_build("cone")
    locus = singular_locus(q)
    assert locus.cone_point is not None
    assert np.allclose(locus.cone_point, 0.0, atol=1e-12)
    assert np.all([abs(s.v) < 1e-12 for s in locus.samples])


def test_cardioid_has_linear_rulings():
    q = gallery_build("cardioid_cylinder")
    rep = analyze_singularities(q)
    linear = [s for s in rep.samples if s.linear]
    assert linear
    assert all(s.kind in (SingularClass.LINEAR_CUSPIDAL_EDGE, SingularClass.DEGENERATE) for s in linear)


def test_tangential_singular_set_is_the_curve():
    q = gallery_build("tangential_example54")
    locus = singular_locus(q)
    assert len(locus.samples) == q.n_grid
    assert max(abs(s.v) for s in locus.samples) < 1e-12
    f = build_front(q)
    t = q.grid()[::50]
    c = np.stack([(4 + np.cos(2 * t)) * np.cos(t), (4 + np.cos(2 * t)) * np.sin(t), np.sin(2 * t)], -1)
    diff = f(t, 0.0) - c
    assert np.max(np.abs(diff - diff[0])) < 1e-9


def test_planar_circle_tangential_is_not_a_front():
    circle = SpaceCurve(TrigSeries(np.zeros(3), [[1, 0, 0]], [[0, 1, 0]]))
    q = tangential_developable(circle)
    assert not front_condition(q).is_front


def test_rectifying_developable_of_space_curve():
    q = gallery_build("rectifying_custom", curve=CURVE_PARAMS)
    assert validate_quadruple(q).passed
    # nu is the principal normal, orthogonal to the tangent of the curve
    t = q.grid()[::40]
    c = SpaceCurve(TrigSeries(np.zeros(3), CURVE_PARAMS["cos"], CURVE_PARAMS["sin"]))
    tangent = c.jet(t, 1)[1]
    assert np.max(np.abs(np.sum(tangent * q.nu(t), axis=-1))) < 1e-9
    assert np.max(np.abs(np.sum(q.xi(t) * q.nu(t), axis=-1))) < 1e-12


def test_helix_rectifying_developable_is_a_cylinder():
    helix = SpaceCurve(TrigSeries(np.zeros(3), [[1, 0, 0]], [[0, 1, 0]]), drift=[0, 0, 0.5])
    q = rectifying_developable(helix)
    t = q.grid()
    assert np.allclose(q.xi(t), q.xi(t)[0], atol=1e-12)
    assert np.max(np.abs(q.mu1(t))) < 1e-12
    assert singular_locus(q).empty


@pytest.mark.parametrize(
    "name, params",
    [
        ("nope", {}),
        ("cone", {"phi": 2.0}),
        ("circle_cos_n", {"n": 1}),
        ("cone", {"bogus": 1}),
        ("rectifying_custom", {}),
        ("tangential_custom", {"curve": {"cos": [[1, 0]]}}),
    ],
)
def test_invalid_parameters(name, params):
    with pytest.raises(InvalidParameter):
        gallery_build(name, **params)
