import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flatfront import (
    EmptySingularLocus,
    LinearSingularityPresent,
    NotOnSingularLocus,
    Quadruple,
    SingularClass,
    TrigSeries,
    analyze_singularities,
    classify_singular,
    dual_curve,
    gallery_build,
    gamma_set,
    noncusp_count,
    sign_changes,
    singular_locus,
)
from flatfront.series import grid
from flatfront.singularities import _gamma_jets, gamma_discriminant, zero_events

from helpers import cos_latitude_front, perturbed_latitude, random_closed_quadruple

SWALLOW = SingularClass.SWALLOWTAIL
CUSP = SingularClass.CUSPIDAL_EDGE


def test_locus_examples():
    rep = singular_locus(cos_latitude_front())
    assert len(rep.samples) == 1024 and all(s.v == 0.0 for s in rep.samples)
    cone = singular_locus(gallery_build("cone"))
    assert np.allclose(cone.cone_point, 0) and cone.image_diameter < 1e-9
    assert singular_locus(gallery_build("plane")).empty


@given(st.integers(0, 10_000))
def test_samples_lie_on_singular_set(seed):
    rng = np.random.default_rng(seed)
    xi = perturbed_latitude(eps=0.05)
    q = Quadruple(TrigSeries(0, [0, 1.0], []), TrigSeries(rng.normal(), rng.normal(size=3), []), xi, dual_curve(xi).curve)
    for s in analyze_singularities(q, 256).samples:
        assert abs(q.mu1(s.t) * s.v + q.b(s.t)) < 1e-10


def test_classification_examples():
    q = cos_latitude_front()
    assert classify_singular(q, 0.0).kind is CUSP
    s = classify_singular(q, np.pi / 4)
    assert s.kind is SWALLOW and s.diagnostics["a_prime"] == pytest.approx(-2.0)
    cone = gallery_build("cone")
    assert all(classify_singular(cone, t).kind is SingularClass.DEGENERATE for t in (0.0, 1.0, 4.0))


def test_not_on_locus():
    with pytest.raises(NotOnSingularLocus):
        classify_singular(cos_latitude_front(), 0.3, v0=1.0)
    with pytest.raises(NotOnSingularLocus):
        classify_singular(gallery_build("plane"), 0.3)


def test_linear_singular_points_of_cardioid_cylinder():
    q = gallery_build("cardioid_cylinder")
    rep = analyze_singularities(q)
    assert rep.counts == {"LinearCuspidalEdge": 2}
    ts = sorted(s.t for s in rep.samples)
    assert np.allclose(ts, [np.pi / 4, 5 * np.pi / 4], atol=1e-10)
    assert all(abs(q.mu1(t)) < 1e-12 for t in ts)
    assert rep.noncusp_count == 0


def _brute_swallowtails(q, n=8192):
    """Sign changes of a - (b/mu1)' on a dense grid, independent of refinement."""
    t = grid(n)
    fr = q.frame(t, 1)
    b = q.b.jet(t, 1)
    ratio_prime = (b[1] * fr.mu1[0] - b[0] * fr.mu1[1]) / fr.mu1[0] ** 2
    psi = q.a(t) - ratio_prime
    idx = np.nonzero(np.sign(psi) != np.sign(np.roll(psi, -1)))[0]
    return t[idx] + np.pi / n


@pytest.mark.parametrize("n", [2, 3, 4])
def test_swallowtail_count_against_dense_scan(n):
    q = cos_latitude_front(n=n)
    rep = analyze_singularities(q)
    swallow = sorted(s.t for s in rep.samples if s.kind is SWALLOW)
    assert len(swallow) == 2 * n
    expected = (np.pi / 2 + np.pi * np.arange(2 * n)) / n
    assert np.allclose(swallow, expected, atol=1e-10)
    brute = _brute_swallowtails(q)
    assert len(brute) == 2 * n
    assert np.allclose(np.sort(brute), expected, atol=2 * np.pi / 8192)
    assert rep.counts["Swallowtail"] + rep.counts["CuspidalEdge"] == len(rep.samples)
    assert noncusp_count(q) == 2 * n


def test_counts_sum_to_samples():
    rep = analyze_singularities(gallery_build("tangential_example54"))
    assert sum(rep.counts.values()) == len(rep.samples)
    assert rep.counts == {"CuspidalEdge": len(rep.samples)}
    assert noncusp_count(gallery_build("tangential_example54")) == 0


def test_cone_counts_one_component():
    rep = analyze_singularities(gallery_build("cone"))
    assert set(rep.counts) == {"Degenerate"}
    assert rep.noncusp_count == 1 and rep.flags


def test_empty_locus_raises():
    with pytest.raises(EmptySingularLocus):
        noncusp_count(gallery_build("plane"))


def test_sign_changes():
    assert sign_changes(TrigSeries(0, [0, 1.0], [])) == 4
    assert sign_changes(TrigSeries(0, [1.0], [])) == 2
    assert sign_changes(TrigSeries.zero()) == 0
    # touching zero: cos^2 t - never changes sign
    assert sign_changes(TrigSeries(0.5, [0, 0.5], [])) == 0


def test_zero_events_flat_interval():
    def f(s):
        return np.sin(s) * (np.abs(np.mod(s, 2 * np.pi) - np.pi) >= 0.5)

    t = grid(64)
    ev = zero_events(f, t, f(t), np.ones(64, bool), 1e-12)
    assert sorted(k for k, _ in ev) == ["interval", "point"]


@given(st.integers(0, 10_000))
def test_classification_invariant_under_symmetry(seed):
    # (a, b, xi, nu) -> (a, b, -xi, -nu) with b = 0 gives the same classes
    q = random_closed_quadruple(np.random.default_rng(seed), n_grid=512)
    r1 = analyze_singularities(q, 512)
    r2 = analyze_singularities(q.flipped(), 512)
    assert [s.kind for s in r1.samples] == [s.kind for s in r2.samples]
    assert np.allclose([s.t for s in r1.samples], [s.t for s in r2.samples])


# Gamma set -------------------------------------------------------------------


def test_gamma_set_cos_latitude_empty():
    g = gamma_set(cos_latitude_front())
    assert g.deltas == [] and not g.whole_range


def test_gamma_set_cone_whole_range():
    g = gamma_set(gallery_build("cone"), (-3.0, 5.0))
    assert g.whole_range and g.deltas == [-3.0, 5.0]


def test_gamma_set_linear_rejected():
    with pytest.raises(LinearSingularityPresent):
        gamma_set(gallery_build("cardioid_cylinder"))


def _brute_gamma(q, deltas, nt):
    t = grid(nt)
    (A, Ap), (R, Rp) = _gamma_jets(q, t)

    def changes(x0, x1):
        c = np.stack([x0, np.roll(x0, -1), x1, np.roll(x1, -1)])
        return (c.min(0) <= 0) & (c.max(0) >= 0)

    cells = []
    for d0, d1 in zip(deltas[:-1], deltas[1:]):
        hit = changes(A - d0 * R, A - d1 * R) & changes(Ap - d0 * Rp, Ap - d1 * Rp)
        if hit.any():
            cells.append((d0, d1))
    return cells


def test_gamma_set_against_brute_force_scan():
    xi = perturbed_latitude()
    q = Quadruple(TrigSeries(0, [0, 1.0], []), TrigSeries.zero(), xi, dual_curve(xi).curve)
    g = gamma_set(q, (-10.0, 10.0), 2048)
    assert len(g.deltas) > 0
    cells = _brute_gamma(q, np.linspace(-10, 10, 4 * 512), 4 * 2048)
    assert len(cells) == len(g.deltas)
    for d, (lo, hi) in zip(g.deltas, cells):
        assert lo - 1e-9 <= d <= hi + 1e-9
    # at each reported delta the discriminant and its derivative vanish together
    t = grid(8192)
    for d in g.deltas:
        phi, dphi = gamma_discriminant(q, t, d)
        i = np.argmin(np.abs(phi) + np.abs(dphi))
        assert abs(phi[i]) < 1e-3 and abs(dphi[i]) < 1e-2


def test_gamma_set_degenerates_parallel_front():
    from flatfront import parallel

    xi = perturbed_latitude()
    q = Quadruple(TrigSeries(0, [0, 1.0], []), TrigSeries.zero(), xi, dual_curve(xi).curve)
    d = gamma_set(q).deltas[0]
    rep = analyze_singularities(parallel(q, d), 4096)
    kinds = {s.kind for s in rep.samples}
    assert SingularClass.DEGENERATE in kinds
