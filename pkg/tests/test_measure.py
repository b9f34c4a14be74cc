import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bessel_j0_series
from spinbound.errors import DegenerateInputError, ResolutionError
from spinbound.measure import (ClosedFormCircle, CurveDelta, Density,
                               SampledCurve, Segment, Sum, curvature_min,
                               decay_scan, form_bound_check, fourier,
                               fourier_batch, fourier_grid, fourier_matrix,
                               segment_nondecay_direction, total_mass)

momenta = st.tuples(st.floats(-10, 10), st.floats(-10, 10))


def unit_segment():
    return CurveDelta(Segment((0.0, 0.0), (1.0, 0.0)), weight=-1.0)


# ---------------------------------------------------------------------------
# transforms against closed forms


def test_circle_transform_is_bessel(circle_measure):
    rng = np.random.default_rng(0)
    pts = rng.uniform(-7, 7, size=(50, 2))
    got = fourier_batch(circle_measure, pts)
    want = -bessel_j0_series(np.hypot(pts[:, 0], pts[:, 1]))
    assert np.max(np.abs(got - want)) < 1e-10


def test_offcenter_circle_transform():
    nu = CurveDelta(ClosedFormCircle((0.5, -1.0), 2.0), weight=-1.0)
    p = np.array([1.2, 0.7])
    want = -2.0 * bessel_j0_series(2.0 * np.hypot(*p)) * np.exp(
        -1j * (p[0] * 0.5 + p[1] * -1.0))
    assert abs(fourier(nu, p) - want) < 1e-10


def test_segment_transform_closed_form():
    nu = unit_segment()
    for px, py in [(3.0, 0.0), (3.0, 5.0), (0.7, -2.0)]:
        want = -(1.0 / (2.0 * np.pi)) * np.exp(-0.5j * px) * np.sinc(px / (2 * np.pi))
        assert abs(fourier(nu, (px, py)) - want) < 1e-12


def test_gaussian_density_transform(gaussian_well):
    pts = np.array([[0.0, 0.0], [1.0, 2.0], [-3.0, 0.5]])
    got = fourier_batch(gaussian_well, pts)
    want = -2.0 * np.exp(-0.5 * np.sum(pts ** 2, axis=1))
    assert np.max(np.abs(got - want)) < 1e-12


def test_total_mass_examples(circle_measure, gaussian_well):
    assert total_mass(circle_measure) == pytest.approx(-2.0 * np.pi, rel=1e-12)
    assert total_mass(unit_segment()) == pytest.approx(-1.0, rel=1e-12)
    assert total_mass(gaussian_well) == pytest.approx(-4.0 * np.pi, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(momenta)
def test_hermitian_symmetry(p):
    nu = CurveDelta(ClosedFormCircle((0.3, 0.1), 1.0), weight=-1.0)
    assert abs(fourier(nu, (-p[0], -p[1])) - np.conj(fourier(nu, p))) < 1e-12


def test_sum_linearity(circle_measure, gaussian_well):
    combined = Sum([circle_measure, gaussian_well])
    rng = np.random.default_rng(5)
    pts = rng.uniform(-4, 4, size=(10, 2))
    got = fourier_batch(combined, pts)
    want = fourier_batch(circle_measure, pts) + fourier_batch(gaussian_well, pts)
    assert np.max(np.abs(got - want)) < 1e-12
    assert combined.nonpositive


def test_normalization(circle_measure, gaussian_well):
    for nu in (circle_measure, gaussian_well, unit_segment()):
        mass = total_mass(nu)
        assert 2.0 * np.pi * fourier(nu, (0.0, 0.0)) == pytest.approx(mass, rel=1e-10)


def test_quadrature_convergence(circle_measure):
    # appending a far momentum forces a finer node rule for the whole batch;
    # the values at the original momenta must be unaffected
    for p in [(1.0, 0.0), (0.0, 5.0), (7.0, 7.0)]:
        coarse = fourier_batch(circle_measure, [p])[0]
        fine = fourier_batch(circle_measure, [p, (40.0, 0.0)])[0]
        assert abs(coarse - fine) < 1e-9


def test_fourier_grid_matches_batch(circle_measure, gaussian_well):
    px = np.linspace(-2, 2, 5)
    py = np.linspace(-1, 3, 4)
    pts = np.array([(x, y) for x in px for y in py])
    for nu in (circle_measure, gaussian_well, Sum([circle_measure, gaussian_well])):
        grid = fourier_grid(nu, px, py)
        batch = fourier_batch(nu, pts).reshape(5, 4)
        assert np.max(np.abs(grid - batch)) < 1e-10


def test_resolution_cap(circle_measure):
    with pytest.raises(ResolutionError):
        fourier(circle_measure, (1e6, 0.0))


# ---------------------------------------------------------------------------
# fourier_matrix / Bochner


def test_fourier_matrix_gaussian_example():
    nu = Density(lambda x, y: -np.exp(-0.5 * (x * x + y * y)),
                 (-8.0, 8.0, -8.0, 8.0))
    m = fourier_matrix(nu, [(1.0, 0.0), (-1.0, 0.0)])
    want = np.array([[-1.0, -np.exp(-2.0)], [-np.exp(-2.0), -1.0]])
    assert np.max(np.abs(m - want)) < 1e-10
    eig = np.linalg.eigvalsh(m)
    assert eig[-1] == pytest.approx(-1.0 + np.exp(-2.0), abs=1e-10)
    assert eig[-1] < 0


def test_fourier_matrix_single_negative_mass(circle_measure):
    m = fourier_matrix(circle_measure, [(1.0, 0.0)])
    assert m.shape == (1, 1)
    assert m[0, 0].real < 0


def test_bochner_semidefinite(circle_measure, gaussian_well):
    rng = np.random.default_rng(11)
    for nu in (circle_measure, gaussian_well, Sum([circle_measure, gaussian_well]),
               unit_segment()):
        assert nu.nonpositive
        pts = rng.uniform(-3, 3, size=(5, 2))
        m = fourier_matrix(nu, pts)
        lam = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        assert lam[-1] <= 1e-10 * max(1.0, np.linalg.norm(m))


# ---------------------------------------------------------------------------
# decay scans


def test_circle_decay(circle_measure):
    for k in range(8):
        prof = decay_scan(circle_measure, 2.0 * np.pi * k / 8.0, 60.0, 96)
        assert prof.classification == "decaying"
        assert prof.fitted_slope <= -0.4


def test_segment_nondecaying_direction():
    prof = decay_scan(unit_segment(), np.pi / 2.0, 40.0, 64)
    assert prof.classification == "non_decaying"
    level = np.mean(prof.magnitudes[len(prof.magnitudes) // 2:])
    assert level == pytest.approx(1.0 / (2.0 * np.pi), abs=1e-8)


def test_segment_decaying_direction():
    prof = decay_scan(unit_segment(), 0.0, 200.0, 128)
    assert prof.classification == "decaying"
    assert prof.fitted_slope == pytest.approx(-1.0, abs=0.15)


def test_segment_nondecay_direction_examples():
    assert segment_nondecay_direction(Segment((0, 0), (1, 0))) == pytest.approx(np.pi / 2)
    assert segment_nondecay_direction(Segment((0, 0), (1, 1))) == pytest.approx(3 * np.pi / 4)
    assert segment_nondecay_direction(Segment((0, 0), (0, 1))) == pytest.approx(0.0)
    with pytest.raises(DegenerateInputError):
        Segment((1.0, 1.0), (1.0, 1.0))


# ---------------------------------------------------------------------------
# curvature


def test_curvature_examples():
    assert curvature_min(ClosedFormCircle((0, 0), 2.0)) == pytest.approx(0.5, abs=1e-9)
    assert curvature_min(Segment((0, 0), (1, 0))) == pytest.approx(0.0, abs=1e-12)
    t = np.linspace(0.0, 2.0 * np.pi, 801)
    ellipse = SampledCurve(np.column_stack([2.0 * np.cos(t), np.sin(t)]), closed=True)
    assert curvature_min(ellipse) == pytest.approx(0.25, abs=1e-3)


# ---------------------------------------------------------------------------
# form bound falsification


def test_form_bound_zero_measure():
    zero = CurveDelta(ClosedFormCircle((0, 0), 1.0), weight=0.0)
    rep = form_bound_check(zero, 0.5, 1.0)
    assert rep.worst_ratio == 0.0 and not rep.violated


def test_form_bound_circle(circle_measure):
    assert not form_bound_check(circle_measure, 0.5, 50.0).violated
    assert form_bound_check(circle_measure, 1e-6, 1e-6).violated
