import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eikdg.mesh import gen_annulus, gen_channel_sinusoidal, gen_square_hmesh
from eikdg.residual import Discretization
from eikdg.verify import (
    DomainError,
    ExactSolution,
    Geometry,
    WallSampler,
    brute_force_distance,
    coupling_defect,
    eikonal_defect,
    exact_distance,
    l2_error,
    observed_rate,
    study_tsv,
    StudyRow,
)


def test_exact_distance_examples():
    assert exact_distance("cylinder", (2.0, 0.0), 0.5) == pytest.approx(1.5)
    assert exact_distance("square", (1.0, 1.0), 0.5) == pytest.approx(math.sqrt(0.5), abs=1e-15)
    assert exact_distance("square", (2.0, 0.0), 0.5) == pytest.approx(1.5)
    assert exact_distance("parallel_walls", (0.3, 0.4), 2.0) == pytest.approx(0.4)
    assert exact_distance("parallel_walls", (0.3, 1.9), 2.0) == pytest.approx(0.1)


def test_exact_distance_domain_errors():
    with pytest.raises(DomainError):
        exact_distance("square", (0.1, 0.2), 0.5)
    with pytest.raises(DomainError):
        exact_distance("cylinder", (0.1, 0.0), 0.5)
    with pytest.raises(ValueError):
        ExactSolution("hexagon", 1.0)


def test_exact_gradient_unit():
    pts = np.array([[2.0, 0.3], [-1.0, 2.0], [0.7, -0.9]])
    for g in (Geometry.CYLINDER, Geometry.SQUARE):
        np.testing.assert_allclose(np.linalg.norm(ExactSolution(g, 0.5).gradient(pts), axis=-1), 1.0)


def test_brute_force_examples():
    ann = gen_annulus(4, 32, 0.5, 10.0, 8)
    assert brute_force_distance(ann, (2.0, 0.0), 10 ** 4 // 32) == pytest.approx(1.5, abs=1e-6)
    ch = gen_channel_sinusoidal(4, 4, 0.0, 1.0, 2.0, 2)
    for p in [(0.4, 0.3), (0.9, 1.7), (0.5, 1.0)]:
        assert brute_force_distance(ch, p, 4096) == pytest.approx(min(p[1], 2 - p[1]), abs=1e-8)


def test_brute_force_agrees_with_square_exact():
    m = gen_square_hmesh(4, 2, 0.5, 5.0)
    ex = ExactSolution("square", 0.5)
    pts = np.random.default_rng(2).uniform(-5, 5, size=(200, 2))
    pts = pts[np.max(np.abs(pts), axis=1) > 0.5]
    bf = WallSampler(m, 1024).query(pts)[0]
    # sample spacing 1/(4*1023) along each wall face
    assert np.abs(bf - ex.distance(pts)).max() < (0.25 / 1023) ** 2 / (2 * 0.01) + 1e-12


@settings(max_examples=20, deadline=None)
@given(x=st.floats(-8, 8), y=st.floats(-8, 8), k=st.integers(2, 64))
def test_more_samples_never_increase_distance(x, y, k):
    m = gen_square_hmesh(2, 1, 0.5, 9.0)
    assert brute_force_distance(m, (x, y), 2 * k - 1) <= brute_force_distance(m, (x, y), k) + 1e-15


def channel_disc(N=3):
    return Discretization.build(gen_channel_sinusoidal(3, 4, 0.0, 1.0, 2.0, 2), N)


def test_l2_error_examples():
    disc = channel_disc()
    xy = disc.metrics.xy
    ex = ExactSolution("parallel_walls", 2.0)
    s = ex.distance(xy)
    U = np.stack([s, 0 * s, np.where(xy[..., 1] < 1, 1.0, -1.0)], axis=-1)
    # exact is piecewise linear with the kink on an element boundary
    assert l2_error(U, ex, disc).l2 < 1e-13
    U[..., 0] += 1e-3
    rep = l2_error(U, ex, disc)
    assert rep.l2 == pytest.approx(1e-3 * math.sqrt(2.0), rel=1e-12)
    assert rep.linf == pytest.approx(1e-3, rel=1e-9)
    assert rep.l1 == pytest.approx(2e-3, rel=1e-12)
    assert rep.meta["dof"] == disc.E * disc.n ** 2


def test_error_mask_and_defects():
    disc = channel_disc()
    U = np.zeros(disc.shape)
    U[..., 2] = 1.0
    assert eikonal_defect(U, disc) == 0.0
    U[0, ..., 2] = 0.5
    assert eikonal_defect(U, disc) == pytest.approx(0.5)
    mask = np.ones(disc.shape[:3])
    mask[0] = 0
    assert eikonal_defect(U, disc, mask) == 0.0
    assert l2_error(U, np.zeros(disc.shape[:3]), disc, mask).l2 == 0.0
    assert coupling_defect(U, disc) > 0


def test_observed_rate_and_table():
    assert observed_rate(1.0, 0.125) == pytest.approx(3.0)
    rows = [StudyRow("cylinder", 2, 9, 36, 1e-2, 2e-2, None, True, 1e-11),
            StudyRow("cylinder", 2, 36, 144, 1e-3, 2e-3, 3.3219, True, 1e-11)]
    lines = study_tsv(rows).splitlines()
    assert lines[0].split("\t")[:7] == ["case", "N", "elements", "DOF", "L2", "Linf", "rate"]
    assert lines[1].split("\t")[6] == "" and lines[2].split("\t")[6] == "3.3219"
