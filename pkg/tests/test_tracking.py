"""Strand continuation, fiber solving, and crossing-event detection."""

import numpy as np
import pytest

from curvebraid.config import DEFAULT
from curvebraid.errors import CurveBraidError, DegenerateLeadingCoeff
from curvebraid.poly import BivariatePoly
from curvebraid.roots import root_clusters, roots_univariate
from curvebraid.tracking import PlanePath, crossings, fiber_at, track_path

F = BivariatePoly.from_term_list([(0, 3, 1.0), (0, 1, -3.0), (4, 0, 2.0)])

# a path from 0 to 1.2 that detours around the branch point at z=1
DETOUR = PlanePath([0, 0.9, 0.9 + 0.15j, 1.2 + 0.15j, 1.2])


def test_plane_path_parameterization():
    p = PlanePath([0, 1, 1 + 1j])
    assert abs(p.point(0.0)) < 1e-15
    assert abs(p.point(0.5) - 1.0) < 1e-12
    assert abs(p.point(1.0) - (1 + 1j)) < 1e-15
    assert abs(p.length - 2.0) < 1e-15


def test_plane_path_min_distance():
    p = PlanePath([0, 2])
    assert abs(p.min_distance([1 + 1j]) - 1.0) < 1e-12
    assert abs(p.min_distance([3.0]) - 1.0) < 1e-12


def test_fiber_at_origin():
    w = fiber_at(F, 0.0)
    s = np.sqrt(3)
    np.testing.assert_allclose(sorted(x.real for x in w), [-s, 0, s], atol=1e-9)
    assert np.abs(np.asarray(w).imag).max() < 1e-9


def test_fiber_cluster_positions_at_branch_points():
    # z^4 = 1: fiber is (w-1)^2 (w+2), double root at sorted slots (2, 3)
    w = fiber_at(F, 1.0)
    np.testing.assert_allclose([x.real for x in w], [-2, 1, 1], atol=1e-7)
    # z^4 = -1: fiber is (w+1)^2 (w-2), double root at sorted slots (1, 2)
    z = np.exp(1j * np.pi / 4)
    w = fiber_at(F, z)
    np.testing.assert_allclose([x.real for x in w], [-1, -1, 2], atol=1e-7)


def test_fiber_degenerate_leading_coeff():
    g = BivariatePoly.from_term_list([(1, 2, 1.0), (0, 0, 1.0)])  # z w^2 + 1
    with pytest.raises(DegenerateLeadingCoeff):
        fiber_at(g, 0.0)


def test_track_path_endpoint_matches_direct_solve():
    sheet = track_path(F, DETOUR)
    direct = roots_univariate(F.univariate_in_w(1.2))
    end = sorted(sheet.strands[-1], key=lambda w: (w.real, w.imag))
    np.testing.assert_allclose(
        np.asarray(end), np.asarray(direct), atol=1e-7
    )


def test_track_path_reversal_returns_start_fiber():
    there = track_path(F, DETOUR)
    back = track_path(F, DETOUR.reversed())
    np.testing.assert_allclose(
        np.sort_complex(there.strands[0]), np.sort_complex(back.strands[-1]),
        atol=1e-7,
    )


def test_track_through_branch_point_fails():
    # the straight path passes through the branch point z=1
    with pytest.raises(CurveBraidError):
        track_path(F, PlanePath([0.0, 1.2]))


def test_single_crossing_around_simple_branch_point():
    # small positive loop around z=1: the colliding pair sits at sorted
    # positions (2,3), so the local monodromy contributes one letter s2
    loop = PlanePath.circle(1.0, 0.1, samples=64, phase=np.pi / 2)
    ev = crossings(track_path(F, loop))
    assert len(ev) == 1
    assert ev[0][1] == 2
    assert ev[0][2] == 1


def test_single_crossing_label_one_branch_point():
    loop = PlanePath.circle(np.exp(1j * np.pi / 4), 0.1, samples=64,
                            phase=np.pi / 2)
    ev = crossings(track_path(F, loop))
    assert len(ev) == 1
    assert ev[0][1] == 1
    assert ev[0][2] == 1


def test_crossings_concatenation_consistency():
    # events of a concatenated path = union of the pieces' events
    a = PlanePath([0.2 + 0.9j, 1.3 + 0.9j])
    b = PlanePath([1.3 + 0.9j, 1.3 + 0.2j])
    ab = PlanePath([0.2 + 0.9j, 1.3 + 0.9j, 1.3 + 0.2j])
    seq = [e[1:] for e in crossings(track_path(F, a))] + \
          [e[1:] for e in crossings(track_path(F, b))]
    seq_ab = [e[1:] for e in crossings(track_path(F, ab))]
    assert seq == seq_ab


def test_sheet_at_interpolates():
    sheet = track_path(F, DETOUR)
    w = sheet.at(0.5)
    z = DETOUR.point(0.5)
    direct = roots_univariate(F.univariate_in_w(z))
    d = np.abs(np.asarray(w)[None, :] - np.asarray(direct)[:, None])
    assert d.min(axis=1).max() < 1e-7
