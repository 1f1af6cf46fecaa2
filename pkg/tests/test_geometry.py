"""Branch points, coincidence-graph tracing, and region decomposition."""

import numpy as np
import pytest

from curvebraid.config import DEFAULT
from curvebraid.errors import NonTransversal
from curvebraid.geometry import (
    branch_points,
    loop_edge_sequence,
    region_decomposition,
    trace_bplus,
)
from curvebraid.poly import BivariatePoly
from curvebraid.tracking import PlanePath, fiber_at

F = BivariatePoly.from_term_list([(0, 3, 1.0), (0, 1, -3.0), (4, 0, 2.0)])


def test_branch_points_fixture(branch):
    pts = branch.as_array()
    assert pts.size == 8
    assert np.abs(pts**8 - 1).max() <= 1e-9
    assert all(branch.simple)


def test_branch_points_parabola():
    g = BivariatePoly.from_term_list([(0, 2, 1.0), (1, 0, -1.0)])  # w^2 - z
    b = branch_points(g)
    assert len(b.points) == 1
    assert abs(b.points[0]) < 1e-9


def test_branch_points_empty():
    g = BivariatePoly.from_term_list([(0, 2, 1.0), (0, 0, -1.0)])  # w^2 - 1
    b = branch_points(g)
    assert b.points == []


def test_bplus_eight_arcs_with_labels(bplus):
    assert len(bplus.arcs) == 8
    for arc in bplus.arcs:
        assert arc.start_branch is not None
        z4 = arc.start_branch**4
        expect = 2 if abs(z4 - 1) < 1e-6 else 1
        assert abs(z4**2 - 1) < 1e-6
        assert arc.label == expect


def test_bplus_arc_points_are_coincidences(bplus):
    for arc in bplus.arcs:
        mid = arc.points[len(arc.points) // 2]
        w = fiber_at(F, mid)
        i = arc.label - 1
        assert abs(w[i].real - w[i + 1].real) <= 1e-6


def test_bplus_empty_for_constant_discriminant_fibers():
    g = BivariatePoly.from_term_list([(0, 2, 1.0), (0, 0, -1.0)])  # w^2 - 1
    b = trace_bplus(g, (-1, 1, -1, 1))
    assert b.arcs == []


def test_region_combinatorics_fixture(rmap):
    assert len(rmap.regions) == 4
    assert len(rmap.edges) == 5
    assert len(rmap.branch_terminals) == 2
    interior = [e for e in rmap.edges if not e.terminal]
    assert [e.label for e in interior] == [2, 2, 2]
    assert sorted(lab for _, _, lab in rmap.branch_terminals) == [1, 1]


def test_region_chain_structure(rmap):
    # interior edges form a chain visiting all four regions, and the two
    # terminal regions are the chain's endpoints
    interior = [e for e in rmap.edges if not e.terminal]
    forward = {e.from_region: e.to_region for e in interior}
    starts = set(forward) - set(forward.values())
    assert len(starts) == 1
    order = [starts.pop()]
    while order[-1] in forward:
        order.append(forward[order[-1]])
    assert len(order) == 4
    term_regions = sorted(r for _, r, _ in rmap.branch_terminals)
    assert term_regions == sorted([order[0], order[-1]])


def test_region_disjoint_disc(bplus, spec):
    loop = PlanePath.circle(0.0, 0.25, samples=64)
    rm = region_decomposition(bplus, loop, f=spec.f, cfg=spec.cfg)
    assert len(rm.regions) == 1
    assert rm.edges == []
    assert rm.branch_terminals == []


def test_region_single_branch_point_disc(bplus, spec):
    # non-convex disc containing z=1 whose boundary crosses the outgoing
    # ray twice: one terminal stub plus one pass-through chord
    verts = [
        0.9 - 0.15j, 1.45 - 0.15j, 1.45 + 0.1j, 1.3 + 0.1j,
        1.3 - 0.05j, 1.15 - 0.05j, 1.15 + 0.1j, 0.9 + 0.1j,
    ]
    loop = PlanePath(verts, closed=True)
    rm = region_decomposition(bplus, loop, f=spec.f, cfg=spec.cfg)
    assert len(rm.regions) == 2
    assert len(rm.edges) == 2
    assert len(rm.branch_terminals) == 1
    b, _, lab = rm.branch_terminals[0]
    assert abs(b - 1.0) < 1e-6
    assert lab == 2


def test_region_rejects_boundary_through_branch_point(bplus, spec):
    loop = PlanePath.circle(1.0, 0.2, samples=4)  # square through z=1±0.2
    # shift so one vertex sits on the branch point
    loop = PlanePath(loop.vertices - 0.2, closed=True)
    with pytest.raises(NonTransversal):
        region_decomposition(bplus, loop, f=spec.f, cfg=spec.cfg)


def test_loop_edge_sequence_contractible(rmap):
    rep = rmap.rep_points[0]
    loop = PlanePath.circle(rep, 1e-3, samples=16)
    assert loop_edge_sequence(rmap, loop) == []


def test_loop_edge_sequence_fixture_boundary(rmap, spec):
    # the disc boundary pushed slightly inward crosses every interior edge
    # twice, in opposite directions, and each terminal stub once
    ring = rmap.disc.buffer(-0.01).exterior
    inner = PlanePath([complex(x, y) for x, y in ring.coords[:-1]],
                      closed=True)
    seq = loop_edge_sequence(rmap, inner)
    counts = {}
    net = {}
    for ei, d in seq:
        counts[ei] = counts.get(ei, 0) + 1
        net[ei] = net.get(ei, 0) + d
    for ei, e in enumerate(rmap.edges):
        if e.terminal:
            assert counts.get(ei, 0) == 1
        else:
            assert counts.get(ei, 0) == 2
            assert net[ei] == 0
