import dataclasses

import numpy as np
import pytest

from diamondwalk import (
    LatticeSpec,
    PhaseProfile,
    audit_graph,
    build_lattice,
)

FIG5_PAIRS = ((1.5, 2.5), (3 * np.pi / 4, 0.0))


def small_graph(half_length=2, profile=None):
    if profile is None:
        profile = PhaseProfile.uniform(0.0, 0.0, half_length)
    return build_lattice(LatticeSpec(half_length=half_length, profile=profile))


def test_counts_m1():
    g = small_graph(half_length=1)
    report = audit_graph(g)
    assert report.ok
    assert report.counts["cells"] == 3
    assert report.counts["diamonds"] == 6
    assert report.counts["vertices"] == 12
    assert report.counts["internal_edges"] == 12
    # 5 connecting gaps plus the two mirror-terminated end stubs
    assert report.counts["external_edges"] == 7


def test_every_vertex_has_three_wired_ports():
    g = small_graph(half_length=1)
    assert np.all(g.leaving >= 0)
    assert np.all(g.arriving >= 0)
    assert g.leaving.shape == (g.n_vertices, 3)


def test_counts_m50():
    g = small_graph(half_length=50)
    report = audit_graph(g)
    assert report.ok
    assert report.counts["vertices"] == 4 * 101 == 404
    assert report.counts["diamonds"] == 2 * 101


def test_profile_maps_to_diamond_phases():
    profile = PhaseProfile.two_region(FIG5_PAIRS[0], FIG5_PAIRS[1], 2, boundary=0)
    g = small_graph(half_length=2, profile=profile)
    for m, expected in ((0, FIG5_PAIRS[0]), (1, FIG5_PAIRS[1]), (-2, FIG5_PAIRS[0])):
        assert g.diamond_phi[g.diamond_index(m, "a")] == pytest.approx(expected[0])
        assert g.diamond_phi[g.diamond_index(m, "b")] == pytest.approx(expected[1])


def test_shifted_edge_carries_the_phase():
    g = small_graph(half_length=1, profile=PhaseProfile.uniform(0.7, 0.7, 1))
    d = g.diamond_index(0, "a")
    top, bottom = 2 * d, 2 * d + 1
    assert g.edge_phase[top] == 1.0
    assert g.edge_phase[bottom] == pytest.approx(np.exp(0.7j))


def test_rebuild_is_deterministic():
    profile = PhaseProfile.two_region((1.5, 2.5), (0.4, 0.0), 3)
    a = build_lattice(LatticeSpec(half_length=3, profile=profile))
    b = build_lattice(LatticeSpec(half_length=3, profile=profile))
    for name in ("edge_length", "edge_phase", "edge_cell", "leaving", "arriving",
                 "in_slot", "out_slot", "out_phase", "slot_base", "cw_cell"):
        assert np.array_equal(getattr(a, name), getattr(b, name)), name


def test_rejects_profile_not_covering_chain():
    profile = PhaseProfile(((-1, 1, 0.0, 0.0),))
    with pytest.raises(ValueError, match="does not cover"):
        build_lattice(LatticeSpec(half_length=3, profile=profile))


def test_profile_rejects_overlap_and_empty_range():
    with pytest.raises(ValueError, match="overlap"):
        PhaseProfile(((-2, 0, 0.0, 0.0), (0, 2, 1.0, 1.0)))
    with pytest.raises(ValueError, match="empty"):
        PhaseProfile(((2, 1, 0.0, 0.0),))
    with pytest.raises(ValueError, match="finite"):
        PhaseProfile(((0, 1, np.nan, 0.0),))


def test_spec_validation():
    profile = PhaseProfile.uniform(0.0, 0.0, 1)
    with pytest.raises(ValueError):
        LatticeSpec(half_length=0, profile=profile)
    with pytest.raises(ValueError):
        LatticeSpec(half_length=1, profile=profile, external_length=0)


def test_audit_clean_on_m5():
    report = audit_graph(small_graph(half_length=5))
    assert report.ok
    assert report.violations == ()


def test_audit_flags_deleted_adjacency():
    g = small_graph(half_length=2)
    broken_leaving = g.leaving.copy()
    broken_leaving[3, 1] = -1
    broken = dataclasses.replace(g, leaving=broken_leaving)
    report = audit_graph(broken)
    assert not report.ok
    assert any("unwired" in v or "partition" in v for v in report.violations)


def test_diamond_index_bounds():
    g = small_graph(half_length=2)
    with pytest.raises(ValueError):
        g.diamond_index(3, "a")
    with pytest.raises(ValueError):
        g.diamond_index(0, "c")
