"""Construction of the diamond-chain lattice as an explicit directed graph.

The chain realises an SSH-like lattice: each cell ``m`` holds two subsites
``a`` and ``b``, each subsite is one diamond graph (two three-port vertices
joined on two internal edges, one carrying the subsite's phase shift), and
consecutive diamonds are joined by external edges.  Order along the chain is
``a_{-M}, b_{-M}, a_{-M+1}, ..., b_{M}``.  The two dangling external edges at
the chain ends are terminated by perfect mirrors (reflection phase -1), which
keeps the induced evolution unitary without enlarging the state space.

Indexing is fully deterministic:

* diamonds: ``d = 2*(m + M) + s`` with subsite ``s`` = 0 for a, 1 for b;
* vertices: diamond d owns left vertex ``2d`` and right vertex ``2d + 1``;
* undirected edges: the two internal edges of each diamond first (top edge
  ``2d`` plain, bottom edge ``2d+1`` carrying ``exp(i phi)``), then the
  external edges left-to-right (index 0 is the left mirror stub, index 2N the
  right one);
* directed edges: ``2*edge + direction`` with direction 0 = left-to-right
  (right-moving) and 1 = right-to-left;
* amplitude slots: each directed edge of length L owns L consecutive slots,
  one per sub-step of travel.

Ports follow the (A, B, C) -> (0, 1, 2) convention: port A faces the external
edge, ports B and C the top and bottom internal edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diamond import DEFAULT_CONVENTION
from .multiport import vertex_unitary

__all__ = [
    "SUBSITES",
    "PhaseProfile",
    "LatticeSpec",
    "LatticeGraph",
    "AuditReport",
    "build_lattice",
    "audit_graph",
]

SUBSITES = ("a", "b")

# edge kind codes
KIND_INTERNAL_TOP = 0
KIND_INTERNAL_BOTTOM = 1
KIND_EXTERNAL = 2


@dataclass(frozen=True)
class PhaseProfile:
    """Piecewise-constant map from cell index to the pair (phi_a, phi_b).

    ``regions`` is a sequence of ``(m_from, m_to, phi_a, phi_b)`` with
    inclusive cell ranges.  Regions must be disjoint; together they must cover
    every cell of the lattice they are applied to.
    """

    regions: tuple[tuple[int, int, float, float], ...]

    def __post_init__(self) -> None:
        if not self.regions:
            raise ValueError("profile needs at least one region")
        norm = tuple(
            (int(lo), int(hi), float(pa), float(pb)) for lo, hi, pa, pb in self.regions
        )
        object.__setattr__(self, "regions", norm)
        for lo, hi, pa, pb in norm:
            if lo > hi:
                raise ValueError(f"region range [{lo}, {hi}] is empty")
            if not (math.isfinite(pa) and math.isfinite(pb)):
                raise ValueError(f"non-finite phases ({pa!r}, {pb!r}) in region [{lo}, {hi}]")
        ordered = sorted(norm)
        for prev, cur in zip(ordered, ordered[1:]):
            if cur[0] <= prev[1]:
                raise ValueError(
                    f"regions [{prev[0]}, {prev[1]}] and [{cur[0]}, {cur[1]}] overlap"
                )

    @classmethod
    def uniform(cls, phi_a: float, phi_b: float, half_length: int) -> "PhaseProfile":
        return cls(((-half_length, half_length, phi_a, phi_b),))

    @classmethod
    def two_region(
        cls,
        left: tuple[float, float],
        right: tuple[float, float],
        half_length: int,
        boundary: int = 0,
    ) -> "PhaseProfile":
        """Left region covers cells <= boundary, right region the rest."""
        return cls(
            (
                (-half_length, boundary, left[0], left[1]),
                (boundary + 1, half_length, right[0], right[1]),
            )
        )

    def phases(self, half_length: int) -> tuple[np.ndarray, np.ndarray]:
        """Per-cell (phi_a, phi_b) arrays for cells -M..M; rejects gaps."""
        n = 2 * half_length + 1
        phi_a = np.full(n, np.nan)
        phi_b = np.full(n, np.nan)
        for lo, hi, pa, pb in self.regions:
            lo_i = max(lo, -half_length) + half_length
            hi_i = min(hi, half_length) + half_length
            if lo_i > hi_i:
                continue
            phi_a[lo_i : hi_i + 1] = pa
            phi_b[lo_i : hi_i + 1] = pb
        if np.any(np.isnan(phi_a)):
            missing = int(np.flatnonzero(np.isnan(phi_a))[0]) - half_length
            raise ValueError(
                f"profile does not cover cell {missing} of [-{half_length}, {half_length}]"
            )
        return phi_a, phi_b


@dataclass(frozen=True)
class LatticeSpec:
    """Chain geometry: half length M (cells -M..M), phase profile, vertex phase,
    and edge lengths in sub-steps (internal from the calibrated convention)."""

    half_length: int
    profile: PhaseProfile
    theta: float = -math.pi / 2.0
    internal_length: int = DEFAULT_CONVENTION.internal_length
    external_length: int = 1

    def __post_init__(self) -> None:
        if self.half_length < 1:
            raise ValueError("half_length must be >= 1")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        if self.internal_length < 1 or self.external_length < 1:
            raise ValueError("edge lengths must be >= 1")

    @property
    def n_cells(self) -> int:
        return 2 * self.half_length + 1

    @property
    def substeps_per_hop(self) -> int:
        """Sub-steps from entering one diamond to entering the next."""
        return self.internal_length + self.external_length


@dataclass
class LatticeGraph:
    """The built chain plus all precomputed index machinery for the walk.

    Immutable by convention after :func:`build_lattice`; safe to share
    read-only between concurrent evolutions.
    """

    spec: LatticeSpec
    n_cells: int
    n_diamonds: int
    n_vertices: int
    vertex_matrix: np.ndarray  # shared 3x3 unitary (theta is global)
    diamond_phi: np.ndarray  # (n_diamonds,)

    # undirected edge tables
    edge_length: np.ndarray
    edge_phase: np.ndarray
    edge_kind: np.ndarray
    edge_cell: np.ndarray  # owner cell index (whole-to-left rule)
    edge_subsite: np.ndarray  # owner subsite 0/1
    edge_vertex: np.ndarray  # (n_edges, 2) left/right endpoint vertex, -1 = mirror
    edge_port: np.ndarray  # (n_edges, 2) port at each endpoint

    # directed-edge slot machinery
    slot_base: np.ndarray  # (2*n_edges,)
    dir_length: np.ndarray  # (2*n_edges,)
    dim: int
    leaving: np.ndarray  # (n_vertices, 3) directed edge leaving via port
    arriving: np.ndarray  # (n_vertices, 3) directed edge arriving via port
    in_slot: np.ndarray  # (n_vertices, 3) final slot of the arriving edge
    out_slot: np.ndarray  # (n_vertices, 3) first slot of the leaving edge
    out_phase: np.ndarray  # (n_vertices, 3) phase applied on entering the leaving edge
    adv_src: np.ndarray
    adv_dst: np.ndarray
    mirror_src: np.ndarray
    mirror_dst: np.ndarray

    # slot -> (cell, weight) attribution for observables: gap amplitudes count
    # toward the diamond they are moving toward (see build_lattice)
    cw_slot: np.ndarray
    cw_cell: np.ndarray  # 0-based cell position (m + M)
    cw_val: np.ndarray

    cells: np.ndarray  # cell indices -M..M

    @property
    def half_length(self) -> int:
        return self.spec.half_length

    def diamond_index(self, cell: int, subsite: str) -> int:
        if subsite not in SUBSITES:
            raise ValueError(f"subsite must be one of {SUBSITES}, got {subsite!r}")
        if not -self.half_length <= cell <= self.half_length:
            raise ValueError(
                f"cell {cell} outside [-{self.half_length}, {self.half_length}]"
            )
        return 2 * (cell + self.half_length) + SUBSITES.index(subsite)

    def external_edge(self, j: int) -> int:
        """Undirected index of external edge j (0..n_diamonds); j enters diamond j."""
        return 2 * self.n_diamonds + j

    def directed(self, edge: int, direction: int) -> int:
        return 2 * edge + direction

    def slots(self, directed_edge: int) -> slice:
        base = int(self.slot_base[directed_edge])
        return slice(base, base + int(self.dir_length[directed_edge]))


def build_lattice(spec: LatticeSpec) -> LatticeGraph:
    """Materialise the chain described by ``spec``.

    Rejects profiles that do not cover all cells.  Rebuilding from an equal
    spec yields identical arrays (deterministic indexing throughout).
    """
    m_half = spec.half_length
    n_cells = spec.n_cells
    n_diamonds = 2 * n_cells
    n_vertices = 2 * n_diamonds
    phi_a, phi_b = spec.profile.phases(m_half)
    diamond_phi = np.empty(n_diamonds)
    diamond_phi[0::2] = phi_a
    diamond_phi[1::2] = phi_b

    n_internal = 2 * n_diamonds
    n_external = n_diamonds + 1
    n_edges = n_internal + n_external

    edge_length = np.empty(n_edges, dtype=int)
    edge_phase = np.ones(n_edges, dtype=complex)
    edge_kind = np.empty(n_edges, dtype=int)
    edge_cell = np.empty(n_edges, dtype=int)
    edge_subsite = np.empty(n_edges, dtype=int)
    edge_vertex = np.full((n_edges, 2), -1, dtype=int)
    edge_port = np.full((n_edges, 2), -1, dtype=int)

    for d in range(n_diamonds):
        cell = d // 2 - m_half
        subsite = d % 2
        for which in (0, 1):  # top, bottom
            e = 2 * d + which
            edge_length[e] = spec.internal_length
            edge_kind[e] = KIND_INTERNAL_TOP if which == 0 else KIND_INTERNAL_BOTTOM
            edge_cell[e] = cell
            edge_subsite[e] = subsite
            edge_vertex[e] = (2 * d, 2 * d + 1)
            edge_port[e] = (1 + which, 1 + which)  # ports B, C
            if which == 1:
                edge_phase[e] = np.exp(1j * diamond_phi[d])

    for j in range(n_external):
        e = n_internal + j
        owner = min(max(j - 1, 0), n_diamonds - 1)  # whole-to-left; stubs to neighbour
        edge_length[e] = spec.external_length
        edge_kind[e] = KIND_EXTERNAL
        edge_cell[e] = owner // 2 - m_half
        edge_subsite[e] = owner % 2
        if j > 0:
            edge_vertex[e, 0] = 2 * (j - 1) + 1  # right vertex of diamond j-1
            edge_port[e, 0] = 0
        if j < n_diamonds:
            edge_vertex[e, 1] = 2 * j  # left vertex of diamond j
            edge_port[e, 1] = 0

    # directed edges and slots
    dir_length = np.repeat(edge_length, 2)
    slot_base = np.concatenate(([0], np.cumsum(dir_length)[:-1]))
    dim = int(dir_length.sum())

    leaving = np.full((n_vertices, 3), -1, dtype=int)
    arriving = np.full((n_vertices, 3), -1, dtype=int)
    for e in range(n_edges):
        fw, bw = 2 * e, 2 * e + 1
        lv, rv = edge_vertex[e]
        lp, rp = edge_port[e]
        if lv >= 0:
            leaving[lv, lp] = fw
            arriving[lv, lp] = bw
        if rv >= 0:
            leaving[rv, rp] = bw
            arriving[rv, rp] = fw

    in_slot = slot_base[arriving] + dir_length[arriving] - 1
    out_slot = slot_base[leaving]
    out_phase = edge_phase[leaving // 2]

    # intra-edge advancement (slot s -> s+1 within each directed edge)
    adv_src_parts = []
    for de in range(2 * n_edges):
        base = slot_base[de]
        adv_src_parts.append(np.arange(base, base + dir_length[de] - 1))
    adv_src = np.concatenate(adv_src_parts) if adv_src_parts else np.empty(0, dtype=int)
    adv_dst = adv_src + 1

    # mirror terminations at the two chain ends
    mirror_src = []
    mirror_dst = []
    for e in range(n_edges):
        fw, bw = 2 * e, 2 * e + 1
        if edge_vertex[e, 0] < 0:  # left end is a mirror: backward arrives, forward leaves
            mirror_src.append(slot_base[bw] + dir_length[bw] - 1)
            mirror_dst.append(slot_base[fw])
        if edge_vertex[e, 1] < 0:
            mirror_src.append(slot_base[fw] + dir_length[fw] - 1)
            mirror_dst.append(slot_base[bw])
    mirror_src = np.asarray(mirror_src, dtype=int)
    mirror_dst = np.asarray(mirror_dst, dtype=int)

    # Cell attribution of probability for observables.  Amplitude inside a
    # diamond belongs to that diamond's cell.  Amplitude travelling in a gap
    # between diamonds belongs to the diamond it is about to collide with
    # (left-movers to the left neighbour, right-movers to the right); this is
    # the only single-valued rule that both puts an injected photon wholly in
    # its target subsite's cell and keeps P(m, t) exactly mirror symmetric.
    cw_slot_parts: list[np.ndarray] = []
    cw_cell_parts: list[np.ndarray] = []
    cw_val_parts: list[np.ndarray] = []

    def attribute(e: int, direction: int, cell_pos: int) -> None:
        de = 2 * e + direction
        sl = np.arange(slot_base[de], slot_base[de] + dir_length[de])
        cw_slot_parts.append(sl)
        cw_cell_parts.append(np.full(sl.shape, cell_pos, dtype=int))
        cw_val_parts.append(np.full(sl.shape, 1.0))

    for d in range(n_diamonds):
        pos = d // 2
        for which in (0, 1):
            attribute(2 * d + which, 0, pos)
            attribute(2 * d + which, 1, pos)
    for j in range(n_external):
        e = n_internal + j
        toward_right = min(j, n_diamonds - 1) // 2  # forward movers hit diamond j
        toward_left = max(j - 1, 0) // 2  # backward movers hit diamond j-1
        attribute(e, 0, toward_right)
        attribute(e, 1, toward_left)

    cw_slot = np.concatenate(cw_slot_parts)
    cw_cell = np.concatenate(cw_cell_parts)
    cw_val = np.concatenate(cw_val_parts)

    for arr in (edge_length, edge_phase, edge_kind, edge_cell, edge_subsite,
                edge_vertex, edge_port, slot_base, dir_length, leaving, arriving,
                in_slot, out_slot, out_phase, adv_src, adv_dst, mirror_src,
                mirror_dst, cw_slot, cw_cell, cw_val, diamond_phi):
        arr.setflags(write=False)

    return LatticeGraph(
        spec=spec,
        n_cells=n_cells,
        n_diamonds=n_diamonds,
        n_vertices=n_vertices,
        vertex_matrix=vertex_unitary(spec.theta).matrix,
        diamond_phi=diamond_phi,
        edge_length=edge_length,
        edge_phase=edge_phase,
        edge_kind=edge_kind,
        edge_cell=edge_cell,
        edge_subsite=edge_subsite,
        edge_vertex=edge_vertex,
        edge_port=edge_port,
        slot_base=slot_base,
        dir_length=dir_length,
        dim=dim,
        leaving=leaving,
        arriving=arriving,
        in_slot=in_slot,
        out_slot=out_slot,
        out_phase=out_phase,
        adv_src=adv_src,
        adv_dst=adv_dst,
        mirror_src=mirror_src,
        mirror_dst=mirror_dst,
        cw_slot=cw_slot,
        cw_cell=cw_cell,
        cw_val=cw_val,
        cells=np.arange(-m_half, m_half + 1),
    )


@dataclass(frozen=True)
class AuditReport:
    counts: dict
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_graph(graph: LatticeGraph) -> AuditReport:
    """Structural audit: degrees, edge partition, chain linearity, counts.

    Returns counts and a list of violations; an intact graph reports none.
    """
    violations: list[str] = []
    n_edges = len(graph.edge_length)
    n_directed = 2 * n_edges

    # every vertex has its three ports wired to distinct directed edges
    if graph.leaving.shape != (graph.n_vertices, 3):
        violations.append("leaving table has wrong shape")
    seen_leaving = np.sort(graph.leaving.ravel())
    seen_arriving = np.sort(graph.arriving.ravel())
    if np.any(graph.leaving < 0) or np.any(graph.arriving < 0):
        bad = np.argwhere(graph.leaving < 0).tolist() + np.argwhere(graph.arriving < 0).tolist()
        violations.append(f"unwired vertex ports at {bad[:5]}")
    if len(np.unique(seen_leaving)) != seen_leaving.size:
        violations.append("a directed edge leaves more than one (vertex, port)")
    if len(np.unique(seen_arriving)) != seen_arriving.size:
        violations.append("a directed edge arrives at more than one (vertex, port)")

    # directed edges not touching a vertex must be exactly the mirror ends
    vertex_tailed = set(seen_leaving.tolist())
    vertex_headed = set(seen_arriving.tolist())
    mirror_headed = set()
    mirror_tailed = set()
    for e in range(n_edges):
        if graph.edge_vertex[e, 0] < 0:
            mirror_headed.add(2 * e + 1)
            mirror_tailed.add(2 * e)
        if graph.edge_vertex[e, 1] < 0:
            mirror_headed.add(2 * e)
            mirror_tailed.add(2 * e + 1)
    all_directed = set(range(n_directed))
    if vertex_tailed | mirror_tailed != all_directed or vertex_tailed & mirror_tailed:
        violations.append("directed-edge tails do not partition between vertices and mirrors")
    if vertex_headed | mirror_headed != all_directed or vertex_headed & mirror_headed:
        violations.append("directed-edge heads do not partition between vertices and mirrors")
    if len(mirror_headed) != 2:
        violations.append(f"expected 2 mirror terminations, found {len(mirror_headed)}")

    # edge -> (cell, subsite) assignment partitions all edges
    if np.any(np.abs(graph.edge_cell) > graph.half_length):
        violations.append("edge owner cell out of range")
    if np.any((graph.edge_subsite < 0) | (graph.edge_subsite > 1)):
        violations.append("edge owner subsite out of range")

    # chain linearity: external edges visit diamonds left to right
    external = np.flatnonzero(graph.edge_kind == KIND_EXTERNAL)
    for rank, e in enumerate(external):
        lv, rv = graph.edge_vertex[e]
        expect_left = -1 if rank == 0 else 2 * (rank - 1) + 1
        expect_right = -1 if rank == len(external) - 1 else 2 * rank
        if lv != expect_left or rv != expect_right:
            violations.append(f"external edge {rank} wired to ({lv}, {rv})")
            break

    expected_vertices = 4 * graph.n_cells  # four three-ports per cell
    expected_internal = 2 * graph.n_diamonds
    counts = {
        "cells": graph.n_cells,
        "diamonds": graph.n_diamonds,
        "vertices": graph.n_vertices,
        "internal_edges": int(np.sum(graph.edge_kind != KIND_EXTERNAL)),
        "external_edges": int(np.sum(graph.edge_kind == KIND_EXTERNAL)),
        "directed_edges": n_directed,
        "slots": graph.dim,
    }
    if counts["vertices"] != expected_vertices:
        violations.append(f"vertex count {counts['vertices']} != {expected_vertices}")
    if counts["diamonds"] != 2 * graph.n_cells:
        violations.append("diamond count mismatch")
    if counts["internal_edges"] != expected_internal:
        violations.append("internal edge count mismatch")
    if counts["external_edges"] != graph.n_diamonds + 1:
        violations.append("external edge count mismatch")

    return AuditReport(counts=counts, violations=tuple(violations))
