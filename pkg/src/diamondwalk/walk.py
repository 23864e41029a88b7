"""Discrete-time single-photon walk on the diamond chain.

State model: one complex amplitude per (directed edge, position-along-edge)
slot.  One sub-step advances every amplitude by one slot; amplitudes reaching
a vertex scatter through the three-port unitary into the first slots of the
outgoing edges (picking up the phase of any shifter on the edge they enter),
and amplitudes reaching a chain-end mirror reverse with phase -1.  Every
ingredient is unitary, so the norm is conserved to rounding.

Observables are recorded stroboscopically: the natural recording cadence is
one record per diamond-to-diamond travel time (``internal_length +
external_length`` sub-steps), which matches the walk-time unit used by the
cell-resolved probability plots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .lattice import SUBSITES, LatticeGraph

__all__ = [
    "LightConeOverflow",
    "WalkState",
    "WalkObservables",
    "auto_half_length",
    "initial_state",
    "step",
    "cell_probabilities",
    "evolve",
    "assemble_step_operator",
]

_END_LEAK_TOL = 1e-9
_MAX_OPERATOR_DIM = 10_000


class LightConeOverflow(RuntimeError):
    """Probability reached the chain ends; the open-boundary insulation is void."""


@dataclass
class WalkState:
    """Amplitudes over all slots of a lattice graph at integer sub-step time."""

    amplitudes: np.ndarray
    time: int = 0

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


@dataclass(frozen=True)
class WalkObservables:
    """Cell-resolved probabilities and summary statistics per recorded time.

    ``p_cell[r, i]`` is the probability in cell ``cells[i]`` at record ``r``
    (record 0 is the initial state).  ``p_boundary`` sums cells |m| <= 1.
    """

    cells: np.ndarray
    records: np.ndarray
    substeps_per_record: int
    p_cell: np.ndarray
    mean: np.ndarray
    sigma: np.ndarray
    p_boundary: np.ndarray


def auto_half_length(n_record: int, substeps_per_record: int, substeps_per_cell: int,
                     margin: int = 2) -> int:
    """Half length that keeps the light cone (<= 1 sub-step per step) inside."""
    return math.ceil(n_record * substeps_per_record / substeps_per_cell) + margin


def initial_state(graph: LatticeGraph, cell: int, subsite: str, direction: str) -> WalkState:
    """Unit amplitude on the external directed edge entering the named diamond.

    ``direction='right'`` places a right-moving photon on the external edge to
    the diamond's left, ``'left'`` a left-moving photon on the edge to its
    right; either way the amplitude sits one sub-step before its first
    collision with that diamond.
    """
    if direction not in ("left", "right"):
        raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
    d = graph.diamond_index(cell, subsite)  # validates cell and subsite
    if direction == "right":
        de = graph.directed(graph.external_edge(d), 0)
    else:
        de = graph.directed(graph.external_edge(d + 1), 1)
    amplitudes = np.zeros(graph.dim, dtype=complex)
    amplitudes[graph.slots(de).stop - 1] = 1.0
    return WalkState(amplitudes=amplitudes, time=0)


def step(state: WalkState, graph: LatticeGraph) -> WalkState:
    """Advance one sub-step.  Returns a new state; the input is not modified."""
    old = state.amplitudes
    new = np.zeros_like(old)
    new[graph.adv_dst] = old[graph.adv_src]
    incoming = old[graph.in_slot]                      # (n_vertices, 3)
    outgoing = incoming @ graph.vertex_matrix.T        # out[p] = sum_q U[p, q] in[q]
    new[graph.out_slot] = outgoing * graph.out_phase
    new[graph.mirror_dst] = -old[graph.mirror_src]
    return WalkState(amplitudes=new, time=state.time + 1)


def cell_probabilities(graph: LatticeGraph, state: WalkState) -> np.ndarray:
    """Probability per cell; gap amplitudes count toward the diamond they approach."""
    weighted = graph.cw_val * np.abs(state.amplitudes[graph.cw_slot]) ** 2
    p = np.zeros(graph.n_cells)
    np.add.at(p, graph.cw_cell, weighted)
    return p


def evolve(
    state: WalkState,
    graph: LatticeGraph,
    n_record: int,
    substeps_per_record: int | None = None,
) -> WalkObservables:
    """Run the walk for ``n_record`` records and collect observables.

    Records the initial state and then one row per ``substeps_per_record``
    sub-steps (default: the diamond-to-diamond travel time).  Raises
    :class:`LightConeOverflow` as soon as more than 1e-9 probability reaches
    either end cell, since then the mirror terminations are no longer
    unobservable.
    """
    if n_record < 0:
        raise ValueError("n_record must be >= 0")
    if substeps_per_record is None:
        substeps_per_record = graph.spec.substeps_per_hop
    if substeps_per_record < 1:
        raise ValueError("substeps_per_record must be >= 1")

    m = graph.cells.astype(float)
    n_rows = n_record + 1
    p_cell = np.empty((n_rows, graph.n_cells))
    p_cell[0] = cell_probabilities(graph, state)
    for r in range(n_rows):
        if r > 0:
            for _ in range(substeps_per_record):
                state = step(state, graph)
            p_cell[r] = cell_probabilities(graph, state)
        if p_cell[r, 0] + p_cell[r, -1] > _END_LEAK_TOL:
            raise LightConeOverflow(
                f"end-cell probability {p_cell[r, 0] + p_cell[r, -1]:.3e} at record {r}; "
                "increase half_length (see auto_half_length)"
            )

    total = p_cell.sum(axis=1)
    mean = (p_cell * m).sum(axis=1) / total
    var = (p_cell * m**2).sum(axis=1) / total - mean**2
    sigma = np.sqrt(np.maximum(var, 0.0))
    half = graph.half_length
    p_boundary = p_cell[:, half - 1 : half + 2].sum(axis=1)

    return WalkObservables(
        cells=graph.cells,
        records=np.arange(n_rows),
        substeps_per_record=substeps_per_record,
        p_cell=p_cell,
        mean=mean,
        sigma=sigma,
        p_boundary=p_boundary,
    )


def assemble_step_operator(graph: LatticeGraph, max_dim: int = _MAX_OPERATOR_DIM) -> sp.csr_matrix:
    """Explicit one-sub-step operator over the slot basis, for validation.

    Built entry by entry from the edge tables (an independent code path from
    :func:`step`): intra-edge advancement contributes 1s, each vertex
    contributes a 3x3 unitary block between the final slots of its incoming
    edges and the first slots of its outgoing edges (times the entered edge's
    phase), and each mirror contributes a -1.  The result is unitary in the
    slot basis.  Refuses graphs beyond ``max_dim`` slots.
    """
    if graph.dim > max_dim:
        raise ValueError(f"graph has {graph.dim} slots, above the {max_dim} limit")
    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []

    n_edges = len(graph.edge_length)
    for e in range(n_edges):
        for direction in (0, 1):
            de = graph.directed(e, direction)
            span = graph.slots(de)
            for s in range(span.start, span.stop - 1):
                rows.append(s + 1)
                cols.append(s)
                vals.append(1.0)

    u = graph.vertex_matrix
    for v in range(graph.n_vertices):
        for p_in in range(3):
            src = int(graph.in_slot[v, p_in])
            for p_out in range(3):
                de_out = int(graph.leaving[v, p_out])
                dst = int(graph.slot_base[de_out])
                rows.append(dst)
                cols.append(src)
                vals.append(u[p_out, p_in] * graph.edge_phase[de_out // 2])

    for src, dst in zip(graph.mirror_src, graph.mirror_dst):
        rows.append(int(dst))
        cols.append(int(src))
        vals.append(-1.0)

    return sp.csr_matrix(
        (np.array(vals, dtype=complex), (rows, cols)), shape=(graph.dim, graph.dim)
    )
