"""Momentum-space analysis of the diamond chain: bands, gap, winding number.

In momentum space the chain reduces to a 2x2 Hamiltonian on the (a, b)
subsite space with zero diagonal (reflection terms only set the energy zero
and are dropped) and off-diagonal ``|t_a(k)| + |t_b(k)| exp(-ik)``, where the
hopping magnitudes are the k-dependent diamond transmissions.  Quasi-energies
come in chiral pairs ``E_-(k) = -E_+(k)``; the minimum splitting over the
Brillouin zone [0, 2pi) is the band gap.

Writing ``H(k) = d(k) . sigma`` gives the planar curve

    d_x(k) = |t_a(k)| + |t_b(k)| cos k,      d_y(k) = |t_b(k)| sin k,

whose winding about the origin over one Brillouin zone is the integer
topological invariant: nonzero exactly when the k-dependent hopping dominates
(|t_b| > |t_a|, for weakly k-dependent magnitudes).  The winding is computed
by accumulating wrapped angle increments along the sampled curve, which
avoids differentiating the transmission magnitudes (they are not smooth in
closed form near the removable points of the transmission formula).

An overall 1/N normalisation of the momentum-space Hamiltonian is dropped
throughout: it rescales all energies uniformly and affects no gap ratio,
band shape, or winding conclusion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .diamond import transmission_closed_form

__all__ = [
    "GapClosed",
    "BandResult",
    "WindingResult",
    "PhaseDiagram",
    "hopping_magnitude",
    "hamiltonian_k",
    "dispersion",
    "band_structure",
    "winding_from_hoppings",
    "winding_number",
    "phase_diagram",
]

_MIN_RADIUS = 1e-6
_INTEGER_SLACK = 0.1


class GapClosed(ArithmeticError):
    """The d(k) curve passes through the origin; the winding is undefined."""


@dataclass(frozen=True)
class BandResult:
    k_grid: np.ndarray
    e_plus: np.ndarray
    e_minus: np.ndarray
    abs_ta: np.ndarray
    abs_tb: np.ndarray
    gap: float
    gap_k: float  # location of the refined gap minimum


@dataclass(frozen=True)
class WindingResult:
    d_curve: np.ndarray  # (n_k, 2) columns d_x, d_y
    nu: int
    min_radius: float


@dataclass(frozen=True)
class PhaseDiagram:
    phi_a: np.ndarray
    phi_b: np.ndarray
    gap: np.ndarray  # (len(phi_a), len(phi_b))
    nu: np.ndarray  # float array, NaN where the winding is undefined
    flag: np.ndarray  # '' or 'gap_closed'


def hopping_magnitude(phi: float, k) -> np.ndarray | float:
    """|t(phi, k)|: the hopping strength contributed by a diamond at phase phi."""
    return np.abs(transmission_closed_form(phi, k))


def hamiltonian_k(phi_a: float, phi_b: float, k: float,
                  *, limit_at_singularities: bool = True) -> np.ndarray:
    """2x2 momentum-space Hamiltonian at quasi-momentum k (1/N prefactor dropped)."""
    ta = np.abs(transmission_closed_form(phi_a, k, limit_at_singularities=limit_at_singularities))
    tb = np.abs(transmission_closed_form(phi_b, k, limit_at_singularities=limit_at_singularities))
    off = ta + tb * np.exp(-1j * k)
    return np.array([[0.0, off], [np.conj(off), 0.0]], dtype=complex)


def dispersion(ta, tb, k):
    """Upper quasi-energy band ``E_+ = sqrt(ta^2 + tb^2 + 2 ta tb cos k)``."""
    return np.sqrt(np.maximum(ta**2 + tb**2 + 2.0 * ta * tb * np.cos(k), 0.0))


def _k_grid(n_k: int) -> np.ndarray:
    return np.arange(n_k) * 2.0 * math.pi / n_k


def band_structure(phi_a: float, phi_b: float, n_k: int = 512) -> BandResult:
    """Sample E+-(k) over the Brillouin zone and locate the band gap.

    The gap is the coarse-grid minimum of the band splitting refined by a
    bounded 1-D search (k tolerance 1e-10) around it.  Removable points of
    the transmission formula are limit-evaluated, so every grid point yields
    a value and no exclusions arise.
    """
    if n_k < 16:
        raise ValueError("n_k must be >= 16")
    k = _k_grid(n_k)
    abs_ta = hopping_magnitude(phi_a, k)
    abs_tb = hopping_magnitude(phi_b, k)
    e_plus = dispersion(abs_ta, abs_tb, k)

    i_min = int(np.argmin(e_plus))
    dk = 2.0 * math.pi / n_k

    def splitting(kk: float) -> float:
        ta = hopping_magnitude(phi_a, kk)
        tb = hopping_magnitude(phi_b, kk)
        return 2.0 * float(dispersion(ta, tb, kk))

    refined = minimize_scalar(
        splitting,
        bounds=(k[i_min] - dk, k[i_min] + dk),
        method="bounded",
        options={"xatol": 1e-10},
    )
    gap = min(2.0 * float(e_plus[i_min]), float(refined.fun))
    gap_k = float(k[i_min]) if 2.0 * e_plus[i_min] <= refined.fun else float(refined.x)
    gap_k %= 2.0 * math.pi

    return BandResult(
        k_grid=k,
        e_plus=e_plus,
        e_minus=-e_plus,
        abs_ta=abs_ta,
        abs_tb=abs_tb,
        gap=gap,
        gap_k=gap_k,
    )


def winding_from_hoppings(abs_ta, abs_tb, n_k: int = 1024) -> WindingResult:
    """Winding of the d(k) curve for given hopping magnitudes.

    ``abs_ta``/``abs_tb`` may be scalars (SSH-like constant hoppings), arrays
    over the Brillouin-zone grid, or callables of k.  Raises
    :class:`GapClosed` when the curve approaches the origin or when the
    accumulated angle does not settle on an integer multiple of 2pi (which
    means the sampled curve jumped past the origin).
    """
    if n_k < 64:
        raise ValueError("n_k must be >= 64")
    k = _k_grid(n_k)
    ta = np.broadcast_to(abs_ta(k) if callable(abs_ta) else abs_ta, k.shape).astype(float)
    tb = np.broadcast_to(abs_tb(k) if callable(abs_tb) else abs_tb, k.shape).astype(float)

    d_x = ta + tb * np.cos(k)
    d_y = tb * np.sin(k)
    d_curve = np.column_stack([d_x, d_y])
    min_radius = float(np.hypot(d_x, d_y).min())
    if min_radius < _MIN_RADIUS:
        raise GapClosed(
            f"d(k) curve passes within {min_radius:.2e} of the origin; winding undefined"
        )

    angles = np.angle(d_x + 1j * d_y)
    increments = np.diff(np.concatenate([angles, angles[:1]]))
    increments = (increments + math.pi) % (2.0 * math.pi) - math.pi
    turns = float(increments.sum() / (2.0 * math.pi))
    nu = round(turns)
    if abs(turns - nu) > _INTEGER_SLACK:
        raise GapClosed(
            f"angle sum {turns:.4f} turns is not close to an integer; "
            "refine n_k or treat the gap as closed"
        )
    return WindingResult(d_curve=d_curve, nu=int(nu), min_radius=min_radius)


def winding_number(phi_a: float, phi_b: float, n_k: int = 1024) -> WindingResult:
    """Winding number of the chain with phase shifts (phi_a, phi_b)."""
    k = _k_grid(n_k)
    return winding_from_hoppings(hopping_magnitude(phi_a, k), hopping_magnitude(phi_b, k), n_k)


def phase_diagram(phi_a_grid, phi_b_grid, n_k: int = 512) -> PhaseDiagram:
    """Gap and winding over a (phi_a, phi_b) grid; closed-gap points are flagged."""
    phi_a_grid = np.atleast_1d(np.asarray(phi_a_grid, dtype=float))
    phi_b_grid = np.atleast_1d(np.asarray(phi_b_grid, dtype=float))
    if phi_a_grid.size == 0 or phi_b_grid.size == 0:
        raise ValueError("phase grids must be nonempty")
    shape = (phi_a_grid.size, phi_b_grid.size)
    gap = np.empty(shape)
    nu = np.full(shape, np.nan)
    flag = np.full(shape, "", dtype=object)
    for i, pa in enumerate(phi_a_grid):
        for j, pb in enumerate(phi_b_grid):
            gap[i, j] = band_structure(pa, pb, n_k).gap
            try:
                nu[i, j] = winding_number(pa, pb, n_k).nu
            except GapClosed:
                flag[i, j] = "gap_closed"
    return PhaseDiagram(phi_a=phi_a_grid, phi_b=phi_b_grid, gap=gap, nu=nu, flag=flag)
