"""Solver checks and field export: heat balance and column-ordered CSV."""
from __future__ import annotations

import io
from typing import NamedTuple

import numpy as np

from .. import __version__
from .mesh import DIRECTIONS, FLUID, Mesh


class EnergyBalance(NamedTuple):
    heater_input: float  # W per metre of depth
    wall_outflux: float
    imbalance: float


def _boundary_flux(mesh: Mesh, T: np.ndarray, source: np.ndarray) -> float:
    """Conductive heat per unit conductivity leaving the ``source`` nodes into the fluid.

    Sums ``(T_s - T_P) / h * face_length`` over every face between a source
    node and an adjacent fluid node.  For the five-point Laplacian this is the
    exact discrete flux, so it telescopes to zero over a conduction solution.
    """
    ny, nx = mesh.ny, mesh.nx
    total = 0.0
    js, is_ = np.nonzero(source)
    for d, (di, dj) in DIRECTIONS.items():
        h = mesh.dx if d in ("E", "W") else mesh.dy
        face = mesh.dy if d in ("E", "W") else mesh.dx
        j2, i2 = js + dj, is_ + di
        ok = (i2 >= 0) & (i2 <= nx) & (j2 >= 0) & (j2 <= ny)
        j2, i2, j1, i1 = j2[ok], i2[ok], js[ok], is_[ok]
        fl = mesh.kind[j2, i2] == FLUID
        total += float(np.sum(T[j1[fl], i1[fl]] - T[j2[fl], i2[fl]]) * face / h)
    return total


def energy_balance(solution, geometry=None) -> EnergyBalance:
    """Heat leaving the heater (or hot wall) against heat entering the cold walls.

    Both are conductive line integrals per unit depth; ``imbalance`` is
    ``|in - out| / |in|``.  An unconverged solution simply reports whatever
    imbalance it has.
    """
    m, T = solution.mesh, solution.T
    lam = solution.fluid.conductivity
    q_in = lam * _boundary_flux(m, T, m.source_mask)
    q_out = -lam * _boundary_flux(m, T, m.sink_mask)
    imbalance = abs(q_in - q_out) / abs(q_in) if q_in != 0 else 0.0
    return EnergyBalance(q_in, q_out, imbalance)


def fields_csv(solution) -> str:
    """Node fields as CSV: one ``# ...`` comment line, a header, then rows of x, y, T, u, v, psi."""
    buf = io.StringIO()
    meta = solution.metadata
    buf.write(
        f"# tiltsense {__version__} config_hash={meta.get('config_hash', '')} fluid={meta.get('fluid', '')}"
        f" nx={solution.mesh.nx} ny={solution.mesh.ny}\n"
    )
    buf.write("x,y,T,u,v,psi\n")
    X, Y = np.meshgrid(solution.x, solution.y)
    cols = np.column_stack([a.ravel() for a in (X, Y, solution.T, solution.u, solution.v, solution.psi)])
    np.savetxt(buf, cols, delimiter=",", fmt="%.12e")
    return buf.getvalue()


def write_fields_csv(solution, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(fields_csv(solution))
