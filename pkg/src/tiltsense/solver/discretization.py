"""Stream-function / vorticity / temperature operators on a :class:`Mesh`.

Unknown vector layout::

    x = [psi (fluid nodes), omega (fluid nodes), T (fluid + adiabatic nodes), psi_island]

``psi_island`` is present only when the mesh contains a heater strip: the strip
is an obstacle on which the stream function takes one unknown constant,
closed by requiring the pressure to be single valued around it, which for an
isothermal no-slip body reduces to a zero net normal vorticity gradient.

Every neighbour value is an affine function of ``x``.  Wall vorticity is
evaluated per direction with Thom's formula ``omega_w = -2 (psi_P - psi_w) / h**2``
so that corner and strip-tip nodes never need a single, ambiguous value.
Second-order central differences everywhere; advection is the plain
central Jacobian ``u dphi/dx + v dphi/dy`` with ``u = dpsi/dy``, ``v = -dpsi/dx``.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .mesh import ADIABATIC, DIRECTIONS, FLUID, HEATER, Mesh

DIAGONALS = {"NE": (1, 1), "NW": (-1, 1), "SE": (1, -1), "SW": (-1, -1)}


class Affine:
    """``x -> M @ x + c`` restricted to a set of rows."""

    __slots__ = ("M", "c")
    # make ``ndarray * Affine`` defer to Affine.__rmul__
    __array_ufunc__ = None

    def __init__(self, M, c):
        self.M = M.tocsr()
        self.c = np.asarray(c, dtype=float)

    def __call__(self, x):
        return self.M @ x + self.c

    def __add__(self, other):
        return Affine(self.M + other.M, self.c + other.c)

    def __sub__(self, other):
        return Affine(self.M - other.M, self.c - other.c)

    def __mul__(self, k):
        if np.ndim(k) == 0:
            return Affine(self.M * k, self.c * k)
        return Affine(sp.diags(k) @ self.M, self.c * k)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


class Discretization:
    def __init__(self, mesh: Mesh):
        self.mesh = mesh
        nx = mesh.nx
        self.stride = nx + 1
        kind = mesh.kind.ravel()
        self.kind = kind
        self.fluid = np.flatnonzero(kind == FLUID)
        self.tnodes = np.flatnonzero((kind == FLUID) | (kind == ADIABATIC))
        self.heater = np.flatnonzero(kind == HEATER)
        self.nF = nF = self.fluid.size
        self.nT = nT = self.tnodes.size
        self.has_island = self.heater.size > 0
        self.n = 2 * nF + nT + int(self.has_island)
        self.island = self.n - 1 if self.has_island else None

        size = kind.size
        self.psi_col = np.full(size, -1)
        self.psi_col[self.fluid] = np.arange(nF)
        if self.has_island:
            self.psi_col[self.heater] = self.island
        self.omega_col = np.full(size, -1)
        self.omega_col[self.fluid] = nF + np.arange(nF)
        self.T_col = np.full(size, -1)
        self.T_col[self.tnodes] = 2 * nF + np.arange(nT)
        self.T_const = np.nan_to_num(mesh.T_fixed.ravel(), nan=0.0)
        self.zero_const = np.zeros(size)
        # rows of the T block that carry advection
        self.fluid_in_T = np.searchsorted(self.tnodes, self.fluid)
        self.slices = {
            "psi": slice(0, nF),
            "omega": slice(nF, 2 * nF),
            "T": slice(2 * nF, 2 * nF + nT),
        }
        self._build()

    # -- index helpers -------------------------------------------------------
    def neighbour(self, nodes, di, dj, mirror=False):
        j, i = np.divmod(nodes, self.stride)
        i2, j2 = i + di, j + dj
        if mirror:
            i2 = np.where(i2 < 0, i + 1, np.where(i2 > self.mesh.nx, i - 1, i2))
            j2 = np.where(j2 < 0, j + 1, np.where(j2 > self.mesh.ny, j - 1, j2))
        return j2 * self.stride + i2

    def _affine(self, nrows, terms, colmap, const):
        R, C, V = [], [], []
        c = np.zeros(nrows)
        for rows, nodes, coef in terms:
            coef = np.broadcast_to(np.asarray(coef, dtype=float), rows.shape)
            cols = colmap[nodes]
            known = cols < 0
            R.append(rows[~known])
            C.append(cols[~known])
            V.append(coef[~known])
            np.add.at(c, rows[known], coef[known] * const[nodes[known]])
        M = sp.coo_matrix(
            (np.concatenate(V), (np.concatenate(R), np.concatenate(C))), shape=(nrows, self.n)
        )
        return Affine(M, c)

    def _select(self, nodes, colmap, const):
        rows = np.arange(nodes.size)
        return self._affine(nodes.size, [(rows, nodes, 1.0)], colmap, const)

    # -- operator construction ----------------------------------------------
    def _build(self):
        m = self.mesh
        dx, dy = m.dx, m.dy
        h = {"E": dx, "W": dx, "N": dy, "S": dy}
        F, nF = self.fluid, self.nF
        rF = np.arange(nF)

        psi = {d: self._select(self.neighbour(F, *o), self.psi_col, self.zero_const) for d, o in DIRECTIONS.items()}
        psi.update({d: self._select(self.neighbour(F, *o), self.psi_col, self.zero_const) for d, o in DIAGONALS.items()})
        psiP = self._select(F, self.psi_col, self.zero_const)
        omegaP = self._select(F, self.omega_col, self.zero_const)

        # neighbour vorticity: interior value, or Thom's wall value seen from P
        omega = {}
        for d, (di, dj) in DIRECTIONS.items():
            Q = self.neighbour(F, di, dj)
            solid = self.kind[Q] != FLUID
            w = -2.0 / h[d] ** 2
            interior = self._affine(nF, [(rF[~solid], Q[~solid], 1.0)], self.omega_col, self.zero_const)
            thom = self._affine(
                nF, [(rF[solid], F[solid], w), (rF[solid], Q[solid], -w)], self.psi_col, self.zero_const
            )
            omega[d] = interior + thom

        T = {d: self._select(self.neighbour(F, *o), self.T_col, self.T_const) for d, o in DIRECTIONS.items()}

        self.Dx_psi = (psi["E"] - psi["W"]) * (0.5 / dx)
        self.Dy_psi = (psi["N"] - psi["S"]) * (0.5 / dy)
        self.Dxx_psi = (psi["E"] + psi["W"] - psiP * 2.0) * (1 / dx**2)
        self.Dyy_psi = (psi["N"] + psi["S"] - psiP * 2.0) * (1 / dy**2)
        self.Dxy_psi = (psi["NE"] - psi["NW"] - psi["SE"] + psi["SW"]) * (0.25 / (dx * dy))
        self.Lap_psi = self.Dxx_psi + self.Dyy_psi
        self.psiP, self.omegaP = psiP, omegaP

        self.Dx_omega = (omega["E"] - omega["W"]) * (0.5 / dx)
        self.Dy_omega = (omega["N"] - omega["S"]) * (0.5 / dy)
        self.Lap_omega = (omega["E"] + omega["W"] - omegaP * 2.0) * (1 / dx**2) + (
            omega["N"] + omega["S"] - omegaP * 2.0
        ) * (1 / dy**2)

        self.Dx_TF = (T["E"] - T["W"]) * (0.5 / dx)
        self.Dy_TF = (T["N"] - T["S"]) * (0.5 / dy)

        # temperature Laplacian on all T rows; adiabatic walls use mirror ghosts
        tn, rT = self.tnodes, np.arange(self.nT)
        terms = []
        for d, (di, dj) in DIRECTIONS.items():
            terms.append((rT, self.neighbour(tn, di, dj, mirror=True), 1.0 / h[d] ** 2))
        terms.append((rT, tn, -2.0 / dx**2 - 2.0 / dy**2))
        self.Lap_T = self._affine(self.nT, terms, self.T_col, self.T_const)

        # island closure: sum over heater faces of (omega_P - omega_wall) / h * face length
        if self.has_island:
            nodes_o, coef_o, nodes_p, coef_p = [], [], [], []
            for d, (di, dj) in DIRECTIONS.items():
                Q = self.neighbour(F, di, dj)
                on = self.kind[Q] == HEATER
                L = dy if d in ("E", "W") else dx
                k = L / h[d]
                nodes_o.append(F[on])
                coef_o.append(np.full(on.sum(), k))
                nodes_p.append(F[on])
                coef_p.append(np.full(on.sum(), 2.0 * k / h[d] ** 2))
            no, co = np.concatenate(nodes_o), np.concatenate(coef_o)
            npp, cp = np.concatenate(nodes_p), np.concatenate(coef_p)
            z = np.zeros(no.size, dtype=int)
            c1 = self._affine(1, [(z, no, co)], self.omega_col, self.zero_const)
            c2 = self._affine(1, [(z, npp, cp)], self.psi_col, self.zero_const)
            M3 = sp.coo_matrix(([-cp.sum()], ([0], [self.island])), shape=(1, self.n))
            self.island_constraint = c1 + c2 + Affine(M3, np.zeros(1))
        else:
            self.island_constraint = None

    # -- field helpers -------------------------------------------------------
    def full(self, x, which):
        """Full-grid array of ``psi``, ``omega`` (interior only) or ``T``."""
        size = self.kind.size
        if which == "psi":
            out = np.zeros(size)
            out[self.fluid] = x[self.slices["psi"]]
            if self.has_island:
                out[self.heater] = x[self.island]
        elif which == "omega":
            out = np.zeros(size)
            out[self.fluid] = x[self.slices["omega"]]
        elif which == "T":
            out = self.T_const.copy()
            out[self.tnodes] = x[self.slices["T"]]
        else:
            raise KeyError(which)
        return out.reshape(self.mesh.shape)

    def wall_vorticity(self, x):
        """Full-grid vorticity with Thom values on solid nodes (for output)."""
        m = self.mesh
        omega = self.full(x, "omega").ravel()
        psi = self.full(x, "psi").ravel()
        h = {"E": m.dx, "W": m.dx, "N": m.dy, "S": m.dy}
        solid = np.flatnonzero(self.kind != FLUID)
        acc = np.zeros(solid.size)
        cnt = np.zeros(solid.size)
        for d, (di, dj) in DIRECTIONS.items():
            Q = self.neighbour(solid, di, dj)
            j, i = np.divmod(solid, self.stride)
            inside = (i + di >= 0) & (i + di <= m.nx) & (j + dj >= 0) & (j + dj <= m.ny)
            Qc = np.where(inside, Q, 0)
            ok = inside & (self.kind[Qc] == FLUID)
            acc[ok] += -2.0 * (psi[Qc[ok]] - psi[solid[ok]]) / h[d] ** 2
            cnt[ok] += 1
        omega[solid] = np.where(cnt > 0, acc / np.maximum(cnt, 1), 0.0)
        return omega.reshape(m.shape)

    def velocities(self, x):
        u = np.zeros(self.kind.size)
        v = np.zeros(self.kind.size)
        u[self.fluid] = self.Dy_psi(x)
        v[self.fluid] = -self.Dx_psi(x)
        return u.reshape(self.mesh.shape), v.reshape(self.mesh.shape)

    def initial_state(self, T0):
        x = np.zeros(self.n)
        x[self.slices["T"]] = T0
        return x
