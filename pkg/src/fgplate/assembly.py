"""Discrete operators for the four-unknown plate model on a NURBS patch.

Each control point carries the DOFs (u0, v0, wb, ws); global DOF index is
4*A + component with A the flattened control point index. Assembly loops over
nonempty knot spans with a full (p+1) x (q+1) Gauss rule per element; element
matrices are symmetric by construction and scattered serially, so results are
deterministic.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ConfigurationError
from .materials import FGMSpec, SectionConstants, ShearModel
from .nurbs import BasisLocal, Patch, physical_derivs

__all__ = [
    "BC",
    "UniformLoad",
    "SinusoidalLoad",
    "PlateModel",
    "GlobalSystem",
    "strain_operators",
    "assemble",
    "apply_boundary_conditions",
]


class BC(str, enum.Enum):
    SIMPLY_SUPPORTED = "S"
    CLAMPED = "C"
    FREE = "F"


@dataclass(frozen=True)
class UniformLoad:
    q0: float

    def value(self, x: float, y: float) -> float:
        return self.q0


@dataclass(frozen=True)
class SinusoidalLoad:
    """Half-sine pressure bump over a rectangle of side lengths (a, b)."""

    q0: float
    a: float
    b: float

    def value(self, x: float, y: float) -> float:
        return self.q0 * np.sin(np.pi * x / self.a) * np.sin(np.pi * y / self.b)


@dataclass(frozen=True)
class PlateModel:
    """Geometry, section and boundary data for one analysis case.

    edge_bcs is ordered (u=min, u=max, v=min, v=max) in parametric axes; for
    the square patch these coincide with the physical edges x=0, x=a, y=0, y=b.
    """

    patch: Patch
    section: SectionConstants
    spec: FGMSpec
    shear: ShearModel
    edge_bcs: tuple[BC, BC, BC, BC]
    load: Optional[UniformLoad | SinusoidalLoad] = None
    prestress: Optional[np.ndarray] = None

    def __post_init__(self):
        if len(self.edge_bcs) != 4:
            raise ConfigurationError("exactly four edge conditions are required")
        if self.prestress is not None:
            n0 = np.asarray(self.prestress, dtype=float)
            if n0.shape != (2, 2) or not np.allclose(n0, n0.T):
                raise ConfigurationError("prestress must be a symmetric 2x2 matrix")
            object.__setattr__(self, "prestress", n0)

    @property
    def n_dofs(self) -> int:
        return 4 * self.patch.n_points


@dataclass(frozen=True)
class GlobalSystem:
    """Assembled matrices plus constrained-DOF bookkeeping.

    Matrices stay full-size; solvers eliminate the fixed rows/columns.
    """

    n_dofs: int
    K: Optional[np.ndarray] = None
    M: Optional[np.ndarray] = None
    Kg: Optional[np.ndarray] = None
    F: Optional[np.ndarray] = None
    fixed_dofs: np.ndarray = None

    def __post_init__(self):
        fixed = np.array([], dtype=int) if self.fixed_dofs is None else np.unique(self.fixed_dofs)
        object.__setattr__(self, "fixed_dofs", fixed)

    @property
    def free_dofs(self) -> np.ndarray:
        return np.setdiff1d(np.arange(self.n_dofs), self.fixed_dofs)

    def reduce(self, matrix: np.ndarray) -> np.ndarray:
        free = self.free_dofs
        return matrix[np.ix_(free, free)]

    def expand(self, reduced: np.ndarray) -> np.ndarray:
        """Embed a free-DOF vector (or mode block) into the full DOF space."""
        shape = (self.n_dofs,) + reduced.shape[1:]
        full = np.zeros(shape, dtype=reduced.dtype)
        full[self.free_dofs] = reduced
        return full


def strain_operators(basis: BasisLocal):
    """Element strain matrices (Bm, Bb1, Bb2, Bs, Bg) at one quadrature point.

    Columns are the element DOFs (4 per active control point); the column
    sparsity mirrors the kinematics: membrane strains use only (u0, v0),
    bending curvatures only wb, shear-warping curvatures and shear only ws,
    and the deflection gradient both wb and ws.
    """
    nact = len(basis.active_indices)
    edof = 4 * nact
    dR = basis.dRdx
    d2R = basis.d2Rdx2

    Bm = np.zeros((3, edof))
    Bm[0, 0::4] = dR[:, 0]
    Bm[1, 1::4] = dR[:, 1]
    Bm[2, 0::4] = dR[:, 1]
    Bm[2, 1::4] = dR[:, 0]

    Bb1 = np.zeros((3, edof))
    Bb1[0, 2::4] = -d2R[:, 0]
    Bb1[1, 2::4] = -d2R[:, 1]
    Bb1[2, 2::4] = -2.0 * d2R[:, 2]

    Bb2 = np.zeros((3, edof))
    Bb2[0, 3::4] = d2R[:, 0]
    Bb2[1, 3::4] = d2R[:, 1]
    Bb2[2, 3::4] = 2.0 * d2R[:, 2]

    Bs = np.zeros((2, edof))
    Bs[0, 3::4] = dR[:, 0]
    Bs[1, 3::4] = dR[:, 1]

    Bg = np.zeros((2, edof))
    Bg[0, 2::4] = dR[:, 0]
    Bg[0, 3::4] = dR[:, 0]
    Bg[1, 2::4] = dR[:, 1]
    Bg[1, 3::4] = dR[:, 1]

    return Bm, Bb1, Bb2, Bs, Bg


def _gauss_rule(p: int):
    return np.polynomial.legendre.leggauss(p + 1)


def assemble(model: PlateModel, want=("K", "F")) -> GlobalSystem:
    """Build the requested global matrices/vector in one quadrature sweep."""
    want = set(want)
    unknown = want - {"K", "M", "Kg", "F"}
    if unknown:
        raise ConfigurationError(f"unknown assembly targets {sorted(unknown)}")
    if "Kg" in want and model.prestress is None:
        raise ConfigurationError("geometric stiffness requested without a prestress state")
    if "F" in want and model.load is None:
        raise ConfigurationError("load vector requested without a load description")

    patch = model.patch
    section = model.section
    n = model.n_dofs
    K = np.zeros((n, n)) if "K" in want else None
    M = np.zeros((n, n)) if "M" in want else None
    Kg = np.zeros((n, n)) if "Kg" in want else None
    F = np.zeros(n) if "F" in want else None

    Db = section.bending_block()
    Ds = section.Ds
    if M is not None:
        I0 = section.inertia_block()
        mblock = np.zeros((9, 9))
        for b in range(3):
            mblock[3 * b : 3 * b + 3, 3 * b : 3 * b + 3] = I0
    n0 = model.prestress

    pu, pv = patch.degrees
    gx_u, gw_u = _gauss_rule(pu)
    gx_v, gw_v = _gauss_rule(pv)

    for (u0, u1), (v0, v1) in patch.elements():
        du, dv = 0.5 * (u1 - u0), 0.5 * (v1 - v0)
        for ax, awt in zip(gx_u, gw_u):
            xi = 0.5 * (u0 + u1) + du * ax
            for bx, bwt in zip(gx_v, gw_v):
                eta = 0.5 * (v0 + v1) + dv * bx
                basis = physical_derivs(patch, xi, eta)
                wq = awt * bwt * du * dv * basis.jacobian_det

                dofs = (4 * basis.active_indices[:, None] + np.arange(4)).ravel()
                idx = np.ix_(dofs, dofs)
                Bm, Bb1, Bb2, Bs, Bg = strain_operators(basis)

                if K is not None:
                    Bb = np.vstack([Bm, Bb1, Bb2])
                    K[idx] += wq * (Bb.T @ Db @ Bb + Bs.T @ Ds @ Bs)
                if M is not None:
                    nact = len(basis.active_indices)
                    Rt = np.zeros((9, 4 * nact))
                    Rt[0, 0::4] = basis.R
                    Rt[1, 2::4] = -basis.dRdx[:, 0]
                    Rt[2, 3::4] = basis.dRdx[:, 0]
                    Rt[3, 1::4] = basis.R
                    Rt[4, 2::4] = -basis.dRdx[:, 1]
                    Rt[5, 3::4] = basis.dRdx[:, 1]
                    Rt[6, 2::4] = basis.R
                    Rt[6, 3::4] = basis.R
                    M[idx] += wq * (Rt.T @ mblock @ Rt)
                if Kg is not None:
                    Kg[idx] += wq * (Bg.T @ n0 @ Bg)
                if F is not None:
                    qval = model.load.value(*basis.point)
                    F[dofs[2::4]] += wq * qval * basis.R
                    F[dofs[3::4]] += wq * qval * basis.R

    # element contributions are exactly symmetric; remove roundoff asymmetry
    if K is not None:
        K = 0.5 * (K + K.T)
    if M is not None:
        M = 0.5 * (M + M.T)
    if Kg is not None:
        Kg = 0.5 * (Kg + Kg.T)

    return GlobalSystem(n_dofs=n, K=K, M=M, Kg=Kg, F=F)


def _edge_point_indices(shape: tuple[int, int], edge: int, offset: int) -> np.ndarray:
    """Control point indices on an edge (offset 0) or its inward neighbours (offset 1)."""
    nu, nv = shape
    i = np.arange(nu)
    j = np.arange(nv)
    if edge == 0:
        return offset + j * nu
    if edge == 1:
        return (nu - 1 - offset) + j * nu
    if edge == 2:
        return i + offset * nu
    return i + (nv - 1 - offset) * nu


def apply_boundary_conditions(system: GlobalSystem, model: PlateModel) -> GlobalSystem:
    """Mark constrained DOFs for the model's edge conditions.

    Simple support on a u=const edge fixes (v0, wb, ws); on a v=const edge it
    fixes (u0, wb, ws). A clamped edge fixes all four DOFs on the edge and
    additionally (wb, ws) on the adjacent control point line, which enforces
    a zero normal slope of both deflection parts.
    """
    fixed: set[int] = set(int(d) for d in system.fixed_dofs)
    shape = model.patch.net.shape
    for edge, bc in enumerate(model.edge_bcs):
        if bc is BC.FREE:
            continue
        boundary = _edge_point_indices(shape, edge, 0)
        if bc is BC.SIMPLY_SUPPORTED:
            comps = (1, 2, 3) if edge in (0, 1) else (0, 2, 3)
            for a in boundary:
                for c in comps:
                    fixed.add(4 * int(a) + c)
        elif bc is BC.CLAMPED:
            for a in boundary:
                for c in range(4):
                    fixed.add(4 * int(a) + c)
            for a in _edge_point_indices(shape, edge, 1):
                fixed.add(4 * int(a) + 2)
                fixed.add(4 * int(a) + 3)
    return replace(system, fixed_dofs=np.array(sorted(fixed), dtype=int))
