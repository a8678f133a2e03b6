"""One-dimensional B-spline primitives: knot vectors, span lookup, basis derivatives.

All knot vectors are open (clamped): the end knots repeat degree+1 times, so the
curve interpolates its end control points and evaluation at the right endpoint
falls back to the last nonempty span.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RefinementError


@dataclass(frozen=True)
class KnotVector:
    """Nondecreasing knot sequence with its polynomial degree.

    Invariants enforced on construction: nondecreasing values, open ends
    (first/last knot repeated exactly degree+1 times), interior multiplicity
    at most the degree.
    """

    values: np.ndarray
    degree: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        p = self.degree
        if p < 0:
            raise ValueError("degree must be nonnegative")
        if values.ndim != 1 or len(values) < 2 * (p + 1):
            raise ValueError("knot vector too short for degree %d" % p)
        if np.any(np.diff(values) < 0):
            raise ValueError("knot values must be nondecreasing")
        if not np.all(values[: p + 1] == values[0]) or values[p + 1] == values[0]:
            raise ValueError("first knot must repeat exactly degree+1 times")
        if not np.all(values[-(p + 1):] == values[-1]) or values[-(p + 2)] == values[-1]:
            raise ValueError("last knot must repeat exactly degree+1 times")
        interior = values[p + 1 : len(values) - (p + 1)]
        if interior.size:
            uniq, counts = np.unique(interior, return_counts=True)
            if np.any(counts > p):
                raise ValueError("interior knot multiplicity exceeds degree")

    @property
    def n_basis(self) -> int:
        return len(self.values) - self.degree - 1

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.values[0]), float(self.values[-1])

    def spans(self) -> list[tuple[int, float, float]]:
        """Nonempty spans as (index, left, right) triples."""
        v = self.values
        return [
            (i, float(v[i]), float(v[i + 1]))
            for i in range(self.degree, len(v) - self.degree - 1)
            if v[i + 1] > v[i]
        ]


def open_uniform_knots(degree: int, n_elements: int, interior_multiplicity: int = 1) -> KnotVector:
    """Open knot vector on [0, 1] with n_elements uniformly spaced spans.

    interior_multiplicity 1 gives maximal smoothness; higher values lower the
    continuity across elements (it must stay below the degree).
    """
    if not 1 <= interior_multiplicity <= max(degree - 1, 1):
        raise ValueError("interior multiplicity must be in [1, degree-1]")
    interior = np.repeat(np.arange(1, n_elements) / n_elements, interior_multiplicity)
    values = np.concatenate([np.zeros(degree + 1), interior, np.ones(degree + 1)])
    return KnotVector(values, degree)


def find_span(knots: KnotVector, xi: float) -> int:
    """0-based index i with values[i] <= xi < values[i+1].

    At the right end of the domain the last nonempty span is returned so
    that boundary sampling stays evaluable.
    """
    v = knots.values
    lo, hi = knots.domain
    if xi < lo or xi > hi:
        raise DomainError(f"parameter {xi} outside knot range [{lo}, {hi}]")
    n = knots.n_basis
    if xi >= v[n]:  # right endpoint: clamp to last nonempty span
        span = n - 1
        while v[span + 1] <= v[span]:
            span -= 1
        return span
    return int(np.searchsorted(v, xi, side="right") - 1)


def basis_derivs(knots: KnotVector, xi: float, max_deriv: int = 2) -> tuple[int, np.ndarray]:
    """Nonzero basis functions and derivatives at xi.

    Returns (span, ders) where ders has shape (max_deriv+1, degree+1);
    ders[k, j] is the k-th derivative of basis function span-degree+j.
    Zero-width knot differences follow the 0/0 -> 0 convention of the
    recursion and never raise.
    """
    if max_deriv < 0 or max_deriv > 2:
        raise ValueError("max_deriv must be 0, 1 or 2")
    span = find_span(knots, xi)
    p = knots.degree
    U = knots.values
    nd = min(max_deriv, p)

    ndu = np.zeros((p + 1, p + 1))
    ndu[0, 0] = 1.0
    left = np.zeros(p + 1)
    right = np.zeros(p + 1)
    for j in range(1, p + 1):
        left[j] = xi - U[span + 1 - j]
        right[j] = U[span + j] - xi
        saved = 0.0
        for r in range(j):
            ndu[j, r] = right[r + 1] + left[j - r]
            temp = ndu[r, j - 1] / ndu[j, r]
            ndu[r, j] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        ndu[j, j] = saved

    ders = np.zeros((max_deriv + 1, p + 1))
    ders[0, :] = ndu[:, p]

    a = np.zeros((2, p + 1))
    for r in range(p + 1):
        s1, s2 = 0, 1
        a[0, 0] = 1.0
        for k in range(1, nd + 1):
            d = 0.0
            rk = r - k
            pk = p - k
            if r >= k:
                a[s2, 0] = a[s1, 0] / ndu[pk + 1, rk]
                d = a[s2, 0] * ndu[rk, pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = k - 1 if r - 1 <= pk else p - r
            for j in range(j1, j2 + 1):
                a[s2, j] = (a[s1, j] - a[s1, j - 1]) / ndu[pk + 1, rk + j]
                d += a[s2, j] * ndu[rk + j, pk]
            if r <= pk:
                a[s2, k] = -a[s1, k - 1] / ndu[pk + 1, r]
                d += a[s2, k] * ndu[r, pk]
            ders[k, r] = d
            s1, s2 = s2, s1

    fac = float(p)
    for k in range(1, nd + 1):
        ders[k, :] *= fac
        fac *= p - k
    return span, ders


def insert_knot(knots: KnotVector, ctrl: np.ndarray, xi: float) -> tuple[KnotVector, np.ndarray]:
    """Insert one knot at xi (Boehm), returning the refined vector and net.

    ctrl has shape (n_basis, dim) and is treated as homogeneous coordinates;
    geometry is preserved exactly.
    """
    v = knots.values
    p = knots.degree
    lo, hi = knots.domain
    if not (lo < xi < hi):
        raise RefinementError(f"inserted knot {xi} must lie strictly inside ({lo}, {hi})")
    mult = int(np.sum(v == xi))
    if mult >= p:
        raise RefinementError(f"knot {xi} already has multiplicity {mult} (max {p} allowed)")
    k = int(np.searchsorted(v, xi, side="right") - 1)
    ctrl = np.asarray(ctrl, dtype=float)
    new_ctrl = np.empty((ctrl.shape[0] + 1, ctrl.shape[1]))
    new_ctrl[: k - p + 1] = ctrl[: k - p + 1]
    new_ctrl[k + 1 :] = ctrl[k:]
    for i in range(k - p + 1, k + 1):
        denom = v[i + p] - v[i]
        alpha = (xi - v[i]) / denom if denom > 0 else 0.0
        new_ctrl[i] = alpha * ctrl[i] + (1.0 - alpha) * ctrl[i - 1]
    new_values = np.insert(v, k + 1, xi)
    return KnotVector(new_values, p), new_ctrl


def elevate_bezier(ctrl: np.ndarray, times: int = 1) -> np.ndarray:
    """Degree-elevate a single Bezier segment given by its homogeneous net."""
    ctrl = np.asarray(ctrl, dtype=float)
    for _ in range(times):
        p = ctrl.shape[0] - 1
        out = np.empty((p + 2, ctrl.shape[1]))
        out[0] = ctrl[0]
        out[p + 1] = ctrl[p]
        for i in range(1, p + 1):
            t = i / (p + 1)
            out[i] = t * ctrl[i - 1] + (1.0 - t) * ctrl[i]
        ctrl = out
    return ctrl


def greville_abscissae(knots: KnotVector) -> np.ndarray:
    """Knot averages; with them as coefficients the spline reproduces x -> x."""
    p = knots.degree
    v = knots.values
    return np.array([v[i + 1 : i + p + 1].mean() for i in range(knots.n_basis)])
