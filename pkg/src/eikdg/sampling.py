"""Evaluation of element polynomials at arbitrary reference and physical points."""
from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from .basis import Basis1D, gauss_lobatto, lagrange_derivative_matrix, lagrange_matrix
from .mesh import CurvedMesh


class PointLocationError(ValueError):
    pass


def uniform_reference_points(n_points: int) -> np.ndarray:
    if n_points < 2:
        raise ValueError("need at least 2 points per direction")
    return np.linspace(-1.0, 1.0, n_points)


def evaluate_tensor(nodes, values, xi, eta):
    """Tensor Lagrange interpolant of ``values (E, n, n, ...)`` on a grid ``xi x eta``.

    Returns ``(E, len(xi), len(eta), ...)``.
    """
    Lx = lagrange_matrix(nodes, np.atleast_1d(xi))
    Ly = lagrange_matrix(nodes, np.atleast_1d(eta))
    return np.einsum("ia,jb,eab...->eij...", Lx, Ly, values)


def map_reference(mesh: CurvedMesh, xi, eta, elements=None):
    """Physical coordinates of the reference grid ``xi x eta`` in each element."""
    z = gauss_lobatto(mesh.geometry_order + 1)[0]
    X = mesh.nodes if elements is None else mesh.nodes[elements]
    return evaluate_tensor(z, X, xi, eta)


def _point_values(nodes, values, xi, eta):
    """Interpolant of per-point element data ``values (P, n, n, ...)`` at ``(xi[p], eta[p])``."""
    Lx = lagrange_matrix(nodes, xi)
    Ly = lagrange_matrix(nodes, eta)
    return np.einsum("pa,pb,pab...->p...", Lx, Ly, values)


def invert_mapping(mesh: CurvedMesh, elements, points, tol: float = 1e-13, max_iter: int = 30):
    """Newton inversion of the element maps; returns ``(xi, eta, converged)``."""
    z = gauss_lobatto(mesh.geometry_order + 1)[0]
    X = mesh.nodes[elements]
    p = np.asarray(points, dtype=float)
    ref = np.zeros((len(p), 2))
    ok = np.zeros(len(p), dtype=bool)
    for _ in range(max_iter):
        Lx, Ly = lagrange_matrix(z, ref[:, 0]), lagrange_matrix(z, ref[:, 1])
        Dx, Dy = lagrange_derivative_matrix(z, ref[:, 0]), lagrange_derivative_matrix(z, ref[:, 1])
        x = np.einsum("pa,pb,pabc->pc", Lx, Ly, X)
        jx = np.einsum("pa,pb,pabc->pc", Dx, Ly, X)
        jy = np.einsum("pa,pb,pabc->pc", Lx, Dy, X)
        r = p - x
        det = jx[:, 0] * jy[:, 1] - jy[:, 0] * jx[:, 1]
        d0 = (r[:, 0] * jy[:, 1] - jy[:, 0] * r[:, 1]) / det
        d1 = (jx[:, 0] * r[:, 1] - r[:, 0] * jx[:, 1]) / det
        ref[:, 0] += d0
        ref[:, 1] += d1
        # keep iterates near the element so far-away candidates stay finite
        np.clip(ref, -3.0, 3.0, out=ref)
        ok = np.hypot(d0, d1) < tol * (1.0 + np.abs(ref).max(axis=1))
        if ok.all():
            break
    return ref[:, 0], ref[:, 1], ok


class PointLocator:
    """Find the element and reference coordinates of physical points."""

    def __init__(self, mesh: CurvedMesh, candidates: int = 8, slack: float = 1e-9):
        self.mesh = mesh
        self.slack = slack
        self.k = min(candidates, mesh.n_elements)
        self.centers = mesh.nodes.reshape(mesh.n_elements, -1, 2).mean(axis=1)
        self.tree = cKDTree(self.centers)

    def locate(self, points):
        """Return ``(element, xi, eta)`` arrays; raises if a point lies outside the mesh."""
        p = np.asarray(points, dtype=float).reshape(-1, 2)
        elem = np.full(len(p), -1, dtype=np.int64)
        xi = np.zeros(len(p))
        eta = np.zeros(len(p))
        todo = np.arange(len(p))
        k = self.k
        while len(todo):
            _, cand = self.tree.query(p[todo], k=k)
            cand = np.asarray(cand).reshape(len(todo), -1)
            for c in range(cand.shape[1]):
                if not len(todo):
                    break
                e = cand[:, c]
                a, b, ok = invert_mapping(self.mesh, e, p[todo])
                inside = ok & (np.abs(a) <= 1 + self.slack) & (np.abs(b) <= 1 + self.slack)
                hit = todo[inside]
                elem[hit], xi[hit], eta[hit] = e[inside], np.clip(a[inside], -1, 1), np.clip(b[inside], -1, 1)
                todo, cand = todo[~inside], cand[~inside]
            if not len(todo):
                break
            if k >= self.mesh.n_elements:
                raise PointLocationError(f"point {p[todo[0]].tolist()} is outside the mesh")
            k = min(self.mesh.n_elements, 4 * k)
        return elem, xi, eta


def evaluate_at_points(mesh: CurvedMesh, basis: Basis1D, values, points, locator: PointLocator | None = None):
    """Solution polynomials ``values (E, n, n, ...)`` evaluated at physical points."""
    locator = locator or PointLocator(mesh)
    e, xi, eta = locator.locate(points)
    return _point_values(basis.nodes, np.asarray(values)[e], xi, eta)
