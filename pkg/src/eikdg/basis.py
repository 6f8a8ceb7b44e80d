"""One-dimensional spectral building blocks.

Gauss-Legendre collocation nodes, quadrature weights, Lagrange
differentiation and endpoint evaluation. Tensor-product element operators
are composed from these with :func:`tensor_apply`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class InvalidDegreeError(ValueError):
    pass


def legendre(n: int, x):
    """Return (P_n(x), P_n'(x)) via the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    p0 = np.ones_like(x)
    if n == 0:
        return p0, np.zeros_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    # derivative from P_n and P_{n-1}; undefined at |x| = 1, use closed form there
    with np.errstate(divide="ignore", invalid="ignore"):
        dp = n * (x * p1 - p0) / (x * x - 1.0)
    edge = np.isclose(np.abs(x), 1.0, rtol=0.0, atol=1e-15)
    if np.any(edge):
        dp = np.where(edge, np.sign(x) ** (n + 1) * 0.5 * n * (n + 1), dp)
    return p1, dp


def gauss_legendre(n_points: int, tol: float = 1e-15, max_iter: int = 100):
    """Nodes and weights of the ``n_points`` Gauss-Legendre rule on [-1, 1]."""
    k = np.arange(1, n_points + 1)
    # Chebyshev-type initial guess, ascending order
    x = -np.cos(np.pi * (k - 0.25) / (n_points + 0.5))
    for _ in range(max_iter):
        p, dp = legendre(n_points, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= tol:
            break
    _, dp = legendre(n_points, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # enforce exact symmetry
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


def gauss_lobatto(n_points: int, tol: float = 1e-15, max_iter: int = 100):
    """Nodes and weights of the ``n_points`` Gauss-Lobatto-Legendre rule."""
    if n_points < 2:
        raise InvalidDegreeError("Gauss-Lobatto needs at least 2 points")
    n = n_points - 1
    x = -np.cos(np.pi * np.arange(n_points) / n)
    for _ in range(max_iter):
        # interior nodes are roots of P_n'; Newton on (1-x^2) P_n'
        p, dp = legendre(n, x)
        pm1, _ = legendre(n - 1, x) if n >= 1 else (np.zeros_like(x), None)
        # (1-x^2)P_n' = n (P_{n-1} - x P_n); its derivative is -n(n+1) P_n
        f = n * (pm1 - x * p)
        df = -n * (n + 1) * p
        dx = np.zeros_like(x)
        dx[1:-1] = f[1:-1] / df[1:-1]
        x = x - dx
        if np.max(np.abs(dx)) <= tol:
            break
    x[0], x[-1] = -1.0, 1.0
    p, _ = legendre(n, x)
    w = 2.0 / (n * (n + 1) * p * p)
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


def barycentric_weights(nodes) -> np.ndarray:
    nodes = np.asarray(nodes, dtype=float)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def lagrange_matrix(nodes, x) -> np.ndarray:
    """Matrix ``L[k, i] = l_i(x_k)`` of Lagrange basis values at points ``x``."""
    nodes = np.asarray(nodes, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    bw = barycentric_weights(nodes)
    diff = x[:, None] - nodes[None, :]
    exact = np.isclose(diff, 0.0, rtol=0.0, atol=1e-15)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = bw[None, :] / diff
        out = t / t.sum(axis=1, keepdims=True)
    rows = exact.any(axis=1)
    if np.any(rows):
        out[rows] = exact[rows].astype(float)
    return out


def differentiation_matrix(nodes) -> np.ndarray:
    """``D[k, i] = l_i'(x_k)`` on the interpolation nodes themselves."""
    nodes = np.asarray(nodes, dtype=float)
    bw = barycentric_weights(nodes)
    n = len(nodes)
    D = np.zeros((n, n))
    for k in range(n):
        for i in range(n):
            if i != k:
                D[k, i] = bw[i] / bw[k] / (nodes[k] - nodes[i])
        # negative-sum trick keeps D @ 1 = 0 to round-off
        D[k, k] = -np.sum(D[k])
    return D


def lagrange_derivative_matrix(nodes, x) -> np.ndarray:
    """``D[k, i] = l_i'(x_k)`` at arbitrary points ``x``.

    Built by interpolating the nodal derivative matrix, which is exact because
    each ``l_i'`` is a polynomial of degree ``p - 1``.
    """
    return lagrange_matrix(nodes, x) @ differentiation_matrix(nodes)


@dataclass(frozen=True)
class Basis1D:
    degree: int
    nodes: np.ndarray
    weights: np.ndarray
    diff_matrix: np.ndarray
    face_left: np.ndarray
    face_right: np.ndarray
    bary: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.degree + 1

    @property
    def order(self) -> int:
        """Formal order of accuracy N = p + 1."""
        return self.degree + 1

    def interpolation_matrix(self, x) -> np.ndarray:
        return lagrange_matrix(self.nodes, x)

    def derivative_matrix_at(self, x) -> np.ndarray:
        return lagrange_derivative_matrix(self.nodes, x)


def gauss_basis(p: int) -> Basis1D:
    """Degree-``p`` Lagrange basis on the ``p + 1`` Gauss-Legendre nodes."""
    if int(p) != p or p < 1:
        raise InvalidDegreeError(f"degree must be an integer >= 1, got {p!r}")
    p = int(p)
    x, w = gauss_legendre(p + 1)
    for arr in (x, w):
        arr.setflags(write=False)
    D = differentiation_matrix(x)
    fl = lagrange_matrix(x, -1.0)[0]
    fr = lagrange_matrix(x, 1.0)[0]
    bw = barycentric_weights(x)
    for arr in (D, fl, fr, bw):
        arr.setflags(write=False)
    return Basis1D(p, x, w, D, fl, fr, bw)


def interpolate(basis: Basis1D, nodal_values, x: float) -> float:
    """Evaluate the Lagrange interpolant of ``nodal_values`` at ``x``."""
    nodal_values = np.asarray(nodal_values, dtype=float)
    if nodal_values.shape[0] != basis.n:
        raise ValueError(f"expected {basis.n} nodal values, got {nodal_values.shape[0]}")
    return float(basis.interpolation_matrix(x)[0] @ nodal_values)


def tensor_apply(op_matrix, field, direction: str | int):
    """Apply ``op_matrix`` along one reference direction of a tensor field.

    Nodal grids are indexed ``[i, j]`` with ``i`` along xi and ``j`` along eta.
    Accepted layouts: a flat ``(n*n,)`` vector (C order of the ``(n, n)`` grid),
    a single ``(n, n)`` grid, or a batch ``(E, n, n, ...)`` with trailing
    component axes. Cost is one small matrix product per grid line.
    """
    op = np.asarray(op_matrix, dtype=float)
    f = np.asarray(field, dtype=float)
    axis = {"xi": 0, "ξ": 0, 0: 0, "eta": 1, "η": 1, 1: 1}.get(direction)
    if axis is None:
        raise ValueError(f"unknown direction {direction!r}")
    m = op.shape[1]
    if f.ndim == 1:
        if f.shape[0] != m * m:
            raise ValueError(f"field of length {f.shape[0]} does not match operator size {m}")
        g = f.reshape(m, m)
        return tensor_apply(op, g, axis).reshape(-1)
    if f.ndim == 2:
        if f.shape != (m, m):
            raise ValueError(f"field shape {f.shape} does not match operator size {m}")
        return op @ f if axis == 0 else f @ op.T
    if f.shape[1] != m or f.shape[2] != m:
        raise ValueError(f"field shape {f.shape} does not match operator size {m}")
    if axis == 0:
        return np.einsum("ki,ei...->ek...", op, f.reshape(f.shape[0], m, m, -1)).reshape(
            (f.shape[0], op.shape[0], m) + f.shape[3:]
        )
    return np.einsum("lj,eij...->eil...", op, f.reshape(f.shape[0], m, m, -1)).reshape(
        (f.shape[0], m, op.shape[0]) + f.shape[3:]
    )
