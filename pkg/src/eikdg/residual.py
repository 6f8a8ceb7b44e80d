"""Discrete weak-form residual of the viscous eikonal system.

Collocated Gauss-Legendre DGSEM on curved quads. The residual of element
``e`` at node ``(i, j)`` and component ``k`` is

    R = sum_faces <(G* - V*) . n, phi> - <G - V, grad phi> - <S, phi>

so a steady discrete solution satisfies ``R = 0``. Interface advection uses
the Lax-Friedrichs flux, diffusion the second Bassi-Rebay scheme (BR2).
Gradients entering the viscous flux and the divergence in the sources are
BR2-corrected: the broken gradient plus the lifted interface jumps.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import Basis1D, gauss_basis
from .mesh import FARFIELD, WALL, CurvedMesh, ElementMetrics, compute_metrics
from .physics import (
    EikonalConfig,
    advective_flux,
    artificial_viscosity,
    coupling_active,
    lax_friedrichs,
    normal_flux,
    source,
    wall_boundary_state,
)

INTERIOR, WALL_FACE, FAR_FACE = 0, 1, 2
N_COMPONENTS = 3


class NonFiniteInputError(ValueError):
    pass


class Discretization:
    """Precomputed operators and connectivity for one (mesh, basis) pair."""

    def __init__(self, mesh: CurvedMesh, basis: Basis1D, metrics: ElementMetrics | None = None):
        self.mesh = mesh
        self.basis = basis
        self.metrics = metrics if metrics is not None else compute_metrics(mesh, basis)
        n = basis.n
        E = mesh.n_elements
        self.n, self.E = n, E
        w = basis.weights
        self.w = np.asarray(w)
        self.D = np.asarray(basis.diff_matrix)
        # A[i, k] = w_k D[k, i]: weak derivative of the test function
        self.A = (self.w[:, None] * self.D).T.copy()
        self.fl = np.asarray(basis.face_left)
        self.fr = np.asarray(basis.face_right)
        m = self.metrics
        self.mass = self.w[None, :, None] * self.w[None, None, :] * m.J
        self.nJ = m.normals * m.surf_jac[..., None]
        self.face_w = self.w[None, None, :] * m.surf_jac

        kind = np.full((E, 4), -1, dtype=np.int64)
        nb_elem = np.repeat(np.arange(E)[:, None], 4, axis=1)
        ext = np.arange(E * 4 * n).reshape(E, 4, n)
        idx = np.arange(E * 4 * n).reshape(E, 4, n)
        for e, f, e2, f2, o in mesh.interior_faces:
            pts = np.arange(n) if o == 0 else np.arange(n)[::-1]
            ext[e, f] = idx[e2, f2][pts]
            ext[e2, f2] = idx[e, f][pts]
            kind[e, f] = kind[e2, f2] = INTERIOR
            nb_elem[e, f], nb_elem[e2, f2] = e2, e
        for (e, f), tag in zip(mesh.boundary_faces, mesh.boundary_tags):
            kind[e, f] = WALL_FACE if tag == WALL else FAR_FACE
        assert np.all(kind >= 0)
        self.kind = kind
        self.nb_elem = nb_elem
        self.ext_index = ext.reshape(-1)
        self.is_int = (kind == INTERIOR)[..., None, None]
        self.is_wall = (kind == WALL_FACE)[..., None, None]
        self.is_far = (kind == FAR_FACE)[..., None, None]
        self.wall_state = wall_boundary_state(m.normals)
        # trace of a single-face lifting at its own face points
        inv = 1.0 / (self.w[None, :, None] * m.J)  # 1 / (w_i J_ij), weight along xi
        inv_eta = 1.0 / (self.w[None, None, :] * m.J)
        self.lift_tr_coef = np.stack([
            np.einsum("i,eij->ej", self.fl ** 2, inv),
            np.einsum("i,eij->ej", self.fr ** 2, inv),
            np.einsum("j,eij->ei", self.fl ** 2, inv_eta),
            np.einsum("j,eij->ei", self.fr ** 2, inv_eta),
        ], axis=1)
        self._inv_wJ_xi = inv
        self._inv_wJ_eta = inv_eta

    @classmethod
    def build(cls, mesh: CurvedMesh, order: int) -> "Discretization":
        return cls(mesh, gauss_basis(order - 1))

    @property
    def shape(self):
        return (self.E, self.n, self.n, N_COMPONENTS)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    # ---- elementary operators -------------------------------------------
    def trace(self, X):
        """Values on the four faces: ``(E, n, n, ...) -> (E, 4, n, ...)``."""
        fl, fr = self.fl, self.fr
        return np.stack([
            np.einsum("i,ei...->e...", fl, X),
            np.einsum("i,ei...->e...", fr, X),
            np.einsum("j,eij...->ei...", fl, X),
            np.einsum("j,eij...->ei...", fr, X),
        ], axis=1)

    def exterior(self, T):
        """Neighbour's values at matching face points (self on boundaries)."""
        flat = T.reshape((-1,) + T.shape[3:])
        return flat[self.ext_index].reshape(T.shape)

    def ref_derivatives(self, X):
        dxi = np.einsum("ik,ekj...->eij...", self.D, X)
        deta = np.einsum("jl,eil...->eij...", self.D, X)
        return dxi, deta

    def grad(self, X):
        """Physical gradient of the element polynomials, trailing axis of 2."""
        dxi, deta = self.ref_derivatives(X)
        m = self.metrics
        extra = X.ndim - 3
        sh = (slice(None),) * 3 + (None,) * extra
        ja1, ja2, J = m.ja1, m.ja2, m.J
        gx = (ja1[..., 0][sh] * dxi + ja2[..., 0][sh] * deta) / J[sh]
        gy = (ja1[..., 1][sh] * dxi + ja2[..., 1][sh] * deta) / J[sh]
        return np.stack([gx, gy], axis=-1)

    def lift(self, jump):
        """BR2 liftings of face jumps ``(E, 4, n, c)``.

        Returns the summed volume lifting ``(E, n, n, c, 2)`` and each face's
        own lifting traced back to that face ``(E, 4, n, c, 2)``.
        """
        r = jump[..., None] * self.nJ[:, :, :, None, :]
        iv, ie = self._inv_wJ_xi, self._inv_wJ_eta
        vol = (
            np.einsum("i,eij,ejcd->eijcd", self.fl, iv, r[:, 0])
            + np.einsum("i,eij,ejcd->eijcd", self.fr, iv, r[:, 1])
            + np.einsum("j,eij,eicd->eijcd", self.fl, ie, r[:, 2])
            + np.einsum("j,eij,eicd->eijcd", self.fr, ie, r[:, 3])
        )
        tr = self.lift_tr_coef[..., None, None] * r
        return vol, tr

    def volume(self, F):
        """``<F, grad phi>`` for a flux ``F (E, n, n, c, 2)``."""
        m = self.metrics
        F1 = F[..., 0] * m.ja1[..., 0][..., None] + F[..., 1] * m.ja1[..., 1][..., None]
        F2 = F[..., 0] * m.ja2[..., 0][..., None] + F[..., 1] * m.ja2[..., 1][..., None]
        w = self.w
        return (w[None, None, :, None] * np.einsum("ik,ekjc->eijc", self.A, F1)
                + w[None, :, None, None] * np.einsum("jl,eilc->eijc", self.A, F2))

    def surface(self, Fn):
        """``sum_f <Fn, phi>_f`` for normal fluxes ``Fn (E, 4, n, c)``."""
        g = self.face_w[..., None] * Fn
        return (np.einsum("i,ejc->eijc", self.fl, g[:, 0])
                + np.einsum("i,ejc->eijc", self.fr, g[:, 1])
                + np.einsum("j,eic->eijc", self.fl, g[:, 2])
                + np.einsum("j,eic->eijc", self.fr, g[:, 3]))

    def integrate(self, X):
        """Element integrals of nodal data ``(E, n, n, ...) -> (E, ...)``."""
        return np.einsum("eij,eij...->e...", self.mass, X)

    def norm(self, R) -> float:
        """L2 norm of the strong-form residual ``M^-1 R``: ``sqrt(R^T M^-1 R)``."""
        R = np.asarray(R).reshape(self.shape)
        return float(np.sqrt(np.sum(R * R / self.mass[..., None])))

    def element_means(self, X):
        return self.integrate(X) / self.metrics.vol.reshape((-1,) + (1,) * (X.ndim - 3))


def check_finite(U):
    bad = ~np.isfinite(U)
    if np.any(bad):
        e, i, j, k = np.argwhere(bad)[0]
        name = ("s", "u", "v")[k] if k < 3 else str(k)
        raise NonFiniteInputError(f"non-finite value in element {e}, component {name} (node {i},{j})")


def br2_lift(face_jump, disc: Discretization):
    """BR2 lifting of ``Uhat - U`` on every element face (see ``Discretization.lift``)."""
    return disc.lift(face_jump)


def br2_face_flux(grad_tr, lift_tr, mu, disc: Discretization, eta: float):
    """Interior viscous normal flux ``{mu (grad U + eta r_f)} . n``."""
    own = mu[:, None, None, None, None] * (grad_tr + eta * lift_tr)
    avg = 0.5 * (own + disc.exterior(own))
    return np.einsum("efnkd,efnd->efnk", avg, disc.metrics.normals)


@dataclass
class ResidualParts:
    residual: np.ndarray
    mu: np.ndarray
    g1: np.ndarray
    grad: np.ndarray
    Q: np.ndarray
    div_q: np.ndarray


def compute_volume_gradients(field, disc: Discretization):
    """Broken gradients: ``grad s (E,n,n,2)``, ``grad q (E,n,n,2,2)``, ``div q``."""
    g = disc.grad(np.asarray(field).reshape(disc.shape))
    return g[..., 0, :], g[..., 1:, :], g[..., 1, 0] + g[..., 2, 1]


def corrected_gradient(U, disc: Discretization, traces=None):
    """BR2-corrected gradient: broken gradient plus lifting of ``Uhat - U``."""
    tr = disc.trace(U) if traces is None else traces
    ext = disc.exterior(tr)
    jump = np.where(disc.is_int, 0.5 * (ext - tr), 0.0)
    jump = np.where(disc.is_wall, disc.wall_state - tr, jump)
    grad = disc.grad(U)
    lv, ltr = disc.lift(jump)
    return grad, grad + lv, ltr, tr, ext


def evaluate_residual(U, disc: Discretization, config: EikonalConfig, parts: bool = False):
    """Weak-form residual, same layout as ``U`` ``(E, n, n, 3)``."""
    U = np.asarray(U, dtype=float).reshape(disc.shape)
    check_finite(U)
    m = disc.metrics
    grad, Q, lift_tr, tr, ext = corrected_gradient(U, disc)

    s_mean = disc.element_means(U[..., 0])
    mu = artificial_viscosity(s_mean, m.vol, config.order, config.c, config.L_ref, config.f)
    g1 = coupling_active(mu, config.g1_mode, config.lam)
    div_q = Q[..., 1, 0] + Q[..., 2, 1]

    ge = g1[:, None, None]
    F = advective_flux(U, ge)
    viscous = bool(np.any(mu > 0))
    if viscous:
        F = F - mu[:, None, None, None, None] * Q
    S = source(U, div_q, ge, config.g2_mode, config.eps_q, config.f)

    nrm = m.normals
    gf = np.broadcast_to(g1[:, None, None], disc.kind.shape + (disc.n,))
    g_ext = g1[disc.nb_elem][:, :, None]
    Fn = lax_friedrichs(tr, ext, nrm, gf, g_ext, config.gamma, check=False)
    Fn = np.where(disc.is_wall, normal_flux(disc.wall_state, gf, nrm), Fn)
    Fn = np.where(disc.is_far, normal_flux(tr, gf, nrm), Fn)
    if viscous:
        grad_tr = disc.trace(grad)
        Vn = br2_face_flux(grad_tr, lift_tr, mu, disc, config.eta_br2)
        Q_tr = disc.trace(Q)
        Vb = mu[:, None, None, None] * np.einsum("efnkd,efnd->efnk", Q_tr, nrm)
        Vn = np.where(disc.is_int, Vn, Vb)
        Fn = Fn - Vn

    R = disc.surface(Fn) - disc.volume(F) - disc.mass[..., None] * S
    if parts:
        return ResidualParts(R, mu, g1, grad, Q, div_q)
    return R


def diffusion_residual(U, disc: Discretization, mu, boundary_value, eta: float = 4.0):
    """BR2 residual of ``-div(mu grad U) = 0`` with Dirichlet data on all boundaries.

    ``boundary_value`` is ``(E, 4, n, c)``; only boundary faces are read.
    Boundary viscous flux is the interior corrected flux, as for walls.
    """
    U = np.asarray(U, dtype=float)
    mu = np.broadcast_to(np.asarray(mu, dtype=float), (disc.E,))
    tr = disc.trace(U)
    ext = disc.exterior(tr)
    jump = np.where(disc.is_int, 0.5 * (ext - tr), boundary_value - tr)
    grad = disc.grad(U)
    lv, ltr = disc.lift(jump)
    Q = grad + lv
    F = -mu[:, None, None, None, None] * Q
    Vn = br2_face_flux(disc.trace(grad), ltr, mu, disc, eta)
    Vb = mu[:, None, None, None] * np.einsum("efnkd,efnd->efnk", disc.trace(Q), disc.metrics.normals)
    Vn = np.where(disc.is_int, Vn, Vb)
    return disc.surface(-Vn) - disc.volume(F)
