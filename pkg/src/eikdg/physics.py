"""Pointwise physics of the viscous eikonal system in two dimensions.

The unknowns are ``U = (s, u, v)``: the distance and its gradient
``q = (u, v)``. All functions are vectorized over leading axes; state arrays
end in a component axis of length 3 and vector quantities in an axis of
length 2. With unit speed the coupling multiplier and the Lax-Friedrichs
eigenvalue are both 1.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np


class Mode(str, Enum):
    AUTO = "auto"
    OFF = "off"


class InvalidViscosityError(ValueError):
    pass


class NonUnitNormalError(ValueError):
    pass


@dataclass(frozen=True)
class EikonalConfig:
    """Discretization and physics parameters.

    ``order`` is the formal order N (polynomial degree N - 1). ``c`` scales the
    artificial viscosity. Reference scales and the speed are fixed to 1.
    """

    order: int = 4
    c: float = 0.0
    g1_mode: Mode = Mode.AUTO
    g2_mode: Mode = Mode.AUTO
    eps_q: float = 1e-8
    eta_br2: float = 4.0
    L_ref: float = 1.0
    U_ref: float = 1.0
    f: float = 1.0

    def __post_init__(self):
        if self.order < 2:
            raise ValueError(f"order must be >= 2, got {self.order}")
        if self.c < 0:
            raise InvalidViscosityError(f"viscosity coefficient must be >= 0, got {self.c}")
        object.__setattr__(self, "g1_mode", Mode(self.g1_mode))
        object.__setattr__(self, "g2_mode", Mode(self.g2_mode))

    @property
    def lam(self) -> float:
        return 1.0 / (self.L_ref * self.f)

    @property
    def gamma(self) -> float:
        return 1.0 / self.f

    def with_(self, **kw) -> "EikonalConfig":
        return replace(self, **kw)


def advective_flux(U, g1):
    """Advective flux ``G[..., k, l]``: component ``k``, direction ``l``.

    ``G^l = (q_l s, q_l u - g1 delta_1l s, q_l v - g1 delta_2l s)``.
    ``g1`` broadcasts against ``U[..., 0]``.
    """
    U = np.asarray(U, dtype=float)
    s, u, v = U[..., 0], U[..., 1], U[..., 2]
    g1s = np.asarray(g1) * s
    G = np.empty(U.shape + (2,))
    G[..., 0, 0] = u * s
    G[..., 0, 1] = v * s
    G[..., 1, 0] = u * u - g1s
    G[..., 1, 1] = v * u
    G[..., 2, 0] = u * v
    G[..., 2, 1] = v * v - g1s
    return G


def normal_flux(U, g1, n):
    """``G(U) . n`` without forming the full flux tensor."""
    U = np.asarray(U, dtype=float)
    n = np.asarray(n, dtype=float)
    s, u, v = U[..., 0], U[..., 1], U[..., 2]
    nx, ny = n[..., 0], n[..., 1]
    qn = u * nx + v * ny
    g1s = np.asarray(g1) * s
    return np.stack([qn * s, qn * u - g1s * nx, qn * v - g1s * ny], axis=-1)


def viscous_flux(grad_U, mu):
    """``V^l = mu * d_l U``; ``grad_U[..., k, l]`` and ``mu`` broadcastable."""
    mu = np.asarray(mu, dtype=float)
    if np.any(mu < 0):
        raise InvalidViscosityError("viscosity must be non-negative")
    grad_U = np.asarray(grad_U, dtype=float)
    return mu[..., None, None] * grad_U if mu.ndim else mu * grad_U


def g2_times_qnorm(qnorm, div_q, mode: Mode, eps_q: float):
    """The factor ``g2 * |q|`` multiplying ``s div(q)`` in the distance source.

    AUTO: ``|q|`` where ``div q > 0`` (rarefaction) and ``|q| / max(|q|, eps)``
    otherwise (shock side, including the tie ``div q = 0``). OFF: exactly 1.
    """
    if Mode(mode) is Mode.OFF:
        return np.ones_like(np.asarray(qnorm, dtype=float))
    qnorm = np.asarray(qnorm, dtype=float)
    return np.where(np.asarray(div_q) > 0, qnorm, qnorm / np.maximum(qnorm, eps_q))


def source(U, div_q, g1, g2_mode: Mode = Mode.AUTO, eps_q: float = 1e-8, f: float = 1.0):
    """Source vector ``S`` of the system; ``grad(1 / 2f^2)`` vanishes for constant f."""
    U = np.asarray(U, dtype=float)
    s, q = U[..., 0], U[..., 1:]
    qnorm = np.sqrt(np.sum(q * q, axis=-1))
    div_q = np.asarray(div_q, dtype=float)
    S = np.empty_like(U)
    S[..., 0] = 1.0 / f ** 2 + s * div_q * g2_times_qnorm(qnorm, div_q, g2_mode, eps_q)
    g1 = np.asarray(g1)
    S[..., 1] = q[..., 0] * div_q - g1 * q[..., 0]
    S[..., 2] = q[..., 1] * div_q - g1 * q[..., 1]
    return S


def artificial_viscosity(s_mean, vol, N: int, c: float, L_ref: float = 1.0, f: float = 1.0):
    """Element viscosity ``c * (sqrt(vol) / N) * sqrt(max(s_mean, 0)) / sqrt(L_ref f)``."""
    if c == 0:
        return np.zeros_like(np.asarray(s_mean, dtype=float))
    delta = np.sqrt(np.asarray(vol, dtype=float)) / N
    return c * delta * np.sqrt(np.maximum(np.asarray(s_mean, dtype=float), 0.0)) / np.sqrt(L_ref * f)


def coupling_active(mu, mode: Mode, lam: float = 1.0):
    """Element-wise ``g1``: ``lam`` where the viscosity is positive (AUTO), else 0."""
    mu = np.asarray(mu, dtype=float)
    if Mode(mode) is Mode.OFF:
        return np.zeros_like(mu)
    return np.where(mu > 0, lam, 0.0)


def _check_unit(n):
    n = np.asarray(n, dtype=float)
    if np.any(np.abs(np.linalg.norm(n, axis=-1) - 1.0) > 1e-12):
        raise NonUnitNormalError("normal vector must have unit length")
    return n


def lax_friedrichs(left, right, n, g1_left, g1_right=None, gamma: float = 1.0, check: bool = True):
    """Lax-Friedrichs normal flux seen from the ``left`` (interior) side.

    ``0.5 * (G(left).n + G(right).n - gamma * (right - left))``; each side's
    physical flux uses its own coupling parameter.
    """
    if check:
        n = _check_unit(n)
    if g1_right is None:
        g1_right = g1_left
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    return 0.5 * (normal_flux(left, g1_left, n) + normal_flux(right, g1_right, n) - gamma * (right - left))


def wall_boundary_state(n):
    """Weak Dirichlet state on a wall: ``s = 0`` and ``q = -n``."""
    n = np.asarray(n, dtype=float)
    out = np.zeros(n.shape[:-1] + (3,))
    out[..., 1:] = -n
    return out


def farfield_flux(interior, interior_viscous, n, g1):
    """Extrapolation closure: interior advective and viscous normal fluxes.

    Returns ``(G(U-) . n, V- . n)``; ``interior_viscous[..., k, l]``.
    """
    n = np.asarray(n, dtype=float)
    Gn = normal_flux(interior, g1, n)
    Vn = np.einsum("...kl,...l->...k", np.asarray(interior_viscous, dtype=float), n)
    return Gn, Vn
