"""Distance oracles, error norms and the convergence-study driver."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.spatial import cKDTree

from .mesh import CurvedMesh
from .residual import Discretization

log = logging.getLogger(__name__)


class DomainError(ValueError):
    pass


class Geometry(str, Enum):
    CYLINDER = "cylinder"
    SQUARE = "square"
    CHANNEL_FLAT = "channel_flat"
    PARALLEL_WALLS = "parallel_walls"


@dataclass(frozen=True)
class ExactSolution:
    """Closed-form distance for a simple obstacle.

    ``size`` is the cylinder radius, the square half width, or the channel
    height / wall gap. Flat channels have their lower wall at ``y = 0``.
    """

    geometry: Geometry
    size: float

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry(self.geometry))

    def distance(self, points, check: bool = True):
        p = np.asarray(points, dtype=float)
        x, y = p[..., 0], p[..., 1]
        a = self.size
        g = self.geometry
        if g is Geometry.CYLINDER:
            d = np.hypot(x, y) - a
        elif g is Geometry.SQUARE:
            dx = np.maximum(np.abs(x) - a, 0.0)
            dy = np.maximum(np.abs(y) - a, 0.0)
            d = np.hypot(dx, dy)
            inside = (np.abs(x) < a) & (np.abs(y) < a)
            if check and np.any(inside):
                raise DomainError("point strictly inside the square")
        else:
            d = np.minimum(y, a - y)
        if check and g is not Geometry.SQUARE and np.any(d < -1e-12):
            raise DomainError("point strictly inside the obstacle")
        return d

    def gradient(self, points):
        """Distance gradient where single valued (ties resolved arbitrarily)."""
        p = np.asarray(points, dtype=float)
        x, y = p[..., 0], p[..., 1]
        a = self.size
        g = self.geometry
        if g is Geometry.CYLINDER:
            r = np.hypot(x, y)
            return np.stack([x / r, y / r], axis=-1)
        if g is Geometry.SQUARE:
            dx = np.sign(x) * np.maximum(np.abs(x) - a, 0.0)
            dy = np.sign(y) * np.maximum(np.abs(y) - a, 0.0)
            r = np.maximum(np.hypot(dx, dy), 1e-300)
            return np.stack([dx / r, dy / r], axis=-1)
        up = y < a - y
        return np.stack([np.zeros_like(y), np.where(up, 1.0, -1.0)], axis=-1)


def exact_distance(geometry, point, size: float | None = None):
    """Distance of ``point`` for an :class:`ExactSolution` (or a tag + size)."""
    ex = geometry if isinstance(geometry, ExactSolution) else ExactSolution(geometry, size)
    out = ex.distance(point)
    return float(out) if np.ndim(out) == 0 else out


class WallSampler:
    """Dense sampling of WALL faces with nearest-point queries."""

    def __init__(self, mesh: CurvedMesh, samples_per_face: int = 256):
        if samples_per_face < 2:
            raise ValueError("samples_per_face must be >= 2")
        self.points = mesh.wall_samples(samples_per_face)
        if len(self.points) == 0:
            raise ValueError("mesh has no WALL faces")
        self.tree = cKDTree(self.points)

    def query(self, points):
        p = np.asarray(points, dtype=float)
        d, idx = self.tree.query(p.reshape(-1, 2))
        return d.reshape(p.shape[:-1]), self.points[idx].reshape(p.shape)


def brute_force_distance(mesh: CurvedMesh, point, samples_per_face: int = 256):
    """Minimum Euclidean distance from ``point`` to sampled WALL geometry."""
    d, _ = WallSampler(mesh, samples_per_face).query(point)
    return float(d) if np.ndim(d) == 0 else d


@dataclass
class ErrorReport:
    l2: float
    linf: float
    l1: float
    meta: dict = field(default_factory=dict)


def l2_error(U, exact, disc: Discretization, mask=None, **meta) -> ErrorReport:
    """Quadrature-weighted norms of ``s_h - s_exact`` at the solution nodes.

    ``exact`` is an :class:`ExactSolution` or an array of nodal exact values.
    ``mask`` (E, n, n) restricts the integration region.
    """
    U = np.asarray(U).reshape(disc.shape)
    xy = disc.metrics.xy
    s_ex = exact.distance(xy, check=False) if isinstance(exact, ExactSolution) else np.asarray(exact)
    err = U[..., 0] - s_ex
    w = disc.mass if mask is None else disc.mass * mask
    sel = np.ones(err.shape, bool) if mask is None else mask.astype(bool)
    l2 = float(np.sqrt(np.sum(w * err ** 2)))
    l1 = float(np.sum(w * np.abs(err)))
    linf = float(np.max(np.abs(err[sel]))) if np.any(sel) else 0.0
    meta.setdefault("N", disc.basis.order)
    meta.setdefault("elements", disc.E)
    meta.setdefault("dof", disc.E * disc.n * disc.n)
    return ErrorReport(l2, linf, l1, meta)


def eikonal_defect(U, disc: Discretization, mask=None) -> float:
    """``max | |q| - 1 |`` over (masked) solution nodes."""
    U = np.asarray(U).reshape(disc.shape)
    d = np.abs(np.linalg.norm(U[..., 1:], axis=-1) - 1.0)
    if mask is not None:
        d = d[mask.astype(bool)]
    return float(d.max()) if d.size else 0.0


def coupling_defect(U, disc: Discretization) -> float:
    """``|| q - grad s_h ||_L2`` with the BR2-corrected gradient of ``s``."""
    from .residual import corrected_gradient

    U = np.asarray(U).reshape(disc.shape)
    _, Q, *_ = corrected_gradient(U, disc)
    d = U[..., 1:] - Q[..., 0, :]
    return float(np.sqrt(np.sum(disc.mass * np.sum(d * d, axis=-1))))


def observed_rate(e_coarse: float, e_fine: float, ratio: float = 2.0) -> float:
    return math.log(e_coarse / e_fine) / math.log(ratio)


@dataclass
class StudyRow:
    case: str
    N: int
    elements: int
    dof: int
    l2: float
    linf: float
    rate: float | None
    converged: bool
    residual: float


def convergence_study(case: str, orders, meshes, config_kw=None, settings=None, init=None):
    """Solve each (order, mesh) pair and report errors and pairwise L2 rates.

    ``meshes`` is a callable ``(order, level) -> CurvedMesh`` or a list of
    callables taking the order. Rates use successive mesh pairs; they are
    omitted where either solve failed to converge.
    """
    from .estimator import EikonalDG
    from .cases import exact_for_case

    rows: list[StudyRow] = []
    for N in orders:
        prev = None
        for level, make in enumerate(meshes):
            mesh = make(N)
            est = EikonalDG(order=N, settings=settings, init=init or "brute_force", **(config_kw or {}))
            est.fit(mesh)
            exact = exact_for_case(case, mesh)
            rep = l2_error(est.field_, exact, est.disc_)
            ok = est.report_.converged
            rate = None
            if prev is not None and prev.converged and ok:
                rate = observed_rate(prev.l2, rep.l2)
            row = StudyRow(case, N, mesh.n_elements, rep.meta["dof"], rep.l2, rep.linf, rate, ok,
                           est.report_.final_residual)
            log.info("%s N=%d E=%d L2=%.3e rate=%s", case, N, mesh.n_elements, rep.l2, rate)
            rows.append(row)
            prev = row
    return rows


def study_tsv(rows) -> str:
    out = ["case\tN\telements\tDOF\tL2\tLinf\trate\tconverged"]
    for r in rows:
        rate = "" if r.rate is None else f"{r.rate:.4f}"
        out.append(f"{r.case}\t{r.N}\t{r.elements}\t{r.dof}\t{r.l2:.6e}\t{r.linf:.6e}\t{rate}\t{int(r.converged)}")
    return "\n".join(out) + "\n"
