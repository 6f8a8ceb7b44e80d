"""Pseudo-transient continuation with a Jacobian-free Newton-Krylov solver.

Each nonlinear step solves ``(D / nu + J) dU = -R`` with restarted GMRES,
where ``D`` is a diagonal pseudo-time scaling, ``J v`` is a one-sided finite
difference of the residual and the preconditioner is element-block Jacobi
built by finite-difference probing. ``nu`` follows switched evolution
relaxation.
"""
from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from .residual import NonFiniteInputError

log = logging.getLogger(__name__)

EPS = np.finfo(float).eps


class Status(str, Enum):
    CONVERGED = "CONVERGED"
    MAX_ITER = "MAX_ITER"
    DIVERGED = "DIVERGED"
    NONFINITE = "NONFINITE"


@dataclass
class SolveSettings:
    tol: float = 1e-10
    max_iter: int = 300
    nu0: float = 1.0
    ser_exponent: float = 1.0
    growth_cap: float = 2.0
    shrink: float = 0.25
    nu_max: float = 1e15
    nu_min: float = 1e-8
    gmres_restart: int = 60
    gmres_max_restarts: int = 3
    linear_rtol: float = 1e-3
    line_search_max: int = 4
    accept_factor: float = 2.0
    precond_refresh: int = 5
    divergence_factor: float = 1e4

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.nu0 <= 0:
            raise ValueError("nu0 must be positive")
        if self.growth_cap < 1:
            raise ValueError("growth factor must be >= 1")


@dataclass
class SolveReport:
    status: Status = Status.MAX_ITER
    residuals: list = field(default_factory=list)
    nus: list = field(default_factory=list)
    linear_its: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    wall_time: float = 0.0
    message: str = ""

    @property
    def iterations(self) -> int:
        return len(self.steps)

    @property
    def final_residual(self) -> float:
        return self.residuals[-1] if self.residuals else float("nan")

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def to_tsv(self) -> str:
        rows = ["iteration\tresidual\tnu\tlinear_its\tstep"]
        rows.append(f"0\t{self.residuals[0]:.16e}\t\t\t" if self.residuals else "")
        for k, (r, nu, li, st) in enumerate(zip(self.residuals[1:], self.nus, self.linear_its, self.steps), 1):
            rows.append(f"{k}\t{r:.16e}\t{nu:.6e}\t{li}\t{st:.6g}")
        return "\n".join(x for x in rows if x) + "\n"

    def to_text(self) -> str:
        d = dict(status=self.status.value, iterations=self.iterations, final_residual=self.final_residual,
                 wall_time=self.wall_time, message=self.message)
        return "\n".join(f"{k} = {json.dumps(v)}" for k, v in d.items()) + "\n"

    def as_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status.value
        return d


def fd_epsilon(u, v) -> float:
    """Perturbation size ``sqrt(eps) (1 + |u|) / |v|`` for directional differences."""
    vn = np.linalg.norm(v)
    if vn == 0:
        raise ValueError("direction must be non-zero")
    return np.sqrt(EPS) * (1.0 + np.linalg.norm(u)) / vn


def jacobian_vector_product(u, v, residual: Callable, r0=None, eps_rule: Callable = fd_epsilon):
    """One-sided difference approximation of ``J(u) v``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    h = eps_rule(u, v)
    if r0 is None:
        r0 = residual(u)
    return (residual(u + h * v) - r0) / h


def greedy_coloring(neighbors) -> np.ndarray:
    """Distance-1 coloring of a graph given per-node neighbour lists."""
    colors = np.full(len(neighbors), -1, dtype=np.int64)
    for e, nb in enumerate(neighbors):
        used = {colors[k] for k in nb if k != e and colors[k] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[e] = c
    return colors


class BlockJacobi:
    """Block-diagonal preconditioner of ``D / nu + J`` from FD probing.

    Unknowns are grouped in ``n_blocks`` contiguous blocks of ``block_size``.
    Blocks sharing a color are probed simultaneously, so a color must never
    contain two blocks whose residuals depend on each other.
    """

    def __init__(self, n_blocks: int, block_size: int, colors=None):
        self.n_blocks = n_blocks
        self.m = block_size
        self.colors = np.zeros(n_blocks, dtype=np.int64) if colors is None else np.asarray(colors)
        if colors is None and n_blocks > 1:
            self.colors = np.arange(n_blocks)
        self.J = None
        self.inv = None

    def probe(self, u, residual: Callable, r0=None):
        u = np.asarray(u, dtype=float)
        if r0 is None:
            r0 = residual(u)
        nb, m = self.n_blocks, self.m
        U = u.reshape(nb, m)
        R0 = r0.reshape(nb, m)
        J = np.zeros((nb, m, m))
        for c in np.unique(self.colors):
            sel = self.colors == c
            for k in range(m):
                h = np.sqrt(EPS) * np.maximum(1.0, np.abs(U[sel, k]))
                Up = U.copy()
                Up[sel, k] += h
                dR = (residual(Up.reshape(-1)).reshape(nb, m)[sel] - R0[sel]) / h[:, None]
                J[sel, :, k] = dR
        self.J = J
        return J

    def factor(self, diag, nu: float):
        A = self.J.copy()
        d = np.asarray(diag, dtype=float).reshape(self.n_blocks, self.m) / nu
        idx = np.arange(self.m)
        A[:, idx, idx] += d
        self.inv = np.linalg.inv(A)

    def apply(self, v):
        v = np.ravel(v)
        return np.einsum("bij,bj->bi", self.inv, v.reshape(self.n_blocks, self.m)).reshape(-1)


def solve(initial, residual: Callable, settings: SolveSettings | None = None, *, diag=None,
          norm: Callable | None = None, precond: BlockJacobi | None = None, callback=None):
    """Drive ``residual(u) = 0`` from ``initial``; returns ``(u, SolveReport)``.

    ``diag`` is the pseudo-time scaling ``D`` (ones by default) and ``norm``
    the convergence norm (Euclidean by default).
    """
    settings = settings or SolveSettings()
    norm = norm or (lambda r: float(np.linalg.norm(r)))
    u = np.array(initial, dtype=float).reshape(-1)
    if not np.all(np.isfinite(u)):
        raise NonFiniteInputError("initial field is not finite")
    diag = np.ones_like(u) if diag is None else np.asarray(diag, dtype=float).reshape(-1)
    n = u.size
    report = SolveReport()
    t0 = time.perf_counter()

    r = residual(u)
    rn = norm(r)
    r_first = rn
    report.residuals.append(rn)
    nu = settings.nu0
    since_refresh = settings.precond_refresh
    last_good = u.copy()

    for it in range(settings.max_iter):
        if rn <= settings.tol:
            report.status = Status.CONVERGED
            break
        if precond is not None and since_refresh >= settings.precond_refresh:
            precond.probe(u, residual, r)
            since_refresh = 0
        if precond is not None:
            precond.factor(diag, nu)
        since_refresh += 1

        def matvec(v, u=u, r=r, nu=nu):
            v = np.ravel(v)
            if not np.any(v):
                return diag * v / nu
            return diag * v / nu + jacobian_vector_product(u, v, residual, r0=r)

        A = LinearOperator((n, n), matvec=matvec, dtype=float)
        M = None if precond is None else LinearOperator((n, n), matvec=precond.apply, dtype=float)
        count = [0]

        def cb(_):
            count[0] += 1

        du, _ = gmres(A, -r, rtol=settings.linear_rtol, atol=0.0, restart=settings.gmres_restart,
                      maxiter=settings.gmres_max_restarts, M=M, callback=cb, callback_type="pr_norm")

        step = 1.0
        accepted = False
        for _ in range(settings.line_search_max + 1):
            trial = u + step * du
            try:
                r_new = residual(trial) if np.all(np.isfinite(trial)) else None
            except NonFiniteInputError:
                r_new = None
            rn_new = norm(r_new) if r_new is not None else np.inf
            if np.isfinite(rn_new) and rn_new <= settings.accept_factor * rn:
                accepted = True
                break
            step *= 0.5

        if accepted:
            ratio = rn / rn_new if rn_new > 0 else settings.growth_cap
            u, r, rn_old, rn = trial, r_new, rn, rn_new
            last_good = u.copy()
            growth = min(settings.growth_cap, ratio ** settings.ser_exponent)
            nu = min(settings.nu_max, nu * growth if step == 1.0 else nu)
        else:
            nu *= settings.shrink
            since_refresh = settings.precond_refresh
            step = 0.0
        report.residuals.append(rn)
        report.nus.append(nu)
        report.linear_its.append(count[0])
        report.steps.append(step)
        log.debug("it %d  |R| = %.3e  nu = %.3e  lin = %d  step = %g", it + 1, rn, nu, count[0], step)
        if callback is not None:
            callback(it + 1, u, rn)
        if not np.isfinite(rn):
            report.status = Status.NONFINITE
            u = last_good
            break
        if rn > settings.divergence_factor * r_first or nu < settings.nu_min:
            report.status = Status.DIVERGED
            break
    else:
        report.status = Status.CONVERGED if rn <= settings.tol else Status.MAX_ITER

    report.wall_time = time.perf_counter() - t0
    report.message = f"{report.status.value} after {report.iterations} iterations, |R| = {rn:.3e}"
    return u, report


class InitMode(str, Enum):
    COLD = "cold"
    BRUTE_FORCE = "brute_force"


class ConfigurationError(ValueError):
    pass


def initialize_field(disc, mode: InitMode | str = InitMode.BRUTE_FORCE, samples_per_face: int = 256):
    """Initial ``(E, n, n, 3)`` field: zeros, or sampled wall distance and direction."""
    from .mesh import WALL
    from .verify import WallSampler

    mode = InitMode(mode)
    if not np.any(disc.mesh.boundary_tags == WALL):
        raise ConfigurationError("mesh has no WALL faces")
    U = np.zeros(disc.shape)
    if mode is InitMode.COLD:
        return U
    xy = disc.metrics.xy
    d, p = WallSampler(disc.mesh, samples_per_face).query(xy)
    dirn = xy - p
    U[..., 0] = d
    U[..., 1:] = dirn / np.maximum(d, 1e-300)[..., None]
    return U


def element_colors(disc) -> np.ndarray:
    return greedy_coloring([set(int(k) for k in row) - {e} for e, row in enumerate(disc.nb_elem)])


def pseudo_time_diag(disc) -> np.ndarray:
    """Mass matrix divided by the element length scale, repeated per component."""
    d = disc.mass / disc.metrics.delta[:, None, None]
    return np.repeat(d[..., None], 3, axis=-1).reshape(-1)


def solve_eikonal(disc, config, settings: SolveSettings | None = None, initial=None,
                  init: InitMode | str = InitMode.BRUTE_FORCE, callback=None):
    """Solve the discrete system on ``disc``; returns ``(U, SolveReport)``."""
    from .residual import evaluate_residual

    U0 = initialize_field(disc, init) if initial is None else np.asarray(initial, dtype=float)

    def resid(u):
        return evaluate_residual(u.reshape(disc.shape), disc, config).reshape(-1)

    pc = BlockJacobi(disc.E, disc.n * disc.n * 3, element_colors(disc))
    u, report = solve(U0.reshape(-1), resid, settings, diag=pseudo_time_diag(disc), norm=disc.norm,
                      precond=pc, callback=callback)
    return u.reshape(disc.shape), report
