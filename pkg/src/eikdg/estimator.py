"""scikit-learn style front end: ``EikonalDG().fit(mesh).predict(points)``."""
from __future__ import annotations

from dataclasses import replace

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from .mesh import CurvedMesh
from .physics import EikonalConfig, artificial_viscosity
from .residual import Discretization
from .sampling import PointLocator, evaluate_at_points
from .solver import InitMode, SolveSettings, solve_eikonal


class EikonalDG(BaseEstimator):
    """Distance-field solver on a curved quadrilateral mesh.

    ``fit`` solves the discrete system on the mesh's WALL boundaries;
    ``predict`` evaluates the distance polynomial at physical points and
    ``predict_gradient`` the transported gradient ``q``.

    Parameters
    ----------
    order : formal order N (polynomial degree N - 1).
    c : artificial viscosity coefficient; 0 disables viscosity.
    g1_mode, g2_mode : ``"auto"`` or ``"off"`` for the two control switches.
    init : ``"brute_force"`` (sampled wall distance) or ``"cold"`` (zeros).
    tol, max_iter : nonlinear stopping rule, applied on top of ``settings``.
    settings : optional :class:`SolveSettings` for the remaining solver knobs.
    """

    def __init__(self, order: int = 4, c: float = 0.0, g1_mode: str = "auto", g2_mode: str = "auto",
                 eps_q: float = 1e-8, eta_br2: float = 4.0, init: str = "brute_force",
                 tol: float = 1e-10, max_iter: int = 300, settings: SolveSettings | None = None):
        self.order = order
        self.c = c
        self.g1_mode = g1_mode
        self.g2_mode = g2_mode
        self.eps_q = eps_q
        self.eta_br2 = eta_br2
        self.init = init
        self.tol = tol
        self.max_iter = max_iter
        self.settings = settings

    def _config(self) -> EikonalConfig:
        if not isinstance(self.order, (int, np.integer)) or not 2 <= self.order <= 16:
            raise ValueError(f"order must be an integer in [2, 16], got {self.order!r}")
        return EikonalConfig(order=int(self.order), c=float(self.c), g1_mode=self.g1_mode, g2_mode=self.g2_mode,
                             eps_q=float(self.eps_q), eta_br2=float(self.eta_br2))

    def _settings(self) -> SolveSettings:
        base = self.settings if self.settings is not None else SolveSettings()
        return replace(base, tol=float(self.tol), max_iter=int(self.max_iter))

    def fit(self, mesh: CurvedMesh, y=None, initial=None, callback=None):
        """Solve on ``mesh``. ``y`` is ignored; ``initial`` overrides ``init``."""
        if not isinstance(mesh, CurvedMesh):
            raise TypeError(f"fit expects a CurvedMesh, got {type(mesh).__name__}")
        config = self._config()
        settings = self._settings()
        init = InitMode(self.init)
        disc = Discretization.build(mesh, config.order)
        if initial is not None:
            initial = np.asarray(initial, dtype=float)
            if initial.shape != disc.shape:
                raise ValueError(f"initial field must have shape {disc.shape}, got {initial.shape}")
        field, report = solve_eikonal(disc, config, settings, initial=initial, init=init, callback=callback)
        self.mesh_ = mesh
        self.disc_ = disc
        self.config_ = config
        self.field_ = field
        self.report_ = report
        self.n_dof_ = disc.E * disc.n * disc.n
        self.converged_ = report.converged
        self._locator = PointLocator(mesh)
        return self

    def _points(self, points):
        check_is_fitted(self, "field_")
        return check_array(points, dtype=np.float64, ensure_2d=True, ensure_min_samples=1)

    def predict(self, points) -> np.ndarray:
        """Distance ``s_h`` at ``points`` of shape ``(n, 2)``."""
        p = self._points(points)
        if p.shape[1] != 2:
            raise ValueError(f"points must have 2 columns, got {p.shape[1]}")
        return evaluate_at_points(self.mesh_, self.disc_.basis, self.field_[..., 0], p, self._locator)

    def predict_gradient(self, points) -> np.ndarray:
        """Gradient unknowns ``(u, v)`` at ``points``, shape ``(n, 2)``."""
        p = self._points(points)
        if p.shape[1] != 2:
            raise ValueError(f"points must have 2 columns, got {p.shape[1]}")
        return evaluate_at_points(self.mesh_, self.disc_.basis, self.field_[..., 1:], p, self._locator)

    def viscosity(self) -> np.ndarray:
        """Element viscosity of the fitted field."""
        check_is_fitted(self, "field_")
        s_mean = self.disc_.element_means(self.field_[..., 0])
        cfg = self.config_
        return artificial_viscosity(s_mean, self.disc_.metrics.vol, cfg.order, cfg.c, cfg.L_ref, cfg.f)
