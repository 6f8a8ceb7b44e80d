"""Command line front end: ``eikdg run | study | mesh``.

Exit codes: 0 success, 2 invalid configuration, 3 solve did not converge
(artifacts are still written), 4 file system error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from contextlib import nullcontext
from pathlib import Path

import numpy as np

from .cases import CASES, build_case_mesh, case_parameters, exact_for_case, get_case
from .config import ConfigError, RunConfig, parse_overrides, parse_text
from .estimator import EikonalDG
from .export import ExportError, write_csv, write_keyed, write_tsv, write_vtu
from .mesh import GeometryError, write_mesh
from .verify import convergence_study, coupling_defect, eikonal_defect, l2_error, study_tsv

log = logging.getLogger("eikdg")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVE, EXIT_IO = 0, 2, 3, 4
THREADS_ENV = "EIKDG_THREADS"


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def thread_limit(serial: bool):
    """BLAS thread cap from ``--serial`` or the thread-count variable."""
    from threadpoolctl import threadpool_limits

    if serial:
        return threadpool_limits(1)
    env = os.environ.get(THREADS_ENV)
    if not env:
        return nullcontext()
    try:
        n = int(env)
    except ValueError:
        raise CliError(f"{THREADS_ENV} must be an integer, got {env!r}", EXIT_CONFIG) from None
    if n < 1:
        raise CliError(f"{THREADS_ENV} must be >= 1, got {n}", EXIT_CONFIG)
    return threadpool_limits(n)


def load_config(path, overrides=()) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_IO) from exc
    raw = parse_text(text)
    raw.update(parse_overrides(overrides))
    return raw


def _build_mesh(case: str, order: int, params: dict):
    try:
        return build_case_mesh(case, order, **params)
    except FileNotFoundError as exc:
        raise CliError(f"cannot read mesh: {exc}", EXIT_IO) from exc
    except (GeometryError, ValueError) as exc:
        raise CliError(f"invalid mesh parameters: {exc}", EXIT_CONFIG) from exc


def _estimator(cfg: RunConfig) -> EikonalDG:
    s = cfg.settings()
    return EikonalDG(order=cfg.N, c=cfg.c, g1_mode=cfg.g1_mode, g2_mode=cfg.g2_mode, eps_q=cfg.eps_q,
                     eta_br2=cfg.eta_br2, init=cfg.init, tol=s.tol, max_iter=s.max_iter, settings=s)


def _nodal_table(xy, field):
    rows = []
    E, n = field.shape[:2]
    for e in range(E):
        for i in range(n):
            for j in range(n):
                rows.append([e, i, j, *(repr(float(x)) for x in xy[e, i, j]), *(repr(float(x)) for x in field[e, i, j])])
    return ["element", "i", "j", "x", "y", "s", "u", "v"], rows


def run(cfg: RunConfig) -> int:
    """Build, solve and export one configuration; returns the exit code."""
    mesh = _build_mesh(cfg.case, cfg.N, cfg.mesh_params)
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create output directory {out}: {exc}", EXIT_IO) from exc
    write_keyed(out / "config.resolved", cfg.resolved())

    est = _estimator(cfg).fit(mesh)
    field, disc, report = est.field_, est.disc_, est.report_
    mu = est.viscosity() if np.all(np.isfinite(field)) else None
    _write_text(out / "residuals.tsv", report.to_tsv())
    _write_text(out / "report.txt", report.to_text())

    if np.all(np.isfinite(field)):
        s = field[..., 0]
        summary = {"dof": disc.E * disc.n * disc.n, "s_min": repr(float(s.min())), "s_max": repr(float(s.max())),
                   "eikonal_defect": repr(eikonal_defect(field, disc)),
                   "coupling_defect": repr(coupling_defect(field, disc))}
        exact = exact_for_case(cfg.case, mesh, cfg.mesh_params)
        if exact is not None:
            err = l2_error(field, exact, disc)
            summary.update(l2=repr(err.l2), linf=repr(err.linf), l1=repr(err.l1))
        write_keyed(out / "errors.txt", summary)
    if "vtu" in cfg.export:
        write_vtu(out / "field.vtu", mesh, disc.basis, field, cfg.subdivision, mu)
    if "csv" in cfg.export:
        write_csv(out / "field.csv", disc.metrics.xy, field)
    if "tsv" in cfg.export:
        write_tsv(out / "field.tsv", *_nodal_table(disc.metrics.xy, field))

    log.info("%s: %s after %d iterations, |R| = %.3e", cfg.case, report.status.value, report.iterations,
             report.final_residual)
    return EXIT_OK if report.converged else EXIT_SOLVE


def _list(raw: dict, key: str, default=None) -> list[str]:
    v = raw.pop(key, default)
    if v is None:
        raise ConfigError(f"missing required parameter {key!r}")
    return [x.strip() for x in str(v).split(",") if x.strip()]


def study(raw: dict, out_path=None) -> int:
    """Convergence table over ``orders`` x ``meshes``; rates are checked when
    ``rate_margin`` is given (required rate ``N + rate_margin``)."""
    raw = dict(raw)
    orders = [int(x) for x in _list(raw, "orders")]
    meshes = _list(raw, "meshes")
    margin = raw.pop("rate_margin", None)
    margin = None if margin in (None, "") else float(margin)
    out_file = raw.pop("table", out_path)
    base = {k: v for k, v in raw.items() if k not in ("N", "mesh")}
    cfgs = {(N, m): RunConfig.from_mapping({**base, "N": N, "mesh": m}) for N in orders for m in meshes}
    first = cfgs[orders[0], meshes[0]]
    if get_case(first.case).exact(first.mesh_params) is None:
        raise ConfigError(f"case {first.case!r} has no exact solution; a study needs one")
    makers = [lambda N, m=m: _build_mesh(first.case, N, cfgs[N, m].mesh_params) for m in meshes]
    est = _estimator(first)
    kw = dict(c=est.c, g1_mode=est.g1_mode, g2_mode=est.g2_mode, eps_q=est.eps_q, eta_br2=est.eta_br2,
              tol=est.tol, max_iter=est.max_iter)
    rows = convergence_study(first.case, orders, makers, config_kw=kw, settings=est.settings, init=est.init)
    failed = [f"N={r.N} elements={r.elements} did not converge" for r in rows if not r.converged]
    if len(meshes) > 1 and margin is not None:
        for N in orders:
            last = [r for r in rows if r.N == N][-1].rate
            if last is None or last < N + margin:
                failed.append(f"N={N}: finest-pair rate {last} below required {N + margin}")
    table = study_tsv(rows)
    if out_file:
        _write_text(Path(out_file), table)
    sys.stdout.write(table)
    if len(meshes) < 2:
        log.warning("single-mesh study: no rates computed")
    for f in failed:
        log.error(f)
    return EXIT_SOLVE if failed else EXIT_OK


def mesh_cmd(case: str, items, out) -> int:
    raw = parse_overrides(items)
    order = int(raw.pop("N", raw.pop("order", 4)))
    get_case(case)
    try:
        params = case_parameters(case, **raw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    mesh = _build_mesh(case, order, params)
    try:
        write_mesh(mesh, out)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc}", EXIT_IO) from exc
    log.info("wrote %d elements to %s", mesh.n_elements, out)
    return EXIT_OK


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eikdg", description="High-order DG wall-distance solver.")
    p.add_argument("--serial", action="store_true", help="single-threaded deterministic path")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="solve one configuration")
    r.add_argument("config")
    r.add_argument("overrides", nargs="*", metavar="key=value")
    s = sub.add_parser("study", help="convergence study")
    s.add_argument("config")
    s.add_argument("overrides", nargs="*", metavar="key=value")
    s.add_argument("--out", help="write the TSV table here too")
    m = sub.add_parser("mesh", help="generate a case mesh")
    m.add_argument("case", help=", ".join(CASES))
    m.add_argument("params", nargs="*", metavar="key=value")
    m.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with thread_limit(args.serial):
            if args.command == "run":
                return run(RunConfig.from_mapping(load_config(args.config, args.overrides)))
            if args.command == "study":
                return study(load_config(args.config, args.overrides), args.out)
            return mesh_cmd(args.case, args.params, args.out)
    except CliError as exc:
        print(f"eikdg: {exc}", file=sys.stderr)
        return exc.code
    except (ConfigError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"eikdg: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"eikdg: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
