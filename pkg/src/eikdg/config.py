"""Flat ``key=value`` run configuration with validation and a resolved echo."""
from __future__ import annotations

from dataclasses import dataclass, fields

from .cases import CASES, case_parameters, get_case
from .physics import Mode
from .solver import InitMode, SolveSettings

EXPORT_FORMATS = ("vtu", "csv", "tsv")


class ConfigError(ValueError):
    pass


def parse_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment; later keys win."""
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key=value, got {raw.strip()!r}")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_overrides(items) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


_SOLVER_KEYS = {f.name: f.type for f in fields(SolveSettings)}
_GENERAL = ("case", "N", "c", "g1_mode", "g2_mode", "eps_q", "eta_br2", "init", "out", "export", "subdivision")


def _number(key, value, kind):
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"parameter {key!r} must be {kind.__name__}, got {value!r}") from None


@dataclass
class RunConfig:
    case: str
    N: int
    c: float
    g1_mode: str
    g2_mode: str
    eps_q: float
    eta_br2: float
    init: str
    out: str
    export: tuple
    subdivision: int
    mesh_params: dict
    solver: dict

    @classmethod
    def from_mapping(cls, raw: dict) -> "RunConfig":
        raw = dict(raw)
        if "order" in raw and "N" not in raw:
            raw["N"] = raw.pop("order")
        if "case" not in raw:
            raise ConfigError("missing required parameter 'case'")
        if raw["case"] not in CASES:
            raise ConfigError(f"unknown case {raw['case']!r}; choose from {', '.join(CASES)}")
        case = get_case(raw["case"])
        if "N" not in raw:
            raise ConfigError("missing required parameter 'N'")
        N = _number("N", raw["N"], int)
        if not 2 <= N <= 16:
            raise ConfigError(f"parameter 'N' must be in [2, 16], got {N}")
        phys = dict(case.physics)
        c = _number("c", raw.get("c", phys["c"]), float)
        if c < 0:
            raise ConfigError(f"parameter 'c' must be >= 0, got {c}")
        modes = {}
        for key in ("g1_mode", "g2_mode"):
            v = str(raw.get(key, phys[key])).lower()
            if v not in {m.value for m in Mode}:
                raise ConfigError(f"parameter {key!r} must be auto or off, got {v!r}")
            modes[key] = v
        init = str(raw.get("init", case.init)).lower()
        if init not in {m.value for m in InitMode}:
            raise ConfigError(f"parameter 'init' must be cold or brute_force, got {init!r}")
        export = tuple(x for x in str(raw.get("export", "vtu,csv,tsv")).lower().replace(" ", "").split(",") if x)
        bad = [x for x in export if x not in EXPORT_FORMATS]
        if bad:
            raise ConfigError(f"unknown export format(s) {bad}; choose from {EXPORT_FORMATS}")
        sub = _number("subdivision", raw.get("subdivision", 2), int)
        if sub < 1:
            raise ConfigError("parameter 'subdivision' must be >= 1")
        mesh_keys = {k: v for k, v in raw.items() if k in case.mesh_defaults}
        solver = {}
        for k, v in raw.items():
            if k in _SOLVER_KEYS:
                kind = int if _SOLVER_KEYS[k] in (int, "int") else float
                solver[k] = _number(k, v, kind)
        unknown = [k for k in raw if k not in _GENERAL and k not in case.mesh_defaults and k not in _SOLVER_KEYS]
        if unknown:
            raise ConfigError(f"unknown parameter(s) {', '.join(sorted(unknown))} for case {raw['case']!r}")
        try:
            mesh_params = case_parameters(raw["case"], **mesh_keys)
            SolveSettings(**solver)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return cls(raw["case"], N, c, modes["g1_mode"], modes["g2_mode"],
                   _number("eps_q", raw.get("eps_q", 1e-8), float), _number("eta_br2", raw.get("eta_br2", 4.0), float),
                   init, str(raw.get("out", "out")), export, sub, mesh_params, solver)

    def settings(self) -> SolveSettings:
        return SolveSettings(**self.solver)

    def resolved(self) -> dict:
        """Every parameter with defaults applied, as strings, in a fixed order."""
        d = {"case": self.case, "N": self.N, "c": self.c, "g1_mode": self.g1_mode, "g2_mode": self.g2_mode,
             "eps_q": self.eps_q, "eta_br2": self.eta_br2, "init": self.init, "out": self.out,
             "export": ",".join(self.export), "subdivision": self.subdivision}
        d.update(self.mesh_params)
        s = SolveSettings(**self.solver)
        d.update({f.name: getattr(s, f.name) for f in fields(SolveSettings)})
        return {k: _text(v) for k, v in d.items()}

    def echo(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.resolved().items())


def _text(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)
