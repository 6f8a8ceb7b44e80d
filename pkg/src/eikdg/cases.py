"""Named test cases: mesh builders, default physics and exact solutions.

Cases take flat parameters, so a run can be rebuilt from a ``key=value``
listing. ``mesh`` is written ``AxB``; its meaning per case is

    cylinder        radial x circumferential
    channel_sin     horizontal x vertical
    parallel_walls  horizontal x vertical
    square          cells per side x cells into the far field
    naca0012        around x radial
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .mesh import (
    CurvedMesh,
    GeometryError,
    gen_annulus,
    gen_channel_sinusoidal,
    gen_naca_omesh,
    gen_square_hmesh,
    read_mesh,
)
from .verify import ExactSolution, Geometry


class UnknownCaseError(KeyError):
    pass


def parse_mesh_size(text) -> tuple[int, int]:
    """``"6x6"`` or ``(6, 6)`` -> ``(6, 6)``."""
    if isinstance(text, (tuple, list)):
        a, b = text
    else:
        parts = str(text).lower().replace("×", "x").split("x")
        if len(parts) != 2:
            raise ValueError(f"mesh size must look like AxB, got {text!r}")
        a, b = parts
    a, b = int(a), int(b)
    if a < 1 or b < 1:
        raise ValueError(f"mesh size entries must be >= 1, got {text!r}")
    return a, b


@dataclass(frozen=True)
class Case:
    name: str
    mesh_defaults: dict
    physics: dict
    build: Callable[[dict, int], CurvedMesh]
    exact: Callable[[dict], ExactSolution | None] = lambda p: None
    required: tuple = ()
    init: str = "brute_force"


def _geometry_order(p: dict, order: int) -> int:
    g = p.get("geometry_order")
    return order + 1 if g in (None, "", "auto") else int(g)


def _cylinder(p, order):
    nr, nt = parse_mesh_size(p["mesh"])
    return gen_annulus(nr, nt, float(p["r_in"]), float(p["r_out"]), _geometry_order(p, order),
                       spacing=p.get("spacing", "geometric"))


def _channel(p, order):
    nx, ny = parse_mesh_size(p["mesh"])
    return gen_channel_sinusoidal(nx, ny, float(p["amplitude"]), float(p["wavelength"]),
                                  float(p["height"]), _geometry_order(p, order), sides=p.get("sides", "farfield"))


def _walls(p, order):
    nx, ny = parse_mesh_size(p["mesh"])
    return gen_channel_sinusoidal(nx, ny, 0.0, float(p["width"]), float(p["gap"]), _geometry_order(p, order))


def _square(p, order):
    ns, nf = parse_mesh_size(p["mesh"])
    return gen_square_hmesh(ns, nf, float(p["half_width"]), float(p["far_dist"]), _geometry_order(p, order),
                            grading=p.get("grading", "geometric"))


def _naca(p, order):
    na, nr = parse_mesh_size(p["mesh"])
    return gen_naca_omesh(na, nr, float(p["far_radius"]), _geometry_order(p, order), float(p["clustering"]))


def _from_file(p, order):
    path = p.get("mesh_path")
    if not path:
        raise GeometryError("case mesh_file needs mesh_path")
    return read_mesh(path)


CASES: dict[str, Case] = {
    "cylinder": Case(
        "cylinder", dict(mesh="6x6", r_in=0.5, r_out=10.0, geometry_order="auto", spacing="geometric"),
        dict(c=0.0, g1_mode="off", g2_mode="auto"), _cylinder,
        exact=lambda p: ExactSolution(Geometry.CYLINDER, float(p["r_in"])),
    ),
    "channel_sin": Case(
        "channel_sin", dict(mesh="10x30", amplitude=0.25, wavelength=1.0, height=3.0, geometry_order="auto", sides="periodic"),
        dict(c=0.9, g1_mode="auto", g2_mode="auto"), _channel,
    ),
    "parallel_walls": Case(
        "parallel_walls", dict(mesh="4x8", gap=2.0, width=2.0, geometry_order="auto"),
        dict(c=0.9, g1_mode="auto", g2_mode="auto"), _walls,
        exact=lambda p: ExactSolution(Geometry.PARALLEL_WALLS, float(p["gap"])),
    ),
    "square": Case(
        "square", dict(mesh="8x8", half_width=0.5, far_dist=29.0, geometry_order=1, grading="geometric"),
        dict(c=0.3, g1_mode="auto", g2_mode="auto"), _square,
        exact=lambda p: ExactSolution(Geometry.SQUARE, float(p["half_width"])),
    ),
    "naca0012": Case(
        "naca0012", dict(mesh="8x4", far_radius=14.0, clustering=5.0, geometry_order="auto"),
        dict(c=0.9, g1_mode="auto", g2_mode="auto"), _naca,
    ),
    "mesh_file": Case(
        "mesh_file", dict(mesh_path=""), dict(c=0.9, g1_mode="auto", g2_mode="auto"), _from_file,
        required=("mesh_path",),
    ),
}


def get_case(name: str) -> Case:
    try:
        return CASES[name]
    except KeyError:
        raise UnknownCaseError(f"unknown case {name!r}; choose from {', '.join(CASES)}") from None


def case_parameters(name: str, **overrides) -> dict:
    """Mesh defaults of a case updated with ``overrides`` (only known keys)."""
    case = get_case(name)
    p = dict(case.mesh_defaults)
    for k, v in overrides.items():
        if k not in p:
            raise ValueError(f"unknown parameter {k!r} for case {name!r}")
        p[k] = v
    for k in case.required:
        if p.get(k) in (None, ""):
            raise ValueError(f"case {name!r} requires parameter {k!r}")
    return p


def build_case_mesh(name: str, order: int, **params) -> CurvedMesh:
    case = get_case(name)
    return case.build(case_parameters(name, **params), order)


def exact_for_case(name: str, mesh: CurvedMesh | None = None, params: dict | None = None) -> ExactSolution | None:
    """Closed-form solution of a case, if one exists.

    Size parameters are read from ``mesh.info`` when a generated mesh is given.
    """
    case = get_case(name)
    p = case_parameters(name, **(params or {}))
    info = {} if mesh is None else mesh.info
    if name == "cylinder" and "r_in" in info:
        p["r_in"] = info["r_in"]
    elif name == "square" and "half_width" in info:
        p["half_width"] = info["half_width"]
    elif name == "parallel_walls" and "height" in info:
        p["gap"] = info["height"]
    return case.exact(p)
