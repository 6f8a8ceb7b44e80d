"""Field and table writers: VTU sub-cell sampling, lossless CSV, TSV."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .mesh import CurvedMesh
from .sampling import evaluate_tensor, map_reference, uniform_reference_points

VTK_QUAD = 9
FIELD_NAMES = ("s", "u", "v")


class ExportError(OSError):
    pass


def subgrid_size(order: int, k: int) -> int:
    """Sample points per direction, ``k * N + 1`` for formal order N."""
    if k < 1:
        raise ValueError(f"subdivision must be >= 1, got {k}")
    return k * order + 1


def sample_field(mesh: CurvedMesh, basis, field, k: int = 2, mu=None):
    """Sample ``field (E, n, n, 3)`` on a uniform ``(k N + 1)^2`` grid per element.

    Returns ``(points, cells, data)``: points ``(P, 2)``, quad connectivity
    ``(C, 4)`` and a dict of point arrays ``s, u, v, qnorm`` plus ``mu`` when
    element viscosities are given.
    """
    field = np.asarray(field, dtype=float)
    m = subgrid_size(basis.order, k)
    t = uniform_reference_points(m)
    xy = map_reference(mesh, t, t)
    vals = evaluate_tensor(basis.nodes, field, t, t)
    E = mesh.n_elements
    points = xy.reshape(-1, 2)
    data = {name: vals[..., c].reshape(-1) for c, name in enumerate(FIELD_NAMES)}
    data["qnorm"] = np.hypot(vals[..., 1], vals[..., 2]).reshape(-1)
    if mu is not None:
        data["mu"] = np.repeat(np.asarray(mu, dtype=float), m * m)
    a, b = np.meshgrid(np.arange(m - 1), np.arange(m - 1), indexing="ij")
    a, b = a.reshape(-1), b.reshape(-1)
    local = np.stack([a * m + b, (a + 1) * m + b, (a + 1) * m + b + 1, a * m + b + 1], axis=1)
    cells = (local[None, :, :] + (np.arange(E) * m * m)[:, None, None]).reshape(-1, 4)
    return points, cells, data


def _fmt(values) -> str:
    return " ".join(repr(float(v)) for v in values)


def write_vtu(path, mesh: CurvedMesh, basis, field, k: int = 2, mu=None) -> None:
    """ASCII VTK unstructured grid of linear sub-cells; output is byte-stable."""
    points, cells, data = sample_field(mesh, basis, field, k, mu)
    P, C = len(points), len(cells)
    xyz = np.column_stack([points, np.zeros(P)]).reshape(-1)
    lines = [
        '<?xml version="1.0"?>',
        '<VTKFile type="UnstructuredGrid" version="0.1" byte_order="LittleEndian">',
        "<UnstructuredGrid>",
        f'<Piece NumberOfPoints="{P}" NumberOfCells="{C}">',
        "<PointData>",
    ]
    for name, arr in data.items():
        lines += [f'<DataArray type="Float64" Name="{name}" format="ascii">', _fmt(arr), "</DataArray>"]
    lines += [
        "</PointData>",
        "<Points>",
        '<DataArray type="Float64" NumberOfComponents="3" format="ascii">',
        _fmt(xyz),
        "</DataArray>",
        "</Points>",
        "<Cells>",
        '<DataArray type="Int64" Name="connectivity" format="ascii">',
        " ".join(str(int(i)) for i in cells.reshape(-1)),
        "</DataArray>",
        '<DataArray type="Int64" Name="offsets" format="ascii">',
        " ".join(str(4 * (i + 1)) for i in range(C)),
        "</DataArray>",
        '<DataArray type="UInt8" Name="types" format="ascii">',
        " ".join([str(VTK_QUAD)] * C),
        "</DataArray>",
        "</Cells>",
        "</Piece>",
        "</UnstructuredGrid>",
        "</VTKFile>",
    ]
    _write_text(path, "\n".join(lines) + "\n")


CSV_COLUMNS = ("element", "i", "j", "x", "y", "s", "u", "v", "s_hex", "u_hex", "v_hex")


def write_csv(path, xy, field) -> None:
    """Nodal dump with decimal and hexadecimal columns (the latter is lossless)."""
    field = np.asarray(field, dtype=float)
    E, n = field.shape[0], field.shape[1]
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for e in range(E):
                for i in range(n):
                    for j in range(n):
                        s, u, v = (float(x) for x in field[e, i, j])
                        w.writerow([e, i, j, repr(float(xy[e, i, j, 0])), repr(float(xy[e, i, j, 1])),
                                    repr(s), repr(u), repr(v), s.hex(), u.hex(), v.hex()])
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}") from exc


def read_csv(path) -> np.ndarray:
    """Field ``(E, n, n, 3)`` rebuilt bitwise from the hexadecimal columns."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path} has no data rows")
    E = max(int(r["element"]) for r in rows) + 1
    n = max(int(r["i"]) for r in rows) + 1
    out = np.full((E, n, n, 3), np.nan)
    for r in rows:
        out[int(r["element"]), int(r["i"]), int(r["j"])] = [float.fromhex(r[f"{c}_hex"]) for c in FIELD_NAMES]
    if np.isnan(out).any():
        raise ValueError(f"{path} does not cover every node")
    return out


def write_tsv(path, header, rows) -> None:
    body = ["\t".join(header)] + ["\t".join(str(v) for v in row) for row in rows]
    _write_text(path, "\n".join(body) + "\n")


def write_keyed(path, items: dict) -> None:
    """``key = value`` report lines in insertion order."""
    _write_text(path, "".join(f"{k} = {v}\n" for k, v in items.items()))


def _write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}") from exc
