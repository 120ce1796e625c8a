"""Field, mesh and report writers (CSV, legacy VTK, OFF, JSON)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from .domain import FieldKind, FieldSample

if TYPE_CHECKING:
    from .neumann import SurfaceMesh

CSV_COLUMNS = (
    "x", "y", "z",
    "re_w0", "im_w0", "re_w1", "im_w1", "re_w2", "im_w2", "re_w3", "im_w3",
)

# Enough digits to round-trip a double; the fixed format keeps files byte-identical.
NUMBER_FORMAT = "%.17g"


def _components(kind: FieldKind) -> range:
    if kind is FieldKind.SCALAR:
        return range(0, 1)
    if kind is FieldKind.VECTOR:
        return range(1, 4)
    return range(0, 4)


def write_csv(sample: FieldSample, path: Path) -> None:
    """One row per point: coordinates then real/imaginary parts of w0..w3.

    Components outside the sample's kind are left empty, so a vector sample
    has blank ``re_w0,im_w0`` cells and a scalar sample blank ``w1..w3`` cells.
    """
    table = np.empty((len(sample), 11), dtype=np.float64)
    table[:, :3] = sample.points
    table[:, 3::2] = sample.values.real
    table[:, 4::2] = sample.values.imag
    cells = np.char.mod(NUMBER_FORMAT, table)
    present = _components(sample.kind)
    for c in set(range(4)) - set(present):
        cells[:, 3 + 2 * c : 5 + 2 * c] = ""
    lines = [",".join(CSV_COLUMNS), *(",".join(row) for row in cells.tolist())]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def read_csv(path: Path) -> FieldSample:
    """Read a file written by ``write_csv``.

    The kind follows from which component columns carry numbers: blank
    ``w1..w3`` columns make a scalar sample, a blank ``w0`` column a vector
    sample. A file with every column filled is read as a full sample.
    """
    with path.open() as f:
        header = f.readline().strip().split(",")
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"{path}: unexpected CSV header {header}")
    table = np.genfromtxt(path, delimiter=",", skip_header=1, ndmin=2)
    if table.size == 0:
        raise ValueError(f"{path}: no data rows")
    if table.shape[1] != len(CSV_COLUMNS):
        raise ValueError(f"{path}: rows must have {len(CSV_COLUMNS)} cells")
    blank = np.isnan(table)
    if np.any(blank[:, :3]):
        raise ValueError(f"{path}: missing coordinates")
    component_blank = blank[:, 3:].reshape(-1, 4, 2)
    empty = component_blank.all(axis=(0, 2))
    filled = ~component_blank.any(axis=(0, 2))
    if not np.all(empty | filled):
        raise ValueError(f"{path}: a component column is only partly filled")
    if empty[1:].all() and filled[0]:
        kind = FieldKind.SCALAR
    elif empty[0] and filled[1:].all():
        kind = FieldKind.VECTOR
    elif filled.all():
        kind = FieldKind.FULL
    else:
        raise ValueError(f"{path}: blank columns match no field kind")
    points = np.ascontiguousarray(table[:, :3])
    values = np.nan_to_num(table[:, 3::2]) + 1j * np.nan_to_num(table[:, 4::2])
    return FieldSample(points, values, kind)


def write_vtk(sample: FieldSample, path: Path, title: str = "curllambda field") -> None:
    """Legacy ASCII STRUCTURED_POINTS file of a gridded sample.

    One scalar array per real/imaginary part of each component the kind
    allows, plus a ``mask`` array marking the points that carry data.
    """
    if sample.grid is None:
        raise ValueError("VTK export needs a gridded sample")
    grid = sample.grid
    nx, ny, nz = grid.shape
    dense = np.zeros((*grid.shape, 4), dtype=np.complex128)
    dense[tuple(grid.index.T)] = sample.values
    origin = grid.origin + 0.5 * grid.h
    lines = [
        "# vtk DataFile Version 3.0",
        title,
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {nx} {ny} {nz}",
        "ORIGIN " + " ".join(NUMBER_FORMAT % c for c in origin),
        f"SPACING {NUMBER_FORMAT % grid.h} {NUMBER_FORMAT % grid.h} {NUMBER_FORMAT % grid.h}",
        f"POINT_DATA {nx * ny * nz}",
    ]

    def block(name: str, data: np.ndarray) -> None:
        # VTK orders points with x varying fastest
        lines.append(f"SCALARS {name} double 1")
        lines.append("LOOKUP_TABLE default")
        lines.extend(NUMBER_FORMAT % v for v in data.ravel(order="F"))

    for k in _components(sample.kind):
        block(f"re_w{k}", dense[..., k].real)
        block(f"im_w{k}", dense[..., k].imag)
    block("mask", grid.mask().astype(np.float64))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def write_mesh_off(mesh: SurfaceMesh, path: Path) -> None:
    """Write a triangle mesh in OFF format."""
    lines = ["OFF", f"{len(mesh.vertices)} {len(mesh.triangles)} 0"]
    lines.extend(" ".join(NUMBER_FORMAT % c for c in v) for v in mesh.vertices)
    lines.extend("3 " + " ".join(str(int(i)) for i in t) for t in mesh.triangles)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def _jsonable(value: Any) -> Any:
    if isinstance(value, complex | np.complexfloating):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, np.floating | np.integer | np.bool_):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_jsonable(v) for v in value]
    return value


def write_report(report: dict[str, Any], path: Path) -> None:
    """JSON run report; complex numbers become ``{"re": .., "im": ..}``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n")
