"""Tests for the export module."""

import json
from pathlib import Path

import numpy as np
import pytest

from curllambda.domain import Field, FieldKind, Grid, sample
from curllambda.export import (
    CSV_COLUMNS,
    read_csv,
    write_csv,
    write_mesh_off,
    write_report,
    write_vtk,
)
from curllambda.neumann import make_sphere_mesh


class TestCsv:
    """Tests for write_csv and read_csv."""

    def test_header_and_row(self, tmp_path: Path) -> None:
        """The header names all eleven columns; rows hold re/im pairs."""
        path = tmp_path / "w.csv"
        constant = Field.full(lambda p: np.tile([1.5, 2j, -1.0, 0.25 - 1j], (len(p), 1)))
        s = sample(constant, [[0, 1, 2]])
        write_csv(s, path)
        lines = path.read_text().splitlines()

        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1] == "0,1,2,1.5,0,0,2,-1,0,0.25,-1"

    def test_kind_inferred(self, tmp_path: Path, cube_grid: Grid) -> None:
        """Scalar and vector samples read back with their kind."""
        for kind, field in (
            (FieldKind.SCALAR, Field.scalar(lambda p: p[:, 0] + 1j)),
            (FieldKind.VECTOR, Field.vector(lambda p: p)),
        ):
            path = tmp_path / f"{kind.value}.csv"
            write_csv(sample(field, cube_grid), path)
            back = read_csv(path)
            assert back.kind is kind
            np.testing.assert_array_equal(back.values, field(cube_grid.points))

    def test_zero_samples_keep_kind(self, tmp_path: Path, cube_grid: Grid) -> None:
        """All-zero scalar and vector samples read back with their own kind."""
        for kind in (FieldKind.SCALAR, FieldKind.VECTOR):
            path = tmp_path / f"zero-{kind.value}.csv"
            write_csv(sample(Field.zero(kind), cube_grid), path)
            back = read_csv(path)
            assert back.kind is kind
            assert not np.any(back.values)

    def test_blank_cells_outside_kind(self, tmp_path: Path) -> None:
        """A vector row leaves the w0 cells empty."""
        path = tmp_path / "v.csv"
        write_csv(sample(Field.vector(lambda p: p + 1j), [[0, 1, 2]]), path)
        assert path.read_text().splitlines()[1] == "0,1,2,,,0,1,1,1,2,1"

    def test_partly_blank_column(self, tmp_path: Path) -> None:
        """A component column blank on some rows only is rejected."""
        path = tmp_path / "ragged.csv"
        path.write_text(",".join(CSV_COLUMNS) + "\n0,0,0,,,1,0,0,0,0,0\n1,0,0,1,0,1,0,0,0,0,0\n")
        with pytest.raises(ValueError, match="partly"):
            read_csv(path)

    def test_byte_identical(self, tmp_path: Path, cube_grid: Grid) -> None:
        """Writing the same sample twice gives identical bytes."""
        s = sample(Field.vector(lambda p: np.exp(1j * p)), cube_grid)
        write_csv(s, tmp_path / "a.csv")
        write_csv(s, tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_bad_header(self, tmp_path: Path) -> None:
        """Files with other columns are rejected."""
        path = tmp_path / "bad.csv"
        path.write_text("x,y,z,value\n0,0,0,1\n")
        with pytest.raises(ValueError, match="header"):
            read_csv(path)


class TestVtk:
    """Tests for write_vtk."""

    def test_structured_points(self, tmp_path: Path, cube_grid: Grid) -> None:
        """The file declares the lattice and one array per part plus the mask."""
        path = tmp_path / "w.vtk"
        sub = cube_grid.subset(cube_grid.points[:, 0] > 0)
        write_vtk(sample(Field.scalar(lambda p: p[:, 0]), sub), path)
        text = path.read_text()

        assert text.startswith("# vtk DataFile Version 3.0\n")
        assert "DIMENSIONS 20 20 20" in text
        assert "SCALARS re_w0 double 1" in text
        assert "SCALARS im_w0 double 1" in text
        assert "re_w1" not in text
        assert "SCALARS mask double 1" in text
        assert len(text.splitlines()) == 8 + 3 * (2 + 8000)

    def test_needs_grid(self, tmp_path: Path) -> None:
        """Scattered samples cannot be written as structured points."""
        s = sample(Field.scalar(lambda p: p[:, 0]), np.zeros((2, 3)))
        with pytest.raises(ValueError, match="gridded"):
            write_vtk(s, tmp_path / "w.vtk")


class TestMeshAndReport:
    """Tests for write_mesh_off and write_report."""

    def test_off(self, tmp_path: Path) -> None:
        """OFF files list vertices then triangles."""
        mesh = make_sphere_mesh(1.0, 1)
        path = tmp_path / "mesh.off"
        write_mesh_off(mesh, path)
        lines = path.read_text().splitlines()

        assert lines[0] == "OFF"
        assert lines[1] == f"{len(mesh.vertices)} 80 0"
        assert len(lines) == 2 + len(mesh.vertices) + 80
        assert lines[-1].startswith("3 ")

    def test_report_json(self, tmp_path: Path) -> None:
        """Complex numbers, arrays and paths become plain JSON."""
        path = tmp_path / "out" / "report.json"
        report = {
            "lambda": 1 + 2j,
            "residuals": np.array([0.5, 0.25]),
            "out": tmp_path,
            "n": np.int64(3),
        }
        write_report(report, path)
        data = json.loads(path.read_text())

        assert data["lambda"] == {"re": 1.0, "im": 2.0}
        assert data["residuals"] == [0.5, 0.25]
        assert data["out"] == str(tmp_path)
        assert data["n"] == 3
