"""Tests for the sources module."""

from pathlib import Path

import numpy as np
import pytest

from curllambda.config import SourceSpec
from curllambda.domain import Field, FieldKind, Grid, sample
from curllambda.errors import ConfigError
from curllambda.export import write_csv
from curllambda.forcefree import verify_forcefree
from curllambda.sources import BUILTINS, bump, make_builtin, resolve_source, trig


class TestBuiltins:
    """Tests for the builtin registry."""

    def test_every_builtin_evaluates(self) -> None:
        """Each builtin builds with defaults and has the registered kind."""
        x = np.array([[0.1, 0.2, 0.3], [0.0, -0.5, 0.4]])
        for name, builtin in BUILTINS.items():
            f = make_builtin(name, {}, 2.0)
            assert f.kind is builtin.kind, name
            assert f(x).shape == (2, 4)

    def test_parameters_listed(self) -> None:
        """parameters() omits the wave number."""
        assert BUILTINS["beltrami-shear"].parameters() == ["axis", "phase", "wavenumber"]

    def test_wavenumber_override(self, fine_grid: Grid) -> None:
        """'wavenumber' makes a Beltrami field for another lambda."""
        f = make_builtin("beltrami-shear", {"wavenumber": -2.0}, 2.0)
        assert verify_forcefree(sample(f, fine_grid), -2.0, 0.02).passed

    def test_unknown_builtin(self) -> None:
        """Unknown names list the known ones."""
        with pytest.raises(ConfigError, match="known: "):
            make_builtin("vortex", {}, 1.0)

    def test_unknown_parameter(self) -> None:
        """Unknown parameters name the offending key."""
        with pytest.raises(ConfigError) as info:
            make_builtin("trig", {"kk": 2.0}, 1.0, key="homogeneous.plus")
        assert info.value.key == "homogeneous.plus.params.kk"

    def test_bad_parameter_value(self) -> None:
        """Factory errors become configuration errors."""
        with pytest.raises(ConfigError, match="matrix"):
            make_builtin("linear", {"matrix": [[1, 0], [0, 1]]}, 1.0)


class TestFields:
    """Tests for the named field families."""

    def test_bump_support(self) -> None:
        """The bump vanishes outside its radius and peaks at the center."""
        f = bump(radius=0.5, direction=(0.0, 1.0, 0.0))
        values = f.vector_values(np.array([[0.0, 0.0, 0.0], [0.6, 0.0, 0.0]]))
        np.testing.assert_allclose(values, [[0, 1, 0], [0, 0, 0]])

    def test_trig_is_vector(self) -> None:
        """trig has no scalar part."""
        assert trig(1.0).kind is FieldKind.VECTOR


class TestResolveSource:
    """Tests for resolve_source."""

    def test_builtin(self) -> None:
        """A builtin spec builds the named field."""
        f = resolve_source(SourceSpec(builtin="constant", params={"value": [0, 0, 2]}), 1.0)
        np.testing.assert_allclose(f.vector_values(np.zeros((1, 3))), [[0, 0, 2]])

    def test_csv_round_trip(self, tmp_path: Path, cube_grid: Grid) -> None:
        """A CSV source interpolates the written sample."""
        path = tmp_path / "g.csv"
        original = Field.vector(lambda p: p * 2.0)
        write_csv(sample(original, cube_grid), path)
        f = resolve_source(SourceSpec(csv=path), 1.0)
        x = np.array([[0.1, -0.3, 0.2]])
        np.testing.assert_allclose(f.vector_values(x), original.vector_values(x), atol=1e-10)

    def test_missing_csv(self, tmp_path: Path) -> None:
        """A missing CSV file is a configuration error."""
        with pytest.raises(ConfigError, match="not found"):
            resolve_source(SourceSpec(csv=tmp_path / "absent.csv"), 1.0)
