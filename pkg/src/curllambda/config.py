"""Run configuration for curllambda commands."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Literal

from .domain import Ball, Box, Ellipsoid, Shape
from .errors import ConfigError, DomainError

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

ProfileName = Literal["strict", "default", "relaxed"]

PROFILE_FACTORS: dict[str, float] = {"strict": 0.5, "default": 1.0, "relaxed": 2.0}


def parse_complex(value: Any, key: str) -> complex:
    """Accept ``2``, ``[re, im]`` or ``{"re": .., "im": ..}``."""
    if isinstance(value, bool):
        raise ConfigError(key, "expected a number, got a boolean")
    if isinstance(value, int | float):
        return complex(value)
    if isinstance(value, list | tuple) and len(value) == 2:
        re, im = (_number(v, key) for v in value)
        return complex(re, im)
    if isinstance(value, dict):
        _check_keys(value, {"re", "im"}, key)
        return complex(_number(value.get("re", 0.0), key), _number(value.get("im", 0.0), key))
    raise ConfigError(key, f"expected a complex number, got {value!r}")


def _number(value: Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, int | float):
        raise ConfigError(key, f"expected a number, got {value!r}")
    return float(value)


def _integer(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(key, f"expected an integer, got {value!r}")
    return value


def _vec3(value: Any, key: str) -> tuple[float, float, float]:
    if not isinstance(value, list | tuple) or len(value) != 3:
        raise ConfigError(key, f"expected a list of 3 numbers, got {value!r}")
    x, y, z = (_number(v, key) for v in value)
    return (x, y, z)


def _table(value: Any, key: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise ConfigError(key, f"expected a table, got {value!r}")
    return value


def _check_keys(data: dict[str, Any], allowed: set[str], prefix: str) -> None:
    for key in data:
        if key not in allowed:
            path = f"{prefix}.{key}" if prefix else key
            raise ConfigError(path, "unknown key")


def _required(data: dict[str, Any], key: str, prefix: str) -> Any:
    if key not in data:
        raise ConfigError(f"{prefix}.{key}" if prefix else key, "missing required key")
    return data[key]


@dataclass(frozen=True)
class Tolerances:
    """Calibration table shared by the solvers, the tests and ``verify``."""

    right_inverse: float = 0.05
    gauge: float = 0.07
    maxwell: float = 0.07
    chiral: float = 0.07
    neumann_recovery: float = 0.10
    bie_residual: float = 0.05
    compatibility: float = 0.05
    precondition: float = 0.02
    forcefree: float = 0.02
    conjugate_roundtrip: float = 0.01
    identity: float = 1e-12
    collapse: float = 1e-10
    refinement_ratio: float = 1.5

    # entries that are exact or ratios and never scale with the profile
    FIXED = frozenset({"identity", "collapse", "refinement_ratio"})

    @classmethod
    def profile(cls, name: str = "default") -> Tolerances:
        """The table scaled by a named profile."""
        if name not in PROFILE_FACTORS:
            raise ConfigError("tolerance-profile", f"unknown profile {name!r}")
        factor = PROFILE_FACTORS[name]
        base = cls()
        scaled = {
            f.name: getattr(base, f.name) * factor
            for f in fields(cls)
            if f.name not in cls.FIXED
        }
        return replace(base, **scaled)

    def overridden(self, data: dict[str, Any]) -> Tolerances:
        names = {f.name for f in fields(self)}
        _check_keys(data, names, "tolerances")
        return replace(self, **{k: _number(v, f"tolerances.{k}") for k, v in data.items()})


@dataclass
class DomainConfig:
    """Domain section."""

    type: Literal["ball", "box", "ellipsoid"] = "ball"
    radius: float = 1.0
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    lo: tuple[float, float, float] = (-1.0, -1.0, -1.0)
    hi: tuple[float, float, float] = (1.0, 1.0, 1.0)
    semiaxes: tuple[float, float, float] = (1.0, 1.0, 1.0)
    n: int = 32

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DomainConfig:
        _check_keys(data, {"type", "radius", "center", "lo", "hi", "semiaxes", "n"}, "domain")
        kind = _required(data, "type", "domain")
        n = _integer(_required(data, "n", "domain"), "domain.n")
        if kind == "ball":
            _check_keys(data, {"type", "radius", "center", "n"}, "domain")
            return cls(
                type="ball",
                radius=_number(_required(data, "radius", "domain"), "domain.radius"),
                center=_vec3(data.get("center", (0.0, 0.0, 0.0)), "domain.center"),
                n=n,
            )
        if kind == "box":
            _check_keys(data, {"type", "lo", "hi", "n"}, "domain")
            return cls(
                type="box",
                lo=_vec3(_required(data, "lo", "domain"), "domain.lo"),
                hi=_vec3(_required(data, "hi", "domain"), "domain.hi"),
                n=n,
            )
        if kind == "ellipsoid":
            _check_keys(data, {"type", "semiaxes", "center", "n"}, "domain")
            return cls(
                type="ellipsoid",
                semiaxes=_vec3(_required(data, "semiaxes", "domain"), "domain.semiaxes"),
                center=_vec3(data.get("center", (0.0, 0.0, 0.0)), "domain.center"),
                n=n,
            )
        raise ConfigError("domain.type", f"expected ball, box or ellipsoid, got {kind!r}")

    def shape(self) -> Shape:
        try:
            if self.type == "ball":
                return Ball(self.radius, self.center)
            if self.type == "box":
                return Box(self.lo, self.hi)
            return Ellipsoid(self.semiaxes, self.center)
        except DomainError as e:
            raise ConfigError("domain", str(e)) from None


@dataclass
class SourceSpec:
    """A builtin field with parameters, or a CSV sample."""

    builtin: str | None = None
    params: dict[str, Any] = field(default_factory=dict)
    csv: Path | None = None

    @classmethod
    def from_dict(cls, data: Any, key: str, base_dir: Path | None = None) -> SourceSpec:
        data = _table(data, key)
        _check_keys(data, {"builtin", "params", "csv"}, key)
        if ("builtin" in data) == ("csv" in data):
            raise ConfigError(key, "give exactly one of 'builtin' and 'csv'")
        if "csv" in data:
            path = Path(str(data["csv"])).expanduser()
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            return cls(csv=path)
        builtin = data["builtin"]
        if not isinstance(builtin, str):
            raise ConfigError(f"{key}.builtin", f"expected a name, got {builtin!r}")
        return cls(builtin=builtin, params=dict(_table(data.get("params", {}), f"{key}.params")))


@dataclass
class EvalConfig:
    """Evaluation grid section."""

    n: int = 16
    margin: int = 2


@dataclass
class OutputConfig:
    """Output section."""

    csv: str = "field.csv"
    vtk: str | None = None


@dataclass
class MediumConfig:
    """Medium section for the Maxwell commands."""

    omega: float = 1.0
    eps: complex = 1.0
    mu: complex = 4.0
    beta: complex = 0.0


@dataclass
class SolveCurlConfig:
    """Optional ``solve_curl`` block: force-free addend and gauge function."""

    force_free: SourceSpec | None = None
    gauge_phi: SourceSpec | None = None


@dataclass
class HomogeneousConfig:
    """Optional ``homogeneous`` block: force-free inputs for the Maxwell solvers."""

    plus: SourceSpec | None = None
    minus: SourceSpec | None = None


@dataclass
class NeumannConfig:
    """Neumann section."""

    mesh_level: int = 3
    force_free: SourceSpec | None = None
    phi0_offset: complex = 0.0
    dense_limit: int = 4000


@dataclass
class RunConfig:
    """Complete configuration of one command run."""

    domain: DomainConfig
    source: SourceSpec
    eval: EvalConfig = field(default_factory=EvalConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    lam: complex | None = None
    medium: MediumConfig | None = None
    solve_curl: SolveCurlConfig = field(default_factory=SolveCurlConfig)
    homogeneous: HomogeneousConfig = field(default_factory=HomogeneousConfig)
    neumann: NeumannConfig = field(default_factory=NeumannConfig)
    tolerances: dict[str, float] = field(default_factory=dict)
    direction: Literal["from-scalar", "from-vector"] | None = None

    @classmethod
    def load(cls, path: Path) -> RunConfig:
        """Load configuration from a TOML or JSON file."""
        if not path.exists():
            raise ConfigError(str(path), "configuration file not found")
        try:
            if path.suffix == ".json":
                data = json.loads(path.read_text())
            else:
                with path.open("rb") as f:
                    data = tomllib.load(f)
        except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
            raise ConfigError(str(path), f"cannot parse: {e}") from None
        return cls.from_dict(_table(data, "<root>"), base_dir=path.parent)

    @classmethod
    def from_dict(cls, data: dict[str, Any], base_dir: Path | None = None) -> RunConfig:
        _check_keys(
            data,
            {
                "domain", "lambda", "source", "eval", "output", "medium", "solve_curl",
                "homogeneous", "neumann", "tolerances", "conjugate",
            },
            "",
        )
        domain = DomainConfig.from_dict(_table(_required(data, "domain", ""), "domain"))
        source = SourceSpec.from_dict(_required(data, "source", ""), "source", base_dir)

        eval_data = _table(_required(data, "eval", ""), "eval")
        _check_keys(eval_data, {"n", "margin"}, "eval")
        eval_cfg = EvalConfig(
            n=_integer(_required(eval_data, "n", "eval"), "eval.n"),
            margin=_integer(_required(eval_data, "margin", "eval"), "eval.margin"),
        )

        output_data = _table(_required(data, "output", ""), "output")
        _check_keys(output_data, {"csv", "vtk"}, "output")
        vtk = output_data.get("vtk")
        output = OutputConfig(
            csv=str(_required(output_data, "csv", "output")),
            vtk=str(vtk) if vtk is not None else None,
        )

        lam = parse_complex(data["lambda"], "lambda") if "lambda" in data else None

        medium = None
        if "medium" in data:
            m = _table(data["medium"], "medium")
            _check_keys(m, {"omega", "eps", "mu", "beta"}, "medium")
            medium = MediumConfig(
                omega=_number(_required(m, "omega", "medium"), "medium.omega"),
                eps=parse_complex(_required(m, "eps", "medium"), "medium.eps"),
                mu=parse_complex(_required(m, "mu", "medium"), "medium.mu"),
                beta=parse_complex(m.get("beta", 0.0), "medium.beta"),
            )

        sc = _table(data.get("solve_curl", {}), "solve_curl")
        _check_keys(sc, {"force_free", "gauge_phi"}, "solve_curl")
        solve_curl = SolveCurlConfig(
            force_free=_optional_spec(sc, "force_free", "solve_curl", base_dir),
            gauge_phi=_optional_spec(sc, "gauge_phi", "solve_curl", base_dir),
        )

        hom = _table(data.get("homogeneous", {}), "homogeneous")
        _check_keys(hom, {"plus", "minus"}, "homogeneous")
        homogeneous = HomogeneousConfig(
            plus=_optional_spec(hom, "plus", "homogeneous", base_dir),
            minus=_optional_spec(hom, "minus", "homogeneous", base_dir),
        )

        nm = _table(data.get("neumann", {}), "neumann")
        _check_keys(
            nm,
            {"mesh_level", "force_free", "phi0_offset", "dense_limit"},
            "neumann",
        )
        neumann = NeumannConfig(
            mesh_level=_integer(nm.get("mesh_level", 3), "neumann.mesh_level"),
            force_free=_optional_spec(nm, "force_free", "neumann", base_dir),
            phi0_offset=parse_complex(nm.get("phi0_offset", 0.0), "neumann.phi0_offset"),
            dense_limit=_integer(nm.get("dense_limit", 4000), "neumann.dense_limit"),
        )

        tolerances = _table(data.get("tolerances", {}), "tolerances")
        Tolerances().overridden(tolerances)

        conj = _table(data.get("conjugate", {}), "conjugate")
        _check_keys(conj, {"direction"}, "conjugate")
        direction = conj.get("direction")
        if direction not in (None, "from-scalar", "from-vector"):
            raise ConfigError("conjugate.direction", f"unknown direction {direction!r}")

        return cls(
            domain=domain,
            source=source,
            eval=eval_cfg,
            output=output,
            lam=lam,
            medium=medium,
            solve_curl=solve_curl,
            homogeneous=homogeneous,
            neumann=neumann,
            tolerances=dict(tolerances),
            direction=direction,
        )

    def wavenumber(self) -> complex:
        """The configured lambda; required by every command except the Maxwell ones."""
        if self.lam is None:
            raise ConfigError("lambda", "missing required key")
        return self.lam

    def tolerance_table(self, profile: str = "default") -> Tolerances:
        return Tolerances.profile(profile).overridden(self.tolerances)


def _optional_spec(
    data: dict[str, Any], key: str, prefix: str, base_dir: Path | None
) -> SourceSpec | None:
    if key not in data:
        return None
    return SourceSpec.from_dict(data[key], f"{prefix}.{key}", base_dir)
