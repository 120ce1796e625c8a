"""CLI interface for curllambda."""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from dataclasses import asdict
from pathlib import Path
from typing import Any

import click
import numpy as np

from . import __version__
from .config import PROFILE_FACTORS, RunConfig, SourceSpec, Tolerances
from .conjugate import conjugate_from_scalar, conjugate_from_vector, monogenic_residual
from .domain import (
    Field,
    FieldKind,
    FieldSample,
    Grid,
    VoxelDomain,
    build_domain,
    interior_eval_grid,
    sample,
)
from .errors import ConfigError, PreconditionError
from .export import write_csv, write_mesh_off, write_report, write_vtk
from .forcefree import verify_forcefree_field
from .maxwell import (
    MediumParams,
    SourceData,
    beltrami_split_residuals,
    chiral_residuals,
    maxwell_residuals,
    quaternionic_residuals,
    solve_achiral,
    solve_chiral,
)
from .neumann import make_sphere_mesh, solve_neumann
from .potentials import resolve_threads
from .rightinverse import (
    curl_residual,
    gauge_residual,
    gauge_solve,
    general_solution,
    r_lambda_normal_trace,
)
from .sources import resolve_source
from .verify import SUITE_NAMES, format_table, run_suites, summary

logger = logging.getLogger("curllambda")

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

EXIT_CONFIG = 2
EXIT_PRECONDITION = 3


def _setup_logging(verbose: bool, log_file: Path | None) -> None:
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    for old in list(logger.handlers):
        logger.removeHandler(old)
        old.close()
    handler: logging.Handler = (
        logging.FileHandler(log_file) if log_file else logging.StreamHandler()
    )
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT))
    logger.addHandler(handler)
    logger.propagate = False


@contextmanager
def _handle_errors() -> Iterator[None]:
    """Map configuration problems to exit 2 and failed preconditions to exit 3."""
    try:
        yield
    except ConfigError as e:
        click.echo(f"Configuration error: {e}", err=True)
        raise SystemExit(EXIT_CONFIG) from None
    except PreconditionError as e:
        click.echo(f"Precondition failed: {e}", err=True)
        raise SystemExit(EXIT_PRECONDITION) from None


def run_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Options shared by every solve command."""
    decorators = [
        click.option(
            "--config",
            "config_path",
            required=True,
            type=click.Path(dir_okay=False, path_type=Path),
            help="Run configuration (TOML or JSON)",
        ),
        click.option(
            "--out",
            "out_dir",
            default=".",
            show_default=True,
            type=click.Path(file_okay=False, path_type=Path),
            help="Output directory",
        ),
        click.option(
            "--threads",
            type=click.IntRange(min=0),
            default=None,
            help="Worker threads (0 = all cores; default: $CURL_LAMBDA_THREADS or all cores)",
        ),
        click.option(
            "--tolerance-profile",
            "profile",
            type=click.Choice(list(PROFILE_FACTORS)),
            default="default",
            show_default=True,
            help="Scale of the calibration tolerances",
        ),
    ]
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


class Run:
    """State of one solve command: configuration, domain, grid and report."""

    def __init__(
        self, command: str, config_path: Path, out_dir: Path, threads: int | None, profile: str
    ) -> None:
        self.started = time.perf_counter()
        self.command = command
        self.config_path = config_path
        self.out_dir = out_dir
        self.threads = threads
        self.config = RunConfig.load(config_path)
        self.tol = self.config.tolerance_table(profile)
        self.profile = profile
        self.report: dict[str, Any] = {
            "command": command,
            "version": __version__,
            "config": str(config_path),
            "tolerance_profile": profile,
            "tolerances": asdict(self.tol),
            "threads": resolve_threads(threads),
            "parameters": {},
            "residuals": {},
            "checks": {},
            "outputs": [],
        }

    def domain_and_grid(self) -> tuple[VoxelDomain, Grid]:
        cfg = self.config
        t = time.perf_counter()
        domain = build_domain(cfg.domain.shape(), cfg.domain.n)
        grid = interior_eval_grid(domain, cfg.eval.n, cfg.eval.margin)
        self.report["parameters"].update(
            {
                "domain": cfg.domain.type,
                "n": cfg.domain.n,
                "cells": domain.size,
                "h": domain.h,
                "eval_n": cfg.eval.n,
                "eval_margin": cfg.eval.margin,
                "eval_points": grid.size,
            }
        )
        logger.debug("domain and grid ready in %.2fs", time.perf_counter() - t)
        return domain, grid

    def source(self, spec: SourceSpec, kappa: complex, key: str) -> Field:
        return resolve_source(spec, kappa, key)

    def check(self, name: str, value: float, tol: float) -> None:
        """Record a residual against its tolerance; exceeding it is logged, not fatal."""
        passed = bool(value <= tol)
        self.report["residuals"][name] = value
        self.report["checks"][name] = {"tol": tol, "passed": passed}
        if not passed:
            logger.warning("%s residual %.3e exceeds tolerance %.1e", name, value, tol)

    def write_fields(self, fields: dict[str, FieldSample]) -> None:
        """One CSV (and VTK when configured) per field; suffixes go before the extension."""
        out = self.config.output
        for suffix, field_sample in fields.items():
            csv_path = _suffixed(self.out_dir / out.csv, suffix)
            write_csv(field_sample, csv_path)
            self.report["outputs"].append(str(csv_path))
            if out.vtk is not None:
                vtk_path = _suffixed(self.out_dir / out.vtk, suffix)
                write_vtk(field_sample, vtk_path, title=f"curllambda {self.command}{suffix}")
                self.report["outputs"].append(str(vtk_path))
            click.echo(f"Wrote {len(field_sample)} points to {csv_path}")

    def finish(self) -> None:
        self.report["timings"] = {"total_seconds": time.perf_counter() - self.started}
        report_path = self.out_dir / "report.json"
        write_report(self.report, report_path)
        failed = [k for k, v in self.report["checks"].items() if not v["passed"]]
        if failed:
            click.echo(f"Residuals above tolerance: {', '.join(failed)}", err=True)
        click.echo(f"Report: {report_path}")


def _suffixed(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}{suffix}{path.suffix}") if suffix else path


def _require_kind(field: Field, kind: FieldKind, key: str) -> None:
    if field.kind is not kind:
        raise ConfigError(key, f"expected a {kind.value} field, got {field.kind.value}")


@click.group()
@click.version_option(version=__version__)
@click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level")
@click.option(
    "--log-file",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the log to a file instead of stderr",
)
@click.pass_context
def cli(ctx: click.Context, verbose: bool, log_file: Path | None) -> None:
    """curllambda - solve curl w + lambda w = g and its applications."""
    ctx.ensure_object(dict)
    _setup_logging(verbose, log_file)


main = cli


@main.command(name="solve-curl")
@run_options
def solve_curl(config_path: Path, out_dir: Path, threads: int | None, profile: str) -> None:
    """Solve curl w + lambda w = g in the configured domain."""
    with _handle_errors():
        run = Run("solve-curl", config_path, out_dir, threads, profile)
        cfg = run.config
        lam = cfg.wavenumber()
        run.report["parameters"]["lambda"] = lam
        g = run.source(cfg.source, lam, "source")
        _require_kind(g, FieldKind.VECTOR, "source")
        domain, grid = run.domain_and_grid()

        if cfg.solve_curl.gauge_phi is not None:
            if cfg.solve_curl.force_free is not None:
                raise ConfigError("solve_curl", "force_free and gauge_phi cannot be combined")
            phi = run.source(cfg.solve_curl.gauge_phi, lam, "solve_curl.gauge_phi")
            _require_kind(phi, FieldKind.SCALAR, "solve_curl.gauge_phi")
            w = gauge_solve(domain, g, phi, lam, grid, threads=threads)
            run.check("gauge", gauge_residual(w, g, phi, lam), run.tol.gauge)
        else:
            u = None
            if cfg.solve_curl.force_free is not None:
                u = run.source(cfg.solve_curl.force_free, lam, "solve_curl.force_free")
            w = general_solution(domain, g, lam, grid, u, tol=run.tol.forcefree, threads=threads)
            run.check("curl", curl_residual(w, g, lam), run.tol.right_inverse)

        run.write_fields({"": w})
        run.finish()


@main.command()
@run_options
@click.option(
    "--direction",
    type=click.Choice(["from-scalar", "from-vector"]),
    default=None,
    help="Which part is given (default: conjugate.direction in the config)",
)
@click.option("--unsafe", is_flag=True, help="Skip the Helmholtz precondition checks")
def conjugate(
    config_path: Path,
    out_dir: Path,
    threads: int | None,
    profile: str,
    direction: str | None,
    unsafe: bool,
) -> None:
    """Complete a Helmholtz solution to a lambda-monogenic field."""
    with _handle_errors():
        run = Run("conjugate", config_path, out_dir, threads, profile)
        cfg = run.config
        direction = direction or cfg.direction
        if direction is None:
            raise ConfigError("conjugate.direction", "missing (or pass --direction)")
        lam = cfg.wavenumber()
        run.report["parameters"].update({"lambda": lam, "direction": direction, "unsafe": unsafe})
        given = run.source(cfg.source, lam, "source")
        _, grid = run.domain_and_grid()
        values = sample(given, grid)

        if direction == "from-scalar":
            _require_kind(given, FieldKind.SCALAR, "source")
            partner = conjugate_from_scalar(values, lam, tol=run.tol.precondition, unsafe=unsafe)
            w0, w = values, partner
        else:
            _require_kind(given, FieldKind.VECTOR, "source")
            partner = conjugate_from_vector(values, lam, tol=run.tol.precondition, unsafe=unsafe)
            w0, w = partner, values

        run.check("monogenic", monogenic_residual(w0, w, lam), run.tol.precondition)
        run.write_fields({"": w0 + w})
        run.finish()


def _medium(run: Run, beta: complex | None) -> MediumParams:
    m = run.config.medium
    if m is None:
        raise ConfigError("medium", "missing required section")
    medium = MediumParams(m.omega, m.eps, m.mu, m.beta if beta is None else beta)
    run.report["parameters"].update(
        {
            "omega": medium.omega,
            "eps": medium.eps,
            "mu": medium.mu,
            "beta": medium.beta,
            "lambda": medium.lam,
            "alpha1": medium.alpha1,
            "alpha2": medium.alpha2,
        }
    )
    return medium


def _run_maxwell(
    command: str,
    config_path: Path,
    out_dir: Path,
    threads: int | None,
    profile: str,
    beta: complex | None,
    force_chiral: bool,
) -> None:
    with _handle_errors():
        run = Run(command, config_path, out_dir, threads, profile)
        cfg = run.config
        medium = _medium(run, beta)
        chiral = force_chiral or medium.chiral
        j = run.source(cfg.source, medium.lam, "source")
        _require_kind(j, FieldKind.VECTOR, "source")
        domain, grid = run.domain_and_grid()
        src = SourceData(domain, j)
        plus_kappa = medium.alpha1 if chiral else medium.lam
        minus_kappa = -(medium.alpha2 if chiral else medium.lam)
        hom = cfg.homogeneous
        plus = run.source(hom.plus, plus_kappa, "homogeneous.plus") if hom.plus else None
        minus = run.source(hom.minus, minus_kappa, "homogeneous.minus") if hom.minus else None

        if chiral:
            sol = solve_chiral(
                domain, src, medium, grid, plus, minus, tol=run.tol.forcefree, threads=threads
            )
            for name, value in chiral_residuals(sol.E, sol.H, j, medium).items():
                run.check(f"chiral_{name}", value, run.tol.chiral)
            for name, value in beltrami_split_residuals(sol.E, sol.H, j, medium).items():
                run.check(f"polarization_{name}", value, run.tol.chiral)
        else:
            sol = solve_achiral(
                domain, src, medium, grid, plus, minus, tol=run.tol.forcefree, threads=threads
            )
            for name, value in maxwell_residuals(sol.E, sol.H, j, medium).items():
                run.check(name, value, run.tol.maxwell)
            for name, value in quaternionic_residuals(sol.E, sol.H, j, medium).items():
                run.check(f"diagonalized_{name}", value, run.tol.maxwell)

        run.write_fields({"_E": sol.E, "_H": sol.H})
        run.finish()


def _complex_option(
    ctx: click.Context, param: click.Parameter, value: str | None
) -> complex | None:
    if value is None:
        return None
    try:
        return complex(value.replace(" ", ""))
    except ValueError:
        raise click.BadParameter(f"not a number: {value!r}") from None


@main.command()
@run_options
@click.option(
    "--chiral",
    "beta",
    default=None,
    callback=_complex_option,
    metavar="BETA",
    help="Chirality measure (overrides medium.beta); nonzero selects the chiral solver",
)
def maxwell(
    config_path: Path, out_dir: Path, threads: int | None, profile: str, beta: complex | None
) -> None:
    """Time-harmonic Maxwell fields of a current density."""
    _run_maxwell("maxwell", config_path, out_dir, threads, profile, beta, force_chiral=False)


@main.command()
@run_options
@click.option(
    "--beta",
    default=None,
    callback=_complex_option,
    help="Chirality measure (default: medium.beta)",
)
def chiral(
    config_path: Path, out_dir: Path, threads: int | None, profile: str, beta: complex | None
) -> None:
    """Maxwell fields in a chiral medium; beta = 0 gives the achiral fields."""
    _run_maxwell("chiral", config_path, out_dir, threads, profile, beta, force_chiral=True)


@main.command()
@run_options
def neumann(config_path: Path, out_dir: Path, threads: int | None, profile: str) -> None:
    """Solve curl w + lambda w = g in a ball with prescribed w . n on the sphere."""
    with _handle_errors():
        run = Run("neumann", config_path, out_dir, threads, profile)
        cfg = run.config
        if cfg.domain.type != "ball":
            raise ConfigError("domain.type", "the Neumann solver meshes balls only")
        lam = cfg.wavenumber()
        nm = cfg.neumann
        run.report["parameters"].update(
            {"lambda": lam, "mesh_level": nm.mesh_level, "phi0_offset": nm.phi0_offset}
        )
        g = run.source(cfg.source, lam, "source")
        _require_kind(g, FieldKind.VECTOR, "source")
        domain, grid = run.domain_and_grid()
        mesh = make_sphere_mesh(cfg.domain.radius, nm.mesh_level, cfg.domain.center)
        c, n = mesh.centroids, mesh.normals

        # manufactured datum: w = R[g] + u has w . n = R[g] . n + u . n
        phi0 = r_lambda_normal_trace(domain, g, lam, c, n, threads=threads)
        u_exact = None
        if nm.force_free is not None:
            u_exact = run.source(nm.force_free, lam, "neumann.force_free")
            report = verify_forcefree_field(u_exact, lam, grid, run.tol.forcefree)
            if not report.passed:
                logger.warning(
                    "neumann.force_free is not force-free (curl %.3e, div %.3e)",
                    report.curl_residual,
                    report.div_residual,
                )
            phi0 = phi0 + np.sum(u_exact.vector_values(c) * n, axis=1)
        phi0 = phi0 + nm.phi0_offset

        sol = solve_neumann(
            domain,
            g,
            phi0,
            lam,
            mesh,
            grid,
            compatibility_tol=run.tol.compatibility,
            forcefree_tol=run.tol.forcefree,
            dense_limit=nm.dense_limit,
            threads=threads,
        )
        run.report["diagnostics"] = sol.diagnostics
        run.check(
            "boundary_condition",
            sol.diagnostics["boundary_condition_residual"],
            run.tol.bie_residual,
        )
        run.check(
            "forcefree",
            max(
                sol.diagnostics["forcefree_curl_residual"],
                sol.diagnostics["forcefree_div_residual"],
            ),
            run.tol.forcefree,
        )
        if u_exact is not None:
            u_ref = sample(u_exact, sol.u.grid if sol.u.grid is not None else sol.u.points)
            exact = sol.w - sol.u + u_ref
            err = float((sol.w - exact).norm() / exact.norm()) if exact.norm() > 0 else 0.0
            run.check("recovery", err, run.tol.neumann_recovery)

        run.write_fields({"": sol.w})
        mesh_path = run.out_dir / "mesh.off"
        write_mesh_off(mesh, mesh_path)
        run.report["outputs"].append(str(mesh_path))
        run.finish()


@main.command()
@click.option(
    "--suite",
    type=click.Choice(list(SUITE_NAMES)),
    default="all",
    show_default=True,
    help="Which checks to run",
)
@click.option(
    "--n",
    "n",
    type=click.IntRange(min=8),
    default=16,
    show_default=True,
    help="Source cells per axis",
)
@click.option(
    "--mesh-level",
    type=click.IntRange(min=1),
    default=3,
    show_default=True,
    help="Sphere mesh level of the neumann suite",
)
@click.option(
    "--tolerance-profile",
    "profile",
    type=click.Choice(list(PROFILE_FACTORS)),
    default="default",
    show_default=True,
    help="Scale of the calibration tolerances",
)
@click.option("--threads", type=click.IntRange(min=0), default=None, help="Worker threads")
@click.option(
    "--report",
    "report_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Also write the results as JSON",
)
def verify(
    suite: str,
    n: int,
    mesh_level: int,
    profile: str,
    threads: int | None,
    report_path: Path | None,
) -> None:
    """Run the property checks; exit 0 iff all pass."""
    with _handle_errors():
        started = time.perf_counter()
        results = run_suites(suite, n, Tolerances.profile(profile), threads, mesh_level)
        click.echo(format_table(results))
        failed = sum(not r.passed for r in results)
        click.echo(f"\n{len(results) - failed}/{len(results)} checks passed")
        if report_path is not None:
            write_report(
                {
                    "suite": suite,
                    "n": n,
                    "mesh_level": mesh_level,
                    "tolerance_profile": profile,
                    "seconds": time.perf_counter() - started,
                    **summary(results),
                },
                report_path,
            )
        if failed:
            raise SystemExit(1)
