"""Neumann problem for curl + lambda by a Nystrom boundary integral equation."""

from __future__ import annotations

import cmath
import logging
import math
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np
from numpy.typing import NDArray
from scipy import linalg
from scipy.sparse.linalg import LinearOperator, gmres
from scipy.spatial import cKDTree

from .domain import Field, FieldKind, FieldSample, FloatArray, Grid, VoxelDomain
from .errors import (
    CompatibilityError,
    DomainError,
    IllConditionedError,
    ProximityError,
    ZeroWavenumberError,
)
from .forcefree import verify_forcefree
from .kernels import grad_theta, selfdisk_theta, theta
from .potentials import CHUNK_SIZE, resolve_threads
from .quaternion import ComplexArray
from .rightinverse import r_lambda, r_lambda_normal_trace

logger = logging.getLogger(__name__)

# Reciprocal condition number below which the dense system counts as singular.
_RCOND_FLOOR = 1e-13


@dataclass(frozen=True, eq=False)
class SurfaceMesh:
    """Closed triangle mesh with outward orientation."""

    vertices: FloatArray
    triangles: NDArray[np.int64]
    sphere: tuple[FloatArray, float] | None = None

    def __len__(self) -> int:
        return int(self.triangles.shape[0])

    @cached_property
    def _corners(self) -> FloatArray:
        return self.vertices[self.triangles]

    @cached_property
    def centroids(self) -> FloatArray:
        return self._corners.mean(axis=1)

    @cached_property
    def _cross(self) -> FloatArray:
        a, b, c = self._corners[:, 0], self._corners[:, 1], self._corners[:, 2]
        return np.cross(b - a, c - a)

    @cached_property
    def areas(self) -> FloatArray:
        return 0.5 * np.linalg.norm(self._cross, axis=1)

    @cached_property
    def normals(self) -> FloatArray:
        return self._cross / np.linalg.norm(self._cross, axis=1)[:, None]

    @cached_property
    def diameters(self) -> FloatArray:
        """Longest edge of each triangle."""
        p = self._corners
        edges = np.stack([p[:, 1] - p[:, 0], p[:, 2] - p[:, 1], p[:, 0] - p[:, 2]], axis=1)
        return np.linalg.norm(edges, axis=2).max(axis=1)

    @property
    def mean_diameter(self) -> float:
        return float(self.diameters.mean())

    @cached_property
    def tangents(self) -> tuple[FloatArray, FloatArray]:
        """Orthonormal tangent basis ``(t1, t2)`` with ``t2 = n x t1``."""
        edge = self._corners[:, 1] - self._corners[:, 0]
        t1 = edge - np.sum(edge * self.normals, axis=1)[:, None] * self.normals
        t1 /= np.linalg.norm(t1, axis=1)[:, None]
        return t1, np.cross(self.normals, t1)

    @property
    def total_area(self) -> float:
        return float(self.areas.sum())


def _icosahedron() -> tuple[FloatArray, NDArray[np.int64]]:
    t = (1.0 + 5**0.5) / 2.0
    verts = np.array(
        [
            [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
            [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
            [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
        ],
        dtype=np.float64,
    )
    faces = np.array(
        [
            [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
            [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
            [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
            [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
        ],
        dtype=np.int64,
    )
    return verts / np.linalg.norm(verts, axis=1)[:, None], faces


def _subdivide(
    verts: FloatArray, faces: NDArray[np.int64]
) -> tuple[FloatArray, NDArray[np.int64]]:
    """Split every triangle in four, projecting new vertices onto the unit sphere."""
    vert_list = verts.tolist()
    cache: dict[tuple[int, int], int] = {}

    def midpoint(i: int, j: int) -> int:
        key = (i, j) if i < j else (j, i)
        if key not in cache:
            v = (verts[i] + verts[j]) * 0.5
            vert_list.append((v / np.linalg.norm(v)).tolist())
            cache[key] = len(vert_list) - 1
        return cache[key]

    new_faces = []
    for a, b, c in faces.tolist():
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        new_faces += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
    return np.array(vert_list, dtype=np.float64), np.array(new_faces, dtype=np.int64)


def make_sphere_mesh(
    radius: float = 1.0, level: int = 3, center: tuple[float, float, float] = (0.0, 0.0, 0.0)
) -> SurfaceMesh:
    """Icosphere with ``20 * 4**level`` outward-oriented triangles."""
    if level < 1:
        raise DomainError(f"mesh level must be at least 1, got {level}")
    if not radius > 0:
        raise DomainError(f"sphere radius must be positive, got {radius}")
    verts, faces = _icosahedron()
    for _ in range(level):
        verts, faces = _subdivide(verts, faces)
    c = np.asarray(center, dtype=np.float64)
    mesh = SurfaceMesh(verts * radius + c, faces, (c, float(radius)))
    inward = np.sum(mesh.normals * (mesh.centroids - c), axis=1) < 0
    if np.any(inward):
        faces = faces.copy()
        faces[inward] = faces[inward][:, ::-1]
        mesh = SurfaceMesh(verts * radius + c, faces, (c, float(radius)))
    logger.debug("sphere mesh: level %d, %d triangles", level, len(mesh))
    return mesh


@dataclass(frozen=True)
class BoundaryData:
    """Per-triangle boundary quantities at the centroids."""

    phi0: ComplexArray
    psi0: ComplexArray
    psi: ComplexArray


@dataclass(frozen=True, eq=False)
class NeumannSolution:
    """Solution ``w = R_lambda[g] + u`` with its boundary data and diagnostics."""

    w: FieldSample
    u: FieldSample
    boundary: BoundaryData
    diagnostics: dict[str, Any] = field(default_factory=dict)


def _map_rows(
    work: Callable[[slice], ComplexArray], n: int, threads: int | None
) -> ComplexArray:
    """Concatenate ``work`` over fixed row blocks, in order."""
    blocks = [slice(s, min(s + CHUNK_SIZE, n)) for s in range(0, n, CHUNK_SIZE)]
    workers = resolve_threads(threads)
    if workers == 1 or len(blocks) <= 1:
        parts = [work(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, blocks))
    return np.concatenate(parts, axis=0)


def _pair_kernels(
    mesh: SurfaceMesh, lam: complex, rows: slice
) -> tuple[ComplexArray, ComplexArray]:
    """Area-weighted ``theta`` and ``grad theta`` between centroids; self pairs are zero."""
    c = mesh.centroids
    d = c[rows, None, :] - c[None, :, :]
    local = np.arange(rows.stop - rows.start)
    own = np.arange(rows.start, rows.stop)
    d[local, own] = (1.0, 0.0, 0.0)
    a = mesh.areas[None, :]
    th = theta(d, lam) * a
    gr = grad_theta(d, lam) * a[..., None]
    th[local, own] = 0.0
    gr[local, own] = 0.0
    return th, gr


def _self_theta(mesh: SurfaceMesh, lam: complex) -> ComplexArray:
    """Integral of theta over each triangle, modelled as the disk of equal area."""
    radii = np.sqrt(mesh.areas / math.pi)
    return np.array([selfdisk_theta(float(r), lam) for r in radii], dtype=np.complex128)


def principal_gradient(mesh: SurfaceMesh, lam: complex) -> ComplexArray | None:
    """Principal value of ``int grad theta(x - y) ds(y)`` at the centroids.

    Known in closed form on a sphere of radius ``R``: the tangential part
    vanishes and the normal part is ``-(exp(z) - 2 (exp(z) - 1)/z) / 2`` with
    ``z = 2 i lam R``. ``None`` for other surfaces.
    """
    if mesh.sphere is None:
        return None
    z = 2j * complex(lam) * mesh.sphere[1]
    ratio = 1.0 + z / 2.0 if abs(z) < 1e-8 else (cmath.exp(z) - 1.0) / z
    return -0.5 * (cmath.exp(z) - 2.0 * ratio) * mesh.normals.astype(np.complex128)


def _subtraction(pv: ComplexArray | None, gr: ComplexArray, rows: slice) -> ComplexArray:
    """Row sums of the discrete ``grad theta`` minus their principal value.

    Adding ``corr x psi_i`` (or ``-corr psi0_i``) to a centroid sum turns it
    into ``sum grad theta (psi_j - psi_i) + pv psi_i``. Zero without ``pv``.
    """
    if pv is None:
        return np.zeros((rows.stop - rows.start, 3), dtype=np.complex128)
    return gr.sum(axis=1) - pv[rows]


def _tangential(mesh: SurfaceMesh, coeffs: ComplexArray) -> ComplexArray:
    n = len(mesh)
    t1, t2 = mesh.tangents
    return coeffs[:n, None] * t1 + coeffs[n:, None] * t2


def _project(mesh: SurfaceMesh, v: ComplexArray, rows: slice) -> ComplexArray:
    t1, t2 = mesh.tangents
    return np.stack([np.sum(v * t1[rows], axis=1), np.sum(v * t2[rows], axis=1)], axis=-1)


def _flatten(blocks: ComplexArray) -> ComplexArray:
    # (N, 2) tangent components -> t1 block then t2 block
    return np.concatenate([blocks[:, 0], blocks[:, 1]])


def apply_bie(
    mesh: SurfaceMesh, lam: complex, coeffs: ComplexArray, *, threads: int | None = None
) -> ComplexArray:
    """Apply the boundary integral operator by direct summation.

    ``coeffs`` holds the tangent-basis components of ``psi``: all ``t1``
    components, then all ``t2`` components.
    """
    psi = _tangential(mesh, np.asarray(coeffs, dtype=np.complex128))
    normals = mesh.normals
    self_th = _self_theta(mesh, lam)
    pv = principal_gradient(mesh, lam)

    def work(rows: slice) -> ComplexArray:
        th, gr = _pair_kernels(mesh, lam, rows)
        inner = lam * np.einsum("ij,jk->ik", th, psi) - np.cross(gr, psi[None, :, :]).sum(axis=1)
        inner += lam * self_th[rows, None] * psi[rows]
        inner += np.cross(_subtraction(pv, gr, rows), psi[rows])
        v = 0.5 * psi[rows] + np.cross(normals[rows], inner)
        return _project(mesh, v, rows)

    return _flatten(_map_rows(work, len(mesh), threads))


def assemble_bie(
    mesh: SurfaceMesh, lam: complex, *, threads: int | None = None
) -> ComplexArray:
    """Dense ``2N x 2N`` matrix of the operator in the tangent basis.

    Collocation at centroids with the centroid rule off the diagonal. The
    self-triangle keeps ``psi/2`` plus the equal-area-disk integral of the
    ``lam theta`` term; its ``grad theta x psi`` part vanishes on a flat
    triangle. On a sphere the ``grad theta`` sums act on ``psi_j - psi_i``
    and the principal value of ``int grad theta`` carries ``psi_i``.
    """
    if np.any(mesh.areas <= 1e-14 * mesh.areas.max()):
        raise DomainError("mesh has degenerate triangles")
    n = len(mesh)
    t1, t2 = mesh.tangents
    normals = mesh.normals
    self_th = _self_theta(mesh, lam)
    pv = principal_gradient(mesh, lam)
    started = time.perf_counter()

    def work(rows: slice) -> ComplexArray:
        th, gr = _pair_kernels(mesh, lam, rows)
        corr = _subtraction(pv, gr, rows)
        own = np.arange(rows.start, rows.stop)
        block = np.empty((rows.stop - rows.start, 2, 2 * n), dtype=np.complex128)
        for b, tb in enumerate((t1, t2)):
            v = lam * th[..., None] * tb[None, :, :] - np.cross(gr, tb[None, :, :])
            v[np.arange(len(own)), own] = lam * self_th[own, None] * tb[own] + np.cross(
                corr, tb[own]
            )
            w = np.cross(normals[rows, None, :], v)
            w[np.arange(len(own)), own] += 0.5 * tb[own]
            block[:, 0, b * n : (b + 1) * n] = np.sum(w * t1[rows, None, :], axis=2)
            block[:, 1, b * n : (b + 1) * n] = np.sum(w * t2[rows, None, :], axis=2)
        return block

    blocks = _map_rows(work, n, threads)
    matrix = np.concatenate([blocks[:, 0, :], blocks[:, 1, :]], axis=0)
    logger.debug("assembled %dx%d BIE in %.2fs", 2 * n, 2 * n, time.perf_counter() - started)
    return matrix


def bie_rhs(
    mesh: SurfaceMesh, lam: complex, psi0: ComplexArray, *, threads: int | None = None
) -> ComplexArray:
    """``n(x) x int grad theta(x - y) psi0(y) ds`` at centroids, self-triangle dropped.

    Uses the same singularity subtraction as ``assemble_bie``.
    """
    psi0 = np.asarray(psi0, dtype=np.complex128)
    normals = mesh.normals
    pv = principal_gradient(mesh, lam)

    def work(rows: slice) -> ComplexArray:
        _, gr = _pair_kernels(mesh, lam, rows)
        grad = np.einsum("ijk,j->ik", gr, psi0)
        grad -= _subtraction(pv, gr, rows) * psi0[rows, None]
        return _project(mesh, np.cross(normals[rows], grad), rows)

    return _flatten(_map_rows(work, len(mesh), threads))


def normal_trace(
    mesh: SurfaceMesh,
    lam: complex,
    psi0: ComplexArray,
    psi: ComplexArray,
    *,
    threads: int | None = None,
) -> ComplexArray:
    """Interior limit of ``n . u`` at the centroids for the reconstructed field.

    ``psi0/2 - n.PV int grad theta psi0 - n.PV int grad theta x psi + lam n.int theta psi``.
    """
    psi0 = np.asarray(psi0, dtype=np.complex128)
    psi = np.asarray(psi, dtype=np.complex128)
    normals = mesh.normals
    pv = principal_gradient(mesh, lam)

    def work(rows: slice) -> ComplexArray:
        th, gr = _pair_kernels(mesh, lam, rows)
        corr = _subtraction(pv, gr, rows)
        grad = np.einsum("ijk,j->ik", gr, psi0) - corr * psi0[rows, None]
        curl = np.cross(gr, psi[None, :, :]).sum(axis=1) - np.cross(corr, psi[rows])
        single = np.einsum("ij,jk->ik", th, psi)
        total = -grad - curl + lam * single
        return (0.5 * psi0[rows] + np.sum(normals[rows] * total, axis=1))[:, None]

    return _map_rows(work, len(mesh), threads)[:, 0]


def _check_proximity(mesh: SurfaceMesh, points: FloatArray) -> None:
    required = 2.0 * mesh.mean_diameter
    distance, _ = cKDTree(mesh.centroids).query(points)
    closest = float(np.min(distance)) if len(distance) else math.inf
    if closest < required:
        raise ProximityError(closest, required)


def _surface_sums(
    mesh: SurfaceMesh,
    lam: complex,
    points: FloatArray,
    combine: Callable[[ComplexArray, ComplexArray], ComplexArray],
    threads: int | None,
) -> ComplexArray:
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    _check_proximity(mesh, pts)
    a = mesh.areas[None, :]

    def work(rows: slice) -> ComplexArray:
        d = pts[rows, None, :] - mesh.centroids[None, :, :]
        return combine(theta(d, lam) * a, grad_theta(d, lam) * a[..., None])

    return _map_rows(work, pts.shape[0], threads)


def _as_sample(where: Grid | FloatArray, values: ComplexArray, kind: FieldKind) -> FieldSample:
    return FieldSample.on(where, values, kind)


def _points(where: Grid | FloatArray) -> FloatArray:
    return where.points if isinstance(where, Grid) else np.atleast_2d(where)


def surface_potential_scalar(
    psi0: ComplexArray,
    mesh: SurfaceMesh,
    lam: complex,
    where: Grid | FloatArray,
    *,
    threads: int | None = None,
) -> FieldSample:
    """Single layer ``int theta(x - y) psi0(y) ds`` off the surface."""
    dens = np.asarray(psi0, dtype=np.complex128)
    out = _surface_sums(
        mesh, lam, _points(where), lambda th, _gr: (th @ dens)[:, None], threads
    )
    return _as_sample(where, out[:, 0], FieldKind.SCALAR)


def surface_potential_vector(
    psi: ComplexArray,
    mesh: SurfaceMesh,
    lam: complex,
    where: Grid | FloatArray,
    *,
    threads: int | None = None,
) -> FieldSample:
    """Componentwise single layer of a vector density."""
    dens = np.asarray(psi, dtype=np.complex128)
    out = _surface_sums(mesh, lam, _points(where), lambda th, _gr: th @ dens, threads)
    return _as_sample(where, out, FieldKind.VECTOR)


def surface_gradient(
    psi0: ComplexArray,
    mesh: SurfaceMesh,
    lam: complex,
    where: Grid | FloatArray,
    *,
    threads: int | None = None,
) -> FieldSample:
    """Gradient of the scalar single layer, from ``grad theta``."""
    dens = np.asarray(psi0, dtype=np.complex128)
    out = _surface_sums(
        mesh, lam, _points(where), lambda _th, gr: np.einsum("ijk,j->ik", gr, dens), threads
    )
    return _as_sample(where, out, FieldKind.VECTOR)


def forcefree_from_boundary(
    psi0: ComplexArray,
    psi: ComplexArray,
    mesh: SurfaceMesh,
    lam: complex,
    where: Grid | FloatArray,
    *,
    threads: int | None = None,
) -> FieldSample:
    """Force-free field with normal trace ``psi0`` and ``psi = u x n`` on the boundary.

    ``u = -grad S[psi0] + (curl - lam) S[n x u]`` with ``n x u = -psi``.
    """
    d0 = np.asarray(psi0, dtype=np.complex128)
    dv = -np.asarray(psi, dtype=np.complex128)

    def combine(th: ComplexArray, gr: ComplexArray) -> ComplexArray:
        grad = np.einsum("ijk,j->ik", gr, d0)
        curl = np.cross(gr, dv[None, :, :]).sum(axis=1)
        return -grad + curl - lam * (th @ dv)

    out = _surface_sums(mesh, lam, _points(where), combine, threads)
    return _as_sample(where, out, FieldKind.VECTOR)


def compatibility_defect(
    mesh: SurfaceMesh, g_normal: ComplexArray, phi0: ComplexArray, lam: complex
) -> float:
    """``|int (g.n - lam phi0)| / (int |g.n| + |lam| int |phi0|)``."""
    a = mesh.areas
    defect = abs(np.sum(a * (g_normal - lam * phi0)))
    scale = float(np.sum(a * np.abs(g_normal)) + abs(lam) * np.sum(a * np.abs(phi0)))
    return float(defect / scale) if scale > 0 else 0.0


def _solve_system(
    mesh: SurfaceMesh, lam: complex, rhs: ComplexArray, dense_limit: int, threads: int | None
) -> tuple[ComplexArray, dict[str, Any]]:
    size = rhs.shape[0]
    if size <= dense_limit:
        matrix = assemble_bie(mesh, lam, threads=threads)
        lu, piv = linalg.lu_factor(matrix)
        (gecon,) = linalg.get_lapack_funcs(("gecon",), (lu,))
        anorm = float(np.abs(matrix).sum(axis=0).max())
        rcond, _ = gecon(lu, anorm, norm="1")
        condition = 1.0 / rcond if rcond > 0 else math.inf
        logger.info("BIE dense solve: %d unknowns, condition estimate %.3e", size, condition)
        if rcond < _RCOND_FLOOR:
            raise IllConditionedError(condition)
        if condition > 1e8:
            logger.warning("BIE condition estimate %.3e; lambda may be near resonance", condition)
        x = linalg.lu_solve((lu, piv), rhs)
        residual = float(np.linalg.norm(matrix @ x - rhs) / max(np.linalg.norm(rhs), 1e-300))
        return x, {"solver": "dense-lu", "condition": condition, "system_residual": residual}

    operator = LinearOperator(
        (size, size),
        matvec=lambda v: apply_bie(mesh, lam, v, threads=threads),
        dtype=np.complex128,
    )
    iterations = 0

    def count(_: Any) -> None:
        nonlocal iterations
        iterations += 1

    logger.info("BIE GMRES solve: %d unknowns", size)
    x, info = gmres(
        operator,
        rhs,
        rtol=1e-8,
        restart=200,
        maxiter=50,
        callback=count,
        callback_type="pr_norm",
    )
    if info < 0:
        raise IllConditionedError(math.inf)
    if info > 0:
        logger.warning("GMRES stopped after %d iterations without converging", iterations)
    residual = float(
        np.linalg.norm(apply_bie(mesh, lam, x, threads=threads) - rhs)
        / max(np.linalg.norm(rhs), 1e-300)
    )
    return x, {
        "solver": "gmres",
        "condition": None,
        "iterations": iterations,
        "system_residual": residual,
    }


def solve_neumann(
    domain: VoxelDomain,
    g: Field | None,
    phi0: ComplexArray,
    lam: complex,
    mesh: SurfaceMesh,
    grid: Grid,
    *,
    compatibility_tol: float = 0.05,
    forcefree_tol: float = 0.02,
    dense_limit: int = 4000,
    threads: int | None = None,
) -> NeumannSolution:
    """Solve ``curl w + lam w = g`` in the domain with ``w . n = phi0`` on the mesh.

    Args:
        domain: Voxel model of the region the mesh bounds.
        g: Right-hand side (``None`` for the homogeneous problem).
        phi0: Normal trace datum at the mesh centroids.
        lam: Nonzero wave number, assumed regular for the Neumann problem.
        mesh: Boundary mesh.
        grid: Evaluation grid, at least two mean triangle diameters inside.
        compatibility_tol: Tolerance of the compatibility check.
        forcefree_tol: Tolerance reported for the force-free check of ``u``.
        dense_limit: Largest system solved by LU; larger ones use GMRES.
        threads: Worker threads.

    Returns:
        ``w``, its force-free part ``u``, the boundary data and diagnostics.

    Raises:
        CompatibilityError: ``int g.n != lam int phi0``.
        IllConditionedError: the discrete system is singular.
        ProximityError: ``grid`` comes too close to the mesh.
    """
    if lam == 0:
        raise ZeroWavenumberError("solve_neumann")
    started = time.perf_counter()
    phi0 = np.asarray(phi0, dtype=np.complex128)
    if phi0.shape != (len(mesh),):
        raise ValueError(f"phi0 must have one value per triangle ({len(mesh)}), got {phi0.shape}")
    _check_proximity(mesh, grid.points)
    c, n = mesh.centroids, mesh.normals

    zero = np.zeros(len(mesh), dtype=np.complex128)
    g_normal = zero if g is None else np.sum(g.vector_values(c) * n, axis=1)
    defect = compatibility_defect(mesh, g_normal, phi0, lam)
    if defect > compatibility_tol:
        raise CompatibilityError(defect, compatibility_tol)
    r_normal = zero if g is None else r_lambda_normal_trace(domain, g, lam, c, n, threads=threads)
    psi0 = phi0 - r_normal

    rhs = bie_rhs(mesh, lam, psi0, threads=threads)
    coeffs, solve_info = _solve_system(mesh, lam, rhs, dense_limit, threads)
    psi = _tangential(mesh, coeffs)
    psi -= np.sum(psi * n, axis=1)[:, None] * n

    trace = normal_trace(mesh, lam, psi0, psi, threads=threads)
    bc_scale = float(np.linalg.norm(psi0))
    bc_residual = float(np.linalg.norm(trace - psi0) / bc_scale) if bc_scale > 0 else 0.0

    u = forcefree_from_boundary(psi0, psi, mesh, lam, grid, threads=threads)
    if g is None:
        w = u
    else:
        particular = r_lambda(domain, g, lam, grid, threads=threads)
        w = particular + u
    report = verify_forcefree(u, lam, forcefree_tol)
    a = mesh.areas
    flux_scale = float(np.sum(a * np.abs(psi0)))
    diagnostics: dict[str, Any] = {
        "triangles": len(mesh),
        "unknowns": int(coeffs.shape[0]),
        "compatibility_defect": defect,
        "psi0_flux": float(abs(np.sum(a * psi0)) / flux_scale) if flux_scale > 0 else 0.0,
        "bie_residual": solve_info["system_residual"],
        "boundary_condition_residual": bc_residual,
        "forcefree_curl_residual": report.curl_residual,
        "forcefree_div_residual": report.div_residual,
        "seconds": time.perf_counter() - started,
        **{k: v for k, v in solve_info.items() if k != "system_residual"},
    }
    logger.info(
        "Neumann solve: %d triangles, boundary residual %.3e, %.1fs",
        len(mesh),
        bc_residual,
        diagnostics["seconds"],
    )
    return NeumannSolution(w, u, BoundaryData(phi0, psi0, psi), diagnostics)


def bie_residual(
    mesh: SurfaceMesh,
    lam: complex,
    psi0: ComplexArray,
    psi: ComplexArray,
    *,
    threads: int | None = None,
) -> float:
    """Relative residual of the integral equation for a given tangential ``psi``."""
    t1, t2 = mesh.tangents
    p = np.asarray(psi, dtype=np.complex128)
    coeffs = np.concatenate([np.sum(p * t1, axis=1), np.sum(p * t2, axis=1)])
    lhs = apply_bie(mesh, lam, coeffs, threads=threads)
    rhs = bie_rhs(mesh, lam, psi0, threads=threads)
    scale = float(np.linalg.norm(rhs)) or float(np.linalg.norm(lhs))
    return float(np.linalg.norm(lhs - rhs) / scale) if scale > 0 else 0.0
