"""Time-harmonic Maxwell solutions in achiral and chiral media."""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .domain import Field, FieldKind, FieldSample, Grid, VoxelDomain, sample
from .errors import ForceFreeError, MediumError
from .fielddiff import curl_fd, dirac_fd, div_fd, grad_fd
from .forcefree import verify_forcefree_field
from .potentials import curl_newton, newton_L, t0

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MediumParams:
    """Angular frequency, permittivity, permeability and chirality of a medium.

    The wave number ``lam = omega sqrt(eps mu)`` takes the branch with
    ``Im lam >= 0``.
    """

    omega: float
    eps: complex
    mu: complex
    beta: complex = 0.0

    def __post_init__(self) -> None:
        if self.omega == 0 or self.eps == 0 or self.mu == 0:
            raise MediumError(
                f"omega, eps and mu must be nonzero, got {self.omega}, {self.eps}, {self.mu}"
            )
        for s in (1, -1):
            if abs(1 + s * self.lam * self.beta) < 1e-14:
                raise MediumError(
                    f"1 {'+' if s > 0 else '-'} lambda*beta = 0 for lambda={self.lam}, "
                    f"beta={self.beta}; the circular wave numbers are undefined"
                )

    @property
    def lam(self) -> complex:
        root = cmath.sqrt(complex(self.eps) * complex(self.mu))
        lam = self.omega * root
        return -lam if lam.imag < 0 else lam

    @property
    def alpha1(self) -> complex:
        return self.lam / (1 + self.lam * self.beta)

    @property
    def alpha2(self) -> complex:
        return self.lam / (1 - self.lam * self.beta)

    @property
    def sqrt_eps(self) -> complex:
        return cmath.sqrt(complex(self.eps))

    @property
    def sqrt_mu(self) -> complex:
        """``lam / (omega sqrt(eps))``, so that ``omega sqrt(eps) sqrt(mu) = lam``."""
        return self.lam / (self.omega * self.sqrt_eps)

    @property
    def eta(self) -> complex:
        """Wave impedance ``lam / (omega eps)``."""
        return self.lam / (self.omega * self.eps)

    @property
    def chiral(self) -> bool:
        return self.beta != 0


@dataclass(frozen=True, eq=False)
class SourceData:
    """Current density ``j`` on a domain; the charge density follows from it."""

    domain: VoxelDomain
    j: Field

    @cached_property
    def j_sample(self) -> FieldSample:
        return sample(self.j, self.domain.grid).vector_part()

    def charge_density(self, at: Grid, omega: float) -> FieldSample:
        """``rho = div j / (i omega)`` by central differences on ``at``."""
        return charge_density(sample(self.j, at).vector_part(), omega)


def charge_density(j: FieldSample, omega: float) -> FieldSample:
    return div_fd(j) / (1j * omega)


@dataclass(frozen=True, eq=False)
class MaxwellSolution:
    """Electric and magnetic fields on a common evaluation grid."""

    E: FieldSample
    H: FieldSample
    medium: MediumParams
    diagnostics: dict[str, float] = field(default_factory=dict)


def _check_forcefree(
    u: Field | None, kappa: complex, label: str, grid: Grid, tol: float
) -> FieldSample | None:
    if u is None:
        return None
    report = verify_forcefree_field(u, kappa, grid, tol)
    if not report.passed:
        raise ForceFreeError(label, report.curl_residual, report.div_residual, tol)
    return sample(u, grid).vector_part()


def _curl_potentials(
    domain: VoxelDomain, src: SourceData, kappa: complex, grid: Grid, threads: int | None
) -> tuple[FieldSample, FieldSample]:
    """``curl L`` and ``j + curl curl L`` for ``L = L_kappa[j]``.

    ``(Laplacian + kappa^2) L = j`` turns the second into ``grad div L + kappa^2 L``.
    ``curl L``, ``div L`` and ``L`` come from quadrature and only ``grad div L``
    takes a central difference, which the curl stencil annihilates exactly.
    """
    j = src.j_sample
    curl_l = curl_newton(domain, j, kappa, grid, threads=threads)
    grad_div = grad_fd(t0(domain, j, kappa, 1, grid, threads=threads))
    l_here = newton_L(domain, j, kappa, grad_div.grid or grid, threads=threads)
    return curl_l, grad_div + l_here.vector_part() * kappa**2


def solve_achiral(
    domain: VoxelDomain,
    src: SourceData,
    medium: MediumParams,
    grid: Grid,
    u: Field | None = None,
    v: Field | None = None,
    *,
    tol: float = 0.02,
    threads: int | None = None,
) -> MaxwellSolution:
    """General solution of the Maxwell system with current ``j``.

    ``E = (j + curl curl L[j]) / (i omega eps) + (u - v) / (2 i omega eps)`` and
    ``H = -curl L[j] + (u + v) / (2 lam)``, where ``u`` is force-free for
    ``+lam`` and ``v`` for ``-lam``.

    Raises:
        MediumError: ``medium`` is chiral.
        ForceFreeError: ``u`` or ``v`` fails verification.
    """
    if medium.chiral:
        raise MediumError("solve_achiral needs beta = 0; use solve_chiral")
    lam = medium.lam
    iwe = 1j * medium.omega * medium.eps
    u_s = _check_forcefree(u, lam, "u", grid, tol)
    v_s = _check_forcefree(v, -lam, "v", grid, tol)
    curl_l, j_curlcurl_l = _curl_potentials(domain, src, lam, grid, threads)
    E = j_curlcurl_l / iwe
    H = -curl_l
    if u_s is not None:
        E = E + u_s / (2 * iwe)
        H = H + u_s / (2 * lam)
    if v_s is not None:
        E = E - v_s / (2 * iwe)
        H = H + v_s / (2 * lam)
    logger.info("achiral solve: lambda=%s, %d evaluation points", lam, len(E))
    return MaxwellSolution(E, H.restrict(E), medium)


def solve_chiral(
    domain: VoxelDomain,
    src: SourceData,
    medium: MediumParams,
    grid: Grid,
    u_alpha1: Field | None = None,
    u_minus_alpha2: Field | None = None,
    *,
    tol: float = 0.02,
    threads: int | None = None,
) -> MaxwellSolution:
    """General solution in a chiral medium.

    With ``c = -i/(omega eps)`` and ``L_k = L_{alpha_k}[j]``::

        q1 = c (j + curl curl L1 - alpha1 curl L1 + u_alpha1)
        q2 = c (j + curl curl L2 + alpha2 curl L2 - u_minus_alpha2)
        E = (q1 + q2) / 2,   H = (q2 - q1) / (2 i eta)

    ``q1 = E - i eta H`` and ``q2 = E + i eta H`` are the two circular
    polarizations; with ``beta = 0`` this is ``solve_achiral`` term by term.
    """
    a1, a2 = medium.alpha1, medium.alpha2
    c = -1j / (medium.omega * medium.eps)
    u1 = _check_forcefree(u_alpha1, a1, "u_alpha1", grid, tol)
    u2 = _check_forcefree(u_minus_alpha2, -a2, "u_minus_alpha2", grid, tol)
    curl_l1, j_curlcurl_l1 = _curl_potentials(domain, src, a1, grid, threads)
    if a2 == a1:
        curl_l2, j_curlcurl_l2 = curl_l1, j_curlcurl_l1
    else:
        curl_l2, j_curlcurl_l2 = _curl_potentials(domain, src, a2, grid, threads)
    q1 = (j_curlcurl_l1 - curl_l1 * a1) * c
    q2 = (j_curlcurl_l2 + curl_l2 * a2) * c
    if u1 is not None:
        q1 = q1 + u1 * c
    if u2 is not None:
        q2 = q2 - u2 * c
    E = (q1 + q2) / 2
    H = (q2 - q1) / (2j * medium.eta)
    logger.info(
        "chiral solve: lambda=%s, alpha1=%s, alpha2=%s, %d evaluation points",
        medium.lam,
        a1,
        a2,
        len(E),
    )
    return MaxwellSolution(E, H, medium)


def diagonalize(
    E: FieldSample, H: FieldSample, medium: MediumParams
) -> tuple[FieldSample, FieldSample]:
    """``phi = -i omega eps E + lam H`` and ``psi = i omega eps E + lam H``."""
    iwe = 1j * medium.omega * medium.eps
    return -(E * iwe) + H * medium.lam, E * iwe + H * medium.lam


def undiagonalize(
    phi: FieldSample, psi: FieldSample, medium: MediumParams
) -> tuple[FieldSample, FieldSample]:
    """Inverse of ``diagonalize``."""
    iwe = 1j * medium.omega * medium.eps
    return (psi - phi) / (2 * iwe), (psi + phi) / (2 * medium.lam)


def to_normalized(
    E_bar: FieldSample, H_bar: FieldSample, medium: MediumParams
) -> tuple[FieldSample, FieldSample]:
    """Scale the physical chiral fields: ``E = -E_bar / sqrt(mu)``, ``H = H_bar / sqrt(eps)``."""
    return -E_bar / medium.sqrt_mu, H_bar / medium.sqrt_eps


def from_normalized(
    E: FieldSample, H: FieldSample, medium: MediumParams
) -> tuple[FieldSample, FieldSample]:
    """Inverse of ``to_normalized``."""
    return -(E * medium.sqrt_mu), H * medium.sqrt_eps


def _scaled(residual: FieldSample, *terms: FieldSample) -> float:
    """``||residual||`` over the sum of the term norms on the residual's points."""
    scale = sum(t.restrict(residual).norm() for t in terms)
    return residual.norm() / scale if scale > 0 else residual.norm()


def _j_on(j: Field | None, like: FieldSample) -> FieldSample:
    """``j`` sampled on the grid of ``like`` (zero when absent)."""
    if like.grid is None:
        raise ValueError("residuals need gridded samples")
    if j is None:
        return like.with_values(np.zeros((len(like), 3)), FieldKind.VECTOR)
    return sample(j, like.grid).vector_part()


def maxwell_residuals(
    E: FieldSample, H: FieldSample, j: Field | None, medium: MediumParams
) -> dict[str, float]:
    """Finite-difference residuals of the four Maxwell equations.

    Each residual is relative to the sum of the norms of its terms; the
    divergence equations use ``|lam| ||E||`` and ``|lam| ||H||`` for the
    derivative term.
    """
    iwe = 1j * medium.omega * medium.eps
    iwm = 1j * medium.omega * medium.mu
    lam = abs(medium.lam)
    curl_h = curl_fd(H)
    curl_e = curl_fd(E)
    j_h = _j_on(j, curl_h)
    ampere = curl_h + E.restrict(curl_h) * iwe - j_h
    faraday = curl_e - H.restrict(curl_e) * iwm
    div_h = div_fd(H)
    div_e = div_fd(E)
    rho_over_eps = charge_density(_j_on(j, H), medium.omega) / medium.eps
    gauss = div_e - rho_over_eps.restrict(div_e)
    return {
        "ampere": _scaled(ampere, curl_h, E * iwe, j_h),
        "faraday": _scaled(faraday, curl_e, H * iwm),
        "div_h": _scaled(div_h, H * lam),
        "div_e": _scaled(gauss, E * lam, rho_over_eps),
    }


def homogeneous_residuals(E: FieldSample, H: FieldSample, medium: MediumParams) -> dict[str, float]:
    """Residuals of the source-free system, e.g. for the difference of two solutions."""
    return maxwell_residuals(E, H, None, medium)


def quaternionic_residuals(
    E: FieldSample, H: FieldSample, j: Field, medium: MediumParams
) -> dict[str, float]:
    """``(D - lam) phi = div j + lam j`` and ``(D + lam) psi = -div j + lam j``."""
    lam = medium.lam
    phi, psi = diagonalize(E, H, medium)
    d_phi = dirac_fd(phi)
    d_psi = dirac_fd(psi)
    j_s = _j_on(j, d_phi)
    div_j = div_fd(_j_on(j, E)).restrict(d_phi)
    target_phi = div_j + j_s * lam
    target_psi = -div_j + j_s * lam
    res_phi = d_phi - phi.restrict(d_phi) * lam - target_phi
    res_psi = d_psi + psi.restrict(d_psi) * lam - target_psi
    return {
        "phi": _scaled(res_phi, d_phi, phi * lam, target_phi),
        "psi": _scaled(res_psi, d_psi, psi * lam, target_psi),
    }


def chiral_residuals(
    E: FieldSample, H: FieldSample, j: Field | None, medium: MediumParams
) -> dict[str, float]:
    """Residuals of the chiral curl equations.

    ``curl E = i omega mu (H + beta curl H)`` and
    ``curl H + i omega eps (E + beta curl E) = j``.
    """
    iwe = 1j * medium.omega * medium.eps
    iwm = 1j * medium.omega * medium.mu
    beta = medium.beta
    curl_e = curl_fd(E)
    curl_h = curl_fd(H)
    faraday = curl_e - (H.restrict(curl_e) + curl_h.restrict(curl_e) * beta) * iwm
    d_e = E.restrict(curl_e) + curl_e * beta
    j_h = _j_on(j, curl_e)
    ampere = curl_h.restrict(curl_e) + d_e * iwe - j_h
    return {
        "faraday": _scaled(faraday, curl_e, H * iwm, curl_h * (beta * iwm)),
        "ampere": _scaled(ampere, curl_h, E * iwe, curl_e * (beta * iwe), j_h),
    }


def beltrami_split_residuals(
    E: FieldSample, H: FieldSample, j: Field | None, medium: MediumParams
) -> dict[str, float]:
    """Residuals of the polarizations ``q1 = E - i eta H`` and ``q2 = E + i eta H``.

    ``(D + alpha1) q1 = (i eta/lam)(div j - alpha1 j)`` and
    ``(D - alpha2) q2 = (i eta/lam)(div j + alpha2 j)``.
    """
    a1, a2 = medium.alpha1, medium.alpha2
    k = 1j * medium.eta / medium.lam
    q1 = E - H * (1j * medium.eta)
    q2 = E + H * (1j * medium.eta)
    d1 = dirac_fd(q1)
    d2 = dirac_fd(q2)
    j_s = _j_on(j, d1)
    div_j = div_fd(_j_on(j, E)).restrict(d1)
    t1 = (div_j - j_s * a1) * k
    t2 = (div_j + j_s * a2) * k
    res1 = d1 + q1.restrict(d1) * a1 - t1
    res2 = d2 - q2.restrict(d2) * a2 - t2
    return {
        "alpha1": _scaled(res1, d1, q1 * a1, t1),
        "minus_alpha2": _scaled(res2, d2, q2 * a2, t2),
    }
