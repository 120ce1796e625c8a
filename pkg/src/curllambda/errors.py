"""Exception hierarchy for curllambda."""

from __future__ import annotations


class CurlLambdaError(Exception):
    """Base class for all curllambda errors."""


class ConfigError(CurlLambdaError):
    """Error raised when a run configuration violates the schema."""

    def __init__(self, key: str, problem: str) -> None:
        self.key = key
        self.problem = problem
        super().__init__(f"Invalid configuration at '{key}': {problem}")


class PreconditionError(CurlLambdaError, ValueError):
    """A numerical precondition of an operation does not hold."""


class ZeroWavenumberError(PreconditionError):
    """Error raised when an operation divides by a zero wave number."""

    def __init__(self, operation: str) -> None:
        self.operation = operation
        super().__init__(
            f"{operation} requires lambda != 0; "
            f"the lambda = 0 div-curl system needs a different construction"
        )


class DomainError(PreconditionError):
    """Error raised for invalid domain parameters or an empty voxel domain."""


class EmptyGridError(PreconditionError):
    """Error raised when a grid has no usable (stencil-interior) points."""


class HelmholtzConditionError(PreconditionError):
    """Error raised when a field fails the conditions required for its conjugate."""

    def __init__(self, failures: dict[str, float], tol: float) -> None:
        self.failures = failures
        self.tol = tol
        details = ", ".join(f"{name} residual {value:.3e}" for name, value in failures.items())
        super().__init__(f"Precondition violated (tolerance {tol:.3e}): {details}")


class ForceFreeError(PreconditionError):
    """Error raised when a supposed force-free field fails verification."""

    def __init__(self, label: str, curl_residual: float, div_residual: float, tol: float) -> None:
        self.label = label
        self.curl_residual = curl_residual
        self.div_residual = div_residual
        self.tol = tol
        super().__init__(
            f"Field '{label}' is not force-free: "
            f"curl residual {curl_residual:.3e}, div residual {div_residual:.3e} "
            f"(tolerance {tol:.3e})"
        )


class CompatibilityError(PreconditionError):
    """Error raised when Neumann data violate the compatibility condition."""

    def __init__(self, defect: float, tol: float) -> None:
        self.defect = defect
        self.tol = tol
        super().__init__(
            f"Boundary data violate the compatibility condition "
            f"int(g.n - lambda*phi0) = 0: relative defect {defect:.3e} > {tol:.3e}"
        )


class ProximityError(PreconditionError):
    """Error raised when a surface potential is evaluated too close to the surface."""

    def __init__(self, distance: float, required: float) -> None:
        self.distance = distance
        self.required = required
        super().__init__(
            f"Evaluation point at distance {distance:.3e} from the surface; "
            f"at least {required:.3e} is required"
        )


class MediumError(PreconditionError):
    """Error raised for medium parameters that leave a wave number undefined."""


class IllConditionedError(PreconditionError):
    """Error raised when the boundary integral system is numerically singular."""

    def __init__(self, condition: float) -> None:
        self.condition = condition
        super().__init__(
            f"Boundary integral system is singular or ill-conditioned "
            f"(condition estimate {condition:.3e}); lambda may not be regular"
        )


class SingularityError(CurlLambdaError, ZeroDivisionError):
    """Error raised when a kernel is evaluated at its singular point."""

    def __init__(self, kernel: str) -> None:
        self.kernel = kernel
        super().__init__(f"{kernel} evaluated at x = 0; use the self-cell correction")
