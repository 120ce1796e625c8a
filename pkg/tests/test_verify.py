"""Tests for the verify module."""

import math
from collections.abc import Callable

import pytest

from curllambda.config import Tolerances
from curllambda.verify import (
    SUITE_NAMES,
    SUITES,
    CheckResult,
    VerifyContext,
    format_table,
    run_suites,
    suite_fielddiff,
    suite_forcefree,
    suite_quaternion,
    summary,
)


Suite = Callable[[VerifyContext], list[CheckResult]]


@pytest.fixture
def ctx() -> VerifyContext:
    """Coarse context with default tolerances."""
    return VerifyContext(16, Tolerances())


class TestSuites:
    """Tests for the cheap property suites."""

    @pytest.mark.parametrize("suite", [suite_quaternion, suite_fielddiff, suite_forcefree])
    def test_suite_passes(self, suite: Suite, ctx: VerifyContext) -> None:
        """Exact identities hold at the default resolution."""
        results = suite(ctx)
        assert results
        failed = [f"{r.name}: {r.value:.3e}" for r in results if not r.passed]
        assert not failed

    def test_negative_control_recorded(self, ctx: VerifyContext) -> None:
        """The refinement check passes by exceeding its threshold."""
        (ratio,) = [r for r in suite_fielddiff(ctx) if r.above]
        assert ratio.value > ratio.tol
        assert ratio.passed

    def test_eval_resolution(self) -> None:
        """The evaluation grid never drops below 16 per axis."""
        assert VerifyContext(8, Tolerances()).n_eval == 16
        assert VerifyContext(48, Tolerances()).n_eval == 24

    def test_registry(self) -> None:
        """Every registered suite is selectable, plus 'all'."""
        assert SUITE_NAMES[-1] == "all"
        assert set(SUITE_NAMES[:-1]) == set(SUITES)


class TestRunSuites:
    """Tests for run_suites."""

    def test_single_suite(self) -> None:
        """Only the named suite runs."""
        results = run_suites("quaternion", 8)
        assert {r.suite for r in results} == {"quaternion"}

    def test_unknown_suite(self) -> None:
        """Unknown suites raise KeyError."""
        with pytest.raises(KeyError, match="unknown suite"):
            run_suites("everything")


class TestAcceptanceRuns:
    """Full-size suite runs."""

    @pytest.mark.slow
    def test_maxwell_at_n32(self) -> None:
        """Achiral, chiral and polarization residuals all pass with 32 cells per axis."""
        results = run_suites("maxwell", 32)
        failed = [f"{r.name}: {r.value:.3e}" for r in results if not r.passed]
        assert not failed

    @pytest.mark.slow
    def test_neumann_at_level4(self) -> None:
        """Mesh level 4 with n=24 passes every neumann check."""
        results = run_suites("neumann", 24, mesh_level=4)
        assert any("level 4" in r.name for r in results)
        failed = [f"{r.name}: {r.value:.3e}" for r in results if not r.passed]
        assert not failed


class TestReporting:
    """Tests for format_table and summary."""

    RESULTS = [
        CheckResult("kernels", "decay", 1e-3, 1e-2, True),
        CheckResult("fielddiff", "order", 3.9, 3.5, True, above=True),
        CheckResult("maxwell", "ampere", math.nan, 0.07, False),
    ]

    def test_table(self) -> None:
        """One line per check with the comparison and status."""
        lines = format_table(self.RESULTS).splitlines()

        assert len(lines) == 3
        assert lines[0].startswith("kernels/decay")
        assert lines[0].endswith("PASS")
        assert " > " in lines[1]
        assert lines[2].endswith("FAIL")

    def test_empty_table(self) -> None:
        """No results give an empty table."""
        assert format_table([]) == ""

    def test_summary(self) -> None:
        """Counts and records match the results."""
        data = summary(self.RESULTS)

        assert data["passed"] == 2
        assert data["failed"] == 1
        checks = data["checks"]
        assert isinstance(checks, list)
        assert checks[1]["comparison"] == ">"
        assert checks[0]["suite"] == "kernels"
