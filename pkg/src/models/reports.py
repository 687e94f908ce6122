"""
Verification report models
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field


class CheckStatus(str, Enum):
    """Outcome of a single check."""
    PASSED = "passed"
    FAILED = "failed"


class CheckResult(BaseModel):
    name: str
    status: CheckStatus
    detail: str = ""
    first_mismatch: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASSED


class VerificationReport(BaseModel):
    scope: str
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def add(self, name: str, passed: bool, detail: str = "",
            first_mismatch: Optional[str] = None) -> CheckResult:
        check = CheckResult(
            name=name,
            status=CheckStatus.PASSED if passed else CheckStatus.FAILED,
            detail=detail,
            first_mismatch=first_mismatch,
        )
        self.checks.append(check)
        return check
