"""Pass/fail records shared by validation and the check suites."""

from dataclasses import asdict, dataclass
from typing import Iterable, List, Optional


@dataclass(frozen=True)
class CheckReport:
    check: str
    instance: str
    passed: bool
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    detail: str = ""

    def to_dict(self):
        return {key: value for key, value in asdict(self).items() if value not in (None, "")}

    def summary(self) -> str:
        status = "ok" if self.passed else "FAIL"
        line = f"{status:4} {self.check} [{self.instance}]"
        if self.detail:
            line += f" {self.detail}"
        if not self.passed and self.lhs is not None:
            line += f": {self.lhs} != {self.rhs}"
        return line


def passed(check: str, instance: str) -> CheckReport:
    return CheckReport(check, instance, True)


def failed(check: str, instance: str, detail: str = "", lhs=None, rhs=None) -> CheckReport:
    return CheckReport(check, instance, False, None if lhs is None else str(lhs), None if rhs is None else str(rhs), detail)


def failures(reports: Iterable[CheckReport]) -> List[CheckReport]:
    return [r for r in reports if not r.passed]
