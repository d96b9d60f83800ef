"""Certificate reports: named checks with a grade and a status."""

from __future__ import annotations

from dataclasses import dataclass, field

PROVED = "proved"
EVIDENCE = "evidence"
FAILED = "failed"

# what a check is able to establish
PROOF = "proof"
SAMPLING = "evidence"
REFUTATION = "failure"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    grade: str = PROOF
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "grade": self.grade, "data": self.data}


@dataclass
class CertificateReport:
    """Aggregated checks.

    Verdict: ``failed`` if any check failed; ``proved`` if at least one
    proof-grade check exists and all of them are proved; ``evidence`` otherwise.
    """

    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, status: str, grade: str = PROOF, **data) -> Check:
        c = Check(name, status, grade, data)
        self.checks.append(c)
        return c

    def extend(self, other: CertificateReport, prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.grade, c.data))

    @property
    def verdict(self) -> str:
        if any(c.status == FAILED for c in self.checks):
            return FAILED
        proof = [c for c in self.checks if c.grade == PROOF]
        if proof and all(c.status == PROVED for c in proof):
            return PROVED
        return EVIDENCE

    @property
    def passed(self) -> bool:
        return self.verdict != FAILED

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if c.status == FAILED), None)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"title": self.title, "verdict": self.verdict,
                "checks": [c.to_json() for c in self.checks]}

    def render(self) -> str:
        lines = [f"{self.title}: {self.verdict}"]
        for c in self.checks:
            extra = ", ".join(f"{k}={v}" for k, v in c.data.items())
            lines.append(f"  [{c.status}] {c.name}" + (f" ({extra})" if extra else ""))
        return "\n".join(lines)
