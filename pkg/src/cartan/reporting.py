"""Report-style validation results shared by the structural checkers."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Violation:
    """One violated invariant, with human-readable witnesses."""

    kind: str
    message: str
    witnesses: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a structural validation; empty violations means valid."""

    subject: str
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> tuple[str, ...]:
        return tuple(v.kind for v in self.violations)

    def render(self) -> str:
        if self.ok:
            return f"{self.subject}: valid"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        for v in self.violations:
            line = f"  [{v.kind}] {v.message}"
            if v.witnesses:
                line += " witnesses=" + "; ".join(v.witnesses)
            lines.append(line)
        return "\n".join(lines)
