from dataclasses import dataclass, field
from enum import Enum


class ViolationKind(str, Enum):
    """Which law a finite presentation breaks."""

    IDENTITY = "identity"
    COHERENCE = "coherence"
    ASSOCIATIVITY = "associativity"
    FUNCTORIALITY = "functoriality"
    NATURALITY = "naturality"
    SIMPLICIAL_IDENTITY = "simplicial_identity"
    SIMPLICIAL_MAP = "simplicial_map"
    METRIC = "metric"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    detail: str


@dataclass
class ValidationReport:
    """
    Outcome of checking a finite presentation against its axioms.

    Structural problems (dangling identifiers, non-total tables) are kept
    apart from axiom failures: a presentation with structural problems is
    not checked any further than its structure allows.
    """

    structural: list[str] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.structural and not self.violations

    def add(self, kind: ViolationKind, detail: str) -> None:
        self.violations.append(Violation(kind, detail))

    def kinds(self) -> list[ViolationKind]:
        return [v.kind for v in self.violations]
