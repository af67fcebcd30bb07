from __future__ import annotations

from dataclasses import dataclass
from typing import Any

# Bound tolerance shared by every inequality evaluation.
BOUND_TOL = 1e-12


@dataclass(frozen=True)
class InequalityReport:
    """Evaluation of one named inequality.

    For the Wigner-d'Espagnat forms ``lhs >= bound`` is the classical claim and
    ``margin = lhs - bound``. For CHSH, ``lhs`` holds the correlation sum,
    ``bound`` is 2 and ``margin = bound - |lhs|``. In both cases a negative
    margin beyond ``BOUND_TOL`` means the bound fails.
    """

    name: str
    lhs: float
    bound: float
    margin: float
    violated: bool
    witness: Any = None
    propositions: tuple[int, ...] = ()

    @property
    def rhs(self) -> float:
        return self.bound

    @property
    def value(self) -> float:
        return self.lhs

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "bound": self.bound,
            "margin": self.margin,
            "violated": self.violated,
            "propositions": list(self.propositions),
        }
