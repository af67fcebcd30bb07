"""CHSH in starred form, the deterministic-strategy oracle, and certification."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import permutations, product
from typing import Sequence, Union

import numpy as np

from .errors import ArityMismatch, UnknownProposition, ZeroContext
from .report import BOUND_TOL, InequalityReport
from .ternary import Outcome, TernaryDistribution, outcome_table, wd_star

CHSH_LABELS = ("A1", "A2", "B1", "B2")
CHSH_BOUND = 2.0


@dataclass(frozen=True, eq=False)
class ChshScenario:
    """A 4-proposition ternary distribution read as (A1, A2, B1, B2).

    ``order`` maps each label to a proposition index of ``dist``; it lets the
    same distribution be examined under every relabelling.
    """

    dist: TernaryDistribution
    order: tuple[int, int, int, int] = (0, 1, 2, 3)

    def __post_init__(self):
        if self.dist.n != 4:
            raise ArityMismatch(f"CHSH scenario needs 4 propositions, got {self.dist.n}")
        if sorted(self.order) != [0, 1, 2, 3]:
            raise ArityMismatch(f"order {self.order} is not a permutation of 0..3")

    def index(self, setting: Union[str, int]) -> int:
        if isinstance(setting, str):
            if setting not in CHSH_LABELS:
                raise UnknownProposition(f"unknown setting {setting!r}", module="inequalities")
            return self.order[CHSH_LABELS.index(setting)]
        if not 0 <= setting < 4:
            raise UnknownProposition(f"unknown setting {setting!r}", module="inequalities")
        return self.order[setting]


@lru_cache(maxsize=None)
def _correlation_parts(n: int, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-atom (signed product, pair-observable) vectors for propositions i, j."""
    table = outcome_table(n)
    a, b = table[:, i], table[:, j]
    observable = (a != Outcome.U) & (b != Outcome.U)
    # T -> +1, F -> -1
    sign = np.where(a == Outcome.T, 1.0, -1.0) * np.where(b == Outcome.T, 1.0, -1.0)
    signed = np.where(observable, sign, 0.0)
    observable = observable.astype(float)
    signed.setflags(write=False)
    observable.setflags(write=False)
    return signed, observable


def star_correlation(s: ChshScenario, a: Union[str, int], b: Union[str, int]) -> float:
    """E*(a, b), post-selected on both a and b being observable."""
    i, j = s.index(a), s.index(b)
    signed, observable = _correlation_parts(4, i, j)
    den = float(s.dist.weights @ observable)
    if den == 0.0:
        raise ZeroContext(f"pair ({a}, {b}) is never jointly observable", module="inequalities", pair=(a, b))
    return float(s.dist.weights @ signed) / den


CHSH_TERMS = (("A1", "B1", 1.0), ("A1", "B2", 1.0), ("A2", "B1", 1.0), ("A2", "B2", -1.0))


def chsh_star(s: ChshScenario) -> InequalityReport:
    value = sum(sign * star_correlation(s, a, b) for a, b, sign in CHSH_TERMS)
    return InequalityReport(
        "chsh_star",
        value,
        CHSH_BOUND,
        CHSH_BOUND - abs(value),
        abs(value) > CHSH_BOUND + BOUND_TOL,
        propositions=tuple(s.order),
    )


def chsh_of_strategy(strategy: Sequence[int]) -> int:
    a1, a2, b1, b2 = strategy
    return a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2


@dataclass(frozen=True)
class BoundReport:
    maximum: int
    maximizer: tuple[int, int, int, int]
    strategies: int


def deterministic_chsh_bound() -> BoundReport:
    """Maximize CHSH over the 16 deterministic +-1 strategies."""
    best_value, best = None, None
    count = 0
    for strategy in product((1, -1), repeat=4):
        count += 1
        v = chsh_of_strategy(strategy)
        if best_value is None or v > best_value:
            best_value, best = v, strategy
    return BoundReport(best_value, best, count)


class Verdict(str, Enum):
    CLASSICAL = "CLASSICAL"
    CONTEXTUAL = "CONTEXTUAL"


@dataclass(frozen=True, eq=False)
class Certificate:
    verdict: Verdict
    report: InequalityReport | None
    checked: int
    undefined: int

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "report": None if self.report is None else self.report.to_dict(),
            "checked": self.checked,
            "undefined": self.undefined,
        }


ARITY = {"wd_star": 3, "chsh_star": 4}


def _fits(name: str, n: int) -> bool:
    # wd_star leaves extra propositions free; a CHSH scenario is exactly 4.
    return n >= 3 if name == "wd_star" else n == 4


def certify(d: TernaryDistribution, inequalities: Sequence[str] | None = None) -> Certificate:
    """Scan every ordered assignment of propositions to each inequality.

    Returns CONTEXTUAL with the worst violating report, or CLASSICAL when no
    assignment violates. Assignments where CHSH is undefined (some pair never
    jointly observable) are counted but cannot violate.
    """
    if inequalities is None:
        inequalities = [name for name in ARITY if _fits(name, d.n)]
    checked = undefined = 0
    worst: InequalityReport | None = None
    for name in inequalities:
        if name not in ARITY:
            raise ArityMismatch(f"unknown inequality {name!r}")
        k = ARITY[name]
        if not _fits(name, d.n):
            raise ArityMismatch(f"{name} does not fit a {d.n}-proposition distribution")
        for perm in permutations(range(d.n), k):
            checked += 1
            if name == "wd_star":
                report = wd_star(d, *perm)
            else:
                try:
                    report = chsh_star(ChshScenario(d, perm))
                except ZeroContext:
                    undefined += 1
                    continue
            if report.violated and (worst is None or report.margin < worst.margin):
                worst = report
    verdict = Verdict.CLASSICAL if worst is None else Verdict.CONTEXTUAL
    return Certificate(verdict, worst, checked, undefined)
