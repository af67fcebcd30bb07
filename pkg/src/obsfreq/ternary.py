"""Ternary outcome distributions and observability-conditioned frequencies.

Each proposition resolves to T (true and observable), F (false and
observable) or U (unobservable). Atoms are base-3 strings with proposition 0
as the most significant digit and digit values T=0, F=1, U=2, which for two
propositions gives the basis order TT, TF, TU, FT, FF, FU, UT, UF, UU.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import Sequence

import numpy as np

from .classical import (
    JointDistribution,
    Literals,
    PropRef,
    _distinct,
    normalize_literals,
    prop_index,
    validate_weights,
)
from .errors import NeverObservable, TooManyPropositions, WrongLength
from .report import BOUND_TOL, InequalityReport

MAX_TERNARY_PROPOSITIONS = 10


class Outcome(IntEnum):
    T = 0
    F = 1
    U = 2


@lru_cache(maxsize=None)
def outcome_table(n: int) -> np.ndarray:
    """(3**n, n) array of outcome digits; row k is atom k."""
    k = np.arange(3**n)[:, None]
    rows = (k // 3 ** np.arange(n - 1, -1, -1)) % 3
    rows = rows.astype(np.int8)
    rows.setflags(write=False)
    return rows


def atom_label(n: int, k: int) -> str:
    return "".join(Outcome(v).name for v in outcome_table(n)[k])


def atom_index(label: str) -> int:
    k = 0
    for ch in label:
        k = 3 * k + Outcome[ch].value
    return k


@dataclass(frozen=True, eq=False)
class TernaryDistribution:
    n: int
    weights: np.ndarray

    def __len__(self) -> int:
        return self.weights.size

    def labels(self) -> list[str]:
        return [atom_label(self.n, k) for k in range(len(self))]

    def support(self) -> dict[str, float]:
        return {atom_label(self.n, k): float(self.weights[k]) for k in np.flatnonzero(self.weights)}


def make_ternary(n: int, weights: Sequence[float]) -> TernaryDistribution:
    if not 0 <= n <= MAX_TERNARY_PROPOSITIONS:
        raise TooManyPropositions(f"n must be in [0, {MAX_TERNARY_PROPOSITIONS}], got {n}", module="observability")
    return TernaryDistribution(n, validate_weights(weights, 3**n, module="observability"))


def from_atoms(atoms: dict[str, float]) -> TernaryDistribution:
    """Build a distribution from a sparse ``{"TUT": 1.0}`` style map."""
    lengths = {len(label) for label in atoms}
    if len(lengths) != 1:
        raise WrongLength("atom labels must all have the same length", module="observability")
    n = lengths.pop()
    w = np.zeros(3**n)
    for label, weight in atoms.items():
        w[atom_index(label)] += weight
    return make_ternary(n, w)


def ternary_point_mass(label: str) -> TernaryDistribution:
    return from_atoms({label: 1.0})


def uniform_ternary(n: int) -> TernaryDistribution:
    return make_ternary(n, np.full(3**n, 3.0**-n))


def random_ternary(n: int, rng: np.random.Generator) -> TernaryDistribution:
    w = rng.exponential(size=3**n)
    return make_ternary(n, w / w.sum())


@lru_cache(maxsize=None)
def _binary_to_ternary(n: int) -> np.ndarray:
    # A binary atom's digits (T=0, F=1) are already valid ternary digits.
    k = np.arange(2**n)[:, None]
    digits = (k >> np.arange(n - 1, -1, -1)) & 1
    return (digits * 3 ** np.arange(n - 1, -1, -1)).sum(axis=1)


def lift_classical(d: JointDistribution) -> TernaryDistribution:
    w = np.zeros(3**d.n)
    w[_binary_to_ternary(d.n)] = d.weights
    return make_ternary(d.n, w)


def star_mask(n: int, lits: list[tuple[int, bool]]) -> np.ndarray:
    return _star_mask(n, tuple(sorted(lits)))


@lru_cache(maxsize=4096)
def _star_mask(n: int, lits: tuple[tuple[int, bool], ...]) -> np.ndarray:
    table = outcome_table(n)
    mask = np.ones(3**n, dtype=bool)
    for i, value in lits:
        mask &= table[:, i] == (Outcome.T if value else Outcome.F)
    mask.setflags(write=False)
    return mask


def star_joint(d: TernaryDistribution, literals: Literals) -> float:
    """Weight of atoms where every listed proposition shows the listed value.

    ``True`` requires outcome T and ``False`` requires outcome F; unlisted
    propositions are left free, U included.
    """
    lits = normalize_literals(literals, d.n, module="observability")
    return float(d.weights[star_mask(d.n, lits)].sum())


def observable_mass(d: TernaryDistribution, p: PropRef) -> float:
    i = prop_index(p, d.n, module="observability")
    return float(d.weights[outcome_table(d.n)[:, i] != Outcome.U].sum())


def measurable_frequency(d: TernaryDistribution, p: PropRef, value: bool = True) -> float:
    """[p] = P(p=T) / (P(p=T) + P(p=F)); with ``value=False`` this is [~p]."""
    i = prop_index(p, d.n, module="observability")
    col = outcome_table(d.n)[:, i]
    t = float(d.weights[col == Outcome.T].sum())
    f = float(d.weights[col == Outcome.F].sum())
    if t + f == 0.0:
        raise NeverObservable(f"proposition {i} is never observable")
    return (t if value else f) / (t + f)


def wd_star(d: TernaryDistribution, a: PropRef, b: PropRef, c: PropRef) -> InequalityReport:
    """Starred Wigner-d'Espagnat: P(A*&B*) + P(~B*&C*) >= P(A*&C*).

    Not a theorem once U is allowed; the point mass on (T, U, T) breaks it.
    """
    ia, ib, ic = _distinct(d.n, (a, b, c), "observability")
    lhs = star_joint(d, {ia: True, ib: True}) + star_joint(d, {ib: False, ic: True})
    rhs = star_joint(d, {ia: True, ic: True})
    margin = lhs - rhs
    return InequalityReport("wd_star", lhs, rhs, margin, margin < -BOUND_TOL, propositions=(ia, ib, ic))
