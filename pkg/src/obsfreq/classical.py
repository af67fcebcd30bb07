"""Kolmogorov probability over n binary propositions.

Atom layout: assignments are listed lexicographically with proposition 0 as
the most significant digit and *true before false*, so for two propositions
the weight order is (p&q, p&~q, ~p&q, ~p&~q), i.e. the basis TT, TF, FT, FF.
Equivalently, bit ``n-1-i`` of the flat index is set iff proposition ``i`` is
false.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from collections.abc import Iterable, Mapping, Sequence
from typing import Union

import numpy as np

from .errors import (
    DuplicateProposition,
    NegativeWeight,
    NotNormalized,
    TooManyPropositions,
    UnknownProposition,
    WrongLength,
    ZeroConditioningMass,
)
from .report import BOUND_TOL, InequalityReport

MAX_PROPOSITIONS = 16
INTAKE_TOL = 1e-9
IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class Proposition:
    name: str
    index: int

    def __post_init__(self):
        if not self.name:
            raise ValueError("proposition name must be non-empty")
        if self.index < 0:
            raise ValueError("proposition index must be >= 0")


def propositions(*names: str) -> tuple[Proposition, ...]:
    """Build one context of propositions, indexed in order of ``names``."""
    if len(set(names)) != len(names):
        raise DuplicateProposition(f"duplicate names in {names!r}")
    return tuple(Proposition(name, i) for i, name in enumerate(names))


PropRef = Union[Proposition, int]
Literals = Union[Mapping[PropRef, bool], Iterable[tuple[PropRef, bool]]]


def prop_index(p: PropRef, n: int, *, module: str = "classical") -> int:
    i = p.index if isinstance(p, Proposition) else int(p)
    if not 0 <= i < n:
        raise UnknownProposition(f"proposition {p!r} not in a {n}-proposition context", module=module)
    return i


def normalize_literals(literals: Literals, n: int, *, module: str = "classical") -> list[tuple[int, bool]]:
    items = literals.items() if isinstance(literals, Mapping) else literals
    out: list[tuple[int, bool]] = []
    seen: set[int] = set()
    for p, value in items:
        i = prop_index(p, n, module=module)
        if i in seen:
            raise DuplicateProposition(f"proposition {i} listed twice", module=module)
        seen.add(i)
        out.append((i, bool(value)))
    return out


@lru_cache(maxsize=None)
def truth_table(n: int) -> np.ndarray:
    """(2**n, n) boolean array; row k holds the truth values of atom k."""
    rows = ((np.arange(2**n)[:, None] >> np.arange(n - 1, -1, -1)) & 1) == 0
    rows.setflags(write=False)
    return rows


def atom_label(n: int, k: int) -> str:
    return "".join("T" if v else "F" for v in truth_table(n)[k])


def validate_weights(weights, length: int, *, module: str) -> np.ndarray:
    w = np.array(weights, dtype=float).reshape(-1)
    if w.size != length:
        raise WrongLength(f"expected {length} weights, got {w.size}", module=module)
    if not np.all(np.isfinite(w)):
        raise NotNormalized("weights must be finite", module=module)
    if np.any(w < 0):
        raise NegativeWeight(f"negative weight {w.min()!r}", module=module)
    total = w.sum()
    if abs(total - 1.0) > INTAKE_TOL:
        raise NotNormalized(f"weights sum to {total!r}", module=module)
    w = w / total
    w.setflags(write=False)
    return w


@dataclass(frozen=True, eq=False)
class JointDistribution:
    n: int
    weights: np.ndarray

    def __len__(self) -> int:
        return self.weights.size

    def labels(self) -> list[str]:
        return [atom_label(self.n, k) for k in range(len(self))]


def make_distribution(n: int, weights: Sequence[float]) -> JointDistribution:
    if not 0 <= n <= MAX_PROPOSITIONS:
        raise TooManyPropositions(f"n must be in [0, {MAX_PROPOSITIONS}], got {n}")
    return JointDistribution(n, validate_weights(weights, 2**n, module="classical"))


def uniform(n: int) -> JointDistribution:
    return make_distribution(n, np.full(2**n, 1.0 / 2**n))


def point_mass(n: int, assignment: Sequence[bool]) -> JointDistribution:
    if len(assignment) != n:
        raise WrongLength(f"assignment needs {n} truth values")
    k = int(np.flatnonzero(np.all(truth_table(n) == np.asarray(assignment, bool), axis=1))[0])
    w = np.zeros(2**n)
    w[k] = 1.0
    return make_distribution(n, w)


def random_distribution(n: int, rng: np.random.Generator) -> JointDistribution:
    """Uniform draw from the simplex (normalized exponentials)."""
    w = rng.exponential(size=2**n)
    return make_distribution(n, w / w.sum())


@lru_cache(maxsize=4096)
def _atoms(n: int, lits: tuple[tuple[int, bool], ...]) -> np.ndarray:
    """Indices of the atoms consistent with ``lits``."""
    table = truth_table(n)
    mask = np.ones(2**n, dtype=bool)
    for i, value in lits:
        mask &= table[:, i] == value
    idx = np.flatnonzero(mask)
    idx.setflags(write=False)
    return idx


def _mass(d: JointDistribution, lits: list[tuple[int, bool]]) -> float:
    return float(d.weights[_atoms(d.n, tuple(sorted(lits)))].sum())


def marginal(d: JointDistribution, literals: Literals) -> float:
    """Total weight of atoms consistent with every literal."""
    return _mass(d, normalize_literals(literals, d.n))


def conditional(d: JointDistribution, target: Literals, given: Literals) -> float:
    t = normalize_literals(target, d.n)
    g = normalize_literals(given, d.n)
    if {i for i, _ in t} & {i for i, _ in g}:
        raise DuplicateProposition("target and given must reference disjoint propositions")
    denom = _mass(d, g)
    if denom == 0.0:
        raise ZeroConditioningMass(f"conditioning event {g} has probability 0")
    return _mass(d, t + g) / denom


def product_rule_residual(d: JointDistribution, p: PropRef, q: PropRef) -> tuple[float | None, float | None]:
    """Residuals of |p&q| = |p| |q|_p = |q| |p|_q.

    A leg whose conditional is undefined (zero conditioning mass) is ``None``.
    """
    i, j = prop_index(p, d.n), prop_index(q, d.n)
    if i == j:
        raise DuplicateProposition("p and q must differ")
    both = marginal(d, {i: True, j: True})
    legs: list[float | None] = []
    for a, b in ((i, j), (j, i)):
        try:
            legs.append(both - marginal(d, {a: True}) * conditional(d, {b: True}, {a: True}))
        except ZeroConditioningMass:
            legs.append(None)
    return legs[0], legs[1]


def _distinct(d_n: int, props, module: str) -> tuple[int, ...]:
    idx = tuple(prop_index(p, d_n, module=module) for p in props)
    if len(set(idx)) != len(idx):
        raise DuplicateProposition(f"propositions {idx} are not distinct", module=module)
    return idx


def wd_classical(d: JointDistribution, a: PropRef, b: PropRef, c: PropRef) -> InequalityReport:
    """P(A&B) + P(~B&C) >= P(A&C), a theorem for every joint distribution."""
    ia, ib, ic = _distinct(d.n, (a, b, c), "classical")
    lhs = marginal(d, {ia: True, ib: True}) + marginal(d, {ib: False, ic: True})
    rhs = marginal(d, {ia: True, ic: True})
    margin = lhs - rhs
    return InequalityReport("wd_classical", lhs, rhs, margin, margin < -BOUND_TOL, propositions=(ia, ib, ic))


def ordered_triples(n: int):
    return permutations(range(n), 3)
