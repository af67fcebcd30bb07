"""State vectors, projectors and the operator form of both algebras."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .classical import JointDistribution, truth_table
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    MalformedExpression,
    NonCommuting,
    NotAProjector,
    NotNested,
    WitnessNotFound,
    ZeroContext,
)
from .ternary import Outcome, TernaryDistribution, outcome_table

NORM_TOL = 1e-12
MATRIX_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords)
        if c.ndim != 1 or c.size == 0:
            raise DimensionMismatch("state vector must be a non-empty 1-d array")
        if not np.iscomplexobj(c):
            c = c.astype(float)
        if abs(np.linalg.norm(c) - 1.0) > NORM_TOL:
            raise ValueError(f"state vector norm {np.linalg.norm(c)!r} != 1")
        object.__setattr__(self, "coords", _frozen(c))

    @property
    def dim(self) -> int:
        return self.coords.size

    @classmethod
    def normalized(cls, coords) -> "StateVector":
        c = np.asarray(coords)
        return cls(c / np.linalg.norm(c))

    @classmethod
    def basis(cls, dim: int, k: int) -> "StateVector":
        c = np.zeros(dim)
        c[k] = 1.0
        return cls(c)


@dataclass(frozen=True, eq=False)
class Projector:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"projector must be square, got shape {m.shape}")
        if not np.iscomplexobj(m):
            m = m.astype(float)
        if not np.allclose(m, m.conj().T, rtol=0, atol=MATRIX_TOL):
            raise NotAProjector("matrix is not self-adjoint")
        if not np.allclose(m @ m, m, rtol=0, atol=MATRIX_TOL):
            raise NotAProjector("matrix is not idempotent")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_diagonal(self) -> bool:
        return not np.any(self.matrix - np.diag(np.diag(self.matrix)))

    def diagonal(self) -> np.ndarray:
        return np.diag(self.matrix)

    def __eq__(self, other):
        if not isinstance(other, Projector):
            return NotImplemented
        return self.dim == other.dim and np.allclose(self.matrix, other.matrix, rtol=0, atol=MATRIX_TOL)

    __hash__ = None


def diagonal_projector(mask) -> Projector:
    return Projector(np.diag(np.asarray(mask, dtype=float)))


def identity(dim: int) -> Projector:
    return Projector(np.eye(dim))


def projector_onto(vector) -> Projector:
    """Rank-one projector onto the span of ``vector`` (need not be normalized)."""
    v = np.asarray(vector)
    v = v / np.linalg.norm(v)
    return Projector(np.outer(v, v.conj()))


def commutes(a: Projector, b: Projector, tol: float = MATRIX_TOL) -> bool:
    _same_dim(a.dim, b.dim)
    ab, ba = a.matrix @ b.matrix, b.matrix @ a.matrix
    return bool(np.allclose(ab, ba, rtol=0, atol=tol))


def _same_dim(*dims: int) -> None:
    if len(set(dims)) > 1:
        raise DimensionMismatch(f"dimensions differ: {dims}")


def complement(p: Projector) -> Projector:
    return Projector(np.eye(p.dim) - p.matrix)


def meet(p: Projector, q: Projector) -> Projector:
    """p AND q as PQ; only defined for commuting projectors."""
    if not commutes(p, q):
        raise NonCommuting("AND of non-commuting projectors is not a projector")
    return Projector(p.matrix @ q.matrix)


def join(p: Projector, q: Projector) -> Projector:
    if not commutes(p, q):
        raise NonCommuting("OR of non-commuting projectors is not a projector")
    return Projector(p.matrix + q.matrix - p.matrix @ q.matrix)


# -- classical (2**n) layer ---------------------------------------------------


def tomographic_embed(d: JointDistribution) -> StateVector:
    return StateVector(np.sqrt(d.weights))


def _check_index(n: int, i: int) -> None:
    if not 0 <= i < n:
        raise IndexOutOfRange(f"proposition index {i} out of range for n={n}")


def binary_projector(n: int, i: int, value: bool = True) -> Projector:
    _check_index(n, i)
    return diagonal_projector(truth_table(n)[:, i] == value)


def born(s: StateVector, p: Projector) -> float:
    """<s|P|s>."""
    _same_dim(s.dim, p.dim)
    return float(np.real(np.vdot(s.coords, p.matrix @ s.coords)))


# Boolean expressions over propositions.


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Not:
    arg: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


Expr = Union[Var, Not, And, Or]

_TOKEN = re.compile(r"\s*(?:(\()|(\))|(~|!|NOT\b|not\b)|(&|AND\b|and\b)|(\||OR\b|or\b)|([A-Za-z_][A-Za-z0-9_]*))")


def parse_expression(text: str, names: Sequence[str] | None = None) -> Expr:
    """Parse ``"p AND NOT (q OR r)"`` style text.

    Precedence is NOT > AND > OR. Identifiers resolve against ``names``; with
    no names given, ``p0``, ``p1``, ... refer to proposition indices.
    """
    tokens: list[tuple[str, str]] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise MalformedExpression(f"unexpected input at {text[pos:]!r}")
        kind = ("(", ")", "not", "and", "or", "name")[m.lastindex - 1]
        tokens.append((kind, m.group(m.lastindex)))
        pos = m.end()
    lookup = {name: i for i, name in enumerate(names)} if names is not None else None

    def resolve(name: str) -> Var:
        if lookup is not None:
            if name not in lookup:
                raise MalformedExpression(f"unknown proposition {name!r}")
            return Var(lookup[name])
        m = re.fullmatch(r"p(\d+)", name)
        if not m:
            raise MalformedExpression(f"unknown proposition {name!r}")
        return Var(int(m.group(1)))

    def peek():
        return tokens[0][0] if tokens else None

    def or_expr():
        e = and_expr()
        while peek() == "or":
            tokens.pop(0)
            e = Or(e, and_expr())
        return e

    def and_expr():
        e = unary()
        while peek() == "and":
            tokens.pop(0)
            e = And(e, unary())
        return e

    def unary():
        if not tokens:
            raise MalformedExpression("unexpected end of expression")
        kind, val = tokens.pop(0)
        if kind == "not":
            return Not(unary())
        if kind == "(":
            e = or_expr()
            if peek() != ")":
                raise MalformedExpression("missing ')'")
            tokens.pop(0)
            return e
        if kind == "name":
            return resolve(val)
        raise MalformedExpression(f"unexpected token {val!r}")

    expr = or_expr()
    if tokens:
        raise MalformedExpression(f"trailing tokens {[v for _, v in tokens]}")
    return expr


def boolean_operator(expr: Expr, n: int) -> Projector:
    """Diagonal projector of ``expr`` via ~p -> I-P, p&q -> PQ, p|q -> P+Q-PQ."""
    if isinstance(expr, Var):
        return binary_projector(n, expr.index, True)
    if isinstance(expr, Not):
        return complement(boolean_operator(expr.arg, n))
    if isinstance(expr, And):
        return meet(boolean_operator(expr.left, n), boolean_operator(expr.right, n))
    if isinstance(expr, Or):
        return join(boolean_operator(expr.left, n), boolean_operator(expr.right, n))
    raise MalformedExpression(f"not an expression node: {expr!r}")


def evaluate(expr: Expr, assignment: Sequence[bool]) -> bool:
    """Truth value of ``expr`` under one assignment (plain recursion)."""
    if isinstance(expr, Var):
        if not 0 <= expr.index < len(assignment):
            raise IndexOutOfRange(f"proposition index {expr.index} out of range")
        return bool(assignment[expr.index])
    if isinstance(expr, Not):
        return not evaluate(expr.arg, assignment)
    if isinstance(expr, And):
        return evaluate(expr.left, assignment) and evaluate(expr.right, assignment)
    if isinstance(expr, Or):
        return evaluate(expr.left, assignment) or evaluate(expr.right, assignment)
    raise MalformedExpression(f"not an expression node: {expr!r}")


# -- observability (3**n) layer -----------------------------------------------


def observability_operators(n: int, i: int) -> tuple[Projector, Projector]:
    """(P_i, P*_i): P_i keeps atoms with outcome T at i, P*_i keeps T or F."""
    _check_index(n, i)
    col = outcome_table(n)[:, i]
    return diagonal_projector(col == Outcome.T), diagonal_projector(col != Outcome.U)


def ternary_embed(d: TernaryDistribution) -> StateVector:
    return StateVector(np.sqrt(d.weights))


def _ratio(coords: np.ndarray, p: np.ndarray, pstar: np.ndarray) -> float:
    den = float(np.real(np.vdot(coords, pstar @ coords)))
    if den == 0.0:
        raise ZeroContext("<s|P*|s> = 0: proposition never observable in this state")
    return float(np.real(np.vdot(coords, p @ coords))) / den


def ratio_frequency(s: StateVector, p: Projector, pstar: Projector) -> float:
    """[p] = <s|P|s> / <s|P*|s>."""
    _same_dim(s.dim, p.dim, pstar.dim)
    if not np.allclose(p.matrix @ pstar.matrix, p.matrix, rtol=0, atol=MATRIX_TOL):
        raise NotNested("P is not contained in P*")
    return _ratio(s.coords, p.matrix, pstar.matrix)


@dataclass(frozen=True, eq=False)
class NonlinearityWitness:
    """Outcome of a superposition test of the ratio rule.

    Any quadratic form ``f(s) = <s|X|s>`` satisfies, for orthonormal ``s1``,
    ``s2`` and ``u± = sqrt(w) s1 ± sqrt(1-w) s2``,
    ``(f(u+) + f(u-)) / 2 == w f(s1) + (1-w) f(s2)``. ``discrepancy`` is the
    amount by which the ratio rule misses that identity.
    """

    found: bool
    discrepancy: float
    s1: np.ndarray
    s2: np.ndarray
    weight: float
    linear_on_subspace: bool = False
    samples: int = 0


def superposition_gap(f, s1: np.ndarray, s2: np.ndarray, w: float) -> float:
    a, b = np.sqrt(w), np.sqrt(1.0 - w)
    up, um = a * s1 + b * s2, a * s1 - b * s2
    return abs(0.5 * (f(up) + f(um)) - (w * f(s1) + (1.0 - w) * f(s2)))


def nonlinearity_witness(
    samples: int,
    seed: int,
    *,
    n: int = 1,
    i: int = 0,
    u_free: bool = False,
    threshold: float = 1e-6,
) -> NonlinearityWitness:
    """Search for states on which [.] breaks the quadratic-form identity.

    With ``u_free=True`` samples are confined to the range of P*, where the
    denominator is identically 1 and the rule is linear; the report then
    states linearity on that subspace instead of raising.
    """
    if samples < 4:
        raise ValueError("samples must be >= 4")
    p, pstar = observability_operators(n, i)
    pm, psm = p.matrix, pstar.matrix
    keep = np.diag(psm) if u_free else np.ones(psm.shape[0])
    rng = np.random.default_rng(seed)

    def f(v):
        return _ratio(v, pm, psm)

    best = None
    for _ in range(samples):
        s1 = rng.normal(size=keep.size) * keep
        s2 = rng.normal(size=keep.size) * keep
        s1 /= np.linalg.norm(s1)
        s2 -= np.dot(s1, s2) * s1
        norm2 = np.linalg.norm(s2)
        if norm2 < 1e-9:
            continue
        s2 /= norm2
        w = float(rng.uniform(0.05, 0.95))
        try:
            gap = superposition_gap(f, s1, s2, w)
        except ZeroContext:
            continue
        if best is None or gap > best[0]:
            best = (gap, s1, s2, w)

    if best is None:
        raise WitnessNotFound("no sample had a defined ratio")
    gap, s1, s2, w = best
    found = gap > threshold
    if u_free:
        return NonlinearityWitness(found, gap, s1, s2, w, linear_on_subspace=gap <= NORM_TOL, samples=samples)
    if not found:
        raise WitnessNotFound(f"largest discrepancy {gap:.3g} <= {threshold}")
    return NonlinearityWitness(True, gap, s1, s2, w, samples=samples)


@dataclass(frozen=True)
class Embeddability:
    embeddable: bool
    pair: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.embeddable


def classical_embeddability(ps: Sequence[Projector]) -> Embeddability:
    """A family has a joint Boolean (diagonal) form iff all pairs commute."""
    if ps:
        _same_dim(*(p.dim for p in ps))
    for a in range(len(ps)):
        for b in range(a + 1, len(ps)):
            if not commutes(ps[a], ps[b]):
                return Embeddability(False, (a, b))
    return Embeddability(True)
