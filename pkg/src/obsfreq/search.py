"""Random-restart hill climbing over the ternary simplex.

Looks for distributions that break a starred inequality as hard as possible:
the most negative wd_star margin, or the largest chsh_star value. Each
evaluation counts against ``budget``; the first evaluation is a random point
of the simplex, so ``budget=1`` returns that point.
"""

from __future__ import annotations

import numpy as np

from .errors import ArityMismatch, UnknownObjective
from .inequalities import CHSH_TERMS, CHSH_LABELS, _correlation_parts
from .ternary import TernaryDistribution, make_ternary, star_mask

OBJECTIVES = ("wd_star", "chsh_star")

INITIAL_STEP = 0.5
MIN_STEP = 1e-4


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x = 1} (sort-and-threshold)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / ks > 0)[0][-1]
    tau = css[rho] / (rho + 1)
    return np.maximum(v - tau, 0.0)


def wd_star_coefficients(n: int) -> np.ndarray:
    """margin(w) = c . w for propositions (0, 1, 2)."""
    ab = star_mask(n, [(0, True), (1, True)])
    nbc = star_mask(n, [(1, False), (2, True)])
    ac = star_mask(n, [(0, True), (2, True)])
    return ab.astype(float) + nbc - ac


def _score_fn(objective: str, n: int):
    """Return a function mapping weights to a score to maximize."""
    if objective == "wd_star":
        if n < 3:
            raise ArityMismatch(f"wd_star needs n >= 3, got {n}", module="observability")
        c = wd_star_coefficients(n)
        return lambda w: -float(c @ w), lambda s: -s
    if objective == "chsh_star":
        if n != 4:
            raise ArityMismatch(f"chsh_star needs n = 4, got {n}", module="observability")
        parts = [
            (sign, *_correlation_parts(4, CHSH_LABELS.index(a), CHSH_LABELS.index(b)))
            for a, b, sign in CHSH_TERMS
        ]
        signed = np.array([p[1] * p[0] for p in parts])
        observable = np.array([p[2] for p in parts])

        def chsh(w):
            den = observable @ w
            if np.any(den <= 0.0):
                return -np.inf
            return float(np.sum(signed @ w / den))

        return chsh, lambda s: s
    raise UnknownObjective(f"unknown objective {objective!r}; expected one of {OBJECTIVES}")


def violation_search(
    objective: str, n: int, budget: int, seed: int
) -> tuple[TernaryDistribution, float]:
    """Return ``(best distribution, its margin or CHSH value)``."""
    score, report = _score_fn(objective, n)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = np.random.default_rng(seed)
    dim = 3**n
    evals = 0
    best_w, best_s = None, -np.inf

    while evals < budget:
        x = rng.exponential(size=dim)
        x /= x.sum()
        fx = score(x)
        evals += 1
        if best_w is None or fx > best_s:
            best_w, best_s = x, fx
        step = INITIAL_STEP
        stalls = 0
        while evals < budget and step > MIN_STEP:
            y = x.copy()
            j = rng.integers(dim)
            y[j] += step * rng.standard_normal()
            y = project_to_simplex(y)
            fy = score(y)
            evals += 1
            if fy > fx:
                x, fx = y, fy
                stalls = 0
                if fx > best_s:
                    best_w, best_s = x, fx
            else:
                stalls += 1
                if stalls >= dim:
                    step *= 0.5
                    stalls = 0

    dist = make_ternary(n, best_w)
    return dist, report(best_s)
