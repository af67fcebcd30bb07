"""Brute-force reference computations, written against plain enumeration.

Atom k of an n-proposition table is the k-th element of
``itertools.product(values, repeat=n)``; nothing here touches the library's
vectorized tables.
"""

from itertools import product

import numpy as np


def classical_prob(weights, n, predicate):
    return sum(w for w, a in zip(weights, product((True, False), repeat=n)) if predicate(a))


def ternary_prob(weights, n, predicate):
    return sum(w for w, a in zip(weights, product("TFU", repeat=n)) if predicate(a))


def conditional_by_enumeration(weights, n, target, given):
    den = classical_prob(weights, n, given)
    return classical_prob(weights, n, lambda a: target(a) and given(a)) / den


def random_simplex(rng, size):
    w = rng.exponential(size=size)
    return w / w.sum()


def random_expression(rng, n, depth):
    """Random nested tuple expression over propositions 0..n-1."""
    from obsfreq.operators import And, Not, Or, Var

    if depth == 0 or rng.random() < 0.25:
        return Var(int(rng.integers(n)))
    kind = rng.integers(3)
    if kind == 0:
        return Not(random_expression(rng, n, depth - 1))
    left = random_expression(rng, n, depth - 1)
    right = random_expression(rng, n, depth - 1)
    return And(left, right) if kind == 1 else Or(left, right)


def eval_tuple_free(expr, assignment):
    """Independent evaluator keyed on class names only."""
    name = type(expr).__name__
    if name == "Var":
        return assignment[expr.index]
    if name == "Not":
        return not eval_tuple_free(expr.arg, assignment)
    l, r = eval_tuple_free(expr.left, assignment), eval_tuple_free(expr.right, assignment)
    return (l and r) if name == "And" else (l or r)


def wd_star_grid_minimum(resolution: int = 6) -> float:
    """Minimum starred WD margin over the n=3 ternary simplex grid of step 1/resolution.

    A grid point is a multiset of ``resolution`` atoms; its margin is the mean
    of the per-atom margins.
    """
    from itertools import combinations_with_replacement

    coef = np.array(
        [
            (a == "T" and b == "T") + (b == "F" and c == "T") - (a == "T" and c == "T")
            for a, b, c in product("TFU", repeat=3)
        ],
        dtype=float,
    )
    picks = np.array(list(combinations_with_replacement(range(27), resolution)), dtype=np.int8)
    return float((coef[picks].sum(axis=1) / resolution).min())
