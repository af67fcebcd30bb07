"""Show the ratio rule failing the quadratic-form test, the qubit form passing
it, and a non-commuting projector pair that has no common Boolean context."""

import numpy as np

from obsfreq.operators import (
    classical_embeddability,
    diagonal_projector,
    nonlinearity_witness,
    projector_onto,
    superposition_gap,
)
from obsfreq.qubit import P_QUBIT, quadratic_form


def main():
    for n in (1, 2, 3):
        w = nonlinearity_witness(200, seed=n, n=n)
        lin = nonlinearity_witness(200, seed=n, n=n, u_free=True)
        print(f"n={n}: ratio-rule discrepancy {w.discrepancy:.4f}; restricted to U-free states {lin.discrepancy:.1e}")

    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(1000):
        s1 = rng.normal(size=2) + 1j * rng.normal(size=2)
        s1 /= np.linalg.norm(s1)
        s2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        s2 -= np.vdot(s1, s2) * s1
        s2 /= np.linalg.norm(s2)
        worst = max(worst, superposition_gap(lambda v: quadratic_form(v, P_QUBIT), s1, s2, rng.uniform()))
    print(f"qubit form diag(1,0): worst discrepancy over 1000 pairs {worst:.1e}")

    family = [diagonal_projector([1, 0]), projector_onto([1, 1])]
    print("diag(1,0) with |+><+|:", classical_embeddability(family))


if __name__ == "__main__":
    main()
