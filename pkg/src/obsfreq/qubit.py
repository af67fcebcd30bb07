"""Single-proposition complex embedding.

A ternary proposition is a point (sqrt pT, sqrt pF, sqrt pU) on the unit
sphere. Rotating within the TF-plane and folding the U-elevation into a phase
gives a qubit (cos phi, e^{i theta} sin phi) on which the measurable frequency
is the linear form <psi|diag(1,0)|psi>.

Conventions: phi = atan2(sqrt pF, sqrt pT), so cos^2 phi = pT / (pT + pF);
theta = arcsin(sqrt pU), so a U-free direction has theta = 0. Any other
monotone choice of theta would do equally well since it never reaches [p].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDirection, InvalidQubit, NeverObservable

TOL = 1e-12

# The restored Born operator.
P_QUBIT = np.diag([1.0, 0.0])


@dataclass(frozen=True)
class SphereDirection:
    pT: float
    pF: float
    pU: float

    def __post_init__(self):
        ps = (self.pT, self.pF, self.pU)
        if any(not math.isfinite(p) or p < 0 for p in ps):
            raise InvalidDirection(f"components must be finite and >= 0, got {ps}")
        if abs(sum(ps) - 1.0) > TOL:
            raise InvalidDirection(f"components sum to {sum(ps)!r}")

    @property
    def vector(self) -> np.ndarray:
        return np.sqrt([self.pT, self.pF, self.pU])

    @classmethod
    def from_weights(cls, weights) -> "SphereDirection":
        w = np.asarray(weights, float)
        w = w / w.sum()
        return cls(float(w[0]), float(w[1]), float(w[2]))

    def measurable_frequency(self) -> float:
        if self.pT + self.pF == 0:
            raise NeverObservable("direction lies on the U axis", module="qubit")
        return self.pT / (self.pT + self.pF)


@dataclass(frozen=True)
class ComplexQubit:
    a0: complex
    a1: complex
    phi: float
    theta: float

    def __post_init__(self):
        if abs(abs(self.a0) ** 2 + abs(self.a1) ** 2 - 1.0) > TOL:
            raise InvalidQubit("amplitudes are not normalized")
        if abs(complex(self.a0).imag) > TOL or complex(self.a0).real < -TOL:
            raise InvalidQubit("gauge requires a0 real and >= 0")

    @classmethod
    def from_angles(cls, phi: float, theta: float) -> "ComplexQubit":
        return cls(complex(math.cos(phi), 0.0), cmath.exp(1j * theta) * math.sin(phi), phi, theta)

    @classmethod
    def from_amplitudes(cls, amps) -> "ComplexQubit":
        """Normalize and gauge-fix an arbitrary pair of amplitudes."""
        v = np.asarray(amps, dtype=complex)
        v = v / np.linalg.norm(v)
        if abs(v[0]) > 0:
            v = v * np.exp(-1j * np.angle(v[0]))
        phi = math.atan2(abs(v[1]), abs(v[0]))
        theta = float(np.angle(v[1])) if abs(v[1]) > 0 else 0.0
        return cls.from_angles(phi, theta)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a0, self.a1], dtype=complex)

    def with_phase(self, theta: float) -> "ComplexQubit":
        return ComplexQubit.from_angles(self.phi, theta)


def bloch_project(d: SphereDirection) -> ComplexQubit:
    if d.pT + d.pF == 0:
        raise NeverObservable("direction lies on the U axis", module="qubit")
    phi = math.atan2(math.sqrt(d.pF), math.sqrt(d.pT))
    theta = math.asin(min(1.0, math.sqrt(d.pU)))
    return ComplexQubit.from_angles(phi, theta)


def restored_born(q: ComplexQubit) -> float:
    """[p] = <psi|diag(1,0)|psi> = |a0|^2."""
    return abs(q.a0) ** 2


def quadratic_form(vector, op=P_QUBIT) -> float:
    v = np.asarray(vector, dtype=complex)
    return float(np.real(np.vdot(v, op @ v)))


def overlap(q1: ComplexQubit, q2: ComplexQubit) -> complex:
    """<q1|q2> = cos phi' cos phi'' + e^{i(theta'' - theta')} sin phi' sin phi''."""
    return complex(np.vdot(q1.vector, q2.vector))
