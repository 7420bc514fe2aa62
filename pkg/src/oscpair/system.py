"""Two coupled, driven oscillators with time-dependent masses and frequencies.

The physical problem is

    H(t) = sum_j [ p_j^2 / 2 m_j(t) + (1/2) m_j(t) w_j(t)^2 x_j^2
                   - m_j(t) f_j(t) x_j ]  +  lam(t) x_1 x_2

with j = 1, 2.  A time-dependent mass feeds into the dynamics through the
effective frequency

    w~_j^2(t) = w_j^2 + (1/4) (mdot_j^2 / m_j^2  -  2 mddot_j / m_j),

which is what replaces w_j^2 after the mass-scaling part of the canonical
transformation.  It may be negative (a transiently inverted channel); that
is allowed everywhere downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import Coefficient
from .errors import DomainError

__all__ = [
    "SystemSpec",
    "PhasePoint",
    "TransformedPhasePoint",
    "effective_frequency_sq",
    "hamiltonian",
    "kinetic_energy",
    "potential",
]

_MASS_SAMPLES = 10_000


@dataclass(frozen=True)
class PhasePoint:
    """Lab-frame phase-space point."""

    x1: float
    x2: float
    p1: float
    p2: float


@dataclass(frozen=True)
class TransformedPhasePoint:
    """Phase-space point in the rotated, mass-scaled frame."""

    Q1: float
    Q2: float
    P1: float
    P2: float


@dataclass(frozen=True)
class SystemSpec:
    """Full problem specification on a closed time window [t_min, t_max].

    ``coupling`` is the position-position coupling strength (the JSON key
    is "lambda"). hbar is carried explicitly; nothing in the package
    assumes hbar = 1.
    """

    m1: Coefficient
    m2: Coefficient
    omega1: Coefficient
    omega2: Coefficient
    f1: Coefficient
    f2: Coefficient
    coupling: Coefficient
    t_min: float
    t_max: float
    hbar: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.t_min) or not np.isfinite(self.t_max):
            raise ValueError("time window must be finite")
        if self.t_max <= self.t_min:
            raise ValueError("t_max must exceed t_min")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        for name in ("m1", "m2", "omega1", "omega2", "f1", "f2", "coupling"):
            lo, hi = getattr(self, name).domain
            if self.t_min < lo or self.t_max > hi:
                raise ValueError(
                    f"coefficient {name} is only defined on [{lo:g}, {hi:g}], "
                    f"which does not cover [{self.t_min:g}, {self.t_max:g}]"
                )
        ts = np.linspace(self.t_min, self.t_max, _MASS_SAMPLES)
        for name in ("m1", "m2"):
            vals = np.asarray(getattr(self, name)(ts), dtype=float)
            bad = np.nonzero(vals <= 0.0)[0]
            if bad.size:
                raise ValueError(
                    f"mass {name} is non-positive at t = {ts[bad[0]]:.6g} "
                    f"(value {vals[bad[0]]:.6g})"
                )

    def check_time(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.t_min) or np.any(t > self.t_max):
            raise DomainError(
                f"time outside system domain [{self.t_min:g}, {self.t_max:g}]"
            )
        return t

    def mass(self, j, t):
        return (self.m1 if j == 1 else self.m2)(t)

    def mass_deriv(self, j, t):
        return (self.m1 if j == 1 else self.m2).deriv1(t)


def effective_frequency_sq(spec: SystemSpec, j: int, t):
    """w~_j^2(t); vectorized over t. May be negative."""
    t = spec.check_time(t)
    m = spec.m1 if j == 1 else spec.m2
    w = spec.omega1 if j == 1 else spec.omega2
    mv = m(t)
    md = m.deriv1(t)
    mdd = m.deriv2(t)
    return w(t) ** 2 + 0.25 * (md**2 / mv**2 - 2.0 * mdd / mv)


def potential(spec: SystemSpec, x1, x2, t):
    """Lab-frame potential, including driving and coupling terms."""
    t = spec.check_time(t)
    m1, m2 = spec.m1(t), spec.m2(t)
    v = 0.5 * m1 * spec.omega1(t) ** 2 * x1**2 - m1 * spec.f1(t) * x1
    v += 0.5 * m2 * spec.omega2(t) ** 2 * x2**2 - m2 * spec.f2(t) * x2
    return v + spec.coupling(t) * x1 * x2


def kinetic_energy(spec: SystemSpec, pt: PhasePoint, t):
    t = spec.check_time(t)
    return pt.p1**2 / (2.0 * spec.m1(t)) + pt.p2**2 / (2.0 * spec.m2(t))


def hamiltonian(spec: SystemSpec, pt: PhasePoint, t):
    """Classical Hamiltonian value at a lab-frame phase point."""
    return kinetic_energy(spec, pt, t) + potential(spec, pt.x1, pt.x2, t)
