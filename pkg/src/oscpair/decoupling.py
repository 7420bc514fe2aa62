"""Constant-angle canonical transformation that decouples the two oscillators.

The transformation scales out the masses, removes the mdot cross terms with
a quadratic gauge, and rotates by a constant angle alpha:

    x_1 = (Q_1 cos a + Q_2 sin a) / sqrt(m_1)
    x_2 = (-Q_1 sin a + Q_2 cos a) / sqrt(m_2)
    p_1 = sqrt(m_1) (P_1 cos a + P_2 sin a + beta_1 x_1)
    p_2 = sqrt(m_2) (-P_1 sin a + P_2 cos a + beta_2 x_2)

with beta_j = -mdot_j / (2 sqrt(m_j)).  In the new variables the
Hamiltonian becomes a pair of unit-mass driven oscillators

    sum_j [ P_j^2/2 + (1/2) Om_j^2(t) Q_j^2 - F_j(t) Q_j ] + Gam(t) Q_1 Q_2

with (g = lam / sqrt(m_1 m_2), w~_j^2 the effective frequencies):

    Om_1^2 = w~_1^2 cos^2 a + w~_2^2 sin^2 a - g sin 2a
    Om_2^2 = w~_1^2 sin^2 a + w~_2^2 cos^2 a + g sin 2a
    Gam    = (1/2)(w~_1^2 - w~_2^2) sin 2a + g cos 2a
    F_1    = sqrt(m_1) f_1 cos a - sqrt(m_2) f_2 sin a
    F_2    = sqrt(m_1) f_1 sin a + sqrt(m_2) f_2 cos a

These expressions are validated against integrated classical trajectories
in the test suite rather than taken on faith.  Decoupling holds when a
constant alpha makes Gam vanish identically, i.e. when

    lam(t) = (1/2) sqrt(m_1 m_2) (w~_2^2 - w~_1^2) tan(2a)

for some fixed a; systems violating this are flagged inadmissible (with
diagnostics), never silently accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .system import (
    PhasePoint,
    SystemSpec,
    TransformedPhasePoint,
    effective_frequency_sq,
)

__all__ = [
    "CanonicalTransform",
    "DecoupledSystem",
    "normalize_angle",
    "channel_quantities",
    "decoupled_at_angle",
    "solve_angle",
]

#: Gam and Om_j^2 are pi-periodic in 2*alpha, so (-pi/4, pi/4] covers every
#: distinct transformation exactly once.
ANGLE_LO = -np.pi / 4
ANGLE_HI = np.pi / 4

DEFAULT_GAMMA_TOL = 1e-9


def normalize_angle(alpha):
    """Reduce alpha modulo pi/2 into the canonical branch (-pi/4, pi/4]."""
    a = float(alpha) - np.pi / 2 * np.round(float(alpha) / (np.pi / 2))
    if a <= ANGLE_LO + 0.0:
        a += np.pi / 2
    return a


@dataclass(frozen=True)
class CanonicalTransform:
    """Constant-angle transform bound to a particular system (for the masses)."""

    system: SystemSpec
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", normalize_angle(self.alpha))

    def _parts(self, t):
        s = self.system
        t = s.check_time(t)
        sm1, sm2 = np.sqrt(s.m1(t)), np.sqrt(s.m2(t))
        b1 = -s.m1.deriv1(t) / (2.0 * sm1)
        b2 = -s.m2.deriv1(t) / (2.0 * sm2)
        return sm1, sm2, b1, b2, np.cos(self.alpha), np.sin(self.alpha)

    def to_rotated(self, pt: PhasePoint, t) -> TransformedPhasePoint:
        """Lab (x, p) -> rotated (Q, P) at time t."""
        sm1, sm2, b1, b2, c, s = self._parts(t)
        u1, u2 = sm1 * pt.x1, sm2 * pt.x2
        w1 = pt.p1 / sm1 - b1 * pt.x1
        w2 = pt.p2 / sm2 - b2 * pt.x2
        return TransformedPhasePoint(
            Q1=u1 * c - u2 * s,
            Q2=u1 * s + u2 * c,
            P1=w1 * c - w2 * s,
            P2=w1 * s + w2 * c,
        )

    def from_rotated(self, tpt: TransformedPhasePoint, t) -> PhasePoint:
        """Rotated (Q, P) -> lab (x, p); exact inverse of :meth:`to_rotated`."""
        sm1, sm2, b1, b2, c, s = self._parts(t)
        x1 = (tpt.Q1 * c + tpt.Q2 * s) / sm1
        x2 = (-tpt.Q1 * s + tpt.Q2 * c) / sm2
        p1 = sm1 * (tpt.P1 * c + tpt.P2 * s + b1 * x1)
        p2 = sm2 * (-tpt.P1 * s + tpt.P2 * c + b2 * x2)
        return PhasePoint(x1=x1, x2=x2, p1=p1, p2=p2)

    def position_matrix(self, t):
        """2x2 matrix T(t) with Q = T x for the position block."""
        sm1, sm2, _, _, c, s = self._parts(t)
        return np.array([[c * sm1, -s * sm2], [s * sm1, c * sm2]])


def channel_quantities(spec: SystemSpec, alpha, t, corrected=True):
    """(Om1^2, Om2^2, F1, F2, Gam) at time(s) t for a given angle.

    With ``corrected=False`` the effective frequencies are replaced by the
    bare w_j^2 (no mass-derivative correction); that variant exists only to
    reproduce the defective construction for comparison runs.
    """
    t = spec.check_time(t)
    if corrected:
        wt1 = effective_frequency_sq(spec, 1, t)
        wt2 = effective_frequency_sq(spec, 2, t)
    else:
        wt1 = spec.omega1(t) ** 2
        wt2 = spec.omega2(t) ** 2
    g = spec.coupling(t) / np.sqrt(spec.m1(t) * spec.m2(t))
    ca, sa = np.cos(alpha), np.sin(alpha)
    s2, c2 = np.sin(2 * alpha), np.cos(2 * alpha)
    om1 = wt1 * ca**2 + wt2 * sa**2 - g * s2
    om2 = wt1 * sa**2 + wt2 * ca**2 + g * s2
    gam = 0.5 * (wt1 - wt2) * s2 + g * c2
    sf1 = np.sqrt(spec.m1(t)) * spec.f1(t)
    sf2 = np.sqrt(spec.m2(t)) * spec.f2(t)
    return om1, om2, sf1 * ca - sf2 * sa, sf1 * sa + sf2 * ca, gam


@dataclass(frozen=True)
class DecoupledSystem:
    """Result of fixing the rotation angle: two driven channels plus residual."""

    transform: CanonicalTransform
    gamma_max: float
    worst_t: float
    gamma_tol: float
    admissible: bool

    @property
    def system(self) -> SystemSpec:
        return self.transform.system

    @property
    def alpha(self) -> float:
        return self.transform.alpha

    def omega_sq(self, j, t, corrected=True):
        q = channel_quantities(self.system, self.alpha, t, corrected=corrected)
        return q[0] if j == 1 else q[1]

    def driving(self, j, t):
        q = channel_quantities(self.system, self.alpha, t)
        return q[2] if j == 1 else q[3]

    def gamma(self, t):
        return channel_quantities(self.system, self.alpha, t)[4]


def _grid(spec, n_time):
    return np.linspace(spec.t_min, spec.t_max, int(n_time))


def decoupled_at_angle(spec: SystemSpec, alpha, n_time=1024,
                       gamma_tol=DEFAULT_GAMMA_TOL) -> DecoupledSystem:
    """Bind a given (possibly user-overridden) angle and judge admissibility."""
    alpha = normalize_angle(alpha)
    ts = _grid(spec, n_time)
    om1, om2, _, _, gam = channel_quantities(spec, alpha, ts)
    gam = np.abs(gam)
    i = int(np.argmax(gam))
    stiffness = float(max(np.max(np.abs(om1)), np.max(np.abs(om2))))
    tol_abs = gamma_tol * (1.0 + stiffness)
    return DecoupledSystem(
        transform=CanonicalTransform(system=spec, alpha=alpha),
        gamma_max=float(gam[i]),
        worst_t=float(ts[i]),
        gamma_tol=tol_abs,
        admissible=bool(gam[i] <= tol_abs),
    )


def solve_angle(spec: SystemSpec, n_alpha=2048, n_time=1024,
                gamma_tol=DEFAULT_GAMMA_TOL) -> DecoupledSystem:
    """Find the constant angle minimizing max_t |Gam(t)|.

    Strategy: precompute D(t) = (w~_1^2 - w~_2^2)/2 and g(t) on a dense
    time grid, scan max_t |D sin 2a + g cos 2a| over n_alpha angles on the
    canonical branch, then refine by golden section around the best sample.
    Two exact special cases short-circuit the scan: lam identically zero
    (alpha = 0) and identical effective frequencies with nonzero coupling
    (alpha = pi/4, the branch boundary, where cos 2a = 0 kills Gam).

    Inadmissibility is reported in the result, never raised.
    """
    ts = _grid(spec, n_time)
    wt1 = effective_frequency_sq(spec, 1, ts)
    wt2 = effective_frequency_sq(spec, 2, ts)
    g = spec.coupling(ts) / np.sqrt(spec.m1(ts) * spec.m2(ts))
    dd = 0.5 * (wt1 - wt2)
    scale = float(np.max(np.abs(wt1)) + np.max(np.abs(wt2)) + np.max(np.abs(g)) + 1.0)

    if np.max(np.abs(g)) <= 1e-300:
        return decoupled_at_angle(spec, 0.0, n_time, gamma_tol)
    if np.max(np.abs(dd)) <= 1e-13 * scale:
        return decoupled_at_angle(spec, np.pi / 4, n_time, gamma_tol)

    def worst(alpha):
        return float(np.max(np.abs(dd * math.sin(2 * alpha) + g * math.cos(2 * alpha))))

    alphas = np.linspace(ANGLE_LO, ANGLE_HI, int(n_alpha), endpoint=True)
    # vectorized scan: |D sin2a + g cos2a| over (time, angle)
    vals = np.abs(np.outer(dd, np.sin(2 * alphas)) + np.outer(g, np.cos(2 * alphas)))
    per_alpha = vals.max(axis=0)
    k = int(np.argmin(per_alpha))
    # bracket around the best sample; indices wrap with a pi/2 shift since
    # |Gam| is pi/2-periodic in alpha
    step = alphas[1] - alphas[0]
    lo, hi = alphas[k] - step, alphas[k] + step

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = worst(c), worst(d)
    for _ in range(120):
        if b - a < 1e-14:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = worst(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = worst(d)
    alpha = 0.5 * (a + b)
    return decoupled_at_angle(spec, alpha, n_time, gamma_tol)
