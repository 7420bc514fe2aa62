"""Complex 2D Gaussian wavepackets and their exact integrals.

A state is psi(x) = exp(-x^T A x / 2 + b^T x + c) with A complex symmetric
(real part positive definite), b complex, c complex.  This family is closed
under propagation by any Gaussian kernel, so wavepacket evolution through
the analytic propagator reduces to 2x2 complex linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergentGaussian

__all__ = ["GaussianState2D", "log_sqrt_det", "overlap", "fidelity"]

_TWO_PI = 2.0 * np.pi


def _eig_halfplane(S):
    """Eigenvalues of a complex symmetric 2x2 matrix with Re(S) > 0.

    Both eigenvalues lie in the open right half plane (the numerical range
    of S does), so their principal square roots and logs are safe.
    """
    tr = S[0, 0] + S[1, 1]
    det = S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]
    disc = np.sqrt(tr * tr / 4.0 - det + 0j)
    return tr / 2.0 + disc, tr / 2.0 - disc


def log_sqrt_det(S):
    """log sqrt(det S) with the branch appropriate for Gaussian integrals.

    Taken as the sum of principal half-logs of the eigenvalues; valid
    whenever Re(S) is positive definite.
    """
    l1, l2 = _eig_halfplane(S)
    return 0.5 * (np.log(l1) + np.log(l2))


def _require_posdef_real(S, what):
    SR = np.real(S)
    # 2x2 symmetric positive definiteness
    if not (SR[0, 0] > 0 and SR[0, 0] * SR[1, 1] - SR[0, 1] * SR[1, 0] > 0):
        raise NonConvergentGaussian(f"real part of {what} is not positive definite")


@dataclass(frozen=True)
class GaussianState2D:
    """psi(x) = exp(-x^T A x / 2 + b^T x + c), lab coordinates."""

    A: np.ndarray
    b: np.ndarray
    c: complex
    hbar: float = 1.0

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex).reshape(2, 2)
        A = 0.5 * (A + A.T)
        b = np.asarray(self.b, dtype=complex).reshape(2)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", complex(self.c))
        if not np.all(np.isfinite(A)) or not np.all(np.isfinite(b)):
            raise ValueError("non-finite Gaussian parameters")
        _require_posdef_real(A, "the width matrix")

    @classmethod
    def coherent(cls, center=(0.0, 0.0), momentum=(0.0, 0.0),
                 sigma=(np.sqrt(0.5), np.sqrt(0.5)), hbar=1.0):
        """Normalized coherent-type state.

        ``sigma`` are the position standard deviations of |psi|^2 per axis;
        the packet carries mean momentum ``momentum``.
        """
        q = np.asarray(center, dtype=float)
        p = np.asarray(momentum, dtype=float)
        sig = np.asarray(sigma, dtype=float)
        A = np.diag(1.0 / (2.0 * sig**2)).astype(complex)
        b = A @ q + 1j * p / hbar
        c = -0.5 * q @ A @ q - 1j * (p @ q) / hbar
        return cls(A=A, b=b, c=c, hbar=hbar).normalized()

    # -- norms and moments -------------------------------------------------

    def log_norm_sq(self):
        """log of ||psi||^2 (stable even when the norm under/overflows)."""
        AR = np.real(self.A)
        bR = np.real(self.b)
        mu = np.linalg.solve(AR, bR)
        l1, l2 = _eig_halfplane(AR.astype(complex))
        return float(2.0 * np.real(self.c) + np.log(np.pi)
                     - 0.5 * np.real(np.log(l1) + np.log(l2)) + bR @ mu)

    def norm(self):
        return float(np.exp(0.5 * self.log_norm_sq()))

    def normalized(self):
        return GaussianState2D(self.A, self.b, self.c - 0.5 * self.log_norm_sq(),
                               hbar=self.hbar)

    def mean_position(self):
        return np.linalg.solve(np.real(self.A), np.real(self.b))

    def covariance_position(self):
        """Covariance matrix of |psi|^2."""
        return 0.5 * np.linalg.inv(np.real(self.A))

    def mean_momentum(self):
        mu = self.mean_position()
        return self.hbar * (np.imag(self.b) - np.imag(self.A) @ mu)

    # -- evaluation ---------------------------------------------------------

    def log_psi(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        A, b = self.A, self.b
        quad = 0.5 * (A[0, 0] * x1 * x1 + 2.0 * A[0, 1] * x1 * x2 + A[1, 1] * x2 * x2)
        return -quad + b[0] * x1 + b[1] * x2 + self.c

    def __call__(self, x1, x2):
        return np.exp(self.log_psi(x1, x2))


def overlap(bra: GaussianState2D, ket: GaussianState2D) -> complex:
    """<bra|ket> = int conj(psi_a) psi_b d^2x, computed in closed form."""
    S = np.conj(bra.A) + ket.A
    _require_posdef_real(S, "the overlap quadratic form")
    v = np.conj(bra.b) + ket.b
    Sinv_v = np.linalg.solve(S, v)
    logI = (np.log(_TWO_PI) - log_sqrt_det(S) + 0.5 * v @ Sinv_v
            + np.conj(bra.c) + ket.c)
    return complex(np.exp(logI))


def fidelity(a: GaussianState2D, b: GaussianState2D) -> float:
    """|<a|b>|^2 for the normalized pair."""
    o = overlap(a, b)
    return float(abs(o) ** 2 * np.exp(-a.log_norm_sq() - b.log_norm_sq()))
