"""Exact-size complex linear algebra: Pauli and gamma bases, eigenphases.

Everything here is 2x2 or 4x4; the matrix norm used throughout the package
is the maximum absolute entry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotUnitary

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA = (SIGMA_X, SIGMA_Y, SIGMA_Z)
ID2 = np.eye(2, dtype=complex)
ID4 = np.eye(4, dtype=complex)

UNITARY_TOL = 1e-10


def max_abs(m) -> float:
    """Max absolute entry of a matrix (the norm used for all residuals)."""
    return float(np.max(np.abs(m)))


def wrap_phase(w):
    """Wrap angles to (-pi, pi]; a tie at -pi maps to +pi."""
    w = np.asarray(w, dtype=float)
    out = np.pi - np.mod(np.pi - w, 2.0 * np.pi)
    return float(out) if out.ndim == 0 else out


def dot3(u, v):
    """Plain (unconjugated) dot product of two complex 3-vectors."""
    return complex(np.dot(np.asarray(u), np.asarray(v)))


def vec_sigma(a) -> np.ndarray:
    """a . sigma for a complex 3-vector a."""
    a = np.asarray(a, dtype=complex)
    return a[0] * SIGMA_X + a[1] * SIGMA_Y + a[2] * SIGMA_Z


@dataclass(frozen=True)
class PauliDecomp:
    """Coefficients of m = a0*I + a . sigma."""

    a0: complex
    a: np.ndarray  # complex, shape (3,)


def pauli_compose(d: PauliDecomp) -> np.ndarray:
    return d.a0 * ID2 + vec_sigma(d.a)


def pauli_decompose(m) -> PauliDecomp:
    """Unique Pauli coefficients; composing them back reproduces m."""
    m = np.asarray(m, dtype=complex)
    a0 = complex(0.5 * np.trace(m))
    a = np.array([0.5 * np.trace(s @ m) for s in SIGMA], dtype=complex)
    return PauliDecomp(a0, a)


def assert_unitary(u, tol: float = UNITARY_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    res = max_abs(u.conj().T @ u - np.eye(u.shape[0]))
    if not res <= tol:
        raise NotUnitary(f"unitarity residual {res:.3e} exceeds {tol:.1e}")
    return u


def eigenphases2(u, tol: float = UNITARY_TOL) -> tuple[float, float]:
    """Eigenphases (w_plus, w_minus) of a 2x2 unitary, w_plus >= w_minus.

    Closed form from trace and determinant: with det u = e^{2i h}, the matrix
    e^{-ih} u lies in SU(2), i.e. cos(phi) I + i sin(phi) n.sigma with n a real
    unit vector, so phi comes out of atan2(|sin phi|, cos phi).  The sine is
    read off the anti-Hermitian part, which keeps the phases accurate even
    where the spectrum is nearly degenerate.  Phases land in (-pi, pi].
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
    assert_unitary(u, tol)
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    half = 0.5 * np.angle(det)
    m = np.exp(-1j * half) * u
    c = float(0.5 * np.trace(m).real)
    anti = 0.5 * (m - m.conj().T)
    s = float(np.sqrt(0.5 * np.sum(np.abs(anti) ** 2)))
    phi = float(np.arctan2(s, c))
    w1 = wrap_phase(half + phi)
    w2 = wrap_phase(half - phi)
    return (max(w1, w2), min(w1, w2))


def eigenphases4(u, tol: float = UNITARY_TOL) -> np.ndarray:
    """Eigenphases of a 4x4 unitary, descending, in (-pi, pi]."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {u.shape}")
    assert_unitary(u, tol)
    lam = np.linalg.eigvals(u)
    return np.sort(wrap_phase(np.angle(lam)))[::-1]


def unitary_eigensystem(u, tol: float = UNITARY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """(phases, vectors) of a unitary matrix; vectors[:, i] goes with phases[i].

    Uses a complex Schur decomposition, whose basis stays orthonormal at
    degeneracies (a unitary matrix is normal, so the Schur form is diagonal).
    """
    u = assert_unitary(u, tol)
    t, z = scipy.linalg.schur(u, output="complex")
    phases = wrap_phase(np.angle(np.diag(t)))
    return phases, z


def gamma_set() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Chiral-representation gamma matrices (g0, g1, g2, g3, g5).

    g0 swaps the two 2-component blocks, gi couples them through sigma_i with
    opposite signs, and g5 = i g0 g1 g2 g3 anti-commutes with all four.
    """
    z = np.zeros((2, 2), dtype=complex)
    g0 = np.block([[z, ID2], [ID2, z]])
    g1, g2, g3 = (np.block([[z, s], [-s, z]]) for s in SIGMA)
    g5 = 1j * (g0 @ g1 @ g2 @ g3)
    return g0, g1, g2, g3, g5
