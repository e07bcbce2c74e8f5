"""Four-component automata: one-parameter couplings of two Weyl halves.

Replacing the Pauli vector by gamma_i gamma_0 lifts a two-component solution
to four dimensions; unitarity then admits an on-site coupling i*sqrt(1-s^2)
gamma_0, producing a one-parameter family whose momentum operator is

    [[s A(k),  i r I], [i r I,  s A(k)†]],   r = sqrt(1 - s^2).

Conjugation by gamma_5 flips the sign of the coupling without touching the
spectrum, so s (and r) can be taken nonnegative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .derivation import WeylSolution, weyl_solution
from .errors import InvalidParameter
from .lattice import GeneratingSet, generating_set
from .smallmat import ID4, gamma_set


def mass_parameter(s: float) -> float:
    """r = sqrt(1 - s^2), written as sqrt((1-s)(1+s)) to limit cancellation."""
    return math.sqrt((1.0 - s) * (1.0 + s))


def _gamma_gamma0() -> list[np.ndarray]:
    g0, g1, g2, g3, _ = gamma_set()
    return [g1 @ g0, g2 @ g0, g3 @ g0]


def _vec_gg0(a) -> np.ndarray:
    gg0 = _gamma_gamma0()
    a = np.asarray(a, dtype=complex)
    return a[0] * gg0[0] + a[1] * gg0[1] + a[2] * gg0[2]


@dataclass(frozen=True)
class DiracTransitionSet:
    """Nine 4x4 transition matrices of the coupled family.

    b0 = mass_sign * i * sqrt(1-s^2) * gamma_0;
    b_plus[j] = s*(alpha/2)(I + a_j.(gamma gamma_0)) and b_minus[j] its
    dual-tetrahedron partner with conjugated weight and vectors.
    """

    s: float
    mass_sign: int
    weyl: WeylSolution
    b0: np.ndarray          # (4, 4)
    b_plus: np.ndarray      # (4, 4, 4)
    b_minus: np.ndarray     # (4, 4, 4)
    gen: GeneratingSet = field(default_factory=generating_set)

    @property
    def dim(self) -> int:
        return 4

    @property
    def r(self) -> float:
        return mass_parameter(self.s)


def build_dirac(
    s: float, mass_sign: int = 1, weyl: WeylSolution | None = None
) -> DiracTransitionSet:
    """Assemble the four-component automaton with coupling parameter s."""
    if not 0.0 <= s <= 1.0:
        raise InvalidParameter(f"coupling parameter s must lie in [0, 1], got {s}")
    if mass_sign not in (1, -1):
        raise InvalidParameter("mass_sign must be +1 or -1")
    if weyl is None:
        weyl = weyl_solution()
    g0 = gamma_set()[0]
    cols = weyl.b.entries.T  # (4, 3)
    alpha, beta = weyl.alpha, weyl.beta
    b_plus = np.stack([s * (alpha / 2) * (ID4 + _vec_gg0(a)) for a in cols])
    b_minus = np.stack([s * (beta / 2) * (ID4 - _vec_gg0(a.conj())) for a in cols])
    b0 = mass_sign * 1j * mass_parameter(s) * g0
    return DiracTransitionSet(
        s=s, mass_sign=mass_sign, weyl=weyl, b0=b0, b_plus=b_plus, b_minus=b_minus
    )


def dirac_momentum_operator(dts: DiracTransitionSet, k) -> np.ndarray:
    """B(k) = B0 + sum_j e^{i k.h_j} B_j + e^{-i k.h_j} B_{-j}."""
    kj = dts.gen.h_plus @ np.asarray(k, dtype=float)
    ph = np.exp(1j * kj)
    return dts.b0 + np.tensordot(ph, dts.b_plus, axes=(0, 0)) + np.tensordot(
        np.conj(ph), dts.b_minus, axes=(0, 0)
    )


def dirac_momentum_operator_grid(dts: DiracTransitionSet, ks: np.ndarray) -> np.ndarray:
    """B(k) for a batch of wave vectors; ks has shape (..., 3)."""
    ks = np.asarray(ks, dtype=float)
    kj = ks @ dts.gen.h_plus.T.astype(float)
    ph = np.exp(1j * kj)
    out = np.tensordot(ph, dts.b_plus, axes=(-1, 0))
    out += np.tensordot(np.conj(ph), dts.b_minus, axes=(-1, 0))
    return out + dts.b0


def dirac_closed_spectrum(k, s: float, branch: int = 1) -> tuple[float, float]:
    """Closed-form eigenphase pair (omega, -omega) of the coupled automaton.

    cos(omega) = s * (cos kx cos ky cos kz + branch * sin kx sin ky sin kz);
    each phase carries multiplicity two in the 4x4 spectrum.  The principal
    value omega lies in [0, pi].
    """
    if not 0.0 <= s <= 1.0:
        raise InvalidParameter(f"coupling parameter s must lie in [0, 1], got {s}")
    kx, ky, kz = (float(c) for c in np.asarray(k, dtype=float))
    c = math.cos(kx) * math.cos(ky) * math.cos(kz)
    v = s * (c + branch * math.sin(kx) * math.sin(ky) * math.sin(kz))
    omega = math.acos(min(1.0, max(-1.0, v)))
    return omega, -omega


def gamma5_conjugate(dts: DiracTransitionSet) -> DiracTransitionSet:
    """The automaton with the opposite mass sign.

    Conjugating every transition matrix by gamma_5 flips the sign of the
    on-site coupling and leaves the rest untouched, so the returned set obeys
    g5 B(k, s, +) g5 = B(k, s, -) entrywise.
    """
    return build_dirac(dts.s, -dts.mass_sign, dts.weyl)
