"""Closed-form dispersion, spectrum verification, group velocity, limits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .automaton import TransitionSet, alpha_of, momentum_operator
from .derivation import WeylSolution
from .dirac import (
    build_dirac,
    dirac_closed_spectrum,
    dirac_momentum_operator,
    mass_parameter,
)
from .errors import DegenerateBand, LogBranch
from .smallmat import (
    ID2,
    ID4,
    eigenphases2,
    eigenphases4,
    gamma_set,
    max_abs,
    unitary_eigensystem,
    vec_sigma,
    wrap_phase,
)


def dispersion_value(k, branch: int = 1) -> float:
    """cos w = cos kx cos ky cos kz + branch * sin kx sin ky sin kz."""
    kx, ky, kz = (float(c) for c in np.asarray(k, dtype=float))
    return math.cos(kx) * math.cos(ky) * math.cos(kz) + branch * math.sin(
        kx
    ) * math.sin(ky) * math.sin(kz)


def weyl_dispersion(k, branch: int = 1) -> tuple[float, float]:
    """Closed-form eigenphase pair (w, -w) of the two-component automaton."""
    v = dispersion_value(k, branch)
    w = math.acos(min(1.0, max(-1.0, v)))
    return w, -w


def matched_abs_err(numeric, closed) -> float:
    """Max matched circular distance between two phase multisets.

    Matching is by optimal assignment on the wrapped differences, which stays
    robust where phases collide or sit on the +-pi seam.
    """
    numeric = np.asarray(numeric, dtype=float)
    closed = np.asarray(closed, dtype=float)
    d = np.abs(wrap_phase(numeric[:, None] - closed[None, :]))
    rows, cols = linear_sum_assignment(d)
    return float(d[rows, cols].max())


@dataclass(frozen=True)
class SpectrumSample:
    """Numeric vs closed-form eigenphases at one wave vector."""

    k: np.ndarray
    numeric_phases: np.ndarray
    closed_form_phases: np.ndarray

    @property
    def abs_err(self) -> float:
        return matched_abs_err(self.numeric_phases, self.closed_form_phases)


def _branch_of(op) -> int:
    if isinstance(op, TransitionSet):
        return 1 if alpha_of(op).imag > 0 else -1
    return op.weyl.alpha_branch


def spectrum_sample(op, k, branch: int | None = None) -> SpectrumSample:
    if branch is None:
        branch = _branch_of(op)
    k = np.asarray(k, dtype=float)
    if isinstance(op, TransitionSet):
        numeric = np.array(eigenphases2(momentum_operator(op, k)))
        closed = np.array(weyl_dispersion(k, branch))
    else:
        numeric = eigenphases4(dirac_momentum_operator(op, k))
        w, wm = dirac_closed_spectrum(k, op.s, branch)
        closed = np.array([w, w, wm, wm])
    return SpectrumSample(k=k, numeric_phases=numeric, closed_form_phases=closed)


def verify_dispersion(op, kgrid, branch: int | None = None) -> float:
    """Worst matched error between numeric and closed-form phases on a grid."""
    return max(spectrum_sample(op, k, branch).abs_err for k in kgrid)


def spectrum_samples(op, kgrid, branch: int | None = None) -> list[SpectrumSample]:
    return [spectrum_sample(op, k, branch) for k in kgrid]


def cube_grid(n: int) -> np.ndarray:
    """n^3 uniform wave vectors over [-pi, pi]^3, endpoints included."""
    axis = np.linspace(-np.pi, np.pi, n)
    kx, ky, kz = np.meshgrid(axis, axis, axis, indexing="ij")
    return np.stack([kx, ky, kz], axis=-1).reshape(-1, 3)


def spectrum_to_csv(path, samples: list[SpectrumSample]) -> None:
    """Write `kx,ky,kz,w_num_*,w_cf_plus,w_cf_minus,abs_err` rows."""
    nnum = len(samples[0].numeric_phases)
    header = (
        "kx,ky,kz,"
        + ",".join(f"w_num_{i + 1}" for i in range(nnum))
        + ",w_cf_plus,w_cf_minus,abs_err\n"
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header)
        for s in samples:
            cf = s.closed_form_phases
            fields = (
                [f"{c:.12e}" for c in s.k]
                + [f"{w:.12e}" for w in s.numeric_phases]
                + [f"{cf.max():.12e}", f"{cf.min():.12e}", f"{s.abs_err:.12e}"]
            )
            fh.write(",".join(fields) + "\n")


def group_velocity(band, k, h: float = 1e-4) -> np.ndarray:
    """Central-difference gradient of a scalar band function at k.

    `band` maps a wave vector to a phase in [0, pi].  Values within 1e-6 of a
    band crossing (phase 0 or pi) at any stencil point raise DegenerateBand.
    """
    if not 1e-6 <= h <= 1e-2:
        raise ValueError(f"step h must lie in [1e-6, 1e-2], got {h}")
    k = np.asarray(k, dtype=float)
    out = np.empty(3)
    for axis in range(3):
        e = np.zeros(3)
        e[axis] = h
        wp, wm = band(k + e), band(k - e)
        for w in (wp, wm, band(k)):
            if min(abs(w), abs(np.pi - w)) < 1e-6:
                raise DegenerateBand(
                    f"band touches a crossing near k={k} (phase {w:.2e})"
                )
        out[axis] = (wp - wm) / (2.0 * h)
    return out


def weyl_band(branch: int = 1):
    """The principal dispersion w(k) of one alpha branch, as a callable."""
    return lambda k: weyl_dispersion(k, branch)[0]


def dirac_band(s: float, branch: int = 1):
    """The principal dispersion omega(k) of the coupled family, as a callable."""
    return lambda k: dirac_closed_spectrum(k, s, branch)[0]


@dataclass(frozen=True)
class ConvergenceFit:
    """Residuals against a small-k target over decreasing scales.

    fitted_order is the log-log slope; second order means halving the scale
    divides the residual by four.
    """

    scales: np.ndarray
    residuals: np.ndarray
    fitted_order: float


def _fit(scales, residuals) -> ConvergenceFit:
    scales = np.asarray(scales, dtype=float)
    residuals = np.asarray(residuals, dtype=float)
    if np.any(np.diff(scales) >= 0):
        raise ValueError("scales must be strictly decreasing")
    slope = np.polyfit(np.log(scales), np.log(residuals), 1)[0]
    return ConvergenceFit(scales=scales, residuals=residuals, fitted_order=float(slope))


def continuum_residual(ts: TransitionSet, epsilons, direction) -> ConvergenceFit:
    """Deviation of A(eps*n) from I + i eps n.sigma across scales.

    The deviation is quadratic in eps for the canonical solution, which is
    what makes the automaton reduce to the massless two-component wave
    equation at small wave vectors.
    """
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    res = []
    for eps in epsilons:
        if eps > 0.5:
            raise ValueError(f"scale {eps} exceeds 0.5")
        target = ID2 + 1j * eps * vec_sigma(n)
        res.append(max_abs(momentum_operator(ts, eps * n) - target))
    return _fit(epsilons, res)


def dirac_continuum_residual(
    weyl: WeylSolution, epsilons, direction, r_ratio: float = 0.5
) -> ConvergenceFit:
    """Deviation of B(eps*n, s) from I + i k.(gamma gamma0) + i r gamma0.

    The mass parameter shrinks with the wave vector, r = r_ratio * eps, so
    the residual is jointly second order; holding r fixed would leave an
    O(r^2) floor and hide the scaling.
    """
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    g0, g1, g2, g3, _ = gamma_set()
    gg0 = [g1 @ g0, g2 @ g0, g3 @ g0]
    res = []
    for eps in epsilons:
        if eps > 0.5:
            raise ValueError(f"scale {eps} exceeds 0.5")
        r = r_ratio * eps
        s = math.sqrt((1.0 - r) * (1.0 + r))
        dts = build_dirac(s, 1, weyl)
        kvec = eps * n
        target = (
            ID4
            + 1j * (kvec[0] * gg0[0] + kvec[1] * gg0[1] + kvec[2] * gg0[2])
            + 1j * mass_parameter(s) * g0
        )
        res.append(max_abs(dirac_momentum_operator(dts, kvec) - target))
    return _fit(epsilons, res)


def hamiltonian_limit(ts: TransitionSet):
    """Effective Hamiltonian map k -> i log A(k), principal branch.

    The returned callable reproduces -k.sigma up to a quadratic remainder for
    small wave vectors; it raises LogBranch when an eigenphase reaches the
    cut at +-pi.
    """

    def h_of_k(k) -> np.ndarray:
        phases, vecs = unitary_eigensystem(momentum_operator(ts, k))
        if np.any(np.abs(phases) >= np.pi - 1e-12):
            raise LogBranch(f"eigenphase at the branch cut for k={np.asarray(k)}")
        return (vecs * (-phases)) @ vecs.conj().T

    return h_of_k
