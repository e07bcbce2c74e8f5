"""Time evolution on the periodic box, wave packets, centroid observables.

Convention: one step gathers from the displaced sites,

    psi_y(t+1) = A0 psi_y(t) + sum_h A_h psi_{y+h}(t),

which matches a shift operator acting as T_h|x> = |x-h>.  A scatter loop
(writing to y+h) would silently evolve by the adjoint automaton instead.

Under this convention a plane wave e^{i k.x} picks up the phase of the
momentum operator's eigenvalue e^{i w(k)} each step, so a packet built on
that band drifts at -grad w.  Band selection for packets is therefore by
energy of the effective Hamiltonian i*log A: branch +1 takes the eigenphase
-w(k) (energy +w, velocity +grad w), branch -1 the opposite band.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automaton import TransitionSet, momentum_operator, momentum_operator_grid
from .dirac import DiracTransitionSet, dirac_momentum_operator, dirac_momentum_operator_grid
from .errors import DegenerateBand, DimensionMismatch, InsufficientData
from .lattice import PeriodicLattice, fft_wave_vectors
from .smallmat import unitary_eigensystem, wrap_phase


@dataclass
class FieldState:
    """Complex field on the periodic box: amp[x, y, z, component]."""

    lat: PeriodicLattice
    amp: np.ndarray
    time_step: int = 0

    @property
    def ncomp(self) -> int:
        return self.amp.shape[-1]

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amp) ** 2)))

    def copy(self) -> "FieldState":
        return FieldState(lat=self.lat, amp=self.amp.copy(), time_step=self.time_step)


def _op_parts(op):
    if isinstance(op, TransitionSet):
        return op.a0, op.a_plus, op.a_minus, op.gen
    if isinstance(op, DiracTransitionSet):
        return op.b0, op.b_plus, op.b_minus, op.gen
    raise TypeError(f"unsupported transition set type: {type(op)!r}")


def _check_dims(state: FieldState, op) -> None:
    dim = _op_parts(op)[0].shape[0]
    if state.ncomp != dim:
        raise DimensionMismatch(
            f"field has {state.ncomp} components but the automaton acts on {dim}"
        )


def momentum_operator_of(op, k) -> np.ndarray:
    if isinstance(op, TransitionSet):
        return momentum_operator(op, k)
    return dirac_momentum_operator(op, k)


def evolve_direct(state: FieldState, op) -> FieldState:
    """One stencil step with periodic wrap."""
    _check_dims(state, op)
    center, plus, minus, gen = _op_parts(op)
    amp = state.amp
    new = amp @ center.T
    for j in range(4):
        h = tuple(int(c) for c in gen.h_plus[j])
        neg = tuple(-c for c in h)
        new += np.roll(amp, shift=neg, axis=(0, 1, 2)) @ plus[j].T
        new += np.roll(amp, shift=h, axis=(0, 1, 2)) @ minus[j].T
    return FieldState(lat=state.lat, amp=new, time_step=state.time_step + 1)


def _unitary_matrix_power(mats: np.ndarray, n: int) -> np.ndarray:
    """mats^n for a batch of unitary matrices via eigendecomposition."""
    w, v = np.linalg.eig(mats)
    return np.einsum("...ab,...b,...bc->...ac", v, w**n, np.linalg.inv(v))


def evolve_momentum(state: FieldState, op, steps: int) -> FieldState:
    """`steps` steps at once through the Fourier diagonalisation.

    Each momentum component is multiplied by the momentum operator raised to
    the requested power; the power costs O(1) per wave vector regardless of
    the step count.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    _check_dims(state, op)
    if steps == 0:
        return state.copy()
    L, c = state.lat.L, state.ncomp
    ks = fft_wave_vectors(state.lat)
    if isinstance(op, TransitionSet):
        ops = momentum_operator_grid(op, ks)
    else:
        ops = dirac_momentum_operator_grid(op, ks)
    opsn = _unitary_matrix_power(ops.reshape(-1, c, c), steps)
    phi = np.fft.fftn(state.amp, axes=(0, 1, 2)).reshape(-1, c)
    phi = np.einsum("nab,nb->na", opsn, phi)
    amp = np.fft.ifftn(phi.reshape(L, L, L, c), axes=(0, 1, 2))
    return FieldState(lat=state.lat, amp=amp, time_step=state.time_step + steps)


def trajectory(state: FieldState, op, steps: int) -> list[FieldState]:
    """The state at every step from t to t+steps (inclusive), by stencil."""
    out = [state]
    for _ in range(steps):
        out.append(evolve_direct(out[-1], op))
    return out


BAND_GAP_TOL = 1e-6


def band_spinor(op, k, branch: int = 1, gap_tol: float = BAND_GAP_TOL) -> np.ndarray:
    """Internal-space eigenvector of the momentum operator at k for one band.

    branch +1 returns a vector from the negative-eigenphase band (positive
    energy of i*log A, packets move along +grad w); branch -1 the opposite.
    Raises DegenerateBand when the two bands are closer than gap_tol on the
    phase circle.
    """
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    u = momentum_operator_of(op, k)
    phases, vecs = unitary_eigensystem(u)
    order = np.argsort(phases)  # ascending: negative band first
    half = len(phases) // 2
    lower, upper = order[:half], order[half:]
    gap = min(
        abs(wrap_phase(phases[i] - phases[j])) for i in lower for j in upper
    )
    if gap < gap_tol:
        raise DegenerateBand(
            f"band gap {gap:.2e} below {gap_tol:.1e} at k={np.asarray(k)}"
        )
    idx = lower[0] if branch == 1 else upper[-1]
    return vecs[:, idx].copy()


@dataclass
class WavePacketSpec:
    """Gaussian packet: carrier k0, width sigma, centre x0, band choice.

    spinor_source holds the internal-space vector of the selected band at k0
    (see band_spinor); sigma must satisfy 1 <= sigma <= L/8 so the packet is
    resolvable without wrapping onto itself.
    """

    k0: np.ndarray
    sigma: float
    x0: np.ndarray
    branch: int = 1
    spinor_source: np.ndarray | None = None

    @classmethod
    def for_automaton(cls, op, k0, sigma, x0, branch: int = 1) -> "WavePacketSpec":
        return cls(
            k0=np.asarray(k0, dtype=float),
            sigma=float(sigma),
            x0=np.asarray(x0, dtype=float),
            branch=branch,
            spinor_source=band_spinor(op, k0, branch),
        )


def make_wave_packet(spec: WavePacketSpec, lat: PeriodicLattice, ncomp: int) -> FieldState:
    """Unit-norm Gaussian packet amp(x) = N exp(-|x-x0|^2/(4 sigma^2)) e^{i k0.x} chi."""
    if not 1.0 <= spec.sigma <= lat.L / 8:
        raise ValueError(
            f"sigma must lie in [1, L/8] = [1, {lat.L / 8}], got {spec.sigma}"
        )
    chi = np.asarray(spec.spinor_source, dtype=complex)
    if chi.shape != (ncomp,):
        raise DimensionMismatch(
            f"spinor has shape {chi.shape}, expected ({ncomp},)"
        )
    coords = np.arange(lat.L, dtype=float)
    # minimal-image displacement per axis, e.g. L-1 sits at distance 1 from 0
    disp = [
        np.mod(coords - x0i + lat.L / 2, lat.L) - lat.L / 2 for x0i in spec.x0
    ]
    dx, dy, dz = np.meshgrid(*disp, indexing="ij")
    env = np.exp(-(dx**2 + dy**2 + dz**2) / (4.0 * spec.sigma**2))
    x, y, z = np.meshgrid(coords, coords, coords, indexing="ij")
    phase = np.exp(1j * (spec.k0[0] * x + spec.k0[1] * y + spec.k0[2] * z))
    amp = (env * phase)[..., None] * chi
    amp /= np.sqrt(np.sum(np.abs(amp) ** 2))
    return FieldState(lat=lat, amp=amp)


def centroid(state: FieldState) -> np.ndarray:
    """Probability centroid via circular means, robust to periodic wrap.

    Each marginal density is reduced to its first Fourier mode; the returned
    coordinates lie in [0, L).
    """
    p = np.sum(np.abs(state.amp) ** 2, axis=-1)
    total = p.sum()
    L = state.lat.L
    phase = np.exp(2j * np.pi * np.arange(L) / L)
    out = np.empty(3)
    for axis in range(3):
        marg = p.sum(axis=tuple(a for a in range(3) if a != axis))
        z = np.dot(marg, phase) / total
        out[axis] = (L / (2.0 * np.pi)) * np.angle(z) % L
    return out


def centroid_velocity(states: list[FieldState]) -> np.ndarray:
    """Least-squares slope of the unwrapped centroid versus time step."""
    if len(states) < 3:
        raise InsufficientData(f"need at least 3 states, got {len(states)}")
    L = states[0].lat.L
    times = np.array([s.time_step for s in states], dtype=float)
    cents = np.array([centroid(s) for s in states])
    # unwrap: successive differences folded to (-L/2, L/2], then accumulated
    diffs = np.diff(cents, axis=0)
    diffs = np.mod(diffs + L / 2, L) - L / 2
    unwrapped = np.vstack([cents[0], cents[0] + np.cumsum(diffs, axis=0)])
    return np.array(
        [np.polyfit(times, unwrapped[:, axis], 1)[0] for axis in range(3)]
    )


def trajectory_to_csv(path, states: list[FieldState]) -> None:
    """Write `t,cx,cy,cz,norm` rows for a recorded trajectory."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,cx,cy,cz,norm\n")
        for s in states:
            cx, cy, cz = centroid(s)
            fh.write(f"{s.time_step},{cx:.12e},{cy:.12e},{cz:.12e},{s.norm():.12e}\n")


def density_to_csv(path, state: FieldState) -> None:
    """Write `x,y,z,p` rows of the site probability density."""
    p = np.sum(np.abs(state.amp) ** 2, axis=-1)
    L = state.lat.L
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,y,z,p\n")
        for x in range(L):
            for y in range(L):
                for z in range(L):
                    fh.write(f"{x},{y},{z},{p[x, y, z]:.12e}\n")
