"""Body-centred cubic geometry: generating set, Brillouin zone, periodic box.

The eight nearest neighbours of a BCC site sit at (+-1, +-1, +-1); four of
them form a regular tetrahedron and the other four its dual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GeneratingSet:
    """Tetrahedron vertices h_plus (4x3 int) and their negatives h_minus."""

    h_plus: np.ndarray
    h_minus: np.ndarray


def generating_set() -> GeneratingSet:
    """The eight BCC displacement vectors, tetrahedron first."""
    h = np.array(
        [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=int
    )
    return GeneratingSet(h_plus=h, h_minus=-h)


@dataclass(frozen=True)
class PeriodicLattice:
    """Cubic box of side L with periodic wrap.

    L must be even (and at least 4) so that shifts by (+-1, +-1, +-1) keep the
    two coordinate-parity sublattices intact under the wrap.
    """

    L: int

    def __post_init__(self):
        if self.L % 2 != 0 or self.L < 4:
            raise ValueError(f"lattice side must be even and >= 4, got {self.L}")

    def wrap(self, x):
        return np.mod(np.asarray(x), self.L)

    @property
    def n_sites(self) -> int:
        return self.L**3


def in_brillouin_zone(k) -> bool:
    """Rhombic-dodecahedron membership, boundaries inclusive.

    True iff every pairwise sum |ki| + |kj| over distinct axes is <= pi,
    which is equivalent to -pi <= +-ki +- kj <= pi for all sign choices.
    """
    kx, ky, kz = (abs(float(c)) for c in np.asarray(k, dtype=float))
    return bool(kx + ky <= np.pi and kx + kz <= np.pi and ky + kz <= np.pi)


def momentum_grid(lat: PeriodicLattice) -> np.ndarray:
    """All L^3 wave vectors 2*pi*n/L, n in {-L/2+1, ..., L/2} per axis.

    These are the exact diagonalization frequencies of the periodic shift
    operators.  Shape (L^3, 3).
    """
    n = np.arange(-lat.L // 2 + 1, lat.L // 2 + 1)
    nx, ny, nz = np.meshgrid(n, n, n, indexing="ij")
    return (2.0 * np.pi / lat.L) * np.stack([nx, ny, nz], axis=-1).reshape(-1, 3).astype(float)


def fft_wave_vectors(lat: PeriodicLattice) -> np.ndarray:
    """Wave vectors in numpy FFT layout, shape (L, L, L, 3).

    Equivalent to momentum_grid modulo 2*pi per component; this ordering
    matches the axes of numpy.fft.fftn applied to a field on the box.
    """
    f = 2.0 * np.pi * np.fft.fftfreq(lat.L)
    kx, ky, kz = np.meshgrid(f, f, f, indexing="ij")
    return np.stack([kx, ky, kz], axis=-1)
