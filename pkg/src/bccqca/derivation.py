"""Finite re-derivation of the admissible two-component automata.

The chain of results reproduced here as computation: the two Gram matrices of
the four transition-matrix vectors, the two-unknown search that admits exactly
three plain Gram matrices, the six column matrices obtained by putting a
factor +-i on one axis of the tetrahedron, and the twelve assembled automata
that fall into two spectral equivalence classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .automaton import TransitionSet, momentum_operator
from .errors import DegenerateProbe
from .lattice import generating_set
from .smallmat import ID2, eigenphases2, vec_sigma

#: Wave vectors whose eigenphases separate the two solution classes.
PROBE_KS = np.array(
    [[np.pi / 4, np.pi / 4, np.pi / 4], [np.pi / 3, np.pi / 5, np.pi / 7]]
)
FINGERPRINT_TOL = 1e-9


def tetrahedron_matrix() -> np.ndarray:
    """3x4 integer matrix whose columns are the tetrahedron vertices."""
    return generating_set().h_plus.T.copy()


def tetrahedron_gram() -> np.ndarray:
    """Gram matrix of the tetrahedron: 3 on the diagonal, -1 elsewhere."""
    return 4 * np.eye(4, dtype=int) - np.ones((4, 4), dtype=int)


def rotation4() -> np.ndarray:
    """Orthogonal 4x4 built from an all-ones row over the tetrahedron rows.

    Diagonalises every Gram matrix produced by the search below.
    """
    return 0.5 * np.vstack([np.ones(4), tetrahedron_matrix()])


def gram_pair(vectors) -> tuple[np.ndarray, np.ndarray]:
    """Plain and conjugated Gram matrices of four complex 3-vectors.

    Returns (GR, GC) with GR_jk = v_j . v_k (no conjugation) and
    GC_jk = conj(v_j) . v_k; only GC is positive semi-definite.
    """
    v = np.asarray(vectors, dtype=complex)
    if v.shape != (4, 3):
        raise ValueError(f"expected four 3-vectors, got shape {v.shape}")
    return v @ v.T, v.conj() @ v.T


def gram_from_xy(x: float, y: float) -> np.ndarray:
    """Plain Gram matrix with unit diagonal and vanishing row sums.

    The row-sum constraint leaves two free off-diagonal values x and y; the
    third one is forced to -1-x-y.
    """
    w = -1.0 - x - y
    return np.array(
        [[1, x, w, y], [x, 1, y, w], [w, y, 1, x], [y, w, x, 1]], dtype=float
    )


def enumerate_gr_solutions() -> list[tuple[int, int, np.ndarray]]:
    """The finite search for admissible plain Gram matrices.

    Unitarity forces |1+x| = |1+y| = |x+y| = 2 with real entries, so x and y
    range over {1, -3} filtered by |x+y| = 2.  Exactly three pairs survive:
    (1,-3), (1,1), (-3,1).  Under rotation4 each survivor diagonalises to
    diag(0, 2(1+x), -2(x+y), 2(1+y)).
    """
    out = []
    for x, y in product((1, -3), (-3, 1)):
        if abs(x + y) == 2:
            out.append((x, y, gram_from_xy(x, y)))
    return out


@dataclass(frozen=True)
class BMatrix:
    """3x4 matrix whose columns are the candidate spin vectors.

    entries = D T with T the tetrahedron matrix and D the identity carrying
    sign*i in one diagonal slot; family 1, 2, 3 marks the z, y, x axis.
    """

    entries: np.ndarray
    family: int
    sign: int

    @property
    def name(self) -> str:
        return f"B{self.family}{'+' if self.sign > 0 else '-'}"


def build_b_matrices() -> list[BMatrix]:
    """The six admissible column matrices; members of a family conjugate pair."""
    t = tetrahedron_matrix().astype(complex)
    out = []
    for family in (1, 2, 3):
        for sign in (1, -1):
            d = np.eye(3, dtype=complex)
            d[3 - family, 3 - family] = sign * 1j
            out.append(BMatrix(entries=d @ t, family=family, sign=sign))
    return out


def b_matrix(family: int, sign: int) -> BMatrix:
    for b in build_b_matrices():
        if b.family == family and b.sign == sign:
            return b
    raise ValueError(f"no B matrix with family={family}, sign={sign}")


@dataclass(frozen=True)
class WeylSolution:
    """A column matrix together with the weight alpha = (1 +- i)/4.

    The partner weight for the dual tetrahedron is beta = conj(alpha); the
    two satisfy alpha + beta = 1/2 and |alpha|^2 = 1/8 exactly.
    """

    b: BMatrix
    alpha: complex

    @property
    def beta(self) -> complex:
        return self.alpha.conjugate()

    @property
    def alpha_branch(self) -> int:
        return 1 if self.alpha.imag > 0 else -1

    @property
    def name(self) -> str:
        return f"{self.b.name} a{'+' if self.alpha_branch > 0 else '-'}"


def weyl_solution(family: int = 1, sign: int = -1, alpha_branch: int = 1) -> WeylSolution:
    """Pick one of the twelve solutions; defaults to the canonical one."""
    if alpha_branch not in (1, -1):
        raise ValueError("alpha_branch must be +1 or -1")
    return WeylSolution(b=b_matrix(family, sign), alpha=(1 + 1j * alpha_branch) / 4)


def transition_set(sol: WeylSolution) -> TransitionSet:
    """Assemble the nine transition matrices of a solution.

    A_j = (alpha/2)(I + a_j.sigma), A_{-j} = (beta/2)(I - conj(a_j).sigma),
    centre matrix zero, with a_j the columns of the solution's B matrix.
    """
    cols = sol.b.entries.T  # (4, 3)
    a_plus = np.stack([(sol.alpha / 2) * (ID2 + vec_sigma(a)) for a in cols])
    a_minus = np.stack([(sol.beta / 2) * (ID2 - vec_sigma(a.conj())) for a in cols])
    return TransitionSet(
        a0=np.zeros((2, 2), dtype=complex),
        a_plus=a_plus,
        a_minus=a_minus,
        label=sol.name,
    )


def build_weyl_solution(family: int = 1, sign: int = -1, alpha_branch: int = 1) -> TransitionSet:
    return transition_set(weyl_solution(family, sign, alpha_branch))


def all_weyl_solutions() -> list[TransitionSet]:
    """The twelve automata: six B matrices times two alpha branches."""
    out = []
    for b in build_b_matrices():
        for branch in (1, -1):
            out.append(transition_set(WeylSolution(b=b, alpha=(1 + 1j * branch) / 4)))
    return out


def spectral_fingerprint(ts: TransitionSet, probes: np.ndarray = PROBE_KS) -> np.ndarray:
    """Concatenated eigenphases of A(k) at the probe wave vectors."""
    return np.concatenate([eigenphases2(momentum_operator(ts, k)) for k in probes])


def adjoint_reflected_fingerprint(ts: TransitionSet, probes: np.ndarray = PROBE_KS) -> np.ndarray:
    """Fingerprint of the partner automaton A(-k)† at the same probes."""
    return np.concatenate(
        [eigenphases2(momentum_operator(ts, -np.asarray(k)).conj().T) for k in probes]
    )


def classify_equivalence(
    solutions: list[TransitionSet], probes: np.ndarray = PROBE_KS
) -> list[list[int]]:
    """Partition automata by spectral fingerprint into equivalence classes.

    Returns index lists into `solutions`.  Exactly two classes must appear;
    anything else means the probe set failed to separate the spectra.
    """
    classes: list[list[int]] = []
    reps: list[np.ndarray] = []
    for i, ts in enumerate(solutions):
        fp = spectral_fingerprint(ts, probes)
        for members, rep in zip(classes, reps):
            if np.max(np.abs(fp - rep)) <= FINGERPRINT_TOL:
                members.append(i)
                break
        else:
            classes.append([i])
            reps.append(fp)
    if len(classes) != 2:
        raise DegenerateProbe(
            f"probe set separated {len(classes)} classes instead of 2"
        )
    return classes
