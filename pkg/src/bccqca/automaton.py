"""Momentum-space walk operator and the unitarity / covariance verifier.

A candidate automaton is a set of nine 2x2 transition matrices: one for the
cell centre and one per BCC neighbour.  Unitarity of the walk at every wave
vector is equivalent to a finite family of matrix identities, grouped by the
integer difference of the two displacement vectors entering each product.
The verifier checks the complete family, not just a sufficient subset.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import GeneratingSet, generating_set
from .smallmat import SIGMA, max_abs


@dataclass(frozen=True)
class TransitionSet:
    """Nine 2x2 transition matrices of a two-component automaton candidate.

    a_plus[j] weighs the neighbour at h_plus[j], a_minus[j] the one at
    -h_plus[j], and a0 the cell itself.
    """

    a0: np.ndarray          # (2, 2)
    a_plus: np.ndarray      # (4, 2, 2)
    a_minus: np.ndarray     # (4, 2, 2)
    gen: GeneratingSet = field(default_factory=generating_set)
    label: str = ""

    @property
    def dim(self) -> int:
        return self.a0.shape[0]


def alpha_of(ts: TransitionSet) -> complex:
    """Common half-trace of the tetrahedron transition matrices."""
    return complex(np.trace(ts.a_plus[0]))


def momentum_operator(ts: TransitionSet, k) -> np.ndarray:
    """A(k) = A0 + sum_j e^{i k.h_j} A_j + e^{-i k.h_j} A_{-j}."""
    kj = ts.gen.h_plus @ np.asarray(k, dtype=float)
    ph = np.exp(1j * kj)
    return ts.a0 + np.tensordot(ph, ts.a_plus, axes=(0, 0)) + np.tensordot(
        np.conj(ph), ts.a_minus, axes=(0, 0)
    )


def momentum_operator_grid(ts: TransitionSet, ks: np.ndarray) -> np.ndarray:
    """A(k) for a batch of wave vectors; ks has shape (..., 3)."""
    ks = np.asarray(ks, dtype=float)
    kj = ks @ ts.gen.h_plus.T.astype(float)          # (..., 4)
    ph = np.exp(1j * kj)
    out = np.tensordot(ph, ts.a_plus, axes=(-1, 0))
    out += np.tensordot(np.conj(ph), ts.a_minus, axes=(-1, 0))
    return out + ts.a0


def check_c0(ts: TransitionSet) -> float:
    """Residual of: centre matrix plus all neighbour matrices equals I."""
    total = ts.a0 + ts.a_plus.sum(axis=0) + ts.a_minus.sum(axis=0)
    return max_abs(total - np.eye(ts.dim))


@dataclass(frozen=True)
class ConstraintReport:
    """Labelled residuals of the constraint suite against a single tolerance."""

    residuals: dict[str, float]
    tol: float

    @property
    def passed(self) -> bool:
        return all(r <= self.tol for r in self.residuals.values())

    def json_entries(self) -> list[dict]:
        return [
            {"constraint": name, "residual": res, "tol": self.tol, "pass": res <= self.tol}
            for name, res in self.residuals.items()
        ]


def _indexed_matrices(ts: TransitionSet) -> list[tuple[tuple[int, int, int], np.ndarray]]:
    out = [((0, 0, 0), ts.a0)]
    for j in range(4):
        out.append((tuple(int(c) for c in ts.gen.h_plus[j]), ts.a_plus[j]))
        out.append((tuple(int(c) for c in ts.gen.h_minus[j]), ts.a_minus[j]))
    return out


def check_unitarity_groups(ts: TransitionSet, tol: float = 1e-12) -> ConstraintReport:
    """Residuals of every phase-group identity implied by unitarity.

    All 81 ordered pairs of transition matrices are grouped by the difference
    of their displacement vectors, for both product orders (M'† M and M' M†).
    The zero-difference groups must sum to the identity, every other group to
    zero.  The six named two-term identities (C1a..C3b) are reported as well.
    """
    mats = _indexed_matrices(ts)
    eye = np.eye(ts.dim)
    groups: dict[tuple[str, tuple[int, int, int]], np.ndarray] = {}
    for h1, m1 in mats:
        for h2, m2 in mats:
            diff = (h2[0] - h1[0], h2[1] - h1[1], h2[2] - h1[2])
            for kind, prod in (
                ("AdagA", m1.conj().T @ m2),
                ("AAdag", m1 @ m2.conj().T),
            ):
                key = (kind, diff)
                groups[key] = groups.get(key, 0) + prod

    residuals: dict[str, float] = {}
    for (kind, diff), total in sorted(groups.items()):
        target = eye if diff == (0, 0, 0) else 0
        residuals[f"{kind}{diff}"] = max_abs(total - target)

    ap, am, a0 = ts.a_plus, ts.a_minus, ts.a0
    dag = lambda m: m.conj().T
    residuals["C1a"] = max(max_abs(ap[j] @ dag(am[j])) for j in range(4))
    residuals["C1b"] = max(max_abs(dag(ap[j]) @ am[j]) for j in range(4))
    residuals["C2a"] = max(
        max_abs(ap[i] @ dag(ap[j]) + am[j] @ dag(am[i]))
        for i in range(4)
        for j in range(4)
        if i != j
    )
    residuals["C2b"] = max(
        max_abs(dag(ap[i]) @ ap[j] + dag(am[j]) @ am[i])
        for i in range(4)
        for j in range(4)
        if i != j
    )
    residuals["C3a"] = max(max_abs(a0 @ dag(ap[j]) + am[j] @ dag(a0)) for j in range(4))
    residuals["C3b"] = max(max_abs(dag(a0) @ ap[j] + dag(am[j]) @ a0) for j in range(4))
    return ConstraintReport(residuals=residuals, tol=tol)


@dataclass(frozen=True)
class IsotropyElement:
    """A pi rotation about a coordinate axis with its action on the automaton.

    perm[j] is the tetrahedron index that vector j lands on; u is the 2x2
    unitary conjugating the transition matrices.
    """

    axis: str
    perm: tuple[int, int, int, int]
    u: np.ndarray


def isotropy_table() -> list[IsotropyElement]:
    """Pi rotations about x, y, z with conjugators sigma_x, sigma_y, sigma_z.

    The index permutations are computed from the geometry: each rotation
    flips the signs of the other two coordinates, permuting the tetrahedron.
    """
    gen = generating_set()
    rots = {
        "x": np.diag([1, -1, -1]),
        "y": np.diag([-1, 1, -1]),
        "z": np.diag([-1, -1, 1]),
    }
    table = []
    for (axis, rot), u in zip(rots.items(), SIGMA):
        perm = []
        for j in range(4):
            image = rot @ gen.h_plus[j]
            matches = np.flatnonzero((gen.h_plus == image).all(axis=1))
            perm.append(int(matches[0]))
        table.append(IsotropyElement(axis=axis, perm=tuple(perm), u=u))
    return table


def check_isotropy(ts: TransitionSet, table: list[IsotropyElement] | None = None) -> float:
    """Max residual of A_{l(+-j)} = U_l A_{+-j} U_l† over the rotation table."""
    if table is None:
        table = isotropy_table()
    worst = 0.0
    for el in table:
        u, ud = el.u, el.u.conj().T
        worst = max(worst, max_abs(ts.a0 - u @ ts.a0 @ ud))
        for j in range(4):
            worst = max(worst, max_abs(ts.a_plus[el.perm[j]] - u @ ts.a_plus[j] @ ud))
            worst = max(worst, max_abs(ts.a_minus[el.perm[j]] - u @ ts.a_minus[j] @ ud))
    return worst


def unitarity_sample(ts: TransitionSet, n: int = 1000, rng: np.random.Generator | None = None) -> float:
    """Worst ||A(k)†A(k) - I|| over n uniform wave vectors in [-pi, pi)^3."""
    rng = rng or np.random.default_rng(0)
    ks = rng.uniform(-np.pi, np.pi, size=(n, 3))
    ops = momentum_operator_grid(ts, ks)
    eye = np.eye(ts.dim)
    prods = np.einsum("nba,nbc->nac", ops.conj(), ops)
    return float(np.max(np.abs(prods - eye)))
