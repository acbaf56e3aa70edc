"""Symmetric eigendecomposition, eigenvalue clustering and spectral idempotents."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import ConvergenceError, DimensionError, SymmetryError
from .graphs import Graph, HamiltonianKind, hamiltonian

SYMMETRY_TOL = 1e-12
DEFAULT_TOL_CLUSTER = 1e-8


def _check_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    asym = np.max(np.abs(m - m.T)) if m.size else 0.0
    if asym > SYMMETRY_TOL:
        raise SymmetryError(f"matrix is not symmetric (max |m - m^T| = {asym:.3e})")
    return m


def jacobi_eigh(m, tol: float = 1e-15, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations; slow but independent of LAPACK."""
    a = _check_symmetric(m).copy()
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * ap - s * aq, s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * ap - s * aq, s * ap + c * aq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
    else:
        raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def sym_eigendecomposition(m, method: str = "lapack") -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns) of a symmetric matrix."""
    if method == "jacobi":
        return jacobi_eigh(m)
    m = _check_symmetric(m)
    try:
        return np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc


def cluster_eigenvalues(values: Sequence[float], tol_cluster: float = DEFAULT_TOL_CLUSTER) -> list[list[int]]:
    """Chain consecutive ascending values closer than ``tol_cluster * max(1, range)``."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    thresh = tol_cluster * max(1.0, float(values[-1] - values[0]))
    groups = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] <= thresh:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues ``thetas`` (ascending) with their idempotents."""

    kind: HamiltonianKind | None
    thetas: np.ndarray
    idempotents: tuple[np.ndarray, ...]
    mults: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.idempotents[0].shape[0]

    @property
    def d(self) -> int:
        """Number of distinct eigenvalues."""
        return len(self.thetas)

    def __iter__(self):
        return iter(zip(self.thetas, self.idempotents))

    def reconstruct(self) -> np.ndarray:
        return sum(t * e for t, e in self)

    def min_gap(self) -> float:
        return float(np.min(np.diff(self.thetas))) if self.d > 1 else float("inf")


def decompose(b, kind: HamiltonianKind | None = None, tol_cluster: float = DEFAULT_TOL_CLUSTER,
              method: str = "lapack") -> SpectralDecomposition:
    w, v = sym_eigendecomposition(b, method=method)
    thetas, idems, mults = [], [], []
    for group in cluster_eigenvalues(w, tol_cluster):
        vecs = v[:, group]
        thetas.append(float(np.mean(w[group])))
        idems.append(vecs @ vecs.T)
        mults.append(len(group))
    return SpectralDecomposition(kind, np.array(thetas), tuple(idems), tuple(mults))


def spectral_decomposition(g: Graph, kind: HamiltonianKind | str = HamiltonianKind.ADJACENCY,
                           tol_cluster: float = DEFAULT_TOL_CLUSTER) -> SpectralDecomposition:
    kind = HamiltonianKind.parse(kind)
    return decompose(hamiltonian(g, kind), kind, tol_cluster)


@dataclass(frozen=True)
class ValidationReport:
    idempotency: float
    orthogonality: float
    resolution: float
    reconstruction: float
    rank_mismatch: int
    min_gap: float
    eps: float

    @property
    def passed(self) -> bool:
        return (self.idempotency <= self.eps and self.orthogonality <= self.eps
                and self.resolution <= self.eps and self.reconstruction <= self.eps
                and self.rank_mismatch == 0)

    @property
    def worst(self) -> float:
        return max(self.idempotency, self.orthogonality, self.resolution, self.reconstruction)


def validate_decomposition(d: SpectralDecomposition, b, eps: float = 1e-8) -> ValidationReport:
    b = np.asarray(b, dtype=float)
    if b.shape != (d.n, d.n):
        raise DimensionError(f"decomposition has order {d.n}, matrix has shape {b.shape}")
    idem = max(np.max(np.abs(e @ e - e)) for e in d.idempotents)
    orth = 0.0
    for r, er in enumerate(d.idempotents):
        for s in range(r + 1, len(d.idempotents)):
            orth = max(orth, float(np.max(np.abs(er @ d.idempotents[s]))))
    res = float(np.max(np.abs(sum(d.idempotents) - np.eye(d.n))))
    radius = max(1.0, float(np.max(np.abs(d.thetas)))) if d.d else 1.0
    rec = float(np.max(np.abs(d.reconstruct() - b))) / radius
    ranks = sum(int(round(np.trace(e))) != m for e, m in zip(d.idempotents, d.mults))
    return ValidationReport(float(idem), orth, res, rec, ranks, d.min_gap(), eps)


Projectors = Union[SpectralDecomposition, Sequence[np.ndarray]]


def _projectors(x: Projectors) -> Sequence[np.ndarray]:
    return x.idempotents if isinstance(x, SpectralDecomposition) else x


def refines(fine: Projectors, coarse: Projectors, eps: float = 1e-8) -> bool:
    """True when every fine eigenspace lies inside or orthogonal to every coarse one.

    Equivalently each coarse idempotent is a sum of fine ones. Plain
    sequences of projectors are accepted too (e.g. tensor-product pieces).
    """
    fine, coarse = _projectors(fine), _projectors(coarse)
    if fine[0].shape != coarse[0].shape:
        raise DimensionError(f"orders differ: {fine[0].shape} vs {coarse[0].shape}")
    for e in fine:
        for f in coarse:
            fe = f @ e
            if min(np.max(np.abs(fe - e)), np.max(np.abs(fe))) > eps:
                return False
    return True


def kron_projectors(d1: SpectralDecomposition, d2: SpectralDecomposition) -> list[np.ndarray]:
    """All ``E_r (x) F_s``; the eigenspaces of a product graph are sums of these."""
    return [np.kron(e, f) for e in d1.idempotents for f in d2.idempotents]
