"""Average mixing matrices of continuous quantum walks and the identities around them.

The average mixing matrix of a Hamiltonian ``B = sum_r theta_r E_r`` is
``sum_r E_r o E_r`` (``o`` the entrywise product). Everything here works
from a :class:`~avgmix.spectral.SpectralDecomposition`, so the eigensolver
is called once per graph and Hamiltonian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, KindError, PreconditionError
from .graphs import (Graph, HamiltonianKind, complement, connected_components,
                     VertexPartition)
from .spectral import (DEFAULT_TOL_CLUSTER, SpectralDecomposition,
                       spectral_decomposition)

ROW_SUM_TOL = 1e-9
DEFAULT_EPS = 1e-8


@dataclass(frozen=True)
class AverageMixingMatrix:
    kind: HamiltonianKind | None
    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def properties(self, eps: float = DEFAULT_EPS) -> "PropertyReport":
        return matrix_properties(self.matrix, eps)


def average_mixing_matrix(d: SpectralDecomposition) -> AverageMixingMatrix:
    m = sum(e * e for e in d.idempotents)
    return AverageMixingMatrix(d.kind, m)


def amm(g: Graph, kind: HamiltonianKind | str = HamiltonianKind.ADJACENCY,
        tol_cluster: float = DEFAULT_TOL_CLUSTER) -> AverageMixingMatrix:
    """Shortcut: decompose ``g`` and return its average mixing matrix."""
    return average_mixing_matrix(spectral_decomposition(g, kind, tol_cluster))


def trace_amm(m: AverageMixingMatrix | np.ndarray) -> float:
    mat = m.matrix if isinstance(m, AverageMixingMatrix) else np.asarray(m)
    return float(np.trace(mat))


# --------------------------------------------------------------------------- time evolution


def transition_matrix(d: SpectralDecomposition, t: float) -> np.ndarray:
    """``U(t) = exp(itB)`` by spectral synthesis."""
    return sum(np.exp(1j * theta * t) * e for theta, e in d)


def mixing_matrix_at(d: SpectralDecomposition, t: float) -> np.ndarray:
    u = transition_matrix(d, t)
    return (u * u.conj()).real


def cesaro_average(d: SpectralDecomposition, T: float) -> np.ndarray:
    """Exact ``(1/T) * integral_0^T M(t) dt``.

    Each cross term ``E_r o E_s`` carries ``(e^{ix} - 1) / (ix)`` with
    ``x = (theta_r - theta_s) T``; the ``(r, s)`` and ``(s, r)`` terms
    combine to the real weight ``2 sin(x) / x``.
    """
    if not T > 0:
        raise DomainError(f"averaging window must be positive, got T={T}")
    idems = d.idempotents
    out = sum(e * e for e in idems)
    for r in range(len(idems)):
        for s in range(r + 1, len(idems)):
            x = (d.thetas[r] - d.thetas[s]) * T
            out = out + (2.0 * np.sin(x) / x) * (idems[r] * idems[s])
    return out


def cesaro_error_bound(d: SpectralDecomposition, T: float) -> float:
    """``2 d^2 max_r |E_r|_max^2 / (delta T)``; bounds ``|cesaro_average - M|_max``."""
    if d.d < 2:
        return 0.0
    emax = max(float(np.max(np.abs(e))) for e in d.idempotents)
    return 2.0 * d.d ** 2 * emax ** 2 / (d.min_gap() * T)


# --------------------------------------------------------------------------- matrix predicates


@dataclass(frozen=True)
class PropertyReport:
    symmetric: bool
    doubly_stochastic: bool
    psd: bool
    constant_diagonal: bool
    min_eigenvalue: float
    max_row_sum_dev: float
    diag_spread: float
    min_entry: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def matrix_properties(m, eps: float = DEFAULT_EPS) -> PropertyReport:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    sym = float(np.max(np.abs(m - m.T))) <= eps
    row_dev = float(max(np.max(np.abs(m.sum(axis=1) - 1)), np.max(np.abs(m.sum(axis=0) - 1))))
    min_entry = float(m.min())
    ev = np.linalg.eigvalsh((m + m.T) / 2)
    scale = max(1.0, float(np.max(np.abs(ev))))
    diag = np.diag(m)
    spread = float(diag.max() - diag.min())
    return PropertyReport(
        symmetric=sym,
        doubly_stochastic=row_dev <= eps and min_entry >= -eps,
        psd=float(ev[0]) >= -eps * scale,
        constant_diagonal=spread <= eps,
        min_eigenvalue=float(ev[0]),
        max_row_sum_dev=row_dev,
        diag_spread=spread,
        min_entry=min_entry,
    )


def has_constant_diagonal(m, eps: float = DEFAULT_EPS) -> bool:
    diag = np.diag(np.asarray(m))
    return float(diag.max() - diag.min()) <= eps


def psd_order(m1, m2, eps: float = DEFAULT_EPS) -> bool:
    """True when ``m1 - m2`` is positive semidefinite (to a relative ``eps``)."""
    m1, m2 = np.asarray(m1, dtype=float), np.asarray(m2, dtype=float)
    if m1.shape != m2.shape:
        raise DimensionError(f"shapes differ: {m1.shape} vs {m2.shape}")
    diff = m1 - m2
    ev = np.linalg.eigvalsh((diff + diff.T) / 2)
    return float(ev[0]) >= -eps * max(1.0, float(np.max(np.abs(ev))))


def constant_diagonal_gram_check(m, eps: float = DEFAULT_EPS) -> bool:
    """Diagonal dominance of a constant-diagonal PSD matrix, and equal columns at ties."""
    m = np.asarray(m, dtype=float)
    props = matrix_properties(m, eps)
    if not (props.symmetric and props.psd and props.constant_diagonal):
        raise PreconditionError("matrix must be symmetric PSD with constant diagonal")
    diag = np.diag(m)
    for u in range(m.shape[0]):
        for v in range(m.shape[0]):
            if m[u, v] > diag[u] + eps:
                return False
            if abs(diag[u] - m[u, v]) <= eps and np.max(np.abs(m[:, u] - m[:, v])) > 10 * eps:
                return False
    return True


# --------------------------------------------------------------------------- closed forms


def kn_amm(n: int, kind: HamiltonianKind | str = HamiltonianKind.ADJACENCY) -> np.ndarray:
    """``(1 - 2/n) I + (2/n^2) J``; the same for both Hamiltonians of ``K_n``."""
    HamiltonianKind.parse(kind)
    if n < 1:
        raise DomainError("n must be positive")
    return (1 - 2 / n) * np.eye(n) + (2 / n ** 2) * np.ones((n, n))


def kn_trace(n: int, kind: HamiltonianKind | str = HamiltonianKind.ADJACENCY) -> float:
    HamiltonianKind.parse(kind)
    return (n * n - 2 * n + 2) / n


def _component_blocks(n: int, comps: list[list[int]], power: int) -> np.ndarray:
    b = np.zeros((n, n))
    for c in comps:
        b[np.ix_(c, c)] = 1.0 / len(c) ** power
    return b


def amm_complement_laplacian(g: Graph, tol_cluster: float = DEFAULT_TOL_CLUSTER) -> np.ndarray:
    """Laplacian average mixing matrix of the complement, from that of ``g``.

    For connected ``g`` whose complement has components ``C_1..C_c``, the
    eigenvalue ``n`` idempotent ``E_n`` of ``L(g)`` merges with ``J/n`` into
    ``P = sum_i J_{C_i} / |C_i|`` in the complement, so

        M_L(comp g) = M_L(g) + 2 (J/n) o E_n = M_L(g) + (2/n) P - (2/n^2) J.
    """
    if not g.is_connected():
        raise PreconditionError("complement identity needs a connected graph")
    n = g.n
    base = average_mixing_matrix(spectral_decomposition(g, HamiltonianKind.LAPLACIAN, tol_cluster)).matrix
    comps = connected_components(complement(g))
    return base + (2.0 / n) * _component_blocks(n, comps, 1) - (2.0 / n ** 2) * np.ones((n, n))


def amm_complement_laplacian_naive(g: Graph, tol_cluster: float = DEFAULT_TOL_CLUSTER) -> np.ndarray:
    """``M_L(g) - J/n^2 + sum_i J_{C_i} / |C_i|^2``, i.e. ``M_L(g) - E_0 o E_0 + P o P``.

    Kept for comparison only. Swapping ``E_0`` for ``P`` without also removing
    ``E_n o E_n`` overcounts, so this agrees with :func:`amm_complement_laplacian`
    only when the complement is connected (``E_n = 0``).
    """
    if not g.is_connected():
        raise PreconditionError("complement identity needs a connected graph")
    n = g.n
    base = average_mixing_matrix(spectral_decomposition(g, HamiltonianKind.LAPLACIAN, tol_cluster)).matrix
    comps = connected_components(complement(g))
    return base - np.ones((n, n)) / n ** 2 + _component_blocks(n, comps, 2)


def trace_complement_laplacian(g: Graph, tol_cluster: float = DEFAULT_TOL_CLUSTER) -> float:
    """``tr M_L(comp g) = tr M_L(g) + 2 (c - 1) / n`` for connected ``g``; ``c`` = complement components."""
    if not g.is_connected():
        raise PreconditionError("complement identity needs a connected graph")
    base = amm(g, HamiltonianKind.LAPLACIAN, tol_cluster).trace
    c = len(connected_components(complement(g)))
    return base + 2.0 * (c - 1) / g.n


def trace_complement_laplacian_naive(g: Graph, tol_cluster: float = DEFAULT_TOL_CLUSTER) -> float:
    """``tr M_L(g) - 1/n + sum_i 1/|C_i|``; wrong unless the complement is connected."""
    if not g.is_connected():
        raise PreconditionError("complement identity needs a connected graph")
    base = amm(g, HamiltonianKind.LAPLACIAN, tol_cluster).trace
    comps = connected_components(complement(g))
    return base - 1.0 / g.n + sum(1.0 / len(c) for c in comps)


def equitable_trace_bound(p: VertexPartition) -> float:
    """Upper bound ``n - 2m + 2 sum_j 1/a_j`` on the adjacency trace for cell sizes ``a_j``."""
    sizes = p.sizes
    return sum(sizes) - 2 * len(sizes) + 2 * sum(1.0 / a for a in sizes)


# --------------------------------------------------------------------------- rooted product with K2


def _require_adjacency(d: SpectralDecomposition) -> None:
    if d.kind is not HamiltonianKind.ADJACENCY:
        raise KindError(f"needs an adjacency decomposition, got {d.kind}")


def rooted_k2_idempotents(d: SpectralDecomposition) -> SpectralDecomposition:
    """Spectral decomposition of ``A(X(K2))`` built from that of ``A(X)``.

    Each eigenvalue ``lam`` of ``X`` splits into the two roots ``mu`` of
    ``t^2 - lam t - 1``, with idempotent ``[[mu^2 F, mu F], [mu F, F]] / (mu^2 + 1)``.
    """
    _require_adjacency(d)
    pieces = []
    for lam, f, mult in zip(d.thetas, d.idempotents, d.mults):
        root = np.sqrt(lam * lam + 4.0)
        for mu in ((lam - root) / 2.0, (lam + root) / 2.0):
            e = np.block([[mu * mu * f, mu * f], [mu * f, f]]) / (mu * mu + 1.0)
            pieces.append((mu, e, mult))
    pieces.sort(key=lambda p: p[0])
    return SpectralDecomposition(
        HamiltonianKind.ADJACENCY,
        np.array([p[0] for p in pieces]),
        tuple(p[1] for p in pieces),
        tuple(p[2] for p in pieces),
    )


def rooted_k2_offdiagonal_block(d: SpectralDecomposition) -> np.ndarray:
    _require_adjacency(d)
    return sum((2.0 / (lam * lam + 4.0)) * (f * f) for lam, f in d)


def amm_rooted_k2_closed(d: SpectralDecomposition) -> np.ndarray:
    """``[[M - N, N], [N, M - N]]`` with ``N = sum_i 2/(lam_i^2 + 4) F_i o F_i``."""
    m = average_mixing_matrix(d).matrix
    nb = rooted_k2_offdiagonal_block(d)
    return np.block([[m - nb, nb], [nb, m - nb]])


# --------------------------------------------------------------------------- walk-regularity


def is_walk_regular(d: SpectralDecomposition, eps: float = DEFAULT_EPS) -> bool:
    """Every adjacency idempotent has a constant diagonal."""
    _require_adjacency(d)
    return all(has_constant_diagonal(e, eps) for e in d.idempotents)


def is_walk_regular_by_powers(g: Graph) -> bool:
    """Exact check: ``diag(A^k)`` constant for ``k = 0..n-1`` (integer arithmetic)."""
    a = np.array(g.adjacency, dtype=object)
    p = np.identity(g.n, dtype=object)
    for _ in range(g.n):
        diag = [p[i, i] for i in range(g.n)]
        if len(set(diag)) > 1:
            return False
        p = p.dot(a)
    return True
