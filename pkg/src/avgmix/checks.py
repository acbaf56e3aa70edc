"""Per-graph validation battery behind ``avgmix check``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, HamiltonianKind, complement, hamiltonian, rooted_product_k2
from .mixing import (ROW_SUM_TOL, amm_complement_laplacian, amm_rooted_k2_closed,
                     average_mixing_matrix, is_walk_regular,
                     is_walk_regular_by_powers, matrix_properties)
from .spectral import decompose, spectral_decomposition, validate_decomposition

ROOTED_CHECK_MAX_N = 10
JACOBI_CHECK_MAX_N = 20


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    detail: str = ""


def run_checks(g: Graph, tol_cluster: float = 1e-8, tol_check: float = 1e-8,
               corrupt: bool = False) -> list[CheckResult]:
    """Decomposition residuals, mixing-matrix properties and the closed-form oracles.

    ``corrupt`` perturbs the adjacency mixing matrix before it is checked;
    it exists so tests can see the battery fail.
    """
    out = []
    mats = {}
    for kind in HamiltonianKind:
        b = hamiltonian(g, kind)
        d = spectral_decomposition(g, kind, tol_cluster)
        rep = validate_decomposition(d, b, tol_check)
        out.append(CheckResult(f"decomposition[{kind.short}]", rep.passed, rep.worst,
                               f"mults={list(d.mults)} min_gap={rep.min_gap:.3g}"))
        m = average_mixing_matrix(d).matrix.copy()
        if corrupt and kind is HamiltonianKind.ADJACENCY:
            m[0, 0] += 0.25
        mats[kind] = (d, m)
        p = matrix_properties(m, tol_check)
        ok = p.symmetric and p.psd and p.max_row_sum_dev <= ROW_SUM_TOL and p.min_entry >= -1e-12
        out.append(CheckResult(f"amm-properties[{kind.short}]", ok, p.max_row_sum_dev,
                               f"min_eig={p.min_eigenvalue:.3g} min_entry={p.min_entry:.3g}"))
        if g.n <= JACOBI_CHECK_MAX_N:
            alt = average_mixing_matrix(decompose(b, kind, tol_cluster, method="jacobi")).matrix
            r = float(np.max(np.abs(alt - m)))
            out.append(CheckResult(f"jacobi-kernel[{kind.short}]", r <= tol_check, r))

    d_a, m_a = mats[HamiltonianKind.ADJACENCY]
    wr_spectral = is_walk_regular(d_a, tol_check)
    wr_pow = is_walk_regular_by_powers(g)
    out.append(CheckResult("walk-regular", wr_spectral == wr_pow, 0.0, f"walk_regular={wr_pow}"))

    if g.is_connected():
        direct = average_mixing_matrix(spectral_decomposition(complement(g), HamiltonianKind.LAPLACIAN,
                                                              tol_cluster)).matrix
        r = float(np.max(np.abs(amm_complement_laplacian(g, tol_cluster) - direct)))
        out.append(CheckResult("complement-identity[L]", r <= tol_check, r))

    if g.n <= ROOTED_CHECK_MAX_N:
        closed = amm_rooted_k2_closed(d_a)
        direct = average_mixing_matrix(spectral_decomposition(rooted_product_k2(g), HamiltonianKind.ADJACENCY,
                                                              tol_cluster)).matrix
        r = float(np.max(np.abs(closed - direct)))
        out.append(CheckResult("rooted-k2-closed-form[A]", r <= tol_check, r))
    return out
