"""Average mixing matrices of continuous quantum walks on graphs."""

from .graphs import (Graph, HamiltonianKind, VertexPartition, coarsest_equitable_partition,
                     enumerate_graphs, hamiltonian, parse_graph6, write_graph6)
from .mixing import AverageMixingMatrix, amm, average_mixing_matrix, trace_amm
from .spectral import SpectralDecomposition, spectral_decomposition

__version__ = "0.1.0"

__all__ = [
    "AverageMixingMatrix", "Graph", "HamiltonianKind", "SpectralDecomposition", "VertexPartition",
    "amm", "average_mixing_matrix", "coarsest_equitable_partition", "enumerate_graphs", "hamiltonian",
    "parse_graph6", "spectral_decomposition", "trace_amm", "write_graph6",
]
