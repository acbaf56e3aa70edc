"""Corpus scans: per-graph statistics, extremal traces and constant-diagonal counts."""

from __future__ import annotations

import csv
import gzip
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvariantError
from .graphs import (Graph, HamiltonianKind, enumerate_graphs,
                     parse_graph6, read_graph6_lines, write_graph6)
from .mixing import (average_mixing_matrix, has_constant_diagonal, is_walk_regular,
                     kn_amm, kn_trace, psd_order)
from .spectral import DEFAULT_TOL_CLUSTER, spectral_decomposition

log = logging.getLogger(__name__)

TIE_TOL = 1e-9
CSV_FIELDS = ("graph6", "n", "connected", "trace_A", "trace_L", "constdiag_A", "constdiag_L", "walk_regular")


@dataclass(frozen=True)
class SurveyConfig:
    tol_cluster: float = DEFAULT_TOL_CLUSTER
    tol_check: float = 1e-8


@dataclass(frozen=True)
class SurveyRecord:
    graph6: str
    n: int
    connected: bool
    trace_A: float
    trace_L: float
    constdiag_A: bool
    constdiag_L: bool
    walk_regular: bool

    def trace(self, kind: HamiltonianKind) -> float:
        return self.trace_A if kind is HamiltonianKind.ADJACENCY else self.trace_L


def survey_graph(g: Graph, config: SurveyConfig = SurveyConfig(), graph6: str | None = None) -> SurveyRecord:
    d_a = spectral_decomposition(g, HamiltonianKind.ADJACENCY, config.tol_cluster)
    d_l = spectral_decomposition(g, HamiltonianKind.LAPLACIAN, config.tol_cluster)
    m_a = average_mixing_matrix(d_a).matrix
    m_l = average_mixing_matrix(d_l).matrix
    return SurveyRecord(
        graph6=graph6 if graph6 is not None else write_graph6(g),
        n=g.n,
        # multiplicity of the Laplacian eigenvalue 0 counts components
        connected=d_l.mults[0] == 1,
        trace_A=float(np.trace(m_a)),
        trace_L=float(np.trace(m_l)),
        constdiag_A=has_constant_diagonal(m_a, config.tol_check),
        constdiag_L=has_constant_diagonal(m_l, config.tol_check),
        walk_regular=is_walk_regular(d_a, config.tol_check),
    )


def _survey_text(args: tuple[str, SurveyConfig]) -> SurveyRecord:
    text, config = args
    return survey_graph(parse_graph6(text), config, text)


def graph6_adjacency_batch(texts: Sequence[str], n: int) -> np.ndarray:
    """Decode many graph6 strings of the same order into a ``(k, n, n)`` array."""
    nbits = n * (n - 1) // 2
    nchars = -(-nbits // 6)
    raw = np.frombuffer("".join(texts).encode("ascii"), dtype=np.uint8).reshape(len(texts), nchars + 1)
    vals = raw[:, 1:].astype(np.int64) - 63
    bits = ((vals[:, :, None] >> np.arange(5, -1, -1)) & 1).reshape(len(texts), -1)[:, :nbits]
    iu = np.array([(i, j) for j in range(1, n) for i in range(j)], dtype=np.int64).reshape(-1, 2)
    adj = np.zeros((len(texts), n, n))
    if nbits:
        adj[:, iu[:, 0], iu[:, 1]] = bits
        adj[:, iu[:, 1], iu[:, 0]] = bits
    return adj


def _batch_amm(b: np.ndarray, tol_cluster: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Average mixing matrices for a stack of symmetric matrices.

    Returns ``(amm, cluster_labels, projector_diagonals)``; clustering
    follows :func:`avgmix.spectral.cluster_eigenvalues` per matrix.
    """
    k, n, _ = b.shape
    w, v = np.linalg.eigh(b)
    thresh = tol_cluster * np.maximum(1.0, w[:, -1] - w[:, 0])
    breaks = np.diff(w, axis=1) > thresh[:, None]
    labels = np.concatenate([np.zeros((k, 1), dtype=np.int64), np.cumsum(breaks, axis=1)], axis=1)
    onehot = (labels[:, :, None] == np.arange(n)).astype(float)            # (k, i, r)
    scaled = v[:, None, :, :] * onehot.transpose(0, 2, 1)[:, :, None, :]   # (k, r, a, i)
    proj = scaled @ v.transpose(0, 2, 1)[:, None, :, :]                    # (k, r, a, b)
    m = np.sum(proj * proj, axis=1)
    diags = np.diagonal(proj, axis1=2, axis2=3)                            # (k, r, a)
    return m, labels, diags


def _survey_chunk(args: tuple[list[str], int, SurveyConfig]) -> list[SurveyRecord]:
    texts, n, config = args
    a = graph6_adjacency_batch(texts, n)
    lap = np.eye(n)[None] * a.sum(axis=2)[:, :, None] - a
    m_a, lab_a, diag_a = _batch_amm(a, config.tol_cluster)
    m_l, lab_l, _ = _batch_amm(lap, config.tol_cluster)
    tr_a = np.trace(m_a, axis1=1, axis2=2)
    tr_l = np.trace(m_l, axis1=1, axis2=2)
    dg_a, dg_l = np.diagonal(m_a, axis1=1, axis2=2), np.diagonal(m_l, axis1=1, axis2=2)
    cd_a = dg_a.max(axis=1) - dg_a.min(axis=1) <= config.tol_check
    cd_l = dg_l.max(axis=1) - dg_l.min(axis=1) <= config.tol_check
    # empty cluster slots have all-zero diagonals, so they never break walk-regularity
    wr = np.all(diag_a.max(axis=2) - diag_a.min(axis=2) <= config.tol_check, axis=1)
    connected = np.sum(lab_l == 0, axis=1) == 1
    return [
        SurveyRecord(t, n, bool(connected[i]), float(tr_a[i]), float(tr_l[i]),
                     bool(cd_a[i]), bool(cd_l[i]), bool(wr[i]))
        for i, t in enumerate(texts)
    ]


CHUNK = 2048


def survey_corpus(source: Iterable[str | Graph], config: SurveyConfig = SurveyConfig(), workers: int = 1,
                  strict: bool = False, issues: list | None = None, batched: bool = True) -> list[SurveyRecord]:
    """One record per graph, in input order whatever ``workers`` is.

    ``source`` yields graph6 lines or :class:`Graph` objects. Unparseable
    lines are logged (and appended to ``issues`` as ``(lineno, message)``)
    unless ``strict`` is set, in which case the first one raises.

    The batched path groups consecutive same-order graphs into fixed-size
    chunks, so results do not depend on ``workers``; ``batched=False`` runs
    :func:`survey_graph` one graph at a time.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    found: list = [] if issues is None else issues
    lines = (write_graph6(item) if isinstance(item, Graph) else item for item in source)
    texts = [text for _, text, _ in read_graph6_lines(lines, strict=strict, issues=found)]
    for lineno, msg in found:
        log.warning("skipping line %d: %s", lineno, msg)
    if not batched:
        jobs = [(t, config) for t in texts]
        if workers == 1:
            return [_survey_text(j) for j in jobs]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_survey_text, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    chunks = []
    for t in texts:
        n = ord(t[0]) - 63
        if chunks and chunks[-1][1] == n and len(chunks[-1][0]) < CHUNK:
            chunks[-1][0].append(t)
        else:
            chunks.append(([t], n, config))
    if workers == 1:
        parts = map(_survey_chunk, chunks)
        return [r for part in parts for r in part]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [r for part in pool.map(_survey_chunk, chunks) for r in part]


def read_corpus(path) -> list[str]:
    """Lines of a graph6 corpus file; ``.gz`` files are decompressed."""
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt") as fh:
        return fh.read().splitlines()


def builtin_corpus(n: int) -> list[str]:
    return [write_graph6(g) for g in enumerate_graphs(n)]


# --------------------------------------------------------------------------- reductions


def rational_string(x: float, max_denominator: int = 10 ** 4, tol: float = 1e-9) -> str | None:
    """``"p/q"`` when a fraction with ``q <= max_denominator`` is within ``tol`` of ``x``."""
    f = Fraction(x).limit_denominator(max_denominator)
    if abs(float(f) - x) > tol:
        return None
    return str(f)


@dataclass
class ExtremalResult:
    statistic: str
    direction: str
    value: float
    witnesses: list[str] = field(default_factory=list)

    @property
    def value_rational(self) -> str | None:
        return rational_string(self.value)

    def to_json(self) -> dict:
        out = {"statistic": self.statistic, "direction": self.direction, "value": self.value}
        if self.value_rational is not None:
            out["value_rational"] = self.value_rational
        out["witnesses"] = list(self.witnesses)
        return out


def extremal_trace(records: Sequence[SurveyRecord], kind: HamiltonianKind | str, direction: str,
                   connected_only: bool = True, tol: float = TIE_TOL) -> ExtremalResult:
    """Min or max trace with every witness within ``tol`` of it.

    Only connected graphs compete by default; the empty graph would
    otherwise win every maximum with trace ``n``.
    """
    kind = HamiltonianKind.parse(kind)
    if direction not in ("min", "max"):
        raise ValueError(f"direction must be 'min' or 'max', got {direction!r}")
    if not records:
        raise InvariantError("no records")
    sizes = {r.n for r in records}
    if len(sizes) > 1:
        raise InvariantError(f"records mix vertex counts {sorted(sizes)}")
    pool = [r for r in records if r.connected] if connected_only else list(records)
    if not pool:
        raise InvariantError("no connected graphs among the records")
    values = [r.trace(kind) for r in pool]
    best = min(values) if direction == "min" else max(values)
    witnesses = [r.graph6 for r, v in zip(pool, values) if abs(v - best) <= tol]
    return ExtremalResult(f"trace_{kind.short}", direction, best, witnesses)


@dataclass(frozen=True)
class FlagCounts:
    constdiag_A: int
    constdiag_L: int
    walk_regular: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.constdiag_A, self.constdiag_L, self.walk_regular)


def flag_counts(records: Sequence[SurveyRecord]) -> FlagCounts:
    """Counts of constant-diagonal (both Hamiltonians) and walk-regular graphs."""
    sizes = {r.n for r in records}
    if len(sizes) > 1:
        raise InvariantError(f"records mix vertex counts {sorted(sizes)}")
    return FlagCounts(
        sum(r.constdiag_A for r in records),
        sum(r.constdiag_L for r in records),
        sum(r.walk_regular for r in records),
    )


@dataclass
class DominanceReport:
    n: int
    connected_checked: int = 0
    dominance_failures: list[str] = field(default_factory=list)
    laplacian_trace_ties: list[str] = field(default_factory=list)
    adjacency_falsifiers: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.dominance_failures and not self.laplacian_trace_ties and not self.adjacency_falsifiers


def verify_kn_dominance(n: int, graphs: Iterable[Graph] | None = None, tol_cluster: float = DEFAULT_TOL_CLUSTER,
                        eps: float = 1e-8) -> DominanceReport:
    """Check ``M_L(K_n) >= M_L(X)`` for every connected ``X`` and look for trace counterexamples.

    ``laplacian_trace_ties`` lists non-complete graphs tying the ``K_n``
    Laplacian trace; ``adjacency_falsifiers`` lists graphs whose adjacency
    trace exceeds that of ``K_n``. Both are expected empty.
    """
    graphs = enumerate_graphs(n) if graphs is None else graphs
    top = kn_amm(n)
    top_trace = kn_trace(n)
    report = DominanceReport(n)
    for g in graphs:
        if g.n != n:
            raise InvariantError(f"graph on {g.n} vertices in an n={n} scan")
        d_l = spectral_decomposition(g, HamiltonianKind.LAPLACIAN, tol_cluster)
        if d_l.mults[0] != 1:
            continue
        report.connected_checked += 1
        g6 = write_graph6(g)
        m_l = average_mixing_matrix(d_l).matrix
        if not psd_order(top, m_l, eps):
            report.dominance_failures.append(g6)
        is_kn = g.num_edges == n * (n - 1) // 2
        if not is_kn and abs(np.trace(m_l) - top_trace) <= TIE_TOL:
            report.laplacian_trace_ties.append(g6)
        t_a = float(np.trace(average_mixing_matrix(
            spectral_decomposition(g, HamiltonianKind.ADJACENCY, tol_cluster)).matrix))
        if t_a > top_trace + TIE_TOL:
            report.adjacency_falsifiers.append(g6)
    return report


# --------------------------------------------------------------------------- serialisation


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def records_to_csv(records: Iterable[SurveyRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow([_fmt(getattr(r, f)) for f in CSV_FIELDS])
    return buf.getvalue()


def records_from_csv(text: str) -> list[SurveyRecord]:
    rows = csv.DictReader(io.StringIO(text))
    out = []
    for row in rows:
        out.append(SurveyRecord(
            graph6=row["graph6"], n=int(row["n"]), connected=row["connected"] == "true",
            trace_A=float(row["trace_A"]), trace_L=float(row["trace_L"]),
            constdiag_A=row["constdiag_A"] == "true", constdiag_L=row["constdiag_L"] == "true",
            walk_regular=row["walk_regular"] == "true",
        ))
    return out


def records_to_json(records: Iterable[SurveyRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=1)


def records_from_json(text: str) -> list[SurveyRecord]:
    return [SurveyRecord(**row) for row in json.loads(text)]
