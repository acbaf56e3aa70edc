"""Write graph6 corpora of all graphs on n vertices, one isomorphism class per line.

Usage:
    python3 scripts/make_corpus.py 7 8 9 --out data

Needs pynauty (``pip install pynauty``). Classes on n vertices are grown from
those on n-1 by adding a vertex of minimum degree; nauty certificates
deduplicate. Output files are ``graphs{n}.g6``, sorted by (edges, graph6).
If nauty's ``geng`` is available, ``geng -q n`` produces an equivalent corpus.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import pynauty

from avgmix.graphs import Graph, enumerate_graphs, write_graph6


def _nauty(n, adj_lists):
    return pynauty.Graph(n, adjacency_dict={v: nb for v, nb in enumerate(adj_lists) if nb})


def _canonical(n, adj_lists):
    g = _nauty(n, adj_lists)
    cert = pynauty.certificate(g)
    return cert, g


def extend(classes: list[Graph], n: int) -> list[Graph]:
    found: dict[bytes, Graph] = {}
    for base in classes:
        base_adj = [base.neighbors(v) for v in range(n - 1)]
        base_deg = [len(a) for a in base_adj]
        for mask in range(1 << (n - 1)):
            nbrs = [v for v in range(n - 1) if (mask >> v) & 1]
            k = len(nbrs)
            # new vertex must have minimum degree in the extended graph
            if any(base_deg[v] + ((mask >> v) & 1) < k for v in range(n - 1)):
                continue
            adj = [list(a) for a in base_adj] + [nbrs]
            for v in nbrs:
                adj[v].append(n - 1)
            cert, g = _canonical(n, adj)
            if cert not in found:
                lab = pynauty.canon_label(g)
                pos = {v: i for i, v in enumerate(lab)}
                edges = [(pos[u], pos[w]) for u in range(n) for w in adj[u] if u < w]
                found[cert] = Graph(n, tuple(edges))
    return sorted(found.values(), key=lambda g: (g.num_edges, write_graph6(g)))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("sizes", type=int, nargs="+")
    ap.add_argument("--out", default="data")
    args = ap.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    classes = {6: list(enumerate_graphs(6))}
    for n in range(7, max(args.sizes) + 1):
        t0 = time.time()
        classes[n] = extend(classes[n - 1], n)
        print(f"n={n}: {len(classes[n])} classes in {time.time() - t0:.1f}s", file=sys.stderr)
    for n in args.sizes:
        gs = classes[n] if n in classes else list(enumerate_graphs(n))
        path = os.path.join(args.out, f"graphs{n}.g6")
        with open(path, "w") as fh:
            for g in gs:
                fh.write(write_graph6(g) + "\n")
        print(f"wrote {path}", file=sys.stderr)


if __name__ == "__main__":
    main()
