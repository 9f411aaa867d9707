"""Fixed-rate LT Tanner graph: check nodes are coded symbols, variable nodes are data bits.

Edges are numbered CN-major: all edges of CN 0 first, then CN 1, and so on.
Every per-edge array in the decoder uses this ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .degree_dist import DegreeDistribution, sample_degrees


@dataclass(frozen=True, eq=False)
class TannerGraph:
    num_vn: int
    num_cn: int
    cn_ptr: np.ndarray  # edges of CN c are cn_ptr[c]:cn_ptr[c + 1]
    edge_vn: np.ndarray  # VN endpoint of every edge, sorted within each CN

    @property
    def k(self) -> int:
        return self.num_vn

    @property
    def n(self) -> int:
        return self.num_cn

    @property
    def edge_count(self) -> int:
        return int(self.edge_vn.size)

    @cached_property
    def cn_degree(self) -> np.ndarray:
        return np.diff(self.cn_ptr)

    @cached_property
    def edge_cn(self) -> np.ndarray:
        return np.repeat(np.arange(self.num_cn), self.cn_degree)

    @cached_property
    def vn_degree(self) -> np.ndarray:
        return np.bincount(self.edge_vn, minlength=self.num_vn)

    @cached_property
    def vn_edges(self) -> np.ndarray:
        """Edge indices grouped by VN (stable, so CN order within a VN)."""
        return np.argsort(self.edge_vn, kind="stable")

    @cached_property
    def vn_ptr(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(self.vn_degree)))

    @cached_property
    def degree_groups(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """``(cn ids, edge index matrix)`` per distinct CN degree; row i holds the edges of cn ids[i]."""
        groups = []
        for d in np.unique(self.cn_degree):
            cns = np.flatnonzero(self.cn_degree == d)
            groups.append((cns, self.cn_ptr[cns][:, None] + np.arange(d)))
        return groups

    @cached_property
    def first_edge_of_vn(self) -> np.ndarray:
        """One representative edge per VN (-1 for isolated VNs)."""
        first = np.full(self.num_vn, -1, dtype=np.int64)
        has = self.vn_degree > 0
        first[has] = self.vn_edges[self.vn_ptr[:-1][has]]
        return first

    @property
    def cn_neighbors(self) -> list[np.ndarray]:
        return [self.edge_vn[a:b] for a, b in zip(self.cn_ptr[:-1], self.cn_ptr[1:])]

    @property
    def vn_neighbors(self) -> list[list[tuple[int, int]]]:
        """Per VN: ``(cn, position of the VN inside that CN's neighbor list)``."""
        out = []
        cn = self.edge_cn
        for v in range(self.num_vn):
            edges = self.vn_edges[self.vn_ptr[v]:self.vn_ptr[v + 1]]
            out.append([(int(cn[e]), int(e - self.cn_ptr[cn[e]])) for e in edges])
        return out

    def same_as(self, other: "TannerGraph") -> bool:
        return (
            self.num_vn == other.num_vn
            and self.num_cn == other.num_cn
            and np.array_equal(self.cn_ptr, other.cn_ptr)
            and np.array_equal(self.edge_vn, other.edge_vn)
        )


@dataclass(frozen=True)
class GraphStats:
    lambda1: float
    rho: dict[int, float]
    dc_max: int
    avg_cn_degree: float
    isolated_vns: int = 0


def from_neighbors(num_vn: int, neighbors) -> TannerGraph:
    """Graph from explicit per-CN neighbor lists (used by tests and the dump reader)."""
    lists = [sorted(int(v) for v in nb) for nb in neighbors]
    for c, nb in enumerate(lists):
        if not nb:
            raise ValueError(f"CN {c} has no neighbors")
        if len(set(nb)) != len(nb):
            raise ValueError(f"CN {c} has repeated neighbors {nb}")
        if nb[0] < 0 or nb[-1] >= num_vn:
            raise ValueError(f"CN {c} neighbor out of range 0..{num_vn - 1}")
    ptr = np.concatenate(([0], np.cumsum([len(nb) for nb in lists]))).astype(np.int64)
    edge_vn = np.fromiter((v for nb in lists for v in nb), dtype=np.int64, count=int(ptr[-1]))
    return TannerGraph(num_vn, len(lists), ptr, edge_vn)


def build_graph(k: int, n: int, dist: DegreeDistribution, seed) -> TannerGraph:
    """Sample a CN degree per coded symbol, then that many distinct VNs uniformly.

    Degrees above ``k`` are clamped to ``k``. Neighbor choice is a partial
    Fisher-Yates shuffle over a persistent permutation of ``0..k-1``.
    """
    if k < 1 or n < 1:
        raise ValueError(f"need k >= 1 and n >= 1, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    degrees = np.minimum(sample_degrees(dist, rng, n), k)
    ptr = np.concatenate(([0], np.cumsum(degrees))).astype(np.int64)
    # offsets i within each CN's draw, so slot i picks uniformly from perm[i:k]
    offs = np.arange(ptr[-1]) - np.repeat(ptr[:-1], degrees)
    picks = (offs + np.floor(rng.random(ptr[-1]) * (k - offs))).astype(np.int64).tolist()
    offs = offs.tolist()
    perm = list(range(k))
    edge_vn = np.empty(ptr[-1], dtype=np.int64)
    for c in range(n):
        a, b = int(ptr[c]), int(ptr[c + 1])
        for e in range(a, b):
            i, j = offs[e], picks[e]
            perm[i], perm[j] = perm[j], perm[i]
        edge_vn[a:b] = sorted(perm[: b - a])
    return TannerGraph(k, n, ptr, edge_vn)


def encode(graph: TannerGraph, data) -> np.ndarray:
    data = np.asarray(data, dtype=np.uint8)
    if data.shape != (graph.num_vn,):
        raise ValueError(f"data length {data.size} != K={graph.num_vn}")
    return np.bitwise_xor.reduceat(data[graph.edge_vn], graph.cn_ptr[:-1])


def graph_stats(graph: TannerGraph) -> GraphStats:
    vdeg = graph.vn_degree
    cdeg = graph.cn_degree
    values, counts = np.unique(cdeg, return_counts=True)
    return GraphStats(
        lambda1=float(np.mean(vdeg == 1)),
        rho={int(d): float(c) / graph.num_cn for d, c in zip(values, counts)},
        dc_max=int(cdeg.max()),
        avg_cn_degree=float(cdeg.mean()),
        isolated_vns=int(np.sum(vdeg == 0)),
    )


def dump_graph(graph: TannerGraph, path) -> None:
    lines = [f"{graph.num_vn} {graph.num_cn} {graph.edge_count}"]
    lines += [" ".join(map(str, nb.tolist())) for nb in graph.cn_neighbors]
    Path(path).write_text("\n".join(lines) + "\n")


def load_graph(path) -> TannerGraph:
    rows = Path(path).read_text().splitlines()
    k, n, e = (int(x) for x in rows[0].split())
    graph = from_neighbors(k, [row.split() for row in rows[1 : n + 1]])
    if graph.num_cn != n or graph.edge_count != e:
        raise ValueError(f"{path}: header says N={n}, E={e}; body has N={graph.num_cn}, E={graph.edge_count}")
    return graph
