"""Scale-free contact graphs by (possibly nonlinear) preferential attachment.

Each arriving node links to ``mu`` distinct earlier nodes, choosing node ``i``
with probability proportional to ``degree_i ** k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class NetGenConfig:
    n: int = 1000
    mu: int = 20
    k_exp: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.mu < 1:
            raise ValueError(f"mu must be >= 1, got {self.mu}")
        if self.n <= self.mu + 1:
            # the first arrival after the bootstrap needs mu distinct targets
            raise ValueError(f"n={self.n} too small for mu={self.mu} (need n > mu + 1)")
        if not self.k_exp > 0:
            raise ValueError(f"k_exp must be > 0, got {self.k_exp}")


@dataclass(frozen=True)
class ContactGraph:
    n_nodes: int
    adjacency: tuple[tuple[int, ...], ...]
    _csr: sp.csr_matrix = field(repr=False, compare=False)

    @property
    def edges(self) -> int:
        return self._csr.nnz // 2

    @property
    def matrix(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency matrix (float, CSR)."""
        return self._csr

    def degrees(self) -> np.ndarray:
        return np.diff(self._csr.indptr)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    @classmethod
    def from_edges(cls, n_nodes: int, edges) -> "ContactGraph":
        edges = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if len(edges):
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loops are not allowed")
            if edges.min() < 0 or edges.max() >= n_nodes:
                raise ValueError("edge endpoint out of range")
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        if len(np.unique(lo * n_nodes + hi)) != len(edges):
            raise ValueError("duplicate edges are not allowed")
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        mat = sp.csr_matrix(
            (np.ones(len(rows)), (rows, cols)), shape=(n_nodes, n_nodes)
        )
        mat.sort_indices()
        adjacency = tuple(
            tuple(int(x) for x in mat.indices[mat.indptr[u]:mat.indptr[u + 1]])
            for u in range(n_nodes)
        )
        return cls(n_nodes, adjacency, mat)


def bootstrap_edges(n0: int) -> list[tuple[int, int]]:
    """Ring over the first ``n0`` nodes plus one chord, so every seed degree is >= 2."""
    if n0 == 2:
        return [(0, 1)]
    edges = [(u, (u + 1) % n0) for u in range(n0)]
    if n0 >= 4:
        edges.append((0, n0 // 2))
    return [(min(u, v), max(u, v)) for u, v in edges]


def _pick_targets(weights: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    # Gumbel top-k: the ``count`` largest of log(w) + Gumbel noise are distributed
    # exactly like ``count`` sequential draws without replacement, each
    # renormalised over the remaining candidates.
    keys = np.log(weights) + rng.gumbel(size=weights.shape[0])
    return np.argpartition(-keys, count - 1)[:count]


def generate(cfg: NetGenConfig) -> ContactGraph:
    rng = np.random.default_rng(cfg.seed)
    n0 = cfg.mu + 1
    seed_edges = bootstrap_edges(n0)
    deg = np.zeros(cfg.n, dtype=np.float64)
    src = np.empty(len(seed_edges) + cfg.mu * (cfg.n - n0), dtype=np.int64)
    dst = np.empty_like(src)
    for e, (u, v) in enumerate(seed_edges):
        src[e], dst[e] = u, v
        deg[u] += 1
        deg[v] += 1
    e = len(seed_edges)
    for new in range(n0, cfg.n):
        w = deg[:new] ** cfg.k_exp if cfg.k_exp != 1.0 else deg[:new]
        targets = _pick_targets(w, cfg.mu, rng)
        src[e:e + cfg.mu] = targets
        dst[e:e + cfg.mu] = new
        deg[targets] += 1
        deg[new] = cfg.mu
        e += cfg.mu
    return ContactGraph.from_edges(cfg.n, np.stack([src, dst], axis=1))


def restrict(cfg: NetGenConfig, mu_new: int) -> ContactGraph:
    """Social restriction: regenerate the graph with fewer links per arrival."""
    return generate(NetGenConfig(n=cfg.n, mu=mu_new, k_exp=cfg.k_exp, seed=cfg.seed))


@dataclass(frozen=True)
class DegreeStats:
    min: int
    mean: float
    max: int
    histogram: dict[int, int]
    tail_exponent: float


def degree_stats(g: ContactGraph) -> DegreeStats:
    """Degree summary plus a power-law tail exponent.

    The exponent ``a`` of ``P(d) ~ d^-a`` comes from a least-squares line on
    the log-log complementary CDF for degrees above the median; the CCDF
    slope is ``1 - a``. NaN when there are fewer than two distinct degrees
    in the tail.
    """
    deg = g.degrees()
    values, counts = np.unique(deg, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(values, counts)}
    ccdf = 1.0 - (np.cumsum(counts) - counts) / deg.size  # P(D >= d)
    median = np.median(deg)
    tail = (values > median) & (values > 0)
    if tail.sum() >= 2:
        slope = np.polyfit(np.log(values[tail]), np.log(ccdf[tail]), 1)[0]
        exponent = 1.0 - slope
    else:
        exponent = float("nan")
    return DegreeStats(
        min=int(deg.min()),
        mean=2.0 * g.edges / g.n_nodes,
        max=int(deg.max()),
        histogram=hist,
        tail_exponent=float(exponent),
    )


def write_edge_list(g: ContactGraph, path) -> None:
    lines = [f"# nodes={g.n_nodes}"]
    lines += [f"{u} {v}" for u, v in sorted(g.edge_list())]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path) -> ContactGraph:
    n_nodes = None
    edges = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            if key.strip() == "nodes":
                n_nodes = int(val)
            continue
        u, v = line.split()
        edges.append((int(u), int(v)))
    if n_nodes is None:
        raise ValueError(f"{path}: missing '# nodes=<n>' header")
    return ContactGraph.from_edges(n_nodes, edges)
