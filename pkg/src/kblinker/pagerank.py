"""PageRank over the full item graph.

Edges are the deduplicated item-valued statement and qualifier targets of
every record (links to items missing from the store are dropped). The power
iteration runs on flat edge arrays through the kernel backend; dangling nodes
redistribute their mass uniformly, which keeps the chain stochastic and every
iterate summing to one.
"""

from __future__ import annotations

import numpy as np

from kblinker import _kernels
from kblinker.artifacts import read_artifact, write_artifact
from kblinker.records import ItemRecord

ARTIFACT_KIND = "pagerank"


class PageRankVector:
    """Stationary scores keyed by item id.

    Lookups for unknown ids return the smallest stored score (the floor), so
    downstream log-popularity features stay finite.
    """

    def __init__(
        self,
        ids: np.ndarray,
        scores: np.ndarray,
        damping: float,
        iterations_run: int,
        residual: float,
    ):
        self.ids = ids
        self.scores = scores
        self.damping = damping
        self.iterations_run = iterations_run
        self.residual = residual
        self.floor = float(scores.min()) if scores.size else 0.0

    def __len__(self) -> int:
        return int(self.ids.size)

    def lookup_rank(self, item_id: int) -> float:
        pos = np.searchsorted(self.ids, item_id)
        if pos < self.ids.size and self.ids[pos] == item_id:
            return float(self.scores[pos])
        return self.floor

    def items(self):
        for item_id, score in zip(self.ids.tolist(), self.scores.tolist()):
            yield item_id, score

    # -- persistence ---------------------------------------------------------

    def save(self, path, store_revision: int | None = None) -> None:
        meta = {
            "n": int(self.ids.size),
            "damping": self.damping,
            "iterations_run": self.iterations_run,
            "residual": self.residual,
            "store_revision": store_revision,
        }
        payload = self.ids.astype("<i8").tobytes() + self.scores.astype("<f8").tobytes()
        write_artifact(path, ARTIFACT_KIND, meta, payload)

    @classmethod
    def load(cls, path) -> tuple["PageRankVector", dict]:
        meta, payload = read_artifact(path, ARTIFACT_KIND)
        n = meta["n"]
        ids = np.frombuffer(payload[: 8 * n], dtype="<i8")
        scores = np.frombuffer(payload[8 * n :], dtype="<f8")
        vec = cls(
            ids=ids,
            scores=scores,
            damping=meta["damping"],
            iterations_run=meta["iterations_run"],
            residual=meta["residual"],
        )
        return vec, meta


def lookup_rank(pr: PageRankVector, item_id: int) -> float:
    return pr.lookup_rank(item_id)


def compute_pagerank(
    records,
    damping: float = 0.85,
    tol: float = 1e-10,
    max_iter: int = 100,
) -> PageRankVector:
    """Damped power iteration until the L1 step change drops below ``tol``.

    ``records`` is any iterable of ItemRecord; the node set is exactly the
    records seen, out_links pointing elsewhere are ignored, and repeated links
    carry no extra weight (out_links is already a set).
    """
    if not 0.0 < damping < 1.0:
        raise ValueError(f"damping must be in (0, 1), got {damping}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")

    id_list: list[int] = []
    link_lists: list[tuple[int, ...]] = []
    for rec in records:
        id_list.append(rec.id)
        link_lists.append(rec.out_links)
    if not id_list:
        raise ValueError("no nodes: record iterator was empty")

    order = np.argsort(np.asarray(id_list, dtype=np.int64), kind="stable")
    ids = np.asarray(id_list, dtype=np.int64)[order]
    n = ids.size

    src_parts: list[np.ndarray] = []
    dst_parts: list[np.ndarray] = []
    outdeg = np.zeros(n, dtype=np.int64)
    for node_idx, rec_idx in enumerate(order.tolist()):
        links = np.asarray(link_lists[rec_idx], dtype=np.int64)
        if links.size == 0:
            continue
        pos = np.searchsorted(ids, links)
        pos[pos >= n] = n - 1
        known = ids[pos] == links
        targets = pos[known]
        if targets.size == 0:
            continue
        outdeg[node_idx] = targets.size
        src_parts.append(np.full(targets.size, node_idx, dtype=np.int64))
        dst_parts.append(targets.astype(np.int64))

    src = np.concatenate(src_parts) if src_parts else np.empty(0, dtype=np.int64)
    dst = np.concatenate(dst_parts) if dst_parts else np.empty(0, dtype=np.int64)
    dangling = (outdeg == 0).astype(np.uint8)
    inv_outdeg = np.zeros(n, dtype=np.float64)
    nonzero = outdeg > 0
    inv_outdeg[nonzero] = 1.0 / outdeg[nonzero]

    v = np.full(n, 1.0 / n, dtype=np.float64)
    residual = np.inf
    iterations = 0
    while iterations < max_iter:
        new_v = _kernels.pagerank_step(v, src, dst, inv_outdeg, dangling, damping)
        residual = float(np.abs(new_v - v).sum())
        v = new_v
        iterations += 1
        if residual < tol:
            break

    return PageRankVector(
        ids=ids,
        scores=v,
        damping=damping,
        iterations_run=iterations,
        residual=residual,
    )
