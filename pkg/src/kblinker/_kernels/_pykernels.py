"""Numpy fallback implementations of the hot-path kernels.

Signatures mirror kblinker._kernels._ckernels exactly. Arrays must be
contiguous and of the dtypes documented below; callers (pagerank, semantics)
prepare them once per run.
"""

import numpy as np


def pagerank_step(v, src, dst, inv_outdeg, dangling, damping):
    """One damped power-iteration step over an edge list.

    v           float64 (n,)   current probability vector
    src, dst    int64 (m,)     edge endpoints (source node index -> dest)
    inv_outdeg  float64 (n,)   1/outdegree, 0.0 for dangling nodes
    dangling    uint8 (n,)     1 where the node has no out-edges
    damping     float          damping factor in (0, 1)

    Returns the next vector; dangling mass and teleportation are spread
    uniformly, so the result sums to 1 up to float error.
    """
    n = v.shape[0]
    pushed = np.bincount(dst, weights=v[src] * inv_outdeg[src], minlength=n)
    dangling_mass = float(v @ dangling)
    base = (damping * dangling_mass + (1.0 - damping)) / n
    return damping * pushed + base


def similarity_pairs(ids, offsets, links, left, right, beta):
    """One-step random-walk coincidence probability for entity index pairs.

    ids      int64 (n_ent,)       entity ids of the per-document entity table
    offsets  int64 (n_ent + 1,)   CSR offsets into ``links``
    links    int64 (total,)       outgoing link ids, sorted within each entity
    left     int64 (n_pairs,)     row indices into the entity table
    right    int64 (n_pairs,)     row indices into the entity table
    beta     float                probability the walk stays in place

    A walk starting on entity e stays with probability beta (1.0 when e has
    no links) and otherwise moves to one of its links uniformly. The returned
    value per pair is the probability two independent such walks end on the
    same item.
    """
    out = np.empty(left.shape[0], dtype=np.float64)
    link_sets = [frozenset(links[offsets[i]:offsets[i + 1]].tolist())
                 for i in range(ids.shape[0])]
    id_list = ids.tolist()
    for p in range(left.shape[0]):
        a = int(left[p])
        b = int(right[p])
        la, lb = link_sets[a], link_sets[b]
        ia, ib = id_list[a], id_list[b]
        stay_a = beta if la else 1.0
        stay_b = beta if lb else 1.0
        s = stay_a * stay_b if ia == ib else 0.0
        if lb and ia in lb:
            s += stay_a * (1.0 - stay_b) / len(lb)
        if la and ib in la:
            s += stay_b * (1.0 - stay_a) / len(la)
        if la and lb:
            s += (1.0 - stay_a) * (1.0 - stay_b) * len(la & lb) / (len(la) * len(lb))
        out[p] = s
    return out
