"""Pure-Python kernels; same algorithms and operation order as ``_kernels.pyx``.

Both backends evaluate identical IEEE double operations in the same
sequence, so their outputs are bit-identical.
"""

import numpy as np

BACKEND = "python"


def _processing_order(dist):
    # ascending distance, ties toward the lower carriage index
    return sorted(range(len(dist)), key=lambda k: (dist[k], k))


def _reselect(row, order_row, claimed, need):
    for n in order_row:
        if need == 0:
            break
        if not row[n] and claimed[n] < 0:
            row[n] = 1
            need -= 1


def _resolve(rows, order, dist, ns):
    K = len(rows)
    N = len(rows[0]) if K else 0
    proc = _processing_order(dist)

    # distance-priority pass over adjacent carriages
    claimed = [-1] * N
    settled = [False] * K
    for k in proc:
        row = rows[k]
        for n in range(N):
            if row[n]:
                claimed[n] = k
        settled[k] = True
        for j in (k + 1, k - 1):
            if j < 0 or j >= K or settled[j]:
                continue
            other = rows[j]
            stripped = 0
            for n in range(N):
                if row[n] and other[n]:
                    other[n] = 0
                    stripped += 1
            if stripped:
                _reselect(other, order[j], claimed, stripped)

    # global sweep for residual non-adjacent conflicts
    claimed = [-1] * N
    swept = 0
    for k in proc:
        row = rows[k]
        lost = 0
        for n in range(N):
            if row[n] and claimed[n] >= 0:
                row[n] = 0
                lost += 1
        for n in range(N):
            if row[n]:
                claimed[n] = k
        if lost:
            swept += lost
            _reselect(row, order[k], claimed, lost)
            for n in range(N):
                if row[n]:
                    claimed[n] = k
    return swept


def resolve_conflicts_batch(assign, order, dist, ns):
    """Resolve beam conflicts in place for every time step.

    assign: uint8 (T, K, N); order: intp (T, K, N) best-first beam columns;
    dist: float64 (T, K).  Returns the per-step count of beams removed by
    the global sweep.
    """
    T = assign.shape[0]
    swept = np.zeros(T, dtype=np.int64)
    for t in range(T):
        rows = assign[t].tolist()
        swept[t] = _resolve(rows, order[t].tolist(), dist[t].tolist(), ns)
        assign[t] = rows
    return swept


def _waterfill(g, total_power, f):
    K = len(g)
    active = [gk > 0.0 for gk in g]
    level = float("nan")
    m = 0
    for _ in range(K):
        m = 0
        s = 0.0
        for k in range(K):
            if active[k]:
                m += 1
                s += 1.0 / g[k]
        if m == 0:
            break
        level = (total_power + s) / m
        changed = False
        for k in range(K):
            if active[k] and level - 1.0 / g[k] <= 0.0:
                active[k] = False
                changed = True
        if not changed:
            break
    if m == 0:
        for k in range(K):
            f[k] = 0.0
        return float("nan"), 0
    m = 0
    s = 0.0
    for k in range(K):
        if active[k]:
            m += 1
            s += 1.0 / g[k]
    mean_inv = s / m
    for k in range(K):
        f[k] = 1.0 / m + (mean_inv - 1.0 / g[k]) / total_power if active[k] else 0.0
    return level, m


def waterfill_batch(g, total_power):
    """Per-step water-filling over carriage gains ``g`` (T, K).

    Returns ``(f, level, active_count)``; ``level`` is NaN and the count
    zero for steps where every gain is zero.
    """
    T, K = g.shape
    f = np.zeros((T, K))
    level = np.empty(T)
    count = np.empty(T, dtype=np.int64)
    for t in range(T):
        row = [0.0] * K
        level[t], count[t] = _waterfill(g[t].tolist(), float(total_power), row)
        f[t] = row
    return f, level, count
