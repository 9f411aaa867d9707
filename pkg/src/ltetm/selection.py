"""Quickselect for the k smallest elements by absolute value.

Elements are ordered by ``(|value|, index)``, so ties go to the lower index and
the order is strict. Each partition pass is a single vectorized sweep. The
comparison counter charges one comparison per element tested against the
pivot, plus the comparisons spent picking the pivot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# a pass that leaves more than this fraction on one side counts as pathological
_SKEW = 0.9


@dataclass
class SelectionReport:
    indices: np.ndarray
    comparisons: int
    passes: int = 0


def _less(ka, ia, kb, ib) -> bool:
    return ka < kb or (ka == kb and ia < ib)


def _median_of_three(keys, idx, positions):
    """Position (into keys) of the median of three candidates, plus comparisons used."""
    a, b, c = positions
    ka, kb, kc = keys.item(a), keys.item(b), keys.item(c)
    ia, ib, ic = idx.item(a), idx.item(b), idx.item(c)
    ab = _less(ka, ia, kb, ib)
    bc = _less(kb, ib, kc, ic)
    if ab == bc:  # a<b<c or c<b<a
        return b, 2
    ac = _less(ka, ia, kc, ic)
    if ab:  # a<b, b>c
        return (c if ac else a), 3
    return (a if ac else c), 3


def quickselect_k_smallest(values, k: int, seed: int = 0) -> SelectionReport:
    """Indices of the ``k`` smallest ``|values|``, sorted ascending by index."""
    keys = np.abs(np.asarray(values, dtype=np.float64)).ravel()
    n = keys.size
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    rng = np.random.default_rng(seed)
    idx = np.arange(n)
    chosen = []
    need = k
    comparisons = 0
    passes = 0
    randomize = False
    while need < keys.size:
        m = keys.size
        if randomize:
            p = int(rng.integers(m))
        elif m >= 3:
            p, used = _median_of_three(keys, idx, (0, m // 2, m - 1))
            comparisons += used
        else:
            p = 0
        pk, pi = keys.item(p), idx.item(p)
        # (key, index) < (pk, pi); the pivot itself lands on the "not less" side
        less = keys < pk
        tie = keys == pk
        tie &= idx < pi
        less |= tie
        below = np.flatnonzero(less)
        comparisons += m - 1
        passes += 1
        n_less = below.size
        randomize = m > 16 and max(n_less, m - 1 - n_less) > _SKEW * m
        if n_less >= need:
            keys, idx = keys[below], idx[below]
            continue
        # everything below the pivot, and the pivot itself, is in
        chosen.append(idx[below])
        chosen.append(idx[p : p + 1])
        need -= n_less + 1
        if need == 0:
            idx = idx[:0]
            break
        less[p] = True
        above = np.flatnonzero(~less)
        keys, idx = keys[above], idx[above]
    chosen.append(idx)
    out = np.sort(np.concatenate(chosen))
    return SelectionReport(out, comparisons, passes)


def sort_select(values, k: int) -> np.ndarray:
    """Reference selection by full stable sort; the oracle for the quickselect tests."""
    keys = np.abs(np.asarray(values, dtype=np.float64)).ravel()
    return np.sort(np.argsort(keys, kind="stable")[:k])
