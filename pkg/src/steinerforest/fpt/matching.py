"""Minimum-weight perfect matching on a square cost matrix (Hungarian method with potentials)."""

from __future__ import annotations

import math
from typing import Sequence


def min_weight_perfect_matching(cost: Sequence[Sequence[float]]) -> tuple[list[int], float] | None:
    """Return ``(assign, total)`` with row ``i`` matched to column ``assign[i]``.

    Missing edges are ``math.inf``.  ``None`` when no perfect matching exists.
    """
    n = len(cost)
    if any(len(row) != n for row in cost):
        raise ValueError("cost matrix must be square")
    if n == 0:
        return [], 0
    # 1-indexed arrays as in the classical formulation
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    match_col = [0] * (n + 1)  # column -> row
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match_col[0] = i
        j0 = 0
        minv = [math.inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match_col[j0]
            delta = math.inf
            j1 = -1
            row = cost[i0 - 1]
            for j in range(1, n + 1):
                if used[j]:
                    continue
                c = row[j - 1]
                if c != math.inf:
                    cur = c - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            if delta == math.inf:
                return None
            for j in range(n + 1):
                if used[j]:
                    u[match_col[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match_col[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match_col[j0] = match_col[j1]
            j0 = j1
    assign = [0] * n
    for j in range(1, n + 1):
        assign[match_col[j] - 1] = j - 1
    total = sum(cost[i][assign[i]] for i in range(n))
    return assign, total
