"""Pure-Python elimination kernels.

All three kernels run the same pivot loop on sparse columns (``{row: value}``
dicts).  A pivot pair ``(i, j)`` maximizes

    row_level[i] - nu(A[i][j]) - col_level[j]

with ties going to the smallest row index and then the smallest column
index.  The first ``forced`` iterations instead take column ``t`` in order
and only optimize over the row; the orthogonality of the finished pivot
columns depends only on that within-column optimality and on the zero
pattern the elimination creates, so best approximation and Gram-Schmidt
can reuse the loop with a forced column order.

Each kernel returns ``(columns, transform, pivots)``.  ``transform[j]`` maps
original column indices to coefficients, so evolved column ``j`` equals
``sum(transform[j][k] * original[k])``; it is ``None`` when tracking is off.
``pivots`` lists ``(row, column)`` in the order they were chosen.
"""
from __future__ import annotations

from typing import Callable, Dict, List, Optional, Sequence, Tuple

Column = Dict[int, object]
Result = Tuple[List[Column], Optional[List[Column]], List[Tuple[int, int]]]


def _eliminate(cols, trans, active, i0, j0):
    """Clear row ``i0`` from every active column using pivot column ``j0``."""
    pc = cols[j0]
    pv = pc[i0]
    pt = trans[j0] if trans is not None else None
    touched = []
    for j in active:
        cj = cols[j]
        a = cj.get(i0)
        if a is None:
            continue
        f = a / pv
        for i, b in pc.items():
            if i in cj:
                s = cj[i] - f * b
                if s:
                    cj[i] = s
                else:
                    del cj[i]
            else:
                cj[i] = -(f * b)
        cj.pop(i0, None)
        if pt is not None:
            tj = trans[j]
            for k, b in pt.items():
                if k in tj:
                    s = tj[k] - f * b
                    if s:
                        tj[k] = s
                    else:
                        del tj[k]
                else:
                    tj[k] = -(f * b)
        touched.append(j)
    return touched


def triangularize_generic(
    row_levels: Sequence,
    col_levels: Sequence,
    columns: Sequence[Column],
    nu: Callable,
    one,
    forced: int = 0,
    free: bool = True,
    track: bool = True,
) -> Result:
    """Pivot loop over an arbitrary valued field (levels are QuadReals)."""
    n = len(columns)
    cols = [dict(c) for c in columns]
    trans = [{j: one} for j in range(n)] if track else None

    def col_best(j):
        c = cols[j]
        best = None
        brow = -1
        for i in sorted(c):
            v = row_levels[i] - nu(c[i])
            if best is None or v > best:
                best, brow = v, i
        return (best, brow) if brow >= 0 else None

    best = [col_best(j) for j in range(n)]
    active = list(range(n))
    pivots: List[Tuple[int, int]] = []

    step = 0
    while active:
        if step < forced:
            j0 = step
            step += 1
            active.remove(j0)
            if best[j0] is None:
                continue
            i0 = best[j0][1]
        else:
            if not free:
                break
            pick = None
            for j in active:
                b = best[j]
                if b is None:
                    continue
                s = b[0] - col_levels[j]
                if pick is None or s > pick[0] or (s == pick[0] and b[1] < pick[1]):
                    pick = (s, b[1], j)
            if pick is None:
                break
            _, i0, j0 = pick
            active.remove(j0)
        pivots.append((i0, j0))
        for j in _eliminate(cols, trans, active, i0, j0):
            best[j] = col_best(j)
    return cols, trans, pivots


def triangularize_flat(
    row_lv: Sequence[int],
    col_lv: Sequence[int],
    columns: Sequence[Column],
    one,
    forced: int = 0,
    free: bool = True,
    track: bool = True,
) -> Result:
    """Pivot loop for a trivial value group: every nonzero entry has nu = 0,
    so the score is ``row_lv[i] - col_lv[j]`` and levels can be integers."""
    n = len(columns)
    cols = [dict(c) for c in columns]
    trans = [{j: one} for j in range(n)] if track else None

    def col_best(j):
        brow, bl = -1, None
        for i in cols[j]:
            lv = row_lv[i]
            if bl is None or lv > bl or (lv == bl and i < brow):
                brow, bl = i, lv
        return brow

    best = [col_best(j) for j in range(n)]
    active = list(range(n))
    pivots: List[Tuple[int, int]] = []
    step = 0
    while active:
        if step < forced:
            j0 = step
            step += 1
            active.remove(j0)
            if best[j0] < 0:
                continue
            i0 = best[j0]
        else:
            if not free:
                break
            ps = pr = pj = None
            for j in active:
                r = best[j]
                if r < 0:
                    continue
                s = row_lv[r] - col_lv[j]
                if ps is None or s > ps or (s == ps and r < pr):
                    ps, pr, pj = s, r, j
            if pj is None:
                break
            i0, j0 = pr, pj
            active.remove(j0)
        pivots.append((i0, j0))
        for j in _eliminate(cols, trans, active, i0, j0):
            best[j] = col_best(j)
    return cols, trans, pivots


def triangularize_modp(
    row_lv: Sequence[int],
    col_lv: Sequence[int],
    columns: Sequence[Dict[int, int]],
    p: int,
    forced: int = 0,
    free: bool = True,
    track: bool = True,
) -> Result:
    """Same loop as :func:`triangularize_flat` on residues stored as ints."""
    n = len(columns)
    cols = [{i: v % p for i, v in c.items() if v % p} for c in columns]
    trans = [{j: 1} for j in range(n)] if track else None

    def col_best(j):
        brow, bl = -1, None
        for i in cols[j]:
            lv = row_lv[i]
            if bl is None or lv > bl or (lv == bl and i < brow):
                brow, bl = i, lv
        return brow

    def axpy(dst, src, f):
        for i, b in src.items():
            s = (dst.get(i, 0) - f * b) % p
            if s:
                dst[i] = s
            else:
                dst.pop(i, None)

    best = [col_best(j) for j in range(n)]
    active = list(range(n))
    pivots: List[Tuple[int, int]] = []
    step = 0
    while active:
        if step < forced:
            j0 = step
            step += 1
            active.remove(j0)
            if best[j0] < 0:
                continue
            i0 = best[j0]
        else:
            if not free:
                break
            ps = pr = pj = None
            for j in active:
                r = best[j]
                if r < 0:
                    continue
                s = row_lv[r] - col_lv[j]
                if ps is None or s > ps or (s == ps and r < pr):
                    ps, pr, pj = s, r, j
            if pj is None:
                break
            i0, j0 = pr, pj
            active.remove(j0)
        pivots.append((i0, j0))
        pc = cols[j0]
        inv = pow(pc[i0], -1, p)
        for j in active:
            a = cols[j].get(i0)
            if a is None:
                continue
            f = a * inv % p
            axpy(cols[j], pc, f)
            if trans is not None:
                axpy(trans[j], trans[j0], f)
            best[j] = col_best(j)
    return cols, trans, pivots
