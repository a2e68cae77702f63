# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pivot loop for a trivial value group over F_p (p < 2**31).

Mirrors ``_pykernel.triangularize_modp`` exactly (same pivot order, same
output layout) but keeps the matrix dense in C arrays.
"""
from libc.stdlib cimport malloc, calloc
from libc.stdlib cimport free as cfree


cdef inline long long _inv(long long a, long long p):
    cdef long long t = 0, nt = 1, r = p, nr = a % p, q, tmp
    if nr < 0:
        nr += p
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


cdef inline int _col_best(long long *col, long long *row_lv, int m):
    cdef int i, brow = -1
    cdef long long bl = 0
    for i in range(m):
        if col[i] != 0:
            if brow < 0 or row_lv[i] > bl:
                brow = i
                bl = row_lv[i]
    return brow


def triangularize_modp(row_lv, col_lv, columns, long long p, int forced=0,
                       bint free=True, bint track=True):
    cdef int m = len(row_lv)
    cdef int n = len(columns)
    cdef int i, j, k, step, i0, j0, r, pj, pr, na
    cdef long long f, inv, ps, s, v
    cdef long long *A = <long long *> calloc(max(m * n, 1), sizeof(long long))
    cdef long long *V = NULL
    cdef long long *rl = <long long *> malloc(max(m, 1) * sizeof(long long))
    cdef long long *cl = <long long *> malloc(max(n, 1) * sizeof(long long))
    cdef int *best = <int *> malloc(max(n, 1) * sizeof(int))
    cdef int *active = <int *> malloc(max(n, 1) * sizeof(int))
    cdef int *nzrows = <int *> malloc(max(m, 1) * sizeof(int))
    cdef int nnz
    cdef long long *pc
    cdef long long *cj
    cdef long long *vp
    cdef long long *vj
    pivots = []
    try:
        for i in range(m):
            rl[i] = row_lv[i]
        for j in range(n):
            cl[j] = col_lv[j]
            for i, v in columns[j].items():
                v %= p
                if v < 0:
                    v += p
                A[j * m + i] = v
        if track:
            V = <long long *> calloc(max(n * n, 1), sizeof(long long))
            for j in range(n):
                V[j * n + j] = 1
        for j in range(n):
            best[j] = _col_best(&A[j * m], rl, m)
            active[j] = j
        na = n
        step = 0
        while na > 0:
            if step < forced:
                j0 = step
                step += 1
                for k in range(na):
                    if active[k] == j0:
                        active[k] = active[na - 1]
                        break
                na -= 1
                # keep the active list sorted so ties resolve by column index
                _sort_ints(active, na)
                if best[j0] < 0:
                    continue
                i0 = best[j0]
            else:
                if not free:
                    break
                pj = -1
                pr = -1
                ps = 0
                for k in range(na):
                    j = active[k]
                    r = best[j]
                    if r < 0:
                        continue
                    s = rl[r] - cl[j]
                    if pj < 0 or s > ps or (s == ps and r < pr):
                        ps = s
                        pr = r
                        pj = j
                if pj < 0:
                    break
                i0 = pr
                j0 = pj
                for k in range(na):
                    if active[k] == j0:
                        active[k] = active[na - 1]
                        break
                na -= 1
                _sort_ints(active, na)
            pivots.append((i0, j0))
            pc = &A[j0 * m]
            nnz = 0
            for i in range(m):
                if pc[i] != 0:
                    nzrows[nnz] = i
                    nnz += 1
            inv = _inv(pc[i0], p)
            for k in range(na):
                j = active[k]
                cj = &A[j * m]
                if cj[i0] == 0:
                    continue
                f = (cj[i0] * inv) % p
                for r in range(nnz):
                    i = nzrows[r]
                    cj[i] = (cj[i] - f * pc[i]) % p
                    if cj[i] < 0:
                        cj[i] += p
                if track:
                    vp = &V[j0 * n]
                    vj = &V[j * n]
                    for i in range(n):
                        if vp[i] != 0:
                            vj[i] = (vj[i] - f * vp[i]) % p
                            if vj[i] < 0:
                                vj[i] += p
                best[j] = _col_best(cj, rl, m)
        out_cols = []
        for j in range(n):
            d = {}
            for i in range(m):
                if A[j * m + i] != 0:
                    d[i] = A[j * m + i]
            out_cols.append(d)
        out_trans = None
        if track:
            out_trans = []
            for j in range(n):
                d = {}
                for i in range(n):
                    if V[j * n + i] != 0:
                        d[i] = V[j * n + i]
                out_trans.append(d)
        return out_cols, out_trans, pivots
    finally:
        cfree(A)
        if V != NULL:
            cfree(V)
        cfree(rl)
        cfree(cl)
        cfree(best)
        cfree(active)
        cfree(nzrows)


cdef void _sort_ints(int *a, int n):
    cdef int i, j, x
    for i in range(1, n):
        x = a[i]
        j = i - 1
        while j >= 0 and a[j] > x:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x
