# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops (see ``_kernels_py`` for the contract)."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

DEF OP_EQ = 0
DEF OP_GE = 1


def f2_rank(bits):
    """Rank over GF(2); rows are packed into 64-bit words."""
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef Py_ssize_t n_rows = b.shape[0], n_cols = b.shape[1]
    cdef Py_ssize_t n_words = (n_cols + 63) // 64
    if n_rows == 0 or n_cols == 0:
        return 0
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] w = np.zeros((n_rows, n_words), dtype=np.uint64)
    cdef Py_ssize_t i, j, r, col, word, pivot
    cdef uint64_t mask, tmp
    for i in range(n_rows):
        for j in range(n_cols):
            if b[i, j] & 1:
                w[i, j >> 6] |= (<uint64_t>1) << (j & 63)
    cdef Py_ssize_t rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        word = col >> 6
        mask = (<uint64_t>1) << (col & 63)
        pivot = -1
        for r in range(rank, n_rows):
            if w[r, word] & mask:
                pivot = r
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for j in range(n_words):
                tmp = w[pivot, j]
                w[pivot, j] = w[rank, j]
                w[rank, j] = tmp
        for r in range(rank + 1, n_rows):
            if w[r, word] & mask:
                for j in range(word, n_words):
                    w[r, j] ^= w[rank, j]
        rank += 1
    return rank


cdef inline bint _holds(Py_ssize_t c, int64_t[:] con_rows, int64_t[:, :] coef,
                        int64_t[:] rhs, int64_t[:] ops, int64_t[:] comps,
                        Py_ssize_t n_comp) nogil:
    cdef Py_ssize_t r, j
    cdef int64_t s
    for r in range(con_rows[c], con_rows[c + 1]):
        s = 0
        for j in range(n_comp):
            s += coef[r, j] * comps[j]
        if ops[r] == OP_EQ:
            if s != rhs[r]:
                return False
        elif ops[r] == OP_GE:
            if s < rhs[r]:
                return False
        elif s > rhs[r]:
            return False
    return True


def enumerate_linear(values, dom_start, dom_size, comp_off, width,
                     coef, rhs, ops, con_rows, con_level):
    cdef int64_t[:, :] vals = np.ascontiguousarray(values, dtype=np.int64)
    cdef int64_t[:] start = np.ascontiguousarray(dom_start, dtype=np.int64)
    cdef int64_t[:] size = np.ascontiguousarray(dom_size, dtype=np.int64)
    cdef int64_t[:] off = np.ascontiguousarray(comp_off, dtype=np.int64)
    cdef int64_t[:] wid = np.ascontiguousarray(width, dtype=np.int64)
    cdef int64_t[:, :] a = np.ascontiguousarray(coef, dtype=np.int64)
    cdef int64_t[:] b = np.ascontiguousarray(rhs, dtype=np.int64)
    cdef int64_t[:] o = np.ascontiguousarray(ops, dtype=np.int64)
    cdef int64_t[:] crows = np.ascontiguousarray(con_rows, dtype=np.int64)
    cdef int64_t[:] clev = np.ascontiguousarray(con_level, dtype=np.int64)
    cdef Py_ssize_t n_vars = size.shape[0]
    cdef Py_ssize_t n_cons = clev.shape[0]
    killed_arr = np.zeros(n_cons, dtype=np.int64)
    witness_arr = -np.ones((n_cons, max(n_vars, 1)), dtype=np.int64)
    survivors = []
    if n_vars == 0:
        return killed_arr, witness_arr[:, :0], survivors
    cdef int64_t[:] killed = killed_arr
    cdef int64_t[:, :] witness = witness_arr
    cdef Py_ssize_t n_comp = off[n_vars - 1] + wid[n_vars - 1]
    comps_arr = np.zeros(max(n_comp, 1), dtype=np.int64)
    cdef int64_t[:] comps = comps_arr
    suffix_arr = np.ones(n_vars + 1, dtype=np.int64)
    cdef int64_t[:] suffix = suffix_arr
    cdef Py_ssize_t v, c, j, level
    for v in range(n_vars - 1, -1, -1):
        suffix[v] = suffix[v + 1] * size[v]
    # constraints are sorted by level; lev_lo/lev_hi bound each level's slice
    lev_lo_arr = np.zeros(n_vars, dtype=np.int64)
    lev_hi_arr = np.zeros(n_vars, dtype=np.int64)
    cdef int64_t[:] lev_lo = lev_lo_arr
    cdef int64_t[:] lev_hi = lev_hi_arr
    c = 0
    for v in range(n_vars):
        while c < n_cons and clev[c] < v:
            c += 1
        lev_lo[v] = c
        j = c
        while j < n_cons and clev[j] == v:
            j += 1
        lev_hi[v] = j
    idx_arr = np.full(n_vars, -1, dtype=np.int64)
    cdef int64_t[:] idx = idx_arr
    cdef int64_t failed
    level = 0
    while level >= 0:
        idx[level] += 1
        if idx[level] >= size[level]:
            idx[level] = -1
            level -= 1
            continue
        for j in range(wid[level]):
            comps[off[level] + j] = vals[start[level] + idx[level], j]
        failed = -1
        for c in range(lev_lo[level], lev_hi[level]):
            if not _holds(c, crows, a, b, o, comps, n_comp):
                failed = c
                break
        if failed >= 0:
            killed[failed] += suffix[level + 1]
            if witness[failed, 0] < 0:
                for j in range(n_vars):
                    witness[failed, j] = idx[j] if j <= level else 0
            continue
        if level == n_vars - 1:
            survivors.append(tuple(idx_arr.tolist()))
        else:
            level += 1
    return killed_arr, witness_arr, survivors
