"""Compiled interpreter for flat real-function programs.

Opcodes mirror ``virtualcalc.realfun.OPCODES``.  Domain violations surface
as non-finite values; the caller turns them into errors.
"""
from libc.math cimport sin, cos, exp, log, sqrt, fabs, isfinite, NAN
from libc.stdlib cimport malloc, free

import numpy as np

cdef enum:
    OP_PUSH = 0
    OP_X = 1
    OP_ADD = 2
    OP_SUB = 3
    OP_MUL = 4
    OP_DIV = 5
    OP_NEG = 6
    OP_POWI = 7
    OP_SIN = 8
    OP_COS = 9
    OP_EXP = 10
    OP_LN = 11
    OP_SQRT = 12
    OP_ABS = 13
    OP_PATCH = 14


cdef inline double _ipow(double b, long k) noexcept nogil:
    cdef double r = 1.0
    cdef long m = k if k >= 0 else -k
    while m:
        if m & 1:
            r *= b
        m >>= 1
        if m:
            b *= b
    if k < 0:
        return 1.0 / r
    return r


cdef enum:
    BLOCK = 256


cdef void _run_block(const int[::1] ops, const double[::1] a1, const double[::1] a2,
                     const double* x, Py_ssize_t m, double* st) noexcept nogil:
    """Evaluate the program at ``x[0:m]``; the result lands in ``st[0:m]``.

    The stack holds one row of ``BLOCK`` values per slot, so each opcode is
    dispatched once per block instead of once per point.
    """
    cdef Py_ssize_t pc, j
    cdef Py_ssize_t n = ops.shape[0]
    cdef int sp = -1
    cdef int op
    cdef double c, v
    cdef double* top
    cdef double* nxt
    cdef long k
    for pc in range(n):
        op = ops[pc]
        if op == OP_PUSH or op == OP_X:
            sp += 1
            top = st + sp * BLOCK
            if op == OP_PUSH:
                c = a1[pc]
                for j in range(m):
                    top[j] = c
            else:
                for j in range(m):
                    top[j] = x[j]
            continue
        if OP_ADD <= op <= OP_DIV:
            sp -= 1
            top = st + sp * BLOCK
            nxt = top + BLOCK
            if op == OP_ADD:
                for j in range(m):
                    top[j] = top[j] + nxt[j]
            elif op == OP_SUB:
                for j in range(m):
                    top[j] = top[j] - nxt[j]
            elif op == OP_MUL:
                for j in range(m):
                    top[j] = top[j] * nxt[j]
            else:
                for j in range(m):
                    top[j] = top[j] / nxt[j] if nxt[j] != 0.0 else NAN
            continue
        top = st + sp * BLOCK
        if op == OP_NEG:
            for j in range(m):
                top[j] = -top[j]
        elif op == OP_POWI:
            k = <long>a1[pc]
            for j in range(m):
                top[j] = NAN if (top[j] == 0.0 and k < 0) else _ipow(top[j], k)
        elif op == OP_SIN:
            for j in range(m):
                top[j] = sin(top[j])
        elif op == OP_COS:
            for j in range(m):
                top[j] = cos(top[j])
        elif op == OP_EXP:
            for j in range(m):
                top[j] = exp(top[j])
        elif op == OP_LN:
            for j in range(m):
                v = top[j]
                top[j] = log(v) if v > 0.0 else NAN
        elif op == OP_SQRT:
            for j in range(m):
                v = top[j]
                top[j] = sqrt(v) if v >= 0.0 else NAN
        elif op == OP_ABS:
            for j in range(m):
                top[j] = fabs(top[j])
        elif op == OP_PATCH:
            c = a1[pc]
            for j in range(m):
                if x[j] == c:
                    top[j] = a2[pc]


def eval_points(const int[::1] ops, const double[::1] a1, const double[::1] a2,
                int stack, const double[::1] xs):
    cdef Py_ssize_t i, j, m, n = xs.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double* st = <double*>malloc((stack + 1) * BLOCK * sizeof(double))
    if st == NULL:
        raise MemoryError()
    try:
        with nogil:
            i = 0
            while i < n:
                m = min(BLOCK, n - i)
                _run_block(ops, a1, a2, &xs[i], m, st)
                for j in range(m):
                    o[i + j] = st[j] if isfinite(st[j]) else NAN
                i += m
    finally:
        free(st)
    return out


def riemann_sum(const int[::1] ops, const double[::1] a1, const double[::1] a2,
                int stack, const double[::1] xs, const double[::1] zs):
    """Left-to-right sum of f(z_i) (x_i - x_{i-1}).

    Returns ``(sum, sum of absolute terms, index of the first bad tag or -1)``.
    """
    cdef Py_ssize_t i, j, m, n = zs.shape[0]
    cdef double total = 0.0, mass = 0.0, term, v
    cdef Py_ssize_t bad = -1
    cdef double* st = <double*>malloc((stack + 1) * BLOCK * sizeof(double))
    if st == NULL:
        raise MemoryError()
    try:
        with nogil:
            i = 0
            while i < n and bad < 0:
                m = min(BLOCK, n - i)
                _run_block(ops, a1, a2, &zs[i], m, st)
                for j in range(m):
                    v = st[j]
                    if not isfinite(v):
                        bad = i + j
                        break
                    term = v * (xs[i + j + 1] - xs[i + j])
                    total += term
                    mass += fabs(term)
                i += m
    finally:
        free(st)
    if bad >= 0:
        return float("nan"), float("nan"), bad
    return total, mass, -1
