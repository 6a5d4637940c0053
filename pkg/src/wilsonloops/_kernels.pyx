# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled word kernels; same contracts as ``_kernels_py``."""

from libc.stdlib cimport malloc, free


cdef inline char _inverse(char m):
    if m == 82:   # R
        return 76
    if m == 76:   # L
        return 82
    if m == 85:   # U
        return 68
    return 85     # D -> U


cdef inline void _step(char m, long *dx, long *dy):
    if m == 82:
        dx[0] = 1; dy[0] = 0
    elif m == 76:
        dx[0] = -1; dy[0] = 0
    elif m == 85:
        dx[0] = 0; dy[0] = 1
    else:
        dx[0] = 0; dy[0] = -1


def reduce_word(long x, long y, str moves):
    cdef bytes raw = moves.encode("ascii")
    cdef const char *src = raw
    cdef Py_ssize_t n = len(raw)
    cdef char *stack = <char *> malloc(n + 1)
    cdef Py_ssize_t top = 0, i, lo, hi
    cdef long dx = 0, dy = 0
    if stack == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            if top > 0 and stack[top - 1] == _inverse(src[i]):
                top -= 1
            else:
                stack[top] = src[i]
                top += 1
        lo = 0
        hi = top
        while hi - lo >= 2 and stack[lo] == _inverse(stack[hi - 1]):
            _step(stack[lo], &dx, &dy)
            x += dx
            y += dy
            lo += 1
            hi -= 1
        return x, y, stack[lo:hi].decode("ascii")
    finally:
        free(stack)


def least_rotation(str moves):
    cdef bytes raw = (moves + moves).encode("ascii")
    cdef const char *s = raw
    cdef Py_ssize_t n = len(moves)
    cdef Py_ssize_t m = 2 * n, j, k = 0, i
    cdef Py_ssize_t *f
    cdef char sj
    if n == 0:
        return 0
    f = <Py_ssize_t *> malloc(m * sizeof(Py_ssize_t))
    if f == NULL:
        raise MemoryError()
    try:
        for j in range(m):
            f[j] = -1
        for j in range(1, m):
            sj = s[j]
            i = f[j - k - 1]
            while i != -1 and sj != s[k + i + 1]:
                if sj < s[k + i + 1]:
                    k = j - i - 1
                i = f[i]
            if sj != s[k + i + 1]:
                if sj < s[k]:
                    k = j
                f[j - k] = -1
            else:
                f[j - k] = i + 1
        return k % n
    finally:
        free(f)


def displacement(str moves):
    cdef long dx = 0, dy = 0, sx = 0, sy = 0
    cdef bytes raw = moves.encode("ascii")
    cdef const char *s = raw
    cdef Py_ssize_t i
    for i in range(len(raw)):
        _step(s[i], &sx, &sy)
        dx += sx
        dy += sy
    return dx, dy


def height_map(long x, long y, str moves):
    cdef bytes raw = moves.encode("ascii")
    cdef const char *s = raw
    cdef Py_ssize_t n = len(raw), i, t, cnt
    cdef long acc, cx, bx, row, nx
    cdef list edges = []
    for i in range(n):
        if s[i] == 85:
            edges.append((y, x, 1))
            y += 1
        elif s[i] == 68:
            y -= 1
            edges.append((y, x, -1))
        elif s[i] == 82:
            x += 1
        else:
            x -= 1
    edges.sort()
    cnt = len(edges)
    out = {}
    acc = 0
    for t in range(cnt):
        row, cx, w = edges[t]
        if t > 0 and edges[t - 1][0] != row:
            acc = 0
        acc += w
        if acc != 0 and t + 1 < cnt and edges[t + 1][0] == row:
            nx = edges[t + 1][1]
            for bx in range(cx, nx):
                out[(bx, row)] = acc
    return out
