"""Pure-Python word kernels.

Loops are handled as a start vertex plus a move string over ``"RULD"``.
These functions are the reference versions of the routines in
``_kernels.pyx``; both must return identical results.
"""

STEP = {"R": (1, 0), "U": (0, 1), "L": (-1, 0), "D": (0, -1)}
INVERSE = {"R": "L", "L": "R", "U": "D", "D": "U"}


def reduce_word(x, y, moves):
    """Cyclically remove backtracks; returns the new start and move string."""
    stack = []
    for m in moves:
        if stack and stack[-1] == INVERSE[m]:
            stack.pop()
        else:
            stack.append(m)
    # wrap-around pairs: peel the first move off while it cancels the last
    lo, hi = 0, len(stack)
    while hi - lo >= 2 and stack[lo] == INVERSE[stack[hi - 1]]:
        dx, dy = STEP[stack[lo]]
        x += dx
        y += dy
        lo += 1
        hi -= 1
    return x, y, "".join(stack[lo:hi])


def least_rotation(moves):
    """Index of the lexicographically least rotation (Booth's algorithm)."""
    n = len(moves)
    if n == 0:
        return 0
    s = moves + moves
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
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


def displacement(moves):
    dx = dy = 0
    for m in moves:
        sx, sy = STEP[m]
        dx += sx
        dy += sy
    return dx, dy


def height_map(x, y, moves):
    """Nonzero heights of the loop, keyed by plaquette base ``(bx, by)``.

    The height of the plaquette with lower-left corner ``(bx, by)`` is the
    signed count of vertical edges at columns ``<= bx`` in row ``by``:
    an upward edge contributes +1, a downward edge -1.
    """
    rows = {}
    for m in moves:
        if m == "U":
            rows.setdefault(y, {})
            rows[y][x] = rows[y].get(x, 0) + 1
            y += 1
        elif m == "D":
            y -= 1
            rows.setdefault(y, {})
            rows[y][x] = rows[y].get(x, 0) - 1
        elif m == "R":
            x += 1
        else:
            x -= 1
    out = {}
    for row, cols in rows.items():
        acc = 0
        xs = sorted(cols)
        for i, cx in enumerate(xs):
            acc += cols[cx]
            if acc and i + 1 < len(xs):
                for bx in range(cx, xs[i + 1]):
                    out[(bx, row)] = acc
    return out
