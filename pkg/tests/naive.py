"""Slow reference implementations used as oracles by the test suite.

Everything here works on plain nested lists with Python scalar arithmetic and
enumerates search spaces exhaustively. Nothing imports the package under test.
"""

import math


def point_cost(u, v):
    # squared euclidean over all channels, no square root
    return sum((float(x) - float(y)) ** 2 for x, y in zip(u, v))


def cost_table(a, b):
    return [[point_cost(u, v) for v in b] for u in a]


def brute_force_dtw_cost(a, b):
    """Minimum alignment cost over every monotone warping path, by enumeration.

    A path starts at (0, 0), ends at (m-1, n-1), and each step advances one or
    both indices by exactly one. No pruning, no memoisation: this is the oracle.
    """
    m, n = len(a), len(b)
    table = cost_table(a, b)
    best = math.inf
    stack = [(0, 0, table[0][0])]
    while stack:
        i, j, acc = stack.pop()
        if i == m - 1 and j == n - 1:
            if acc < best:
                best = acc
            continue
        if i + 1 < m and j + 1 < n:
            stack.append((i + 1, j + 1, acc + table[i + 1][j + 1]))
        if i + 1 < m:
            stack.append((i + 1, j, acc + table[i + 1][j]))
        if j + 1 < n:
            stack.append((i, j + 1, acc + table[i][j + 1]))
    return best


def enumerate_paths(m, n):
    """Yield every valid warping path between lengths m and n as index tuples."""
    out = []
    stack = [((0, 0),)]
    while stack:
        path = stack.pop()
        i, j = path[-1]
        if i == m - 1 and j == n - 1:
            out.append(path)
            continue
        if i + 1 < m and j + 1 < n:
            stack.append(path + ((i + 1, j + 1),))
        if i + 1 < m:
            stack.append(path + ((i + 1, j),))
        if j + 1 < n:
            stack.append(path + ((i, j + 1),))
    return out


def path_cost(path, table):
    return sum(table[i][j] for i, j in path)
