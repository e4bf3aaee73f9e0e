"""Independent SNF oracle: invariant factors from gcds of minors."""

import itertools
from math import gcd


def bareiss_det(M):
    n = len(M)
    if n == 0:
        return 1
    A = [row[:] for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def minor_gcd_invariants(M):
    """d_k = g_k / g_{k-1}, where g_k is the gcd of all k x k minors."""
    rows, cols = len(M), len(M[0]) if M else 0
    gs = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                g = gcd(g, bareiss_det([[M[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        gs.append(g)
    return tuple(gs[i] // gs[i - 1] for i in range(1, len(gs)))


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]
