"""Independent brute-force oracles. Nothing here imports flagblock."""

import itertools
from fractions import Fraction


def has_increasing_triple(image):
    return any(a < b < c for a, b, c in itertools.combinations(image, 3))


def longest_increasing(image):
    best = 0
    for k in range(len(image), 0, -1):
        for sub in itertools.combinations(image, k):
            if all(x < y for x, y in zip(sub, sub[1:])):
                return k
    return best


def avoiders(n):
    return [p for p in itertools.permutations(range(1, n + 1)) if not has_increasing_triple(p)]


def cells_of(image):
    return {(i, c) for i, c in enumerate(image, start=1)}


def blocks(cells, n, perms=None):
    perms = avoiders(n) if perms is None else perms
    cells = set(cells)
    return all(cells_of(p) & cells for p in perms)


def irredundant(cells, n, perms=None):
    perms = avoiders(n) if perms is None else perms
    cells = set(cells)
    if not blocks(cells, n, perms):
        return False
    return all(not blocks(cells - {b}, n, perms) for b in cells)


def flag_cells(n, m, t):
    # straight from the picture: pole rows 1..n-t in column m, flag block to its left
    out = set()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if j == m and i <= n - t:
                out.add((i, j))
            if i <= n - m + 1 and m - t <= j <= m - 1:
                out.add((i, j))
    return out


def fraction_rank(rows):
    """Plain Gaussian elimination over Fraction."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return 0
    rank = 0
    ncols = len(mat[0])
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col] / mat[rank][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def perm_vector(image):
    n = len(image)
    v = [0] * (n * n)
    for i, c in enumerate(image):
        v[i * n + c - 1] = 1
    return v


def all_irredundant_blockers(n):
    """Every subset of the n*n grid filtered by irredundancy (bitmask walk)."""
    perms = avoiders(n)
    pmasks = []
    for p in perms:
        m = 0
        for i, c in enumerate(p):
            m |= 1 << (i * n + c - 1)
        pmasks.append(m)

    def hits_all(b):
        return all(pm & b for pm in pmasks)

    out = []
    for b in range(1 << (n * n)):
        if not hits_all(b):
            continue
        bits = [1 << k for k in range(n * n) if b >> k & 1]
        if all(not hits_all(b & ~bit) for bit in bits):
            out.append(frozenset((k // n + 1, k % n + 1) for k in range(n * n) if b >> k & 1))
    return out
