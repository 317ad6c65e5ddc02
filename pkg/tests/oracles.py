"""Independent reference computations used to derive frozen test values.

Nothing here calls the library's Smith form, solvers or subgroup code.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import gcd


def det(M):
    """Determinant by Fraction elimination."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return int(d)


def determinantal_divisors(A):
    """Invariant factors ``d_k = D_k / D_{k-1}``, ``D_k`` the gcd of k-minors."""
    if not A or not A[0]:
        return []
    m, n = len(A), len(A[0])
    D = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, det([[A[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        D.append(g)
    return [D[k] // D[k - 1] for k in range(1, len(D))]


def group_of_relations(n, rels):
    """(free_rank, invariant factors >= 2) of Z^n / rowspan(rels)."""
    ds = determinantal_divisors([list(r) for r in rels]) if rels else []
    return n - len(ds), [d for d in ds if d != 1]


def finite_elements(orders):
    return list(product(*(range(d) for d in orders)))


def apply(M, v, orders):
    """Image of ``v`` under ``M`` reduced mod the cyclic codomain orders."""
    return tuple(sum(M[a][b] * v[b] for b in range(len(v))) % orders[a] for a in range(len(orders)))
