"""Exact integer and mod-p linear algebra on small dense matrices."""

from __future__ import annotations


def int_det(rows) -> int:
    """Determinant over Z by Bareiss fraction-free elimination."""
    M = [list(r) for r in rows]
    n = len(M)
    if n == 0:
        return 1
    if any(len(r) != n for r in M):
        raise ValueError("matrix is not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def nullspace_mod(rows, ncols: int, p: int):
    """Basis of {x : rows @ x = 0 mod p}, in reduced echelon order.

    Pivots are taken at the lowest available row for each column scanned
    left to right, so the basis is reproducible.
    """
    M = [[v % p for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [v * inv % p for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fc] % p
        basis.append(v)
    return basis


def unit_reduce(rows, ncols: int):
    """Eliminate on +-1 pivots with sparse integer row operations.

    Rows may be dense lists or sparse ``{column: value}`` dicts (not modified).
    Returns ``(k, residual)``: the number of pivots taken and the dense
    residual matrix on the rows and columns left over.  Unit pivots are
    invertible over Z and every Z/p, so |det M| = |det residual| for square
    M and rank_p M = k + rank_p residual.  Pivots are chosen Markowitz-style
    to keep fill low, taking the first pivot of cost at most 2.
    """
    R = {}
    cols = {}
    for i, r in enumerate(rows):
        d = {j: v for j, v in r.items() if v} if isinstance(r, dict) else \
            {j: v for j, v in enumerate(r) if v}
        R[i] = d
        for j in d:
            cols.setdefault(j, set()).add(i)
    k = 0
    done = set()
    while True:
        best = None
        for i, d in R.items():
            for j, v in d.items():
                if v in (1, -1):
                    cost = (len(d) - 1) * (len(cols[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
            if best is not None and best[0] <= 2:
                break
        if best is None:
            break
        _, i, j = best
        prow = R.pop(i)
        piv = prow[j]
        for c in prow:
            cols[c].discard(i)
        for t in list(cols[j]):
            d = R[t]
            f = d[j] * piv  # piv is its own inverse
            for c, v in prow.items():
                nv = d.get(c, 0) - f * v
                if nv:
                    if c not in d:
                        cols[c].add(t)
                    d[c] = nv
                elif c in d:
                    del d[c]
                    cols[c].discard(t)
        del cols[j]
        done.add(j)
        k += 1
    keep = [c for c in range(ncols) if c not in done]
    return k, [[R[i].get(c, 0) for c in keep] for i in sorted(R)]
