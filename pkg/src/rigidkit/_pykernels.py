"""Pure-Python elimination kernels; same contracts as ``_ckernels``."""

from __future__ import annotations


def _to_rows(m) -> list[list[int]]:
    return [[int(x) for x in row] for row in m]


def rank_mod(m, p: int) -> int:
    w = _to_rows(m)
    rows = len(w)
    cols = len(w[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if w[i][c]), None)
        if piv is None:
            continue
        w[r], w[piv] = w[piv], w[r]
        inv = pow(w[r][c], p - 2, p)
        top = [x * inv % p for x in w[r]]
        w[r] = top
        for i in range(r + 1, rows):
            f = w[i][c]
            if f:
                w[i] = [(a - f * b) % p for a, b in zip(w[i], top)]
        r += 1
        if r == rows:
            break
    return r


def row_basis_mod(m, p: int) -> list[int]:
    basis: list[tuple[int, list[int]]] = []
    keep = []
    for i, row in enumerate(_to_rows(m)):
        for lead, brow in basis:
            f = row[lead]
            if f:
                row = [(a - f * b) % p for a, b in zip(row, brow)]
        lead = next((j for j, x in enumerate(row) if x), None)
        if lead is None:
            continue
        inv = pow(row[lead], p - 2, p)
        basis.append((lead, [x * inv % p for x in row]))
        keep.append(i)
    return keep
