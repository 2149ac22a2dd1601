"""Exact linear algebra over any of the scalar fields.

Rows are sparse dicts ``{column: coefficient}``.  The pivot of a row is its
largest column, so reducing against a pivot row only introduces smaller
columns and reduction always terminates.
"""

from __future__ import annotations

from fractions import Fraction


def inverse(x):
    return Fraction(1, x) if isinstance(x, int) else 1 / x


def _axpy(row, f, other):
    """row -= f * other, in place, dropping zeros."""
    for k, v in other.items():
        new = row.get(k, 0) - f * v
        if new:
            row[k] = new
        elif k in row:
            del row[k]


class Echelon:
    """Incrementally maintained row echelon form."""

    def __init__(self, rows=()):
        self.pivots: dict = {}
        for r in rows:
            self.add(r)

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, row) -> dict:
        row = {k: v for k, v in row.items() if v}
        pivots = self.pivots
        while True:
            hits = [c for c in row if c in pivots]
            if not hits:
                return row
            c = max(hits)
            _axpy(row, row[c], pivots[c])

    def add(self, row) -> bool:
        """Insert ``row``; return True when it enlarged the span."""
        row = self.reduce(row)
        if not row:
            return False
        c = max(row)
        inv = inverse(row[c])
        self.pivots[c] = {k: v * inv for k, v in row.items()}
        return True

    def contains(self, row) -> bool:
        return not self.reduce(row)

    def fully_reduce(self):
        """Clear every pivot column out of the other rows (reduced echelon form)."""
        for c in sorted(self.pivots):
            row = self.pivots[c]
            lead = row.pop(c)
            reduced = self.reduce(row)
            reduced[c] = lead
            self.pivots[c] = reduced
        return self


def rank(rows) -> int:
    return Echelon(_as_sparse(r) for r in rows).rank


def _as_sparse(r):
    if isinstance(r, dict):
        return r
    return {j: v for j, v in enumerate(r) if v}


def nullspace(rows, ncols: int, zero=0) -> list:
    """Basis of {v : row . v = 0 for all rows}, as dense lists."""
    E = Echelon(_as_sparse(r) for r in rows).fully_reduce()
    free = [c for c in range(ncols) if c not in E.pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = 1 + zero
        for p, row in E.pivots.items():
            if f in row:
                v[p] = -row[f]
        basis.append(v)
    return basis


def row_space_basis(rows) -> list:
    """A reduced basis of the row span, sorted by pivot."""
    E = Echelon(_as_sparse(r) for r in rows).fully_reduce()
    return [E.pivots[c] for c in sorted(E.pivots)]


def same_span(rows_a, rows_b) -> bool:
    A = Echelon(_as_sparse(r) for r in rows_a)
    B = Echelon(_as_sparse(r) for r in rows_b)
    return A.rank == B.rank and all(B.contains(r) for r in A.pivots.values())


def solve(matrix, rhs, zero=0):
    """Solve ``matrix @ x = rhs`` for a square invertible matrix (dense)."""
    n = len(matrix)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = inverse(aug[col][col])
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n] + zero for row in aug]


def determinant(matrix):
    """Determinant by Gaussian elimination (dense, field entries)."""
    m = [list(r) for r in matrix]
    n = len(m)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0 * det
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = inverse(m[col][col])
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det
