"""Exact Gaussian elimination over ``fractions.Fraction``.

Only used as an independent oracle, so it favours plainness over speed.
"""

from fractions import Fraction


def solve_rational(matrix, rhs):
    """Solve ``matrix @ x = rhs`` exactly; the matrix must be square and
    nonsingular. Inputs are copied and coerced to ``Fraction``."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    if any(len(row) != n + 1 for row in a):
        raise ValueError("matrix must be square and match rhs length")
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError(f"singular system (column {col})")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        row = a[col]
        for c in range(col, n + 1):
            row[c] /= p
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if f == 0:
                continue
            target = a[r]
            for c in range(col, n + 1):
                target[c] -= f * row[c]
    return [a[r][n] for r in range(n)]
