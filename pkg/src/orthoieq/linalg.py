"""Dense linear algebra over Scalars, sized for Hankel systems (tens of rows).

Solves use Gaussian elimination with full pivoting at working precision.
Determinants use fraction-free Bareiss elimination in exact mode and
partially pivoted LU in float mode.
"""

from __future__ import annotations

from .errors import SingularSystemError
from .numeric import Scalar


def _magnitudes(matrix):
    return [[entry.magnitude() for entry in row] for row in matrix]


def solve_full_pivot(matrix, rhs):
    """Solve A x = b. Raises SingularSystemError when no pivot is available."""
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    col_of = list(range(n))  # col_of[j] = original column stored at position j
    for step in range(n):
        best = None
        best_mag = None
        for r in range(step, n):
            for c in range(step, n):
                if a[r][c].is_zero():
                    continue
                mag = a[r][c].magnitude()
                if best is None or mag > best_mag:
                    best, best_mag = (r, c), mag
        if best is None:
            raise SingularSystemError(f"no pivot at elimination step {step}")
        r, c = best
        if r != step:
            a[step], a[r] = a[r], a[step]
        if c != step:
            for row in a:
                row[step], row[c] = row[c], row[step]
            col_of[step], col_of[c] = col_of[c], col_of[step]
        pivot = a[step][step]
        for r in range(step + 1, n):
            if a[r][step].is_zero():
                continue
            factor = a[r][step] / pivot
            for c in range(step, n + 1):
                a[r][c] = a[r][c] - factor * a[step][c]
    x = [None] * n
    for i in range(n - 1, -1, -1):
        acc = a[i][n]
        for j in range(i + 1, n):
            acc = acc - a[i][j] * x[j]
        x[i] = acc / a[i][i]
    out = [None] * n
    for pos, col in enumerate(col_of):
        out[col] = x[pos]
    return out


def determinant(matrix) -> Scalar:
    if not matrix:
        return Scalar.exact(1)
    if matrix[0][0].is_exact:
        return _det_bareiss(matrix)
    return _det_lu(matrix)


def _det_bareiss(matrix) -> Scalar:
    a = [list(row) for row in matrix]
    n = len(a)
    sign = 1
    prev = Scalar.exact(1)
    for i in range(n - 1):
        if a[i][i].is_zero():
            for r in range(i + 1, n):
                if not a[r][i].is_zero():
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return Scalar.exact(0)
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) / prev
            a[r][i] = Scalar.exact(0)
        prev = a[i][i]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def _det_lu(matrix) -> Scalar:
    det, _ = det_lu_flag(matrix, None)
    return det


def det_lu_flag(matrix, rel_threshold):
    """Partially pivoted LU determinant plus a pivot-collapse flag.

    The matrix counts as numerically singular when some pivot falls to
    rel_threshold (an mpf) times the magnitude of the largest entry of the
    remaining submatrix: at that point the pivot is indistinguishable from
    elimination noise. Pass rel_threshold=None to skip the check.
    """
    a = [list(row) for row in matrix]
    n = len(a)
    sign = 1
    det = None
    collapsed = False
    for i in range(n):
        best = i
        best_mag = a[i][i].magnitude()
        for r in range(i + 1, n):
            mag = a[r][i].magnitude()
            if mag > best_mag:
                best, best_mag = r, mag
        if rel_threshold is not None:
            sub_max = best_mag
            for r in range(i, n):
                for c in range(i, n):
                    mag = a[r][c].magnitude()
                    if mag > sub_max:
                        sub_max = mag
            if best_mag <= rel_threshold * max(1, sub_max):
                collapsed = True
        if a[best][i].is_zero():
            zero = a[0][0] - a[0][0]
            return zero, True
        if best != i:
            a[i], a[best] = a[best], a[i]
            sign = -sign
        pivot = a[i][i]
        det = pivot if det is None else det * pivot
        for r in range(i + 1, n):
            if a[r][i].is_zero():
                continue
            factor = a[r][i] / pivot
            for c in range(i + 1, n):
                a[r][c] = a[r][c] - factor * a[i][c]
    return (-det if sign < 0 else det), collapsed
