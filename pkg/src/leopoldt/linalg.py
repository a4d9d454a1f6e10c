"""Gaussian elimination over F_q on arrays of element codes."""

from __future__ import annotations

import numpy as np

from .arith import FieldCtx


def _as_codes(ctx: FieldCtx, M) -> np.ndarray:
    """Accept an int array of codes or nested lists of FqElem/ints."""
    if isinstance(M, np.ndarray):
        return M.astype(np.int64)
    rows = [[x.code if hasattr(x, "code") else int(x) % ctx.p for x in row] for row in M]
    return np.array(rows, dtype=np.int64).reshape(len(rows), -1)


def rref(ctx: FieldCtx, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = _as_codes(ctx, M).copy()
    rows, cols = A.shape
    pivots, r = [], 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if not len(nz):
            continue
        k = r + int(nz[0])
        A[[r, k]] = A[[k, r]]
        A[r] = ctx.mul(A[r], int(ctx.inv(int(A[r, c]))))
        for i in np.flatnonzero(A[:, c]):
            if i != r:
                A[i] = ctx.sub(A[i], ctx.mul(A[r], int(A[i, c])))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(ctx: FieldCtx, M) -> int:
    return len(rref(ctx, M)[1])


def nullspace(ctx: FieldCtx, M) -> np.ndarray:
    """Basis (as rows) of {x : M x = 0}."""
    A, pivots = rref(ctx, M)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = int(ctx.neg(int(A[r, fc])))
    return basis


def left_kernel(ctx: FieldCtx, M) -> np.ndarray:
    """Basis (as rows) of {y : y M = 0}."""
    A = _as_codes(ctx, M)
    return nullspace(ctx, A.T)


def matmul(ctx: FieldCtx, A, B) -> np.ndarray:
    A, B = _as_codes(ctx, A), _as_codes(ctx, B)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = ctx.add(out, ctx.mul(A[:, k][:, None], B[k][None, :]))
    return np.asarray(out, dtype=np.int64).reshape(A.shape[0], B.shape[1])


def det(ctx: FieldCtx, M) -> int:
    """Determinant code of a square matrix."""
    A = _as_codes(ctx, M).copy()
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")
    result = 1
    for c in range(n):
        nz = np.flatnonzero(A[c:, c])
        if not len(nz):
            return 0
        k = c + int(nz[0])
        if k != c:
            A[[c, k]] = A[[k, c]]
            result = int(ctx.neg(result))
        piv = int(A[c, c])
        result = int(ctx.mul(result, piv))
        inv = int(ctx.inv(piv))
        for i in range(c + 1, n):
            if A[i, c]:
                A[i] = ctx.sub(A[i], ctx.mul(A[c], int(ctx.mul(int(A[i, c]), inv))))
    return result
