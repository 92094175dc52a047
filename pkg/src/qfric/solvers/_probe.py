"""Sparse matrices of banded maps recovered from a few probe evaluations."""
import numpy as np
import scipy.sparse as sp

HALF_BAND = 2


def colors(n: int, periodic: bool, half: int = HALF_BAND) -> np.ndarray:
    """Column groups whose bands (width 2*half+1) never overlap, wrap included."""
    stride = 2 * half + 1
    col = np.arange(n) % stride
    if periodic and n % stride:
        tail = np.arange(n - 2 * half, n)
        col[tail] = stride + np.arange(tail.size)
    return col


def banded_matrix(apply, x0: np.ndarray, periodic: bool, step: float = 1.0,
                  f0: np.ndarray | None = None, half: int = HALF_BAND) -> sp.csc_matrix:
    """Matrix of d apply / dx at x0 by grouped differences.

    For a linear ``apply`` use ``step=1`` and x0 = 0; for a nonlinear one this
    is the forward-difference Jacobian.
    """
    n = x0.size
    if f0 is None:
        f0 = apply(x0)
    col = colors(n, periodic, half)
    offsets = np.arange(-half, half + 1)
    rows, cols, vals = [], [], []
    for c in range(col.max() + 1):
        js = np.nonzero(col == c)[0]
        xp = x0.copy()
        xp[js] += step
        df = (apply(xp) - f0) / step
        ii = js[:, None] + offsets[None, :]
        jj = np.broadcast_to(js[:, None], ii.shape)
        if periodic:
            ii = ii % n
            keep = np.ones(ii.shape, dtype=bool)
        else:
            keep = (ii >= 0) & (ii < n)
        rows.append(ii[keep])
        cols.append(jj[keep])
        vals.append(df[ii[keep]])
    return sp.csc_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))


def banded_diagonals(apply, x0: np.ndarray, step: float = 1.0,
                     f0: np.ndarray | None = None, half: int = HALF_BAND) -> np.ndarray:
    """Same as banded_matrix for a non-periodic map, in LAPACK band storage
    ``ab[half + i - j, j] = A[i, j]`` (the layout of scipy.linalg.solve_banded)."""
    n = x0.size
    if f0 is None:
        f0 = apply(x0)
    ab = np.zeros((2 * half + 1, n))
    stride = 2 * half + 1
    for c in range(stride):
        xp = x0.copy()
        xp[c::stride] += step
        df = (apply(xp) - f0) / step
        for off in range(-half, half + 1):
            # row i = j + off for every probed column j
            js = np.arange(c, n, stride)
            ii = js + off
            keep = (ii >= 0) & (ii < n)
            ab[half + off, js[keep]] = df[ii[keep]]
    return ab
