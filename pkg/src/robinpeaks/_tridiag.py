"""Sturm-sequence kernels for symmetric tridiagonal eigenvalue bisection.

The count at a shift x is the number of negative pivots of the LDL^T
recurrence applied to T - x*I, which by Sylvester's law equals the number of
eigenvalues below x.  The recurrence is safeguarded LAPACK-style: a vanishing
pivot is replaced by a tiny negative number, which perturbs the count by at
most the multiplicity of an exact hit and is harmless inside bisection.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def sturm_count(diag, off2, x, pivmin):
    # off2 holds the squared off-diagonal entries
    n = diag.shape[0]
    count = 0
    d = diag[0] - x
    if abs(d) < pivmin:
        d = -pivmin
    if d < 0.0:
        count += 1
    for i in range(1, n):
        d = diag[i] - x - off2[i - 1] / d
        if abs(d) < pivmin:
            d = -pivmin
        if d < 0.0:
            count += 1
    return count


@njit(cache=True)
def bisect_kth(diag, off2, k, lo, hi, pivmin, rel_tol, abs_tol, max_iter):
    """Bracket the k-th (1-based) smallest eigenvalue down to the tolerance."""
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        width = hi - lo
        if width <= abs_tol + rel_tol * abs(mid):
            break
        if mid == lo or mid == hi:
            break
        if sturm_count(diag, off2, mid, pivmin) >= k:
            hi = mid
        else:
            lo = mid
    return lo, hi


@njit(cache=True)
def smallest_k(diag, off2, k, lo0, hi0, pivmin, rel_tol, abs_tol, max_iter):
    out = np.empty(k, dtype=np.float64)
    widths = np.empty(k, dtype=np.float64)
    lo_k = lo0
    for j in range(1, k + 1):
        lo, hi = bisect_kth(diag, off2, j, lo_k, hi0, pivmin, rel_tol, abs_tol, max_iter)
        out[j - 1] = 0.5 * (lo + hi)
        widths[j - 1] = hi - lo
        lo_k = lo  # eigenvalue j+1 cannot lie below the j-th bracket floor
    return out, widths


def gershgorin_interval(diag, off):
    """Enclosing interval for all eigenvalues of the tridiagonal matrix."""
    n = diag.size
    radius = np.zeros(n)
    if n > 1:
        radius[:-1] += np.abs(off)
        radius[1:] += np.abs(off)
    return float(np.min(diag - radius)), float(np.max(diag + radius))
