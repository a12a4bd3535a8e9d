"""Semi-analytic Robin eigenvalues on intervals and rectangles.

On an interval of length l with boundary parameter alpha > 0 the negative
eigenvalues are -k^2 with k solving k*tanh(k l/2) = alpha (symmetric mode)
or k*coth(k l/2) = alpha (antisymmetric, present iff alpha > 2/l); positive
eigenvalues come from the matching tan/cot equations.  Rectangles separate
into two interval problems.  These closed transcendental forms serve as
independent oracles for the finite-element solver.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .spectrum import Spectrum

_ROOT_TOL = 1e-13
_POSITIVE_BRANCHES = 8


def _sym_negative(length: float, alpha: float) -> float:
    # k tanh(k l / 2) = alpha; bracket [alpha, alpha + 2/l] since tanh < 1
    # and tanh(x) >= x / (1 + x)
    f = lambda k: k * math.tanh(0.5 * k * length) - alpha
    lo, hi = alpha, alpha + 2.0 / length
    return brentq(f, lo, hi, xtol=_ROOT_TOL, rtol=8.0 * np.finfo(float).eps)


def _antisym_negative(length: float, alpha: float) -> float:
    # k coth(k l / 2) = alpha, solvable iff alpha > 2/l; coth > 1 forces
    # k < alpha, and coth(x) <= 1 + 1/x gives the left bracket end
    f = lambda k: k / math.tanh(0.5 * k * length) - alpha
    lo = max(alpha - 2.0 / length, 1e-12 * alpha)
    return brentq(f, lo, alpha, xtol=_ROOT_TOL, rtol=8.0 * np.finfo(float).eps)


def _positive_roots(length: float, alpha: float, count: int) -> list[float]:
    # theta = k l / 2; symmetric branches solve (2 theta / l) tan(theta) = -alpha
    # on ((m - 1/2) pi, m pi); antisymmetric solve (2 theta / l) cot(theta) = alpha
    # on (m pi, (m + 1/2) pi), plus the ground branch on (0, pi/2) if alpha < 2/l.
    roots = []
    shrink = 1e-9

    def sym(theta):
        return (2.0 * theta / length) * math.tan(theta) + alpha

    def anti(theta):
        return (2.0 * theta / length) * (math.cos(theta) / math.sin(theta)) - alpha

    if alpha < 2.0 / length:
        lo, hi = shrink, 0.5 * math.pi - shrink
        roots.append(brentq(anti, lo, hi, xtol=_ROOT_TOL))
    for m in range(1, count + 1):
        lo = (m - 0.5) * math.pi + shrink * m
        hi = m * math.pi - shrink * m
        roots.append(brentq(sym, lo, hi, xtol=_ROOT_TOL))
        lo = m * math.pi + shrink * m
        hi = (m + 0.5) * math.pi - shrink * m
        roots.append(brentq(anti, lo, hi, xtol=_ROOT_TOL))
    return sorted(2.0 * t / length for t in roots)


def robin_interval_eigs(length: float, alpha: float, k: int) -> Spectrum:
    """The k lowest Robin eigenvalues of -u'' on an interval of given length."""
    if not length > 0.0:
        raise ValueError(f"interval length must be positive, got {length}")
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if alpha < 0.0:
        raise ValueError("only alpha >= 0 is supported")
    if alpha == 0.0:
        vals = [(math.pi * n / length) ** 2 for n in range(k)]
        return Spectrum(eigenvalues=np.array(vals), meta={"branch": "neumann"})

    eigenvalues = [-_sym_negative(length, alpha) ** 2]
    if alpha > 2.0 / length:
        eigenvalues.append(-_antisym_negative(length, alpha) ** 2)
    positive = [kk**2 for kk in _positive_roots(length, alpha, _POSITIVE_BRANCHES)]
    eigenvalues = sorted(eigenvalues) + positive
    if k > len(eigenvalues):
        raise ValueError(
            f"only {len(eigenvalues)} eigenvalues implemented for this alpha; "
            f"requested k={k}")
    return Spectrum(eigenvalues=np.array(eigenvalues[:k]),
                    meta={"branch": "transcendental", "alpha": alpha})


def robin_rectangle_eig1(lx: float, ly: float, alpha: float) -> float:
    """First Robin eigenvalue of the lx-by-ly rectangle, by separation."""
    if not (lx > 0.0 and ly > 0.0):
        raise ValueError("rectangle sides must be positive")
    ex = robin_interval_eigs(lx, alpha, 1).eigenvalues[0]
    ey = robin_interval_eigs(ly, alpha, 1).eigenvalues[0]
    return float(ex + ey)
