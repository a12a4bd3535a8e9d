"""Shared container for computed eigenvalue sets."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Spectrum:
    """Eigenvalues in nondecreasing order, multiplicities repeated.

    ``eigenvectors`` (columns) and per-pair ``residuals`` are optional; solver
    diagnostics (shift, iteration counts, inertia certificates, bracket
    widths) live in ``meta``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    residuals: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        if np.any(np.diff(self.eigenvalues) < 0.0):
            raise ValueError("eigenvalues must be nondecreasing")

    def __len__(self) -> int:
        return self.eigenvalues.size
