"""P1 finite-element assembly of the Robin form on a triangle mesh.

Builds the generalized eigenproblem A x = lambda M x with
A = stiffness - alpha * (lateral boundary mass) and M the consistent mass,
after eliminating Dirichlet-tagged vertices by row/column deletion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .mesh2d import DIRICHLET, ROBIN, Mesh2D


@dataclass
class SymmetricPencil:
    """Pair (A, M) of symmetric sparse matrices over the free vertices."""

    A: sp.csr_matrix
    M: sp.csr_matrix
    free_vertices: np.ndarray
    alpha: float
    mesh: Mesh2D | None = None

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def full_vector(self, x: np.ndarray) -> np.ndarray:
        """Embed a free-dof vector into the full vertex numbering (zeros on Dirichlet)."""
        if self.mesh is None:
            raise ValueError("pencil carries no mesh")
        out = np.zeros(self.mesh.num_vertices)
        out[self.free_vertices] = x
        return out


def _triangle_matrices(mesh: Mesh2D):
    p = mesh.vertices
    t = mesh.triangles
    x = p[t, 0]
    y = p[t, 1]
    # edge vectors opposite each local vertex
    bx = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    by = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    area = 0.5 * ((x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0])
                  - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0]))
    ke = (bx[:, :, None] * bx[:, None, :] + by[:, :, None] * by[:, None, :])
    ke /= (4.0 * area)[:, None, None]
    me_ref = (np.ones((3, 3)) + np.eye(3)) / 12.0
    me = area[:, None, None] * me_ref[None, :, :]
    return ke, me


def _scatter(triples, n):
    rows, cols, vals = triples
    mat = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    # exact symmetry regardless of float summation order
    return 0.5 * (mat + mat.T)


def stiffness_and_mass(mesh: Mesh2D) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Full-size stiffness and consistent mass (no boundary condition applied)."""
    ke, me = _triangle_matrices(mesh)
    t = mesh.triangles
    rows = np.repeat(t, 3, axis=1).ravel()
    cols = np.tile(t, (1, 3)).ravel()
    n = mesh.num_vertices
    K = _scatter((rows, cols, ke.ravel()), n)
    M = _scatter((rows, cols, me.ravel()), n)
    return K, M


def boundary_mass(mesh: Mesh2D, tag: str = ROBIN) -> sp.csr_matrix:
    """Edge-mass matrix h_e/6 * [[2,1],[1,2]] summed over edges with the tag."""
    edges = [e for e, t in zip(mesh.boundary_edges, mesh.boundary_tags) if t == tag]
    n = mesh.num_vertices
    if not edges:
        return sp.csr_matrix((n, n))
    edges = np.asarray(edges)
    p = mesh.vertices
    h = np.linalg.norm(p[edges[:, 1]] - p[edges[:, 0]], axis=1)
    be = (h[:, None, None] / 6.0) * (np.ones((2, 2)) + np.eye(2))[None, :, :]
    rows = np.repeat(edges, 2, axis=1).ravel()
    cols = np.tile(edges, (1, 2)).ravel()
    return _scatter((rows, cols, be.ravel()), n)


def robin_boundary_length(mesh: Mesh2D) -> float:
    """Polyline length of the Robin-tagged boundary."""
    edges = np.asarray([e for e, t in zip(mesh.boundary_edges, mesh.boundary_tags)
                        if t == ROBIN])
    if edges.size == 0:
        return 0.0
    p = mesh.vertices
    return float(np.sum(np.linalg.norm(p[edges[:, 1]] - p[edges[:, 0]], axis=1)))


def dirichlet_vertices(mesh: Mesh2D) -> np.ndarray:
    return mesh.boundary_vertices(DIRICHLET)


def assemble(mesh: Mesh2D, alpha: float) -> SymmetricPencil:
    """Assemble A = K - alpha * B and M over the free (non-Dirichlet) vertices."""
    K, M = stiffness_and_mass(mesh)
    B = boundary_mass(mesh, ROBIN)
    A = (K - alpha * B).tocsr()
    fixed = dirichlet_vertices(mesh)
    free = np.setdiff1d(np.arange(mesh.num_vertices), fixed)
    if free.size == 0:
        raise ValueError("no free vertices remain after Dirichlet elimination")
    A = A[free][:, free].tocsr()
    Mf = M[free][:, free].tocsr()
    return SymmetricPencil(A=A, M=Mf, free_vertices=free, alpha=float(alpha),
                           mesh=mesh)


def rayleigh(pencil: SymmetricPencil, x: np.ndarray) -> float:
    """Rayleigh quotient x^T A x / x^T M x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (pencil.n,):
        raise ValueError(f"vector has shape {x.shape}, expected ({pencil.n},)")
    mx = float(x @ (pencil.M @ x))
    if mx == 0.0 or not np.any(x):
        raise ValueError("Rayleigh quotient of the zero vector")
    return float(x @ (pencil.A @ x)) / mx


def export_text(pencil: SymmetricPencil, path: str) -> None:
    """Coordinate (row, col, value) dump of A and M for external inspection."""
    with open(path, "w", encoding="utf-8") as fh:
        for name, mat in (("A", pencil.A), ("M", pencil.M)):
            coo = mat.tocoo()
            fh.write(f"matrix {name} {mat.shape[0]} {coo.nnz}\n")
            for r, c, v in zip(coo.row, coo.col, coo.data):
                fh.write(f"{r} {c} {float(v)!r}\n")
