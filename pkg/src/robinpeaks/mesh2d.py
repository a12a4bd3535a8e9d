"""Structured triangle meshes of the finite 2-D peak, with boundary tags.

The peak V = {(x1, x2): s_min < x1 < a, |x2| < eps * x1^q * ell/2} is meshed
by mapping a structured (s, t) grid through (s, t) -> (s, eps s^q t), grading
the axial nodes toward the tip and splitting each quad along its shorter
diagonal.  Lateral edges are tagged Robin; the two ends carry Dirichlet or
Neumann tags.  The tip is truncated at s_min > 0; sweeps quantify the induced
eigenvalue shift by halving s_min rather than assuming it away.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

ROBIN = "robin"
DIRICHLET = "dirichlet"
NEUMANN = "neumann"
_TAGS = (ROBIN, DIRICHLET, NEUMANN)


@dataclass(frozen=True)
class MeshProvenance:
    kind: str  # "peak" | "rectangle"
    q: float | None
    ell: float
    a: float
    s_min: float
    ns: int
    nt: int
    grading: float
    epsilon: float
    end_tags: tuple[str, str]


@dataclass
class Mesh2D:
    """Conforming triangle mesh with tagged boundary edges."""

    vertices: np.ndarray        # (nv, 2)
    triangles: np.ndarray       # (ntri, 3), counterclockwise
    boundary_edges: np.ndarray  # (ne, 2) vertex pairs
    boundary_tags: list         # tag string per boundary edge
    provenance: MeshProvenance | None = None

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def num_triangles(self) -> int:
        return self.triangles.shape[0]

    def triangle_areas(self) -> np.ndarray:
        p = self.vertices
        t = self.triangles
        d1 = p[t[:, 1]] - p[t[:, 0]]
        d2 = p[t[:, 2]] - p[t[:, 0]]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def area(self) -> float:
        return float(np.sum(self.triangle_areas()))

    def min_angle_deg(self) -> float:
        p = self.vertices
        t = self.triangles
        angles = []
        for shift in range(3):
            a = p[t[:, shift]]
            b = p[t[:, (shift + 1) % 3]]
            c = p[t[:, (shift + 2) % 3]]
            u, v = b - a, c - a
            cosang = np.sum(u * v, axis=1) / (
                np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1))
            angles.append(np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0))))
        return float(np.min(angles))

    def quality_report(self) -> dict:
        """Mesh-quality summary; small angles near the tip are flagged, not fatal."""
        areas = self.triangle_areas()
        min_angle = self.min_angle_deg()
        return {
            "min_angle_deg": min_angle,
            "flagged_small_angles": bool(min_angle < 5.0),
            "min_area": float(areas.min()),
            "num_vertices": self.num_vertices,
            "num_triangles": self.num_triangles,
        }

    def boundary_vertices(self, tag: str) -> np.ndarray:
        idx = [e for e, t in zip(self.boundary_edges, self.boundary_tags) if t == tag]
        if not idx:
            return np.empty(0, dtype=int)
        return np.unique(np.concatenate([np.asarray(e) for e in idx]))


def _split_cell(v00, v10, v11, v01, p):
    # split along the shorter diagonal; ties take v00-v11
    d1 = np.hypot(*(p[v11] - p[v00]))
    d2 = np.hypot(*(p[v01] - p[v10]))
    if d1 <= d2:
        return (v00, v10, v11), (v00, v11, v01)
    return (v00, v10, v01), (v10, v11, v01)


def build_peak_mesh(q: float, ell: float, a: float, s_min: float,
                    ns: int, nt: int, grading: float = 2.0,
                    end_conditions: tuple[str, str] = (DIRICHLET, DIRICHLET),
                    epsilon: float = 1.0) -> Mesh2D:
    """Mesh the peak between s_min and a with graded axial nodes.

    ``end_conditions`` assigns tags to the two ends (s = s_min, s = a); the
    lateral boundary is always Robin.
    """
    if not 0.0 < s_min < a:
        raise ValueError(f"need 0 < s_min < a, got s_min={s_min}, a={a}")
    if ns < 1 or nt < 1:
        raise ValueError("ns and nt must be >= 1")
    if grading < 1.0:
        raise ValueError(f"grading must be >= 1, got {grading}")
    for tag in end_conditions:
        if tag not in (DIRICHLET, NEUMANN):
            raise ValueError(f"end tag must be dirichlet or neumann, got {tag!r}")

    xi = (np.arange(ns + 1) / ns) ** grading
    s = s_min + (a - s_min) * xi
    s[-1] = a
    t = np.linspace(-0.5 * ell, 0.5 * ell, nt + 1)
    # vertex (i, j) -> i * (nt + 1) + j, mapped through (s, eps s^q t)
    ss, tt = np.meshgrid(s, t, indexing="ij")
    x1 = ss
    x2 = epsilon * ss**q * tt
    vertices = np.column_stack([x1.ravel(), x2.ravel()])

    def vid(i, j):
        return i * (nt + 1) + j

    triangles = []
    for i in range(ns):
        for j in range(nt):
            tri1, tri2 = _split_cell(vid(i, j), vid(i + 1, j),
                                     vid(i + 1, j + 1), vid(i, j + 1), vertices)
            triangles.extend((tri1, tri2))
    triangles = np.array(triangles, dtype=np.int64)

    edges = []
    tags = []
    for i in range(ns):  # lateral: bottom j=0 and top j=nt
        edges.append((vid(i, 0), vid(i + 1, 0)))
        tags.append(ROBIN)
        edges.append((vid(i + 1, nt), vid(i, nt)))
        tags.append(ROBIN)
    for j in range(nt):  # ends
        edges.append((vid(0, j + 1), vid(0, j)))
        tags.append(end_conditions[0])
        edges.append((vid(ns, j), vid(ns, j + 1)))
        tags.append(end_conditions[1])

    mesh = Mesh2D(
        vertices=vertices,
        triangles=triangles,
        boundary_edges=np.array(edges, dtype=np.int64),
        boundary_tags=tags,
        provenance=MeshProvenance(kind="peak", q=q, ell=ell, a=a, s_min=s_min,
                                  ns=ns, nt=nt, grading=grading, epsilon=epsilon,
                                  end_tags=tuple(end_conditions)),
    )
    areas = mesh.triangle_areas()
    if np.any(areas <= 0.0):
        raise ValueError("degenerate cell: nonpositive triangle area")
    return mesh


def build_rectangle_mesh(lx: float, ly: float, nx: int, ny: int,
                         tag: str = ROBIN) -> Mesh2D:
    """Uniform rectangle mesh with one tag on the whole boundary.

    Used to cross-check the finite-element chain against the separable
    rectangle oracle away from any cusp.
    """
    if not (lx > 0.0 and ly > 0.0):
        raise ValueError("rectangle sides must be positive")
    if nx < 1 or ny < 1:
        raise ValueError("nx and ny must be >= 1")
    if tag not in _TAGS:
        raise ValueError(f"unknown tag {tag!r}")
    x = np.linspace(0.0, lx, nx + 1)
    y = np.linspace(0.0, ly, ny + 1)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    vertices = np.column_stack([xx.ravel(), yy.ravel()])

    def vid(i, j):
        return i * (ny + 1) + j

    triangles = []
    for i in range(nx):
        for j in range(ny):
            tri1, tri2 = _split_cell(vid(i, j), vid(i + 1, j),
                                     vid(i + 1, j + 1), vid(i, j + 1), vertices)
            triangles.extend((tri1, tri2))
    edges = []
    tags = []
    for i in range(nx):
        edges.append((vid(i, 0), vid(i + 1, 0)))
        edges.append((vid(i + 1, ny), vid(i, ny)))
        tags.extend((tag, tag))
    for j in range(ny):
        edges.append((vid(0, j + 1), vid(0, j)))
        edges.append((vid(nx, j), vid(nx, j + 1)))
        tags.extend((tag, tag))
    return Mesh2D(
        vertices=vertices,
        triangles=np.array(triangles, dtype=np.int64),
        boundary_edges=np.array(edges, dtype=np.int64),
        boundary_tags=tags,
        provenance=MeshProvenance(kind="rectangle", q=None, ell=ly, a=lx,
                                  s_min=0.0, ns=nx, nt=ny, grading=1.0,
                                  epsilon=1.0, end_tags=(tag, tag)),
    )


def refine(mesh: Mesh2D) -> Mesh2D:
    """Regenerate with doubled resolution; lateral vertices land on the exact curve."""
    prov = mesh.provenance
    if prov is None:
        raise ValueError("mesh has no provenance record to refine from")
    if prov.kind == "rectangle":
        return build_rectangle_mesh(prov.a, prov.ell, 2 * prov.ns, 2 * prov.nt,
                                    tag=prov.end_tags[0])
    return build_peak_mesh(prov.q, prov.ell, prov.a, prov.s_min,
                           2 * prov.ns, 2 * prov.nt, grading=prov.grading,
                           end_conditions=prov.end_tags, epsilon=prov.epsilon)


def peak_area_exact(q: float, ell: float, a: float, s_min: float,
                    epsilon: float = 1.0) -> float:
    """Closed-form area of the exact (curved) peak region."""
    return epsilon * ell * (a ** (q + 1.0) - s_min ** (q + 1.0)) / (q + 1.0)


def lateral_arc_length(q: float, ell: float, a: float, s_min: float,
                       epsilon: float = 1.0) -> float:
    """Arc length of both lateral curves x2 = +- eps s^q ell/2, by quadrature."""
    from scipy.integrate import quad

    half = 0.5 * epsilon * ell * q
    val, _ = quad(lambda s: math.sqrt(1.0 + (half * s ** (q - 1.0)) ** 2),
                  s_min, a, limit=200)
    return 2.0 * val


def check_conforming(mesh: Mesh2D) -> None:
    """Raise if interior edges are not shared exactly twice or tags mismatch."""
    from collections import Counter

    count = Counter()
    for tri in mesh.triangles:
        for k in range(3):
            e = (int(tri[k]), int(tri[(k + 1) % 3]))
            count[tuple(sorted(e))] += 1
    boundary = {tuple(sorted(map(int, e))) for e in mesh.boundary_edges}
    for e, c in count.items():
        if c == 2:
            continue
        if c == 1 and e in boundary:
            continue
        raise ValueError(f"non-conforming edge {e} (multiplicity {c})")
    for e in boundary:
        if count.get(e, 0) != 1:
            raise ValueError(f"boundary edge {e} not on the triangulation rim")


def save_text(mesh: Mesh2D, path: str) -> None:
    """Plain-text export: header, vertex lines, triangle lines, tagged edges."""
    buf = io.StringIO()
    buf.write(f"vertices {mesh.num_vertices} triangles {mesh.num_triangles}\n")
    for x, y in mesh.vertices:
        buf.write(f"{float(x)!r} {float(y)!r}\n")
    for i, j, k in mesh.triangles:
        buf.write(f"{i} {j} {k}\n")
    for (i, j), tag in zip(mesh.boundary_edges, mesh.boundary_tags):
        buf.write(f"{i} {j} {tag.upper()}\n")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())


def load_text(path: str) -> Mesh2D:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        nv, ntri = int(header[1]), int(header[3])
        vertices = np.array([[float(v) for v in fh.readline().split()]
                             for _ in range(nv)])
        triangles = np.array([[int(v) for v in fh.readline().split()]
                              for _ in range(ntri)], dtype=np.int64)
        edges = []
        tags = []
        for line in fh:
            parts = line.split()
            if len(parts) != 3:
                continue
            edges.append((int(parts[0]), int(parts[1])))
            tags.append(parts[2].lower())
    return Mesh2D(vertices=vertices, triangles=triangles,
                  boundary_edges=np.array(edges, dtype=np.int64),
                  boundary_tags=tags, provenance=None)
