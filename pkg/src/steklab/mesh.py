"""Planar triangle meshes: generation, validation, topology and file I/O.

A :class:`TriMesh` stores vertex coordinates and counter-clockwise triangles.
Boundary loops are derived from the triangle list (never stored) and are
oriented so that the domain lies on their left: the outer loop runs
counter-clockwise and every hole runs clockwise.

Reference domains (disk, annulus, Fourier-perturbed disk) are meshed with a
concentric-ring layout whose outer ring carries ``8 * 2**refinement``
vertices, which keeps the 8-fold rotational symmetry of the disk intact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import NamedTuple, Sequence, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import GeometryError, ParameterError, ParseError, TopologyError

MESH_FORMAT = "steklab-mesh"
MESH_FORMAT_VERSION = 1


# --------------------------------------------------------------------------
# domain catalog
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Disk:
    radius: float = 1.0

    def validate(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ParameterError(f"disk radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Annulus:
    r_inner: float
    r_outer: float

    def validate(self) -> None:
        if not (math.isfinite(self.r_inner) and math.isfinite(self.r_outer)):
            raise ParameterError("annulus radii must be finite")
        if not 0 < self.r_inner < self.r_outer:
            raise ParameterError(
                f"annulus needs 0 < r_inner < r_outer, got {self.r_inner}, {self.r_outer}"
            )


@dataclass(frozen=True)
class PerturbedDisk:
    """Star-shaped domain ``r(t) = r0 + sum_j a_j cos(j t) + b_j sin(j t)``.

    ``cos_coeffs[0]`` multiplies ``cos(t)``, ``cos_coeffs[1]`` ``cos(2t)`` etc.
    """

    cos_coeffs: tuple[float, ...] = ()
    sin_coeffs: tuple[float, ...] = ()
    r0: float = 1.0

    def radius_at(self, theta):
        theta = np.asarray(theta, dtype=float)
        r = np.full_like(theta, float(self.r0))
        for j, a in enumerate(self.cos_coeffs, start=1):
            if a:
                r = r + a * np.cos(j * theta)
        for j, b in enumerate(self.sin_coeffs, start=1):
            if b:
                r = r + b * np.sin(j * theta)
        return r

    def validate(self) -> None:
        coeffs = (self.r0, *self.cos_coeffs, *self.sin_coeffs)
        if not all(math.isfinite(c) for c in coeffs):
            raise ParameterError("perturbed disk coefficients must be finite")
        if self.r0 <= 0:
            raise ParameterError(f"r0 must be positive, got {self.r0}")
        # sufficient condition first, dense sampling otherwise
        if self.r0 - sum(abs(c) for c in (*self.cos_coeffs, *self.sin_coeffs)) > 0:
            return
        degree = max(len(self.cos_coeffs), len(self.sin_coeffs), 1)
        theta = np.linspace(0.0, 2 * np.pi, 64 * degree + 4096, endpoint=False)
        if np.min(self.radius_at(theta)) <= 0:
            raise GeometryError("perturbed radius r(theta) is not positive everywhere")


@dataclass(frozen=True)
class FromFile:
    path: str

    def validate(self) -> None:
        if not Path(self.path).is_file():
            raise ParameterError(f"mesh file not found: {self.path}")


DomainShape = Union[Disk, Annulus, PerturbedDisk, FromFile]


@dataclass(frozen=True)
class DomainTopology:
    genus: int
    boundary_components: int
    b0: int = field(init=False)
    b1: int = field(init=False)

    def __post_init__(self):
        if self.genus < 0 or self.boundary_components < 1:
            raise TopologyError(
                f"invalid topology genus={self.genus}, k={self.boundary_components}"
            )
        object.__setattr__(self, "b0", 1)
        object.__setattr__(self, "b1", 2 * self.genus + self.boundary_components - 1)

    @property
    def simply_connected(self) -> bool:
        return self.b1 == 0

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "boundary_components": self.boundary_components,
            "b0": self.b0,
            "b1": self.b1,
        }


class BoundaryLengths(NamedTuple):
    per_loop: tuple[float, ...]
    total: float


# --------------------------------------------------------------------------
# mesh container
# --------------------------------------------------------------------------


def _signed_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    p0 = vertices[triangles[:, 0]]
    e1 = vertices[triangles[:, 1]] - p0
    e2 = vertices[triangles[:, 2]] - p0
    return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


class TriMesh:
    """Validated, immutable planar triangle mesh.

    Parameters
    ----------
    vertices : array_like, shape (n, 2)
    triangles : array_like of int, shape (t, 3)
        Counter-clockwise vertex triples.
    name : str, optional
        Free-form identifier carried into spectrum provenance.

    Raises
    ------
    GeometryError
        Zero/negative-area triangles, non-manifold edges, inconsistent
        orientation, unused vertices, disconnected meshes, or boundary loops
        with fewer than 3 vertices.
    """

    def __init__(self, vertices, triangles, name: str = "mesh", refinement: int | None = None):
        v = np.array(vertices, dtype=float)
        t = np.array(triangles, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] == 0:
            raise GeometryError("vertices must be a non-empty (n, 2) array")
        if t.ndim != 2 or t.shape[1] != 3 or t.shape[0] == 0:
            raise GeometryError("triangles must be a non-empty (t, 3) array")
        if not np.all(np.isfinite(v)):
            raise GeometryError("vertex coordinates must be finite")
        if t.min() < 0 or t.max() >= len(v):
            raise GeometryError("triangle references an out-of-range vertex")
        v.setflags(write=False)
        t.setflags(write=False)
        self.vertices = v
        self.triangles = t
        self.name = name
        self.refinement = refinement
        self._validate()

    # the structural checks also build the boundary loops
    def _validate(self) -> None:
        v, t = self.vertices, self.triangles
        if np.any((t[:, 0] == t[:, 1]) | (t[:, 1] == t[:, 2]) | (t[:, 0] == t[:, 2])):
            raise GeometryError("triangle with repeated vertex")
        areas = _signed_areas(v, t)
        scale = max(float(np.ptp(v[:, 0])), float(np.ptp(v[:, 1])), 1e-300)
        bad = np.flatnonzero(areas <= 1e-14 * scale * scale)
        if bad.size:
            raise GeometryError(
                f"{bad.size} triangle(s) with non-positive area, first is #{bad[0]}"
            )
        used = np.zeros(len(v), dtype=bool)
        used[t.ravel()] = True
        if not used.all():
            raise GeometryError(f"{int((~used).sum())} vertex/vertices not used by any triangle")

        directed = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        n = len(v)
        keys = directed[:, 0] * n + directed[:, 1]
        uniq, counts = np.unique(keys, return_counts=True)
        if np.any(counts > 1):
            raise GeometryError("inconsistent orientation or non-manifold edge")
        reverse = directed[:, 1] * n + directed[:, 0]
        has_twin = np.isin(reverse, uniq)
        boundary = directed[~has_twin]

        self._n_edges = int(has_twin.sum()) // 2 + len(boundary)
        nxt: dict[int, int] = {}
        for a, b in boundary:
            if int(a) in nxt:
                raise GeometryError(f"boundary pinches at vertex {int(a)}")
            nxt[int(a)] = int(b)

        loops: list[tuple[int, ...]] = []
        seen: set[int] = set()
        for start in sorted(nxt):
            if start in seen:
                continue
            loop = [start]
            seen.add(start)
            cur = nxt[start]
            while cur != start:
                if cur in seen or cur not in nxt:
                    raise GeometryError("boundary edges do not form closed cycles")
                loop.append(cur)
                seen.add(cur)
                cur = nxt[cur]
            if len(loop) < 3:
                raise GeometryError("boundary loop with fewer than 3 vertices")
            loops.append(tuple(loop))
        if not loops:
            raise GeometryError("mesh has no boundary")
        # outer loop (largest signed area) first
        loops.sort(key=lambda lp: -_polygon_area(v[list(lp)]))
        self._boundary_loops = tuple(loops)

        # triangle adjacency through shared edges
        tri_of = np.tile(np.arange(len(t)), 3)
        order = np.argsort(keys)
        pos = np.searchsorted(keys[order], reverse[has_twin])
        a = tri_of[has_twin]
        b = tri_of[order][pos]
        adj = coo_matrix((np.ones(len(a)), (a, b)), shape=(len(t), len(t)))
        ncomp, _ = connected_components(adj, directed=False)
        if ncomp != 1:
            raise GeometryError(f"mesh is not edge-connected ({ncomp} components)")

    @property
    def boundary_loops(self) -> tuple[tuple[int, ...], ...]:
        return self._boundary_loops

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_edges(self) -> int:
        return self._n_edges

    @cached_property
    def boundary_vertices(self) -> np.ndarray:
        """Boundary vertex indices, loop by loop in traversal order."""
        idx = np.array([i for lp in self._boundary_loops for i in lp], dtype=np.int64)
        idx.setflags(write=False)
        return idx

    @cached_property
    def interior_vertices(self) -> np.ndarray:
        mask = np.ones(self.n_vertices, dtype=bool)
        mask[self.boundary_vertices] = False
        idx = np.flatnonzero(mask)
        idx.setflags(write=False)
        return idx

    @cached_property
    def triangle_areas(self) -> np.ndarray:
        a = _signed_areas(self.vertices, self.triangles)
        a.setflags(write=False)
        return a

    @property
    def area(self) -> float:
        return float(self.triangle_areas.sum())

    def __repr__(self) -> str:
        return (
            f"TriMesh(name={self.name!r}, vertices={self.n_vertices}, "
            f"triangles={self.n_triangles}, loops={len(self._boundary_loops)})"
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriMesh):
            return NotImplemented
        return np.array_equal(self.vertices, other.vertices) and np.array_equal(
            self.triangles, other.triangles
        )

    __hash__ = None


def _polygon_area(points: np.ndarray) -> float:
    x, y = points[:, 0], points[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def loop_signed_area(mesh: TriMesh, loop_index: int) -> float:
    """Signed area enclosed by a boundary loop (positive when counter-clockwise)."""
    return _polygon_area(mesh.vertices[list(mesh.boundary_loops[loop_index])])


# --------------------------------------------------------------------------
# queries
# --------------------------------------------------------------------------


def topology(mesh: TriMesh) -> DomainTopology:
    """Genus and Betti numbers from the Euler characteristic ``V - E + F``."""
    chi = mesh.n_vertices - mesh.n_edges + mesh.n_triangles
    k = len(mesh.boundary_loops)
    two_gamma = 2 - k - chi
    if two_gamma < 0 or two_gamma % 2:
        raise TopologyError(f"Euler characteristic {chi} incompatible with {k} boundary loops")
    return DomainTopology(genus=two_gamma // 2, boundary_components=k)


def boundary_length(mesh: TriMesh) -> BoundaryLengths:
    lengths = []
    for lp in mesh.boundary_loops:
        p = mesh.vertices[list(lp)]
        d = np.roll(p, -1, axis=0) - p
        lengths.append(float(np.hypot(d[:, 0], d[:, 1]).sum()))
    return BoundaryLengths(tuple(lengths), float(math.fsum(lengths)))


# --------------------------------------------------------------------------
# generation
# --------------------------------------------------------------------------


def _incircle(a, b, c, d) -> float:
    """Positive when ``d`` lies strictly inside the circumcircle of ccw ``abc``."""
    m = np.array([[*(p - d), float(np.dot(p - d, p - d))] for p in (a, b, c)])
    return float(np.linalg.det(m))


def _zip_rings(inner, inner_pts, outer, outer_pts) -> list:
    """Triangulate the strip between two concentric, angle-sorted rings.

    Each step closes either the triangle advancing on the inner ring or the
    one advancing on the outer ring, whichever keeps the other candidate
    vertex out of its circumcircle (local Delaunay); near-cocircular ties
    fall back to the angular order.
    """
    na, nb = len(inner), len(outer)
    ang_a = np.append(np.arctan2(inner_pts[:, 1], inner_pts[:, 0]) % (2 * np.pi), 2 * np.pi)
    ang_b = np.append(np.arctan2(outer_pts[:, 1], outer_pts[:, 0]) % (2 * np.pi), 2 * np.pi)
    ang_a[0] = ang_b[0] = 0.0
    scale = float(np.max(np.abs(outer_pts))) ** 4
    tris = []
    i = j = 0
    while i < na or j < nb:
        if j >= nb:
            advance_inner = True
        elif i >= na:
            advance_inner = False
        else:
            det = _incircle(
                inner_pts[i], outer_pts[j], inner_pts[(i + 1) % na], outer_pts[(j + 1) % nb]
            )
            if abs(det) <= 1e-9 * scale:
                advance_inner = ang_a[i + 1] < ang_b[j + 1]
            else:
                advance_inner = det < 0
        if advance_inner:
            tris.append((inner[i], outer[j % nb], inner[(i + 1) % na]))
            i += 1
        else:
            tris.append((inner[i % na], outer[j], outer[(j + 1) % nb]))
            j += 1
    return tris


def _ring_angles(n: int) -> np.ndarray:
    return 2 * np.pi * np.arange(n) / n


def _polar(radius, angles) -> np.ndarray:
    return np.column_stack([radius * np.cos(angles), radius * np.sin(angles)])


def _disk_layout(refinement: int):
    """Unit-disk ring layout: radii fractions, angles and triangles."""
    rings = 2**refinement
    pts_rho = [0.0]
    pts_ang = [0.0]
    ring_index = [np.array([0])]
    ring_pts = [np.zeros((1, 2))]
    tris: list = []
    nxt = 1
    for j in range(1, rings + 1):
        n = 8 * j
        ang = _ring_angles(n)
        idx = np.arange(nxt, nxt + n)
        nxt += n
        pts_rho.extend([j / rings] * n)
        pts_ang.extend(ang)
        if j == 1:
            tris.extend((0, int(idx[q]), int(idx[(q + 1) % n])) for q in range(n))
        else:
            tris.extend(_zip_rings(ring_index[-1], ring_pts[-1], idx, _polar(j / rings, ang)))
        ring_index.append(idx)
        ring_pts.append(_polar(j / rings, ang))
    return np.array(pts_rho), np.array(pts_ang), np.array(tris, dtype=np.int64)


def _mesh_disk(shape: Disk, refinement: int) -> TriMesh:
    rho, ang, tris = _disk_layout(refinement)
    verts = np.column_stack([rho * shape.radius * np.cos(ang), rho * shape.radius * np.sin(ang)])
    verts[0] = 0.0
    return TriMesh(verts, tris, name=f"disk(r={shape.radius!r})", refinement=refinement)


def _mesh_perturbed(shape: PerturbedDisk, refinement: int) -> TriMesh:
    rho, ang, tris = _disk_layout(refinement)
    r = shape.radius_at(ang)
    verts = np.column_stack([rho * r * np.cos(ang), rho * r * np.sin(ang)])
    verts[0] = 0.0
    if np.any(_signed_areas(verts, tris) <= 0):
        raise GeometryError("radial map of the disk mesh degenerates for this perturbation")
    name = f"perturbed(r0={shape.r0!r}, a={list(shape.cos_coeffs)}, b={list(shape.sin_coeffs)})"
    return TriMesh(verts, tris, name=name, refinement=refinement)


def _mesh_annulus(shape: Annulus, refinement: int) -> TriMesh:
    n_outer = 8 * 2**refinement
    h = 2 * np.pi * shape.r_outer / n_outer
    layers = max(1, int(round((shape.r_outer - shape.r_inner) / h)))
    radii = np.linspace(shape.r_inner, shape.r_outer, layers + 1)
    radii[0], radii[-1] = shape.r_inner, shape.r_outer
    counts = [max(8, 8 * int(round(n_outer * r / (8 * shape.r_outer)))) for r in radii]
    counts[-1] = n_outer
    verts = []
    tris: list = []
    prev_idx = prev_pts = None
    nxt = 0
    for r, n in zip(radii, counts):
        pts = _polar(r, _ring_angles(n))
        verts.append(pts)
        idx = np.arange(nxt, nxt + n)
        nxt += n
        if prev_idx is not None:
            tris.extend(_zip_rings(prev_idx, prev_pts, idx, pts))
        prev_idx, prev_pts = idx, pts
    return TriMesh(
        np.vstack(verts),
        np.array(tris, dtype=np.int64),
        name=f"annulus({shape.r_inner!r},{shape.r_outer!r})",
        refinement=refinement,
    )


def generate(shape: DomainShape, refinement: int) -> TriMesh:
    """Mesh a reference domain.

    The outer boundary carries ``8 * 2**refinement`` vertices placed exactly on
    the analytic curve. ``FromFile`` shapes ignore ``refinement``.
    """
    if isinstance(refinement, bool) or not isinstance(refinement, (int, np.integer)):
        raise ParameterError("refinement must be an integer")
    if refinement < 1:
        raise ParameterError(f"refinement must be >= 1, got {refinement}")
    if refinement > 10:
        raise ParameterError("refinement > 10 is beyond desk scale")
    shape.validate()
    if isinstance(shape, Disk):
        return _mesh_disk(shape, int(refinement))
    if isinstance(shape, Annulus):
        return _mesh_annulus(shape, int(refinement))
    if isinstance(shape, PerturbedDisk):
        return _mesh_perturbed(shape, int(refinement))
    if isinstance(shape, FromFile):
        return load(shape.path)
    raise ParameterError(f"unknown shape {shape!r}")


# --------------------------------------------------------------------------
# file I/O
# --------------------------------------------------------------------------


def mesh_to_dict(mesh: TriMesh) -> dict:
    return {
        "format": MESH_FORMAT,
        "version": MESH_FORMAT_VERSION,
        "name": mesh.name,
        "vertices": mesh.vertices.tolist(),
        "triangles": mesh.triangles.tolist(),
    }


def save(mesh: TriMesh, path) -> None:
    """Write ``mesh`` as JSON. Floats use shortest round-trip repr, so
    :func:`load` reproduces coordinates bit-exactly."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(mesh_to_dict(mesh), fh)
        fh.write("\n")


def _check_number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    if not math.isfinite(x):
        raise ParseError(f"{where}: non-finite coordinate")
    return float(x)


def mesh_from_dict(data, source: str = "<dict>") -> TriMesh:
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    fmt = data.get("format", MESH_FORMAT)
    if fmt != MESH_FORMAT:
        raise ParseError(f"{source}: field 'format' must be {MESH_FORMAT!r}, got {fmt!r}")
    for key in ("vertices", "triangles"):
        if key not in data:
            raise ParseError(f"{source}: missing field {key!r}")
        if not isinstance(data[key], list):
            raise ParseError(f"{source}: field {key!r} must be a list")
    raw_v, raw_t = data["vertices"], data["triangles"]
    if not raw_v:
        raise ParseError(f"{source}: field 'vertices' is empty")
    if not raw_t:
        raise ParseError(f"{source}: field 'triangles' is empty")
    verts = []
    for i, p in enumerate(raw_v):
        if not isinstance(p, list) or len(p) != 2:
            raise ParseError(f"{source}: vertices[{i}] must be a pair [x, y]")
        verts.append([_check_number(p[0], f"vertices[{i}][0]"), _check_number(p[1], f"vertices[{i}][1]")])
    n = len(verts)
    tris = []
    for i, tri in enumerate(raw_t):
        if not isinstance(tri, list) or len(tri) != 3:
            raise ParseError(f"{source}: triangles[{i}] must be a triple")
        for c, idx in enumerate(tri):
            if isinstance(idx, bool) or not isinstance(idx, int):
                raise ParseError(f"{source}: triangles[{i}][{c}] must be an integer")
            if not 0 <= idx < n:
                raise ParseError(
                    f"{source}: triangles[{i}][{c}] = {idx} out of range [0, {n})"
                )
        tris.append(tri)
    try:
        return TriMesh(verts, tris, name=str(data.get("name", Path(source).stem)))
    except GeometryError as exc:
        raise ParseError(f"{source}: invalid mesh: {exc}") from exc


def load(path) -> TriMesh:
    path = str(path)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return mesh_from_dict(data, source=path)
