"""P1 finite elements for the Steklov problem on planar meshes.

The discrete Dirichlet-to-Neumann map is the Schur complement of the
stiffness matrix onto the boundary vertices. Steklov eigenvalues solve
``Lambda x = sigma M_b x`` with the consistent boundary mass ``M_b``; the
boundary Laplacian uses the periodic 1D stiffness ``S`` on each boundary loop
against the same mass. Boundary-indexed vectors are ordered like
``mesh.boundary_vertices`` (loop by loop, in traversal order).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    AssemblyError,
    ConstructionError,
    InternalInvariantError,
    ParameterError,
    PreconditionError,
    SpectrumIndexError,
    TopologyError,
)
from .ineq import SpdMatrix
from .mesh import TriMesh, topology
from .spectrum import BOUNDARY_LAPLACIAN, FEM, FEM_TOLERANCE, STEKLOV, Spectrum

NULLSPACE_RTOL = 1e-10
HARMONIC_RTOL = 1e-8


def assemble_stiffness(mesh: TriMesh) -> sp.csr_matrix:
    """Global P1 stiffness ``K_ij = int grad(phi_i) . grad(phi_j)``."""
    v, t = mesh.vertices, mesh.triangles
    area = mesh.triangle_areas
    if np.any(area <= 0):
        raise AssemblyError("degenerate triangle in stiffness assembly")
    # edge opposite vertex i, for i = 0, 1, 2
    e = np.stack(
        [v[t[:, 2]] - v[t[:, 1]], v[t[:, 0]] - v[t[:, 2]], v[t[:, 1]] - v[t[:, 0]]], axis=1
    )
    local = np.einsum("tid,tjd->tij", e, e) / (4.0 * area)[:, None, None]
    rows = np.repeat(t, 3, axis=1).ravel()
    cols = np.tile(t, (1, 3)).ravel()
    n = mesh.n_vertices
    return sp.csr_matrix((local.ravel(), (rows, cols)), shape=(n, n))


def _loop_edges(mesh: TriMesh, loop) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    a = np.asarray(loop)
    b = np.roll(a, -1)
    d = mesh.vertices[b] - mesh.vertices[a]
    return a, b, np.hypot(d[:, 0], d[:, 1])


def _boundary_edges(mesh: TriMesh):
    parts = [_loop_edges(mesh, lp) for lp in mesh.boundary_loops]
    return tuple(np.concatenate(x) for x in zip(*parts))


def assemble_boundary_mass(mesh: TriMesh) -> sp.csr_matrix:
    """Consistent 1D mass ``h/6 [[2, 1], [1, 2]]`` on each boundary edge."""
    a, b, h = _boundary_edges(mesh)
    rows = np.concatenate([a, a, b, b])
    cols = np.concatenate([a, b, a, b])
    vals = np.concatenate([h / 3, h / 6, h / 6, h / 3])
    n = mesh.n_vertices
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def assemble_boundary_stiffness(mesh: TriMesh) -> sp.csr_matrix:
    """Periodic 1D stiffness ``1/h [[1, -1], [-1, 1]]`` on each boundary edge.

    Its quadratic form is the tangential energy ``int (du/ds)^2`` of the
    piecewise-linear boundary trace.
    """
    a, b, h = _boundary_edges(mesh)
    rows = np.concatenate([a, a, b, b])
    cols = np.concatenate([a, b, a, b])
    vals = np.concatenate([1 / h, -1 / h, -1 / h, 1 / h])
    n = mesh.n_vertices
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


class FemOperators:
    """Per-mesh operator cache. Obtain through :func:`operators`."""

    def __init__(self, mesh: TriMesh):
        self.mesh = mesh
        self.bnd = np.asarray(mesh.boundary_vertices)
        self.inn = np.asarray(mesh.interior_vertices)

    @cached_property
    def K(self) -> sp.csr_matrix:
        return assemble_stiffness(self.mesh)

    @cached_property
    def Mb(self) -> sp.csr_matrix:
        return assemble_boundary_mass(self.mesh)

    @cached_property
    def Sb(self) -> sp.csr_matrix:
        return assemble_boundary_stiffness(self.mesh)

    @cached_property
    def Mbb(self) -> np.ndarray:
        return self.Mb[self.bnd][:, self.bnd].toarray()

    @cached_property
    def Sbb(self) -> np.ndarray:
        return self.Sb[self.bnd][:, self.bnd].toarray()

    @cached_property
    def Kii_lu(self):
        if len(self.inn) == 0:
            return None
        kii = self.K[self.inn][:, self.inn].tocsc()
        try:
            return spla.splu(kii)
        except RuntimeError as exc:
            raise InternalInvariantError(f"interior stiffness is singular: {exc}") from exc

    @cached_property
    def Kib(self) -> sp.csr_matrix:
        return self.K[self.inn][:, self.bnd]

    @cached_property
    def dtn(self) -> np.ndarray:
        kbb = self.K[self.bnd][:, self.bnd].toarray()
        if self.Kii_lu is None:
            return kbb
        x = self.Kii_lu.solve(self.Kib.toarray())
        lam = kbb - self.Kib.T @ x
        if not np.all(np.isfinite(lam)):
            raise InternalInvariantError("non-finite entries in the Schur complement")
        return np.asarray(lam)

    @cached_property
    def steklov_eig(self) -> tuple[np.ndarray, np.ndarray]:
        """All Steklov pairs, eigenvectors ``M_b``-orthonormal; constants deflated."""
        lam = 0.5 * (self.dtn + self.dtn.T)
        return _deflated_geneig(lam, self.Mbb)

    @cached_property
    def laplacian_eig(self) -> tuple[np.ndarray, np.ndarray]:
        """Boundary-Laplacian pairs over all loops, sorted; one exact zero per loop."""
        nb = len(self.bnd)
        vals, vecs = [], []
        start = 0
        for lp in self.mesh.boundary_loops:
            sl = slice(start, start + len(lp))
            w, x = _deflated_geneig(self.Sbb[sl, sl], self.Mbb[sl, sl])
            full = np.zeros((nb, len(w)))
            full[sl] = x
            vals.append(w)
            vecs.append(full)
            start += len(lp)
        w = np.concatenate(vals)
        x = np.hstack(vecs)
        order = np.argsort(w, kind="stable")
        return w[order], x[:, order]

    @cached_property
    def neumann_lu(self):
        """LU of the stiffness bordered by the boundary-mean constraint."""
        n = self.mesh.n_vertices
        c = np.asarray(self.Mb.sum(axis=1)).ravel()
        bordered = sp.bmat(
            [[self.K, sp.csr_matrix(c[:, None])], [sp.csr_matrix(c[None, :]), None]], format="csc"
        )
        return spla.splu(bordered), n


def operators(mesh: TriMesh) -> FemOperators:
    ops = mesh.__dict__.get("_fem_ops")
    if ops is None:
        ops = FemOperators(mesh)
        mesh.__dict__["_fem_ops"] = ops
    return ops


def _deflated_geneig(a: np.ndarray, m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``a x = w m x`` knowing the constant vector spans the kernel of ``a``.

    Cholesky ``m = L L^T`` turns the pencil into ``C = L^-1 a L^-T``; the
    image ``L^T 1`` of the constant is split off with a Householder basis and
    reported as an exact zero eigenvalue.
    """
    n = a.shape[0]
    try:
        L = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise InternalInvariantError("boundary mass is not positive definite") from exc
    c = sla.solve_triangular(L, a, lower=True)
    c = sla.solve_triangular(L, c.T, lower=True)
    c = 0.5 * (c + c.T)
    y0 = L.T @ np.ones(n)
    y0 /= np.linalg.norm(y0)
    q, _ = np.linalg.qr(np.column_stack([y0, np.eye(n)[:, : n - 1]]))
    q[:, 0] = y0
    rest = q[:, 1:]
    w, z = np.linalg.eigh(rest.T @ c @ rest)
    vals = np.concatenate([[0.0], w])
    ys = np.column_stack([y0, rest @ z])
    vecs = sla.solve_triangular(L.T, ys, lower=False)
    if vals[1:].size and vals[1] < -1e-8 * max(1.0, abs(vals[-1])):
        raise InternalInvariantError(f"negative eigenvalue {vals[1]:.3e} after deflation")
    vals[1:] = np.maximum(vals[1:], 0.0)
    return vals, vecs


def dtn_matrix(mesh: TriMesh) -> np.ndarray:
    """Dense DtN matrix ``K_bb - K_bi K_ii^-1 K_ib`` on the boundary vertices."""
    out = operators(mesh).dtn.copy()
    return out


def boundary_mass_matrix(mesh: TriMesh) -> np.ndarray:
    """``M_b`` restricted to boundary vertices (dense)."""
    return operators(mesh).Mbb.copy()


def _check_count(count, available: int, what: str) -> int:
    if isinstance(count, bool) or int(count) != count or count < 1:
        raise ParameterError(f"count must be a positive integer, got {count!r}")
    if count > available:
        raise SpectrumIndexError(f"count {count} exceeds the {available} available {what} eigenvalues")
    return int(count)


def _fem_spectrum(vals, kind, mesh: TriMesh, tolerance: float) -> Spectrum:
    return Spectrum(
        vals, kind, source=FEM, label=mesh.name, refinement=mesh.refinement, tolerance=tolerance
    )


def steklov_spectrum(mesh: TriMesh, count: int, tolerance: float = FEM_TOLERANCE) -> Spectrum:
    """Smallest ``count`` discrete Steklov eigenvalues, ascending, first one exactly 0."""
    ops = operators(mesh)
    count = _check_count(count, len(ops.bnd), "Steklov")
    vals, _ = ops.steklov_eig
    return _fem_spectrum(vals[:count], STEKLOV, mesh, tolerance)


def boundary_laplacian_spectrum(mesh: TriMesh, count: int, tolerance: float = FEM_TOLERANCE) -> Spectrum:
    """Smallest ``count`` eigenvalues of the Laplacian of the boundary curve(s).

    Each loop contributes its own spectrum, so the value 0 appears once per loop.
    """
    ops = operators(mesh)
    count = _check_count(count, len(ops.bnd), "boundary Laplacian")
    vals, _ = ops.laplacian_eig
    return _fem_spectrum(vals[:count], BOUNDARY_LAPLACIAN, mesh, tolerance)


def _boundary_data(mesh: TriMesh, values) -> np.ndarray:
    ops = operators(mesh)
    values = np.asarray(values, dtype=float)
    if values.shape == (len(ops.bnd),):
        return values
    if values.shape == (mesh.n_vertices,):
        return values[ops.bnd]
    raise ParameterError(
        f"boundary data must have {len(ops.bnd)} (boundary) or {mesh.n_vertices} (all) entries"
    )


def harmonic_extension(mesh: TriMesh, boundary_values) -> np.ndarray:
    """Discrete harmonic function with the given boundary values.

    ``boundary_values`` is ordered like ``mesh.boundary_vertices`` or is a
    full vertex array whose interior entries are ignored.
    """
    ops = operators(mesh)
    ub = _boundary_data(mesh, boundary_values)
    u = np.zeros(mesh.n_vertices)
    u[ops.bnd] = ub
    if ops.Kii_lu is not None:
        u[ops.inn] = ops.Kii_lu.solve(-(ops.Kib @ ub))
    return u


def tangential_flux(mesh: TriMesh, u) -> np.ndarray:
    """Load vector of ``-du/ds`` against the boundary hat functions.

    On each boundary edge the tangential derivative is ``(u_next - u_prev)/h``;
    integrated against the hat functions this leaves
    ``-(u_next - u_prev)/2`` at every boundary vertex.
    """
    u = np.asarray(u, dtype=float)
    g = np.zeros(mesh.n_vertices)
    for lp in mesh.boundary_loops:
        a = np.asarray(lp)
        g[a] = -0.5 * (u[np.roll(a, -1)] - u[np.roll(a, 1)])
    return g


def _require_simply_connected(mesh: TriMesh) -> None:
    topo = topology(mesh)
    if topo.b1 != 0:
        raise TopologyError(
            f"harmonic conjugates need a simply connected domain (b1 = {topo.b1})"
        )


def harmonic_conjugate(mesh: TriMesh, u, check_harmonic: bool = True) -> np.ndarray:
    """Conjugate ``v`` of a discrete harmonic ``u``: ``grad v`` = ``grad u`` rotated by +90 degrees.

    Solves the Neumann problem ``K v = g`` with ``g`` from
    :func:`tangential_flux` (``dv/dn = -du/ds``), fixing the constant by zero
    boundary mean. For ``u = x`` on the disk this returns ``v ~ y``.
    """
    _require_simply_connected(mesh)
    ops = operators(mesh)
    u = np.asarray(u, dtype=float)
    if u.shape != (mesh.n_vertices,):
        raise ParameterError(f"u must have {mesh.n_vertices} entries")
    if check_harmonic and len(ops.inn):
        res = (ops.K @ u)[ops.inn]
        scale = abs(ops.K).max() * max(np.max(np.abs(u)), 1e-300)
        if np.max(np.abs(res)) > HARMONIC_RTOL * scale:
            raise PreconditionError(
                f"u is not discrete harmonic (interior residual {np.max(np.abs(res)):.3e})"
            )
    lu, n = ops.neumann_lu
    rhs = np.append(tangential_flux(mesh, u), 0.0)
    sol = lu.solve(rhs)
    return sol[:n]


def dirichlet_energy(mesh: TriMesh, u) -> float:
    u = np.asarray(u, dtype=float)
    return float(u @ (operators(mesh).K @ u))


# --------------------------------------------------------------------------
# witness matrices
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WitnessPair:
    """Witness matrices in the Dirichlet-orthonormal trial basis ``u_1..u_m``.

    ``A^-1(i, j) = int_bnd u_i u_j`` and ``B(i, j) = int_bnd u_i' u_j'``
    (tangential derivatives, equal to the normal derivatives of the
    conjugates up to sign). ``diag_ratio_bounds[i-1]`` is the discrete
    ``lambda_{r+s+i-1}`` of the boundary curve.
    """

    A: SpdMatrix
    B: SpdMatrix
    A_inv: np.ndarray
    r: int
    s: int
    m: int
    diag_ratio_bounds: np.ndarray
    coefficients: np.ndarray
    trial_functions: np.ndarray
    conjugates: np.ndarray
    conjugate_gram: np.ndarray = field(repr=False)

    def eigenvalues_A(self) -> np.ndarray:
        return self.A.eigenvalues()

    def eigenvalues_B(self) -> np.ndarray:
        return self.B.eigenvalues()

    def diag_ratios(self) -> np.ndarray:
        return np.diagonal(self.B.entries) / np.diagonal(self.A_inv)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "s": self.s,
            "m": self.m,
            "A": self.A.entries.tolist(),
            "B": self.B.entries.tolist(),
            "A_inv": self.A_inv.tolist(),
            "eigenvalues_A": self.eigenvalues_A().tolist(),
            "eigenvalues_B": self.eigenvalues_B().tolist(),
            "diag_ratios": self.diag_ratios().tolist(),
            "diag_ratio_bounds": self.diag_ratio_bounds.tolist(),
        }


def _first_null_vector(c: np.ndarray, threshold: float) -> np.ndarray:
    """Null vector of ``c`` using the fewest leading columns (lowest frequencies)."""
    n = c.shape[1]
    if c.shape[0] == 0:
        out = np.zeros(n)
        out[0] = 1.0
        return out
    for j in range(1, n + 1):
        _, sv, vt = np.linalg.svd(c[:, :j])
        rank = int(np.sum(sv > threshold))
        if j - rank >= 1:
            vec = np.zeros(n)
            vec[:j] = vt[-1]
            return vec
    raise ConstructionError("constraint system has no null vector")


def witness_matrices(mesh: TriMesh, r: int, s: int, m: int) -> WitnessPair:
    """Build the witness matrices from constrained harmonic trial functions.

    Trial function ``u_k`` lies in the span of the harmonic extensions of
    boundary-Laplacian eigenfunctions ``phi_2..phi_{r+s+k-1}`` and satisfies
    ``r+s+k-3`` linear constraints: boundary-orthogonal to the Steklov
    eigenfunctions of ``sigma_2..sigma_r``; conjugate boundary-orthogonal to
    those of ``sigma_2..sigma_s``; Dirichlet-orthogonal to ``u_1..u_{k-1}``.
    Among admissible directions the one using the fewest leading basis
    functions is taken, then scaled to unit Dirichlet energy.
    """
    for name, val in (("r", r), ("s", s), ("m", m)):
        if isinstance(val, bool) or int(val) != val or val < 1:
            raise ParameterError(f"{name} must be a positive integer, got {val!r}")
    r, s, m = int(r), int(s), int(m)
    _require_simply_connected(mesh)
    ops = operators(mesh)
    nb = len(ops.bnd)
    top = r + s + m - 1
    if top > nb - 1:
        raise ParameterError(f"r+s+m-1 = {top} needs more than {nb} boundary vertices")

    lam_vals, lam_vecs = ops.laplacian_eig
    st_vals, st_vecs = ops.steklov_eig
    # basis phi_2 .. phi_top, boundary values and harmonic extensions
    phi_b = lam_vecs[:, 1:top]
    nbasis = phi_b.shape[1]
    phi_hat = np.column_stack([harmonic_extension(mesh, phi_b[:, j]) for j in range(nbasis)])
    conj = np.column_stack(
        [harmonic_conjugate(mesh, phi_hat[:, j], check_harmonic=False) for j in range(nbasis)]
    )
    gram = phi_hat.T @ (ops.K @ phi_hat)
    gram = 0.5 * (gram + gram.T)
    mbb = ops.Mbb
    psi = st_vecs[:, 1:r]
    eps = st_vecs[:, 1:s]
    rows_u = psi.T @ mbb @ phi_b
    rows_w = eps.T @ mbb @ conj[ops.bnd]

    coeffs = np.zeros((nbasis, m))
    for k in range(1, m + 1):
        n_unknown = r + s + k - 2
        rows = [rows_u[:, :n_unknown], rows_w[:, :n_unknown]]
        if k > 1:
            rows.append((coeffs[:, : k - 1].T @ gram)[:, :n_unknown])
        c = np.vstack(rows) if rows else np.zeros((0, n_unknown))
        if c.shape[0] > n_unknown - 1:
            raise ConstructionError(
                f"u_{k}: {c.shape[0]} constraints for {n_unknown} unknowns"
            )
        thr = NULLSPACE_RTOL * (np.linalg.norm(c, 2) if c.size else 1.0)
        vec = _first_null_vector(c, thr)
        resid = np.linalg.norm(c @ vec) if c.size else 0.0
        if resid > 1e-8 * max(1.0, np.linalg.norm(c, 2) if c.size else 1.0):
            raise ConstructionError(f"u_{k}: constraint residual {resid:.3e}")
        energy = float(vec @ gram[:n_unknown, :n_unknown] @ vec)
        if not energy > 0:
            raise ConstructionError(f"u_{k} has zero Dirichlet energy")
        vec /= math.sqrt(energy)
        if vec[np.argmax(np.abs(vec))] < 0:
            vec = -vec
        coeffs[:n_unknown, k - 1] = vec

    u_b = phi_b @ coeffs
    a_inv = u_b.T @ mbb @ u_b
    a_inv = 0.5 * (a_inv + a_inv.T)
    b = u_b.T @ ops.Sbb @ u_b
    b = 0.5 * (b + b.T)
    a = np.linalg.inv(a_inv)
    a = 0.5 * (a + a.T)
    trial = phi_hat @ coeffs
    conjugates = conj @ coeffs
    conj_gram = conjugates.T @ (ops.K @ conjugates)
    bounds = np.array([lam_vals[r + s + i - 2] for i in range(1, m + 1)])
    return WitnessPair(
        A=SpdMatrix(a),
        B=SpdMatrix(b),
        A_inv=a_inv,
        r=r,
        s=s,
        m=m,
        diag_ratio_bounds=bounds,
        coefficients=coeffs,
        trial_functions=trial,
        conjugates=conjugates,
        conjugate_gram=0.5 * (conj_gram + conj_gram.T),
    )
