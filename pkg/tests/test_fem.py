from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import grid_with_holes
from steklab import analytic, fem
from steklab.errors import ParameterError, PreconditionError, SpectrumIndexError, TopologyError
from steklab.mesh import Disk, PerturbedDisk, TriMesh, boundary_length, generate
from steklab.spectrum import BOUNDARY_LAPLACIAN, FEM, STEKLOV


class TestAssembly:
    def test_stiffness_annihilates_constants(self, disk_mesh):
        K = fem.assemble_stiffness(disk_mesh)
        assert np.max(np.abs(K @ np.ones(disk_mesh.n_vertices))) < 1e-12
        assert abs(K - K.T).max() < 1e-14

    def test_stiffness_energy_of_linear_function(self, disk_mesh):
        # |grad x|^2 = 1 integrates to the mesh area
        x = disk_mesh.vertices[:, 0]
        assert fem.dirichlet_energy(disk_mesh, x) == pytest.approx(disk_mesh.area, rel=1e-12)

    def test_delaunay_off_diagonals_nonpositive(self, disk_mesh):
        K = fem.assemble_stiffness(disk_mesh).tocoo()
        off = K.data[K.row != K.col]
        assert off.max() <= 1e-12

    def test_boundary_mass_total_is_perimeter(self, annulus_mesh):
        Mb = fem.assemble_boundary_mass(annulus_mesh)
        assert Mb.sum() == pytest.approx(boundary_length(annulus_mesh).total, rel=1e-13)

    def test_boundary_stiffness_of_arclength(self):
        # unit square boundary: the periodic stiffness annihilates constants
        mesh = TriMesh([[0, 0], [1, 0], [1, 1], [0, 1]], [[0, 1, 2], [0, 2, 3]])
        S = fem.assemble_boundary_stiffness(mesh).toarray()
        assert np.allclose(S.sum(axis=1), 0)
        assert np.allclose(np.diag(S), 2.0)


class TestDtN:
    def test_symmetric_psd_with_constant_kernel(self, disk_mesh):
        lam = fem.dtn_matrix(disk_mesh)
        assert np.allclose(lam, lam.T, atol=1e-12)
        assert np.max(np.abs(lam @ np.ones(len(lam)))) < 1e-10
        assert np.linalg.eigvalsh(0.5 * (lam + lam.T)).min() > -1e-10

    def test_linear_data_gives_exact_flux(self, disk_mesh):
        # harmonic extension of linear data is exact, so DtN x = (K x) on the boundary
        bnd = disk_mesh.boundary_vertices
        x = disk_mesh.vertices[:, 0]
        K = fem.assemble_stiffness(disk_mesh)
        assert np.allclose(fem.dtn_matrix(disk_mesh) @ x[bnd], (K @ x)[bnd], atol=1e-12)
        # and approximates the flux x/R weighted by the boundary mass
        Mb = fem.boundary_mass_matrix(disk_mesh)
        assert np.allclose(fem.dtn_matrix(disk_mesh) @ x[bnd], Mb @ x[bnd], atol=2e-3)


class TestSpectra:
    def test_disk_steklov_convergence(self):
        errs = []
        for ref in (2, 3, 4):
            s = fem.steklov_spectrum(generate(Disk(1.0), ref), 7)
            assert s.at(1) == 0.0 and s.source == FEM and s.kind == STEKLOV
            errs.append(np.max(np.abs(s.values[1:] - [1, 1, 2, 2, 3, 3]) / [1, 1, 2, 2, 3, 3]))
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 0.01

    def test_fem_overestimates_steklov(self, disk_mesh):
        # Galerkin on the Schur complement is a min-max upper bound
        s = fem.steklov_spectrum(disk_mesh, 11)
        exact = analytic.steklov_disk(1.0, 11)
        assert np.all(s.values[1:] >= exact.values[1:] - 1e-12)

    def test_disk_pairs(self, disk_mesh):
        # modes 1..3 stay paired under the 8-fold mesh symmetry; mode 4 splits
        s = fem.steklov_spectrum(disk_mesh, 7).values
        assert np.allclose(s[1::2], s[2::2], rtol=1e-9)

    def test_circle_laplacian(self, disk_mesh):
        lam = fem.boundary_laplacian_spectrum(disk_mesh, 5)
        assert lam.kind == BOUNDARY_LAPLACIAN
        assert np.allclose(lam.values, [0, 1, 1, 4, 4], rtol=5e-3, atol=1e-12)

    def test_annulus_against_closed_form(self, annulus_mesh):
        s = fem.steklov_spectrum(annulus_mesh, 9)
        exact = analytic.steklov_annulus(0.5, 1.0, 9)
        assert np.allclose(s.values, exact.values, rtol=1e-2, atol=1e-12)

    def test_one_zero_per_loop(self, annulus_mesh):
        lam = fem.boundary_laplacian_spectrum(annulus_mesh, 4).values
        assert lam[0] == lam[1] == 0.0 and lam[2] > 0
        three = fem.boundary_laplacian_spectrum(grid_with_holes(), 5).values
        assert three[:3].tolist() == [0.0, 0.0, 0.0] and three[3] > 0

    def test_count_beyond_boundary_is_index_error(self):
        with pytest.raises(SpectrumIndexError):
            fem.steklov_spectrum(generate(Disk(1.0), 1), 10_000)
        with pytest.raises(ParameterError):
            fem.steklov_spectrum(generate(Disk(1.0), 1), 0)

    def test_tolerance_carried(self, disk_mesh):
        assert fem.steklov_spectrum(disk_mesh, 3, 0.05).tolerance == 0.05


@settings(max_examples=10, deadline=None)
@given(st.floats(0.3, 3.0))
def test_steklov_scales_inversely_with_size(scale):
    base = generate(PerturbedDisk((0.1,), (0.05,)), 2)
    scaled = TriMesh(base.vertices * scale, base.triangles)
    a = fem.steklov_spectrum(base, 8).values
    b = fem.steklov_spectrum(scaled, 8).values
    assert np.allclose(b * scale, a, rtol=1e-9, atol=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.floats(0.0, 2 * math.pi))
def test_steklov_rotation_invariant(angle):
    base = generate(PerturbedDisk((0.1, 0.05), ()), 2)
    c, s = math.cos(angle), math.sin(angle)
    rotated = TriMesh(base.vertices @ np.array([[c, s], [-s, c]]), base.triangles)
    assert np.allclose(fem.steklov_spectrum(rotated, 8).values, fem.steklov_spectrum(base, 8).values, rtol=1e-9, atol=1e-12)


class TestHarmonic:
    def test_extension_of_linear_is_exact(self, disk_mesh):
        x = disk_mesh.vertices[:, 0] + 2 * disk_mesh.vertices[:, 1]
        u = fem.harmonic_extension(disk_mesh, x[disk_mesh.boundary_vertices])
        assert np.allclose(u, x, atol=1e-12)
        assert np.allclose(fem.harmonic_extension(disk_mesh, x), x, atol=1e-12)

    def test_extension_bad_shape(self, disk_mesh):
        with pytest.raises(ParameterError):
            fem.harmonic_extension(disk_mesh, np.ones(3))

    def test_conjugate_of_x_is_y(self, disk_mesh):
        x, y = disk_mesh.vertices[:, 0], disk_mesh.vertices[:, 1]
        v = fem.harmonic_conjugate(disk_mesh, x)
        bnd = disk_mesh.boundary_vertices
        y0 = y - np.mean(y[bnd])
        assert np.allclose(v, y0, atol=1e-12)

    def test_conjugate_twice_negates(self):
        mesh = generate(PerturbedDisk((0.1,), (0.07,)), 3)
        sigma_vecs = fem.operators(mesh).steklov_eig[1]
        u = fem.harmonic_extension(mesh, sigma_vecs[:, 3])
        v = fem.harmonic_conjugate(mesh, u)
        w = fem.harmonic_conjugate(mesh, v, check_harmonic=False)
        u0 = u - np.mean(u[mesh.boundary_vertices])
        # the discrete conjugate is not exactly harmonic, so the involution is approximate
        assert np.linalg.norm(w + u0) / np.linalg.norm(u0) < 5e-2
        assert fem.dirichlet_energy(mesh, v) == pytest.approx(fem.dirichlet_energy(mesh, u), rel=5e-2)

    def test_conjugate_requires_simply_connected(self, annulus_mesh):
        with pytest.raises(TopologyError):
            fem.harmonic_conjugate(annulus_mesh, annulus_mesh.vertices[:, 0])

    def test_conjugate_requires_harmonic(self, disk_mesh):
        r2 = np.sum(disk_mesh.vertices**2, axis=1)
        with pytest.raises(PreconditionError):
            fem.harmonic_conjugate(disk_mesh, r2)


class TestWitness:
    @pytest.mark.parametrize("rsm", [(1, 1, 1), (1, 1, 2), (2, 1, 2), (1, 2, 2), (2, 2, 3)])
    def test_conclusions(self, disk_mesh, rsm):
        r, s, m = rsm
        sigma = fem.steklov_spectrum(disk_mesh, r + s + m + 1)
        w = fem.witness_matrices(disk_mesh, r, s, m)
        tol = 1 + 3 * 2e-2
        for i in range(1, m + 1):
            assert sigma.at(r + i) <= w.eigenvalues_A()[i - 1] * tol
            assert sigma.at(s + i) <= w.eigenvalues_B()[i - 1] * tol
        assert np.all(w.diag_ratios() <= w.diag_ratio_bounds * tol)

    def test_trial_functions_dirichlet_orthonormal(self, disk_mesh):
        w = fem.witness_matrices(disk_mesh, 2, 1, 3)
        K = fem.operators(disk_mesh).K
        gram = w.trial_functions.T @ (K @ w.trial_functions)
        assert np.allclose(gram, np.eye(3), atol=1e-9)
        assert np.allclose(w.A.entries @ w.A_inv, np.eye(3), atol=1e-9)

    def test_perturbed_disk(self):
        mesh = generate(PerturbedDisk((0.15,), (0.05, 0.03)), 3)
        w = fem.witness_matrices(mesh, 1, 2, 2)
        sigma = fem.steklov_spectrum(mesh, 6)
        assert sigma.at(2) <= w.eigenvalues_A()[0] * 1.06
        assert np.all(w.diag_ratios() <= w.diag_ratio_bounds * 1.06)

    def test_rejects_multiply_connected(self, annulus_mesh):
        with pytest.raises(TopologyError):
            fem.witness_matrices(annulus_mesh, 1, 1, 1)

    def test_parameter_checks(self, disk_mesh):
        with pytest.raises(ParameterError):
            fem.witness_matrices(disk_mesh, 0, 1, 1)
        with pytest.raises(ParameterError):
            fem.witness_matrices(generate(Disk(1.0), 1), 5, 5, 10)
        assert set(fem.witness_matrices(disk_mesh, 1, 1, 1).to_dict()) >= {"A", "B", "diag_ratio_bounds"}
