from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import grid_with_holes
from steklab.errors import GeometryError, ParameterError, ParseError, TopologyError
from steklab.mesh import (
    Annulus,
    Disk,
    DomainTopology,
    FromFile,
    PerturbedDisk,
    TriMesh,
    boundary_length,
    generate,
    load,
    loop_signed_area,
    mesh_from_dict,
    save,
    topology,
)


def euler_characteristic(mesh: TriMesh) -> int:
    edges = {tuple(sorted(e)) for t in mesh.triangles.tolist() for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0]))}
    return mesh.n_vertices - len(edges) + mesh.n_triangles


class TestGenerate:
    def test_disk_single_loop_on_circle(self):
        mesh = generate(Disk(1.0), 1)
        assert len(mesh.boundary_loops) == 1
        assert len(mesh.boundary_vertices) == 16
        r = np.linalg.norm(mesh.vertices[mesh.boundary_vertices], axis=1)
        assert np.allclose(r, 1.0, atol=1e-15)

    def test_disk_vertex_counts(self):
        counts = [generate(Disk(1.0), k).n_vertices for k in range(1, 5)]
        assert counts == [25, 81, 289, 1089]

    def test_boundary_vertices_grow_with_refinement(self):
        nb = [len(generate(Disk(2.0), k).boundary_vertices) for k in range(1, 5)]
        assert nb == [16, 32, 64, 128]

    def test_perimeter_tends_to_two_pi(self):
        lengths = [boundary_length(generate(Disk(1.0), k)).total for k in range(1, 6)]
        assert all(b > a for a, b in zip(lengths, lengths[1:]))
        assert all(x < 2 * math.pi for x in lengths)
        assert 2 * math.pi - lengths[-1] < 1e-3

    def test_annulus_two_loops_oriented(self):
        mesh = generate(Annulus(0.5, 1.0), 3)
        assert len(mesh.boundary_loops) == 2
        assert loop_signed_area(mesh, 0) > 0 > loop_signed_area(mesh, 1)
        inner = np.linalg.norm(mesh.vertices[list(mesh.boundary_loops[1])], axis=1)
        assert np.allclose(inner, 0.5, atol=1e-15)
        lengths = boundary_length(mesh)
        assert lengths.per_loop[0] == pytest.approx(2 * math.pi, rel=1e-2)
        assert lengths.per_loop[1] == pytest.approx(math.pi, rel=1e-2)

    def test_zero_perturbation_matches_disk_boundary(self):
        a = generate(PerturbedDisk((0.0, 0.0), (0.0,), 1.0), 3)
        b = generate(Disk(1.0), 3)
        assert np.allclose(a.vertices[a.boundary_vertices], b.vertices[b.boundary_vertices], atol=1e-15)

    def test_perturbed_boundary_on_curve(self):
        shape = PerturbedDisk((0.1, -0.05), (0.08,), 1.0)
        mesh = generate(shape, 3)
        p = mesh.vertices[mesh.boundary_vertices]
        theta = np.arctan2(p[:, 1], p[:, 0])
        assert np.allclose(np.hypot(p[:, 0], p[:, 1]), shape.radius_at(theta), atol=1e-14)

    def test_triangles_positive_area(self):
        mesh = generate(PerturbedDisk((0.2,), (0.1, 0.05)), 3)
        assert np.all(mesh.triangle_areas > 0)

    @pytest.mark.parametrize(
        "shape",
        [Disk(0.0), Disk(-1.0), Annulus(1.0, 0.5), Annulus(0.0, 1.0), Annulus(0.5, 0.5), PerturbedDisk((), (), -1.0)],
    )
    def test_invalid_shape_parameters(self, shape):
        with pytest.raises(ParameterError):
            generate(shape, 2)

    def test_nonpositive_perturbed_radius(self):
        with pytest.raises(GeometryError):
            generate(PerturbedDisk((1.5,), ()), 2)

    @pytest.mark.parametrize("ref", [0, -1, 11, 2.5, True])
    def test_invalid_refinement(self, ref):
        with pytest.raises(ParameterError):
            generate(Disk(1.0), ref)

    def test_from_file(self, tmp_path):
        mesh = generate(Disk(1.0), 2)
        path = tmp_path / "d.json"
        save(mesh, path)
        assert generate(FromFile(str(path)), 1) == mesh
        with pytest.raises(ParameterError):
            generate(FromFile(str(tmp_path / "missing.json")), 1)


class TestTopology:
    def test_disk(self):
        topo = topology(generate(Disk(1.0), 2))
        assert (topo.genus, topo.boundary_components, topo.b0, topo.b1) == (0, 1, 1, 0)
        assert topo.simply_connected

    def test_annulus(self):
        mesh = generate(Annulus(0.5, 1.0), 2)
        assert euler_characteristic(mesh) == 0
        topo = topology(mesh)
        assert (topo.genus, topo.boundary_components, topo.b0, topo.b1) == (0, 2, 1, 1)

    def test_two_holes(self):
        mesh = grid_with_holes()
        assert euler_characteristic(mesh) == -1
        topo = topology(mesh)
        assert (topo.genus, topo.boundary_components, topo.b1) == (0, 3, 2)

    def test_invalid_topology_record(self):
        with pytest.raises(TopologyError):
            DomainTopology(-1, 1)
        with pytest.raises(TopologyError):
            DomainTopology(0, 0)

    @given(st.integers(0, 4), st.integers(1, 6))
    def test_betti_relation(self, genus, k):
        topo = DomainTopology(genus, k)
        assert topo.b0 == 1 and topo.b1 == 2 * genus + k - 1


@settings(max_examples=15, deadline=None)
@given(
    st.floats(0.05, 0.9),
    st.integers(1, 3),
)
def test_annulus_euler_characteristic(r_inner, ref):
    mesh = generate(Annulus(r_inner, 1.0), ref)
    assert euler_characteristic(mesh) == 0
    assert len(mesh.boundary_loops) == 2
    assert np.all(mesh.triangle_areas > 0)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(-0.1, 0.1), max_size=4), st.lists(st.floats(-0.1, 0.1), max_size=4))
def test_perturbed_disks_are_valid_disks(cos, sin):
    mesh = generate(PerturbedDisk(tuple(cos), tuple(sin)), 2)
    assert euler_characteristic(mesh) == 1
    assert topology(mesh).simply_connected
    assert loop_signed_area(mesh, 0) == pytest.approx(mesh.area, rel=1e-12)


class TestValidation:
    square = [[0, 0], [1, 0], [1, 1], [0, 1]]

    def test_valid_square(self):
        mesh = TriMesh(self.square, [[0, 1, 2], [0, 2, 3]])
        assert mesh.boundary_loops == ((0, 1, 2, 3),)
        assert mesh.n_edges == 5
        assert mesh.area == pytest.approx(1.0)

    def test_clockwise_triangle(self):
        with pytest.raises(GeometryError, match="non-positive area"):
            TriMesh(self.square, [[0, 2, 1], [0, 2, 3]])

    def test_unused_vertex(self):
        with pytest.raises(GeometryError, match="not used"):
            TriMesh(self.square + [[5, 5]], [[0, 1, 2], [0, 2, 3]])

    def test_disconnected(self):
        verts = self.square + [[3, 0], [4, 0], [4, 1]]
        with pytest.raises(GeometryError):
            TriMesh(verts, [[0, 1, 2], [0, 2, 3], [4, 5, 6]])

    def test_pinched_boundary(self):
        # two triangles sharing only a vertex
        verts = [[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1]]
        with pytest.raises(GeometryError):
            TriMesh(verts, [[0, 1, 2], [0, 3, 4]])

    def test_out_of_range(self):
        with pytest.raises(GeometryError):
            TriMesh(self.square, [[0, 1, 7]])


class TestIO:
    def test_roundtrip_exact(self, tmp_path):
        mesh = generate(PerturbedDisk((0.1,), (0.05,)), 3)
        path = tmp_path / "m.json"
        save(mesh, path)
        back = load(path)
        assert back == mesh
        assert back.boundary_loops == mesh.boundary_loops

    def test_syntax_error_location(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"vertices": [[0, 0],\n  [1, 0}')
        with pytest.raises(ParseError, match=r"bad.json:2:\d+"):
            load(path)

    @pytest.mark.parametrize(
        "data, match",
        [
            ([], "top level"),
            ({"vertices": [[0, 0]]}, "missing field 'triangles'"),
            ({"format": "other", "vertices": [], "triangles": []}, "format"),
            ({"vertices": [[0, 0], [1]], "triangles": [[0, 1, 0]]}, r"vertices\[1\]"),
            ({"vertices": [[0, 0], [1, 0], [0, 1]], "triangles": [[0, 1, 5]]}, r"triangles\[0\]\[2\]"),
            ({"vertices": [[0, 0], [1, 0], [0, 1]], "triangles": [[0, 2, 1]]}, "invalid mesh"),
            ({"vertices": [[0, "x"]], "triangles": [[0, 0, 0]]}, r"vertices\[0\]\[1\]"),
        ],
    )
    def test_field_diagnostics(self, data, match):
        with pytest.raises(ParseError, match=match):
            mesh_from_dict(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError, match="cannot read"):
            load(tmp_path / "none.json")

    def test_file_is_self_describing(self, tmp_path):
        path = tmp_path / "m.json"
        save(generate(Disk(1.0), 1), path)
        data = json.loads(path.read_text())
        assert data["format"] == "steklab-mesh" and data["version"] == 1
