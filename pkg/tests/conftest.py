from __future__ import annotations

import math
import re
import sys

import numpy as np
import pytest

from steklab import analytic
from steklab.mesh import Annulus, Disk, TriMesh, generate


@pytest.fixture(scope="session")
def disk_sigma():
    return analytic.steklov_disk(1.0, 64)


@pytest.fixture(scope="session")
def disk_lambda():
    return analytic.laplacian_circle(2 * math.pi, 64)


@pytest.fixture(scope="session")
def disk_mesh():
    return generate(Disk(1.0), 4)


@pytest.fixture(scope="session")
def annulus_mesh():
    return generate(Annulus(0.5, 1.0), 4)


def grid_with_holes(n: int = 6, holes=((1, 1), (3, 3))) -> TriMesh:
    """Unit-square grid of ``n x n`` cells, two triangles each, minus the given cells."""
    xs = np.linspace(0.0, 1.0, n + 1)
    verts = np.array([(x, y) for y in xs for x in xs])
    tris = []
    for j in range(n):
        for i in range(n):
            if (i, j) in holes:
                continue
            a = j * (n + 1) + i
            b, c, d = a + 1, a + n + 2, a + n + 1
            tris += [(a, b, c), (a, c, d)]
    return TriMesh(verts, np.array(tris), name="grid-with-holes")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: (int(re.match(r"\d+", k).group()), k)):
        ok, detail = results[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
