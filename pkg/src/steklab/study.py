"""Mesh-refinement studies against the closed-form spectra."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import analytic, fem
from .errors import ParameterError
from .mesh import Annulus, Disk, DomainShape, generate, topology
from .spectrum import BOUNDARY_LAPLACIAN, STEKLOV, Spectrum
from .suite import eval_yy


@dataclass(frozen=True)
class LevelResult:
    refinement: int
    vertices: int
    boundary_vertices: int
    steklov: tuple[float, ...]
    steklov_errors: tuple[float, ...]
    laplacian: tuple[float, ...]
    laplacian_errors: tuple[float, ...]
    yy_relative_slack: float

    @property
    def max_steklov_error(self) -> float:
        return max(self.steklov_errors)

    @property
    def max_laplacian_error(self) -> float:
        return max(self.laplacian_errors)

    def to_dict(self) -> dict:
        return {
            "refinement": self.refinement,
            "vertices": self.vertices,
            "boundary_vertices": self.boundary_vertices,
            "steklov": list(self.steklov),
            "steklov_errors": list(self.steklov_errors),
            "laplacian": list(self.laplacian),
            "laplacian_errors": list(self.laplacian_errors),
            "yy_relative_slack": self.yy_relative_slack,
        }


@dataclass(frozen=True)
class ConvergenceTable:
    shape: str
    count: int
    reference_steklov: tuple[float, ...]
    reference_laplacian: tuple[float, ...]
    levels: tuple[LevelResult, ...]

    @property
    def steklov_monotone(self) -> bool:
        e = [lv.max_steklov_error for lv in self.levels]
        return all(b < a for a, b in zip(e, e[1:]))

    @property
    def laplacian_monotone(self) -> bool:
        e = [lv.max_laplacian_error for lv in self.levels]
        return all(b < a for a, b in zip(e, e[1:]))

    @property
    def monotone(self) -> bool:
        return self.steklov_monotone and self.laplacian_monotone

    def to_dict(self) -> dict:
        return {
            "shape": self.shape,
            "count": self.count,
            "reference_steklov": list(self.reference_steklov),
            "reference_laplacian": list(self.reference_laplacian),
            "levels": [lv.to_dict() for lv in self.levels],
            "steklov_monotone": self.steklov_monotone,
            "laplacian_monotone": self.laplacian_monotone,
        }

    def rows(self) -> list[list]:
        """Flat rows ``(refinement, vertices, kind, index, value, reference, rel_error)``."""
        out = []
        for lv in self.levels:
            for kind, vals, ref, errs in (
                (STEKLOV, lv.steklov, self.reference_steklov, lv.steklov_errors),
                (BOUNDARY_LAPLACIAN, lv.laplacian, self.reference_laplacian, lv.laplacian_errors),
            ):
                for j, (v, r, e) in enumerate(zip(vals[1:], ref[1:], errs), start=2):
                    out.append([lv.refinement, lv.vertices, kind, j, v, r, e])
        return out


ROW_COLUMNS = ("refinement", "vertices", "kind", "index", "value", "reference", "relative_error")


def reference_spectra(shape: DomainShape, count: int) -> tuple[Spectrum, Spectrum]:
    """Closed-form Steklov and boundary-Laplacian spectra, if the shape has them."""
    if isinstance(shape, Disk):
        dom = analytic.DiskDomain(shape.radius)
    elif isinstance(shape, Annulus):
        dom = analytic.AnnulusDomain(shape.r_inner, shape.r_outer)
    else:
        raise ParameterError(f"no closed-form reference spectrum for {type(shape).__name__}")
    return (
        analytic.spectrum_for(dom, count, STEKLOV),
        analytic.spectrum_for(dom, count, BOUNDARY_LAPLACIAN),
    )


def _errors(vals: np.ndarray, ref: np.ndarray) -> tuple[float, ...]:
    # index 1 is always zero and skipped; further zeros (one per extra boundary loop) use absolute error
    return tuple(float(abs(v - r) / r if r > 0 else abs(v)) for v, r in zip(vals[1:], ref[1:]))


def convergence_study(shape: DomainShape, levels: Sequence[int], count: int = 7) -> ConvergenceTable:
    """Relative errors of ``sigma_2..sigma_count`` and ``lambda_2..lambda_count`` per level."""
    levels = [int(x) for x in levels]
    if not levels:
        raise ParameterError("at least one refinement level is required")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ParameterError(f"refinement levels must be strictly increasing, got {levels}")
    if count < 2:
        raise ParameterError("count must be at least 2")
    shape.validate()
    ref_s, ref_l = reference_spectra(shape, count)
    results = []
    for lev in levels:
        mesh = generate(shape, lev)
        s = fem.steklov_spectrum(mesh, count)
        lam = fem.boundary_laplacian_spectrum(mesh, count)
        topo = topology(mesh)
        yy = eval_yy(s, s, lam, 1, 1, topo)
        results.append(LevelResult(
            refinement=lev,
            vertices=len(mesh.vertices),
            boundary_vertices=len(mesh.boundary_vertices),
            steklov=tuple(float(x) for x in s.values),
            steklov_errors=_errors(s.values, ref_s.values),
            laplacian=tuple(float(x) for x in lam.values),
            laplacian_errors=_errors(lam.values, ref_l.values),
            yy_relative_slack=yy.relative_slack,
        ))
    name = type(shape).__name__.lower()
    return ConvergenceTable(
        name,
        count,
        tuple(float(x) for x in ref_s.values),
        tuple(float(x) for x in ref_l.values),
        tuple(results),
    )
