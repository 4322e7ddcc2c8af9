"""Eigenvalue sequences with 1-based indexing and provenance."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, ParseError, SpectrumIndexError

STEKLOV = "steklov"
BOUNDARY_LAPLACIAN = "boundary_laplacian"
KINDS = (STEKLOV, BOUNDARY_LAPLACIAN)

ANALYTIC = "analytic"
FEM = "fem"

ANALYTIC_TOLERANCE = 1e-8
FEM_TOLERANCE = 2e-2


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues ``values[0] = x_1 <= x_2 <= ...``.

    Use :meth:`at` for the 1-based index convention (``at(1)`` is the first
    eigenvalue, which is 0 for both Steklov and boundary-Laplacian spectra of
    connected domains).
    """

    values: np.ndarray
    kind: str
    source: str = ANALYTIC
    label: str = ""
    refinement: int | None = None
    tolerance: float = field(default=ANALYTIC_TOLERANCE)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).ravel()
        if self.kind not in KINDS:
            raise ParameterError(f"unknown spectrum kind {self.kind!r}")
        if self.source not in (ANALYTIC, FEM):
            raise ParameterError(f"unknown spectrum source {self.source!r}")
        if not np.all(np.isfinite(vals)):
            raise ParameterError("spectrum values must be finite")
        if np.any(vals < 0):
            raise ParameterError("spectrum values must be non-negative")
        if np.any(np.diff(vals) < 0):
            raise ParameterError("spectrum values must be ascending")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def count(self) -> int:
        return len(self.values)

    @property
    def is_analytic(self) -> bool:
        return self.source == ANALYTIC

    def at(self, k: int) -> float:
        """The ``k``-th eigenvalue, 1-based."""
        if not 1 <= k <= len(self.values):
            raise SpectrumIndexError(
                f"index {k} outside 1..{len(self.values)} of {self.kind} spectrum {self.label!r}"
            )
        return float(self.values[k - 1])

    def provenance(self) -> dict:
        out = {"kind": self.kind, "source": self.source, "label": self.label}
        if self.refinement is not None:
            out["refinement"] = self.refinement
        return out

    def to_dict(self) -> dict:
        return {
            **self.provenance(),
            "count": self.count,
            "tolerance": self.tolerance,
            "values": [float(x) for x in self.values],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Spectrum":
        try:
            return cls(
                values=data["values"],
                kind=data["kind"],
                source=data.get("source", ANALYTIC),
                label=data.get("label", ""),
                refinement=data.get("refinement"),
                tolerance=float(data.get("tolerance", ANALYTIC_TOLERANCE)),
            )
        except KeyError as exc:
            raise ParseError(f"spectrum record missing field {exc.args[0]!r}") from exc
