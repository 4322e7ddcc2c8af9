"""Closed-form reference spectra: disks, circles and annuli.

These are the oracles for sharpness and convergence checks. Multiplicities
are listed explicitly so that 1-based indices line up with ``sigma_2``,
``sigma_3``, ... in the inequalities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ParameterError
from .spectrum import BOUNDARY_LAPLACIAN, STEKLOV, Spectrum


@dataclass(frozen=True)
class DiskDomain:
    radius: float = 1.0


@dataclass(frozen=True)
class CircleDomain:
    length: float = 2 * math.pi


@dataclass(frozen=True)
class AnnulusDomain:
    r_inner: float
    r_outer: float


AnalyticDomain = Union[DiskDomain, CircleDomain, AnnulusDomain]


def _check_count(count: int) -> int:
    if isinstance(count, bool) or int(count) != count or count < 1:
        raise ParameterError(f"count must be a positive integer, got {count!r}")
    return int(count)


def _positive(name: str, x: float) -> float:
    if not (math.isfinite(x) and x > 0):
        raise ParameterError(f"{name} must be positive, got {x!r}")
    return float(x)


def _paired_modes(count: int) -> np.ndarray:
    """Mode numbers ``0, 1, 1, 2, 2, ...`` truncated to ``count``."""
    i = np.arange(count)
    return (i + 1) // 2


def steklov_disk(radius: float, count: int) -> Spectrum:
    """Steklov eigenvalues ``0, 1, 1, 2, 2, ...`` of the disk, divided by ``radius``."""
    radius = _positive("radius", radius)
    count = _check_count(count)
    vals = _paired_modes(count) / radius
    return Spectrum(vals, STEKLOV, label=f"disk(r={radius!r})")


def laplacian_circle(length: float, count: int) -> Spectrum:
    """Laplacian eigenvalues of a circle: ``lambda_{2i} = lambda_{2i+1} = (2 i pi / L)^2``."""
    length = _positive("length", length)
    count = _check_count(count)
    base = 2 * math.pi / length
    vals = (_paired_modes(count) * base) ** 2
    return Spectrum(vals, BOUNDARY_LAPLACIAN, label=f"circle(L={length!r})")


def _annulus_mode(k: int, r_in: float, r_out: float) -> tuple[float, float]:
    """The two Steklov eigenvalues of Fourier mode ``k`` on the annulus.

    For ``k >= 1`` the radial part is ``A (r/R)^k + B (rho/r)^k``; the
    scaled basis keeps entries in [t, 1] with ``t = (rho/R)^k``, and the
    boundary conditions reduce to the quadratic
    ``(1 - t^2) s^2 - k (1/R + 1/rho)(1 + t^2) s + k^2 (1 - t^2) / (R rho) = 0``.
    For ``k = 0`` the basis ``1, log(r/R)`` gives ``s = 0`` and
    ``s = (1/rho + 1/R) / log(R/rho)``.
    """
    if k == 0:
        return 0.0, (1.0 / r_in + 1.0 / r_out) / math.log(r_out / r_in)
    t = (r_in / r_out) ** k
    one_m = (1.0 - t) * (1.0 + t)
    a = one_m
    b = k * (1.0 / r_out + 1.0 / r_in) * (1.0 + t * t)
    c = k * k * one_m / (r_out * r_in)
    disc = b * b - 4.0 * a * c
    big = (b + math.sqrt(max(disc, 0.0))) / (2.0 * a)
    small = c / (a * big)
    return small, big


def steklov_annulus(r_inner: float, r_outer: float, count: int) -> Spectrum:
    """Steklov spectrum of ``{r_inner < |x| < r_outer}`` by separation of variables.

    Mode 0 contributes two eigenvalues (one of them 0); every mode ``k >= 1``
    contributes two distinct eigenvalues, each with multiplicity 2.
    """
    r_inner = _positive("r_inner", r_inner)
    r_outer = _positive("r_outer", r_outer)
    if not r_inner < r_outer:
        raise ParameterError(f"need r_inner < r_outer, got {r_inner}, {r_outer}")
    count = _check_count(count)
    vals = list(_annulus_mode(0, r_inner, r_outer))
    k = 0
    while True:
        k += 1
        small, big = _annulus_mode(k, r_inner, r_outer)
        vals.sort()
        # lower branch grows with k, so nothing below vals[count-1] remains
        if len(vals) >= count and small > vals[count - 1]:
            break
        vals.extend([small, small, big, big])
    vals.sort()
    return Spectrum(np.array(vals[:count]), STEKLOV, label=f"annulus({r_inner!r},{r_outer!r})")


def annulus_modes(r_inner: float, r_outer: float, kmax: int) -> list[tuple[int, float, float]]:
    """``(k, lower, upper)`` per Fourier mode, for inspection and tests."""
    return [(k, *_annulus_mode(k, r_inner, r_outer)) for k in range(kmax + 1)]


def partial_zeta(n, exponent: float) -> float:
    """``sum_{i=1}^n i^(-exponent)``; ``n = math.inf`` is supported for exponent 2."""
    if n == math.inf:
        if exponent != 2:
            raise ParameterError("infinite sum only supported for exponent 2")
        return math.pi**2 / 6
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer or inf, got {n!r}")
    return math.fsum(i ** (-exponent) for i in range(1, int(n) + 1))


def spectrum_for(domain: AnalyticDomain, count: int, kind: str = STEKLOV) -> Spectrum:
    """Dispatch on the analytic domain catalog."""
    if isinstance(domain, DiskDomain):
        if kind == STEKLOV:
            return steklov_disk(domain.radius, count)
        return laplacian_circle(2 * math.pi * domain.radius, count)
    if isinstance(domain, CircleDomain):
        if kind != BOUNDARY_LAPLACIAN:
            raise ParameterError("a circle only has a boundary-Laplacian spectrum")
        return laplacian_circle(domain.length, count)
    if isinstance(domain, AnnulusDomain):
        if kind == STEKLOV:
            return steklov_annulus(domain.r_inner, domain.r_outer, count)
        inner = laplacian_circle(2 * math.pi * domain.r_inner, count).values
        outer = laplacian_circle(2 * math.pi * domain.r_outer, count).values
        vals = np.sort(np.concatenate([inner, outer]))[:count]
        return Spectrum(vals, BOUNDARY_LAPLACIAN, label=f"annulus-boundary({domain.r_inner!r},{domain.r_outer!r})")
    raise ParameterError(f"unknown analytic domain {domain!r}")
