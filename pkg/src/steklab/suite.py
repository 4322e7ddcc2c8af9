"""Evaluators for the trace / inverse-trace inequalities on planar surfaces.

Every evaluator reads eigenvalues through 1-based indices and returns an
:class:`InequalityReport` holding both sides of the inequality as
displayed. At dimension 2 the ``(n-2)``-form Steklov spectrum is the
function spectrum itself, read with offset ``b0 = 1``; boundary-Laplacian
indices are shifted by ``b1``.

Tolerances: reports built only from analytic spectra use ``1e-9``; reports
touching FEM spectra use the largest tolerance carried by those spectra, and
call a case sharp within three times that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .analytic import partial_zeta
from .errors import ConfigurationError, ParameterError, SizeError
from .ineq import (
    ASCENDING,
    DESCENDING,
    NONNEGATIVE,
    POSITIVE,
    WeightVector,
    weak_majorize,
)
from .mesh import DomainTopology
from .spectrum import BOUNDARY_LAPLACIAN, STEKLOV, Spectrum

ANALYTIC_REPORT_TOL = 1e-9
ANALYTIC_SHARP_TOL = 1e-9
FEM_SHARP_FACTOR = 3.0
SUBSET_CAP = 10**6

LE = "<="
GE = ">="

INEQUALITIES = (
    "thm1",
    "thm2",
    "yy",
    "hps",
    "gp",
    "k",
    "hps-trace",
    "majorized",
    "inverse-trace-2",
    "power-q",
    "cor1",
    "cor2",
    "probe-open",
)


@dataclass(frozen=True)
class InequalityReport:
    """Both sides of one inequality instance.

    ``relation`` is ``"<="`` or ``">="`` as the inequality is displayed;
    ``slack`` is oriented so that a positive value means the inequality holds
    with room to spare.
    """

    name: str
    params: dict
    lhs: float
    rhs: float
    relation: str
    slack: float
    relative_slack: float
    passed: bool
    tolerance: float
    sharp: bool
    sharp_tolerance: float
    inputs: tuple = ()
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "lhs": self.lhs,
            "relation": self.relation,
            "rhs": self.rhs,
            "slack": self.slack,
            "relative_slack": self.relative_slack,
            "pass": self.passed,
            "tolerance": self.tolerance,
            "sharp": self.sharp,
            "sharp_tolerance": self.sharp_tolerance,
            "inputs": list(self.inputs),
            "extra": self.extra,
        }


def _tolerances(spectra: Sequence[Spectrum], tol: float | None) -> tuple[float, float]:
    fem = [s.tolerance for s in spectra if not s.is_analytic]
    if tol is None:
        tol = max(fem) if fem else ANALYTIC_REPORT_TOL
    sharp_tol = FEM_SHARP_FACTOR * tol if fem else max(ANALYTIC_SHARP_TOL, tol)
    return tol, sharp_tol


def make_report(
    name: str,
    lhs: float,
    rhs: float,
    relation: str,
    params: dict,
    spectra: Sequence[Spectrum] = (),
    tol: float | None = None,
    extra: dict | None = None,
) -> InequalityReport:
    tol, sharp_tol = _tolerances(spectra, tol)
    lhs, rhs = float(lhs), float(rhs)
    if relation == LE:
        slack = rhs - lhs
        passed = lhs <= rhs * (1 + tol) + tol
    elif relation == GE:
        slack = lhs - rhs
        passed = rhs <= lhs * (1 + tol) + tol
    else:
        raise ParameterError(f"unknown relation {relation!r}")
    rel = slack / max(abs(lhs), abs(rhs), 1.0)
    sharp = bool(passed and abs(rel) <= sharp_tol)
    return InequalityReport(
        name=name,
        params=params,
        lhs=lhs,
        rhs=rhs,
        relation=relation,
        slack=slack,
        relative_slack=rel,
        passed=bool(passed),
        tolerance=tol,
        sharp=sharp,
        sharp_tolerance=sharp_tol,
        inputs=tuple(s.provenance() for s in spectra),
        extra=extra or {},
    )


# --------------------------------------------------------------------------
# parameters and index bookkeeping
# --------------------------------------------------------------------------


def _pos_int(name: str, x) -> int:
    if isinstance(x, bool) or int(x) != x or x < 1:
        raise ParameterError(f"{name} must be a positive integer, got {x!r}")
    return int(x)


def _nonneg_int(name: str, x) -> int:
    if isinstance(x, bool) or int(x) != x or x < 0:
        raise ParameterError(f"{name} must be a non-negative integer, got {x!r}")
    return int(x)


@dataclass(frozen=True)
class TheoremParams:
    r: int = 1
    s: int = 1
    m: int = 1
    p: float = 1.0
    q: float = 2.0
    a: tuple[float, ...] | None = None
    c: tuple[float, ...] | None = None
    k: int = 1
    mu: float = 1.0

    def __post_init__(self):
        for name in ("r", "s", "m", "k"):
            object.__setattr__(self, name, _pos_int(name, getattr(self, name)))
        for name in ("p", "q", "mu"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ParameterError(f"{name} must be finite")
            object.__setattr__(self, name, val)
        ones = (1.0,) * self.m
        a = ones if self.a is None else tuple(float(x) for x in self.a)
        c = ones if self.c is None else tuple(float(x) for x in self.c)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)

    @property
    def q_star(self) -> float:
        return self.q / (self.q - 1.0)

    def validate_thm1(self) -> None:
        if not (self.q >= self.p >= 1 and self.q > 1):
            raise ParameterError(f"thm1 needs q >= p >= 1 and q > 1 (p={self.p}, q={self.q})")
        if len(self.a) != self.m or len(self.c) != self.m:
            raise ParameterError(f"weights a, c must have length m = {self.m}")
        WeightVector(self.a, DESCENDING, NONNEGATIVE)
        WeightVector(self.c, DESCENDING, POSITIVE)

    def validate_thm2(self) -> None:
        if not (self.p > 0 and self.q >= 1 and self.mu > 0):
            raise ParameterError(
                f"thm2 needs p > 0, q >= 1, mu > 0 (p={self.p}, q={self.q}, mu={self.mu})"
            )
        if not 1 <= self.k <= self.m:
            raise ParameterError(f"k must satisfy 1 <= k <= m, got k={self.k}, m={self.m}")

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "s": self.s,
            "m": self.m,
            "p": self.p,
            "q": self.q,
            "a": list(self.a),
            "c": list(self.c),
            "k": self.k,
            "mu": self.mu,
        }


@dataclass(frozen=True)
class IndexMap:
    """Maps theorem-local indices ``i = 1..m`` to spectrum indices."""

    b0: int
    b1: int
    r: int = 1
    s: int = 1

    @classmethod
    def from_topology(cls, topo: DomainTopology, r: int = 1, s: int = 1, dimension: int = 2) -> "IndexMap":
        if dimension != 2:
            raise ConfigurationError(
                f"only surfaces (dimension 2) are supported, got dimension {dimension}"
            )
        return cls(topo.b0, topo.b1, r, s)

    def sigma0(self, i: int) -> int:
        return self.r + i

    def sigma_n2(self, i: int) -> int:
        return self.b0 + self.s + i - 1

    def lam(self, i: int) -> int:
        return self.b1 + self.r + self.s + i - 1


def _values(spec: Spectrum, indices: Iterable[int]) -> np.ndarray:
    return np.array([spec.at(i) for i in indices])


def _positive(vals: np.ndarray, what: str) -> np.ndarray:
    if np.any(vals <= 0):
        raise ParameterError(f"{what} includes a zero eigenvalue; the inequality divides by it")
    return vals


def _check_kinds(sigma0: Spectrum, sigma_n2: Spectrum | None = None, lambdas: Spectrum | None = None) -> None:
    if sigma0.kind != STEKLOV or (sigma_n2 is not None and sigma_n2.kind != STEKLOV):
        raise ParameterError("Steklov spectra expected")
    if lambdas is not None and lambdas.kind != BOUNDARY_LAPLACIAN:
        raise ParameterError("boundary-Laplacian spectrum expected")


def _lp(terms: np.ndarray, e: float) -> float:
    """``(sum t_i^e)^(1/e)`` for positive ``t``; a single term is returned as is."""
    if len(terms) == 1:
        return float(terms[0])
    return math.fsum((terms**e).tolist()) ** (1.0 / e)


def _length(L: float) -> float:
    if not (math.isfinite(L) and L > 0):
        raise ParameterError(f"boundary length must be positive, got {L!r}")
    return float(L)


def _harmonic(n: int, exponent: float) -> float:
    return partial_zeta(n, exponent)


# --------------------------------------------------------------------------
# main theorems
# --------------------------------------------------------------------------


def eval_thm1(
    sigma0: Spectrum,
    sigma_n2: Spectrum,
    lambdas: Spectrum,
    tp: TheoremParams,
    topo: DomainTopology,
    tol: float | None = None,
) -> InequalityReport:
    """Weighted trace / inverse-trace product bound.

    Both sides are reported raised to the power ``p`` (an equivalent form
    since both are positive and ``p >= 1``)::

        ||a * sigma^(n-2)||_{1/p} / ||c / sigma^(0)||_{q/p}  <=  ||a * lambda / c||_{q*/p}

    where ``||x||_e = (sum x_i^e)^(1/e)``. For ``m = 1`` this is literally
    ``(a/c) sigma_{b0+s} sigma_{r+1} <= (a/c) lambda_{b1+r+s}``. The form
    with exponents as displayed is in ``extra``.
    """
    tp.validate_thm1()
    _check_kinds(sigma0, sigma_n2, lambdas)
    ix = IndexMap.from_topology(topo, tp.r, tp.s)
    idx = range(1, tp.m + 1)
    a, c = np.array(tp.a), np.array(tp.c)
    sig_n2 = _positive(_values(sigma_n2, [ix.sigma_n2(i) for i in idx]), "sigma^(n-2)")
    sig_0 = _positive(_values(sigma0, [ix.sigma0(i) for i in idx]), "sigma^(0)")
    lam = _values(lambdas, [ix.lam(i) for i in idx])
    p, q, qs = tp.p, tp.q, tp.q_star
    first = _lp(a * sig_n2, 1.0 / p)
    if tp.m == 1:
        inv_second = sig_0[0] / c[0]
    else:
        inv_second = 1.0 / _lp(c / sig_0, q / p)
    lhs = first * inv_second
    rhs = _lp(a * lam / c, qs / p)
    params = {**tp.to_dict(), "q_star": qs, "topology": topo.to_dict()}
    extra = {"form": "power_p", "lhs_displayed": lhs ** (1 / p), "rhs_displayed": rhs ** (1 / p)}
    return make_report("thm1", lhs, rhs, LE, params, (sigma0, sigma_n2, lambdas), tol, extra)


def elementary_symmetric(x: np.ndarray, k: int) -> float:
    """``e_k(x) = sum over k-subsets of the product``, by the usual recurrence."""
    e = np.zeros(k + 1)
    e[0] = 1.0
    for xi in x:
        e[1:] = e[1:] + xi * e[:-1]
    return float(e[k])


def eval_thm2(
    sigma0: Spectrum,
    sigma_n2: Spectrum,
    lambdas: Spectrum,
    tp: TheoremParams,
    topo: DomainTopology,
    tol: float | None = None,
    cap: int = SUBSET_CAP,
) -> InequalityReport:
    """Mixed inverse traces over k-subsets against boundary-Laplacian products.

    Subset sums of products are elementary symmetric polynomials and are
    evaluated by recurrence; the subset count is still capped.
    """
    tp.validate_thm2()
    _check_kinds(sigma0, sigma_n2, lambdas)
    m, k, p, q, mu = tp.m, tp.k, tp.p, tp.q, tp.mu
    if math.comb(m, k) > cap:
        raise SizeError(f"C({m},{k}) = {math.comb(m, k)} subsets exceeds cap {cap}")
    ix = IndexMap.from_topology(topo, tp.r, tp.s)
    idx = range(1, m + 1)
    sig_n2 = _positive(_values(sigma_n2, [ix.sigma_n2(i) for i in idx]), "sigma^(n-2)")
    sig_0 = _positive(_values(sigma0, [ix.sigma0(i) for i in idx]), "sigma^(0)")
    lam = _positive(_values(lambdas, [ix.lam(i) for i in idx]), "lambda")
    subsets = elementary_symmetric(sig_n2**-p, k)
    lhs = subsets + mu * math.comb(m - 1, k - 1) * math.fsum((sig_0**-q).tolist())
    e = k * p + q
    const = (e / (p * q)) * p ** (q / e) * q ** (k * p / e) * mu ** (k * p / e)
    rhs = const * elementary_symmetric(lam ** (-p * q / e), k)
    params = {**tp.to_dict(), "topology": topo.to_dict(), "subsets": math.comb(m, k)}
    return make_report("thm2", lhs, rhs, GE, params, (sigma0, sigma_n2, lambdas), tol, {"constant": const})


def eval_yy(
    sigma0: Spectrum,
    sigma_n2: Spectrum,
    lambdas: Spectrum,
    p: int,
    q: int,
    topo: DomainTopology,
    tol: float | None = None,
) -> InequalityReport:
    """``sigma_{1+p} sigma^(n-2)_{b0+q} <= lambda_{b1+p+q}``."""
    p, q = _nonneg_int("p", p), _nonneg_int("q", q)
    _check_kinds(sigma0, sigma_n2, lambdas)
    ix = IndexMap.from_topology(topo)
    lhs = sigma0.at(1 + p) * sigma_n2.at(ix.b0 + q)
    rhs = lambdas.at(ix.b1 + p + q)
    params = {"p": p, "q": q, "topology": topo.to_dict()}
    return make_report("yy", lhs, rhs, LE, params, (sigma0, sigma_n2, lambdas), tol)


def _hps_family(name, sigma0, L, p, q, rhs_factor, tol, params) -> InequalityReport:
    _check_kinds(sigma0)
    L = _length(L)
    lhs = sigma0.at(p + 1) * sigma0.at(q + 1) * L * L
    rhs = rhs_factor * math.pi**2
    return make_report(name, lhs, rhs, LE, {"p": p, "q": q, "L": L, **params}, (sigma0,), tol)


def eval_hps(sigma0: Spectrum, L: float, p: int, q: int, tol: float | None = None) -> InequalityReport:
    """``sigma_{p+1} sigma_{q+1} L^2 <= (p+q)^2 pi^2`` (even) / ``(p+q-1)^2 pi^2`` (odd)."""
    p, q = _pos_int("p", p), _pos_int("q", q)
    e = p + q if (p + q) % 2 == 0 else p + q - 1
    return _hps_family("hps", sigma0, L, p, q, e * e, tol, {})


def eval_gp(sigma0: Spectrum, L: float, genus: int, k: int, p: int, q: int, tol: float | None = None) -> InequalityReport:
    """Genus ``genus`` with ``k`` boundary components: bound multiplied by ``(genus + k)^2``."""
    p, q = _pos_int("p", p), _pos_int("q", q)
    genus, k = _nonneg_int("genus", genus), _pos_int("k", k)
    e = p + q if (p + q) % 2 == 0 else p + q - 1
    return _hps_family("gp", sigma0, L, p, q, (genus + k) ** 2 * e * e, tol, {"genus": genus, "k": k})


def eval_k(sigma0: Spectrum, L: float, genus: int, k: int, p: int, q: int, tol: float | None = None) -> InequalityReport:
    """``(p+q+2 genus+2k-2)^2 pi^2`` (even) / ``(p+q+2 genus+2k-1)^2 pi^2`` (odd)."""
    p, q = _pos_int("p", p), _pos_int("q", q)
    genus, k = _nonneg_int("genus", genus), _pos_int("k", k)
    e = p + q + 2 * genus + 2 * k - (2 if (p + q) % 2 == 0 else 1)
    return _hps_family("k", sigma0, L, p, q, e * e, tol, {"genus": genus, "k": k})


def eval_hps_trace(sigma0: Spectrum, L: float, n: int, tol: float | None = None) -> InequalityReport:
    """``sum_{i=1}^{2n} 1/sigma_{1+i} >= (L/pi) sum_{i=1}^n 1/i``."""
    n = _pos_int("n", n)
    _check_kinds(sigma0)
    L = _length(L)
    sig = _positive(_values(sigma0, range(2, 2 * n + 2)), "sigma")
    lhs = math.fsum((1.0 / sig).tolist())
    rhs = (L / math.pi) * _harmonic(n, 1)
    return make_report("hps-trace", lhs, rhs, GE, {"n": n, "L": L}, (sigma0,), tol)


def majorized_vectors(sigma0: Spectrum, L: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``x = (L/pi)(1, 1/2, .., 1/n)`` and ``y_i = 1/sigma_{2i} + 1/sigma_{2i+1}``."""
    n = _pos_int("n", n)
    L = _length(L)
    sig = _positive(_values(sigma0, range(2, 2 * n + 2)), "sigma")
    x = (L / math.pi) / np.arange(1, n + 1)
    y = 1.0 / sig[0::2] + 1.0 / sig[1::2]
    return x, y


def eval_majorized_form(sigma0: Spectrum, L: float, n: int, tol: float | None = None):
    """Weak majorization of ``x`` by ``y`` (see :func:`majorized_vectors`)."""
    _check_kinds(sigma0)
    x, y = majorized_vectors(sigma0, L, n)
    t, _ = _tolerances((sigma0,), tol)
    return weak_majorize(x, y, 1e-12 if sigma0.is_analytic and tol is None else t)


def eval_majorized_report(sigma0: Spectrum, L: float, n: int, tol: float | None = None) -> InequalityReport:
    """Majorization as a scalar report: worst prefix excess ``max_j (X_j - Y_j) <= 0``."""
    verdict = eval_majorized_form(sigma0, L, n, tol)
    excess = max(a - b for a, b in zip(verdict.partial_sums_x, verdict.partial_sums_y))
    rep = make_report(
        "majorized",
        excess,
        0.0,
        LE,
        {"n": int(n), "L": float(L)},
        (sigma0,),
        tol,
        {"verdict": verdict.to_dict()},
    )
    return rep


def eval_inverse_trace_2(sigma0: Spectrum, L: float, n: int, tol: float | None = None) -> InequalityReport:
    """``sum_{j=2}^{2n+1} sigma_j^-2 >= L^2/(2 pi^2) sum_{i=1}^n 1/i^2``."""
    n = _pos_int("n", n)
    _check_kinds(sigma0)
    L = _length(L)
    sig = _positive(_values(sigma0, range(2, 2 * n + 2)), "sigma")
    lhs = math.fsum((sig**-2.0).tolist())
    rhs = L * L / (2 * math.pi**2) * _harmonic(n, 2)
    return make_report("inverse-trace-2", lhs, rhs, GE, {"n": n, "L": L}, (sigma0,), tol)


def eval_power_q(
    sigma0: Spectrum,
    sigma_n2: Spectrum,
    lambdas: Spectrum,
    q: float,
    r: int,
    s: int,
    m: int,
    topo: DomainTopology,
    literal_index: bool = False,
    tol: float | None = None,
) -> InequalityReport:
    """``sum sigma_{r+i}^-q + sum (sigma^(n-2))^-q >= 2 sum lambda_{b1+r+s+i-1}^(-q/2)``.

    By default the ``(n-2)`` eigenvalues are read at ``b0+s+i-1``, which is
    what the mixed-trace theorem gives at ``p = q``, ``k = mu = 1``. With
    ``literal_index=True`` they are read at ``b0+r+i`` instead.
    """
    q = float(q)
    if not q >= 1:
        raise ParameterError(f"q must be >= 1, got {q}")
    r, s, m = _pos_int("r", r), _pos_int("s", s), _pos_int("m", m)
    _check_kinds(sigma0, sigma_n2, lambdas)
    ix = IndexMap.from_topology(topo, r, s)
    idx = range(1, m + 1)
    sig_0 = _positive(_values(sigma0, [ix.sigma0(i) for i in idx]), "sigma^(0)")
    n2_idx = [ix.b0 + r + i for i in idx] if literal_index else [ix.sigma_n2(i) for i in idx]
    sig_n2 = _positive(_values(sigma_n2, n2_idx), "sigma^(n-2)")
    lam = _positive(_values(lambdas, [ix.lam(i) for i in idx]), "lambda")
    lhs = math.fsum((sig_0**-q).tolist()) + math.fsum((sig_n2**-q).tolist())
    rhs = 2.0 * math.fsum((lam ** (-q / 2)).tolist())
    params = {"q": q, "r": r, "s": s, "m": m, "literal_index": literal_index, "topology": topo.to_dict()}
    return make_report("power-q", lhs, rhs, GE, params, (sigma0, sigma_n2, lambdas), tol)


def _weyl_tail(n0: int) -> float:
    """``sum_{i > n0} 1/i^2``."""
    return partial_zeta(math.inf, 2) - (partial_zeta(n0, 2) if n0 >= 1 else 0.0)


def eval_cor1(sigma0: Spectrum, L: float, n, allow_limit: bool = False, tol: float | None = None) -> InequalityReport:
    """``sum_{i<=n} (sigma_2i + sigma_2i+1)/i^3 <= 4 sqrt2 pi^2 / L^2 (sum_{i<=2n} sigma_{1+i}^-2)^1/2 (sum_{i<=n} i^-2)^1/2``.

    ``n = math.inf`` (with ``allow_limit``) evaluates the limiting form with
    constant ``4 sqrt3 pi^3 / (3 L^2)``. Eigenvalues beyond the supplied
    spectrum are completed by the Weyl asymptotics
    ``sigma_2i ~ sigma_2i+1 ~ 2 pi i / L`` (exact on the disk); for FEM
    inputs the relative size of that completion is added to the tolerance.
    """
    _check_kinds(sigma0)
    L = _length(L)
    if n == math.inf:
        if not allow_limit:
            raise ParameterError("n = inf requires allow_limit=True")
        n0 = (sigma0.count - 1) // 2
        if n0 < 1:
            raise ParameterError("limit form needs at least sigma_2, sigma_3")
        sig = _positive(_values(sigma0, range(2, 2 * n0 + 2)), "sigma")
        i = np.arange(1, n0 + 1)
        tail = _weyl_tail(n0)
        head_l = math.fsum(((sig[0::2] + sig[1::2]) / i**3.0).tolist())
        tail_l = (4 * math.pi / L) * tail
        head_r = math.fsum((sig**-2.0).tolist())
        tail_r = (L * L / (2 * math.pi**2)) * tail
        lhs = head_l + tail_l
        rhs = 4 * math.sqrt(3) * math.pi**3 / (3 * L * L) * math.sqrt(head_r + tail_r)
        frac = max(tail_l / lhs, tail_r / (head_r + tail_r))
        if tol is None and not sigma0.is_analytic:
            tol = sigma0.tolerance + frac
        extra = {"form": "limit", "terms": n0, "tail_fraction": frac}
        return make_report("cor1", lhs, rhs, LE, {"n": "inf", "L": L}, (sigma0,), tol, extra)
    n = _pos_int("n", n)
    sig = _positive(_values(sigma0, range(2, 2 * n + 2)), "sigma")
    i = np.arange(1, n + 1)
    lhs = math.fsum(((sig[0::2] + sig[1::2]) / i**3.0).tolist())
    rhs = (
        4 * math.sqrt(2) * math.pi**2 / (L * L)
        * math.sqrt(math.fsum((sig**-2.0).tolist()))
        * math.sqrt(_harmonic(n, 2))
    )
    return make_report("cor1", lhs, rhs, LE, {"n": n, "L": L}, (sigma0,), tol)


def eval_cor2(sigma0: Spectrum, L: float, n: int, tol: float | None = None) -> InequalityReport:
    """``1/(sigma_2 ... sigma_2n+1) + 1/(2n) sum sigma_{1+i}^-2n >= L^2n / (2^(2n-1) pi^2n (n!)^2)``."""
    n = _pos_int("n", n)
    _check_kinds(sigma0)
    L = _length(L)
    sig = _positive(_values(sigma0, range(2, 2 * n + 2)), "sigma")
    lhs = math.exp(-math.fsum(np.log(sig).tolist())) + math.fsum((sig ** (-2.0 * n)).tolist()) / (2 * n)
    rhs = (L / math.pi) ** (2 * n) / (2 ** (2 * n - 1) * math.factorial(n) ** 2)
    return make_report("cor2", lhs, rhs, GE, {"n": n, "L": L}, (sigma0,), tol)


def probe_open_question(sigma0: Spectrum, L: float, n: int, tol: float | None = None) -> InequalityReport:
    """Open question: ``sum_{j=2}^{2n} 1/(sigma_j sigma_j+1) >= L^2/(4 pi^2) sum_{i<=n} 1/i^2``?

    ``passed`` only says the data are consistent with a positive answer; it
    verifies nothing.
    """
    n = _pos_int("n", n)
    _check_kinds(sigma0)
    L = _length(L)
    sig = _positive(_values(sigma0, range(2, 2 * n + 2)), "sigma")
    lhs = math.fsum((1.0 / (sig[:-1] * sig[1:])).tolist())
    rhs = L * L / (4 * math.pi**2) * _harmonic(n, 2)
    extra = {"interpretation": "consistent with conjecture" if rhs <= lhs else "counterexample candidate"}
    return make_report("probe-open", lhs, rhs, GE, {"n": n, "L": L}, (sigma0,), tol, extra)


# --------------------------------------------------------------------------
# batch evaluation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectraBundle:
    """Steklov and boundary-Laplacian spectra of one domain plus its geometry."""

    sigma: Spectrum
    lambdas: Spectrum
    length: float
    topology: DomainTopology

    def check(self) -> None:
        _check_kinds(self.sigma, None, self.lambdas)
        zeros = int(np.sum(self.lambdas.values[: self.topology.boundary_components + 1] == 0.0))
        if zeros != self.topology.boundary_components:
            raise ConfigurationError(
                f"boundary spectrum has {zeros} zero eigenvalue(s) but the topology claims "
                f"{self.topology.boundary_components} boundary component(s)"
            )
        if self.topology.b0 != 1:
            raise ConfigurationError("domain must be connected")


@dataclass(frozen=True)
class GridPoint:
    inequality: str
    params: dict

    def to_dict(self) -> dict:
        return {"inequality": self.inequality, "params": self.params}


def evaluate(bundle: SpectraBundle, point: GridPoint, tol: float | None = None) -> InequalityReport:
    """Dispatch one grid point to its evaluator."""
    name, prm = point.inequality, dict(point.params)
    sig, lam, L, topo = bundle.sigma, bundle.lambdas, bundle.length, bundle.topology
    if name == "thm1":
        return eval_thm1(sig, sig, lam, _theorem_params(prm), topo, tol)
    if name == "thm2":
        return eval_thm2(sig, sig, lam, _theorem_params(prm), topo, tol)
    if name == "yy":
        return eval_yy(sig, sig, lam, prm.get("p", 1), prm.get("q", 1), topo, tol)
    if name == "hps":
        return eval_hps(sig, L, prm.get("p", 1), prm.get("q", 1), tol)
    if name in ("gp", "k"):
        fn = eval_gp if name == "gp" else eval_k
        return fn(sig, L, prm.get("genus", topo.genus), prm.get("k", topo.boundary_components),
                  prm.get("p", 1), prm.get("q", 1), tol)
    if name == "hps-trace":
        return eval_hps_trace(sig, L, prm.get("n", 1), tol)
    if name == "majorized":
        return eval_majorized_report(sig, L, prm.get("n", 1), tol)
    if name == "inverse-trace-2":
        return eval_inverse_trace_2(sig, L, prm.get("n", 1), tol)
    if name == "power-q":
        return eval_power_q(sig, sig, lam, prm.get("q", 2), prm.get("r", 1), prm.get("s", 1),
                            prm.get("m", 1), topo, bool(prm.get("literal_index", False)), tol)
    if name == "cor1":
        n = prm.get("n", 1)
        n = math.inf if n in ("inf", math.inf) else n
        return eval_cor1(sig, L, n, allow_limit=n == math.inf, tol=tol)
    if name == "cor2":
        return eval_cor2(sig, L, prm.get("n", 1), tol)
    if name == "probe-open":
        return probe_open_question(sig, L, prm.get("n", 1), tol)
    raise ParameterError(f"unknown inequality {name!r}; expected one of {', '.join(INEQUALITIES)}")


def _theorem_params(prm: dict) -> TheoremParams:
    keys = {"r", "s", "m", "p", "q", "a", "c", "k", "mu"}
    unknown = set(prm) - keys
    if unknown:
        raise ParameterError(f"unknown theorem parameter(s): {sorted(unknown)}")
    return TheoremParams(**prm)


def default_grid(topo: DomainTopology) -> list[GridPoint]:
    """Standard parameter sweep; simply connected domains also get the planar results."""
    g = GridPoint
    pts = [
        g("yy", {"p": 1, "q": 1}),
        g("yy", {"p": 1, "q": 2}),
        g("yy", {"p": 2, "q": 3}),
        g("thm1", {"m": 1, "p": 1, "q": 2}),
        g("thm1", {"m": 2, "p": 1, "q": 2}),
        g("thm1", {"m": 3, "p": 1.5, "q": 3, "a": [1.0, 0.5, 0.25], "c": [2.0, 1.0, 1.0]}),
        g("thm2", {"m": 2, "k": 2, "p": 1, "q": 2, "mu": 0.5}),
        g("thm2", {"m": 4, "k": 2, "p": 0.5, "q": 1.5, "mu": 1.0}),
        g("power-q", {"q": 2, "r": 1, "s": 1, "m": 2}),
        g("gp", {"p": 1, "q": 1}),
        g("k", {"p": 1, "q": 1}),
        g("hps-trace", {"n": 1}),
        g("hps-trace", {"n": 3}),
    ]
    if topo.simply_connected:
        pts += [
            g("hps", {"p": 1, "q": 1}),
            g("hps", {"p": 1, "q": 2}),
            g("majorized", {"n": 3}),
            g("inverse-trace-2", {"n": 1}),
            g("inverse-trace-2", {"n": 3}),
            g("cor1", {"n": 1}),
            g("cor1", {"n": 3}),
            g("cor2", {"n": 1}),
            g("cor2", {"n": 2}),
            g("probe-open", {"n": 1}),
            g("probe-open", {"n": 2}),
        ]
    return pts


def run_all(bundle: SpectraBundle, grid: Sequence[GridPoint] | None = None, tol: float | None = None) -> list[InequalityReport]:
    """Evaluate every grid point in order. ``grid=None`` uses :func:`default_grid`."""
    bundle.check()
    if grid is None:
        grid = default_grid(bundle.topology)
    return [evaluate(bundle, pt, tol) for pt in grid]


def summarize(reports: Sequence[InequalityReport]) -> dict:
    """Totals; the open-question probe is informational and never counts as a failure."""
    checked = [r for r in reports if r.name != "probe-open"]
    return {
        "total": len(reports),
        "passed": sum(r.passed for r in reports),
        "failed": sum(not r.passed for r in checked),
        "sharp": sum(r.sharp for r in reports),
    }
