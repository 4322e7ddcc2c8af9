"""Majorization and the matrix / scalar inequalities behind the trace bounds.

Eigenvalues here come from a batched cyclic Jacobi solver written in this
module, so that the checks stay independent of the LAPACK path used by the
finite element code.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InputError, ParameterError, PreconditionError, SizeError

DESCENDING = "descending"
ASCENDING = "ascending"
NONNEGATIVE = "nonnegative"
POSITIVE = "positive"

WEAKLY_MAJORIZED = "weakly_majorized"
MAJORIZED = "majorized"
NEITHER = "neither"

DEFAULT_TOL = 1e-10
COMPOUND_CAP = 10**6
SYMMETRY_TOL = 1e-12
DEFINITE_TOL = 1e-8


# --------------------------------------------------------------------------
# eigenvalues
# --------------------------------------------------------------------------


def jacobi_eigvalsh(a, max_sweeps: int = 60, tol: float = 1e-15) -> np.ndarray:
    """Ascending eigenvalues of symmetric matrices by cyclic Jacobi rotations.

    Works on a single ``(m, m)`` matrix or a batch ``(..., m, m)``; the same
    rotation sequence is applied to every matrix of the batch with
    per-matrix angles.
    """
    a = np.array(a, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ParameterError("expected square matrices")
    batch_shape = a.shape[:-2]
    m = a.shape[-1]
    a = a.reshape(-1, m, m)
    a = 0.5 * (a + np.swapaxes(a, 1, 2))
    if m == 1:
        return a[:, 0, 0].reshape(*batch_shape, 1)
    scale = np.sqrt(np.sum(a * a, axis=(1, 2)))
    scale[scale == 0] = 1.0
    iu = np.triu_indices(m, 1)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(a[:, iu[0], iu[1]] ** 2, axis=1))
        if np.all(off <= tol * scale):
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[:, p, q]
                active = np.abs(apq) > 1e-300
                if not active.any():
                    continue
                app = a[:, p, p]
                aqq = a[:, q, q]
                with np.errstate(divide="ignore", invalid="ignore"):
                    theta = np.where(active, (aqq - app) / (2.0 * apq), 0.0)
                t = np.where(
                    active,
                    np.sign(theta + (theta == 0)) / (np.abs(theta) + np.hypot(theta, 1.0)),
                    0.0,
                )
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                c_ = c[:, None]
                s_ = s[:, None]
                row_p = a[:, p, :].copy()
                row_q = a[:, q, :].copy()
                a[:, p, :] = c_ * row_p - s_ * row_q
                a[:, q, :] = s_ * row_p + c_ * row_q
                col_p = a[:, :, p].copy()
                col_q = a[:, :, q].copy()
                a[:, :, p] = c_ * col_p - s_ * col_q
                a[:, :, q] = s_ * col_p + c_ * col_q
    w = np.sort(np.diagonal(a, axis1=1, axis2=2), axis=1)
    return w.reshape(*batch_shape, m)


def _det(a: np.ndarray) -> float:
    """Determinant by Gaussian elimination with partial pivoting."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    det = 1.0
    for j in range(n):
        piv = j + int(np.argmax(np.abs(a[j:, j])))
        if a[piv, j] == 0.0:
            return 0.0
        if piv != j:
            a[[j, piv]] = a[[piv, j]]
            det = -det
        det *= a[j, j]
        a[j + 1 :, j:] -= np.outer(a[j + 1 :, j] / a[j, j], a[j, j:])
    return det


# --------------------------------------------------------------------------
# input types
# --------------------------------------------------------------------------


class SpdMatrix:
    """Dense symmetric positive definite matrix.

    Symmetry is checked at construction (relative ``1e-12``); definiteness
    is checked by :meth:`validate_definite`, which requires the smallest
    eigenvalue to be at least ``1e-8 * ||A||``.
    """

    def __init__(self, entries, check_definite: bool = True):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise InputError("SPD matrix must be square and non-empty")
        if not np.all(np.isfinite(a)):
            raise InputError("SPD matrix entries must be finite")
        norm = np.max(np.abs(a))
        if np.max(np.abs(a - a.T)) > SYMMETRY_TOL * max(norm, 1e-300):
            raise InputError("matrix is not symmetric")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        self.entries = a
        self._eig: np.ndarray | None = None
        if check_definite:
            self.validate_definite()

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues (Jacobi)."""
        if self._eig is None:
            self._eig = jacobi_eigvalsh(self.entries)
            self._eig.setflags(write=False)
        return self._eig

    def validate_definite(self) -> None:
        w = self.eigenvalues()
        norm = float(np.max(np.abs(w)))
        if w[0] < DEFINITE_TOL * norm or norm == 0:
            raise InputError(
                f"matrix is not positive definite (smallest eigenvalue {w[0]:.3e}, norm {norm:.3e})"
            )

    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.entries).copy()

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self) -> str:
        return f"SpdMatrix(order={self.order})"


def _as_spd(a) -> SpdMatrix:
    return a if isinstance(a, SpdMatrix) else SpdMatrix(a)


@dataclass(frozen=True)
class WeightVector:
    values: tuple[float, ...]
    order: str = DESCENDING
    positivity: str = NONNEGATIVE

    def __post_init__(self):
        vals = tuple(float(x) for x in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ParameterError("weight vector is empty")
        if not all(math.isfinite(x) for x in vals):
            raise ParameterError("weights must be finite")
        if self.positivity == POSITIVE and min(vals) <= 0:
            raise ParameterError(f"weights must be strictly positive: {vals}")
        if self.positivity == NONNEGATIVE and min(vals) < 0:
            raise ParameterError(f"weights must be non-negative: {vals}")
        pairs = zip(vals, vals[1:])
        if self.order == DESCENDING and any(x < y for x, y in pairs):
            raise ParameterError(f"weights must be descending: {vals}")
        if self.order == ASCENDING and any(x > y for x, y in pairs):
            raise ParameterError(f"weights must be ascending: {vals}")

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values)


@dataclass(frozen=True)
class MajorizationVerdict:
    relation: str
    partial_sums_x: tuple[float, ...]
    partial_sums_y: tuple[float, ...]
    first_violation_index: int | None = None

    @property
    def weakly(self) -> bool:
        return self.relation in (WEAKLY_MAJORIZED, MAJORIZED)

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "partial_sums_x": list(self.partial_sums_x),
            "partial_sums_y": list(self.partial_sums_y),
            "first_violation_index": self.first_violation_index,
        }


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one scalar inequality ``lhs (relation) rhs``."""

    name: str
    lhs: float
    rhs: float
    relation: str
    passed: bool
    tolerance: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation,
            "pass": self.passed,
            "tolerance": self.tolerance,
            **self.extra,
        }


def _scaled_tol(tol: float, *xs: float) -> float:
    return tol * max(1.0, *(abs(x) for x in xs))


def _check(name, lhs, rhs, relation, tol, **extra) -> CheckReport:
    slack = rhs - lhs if relation == "<=" else lhs - rhs
    passed = bool(slack >= -_scaled_tol(tol, lhs, rhs))
    return CheckReport(name, float(lhs), float(rhs), relation, passed, tol, extra)


# --------------------------------------------------------------------------
# majorization
# --------------------------------------------------------------------------


def weak_majorize(x: Sequence[float], y: Sequence[float], tol: float = 1e-12) -> MajorizationVerdict:
    """Compare descending prefix sums of ``x`` and ``y``.

    ``MAJORIZED`` means ``x`` is majorized by ``y`` (prefix sums bounded and
    totals equal), ``WEAKLY_MAJORIZED`` drops the total condition.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise ParameterError(f"length mismatch: {len(x)} vs {len(y)}")
    if x.size == 0:
        raise ParameterError("empty vectors")
    sx = np.cumsum(np.sort(x)[::-1])
    sy = np.cumsum(np.sort(y)[::-1])
    scale = max(1.0, float(np.max(np.abs(sx))), float(np.max(np.abs(sy))))
    bad = np.flatnonzero(sx > sy + tol * scale)
    if bad.size:
        relation, first = NEITHER, int(bad[0]) + 1
    elif abs(sx[-1] - sy[-1]) <= tol * scale:
        relation, first = MAJORIZED, None
    else:
        relation, first = WEAKLY_MAJORIZED, None
    return MajorizationVerdict(relation, tuple(sx.tolist()), tuple(sy.tolist()), first)


@dataclass(frozen=True)
class ConvexSpec:
    """A catalog function together with its shape properties."""

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    increasing: bool

    def __call__(self, t):
        return self.func(np.asarray(t, dtype=float))


def convex_function(name: str, param: float | None = None) -> ConvexSpec:
    """Built-in convex functions.

    ``square``, ``abs``, ``exp``, ``hinge`` (``max(t - c, 0)``), ``power``
    (``t^p`` on ``t >= 0``, ``p >= 1``), ``neg_power`` (``-t^p``, ``0 <= p <= 1``).
    """
    if name == "square":
        return ConvexSpec("t^2", np.square, increasing=False)
    if name == "abs":
        return ConvexSpec("|t|", np.abs, increasing=False)
    if name == "exp":
        return ConvexSpec("exp(t)", np.exp, increasing=True)
    if name == "hinge":
        c = 0.0 if param is None else float(param)
        return ConvexSpec(f"max(t-{c!r},0)", lambda t: np.maximum(t - c, 0.0), increasing=True)
    if name == "power":
        p = 2.0 if param is None else float(param)
        if p < 1:
            raise ParameterError("power needs p >= 1")
        return ConvexSpec(f"t^{p!r}", lambda t: np.power(t, p), increasing=True)
    if name == "neg_power":
        p = 0.5 if param is None else float(param)
        if not 0 <= p <= 1:
            raise ParameterError("neg_power needs 0 <= p <= 1")
        return ConvexSpec(f"-t^{p!r}", lambda t: -np.power(t, p), increasing=False)
    raise ParameterError(f"unknown convex function {name!r}")


def majorization_principle_check(x, y, f: ConvexSpec, tol: float = 1e-12) -> MajorizationVerdict:
    """Check ``f(x) <_w f(y)`` under the hypothesis the two principles need.

    An increasing convex ``f`` needs ``x <_w y``; any other convex ``f``
    needs ``x < y``. A failing hypothesis raises :class:`PreconditionError`.
    """
    pre = weak_majorize(x, y, tol)
    if f.increasing:
        if not pre.weakly:
            raise PreconditionError(
                f"x is not weakly majorized by y (prefix {pre.first_violation_index})"
            )
    elif pre.relation != MAJORIZED:
        where = pre.first_violation_index
        msg = f"prefix {where}" if where else "total sums differ"
        raise PreconditionError(f"x is not majorized by y ({msg}); {f.name} is not increasing")
    fx = f(np.asarray(x, dtype=float))
    fy = f(np.asarray(y, dtype=float))
    scale = max(1.0, float(np.max(np.abs(fx))), float(np.max(np.abs(fy))))
    verdict = weak_majorize(fx, fy, tol * scale)
    if not verdict.weakly:
        raise AssertionError(f"majorization principle violated for {f.name}: {verdict}")
    return verdict


def robin_hood(y, transfers: int, rng: np.random.Generator) -> np.ndarray:
    """Return ``x < y`` built by random transfers from richer to poorer entries."""
    x = np.array(y, dtype=float)
    for _ in range(transfers):
        i, j = rng.choice(len(x), size=2, replace=False)
        if x[i] < x[j]:
            i, j = j, i
        # moving at most half the gap keeps the pair ordered
        delta = rng.uniform(0, 0.5) * (x[i] - x[j])
        x[i] -= delta
        x[j] += delta
    return x


# --------------------------------------------------------------------------
# matrix lemma
# --------------------------------------------------------------------------


def _power_sum(a: np.ndarray, vals: np.ndarray, p: float) -> float:
    with np.errstate(divide="ignore"):
        terms = np.power(a * vals, p)
    return math.fsum(terms.tolist())


def _weights(a, m: int, order: str, positivity: str) -> np.ndarray:
    w = a if isinstance(a, WeightVector) else WeightVector(tuple(a), order, positivity)
    if w.order != order or (positivity == POSITIVE and w.positivity != POSITIVE):
        w = WeightVector(w.values, order, positivity)
    if len(w) != m:
        raise ParameterError(f"weight vector has length {len(w)}, matrix order is {m}")
    return w.as_array()


def lemma_matrix_part1(A, a, p: float, tol: float = DEFAULT_TOL) -> CheckReport:
    """``sum (a_i lambda_i)^p <= sum (a_i A_ii)^p`` for ``0 <= p <= 1``, ``a`` descending.

    Eigenvalues are paired ascending; the diagonal is taken in natural order.
    """
    if not 0 <= p <= 1:
        raise ParameterError(f"part 1 needs 0 <= p <= 1, got {p}")
    A = _as_spd(A)
    w = _weights(a, A.order, DESCENDING, NONNEGATIVE)
    lhs = _power_sum(w, A.eigenvalues(), p)
    rhs = _power_sum(w, A.diagonal(), p)
    return _check("lemma_matrix_part1", lhs, rhs, "<=", tol, p=p)


def lemma_matrix_part2(A, a, p: float, tol: float = DEFAULT_TOL) -> CheckReport:
    """``sum (a_i lambda_i)^p >= sum (a_i A_ii)^p`` for ``p >= 1`` or ``p <= 0``, ``a`` ascending positive."""
    if 0 < p < 1:
        raise ParameterError(f"part 2 needs p >= 1 or p <= 0, got {p}")
    A = _as_spd(A)
    w = _weights(a, A.order, ASCENDING, POSITIVE)
    lhs = _power_sum(w, A.eigenvalues(), p)
    rhs = _power_sum(w, A.diagonal(), p)
    return _check("lemma_matrix_part2", lhs, rhs, ">=", tol, p=p)


def _check_k(k: int, m: int, cap: int) -> int:
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= m:
        raise ParameterError(f"k must satisfy 1 <= k <= {m}, got {k!r}")
    if math.comb(m, int(k)) > cap:
        raise SizeError(f"C({m},{k}) = {math.comb(m, int(k))} exceeds cap {cap}")
    return int(k)


def compound_matrix(A, k: int, cap: int = COMPOUND_CAP) -> SpdMatrix:
    """k-th compound (exterior power): all k x k minors, k-subsets in lexicographic order."""
    A = _as_spd(A)
    m = A.order
    k = _check_k(k, m, cap)
    subsets = list(itertools.combinations(range(m), k))
    a = A.entries
    n = len(subsets)
    out = np.empty((n, n))
    for i, rows in enumerate(subsets):
        sub = a[list(rows)]
        for j in range(i, n):
            out[i, j] = out[j, i] = _det(sub[:, list(subsets[j])])
    return SpdMatrix(out, check_definite=False)


def _subset_power_sum(vals: np.ndarray, k: int, p: float) -> float:
    lv = np.log(vals)
    terms = [math.exp(p * sum(lv[list(c)])) for c in itertools.combinations(range(len(vals)), k)]
    return math.fsum(terms)


def lemma_matrix_part3(A, p: float, k: int, tol: float = DEFAULT_TOL, cap: int = COMPOUND_CAP) -> CheckReport:
    """Over k-subsets: ``sum (prod lambda)^p >= sum (prod A_ii)^p`` for ``p <= 0``."""
    if p > 0:
        raise ParameterError(f"part 3 needs p <= 0, got {p}")
    A = _as_spd(A)
    k = _check_k(k, A.order, cap)
    lhs = _subset_power_sum(A.eigenvalues(), k, p)
    rhs = _subset_power_sum(A.diagonal(), k, p)
    return _check("lemma_matrix_part3", lhs, rhs, ">=", tol, p=p, k=k)


def hadamard_check(A, subset: Sequence[int], tol: float = DEFAULT_TOL) -> CheckReport:
    """Principal minor on ``subset`` is at most the product of its diagonal entries."""
    A = _as_spd(A)
    idx = [int(i) for i in subset]
    if not idx:
        raise ParameterError("empty subset")
    if len(set(idx)) != len(idx):
        raise ParameterError(f"duplicate indices in {idx}")
    if min(idx) < 0 or max(idx) >= A.order:
        raise ParameterError(f"subset indices out of range for order {A.order}")
    minor = _det(A.entries[np.ix_(idx, idx)])
    prod = math.prod(A.entries[i, i] for i in idx)
    return _check("hadamard", minor, prod, "<=", tol, subset=idx)


def schur_check(A, tol: float = 1e-10) -> MajorizationVerdict:
    """Diagonal of a symmetric matrix against its eigenvalues."""
    a = np.array(A, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError("schur_check needs a square matrix")
    if np.max(np.abs(a - a.T)) > SYMMETRY_TOL * max(np.max(np.abs(a)), 1e-300):
        raise InputError("matrix is not symmetric")
    return weak_majorize(np.diagonal(a), jacobi_eigvalsh(a), tol)


def young_product_bound(x: Sequence[float], p_exponents: Sequence[float], tol: float = DEFAULT_TOL) -> CheckReport:
    """``sum x_i^{p_i} >= (1/p) (prod p_i^{1/p_i})^p (prod x_i)^p`` with ``1/p = sum 1/p_i``.

    Both sides are formed in log space; ``log_lhs``/``log_rhs`` are reported
    alongside in case the linear values overflow.
    """
    x = np.asarray(x, dtype=float).ravel()
    pe = np.asarray(p_exponents, dtype=float).ravel()
    if x.shape != pe.shape or x.size == 0:
        raise ParameterError("x and p_exponents must be non-empty and equally long")
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise ParameterError("x must be positive")
    if np.any(~np.isfinite(pe)) or np.any(pe <= 0):
        raise ParameterError("exponents must be positive")
    p = 1.0 / math.fsum((1.0 / pe).tolist())
    log_terms = pe * np.log(x)
    top = float(np.max(log_terms))
    log_lhs = top + math.log(math.fsum(np.exp(log_terms - top).tolist()))
    log_rhs = -math.log(p) + p * math.fsum((np.log(pe) / pe).tolist()) + p * math.fsum(np.log(x).tolist())
    lhs = math.exp(log_lhs) if log_lhs < 700 else math.inf
    rhs = math.exp(log_rhs) if log_rhs < 700 else math.inf
    if math.isinf(lhs) or math.isinf(rhs):
        passed = log_lhs >= log_rhs - tol
        return CheckReport("young", lhs, rhs, ">=", passed, tol,
                           {"p_effective": p, "log_lhs": log_lhs, "log_rhs": log_rhs})
    rep = _check("young", lhs, rhs, ">=", tol, p_effective=p, log_lhs=log_lhs, log_rhs=log_rhs)
    return rep


def young_equality_point(p_exponents: Sequence[float], level: float = 1.0) -> np.ndarray:
    """``x`` with ``q_i x_i^{p_i}`` constant (``q_i = p_i / p``), where equality holds."""
    pe = np.asarray(p_exponents, dtype=float)
    p = 1.0 / np.sum(1.0 / pe)
    q = pe / p
    return (level / q) ** (1.0 / pe)


# --------------------------------------------------------------------------
# fuzz harness
# --------------------------------------------------------------------------


def random_spd(rng: np.random.Generator, m: int) -> np.ndarray:
    g = rng.uniform(-1.0, 1.0, size=(m, m))
    return g.T @ g + 1e-3 * np.eye(m)


@dataclass
class FuzzSummary:
    name: str
    trials: int
    violations: int = 0
    worst_relative_slack: float = math.inf
    first_failure: dict | None = None

    def record(self, rel_slack: float, ok: bool, detail: Callable[[], dict]) -> None:
        self.worst_relative_slack = min(self.worst_relative_slack, rel_slack)
        if not ok:
            self.violations += 1
            if self.first_failure is None:
                self.first_failure = detail()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "violations": self.violations,
            "worst_relative_slack": self.worst_relative_slack,
            "first_failure": self.first_failure,
        }


def _rel(lhs: float, rhs: float, relation: str) -> float:
    slack = rhs - lhs if relation == "<=" else lhs - rhs
    return slack / max(1.0, abs(lhs), abs(rhs))


def _batched(rng: np.random.Generator, trials: int, orders=range(2, 9)):
    """Random SPD matrices grouped by order, eigenvalues from one Jacobi batch."""
    orders = list(orders)
    sizes = rng.choice(orders, size=trials)
    out = []
    for m in orders:
        count = int(np.sum(sizes == m))
        if not count:
            continue
        g = rng.uniform(-1.0, 1.0, size=(count, m, m))
        mats = np.swapaxes(g, 1, 2) @ g + 1e-3 * np.eye(m)
        eig = jacobi_eigvalsh(mats)
        out.append((m, mats, eig))
    return out


def fuzz_lemmas(trials: int, seed: int = 42, tol: float = DEFAULT_TOL) -> list[FuzzSummary]:
    """Randomized check of every matrix/scalar lemma; deterministic per seed.

    Independent sub-streams per lemma come from ``SeedSequence.spawn``.
    """
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials!r}")
    trials = int(trials)
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(7)]
    results = []

    def rel_ok(lhs, rhs, relation):
        r = _rel(lhs, rhs, relation)
        return r, r >= -tol

    s1 = FuzzSummary("lemma_matrix_part1", trials)
    rng = streams[0]
    for m, mats, eig in _batched(rng, trials):
        for A, lam in zip(mats, eig):
            a = np.sort(rng.uniform(0, 2, m))[::-1]
            p = float(rng.uniform(0, 1))
            lhs = _power_sum(a, lam, p)
            rhs = _power_sum(a, np.diagonal(A), p)
            r, ok = rel_ok(lhs, rhs, "<=")
            s1.record(r, ok, lambda: {"A": A.tolist(), "a": a.tolist(), "p": p})
    results.append(s1)

    s2 = FuzzSummary("lemma_matrix_part2", trials)
    rng = streams[1]
    for m, mats, eig in _batched(rng, trials):
        for A, lam in zip(mats, eig):
            a = np.sort(rng.uniform(0.1, 2, m))
            p = float(rng.uniform(1, 4) if rng.random() < 0.5 else rng.uniform(-3, 0))
            lhs = _power_sum(a, lam, p)
            rhs = _power_sum(a, np.diagonal(A), p)
            r, ok = rel_ok(lhs, rhs, ">=")
            s2.record(r, ok, lambda: {"A": A.tolist(), "a": a.tolist(), "p": p})
    results.append(s2)

    s3 = FuzzSummary("lemma_matrix_part3", trials)
    rng = streams[2]
    for m, mats, eig in _batched(rng, trials):
        for A, lam in zip(mats, eig):
            k = int(rng.integers(1, m + 1))
            p = float(rng.uniform(-2, 0))
            lhs = _subset_power_sum(lam, k, p)
            rhs = _subset_power_sum(np.diagonal(A), k, p)
            r, ok = rel_ok(lhs, rhs, ">=")
            s3.record(r, ok, lambda: {"A": A.tolist(), "k": k, "p": p})
    results.append(s3)

    sy = FuzzSummary("young_product_bound", trials)
    rng = streams[3]
    for _ in range(trials):
        m = int(rng.integers(1, 7))
        x = rng.uniform(0.05, 3, m)
        pe = rng.uniform(0.2, 5, m)
        rep = young_product_bound(x, pe, tol)
        r = (rep.extra["log_lhs"] - rep.extra["log_rhs"]) if math.isinf(rep.lhs) else _rel(rep.lhs, rep.rhs, ">=")
        sy.record(r, rep.passed, lambda: {"x": x.tolist(), "p": pe.tolist()})
    results.append(sy)

    ss = FuzzSummary("schur_check", trials)
    rng = streams[4]
    orders = rng.integers(2, 9, size=trials)
    for m in range(2, 9):
        count = int(np.sum(orders == m))
        if not count:
            continue
        g = rng.uniform(-1, 1, size=(count, m, m))
        sym = g + np.swapaxes(g, 1, 2)
        eig = jacobi_eigvalsh(sym)
        for S, lam in zip(sym, eig):
            v = weak_majorize(np.diagonal(S), lam, 1e-10)
            ok = v.relation == MAJORIZED
            ss.record(0.0 if ok else -1.0, ok, lambda: {"S": S.tolist()})
    results.append(ss)

    sc = FuzzSummary("compound_spectrum", max(1, trials // 10))
    rng = streams[5]
    for _ in range(sc.trials):
        m = int(rng.integers(2, 7))
        k = int(rng.integers(1, m + 1))
        A = SpdMatrix(random_spd(rng, m))
        got = compound_matrix(A, k).eigenvalues()
        lam = np.linalg.eigvalsh(A.entries)
        want = np.sort([math.prod(lam[list(c)]) for c in itertools.combinations(range(m), k)])
        err = float(np.max(np.abs(got - want) / np.maximum(np.abs(want), 1e-300)))
        sc.record(-err, err <= 1e-8, lambda: {"A": A.entries.tolist(), "k": k, "err": err})
    results.append(sc)

    sh = FuzzSummary("hadamard", trials)
    rng = streams[6]
    for _ in range(trials):
        m = int(rng.integers(2, 9))
        A = random_spd(rng, m)
        size = int(rng.integers(1, m + 1))
        idx = sorted(rng.choice(m, size=size, replace=False).tolist())
        minor = _det(A[np.ix_(idx, idx)])
        prod = math.prod(A[i, i] for i in idx)
        r, ok = rel_ok(minor, prod, "<=")
        sh.record(r, ok, lambda: {"A": A.tolist(), "subset": idx})
    results.append(sh)
    return results
