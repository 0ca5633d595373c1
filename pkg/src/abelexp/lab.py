"""Floating-point probe of the factorially scaled counterexample on Z.

The infinite basic sequence is modelled by the standard basis of R^depth:
x_n = n! u_n. Z is enumerated as 0, 1, -1, 2, -2, ... so that g_{2n} = n,
and f(g_n) = x_n for n <= depth, 0 for later indices inside the window.
Everything here is numeric; nothing is a proof of non-membership.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import OverflowGuardError, PreconditionError

MAX_DEPTH = 8
ILL_CONDITIONED = 1e12


def enumerate_z(n: int) -> int:
    """g_n for n >= 1: g_1 = 0, g_{2k} = k, g_{2k+1} = -k."""
    if n < 1:
        raise PreconditionError("enumeration indices start at 1")
    return n // 2 if n % 2 == 0 else -(n // 2)


def enumeration_index(x: int) -> int:
    """Inverse of :func:`enumerate_z`."""
    if x > 0:
        return 2 * x
    return 1 - 2 * x


@dataclass(frozen=True)
class CounterexampleInstance:
    depth: int
    window: int
    enumeration: tuple[int, ...]  # g_1 .. g_window
    table: dict = field(repr=False, compare=False)  # g -> np.ndarray of length depth

    def __call__(self, x: int) -> np.ndarray:
        if x not in self.table:
            raise PreconditionError(f"point {x} lies outside the window of {self.window} enumerated points")
        return self.table[x]

    def translate(self, g: int) -> Callable[[int], np.ndarray]:
        return lambda x: self(x + g)

    @property
    def points(self) -> set[int]:
        return set(self.enumeration)


def build_counterexample(depth: int, window: int) -> CounterexampleInstance:
    if depth > MAX_DEPTH:
        raise OverflowGuardError(f"depth {depth} > {MAX_DEPTH}: factorial norms would exceed {math.factorial(MAX_DEPTH)}")
    if depth < 2:
        raise PreconditionError("depth must be at least 2")
    if window < depth:
        raise PreconditionError("window must cover at least depth enumerated points")
    enum = tuple(enumerate_z(n) for n in range(1, window + 1))
    table = {}
    for n, g in enumerate(enum, start=1):
        v = np.zeros(depth)
        if n <= depth:
            v[n - 1] = math.factorial(n)
        table[g] = v
    return CounterexampleInstance(depth, window, enum, table)


def unit(depth: int, n: int) -> np.ndarray:
    """u_n (1-based)."""
    v = np.zeros(depth)
    v[n - 1] = 1.0
    return v


@dataclass
class Fit:
    residual: float
    condition: float
    coefficients: np.ndarray
    rank: int

    @property
    def ill_conditioned(self) -> bool:
        return not math.isfinite(self.condition) or self.condition > ILL_CONDITIONED


def _lstsq(a: np.ndarray, b: np.ndarray) -> Fit:
    coef, _, rank, sv = np.linalg.lstsq(a, b, rcond=None)
    resid = float(np.linalg.norm(a @ coef - b))
    nz = sv[sv > sv[0] * max(a.shape) * np.finfo(float).eps] if sv.size else sv
    cond = float(nz[0] / nz[-1]) if nz.size else math.inf
    if rank < a.shape[1]:
        cond = math.inf
    return Fit(resid, cond, coef, int(rank))


def sample_points(inst: CounterexampleInstance, num_points: int) -> list[int]:
    if not 1 <= num_points <= inst.window:
        raise PreconditionError(f"num_points must lie in 1..{inst.window}")
    return list(inst.enumeration[:num_points])


def _design(inst: CounterexampleInstance, num_translates: int, points: Sequence[int]) -> np.ndarray:
    if not 1 <= num_translates <= inst.window:
        raise PreconditionError(f"num_translates must lie in 1..{inst.window}")
    shifts = inst.enumeration[:num_translates]
    cols = [np.concatenate([inst(x + g) for x in points]) for g in shifts]
    return np.column_stack(cols)


def residual_to_target(
    inst: CounterexampleInstance,
    target: Callable[[int], np.ndarray],
    num_translates: int,
    num_points: int,
) -> Fit:
    """Least-squares distance from sampled target to span{T_{g_i} f : i <= num_translates}."""
    pts = sample_points(inst, num_points)
    a = _design(inst, num_translates, pts).astype(complex)
    b = np.concatenate([np.asarray(target(x), dtype=complex) for x in pts])
    return _lstsq(a, b)


def exponential_target(lam: complex, e: np.ndarray) -> Callable[[int], np.ndarray]:
    lam = complex(lam)
    if lam == 0:
        raise PreconditionError("an exponential cannot vanish: lambda must be nonzero")
    e = np.asarray(e, dtype=complex)
    return lambda x: lam**x * e


def _check_unit(e: np.ndarray, depth: int) -> np.ndarray:
    e = np.asarray(e, dtype=float)
    if e.shape != (depth,):
        raise PreconditionError(f"target vector must have length {depth}")
    if abs(np.linalg.norm(e) - 1) > 1e-12:
        raise PreconditionError("target vector must be a unit vector")
    return e


def residual(inst: CounterexampleInstance, lam: complex, e, num_translates: int, num_points: int) -> float:
    e = _check_unit(e, inst.depth)
    return residual_to_target(inst, exponential_target(lam, e), num_translates, num_points).residual


def sweep_points(num_translates: int) -> int:
    """Evaluation points used by the sweep for a given number of translates."""
    return 2 * num_translates + 2


def required_window(max_translates: int) -> int:
    """Smallest window that defines every sample the sweep touches."""
    npts = sweep_points(max_translates)
    shifts = [enumerate_z(n) for n in range(1, max_translates + 1)]
    pts = [enumerate_z(n) for n in range(1, npts + 1)]
    return max(enumeration_index(x + g) for x in pts for g in shifts)


@dataclass
class ResidualReport:
    exponential_base: complex
    target_vector: list[float]
    window_sizes: list[int]
    residuals: list[float]
    conditioning: list[float]
    flagged: list[bool]

    def __post_init__(self):
        if any(r < 0 for r in self.residuals):
            raise ValueError("least-squares residuals cannot be negative")

    @property
    def all_positive(self) -> bool:
        return all(r > 0 for r in self.residuals)

    def to_dict(self) -> dict:
        lam = complex(self.exponential_base)
        return {
            "lambda": [lam.real, lam.imag],
            "e": [float(v) for v in self.target_vector],
            "windows": list(self.window_sizes),
            "residuals": [float(r) for r in self.residuals],
            "conditioning": [_json_float(c) for c in self.conditioning],
        }

    @classmethod
    def from_dict(cls, d: dict) -> ResidualReport:
        cond = [math.inf if c is None else float(c) for c in d["conditioning"]]
        return cls(
            complex(*d["lambda"]),
            [float(v) for v in d["e"]],
            list(d["windows"]),
            [float(r) for r in d["residuals"]],
            cond,
            [not math.isfinite(c) or c > ILL_CONDITIONED for c in cond],
        )

    def csv_rows(self) -> list[list]:
        lam = complex(self.exponential_base)
        e = " ".join(repr(float(v)) for v in self.target_vector)
        return [
            [lam.real, lam.imag, e, w, r, _json_float(c)]
            for w, r, c in zip(self.window_sizes, self.residuals, self.conditioning)
        ]


CSV_HEADER = ["lambda_re", "lambda_im", "e", "window", "residual", "conditioning"]


def _json_float(x: float):
    return None if not math.isfinite(x) else float(x)


def residual_sweep(inst: CounterexampleInstance, lam: complex, e, max_translates: int) -> ResidualReport:
    e = _check_unit(e, inst.depth)
    target = exponential_target(lam, e)
    windows, res, cond, flags = [], [], [], []
    for t in range(1, max_translates + 1):
        fit = residual_to_target(inst, target, t, sweep_points(t))
        windows.append(t)
        res.append(fit.residual)
        cond.append(fit.condition)
        flags.append(fit.ill_conditioned)
    return ResidualReport(complex(lam), [float(v) for v in e], windows, res, cond, flags)


def reports_to_csv(reports: Sequence[ResidualReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerows(r.csv_rows())
    return buf.getvalue()


def baseline_sweep(depth: int = 5, max_translates: int = 6) -> list[ResidualReport]:
    """lambda in {1, 2, -1}, e in {u_1, u_3}."""
    inst = build_counterexample(depth, required_window(max_translates))
    return [
        residual_sweep(inst, lam, unit(depth, n), max_translates)
        for lam in (1, 2, -1)
        for n in (1, 3)
    ]


def membership_control(inst: CounterexampleInstance, j: int, num_translates: int, num_points: int) -> Fit:
    """Target T_{g_j} f itself; inside the span whenever j <= num_translates."""
    return residual_to_target(inst, inst.translate(inst.enumeration[j - 1]), num_translates, num_points)


@dataclass
class SpreadProbe:
    alphas: list[float]  # coefficient functionals of e against x_n = n! u_n
    products: list[complex]  # alpha_i * m(g_i)
    ratio: float  # max |alpha_i m(g_i)| / min |alpha_i m(g_i)|
    fitted: list[complex]  # c_i from the least-squares fit (coefficient of x_i in f_k(0))
    fitted_ratio: float  # same ratio for c_i * m(g_i)
    fit_gap: float  # max |c_i - alpha_i| / max |alpha_i|

    @property
    def deviation(self) -> float:
        return self.ratio - 1.0


def _ratio(vals) -> float:
    mags = [abs(v) for v in vals]
    return math.inf if min(mags) == 0 else max(mags) / min(mags)


def coefficient_spread(inst: CounterexampleInstance, lam: complex, e, num_translates: int | None = None, num_points: int | None = None) -> SpreadProbe:
    """Compare alpha_i m(g_i) (forced by e) with the fitted c_i m(g_i).

    Membership of m*e in the closed span would force alpha_i m(g_i) to be a
    single constant and c_i -> alpha_i. The fitted products are constant
    here (the translate columns have disjoint supports), so the whole
    obstruction shows up as the spread of alpha_i m(g_i) and as the gap
    between c and alpha.
    """
    e = _check_unit(e, inst.depth)
    t = num_translates if num_translates is not None else inst.depth
    p = num_points if num_points is not None else sweep_points(t)
    lam = complex(lam)
    fit = residual_to_target(inst, exponential_target(lam, e), t, p)
    alphas = [float(e[i]) / math.factorial(i + 1) for i in range(inst.depth)]
    m = [lam ** inst.enumeration[i] for i in range(inst.depth)]
    c = [complex(v) for v in fit.coefficients[: inst.depth]]
    scale = max(abs(a) for a in alphas)
    gap = max(abs(ci - a) for ci, a in zip(c, alphas)) / scale
    return SpreadProbe(
        alphas,
        [a * mi for a, mi in zip(alphas, m)],
        _ratio([a * mi for a, mi in zip(alphas, m)]),
        c,
        _ratio([ci * mi for ci, mi in zip(c, m)]),
        gap,
    )
