"""Scalar activation library: the hard threshold, classical maps, step-like
constructions with their (eta, eps, burn-in, curvature) certificates, iterated
composition, certificate verification, and convergence-rate tooling.

A step-like activation fixes 0 and 1, has derivative at most ``eta`` there,
and after ``burn_in`` applications maps every point of the plateau collar
(within ``eps`` of 0 or 1) to within ``min(eps, (1-eta)/curvature)`` of the
plateau value.  Iterating it then converges to the hard threshold at a
geometric rate ``(1+eta)/2`` per application, or doubly exponentially when
``eta = 0``.  All certificate checks below quantify over the collar; the
conditions are unsatisfiable on an unbounded domain (the identity burn-in
case would have to move far-away points onto the plateaus).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

__all__ = [
    "Activation",
    "StepLikeParams",
    "ActivationSpec",
    "ACTIVATION_NAMES",
    "get_activation",
    "get_step_params",
    "kernel_code",
    "kernel_params",
    "apply_activation",
    "sigma_star",
    "make_step_arctan",
    "make_step_tanh",
    "make_steplike_tanh_eta0",
    "make_steplike_sigmoid_eta0",
    "flat_tanh_constants",
    "golden_section_min",
    "iterate",
    "plateau_grid",
    "wide_grid",
    "convergence_bound",
    "required_composition_depth",
    "size_closed_forms",
    "VerifyGrid",
    "CheckResult",
    "StepLikeReport",
    "verify_step_like",
    "ContractionReport",
    "fixed_point_contraction_check",
]


@dataclass(frozen=True)
class StepLikeParams:
    """Certificate of a step-like activation."""

    eta: float        # bound on |sigma'| at the fixed points 0 and 1
    eps: float        # collar half-width around the plateaus
    burn_in: int      # applications before the contraction regime starts
    curvature: float  # bound on |sigma''| over the reachable region

    def __post_init__(self):
        if not 0.0 <= self.eta < 1.0:
            raise ValueError(f"eta must lie in [0, 1), got {self.eta}")
        if not 0.0 < self.eps < 0.5:
            raise ValueError(f"eps must lie in (0, 1/2), got {self.eps}")
        if self.burn_in < 0:
            raise ValueError("burn_in must be non-negative")
        if self.curvature <= 0.0:
            raise ValueError("curvature bound must be positive")


@dataclass(frozen=True)
class Activation:
    """Named scalar map with optional closed-form derivatives.

    ``fn``/``d1``/``d2`` accept scalars or numpy arrays.
    """

    name: str
    fn: Callable
    d1: Callable | None = None
    d2: Callable | None = None


@dataclass(frozen=True)
class ActivationSpec:
    """Activation selection for a compiled network: name plus composition
    depth ``m`` (``m = 0`` means the identity, by explicit request)."""

    name: str
    m: int = 1

    def __post_init__(self):
        if self.name not in ACTIVATION_NAMES:
            raise ValueError(f"unknown activation {self.name!r}")
        if self.m < 0:
            raise ValueError("composition depth must be non-negative")

    @property
    def base(self) -> Activation:
        return get_activation(self.name)

    @property
    def step_params(self) -> StepLikeParams | None:
        return get_step_params(self.name)


# --------------------------------------------------------------------------
# base maps


def _maybe_scalar(out, template):
    if np.isscalar(template) or (isinstance(template, np.ndarray) and template.ndim == 0):
        return float(out)
    return out


def sigma_star(x):
    """Hard threshold at 1/2: 0 below, 1 above, 1/2 at the tie."""
    arr = np.asarray(x, dtype=np.float64)
    out = np.where(arr > 0.5, 1.0, np.where(arr < 0.5, 0.0, 0.5))
    return _maybe_scalar(out, x)


def _relu(x):
    return _maybe_scalar(np.maximum(np.asarray(x, dtype=np.float64), 0.0), x)


def _crelu(x):
    return _maybe_scalar(np.minimum(np.maximum(np.asarray(x, dtype=np.float64), 0.0), 1.0), x)


def _sigmoid(x):
    with np.errstate(over="ignore"):
        out = 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=np.float64)))
    return _maybe_scalar(out, x)


def _tanh(x):
    return _maybe_scalar(np.tanh(np.asarray(x, dtype=np.float64)), x)


def _arctan_4pi(x):
    return _maybe_scalar((4.0 / np.pi) * np.arctan(np.asarray(x, dtype=np.float64)), x)


def _step_arctan(x):
    u = 2.0 * np.asarray(x, dtype=np.float64) - 1.0
    return _maybe_scalar(0.5 + (2.0 / np.pi) * np.arctan(u), x)


def _step_arctan_d1(x):
    u = 2.0 * np.asarray(x, dtype=np.float64) - 1.0
    return _maybe_scalar((4.0 / np.pi) / (1.0 + u * u), x)


def _step_arctan_d2(x):
    u = 2.0 * np.asarray(x, dtype=np.float64) - 1.0
    return _maybe_scalar(-(16.0 / np.pi) * u / (1.0 + u * u) ** 2, x)


_TANH_HALF = math.tanh(0.5)


def _step_tanh(x):
    y = np.asarray(x, dtype=np.float64) - 0.5
    return _maybe_scalar(0.5 + np.tanh(y) / (2.0 * _TANH_HALF), x)


def _step_tanh_d1(x):
    y = np.asarray(x, dtype=np.float64) - 0.5
    return _maybe_scalar(1.0 / (np.cosh(y) ** 2 * 2.0 * _TANH_HALF), x)


def _step_tanh_d2(x):
    y = np.asarray(x, dtype=np.float64) - 0.5
    return _maybe_scalar(-np.tanh(y) / (np.cosh(y) ** 2 * _TANH_HALF), x)


# --------------------------------------------------------------------------
# flat-shoulder construction (zero derivative at both fixed points)


def golden_section_min(fn, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    """Minimize a unimodal scalar function on [lo, hi] to within ``tol``.

    Raises if the minimum sits at an endpoint (no interior bracket), which
    would signal a transcription bug in the objective.
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    invphi2 = (3.0 - math.sqrt(5.0)) / 2.0
    a, b = float(lo), float(hi)
    h = b - a
    c = a + invphi2 * h
    d = a + invphi * h
    yc, yd = fn(c), fn(d)
    while h > tol:
        if yc < yd:
            b, d, yd = d, c, yc
            h = b - a
            c = a + invphi2 * h
            yc = fn(c)
        else:
            a, c, yc = c, d, yd
            h = b - a
            d = a + invphi * h
            yd = fn(d)
    xmin = (a + b) / 2.0
    fmin = fn(xmin)
    if not (fn(lo) > fmin < fn(hi)):
        raise RuntimeError(
            f"no interior minimum bracketed on [{lo}, {hi}]; objective looks wrong"
        )
    return xmin, fmin


def _sharpness_objective(v):
    s1 = 1.0 / np.cosh(v) ** 2
    s2 = 1.0 / np.cosh(2.0 * v) ** 2
    s3 = 1.0 / np.cosh(3.0 * v) ** 2
    return (s1 + 3.0 * s3) / s2


@lru_cache(maxsize=1)
def flat_tanh_constants() -> tuple[float, float]:
    """Inflection parameter ``a`` and objective minimum ``alpha`` of the
    flat-shoulder tanh construction, by golden-section search on [0.3, 0.6]."""
    return golden_section_min(_sharpness_objective, 0.3, 0.6, tol=1e-10)


def _flat_coeffs() -> tuple[float, float, float]:
    # half_alpha is the coefficient that zeroes the inner map's derivative at
    # the fixed points; den normalizes the inner map to fix 0 and 1.
    a, alpha = flat_tanh_constants()
    half_alpha = alpha / 2.0
    den = 2.0 * (math.tanh(a) - half_alpha * math.tanh(2.0 * a) + math.tanh(3.0 * a))
    return a, half_alpha, den


def _flat_inner(x):
    a, half_alpha, den = _flat_coeffs()
    u = 2.0 * np.asarray(x, dtype=np.float64) - 1.0
    num = np.tanh(a * u) - half_alpha * np.tanh(2.0 * a * u) + np.tanh(3.0 * a * u)
    return num / den + 0.5


def _flat_inner_d1(x):
    a, half_alpha, den = _flat_coeffs()
    u = 2.0 * np.asarray(x, dtype=np.float64) - 1.0
    s1 = 1.0 / np.cosh(a * u) ** 2
    s2 = 1.0 / np.cosh(2.0 * a * u) ** 2
    s3 = 1.0 / np.cosh(3.0 * a * u) ** 2
    return 2.0 * a * (s1 - 2.0 * half_alpha * s2 + 3.0 * s3) / den


def _flat_inner_d2(x):
    a, half_alpha, den = _flat_coeffs()
    u = 2.0 * np.asarray(x, dtype=np.float64) - 1.0

    def st(w):
        return np.tanh(w) / np.cosh(w) ** 2

    return -8.0 * a * a * (st(a * u) - 4.0 * half_alpha * st(2.0 * a * u) + 9.0 * st(3.0 * a * u)) / den


def _flat_tanh(x):
    return _maybe_scalar(_step_tanh(_flat_inner(np.asarray(x, dtype=np.float64))), x)


def _flat_tanh_d1(x):
    t = _flat_inner(np.asarray(x, dtype=np.float64))
    return _maybe_scalar(_step_tanh_d1(t) * _flat_inner_d1(x), x)


def _flat_tanh_d2(x):
    t = _flat_inner(np.asarray(x, dtype=np.float64))
    d1 = _flat_inner_d1(x)
    return _maybe_scalar(_step_tanh_d2(t) * d1 * d1 + _step_tanh_d1(t) * _flat_inner_d2(x), x)


def _tanh_via_sigmoid(z):
    with np.errstate(over="ignore"):
        return 2.0 / (1.0 + np.exp(-2.0 * np.asarray(z, dtype=np.float64))) - 1.0


def _flat_sigmoid(x):
    """Pointwise the same map as the flat tanh variant, realized with sigmoid
    evaluations only (tanh z == 2*sigmoid(2z) - 1)."""
    a, half_alpha, _ = _flat_coeffs()
    den = 2.0 * (
        float(_tanh_via_sigmoid(a))
        - half_alpha * float(_tanh_via_sigmoid(2.0 * a))
        + float(_tanh_via_sigmoid(3.0 * a))
    )
    u = 2.0 * np.asarray(x, dtype=np.float64) - 1.0
    num = (
        _tanh_via_sigmoid(a * u)
        - half_alpha * _tanh_via_sigmoid(2.0 * a * u)
        + _tanh_via_sigmoid(3.0 * a * u)
    )
    t = num / den + 0.5
    t_half = float(_tanh_via_sigmoid(0.5))
    return _maybe_scalar(0.5 + _tanh_via_sigmoid(t - 0.5) / (2.0 * t_half), x)


# --------------------------------------------------------------------------
# registry

_STEP_ARCTAN_CERT = StepLikeParams(eta=0.64, eps=0.10, burn_in=0, curvature=1.52)
_STEP_TANH_CERT = StepLikeParams(eta=0.86, eps=0.16, burn_in=0, curvature=0.84)
_FLAT_CERT = StepLikeParams(eta=0.0, eps=0.20, burn_in=0, curvature=2.2)

_KERNEL_CODES = {
    "sigma-star": 0,
    "crelu": 1,
    "relu": 2,
    "sigmoid": 3,
    "tanh": 4,
    "step-arctan": 5,
    "step-tanh": 6,
    "steplike-tanh-eta0": 7,
    "steplike-sigmoid-eta0": 8,
    "arctan-4pi": 9,
}

ACTIVATION_NAMES = tuple(_KERNEL_CODES)


@lru_cache(maxsize=None)
def get_activation(name: str) -> Activation:
    if name == "sigma-star":
        return Activation("sigma-star", sigma_star)
    if name == "crelu":
        return Activation("crelu", _crelu)
    if name == "relu":
        return Activation("relu", _relu)
    if name == "sigmoid":
        return Activation("sigmoid", _sigmoid)
    if name == "tanh":
        return Activation("tanh", _tanh)
    if name == "step-arctan":
        return Activation("step-arctan", _step_arctan, _step_arctan_d1, _step_arctan_d2)
    if name == "step-tanh":
        return Activation("step-tanh", _step_tanh, _step_tanh_d1, _step_tanh_d2)
    if name == "steplike-tanh-eta0":
        return Activation("steplike-tanh-eta0", _flat_tanh, _flat_tanh_d1, _flat_tanh_d2)
    if name == "steplike-sigmoid-eta0":
        # pointwise identical to the tanh realization, so it shares derivatives
        return Activation("steplike-sigmoid-eta0", _flat_sigmoid, _flat_tanh_d1, _flat_tanh_d2)
    if name == "arctan-4pi":
        return Activation("arctan-4pi", _arctan_4pi)
    raise ValueError(f"unknown activation {name!r}")


def get_step_params(name: str) -> StepLikeParams | None:
    return {
        "step-arctan": _STEP_ARCTAN_CERT,
        "step-tanh": _STEP_TANH_CERT,
        "steplike-tanh-eta0": _FLAT_CERT,
        "steplike-sigmoid-eta0": _FLAT_CERT,
    }.get(name)


def kernel_code(name: str) -> int:
    return _KERNEL_CODES[name]


def kernel_params(name: str) -> np.ndarray:
    """Constants the jitted scalar kernel needs for ``name``."""
    if name in ("steplike-tanh-eta0", "steplike-sigmoid-eta0"):
        a, half_alpha, den = _flat_coeffs()
        return np.array([a, half_alpha, den, 1.0 / (2.0 * _TANH_HALF)], dtype=np.float64)
    return np.empty(0, dtype=np.float64)


def make_step_arctan() -> tuple[Activation, StepLikeParams]:
    return get_activation("step-arctan"), _STEP_ARCTAN_CERT


def make_step_tanh() -> tuple[Activation, StepLikeParams]:
    return get_activation("step-tanh"), _STEP_TANH_CERT


def make_steplike_tanh_eta0() -> tuple[Activation, StepLikeParams]:
    """Flat-shoulder tanh construction; recomputes (a, alpha) and requires
    them to land in (0.45, 0.46) x (3.14, 3.15)."""
    a, alpha = flat_tanh_constants()
    if not (0.45 < a < 0.46 and 3.14 < alpha < 3.15):
        raise RuntimeError(f"flat-shoulder constants off target: a={a}, alpha={alpha}")
    return get_activation("steplike-tanh-eta0"), _FLAT_CERT


def make_steplike_sigmoid_eta0() -> tuple[Activation, StepLikeParams]:
    make_steplike_tanh_eta0()
    return get_activation("steplike-sigmoid-eta0"), _FLAT_CERT


# --------------------------------------------------------------------------
# iteration and application


def iterate(activation, m: int, x):
    """Apply a scalar map ``m`` times (``m = 0`` is the identity)."""
    if m < 0:
        raise ValueError("iteration count must be non-negative")
    fn = activation.fn if isinstance(activation, Activation) else activation
    out = np.asarray(x, dtype=np.float64)
    for _ in range(m):
        out = fn(out)
    return _maybe_scalar(np.asarray(out), x)


def apply_activation(name: str, m: int, values):
    """Elementwise activation used by the forward pass.

    Every named map is iterated ``m`` times, except ``arctan-4pi`` which is
    the sign-amplifying composite ``z -> 1/2 + f^m(z - 1/2)/2`` with
    ``f = (4/pi) arctan``.
    """
    if m < 0:
        raise ValueError("composition depth must be non-negative")
    arr = np.asarray(values, dtype=np.float64)
    if name == "arctan-4pi":
        w = arr - 0.5
        for _ in range(m):
            w = (4.0 / np.pi) * np.arctan(w)
        return _maybe_scalar(0.5 + 0.5 * w, values)
    fn = get_activation(name).fn
    out = arr
    for _ in range(m):
        out = fn(out)
    return _maybe_scalar(np.asarray(out), values)


# --------------------------------------------------------------------------
# grids, rates, and certificate verification


def plateau_grid(eps: float, points: int = 20001) -> np.ndarray:
    """Sample the collar: every point within ``eps`` of 0 or of 1."""
    half = points // 2
    left = np.linspace(-eps, eps, half)
    right = np.linspace(1.0 - eps, 1.0 + eps, points - half)
    return np.concatenate([left, right])


def wide_grid(lo: float = -50.0, hi: float = 51.0, points: int = 100_000) -> np.ndarray:
    return np.linspace(lo, hi, points)


def convergence_bound(params: StepLikeParams, m: int) -> float:
    """Worst-case distance of the m-fold composite from the hard threshold,
    over the collar."""
    if m < params.burn_in:
        raise ValueError(f"m={m} below the burn-in count {params.burn_in}")
    steps = m - params.burn_in
    if params.eta > 0.0:
        return params.eps * ((1.0 + params.eta) / 2.0) ** steps
    return params.eps * 2.0 ** -(2.0**steps - 1.0)


def required_composition_depth(params: StepLikeParams, max_degree: int) -> int:
    """Smallest ``m >= burn_in`` with ``2 (max_degree + 2) * bound(m) < 1``.

    This is the condition that lets the per-layer error survive the inductive
    argument across all iterations of the compiled network.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    m = params.burn_in
    while not 2.0 * (max_degree + 2) * convergence_bound(params, m) < 1.0:
        m += 1
        if m > params.burn_in + 100_000:
            raise RuntimeError("rate too slow; no feasible composition depth found")
    return m


def size_closed_forms(params: StepLikeParams, max_degree: int) -> dict[str, float]:
    """Closed-form size estimates reported next to the scanned depth.

    Two variants because the sign under the log is ambiguous in circulation:
    one divides by ``1 - log2(1 - eta)``, the other by ``1 - log2(1 + eta)``
    (the latter matches the geometric rate ``(1 + eta)/2``).  The scan is
    authoritative; these are informational.
    """
    num = 2.0 + math.log2(max_degree + 2)
    out: dict[str, float] = {}
    if params.eta > 0.0:
        out["log2(1-eta)"] = params.burn_in + num / (1.0 - math.log2(1.0 - params.eta))
        out["log2(1+eta)"] = params.burn_in + num / (1.0 - math.log2(1.0 + params.eta))
    else:
        out["log2(1-eta)"] = params.burn_in + math.log2(num)
        out["log2(1+eta)"] = out["log2(1-eta)"]
    return out


@dataclass(frozen=True)
class VerifyGrid:
    """Sampling descriptor for certificate verification."""

    lo: float = -50.0
    hi: float = 51.0
    points: int = 100_000
    collar_points: int = 20_001


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    threshold: float
    location: float

    def describe(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"{self.name}: {status} (worst {self.worst:.6g} vs threshold "
            f"{self.threshold:.6g} at x={self.location:.6g})"
        )


@dataclass(frozen=True)
class StepLikeReport:
    activation: str
    params: StepLikeParams
    passed: bool
    checks: tuple[CheckResult, ...]
    grid_note: str

    def describe(self) -> str:
        head = f"{self.activation}: {'pass' if self.passed else 'FAIL'} [{self.grid_note}]"
        return "\n".join([head] + ["  " + c.describe() for c in self.checks])


def _derivatives(activation: Activation, h: float = 1e-5):
    if activation.d1 is not None and activation.d2 is not None:
        return activation.d1, activation.d2
    fn = activation.fn

    def d1(x):
        return (fn(np.asarray(x) + h) - fn(np.asarray(x) - h)) / (2.0 * h)

    def d2(x):
        x = np.asarray(x)
        return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h)

    return d1, d2


def verify_step_like(
    activation: Activation,
    params: StepLikeParams,
    grid: VerifyGrid | None = None,
    tol: float = 1e-9,
) -> StepLikeReport:
    """Check the step-like conditions against a certificate.

    (a) fixes 0 and 1; (b) derivative at 0 and 1 at most eta; (c) the burn-in
    composite stays within min(eps, (1-eta)/curvature) of the threshold on
    the collar; (d) the one-step contraction
    ``|sigma(y) - p| <= eta |y - p| + (curvature/2) |y - p|^2`` (p the nearby
    plateau) holds at every burn-in image point of the sampled domain outside
    (eps, 1-eps).  Condition (d) is the inequality the fixed-point iteration
    consumes; a raw second-derivative bound is stronger than the certified
    constants support at the collar edge, so the report carries the curvature
    sup over the once-contracted collar as information only.
    """
    grid = grid or VerifyGrid()
    d1, d2 = _derivatives(activation)
    checks = []

    fixed_worst = max(abs(float(activation.fn(0.0))), abs(float(activation.fn(1.0)) - 1.0))
    fixed_loc = 0.0 if abs(float(activation.fn(0.0))) >= abs(float(activation.fn(1.0)) - 1.0) else 1.0
    checks.append(CheckResult("fixes 0 and 1", fixed_worst <= tol, fixed_worst, tol, fixed_loc))

    s0, s1 = abs(float(d1(0.0))), abs(float(d1(1.0)))
    slope_worst = max(s0, s1)
    checks.append(
        CheckResult(
            "derivative at the fixed points",
            slope_worst <= params.eta + tol,
            slope_worst,
            params.eta,
            0.0 if s0 >= s1 else 1.0,
        )
    )

    collar = plateau_grid(params.eps, grid.collar_points)
    target = sigma_star(collar)
    reached = iterate(activation, params.burn_in, collar)
    radius = min(params.eps, (1.0 - params.eta) / params.curvature)
    dev = np.abs(reached - target)
    i = int(np.argmax(dev))
    checks.append(
        CheckResult(
            "burn-in lands on the plateaus (collar)",
            float(dev[i]) <= radius + tol,
            float(dev[i]),
            radius,
            float(collar[i]),
        )
    )

    wide = wide_grid(grid.lo, grid.hi, grid.points)
    outside = wide[(wide <= params.eps) | (wide >= 1.0 - params.eps)]
    points = np.concatenate([np.asarray(iterate(activation, params.burn_in, outside)), reached])
    plateau = np.concatenate([sigma_star(outside), target])
    dist = np.abs(points - plateau)
    allowed = params.eta * dist + 0.5 * params.curvature * dist * dist
    stepped = np.abs(np.asarray(activation.fn(points)) - plateau)
    excess = stepped - allowed
    j = int(np.argmax(excess))
    checks.append(
        CheckResult(
            "one-step contraction on the burn-in image",
            float(excess[j]) <= tol,
            float(stepped[j]),
            float(allowed[j]),
            float(points[j]),
        )
    )

    curv_info = float(np.abs(np.asarray(d2(activation.fn(collar)))).max())
    note = (
        f"wide grid [{grid.lo}, {grid.hi}] x{grid.points}, "
        f"collar +-{params.eps} around 0 and 1 x{grid.collar_points}, tol={tol:g}; "
        f"curvature sup over the once-contracted collar: {curv_info:.6g}"
    )
    return StepLikeReport(
        activation=activation.name,
        params=params,
        passed=all(c.passed for c in checks),
        checks=tuple(checks),
        grid_note=note,
    )


@dataclass(frozen=True)
class ContractionReport:
    passed: bool
    worst_excess: float
    location: float
    iterations: int

    def describe(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"contraction {status}: worst observed-minus-bound {self.worst_excess:.6g} "
            f"at x={self.location:.6g} over n<={self.iterations}"
        )


def fixed_point_contraction_check(
    fn,
    x0: float,
    r: float,
    eta: float,
    curvature: float,
    n_max: int,
    grid_points: int = 1001,
    tol: float = 1e-12,
) -> ContractionReport:
    """Check the fixed-point contraction bounds on [x0 - r, x0 + r].

    Requires the hypothesis ``curvature * r <= 1 - eta``.  Asserts
    ``|f^n(x) - x0| <= ((1+eta)/2)^n |x - x0|`` for each n, and additionally
    the doubly exponential bound when ``eta == 0``.
    """
    if curvature * r > 1.0 - eta:
        raise ValueError(
            f"hypothesis violated: curvature*r = {curvature * r:.6g} > 1 - eta = {1.0 - eta:.6g}"
        )
    fn = fn.fn if isinstance(fn, Activation) else fn
    xs = np.linspace(x0 - r, x0 + r, grid_points)
    dist0 = np.abs(xs - x0)
    cur = xs.copy()
    worst_excess = -np.inf
    worst_loc = float(xs[0])
    ok = True
    for n in range(n_max + 1):
        err = np.abs(cur - x0)
        bound = ((1.0 + eta) / 2.0) ** n * dist0
        if eta == 0.0:
            bound = np.minimum(bound, (curvature / 2.0) ** (2.0**n - 1.0) * dist0 ** (2.0**n))
        excess = err - bound
        i = int(np.argmax(excess))
        if excess[i] > worst_excess:
            worst_excess = float(excess[i])
            worst_loc = float(xs[i])
        if excess[i] > tol:
            ok = False
        cur = np.asarray(fn(cur))
    return ContractionReport(ok, worst_excess, worst_loc, n_max)
