"""Experiment harnesses: separation and saturation sweeps over the tree
family, certificate verification, convergence-rate sweeps, and the shared
CSV schema (experiment,query,activation,m,k,n,delta,value,seconds)."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .activations import (
    ACTIVATION_NAMES,
    ActivationSpec,
    convergence_bound,
    get_activation,
    get_step_params,
    iterate,
    plateau_grid,
    required_composition_depth,
    sigma_star,
    size_closed_forms,
    verify_step_like,
    flat_tanh_constants,
    StepLikeReport,
)
from .compiler import GnnSpec, compile_formula
from .engine import forward_outputs
from .formulas import Formula, parse
from .graphs import TreeParams, make_tree

__all__ = [
    "CSV_HEADER",
    "ResultRow",
    "ExperimentConfig",
    "BoundViolation",
    "rows_to_csv",
    "load_query",
    "Q1_TEXT",
    "Q2_TEXT",
    "tree_pair",
    "run_separation",
    "run_saturation",
    "check_saturation_decay",
    "run_convergence",
    "check_convergence_rows",
    "run_steplike_verify",
    "required_m_report",
]

CSV_HEADER = "experiment,query,activation,m,k,n,delta,value,seconds"

Q1_TEXT = "not (dia>=1 (not (dia>=2 top)))"
Q2_TEXT = "(C1 and dia>=1 ((dia>=1 C2) and (dia>=1 C1)))"

_STEP_LIKE_NAMES = (
    "step-arctan",
    "step-tanh",
    "steplike-tanh-eta0",
    "steplike-sigmoid-eta0",
)


class BoundViolation(AssertionError):
    """A sweep row broke the bound that governs it."""


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    query: str
    activation: str
    m: int
    k: int
    n: int
    delta: int
    value: float
    seconds: float = 0.0

    def to_csv(self) -> str:
        return (
            f"{self.experiment},{self.query},{self.activation},{self.m},"
            f"{self.k},{self.n},{self.delta},{float(self.value)!r},{self.seconds:.6f}"
        )


@dataclass(frozen=True)
class ExperimentConfig:
    query: str = "q1"
    activation: str = "arctan-4pi"
    m_values: tuple[int, ...] = (4, 8, 12)
    k_values: tuple[int, ...] = tuple(range(2, 65))
    palette: int | None = None
    delta_cap: int | None = None
    timings: bool = False

    def __post_init__(self):
        if not self.m_values or not self.k_values:
            raise ValueError("sweeps must be non-empty")
        if self.activation not in ACTIVATION_NAMES:
            raise ValueError(f"unknown activation {self.activation!r}")
        params = get_step_params(self.activation)
        if params is not None and min(self.m_values) < params.burn_in:
            raise ValueError("composition depths below the activation's burn-in")


def rows_to_csv(rows) -> str:
    return "\n".join([CSV_HEADER] + [r.to_csv() for r in rows]) + "\n"


def load_query(name_or_text: str, palette: int | None = None) -> tuple[str, Formula, int, str]:
    """Resolve a query: the presets ``q1``/``q2`` or raw formula text.

    Returns (label, formula, palette, tree coloring).
    """
    if name_or_text.lower() == "q1":
        return "q1", parse(Q1_TEXT, 1), 1, "unicolor"
    if name_or_text.lower() == "q2":
        return "q2", parse(Q2_TEXT, 2), 2, "leaves-blue"
    palette = palette or 1
    formula = parse(name_or_text, palette)
    coloring = "unicolor" if palette == 1 else "leaves-blue"
    return name_or_text, formula, palette, coloring


def tree_pair(k: int, coloring: str):
    """The sweep's input pair: the k-ary tree with zero and with one leaf
    under the first internal vertex (both with m = k internal vertices)."""
    t0, r0 = make_tree(TreeParams(0, k, k), coloring)
    t1, r1 = make_tree(TreeParams(1, k, k), coloring)
    return (t0, r0), (t1, r1)


def _root_gap(spec: GnnSpec, act: ActivationSpec, pair) -> float:
    (t0, r0), (t1, r1) = pair
    out0 = forward_outputs(spec, t0, act)
    out1 = forward_outputs(spec, t1, act)
    return abs(float(out1[r1]) - float(out0[r0]))


def run_separation(cfg: ExperimentConfig) -> list[ResultRow]:
    """Gap between the two tree roots per (m, k), for the configured
    activation, with exact-threshold and clipped-relu baselines."""
    label, formula, palette, coloring = load_query(cfg.query, cfg.palette)
    spec = compile_formula(formula, palette)
    rows: list[ResultRow] = []
    for k in cfg.k_values:
        pair = tree_pair(k, coloring)
        n = pair[1][0].n
        delta = max(pair[0][0].max_degree, pair[1][0].max_degree)
        if cfg.delta_cap is not None and delta > cfg.delta_cap:
            continue
        for base_name in ("sigma-star", "crelu"):
            t0 = time.perf_counter()
            gap = _root_gap(spec, ActivationSpec(base_name, 1), pair)
            secs = time.perf_counter() - t0 if cfg.timings else 0.0
            rows.append(ResultRow("separation", label, base_name, 1, k, n, delta, gap, secs))
        for m in cfg.m_values:
            t0 = time.perf_counter()
            gap = _root_gap(spec, ActivationSpec(cfg.activation, m), pair)
            secs = time.perf_counter() - t0 if cfg.timings else 0.0
            rows.append(ResultRow("separation", label, cfg.activation, m, k, n, delta, gap, secs))
    return rows


def run_saturation(cfg: ExperimentConfig) -> list[ResultRow]:
    """Gap decay of a fixed bounded-activation network as the trees grow,
    with the clipped-relu control pinned at its exact value."""
    label, formula, palette, coloring = load_query(cfg.query, cfg.palette)
    spec = compile_formula(formula, palette)
    m = cfg.m_values[0]
    rows: list[ResultRow] = []
    for k in cfg.k_values:
        pair = tree_pair(k, coloring)
        n = pair[1][0].n
        delta = max(pair[0][0].max_degree, pair[1][0].max_degree)
        t0 = time.perf_counter()
        gap = _root_gap(spec, ActivationSpec(cfg.activation, m), pair)
        secs = time.perf_counter() - t0 if cfg.timings else 0.0
        rows.append(ResultRow("saturation", label, cfg.activation, m, k, n, delta, gap, secs))
        t0 = time.perf_counter()
        control = _root_gap(spec, ActivationSpec("crelu", 1), pair)
        secs = time.perf_counter() - t0 if cfg.timings else 0.0
        rows.append(ResultRow("saturation", label, "crelu", 1, k, n, delta, control, secs))
    return rows


def check_saturation_decay(rows) -> tuple[float, float]:
    """Assert the configured activation's gap shrinks from the smallest to
    the largest tree; returns (first gap, last gap)."""
    swept = [r for r in rows if r.activation not in ("crelu", "sigma-star")]
    if len(swept) < 2:
        raise ValueError("need at least two sweep points")
    first, last = swept[0], swept[-1]
    if not last.value < first.value:
        raise BoundViolation(
            f"no saturation decay: gap(k={last.k}) = {last.value} "
            f">= gap(k={first.k}) = {first.value}"
        )
    return first.value, last.value


def run_convergence(
    name: str,
    m_lo: int | None = None,
    m_hi: int | None = None,
    collar_points: int = 100_001,
) -> list[ResultRow]:
    """Worst observed |sigma^m - threshold| over the plateau collar next to
    the certified bound, one observed row and one bound row per m."""
    params = get_step_params(name)
    if params is None:
        raise ValueError(f"{name!r} carries no step-like certificate")
    act = get_activation(name)
    m_lo = params.burn_in if m_lo is None else m_lo
    m_hi = params.burn_in + 20 if m_hi is None else m_hi
    if m_lo < params.burn_in:
        raise ValueError("m range starts below the burn-in count")
    grid = plateau_grid(params.eps, collar_points)
    target = sigma_star(grid)
    rows: list[ResultRow] = []
    values = iterate(act, m_lo, grid)
    for m in range(m_lo, m_hi + 1):
        observed = float(np.abs(values - target).max())
        bound = convergence_bound(params, m)
        rows.append(ResultRow("convergence", "-", name, m, 0, grid.size, 0, observed))
        rows.append(ResultRow("convergence-bound", "-", name, m, 0, grid.size, 0, bound))
        values = act.fn(values)
    return rows


def check_convergence_rows(rows, tol: float = 1e-12) -> None:
    """Assert every observed row stays within its paired bound row."""
    bounds = {
        (r.activation, r.m): r.value for r in rows if r.experiment == "convergence-bound"
    }
    for r in rows:
        if r.experiment != "convergence":
            continue
        bound = bounds.get((r.activation, r.m))
        if bound is None:
            raise ValueError(f"no bound row for {r.activation} at m={r.m}")
        if r.value > bound + tol:
            raise BoundViolation(
                f"{r.activation} at m={r.m}: observed {r.value} exceeds bound {bound}"
            )


def run_steplike_verify(names=None, tol: float = 1e-9) -> list[StepLikeReport]:
    names = tuple(names) if names else _STEP_LIKE_NAMES
    reports = []
    for name in names:
        params = get_step_params(name)
        if params is None:
            raise ValueError(f"{name!r} carries no step-like certificate")
        reports.append(verify_step_like(get_activation(name), params, tol=tol))
    return reports


def required_m_report(name: str, max_degree: int) -> dict:
    params = get_step_params(name)
    if params is None:
        raise ValueError(f"{name!r} carries no step-like certificate")
    scanned = required_composition_depth(params, max_degree)
    report = {
        "activation": name,
        "max_degree": max_degree,
        "scanned_m": scanned,
        "closed_forms": size_closed_forms(params, max_degree),
        "params": params,
    }
    if name in ("steplike-tanh-eta0", "steplike-sigmoid-eta0"):
        a, alpha = flat_tanh_constants()
        report["flat_constants"] = (a, alpha)
    return report
