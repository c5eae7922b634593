"""Refinement sweeps over a scenario's partition plan, CSV reporting, and
log-log convergence-rate fitting.

The CSV layout is versioned by a leading "#schema=1" comment line. Columns,
in order: N, mesh, sumsq, trace_distance, trace_bound, entropy,
entropy_gap, then for each basis index k (1-based) the block lambda_k,
gamma_k, eps_k, eps_bound_k, gamma_lb_k, a3_k. Floats are written with 17
significant digits so a parse reproduces the records bit for bit.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds import (
    dominating_operator,
    entropy_condition_report,
    leakage_upper_bound,
    mesh_condition,
    survival_lower_bound,
    trace_distance_bound,
    weight_error_bound,
)
from .curves import curve_bounds
from .errors import InvariantViolation, ValidationError
from .measurement import Partition, run_measurement, target_state
from .scenario import Scenario
from .states import FANNES_THRESHOLD, fannes_bound, von_neumann_entropy

THREADS_ENV = "ZENOLAB_THREADS"


@dataclass(frozen=True)
class SweepRecord:
    """One refinement step of a sweep: scalar diagnostics plus per-index blocks."""

    n: int = 0
    mesh: float = 0.0
    sumsq: float = 0.0
    trace_distance: float = 0.0
    trace_bound: float = 0.0
    entropy: float = 0.0
    entropy_gap: float = 0.0
    fannes_applicable: bool = False
    fannes_bound: float = 0.0
    lambdas: tuple = ()
    gammas: tuple = ()
    eps: tuple = ()
    eps_bounds: tuple = ()
    gamma_lbs: tuple = ()
    a3s: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.lambdas)


def record_column(record: SweepRecord, name: str) -> float:
    """Value of a CSV column on a record; per-index names are 1-based."""
    scalars = {
        "N": float(record.n),
        "mesh": record.mesh,
        "sumsq": record.sumsq,
        "trace_distance": record.trace_distance,
        "trace_bound": record.trace_bound,
        "entropy": record.entropy,
        "entropy_gap": record.entropy_gap,
    }
    if name in scalars:
        return scalars[name]
    blocks = {
        "lambda": record.lambdas,
        "gamma": record.gammas,
        "eps": record.eps,
        "eps_bound": record.eps_bounds,
        "gamma_lb": record.gamma_lbs,
        "a3": record.a3s,
    }
    stem, _, index = name.rpartition("_")
    if stem in blocks and index.isdigit():
        k = int(index)
        if 1 <= k <= len(blocks[stem]):
            return blocks[stem][k - 1]
    raise ValidationError(f"unknown column {name!r}")


def csv_columns(dim: int) -> list[str]:
    cols = ["N", "mesh", "sumsq", "trace_distance", "trace_bound", "entropy", "entropy_gap"]
    for k in range(1, dim + 1):
        cols += [f"lambda_{k}", f"gamma_{k}", f"eps_{k}", f"eps_bound_{k}", f"gamma_lb_{k}", f"a3_{k}"]
    return cols


def _sweep_one(scenario: Scenario, rho, hamiltonian, curve, xis, etas, weights, s_rho, partition: Partition) -> SweepRecord:
    label = f"{scenario.label} N={partition.n}"
    try:
        result = run_measurement(rho, hamiltonian, curve, partition)
    except InvariantViolation as exc:
        raise InvariantViolation(exc.name, scenario=label, **exc.details) from exc
    dim = scenario.dim

    drifts = np.array([curve.drift_sum(partition, k) for k in range(dim)])
    eps_bounds = np.array([leakage_upper_bound(xis[k], etas[k], partition) for k in range(dim)])
    gamma_lbs = np.array(
        [survival_lower_bound(xis[k], etas[k], scenario.a, partition, drifts[k]) for k in range(dim)]
    )
    bound = trace_distance_bound(weights, result.survivals)

    rho_tau = target_state(curve, weights, partition.tau)
    fannes = fannes_bound(result.rho_final, rho_tau)
    entropy = von_neumann_entropy(result.rho_final)
    gap = abs(entropy - s_rho)

    checks = set(scenario.checks)
    if "leakage_bound" in checks:
        for k in range(dim):
            if result.leakage[k] > eps_bounds[k] + 1e-9:
                raise InvariantViolation(
                    "leakage_bound", scenario=label, k=k + 1, leakage=float(result.leakage[k]), bound=float(eps_bounds[k])
                )
    if "survival_bounds" in checks:
        for k in range(dim):
            if not mesh_condition(xis[k], etas[k], scenario.a, partition.mesh):
                continue
            if not (gamma_lbs[k] <= result.survivals[k] <= 1.0 + 1e-12):
                raise InvariantViolation(
                    "survival_lower_bound", scenario=label, k=k + 1,
                    survival=float(result.survivals[k]), lower=float(gamma_lbs[k]),
                )
            err_bound = weight_error_bound(weights[k], xis[k], etas[k], scenario.a, partition, drifts[k])
            if abs(result.weights_out[k] - weights[k]) > err_bound + 1e-9:
                raise InvariantViolation(
                    "weight_error_bound", scenario=label, k=k + 1,
                    error=float(abs(result.weights_out[k] - weights[k])), bound=float(err_bound),
                )
    if "trace_bound" in checks and result.trace_distance_to_target > bound + 1e-9:
        raise InvariantViolation(
            "trace_distance_bound", scenario=label,
            distance=result.trace_distance_to_target, bound=bound,
        )
    if "fannes" in checks and fannes.applicable:
        gap_tau = abs(entropy - von_neumann_entropy(rho_tau))
        if gap_tau > fannes.bound + 1e-9:
            raise InvariantViolation("fannes_bound", scenario=label, gap=gap_tau, bound=fannes.bound)
    if "sigma" in checks and partition.sumsq < 0.5:
        sigma = dominating_operator(weights, xis, etas, curve, partition.tau)
        slack = float(np.min(np.linalg.eigvalsh(sigma - result.rho_final.matrix)))
        if slack < -1e-8:
            raise InvariantViolation("sigma_domination", scenario=label, min_eig=slack)
        report = entropy_condition_report(weights, xis, etas)
        if not report.dominator_entropy_ok:
            raise InvariantViolation("dominator_entropy", scenario=label)
    if "drift" in checks:
        for k in range(dim):
            limit = 0.5 * etas[k] ** 2 * partition.sumsq
            if abs(drifts[k]) > limit + 1e-9:
                raise InvariantViolation(
                    "drift_bound", scenario=label, k=k + 1, drift=float(drifts[k]), bound=float(limit)
                )

    return SweepRecord(
        n=partition.n,
        mesh=partition.mesh,
        sumsq=partition.sumsq,
        trace_distance=result.trace_distance_to_target,
        trace_bound=bound,
        entropy=entropy,
        entropy_gap=gap,
        fannes_applicable=fannes.applicable,
        fannes_bound=fannes.bound,
        lambdas=tuple(float(x) for x in result.weights_out),
        gammas=tuple(float(x) for x in result.survivals),
        eps=tuple(float(x) for x in result.leakage),
        eps_bounds=tuple(float(x) for x in eps_bounds),
        gamma_lbs=tuple(float(x) for x in gamma_lbs),
        a3s=tuple(float(x) for x in drifts),
    )


def run_sweep(scenario: Scenario) -> list[SweepRecord]:
    """One record per partition in the plan, ordered by step count.

    Deterministic for a fixed scenario, including any seeded pieces. The
    ZENOLAB_THREADS environment variable caps parallel workers; unset means
    serial execution. Records are ordered by N regardless of scheduling.
    """
    rho = scenario.state()
    hamiltonian = scenario.hamiltonian()
    curve = scenario.curve()
    bounds = curve_bounds(curve, hamiltonian)
    xis, etas = bounds.energy_sups, bounds.lipschitz
    weights = np.asarray(scenario.state_weights, dtype=float)
    s_rho = von_neumann_entropy(rho)
    partitions = sorted(scenario.partitions(), key=lambda p: p.n)

    def work(partition: Partition) -> SweepRecord:
        return _sweep_one(scenario, rho, hamiltonian, curve, xis, etas, weights, s_rho, partition)

    raw_workers = os.environ.get(THREADS_ENV, "1")
    try:
        workers = int(raw_workers)
    except ValueError:
        raise ValidationError(f"{THREADS_ENV} must be an integer, got {raw_workers!r}") from None
    if workers > 1 and len(partitions) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(work, partitions))
    else:
        records = [work(p) for p in partitions]
    return sorted(records, key=lambda r: r.n)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(records: list[SweepRecord], path: str):
    if not records:
        raise ValidationError("no records to write")
    dim = records[0].dim
    with open(path, "w", newline="") as fh:
        fh.write("#schema=1\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(csv_columns(dim))
        for rec in records:
            row = [str(rec.n)] + [_fmt(record_column(rec, c)) for c in csv_columns(dim)[1:]]
            writer.writerow(row)


def read_csv(path: str) -> list[SweepRecord]:
    """Parse a sweep CSV back into records.

    The two continuity-bound fields are exact functions of trace_distance
    and the dimension, so they are recomputed rather than stored; the result
    matches the in-memory originals bit for bit.
    """
    with open(path, newline="") as fh:
        first = fh.readline()
        if not first.startswith("#schema=1"):
            raise ValidationError(f"{path} does not carry the #schema=1 header")
        reader = csv.reader(fh)
        header = next(reader)
        per_k = [c for c in header if c.startswith("lambda_")]
        dim = len(per_k)
        if header != csv_columns(dim):
            raise ValidationError(f"{path} columns do not match schema 1 for dim {dim}")
        records = []
        for row in reader:
            values = dict(zip(header, row))
            t = float(values["trace_distance"])
            records.append(
                SweepRecord(
                    n=int(values["N"]),
                    mesh=float(values["mesh"]),
                    sumsq=float(values["sumsq"]),
                    trace_distance=t,
                    trace_bound=float(values["trace_bound"]),
                    entropy=float(values["entropy"]),
                    entropy_gap=float(values["entropy_gap"]),
                    fannes_applicable=t <= FANNES_THRESHOLD,
                    fannes_bound=float(t * math.log(dim) + (-t * math.log(t) if t > 0 else 0.0)),
                    lambdas=tuple(float(values[f"lambda_{k}"]) for k in range(1, dim + 1)),
                    gammas=tuple(float(values[f"gamma_{k}"]) for k in range(1, dim + 1)),
                    eps=tuple(float(values[f"eps_{k}"]) for k in range(1, dim + 1)),
                    eps_bounds=tuple(float(values[f"eps_bound_{k}"]) for k in range(1, dim + 1)),
                    gamma_lbs=tuple(float(values[f"gamma_lb_{k}"]) for k in range(1, dim + 1)),
                    a3s=tuple(float(values[f"a3_{k}"]) for k in range(1, dim + 1)),
                )
            )
    return records


@dataclass(frozen=True)
class RateFit:
    """Least-squares line through (ln N, ln value)."""

    slope: float
    intercept: float
    residual_norm: float
    points: int


def fit_loglog(ns, values) -> RateFit:
    n = np.asarray(ns, dtype=float)
    v = np.asarray(values, dtype=float)
    if n.shape[0] < 4:
        raise ValidationError(f"need at least 4 records to fit a rate, got {n.shape[0]}")
    if np.any(v <= 0):
        raise ValidationError("rate fitting requires strictly positive values")
    x, y = np.log(n), np.log(v)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.linalg.norm(y - (slope * x + intercept)))
    return RateFit(slope=float(slope), intercept=float(intercept), residual_norm=residual, points=n.shape[0])


def fit_rate(records: list[SweepRecord], column: str) -> RateFit:
    """Convergence rate of one column across a sweep, as a log-log slope."""
    return fit_loglog([r.n for r in records], [record_column(r, column) for r in records])
