"""Error-vs-N and error-vs-time sweeps over the five Sinc methods."""

from __future__ import annotations

import csv
import dataclasses
import io
import math
import statistics
import sys
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linear_system, solvers
from .errors import ParameterError
from .problem import VolterraProblem, get_problem
from .transforms import Kind, MeshParameters

__all__ = [
    "METHODS",
    "ExperimentRecord",
    "run_sweep",
    "emit_csv",
    "read_csv",
    "report_slopes",
    "theoretical_slope",
    "fit_slope",
]

# method -> transform kind
METHODS = {
    "se-nystrom": Kind.SE,
    "de-nystrom": Kind.DE,
    "se-colloc": Kind.SE,
    "rz-colloc": Kind.SE,
    "de-colloc": Kind.DE,
}

CSV_FIELDS = (
    "method", "problem", "N", "h", "max_error",
    "assemble_ms", "solve_ms", "eval_ms", "probe_points",
)


@dataclass(frozen=True)
class ExperimentRecord:
    method: str
    problem_id: str
    N: int
    h: float
    max_error: float
    assemble_ms: float
    solve_ms: float
    eval_ms: float
    probe_points: int
    failure: Optional[str] = None

    def row(self):
        return (self.method, self.problem_id, self.N, self.h, self.max_error,
                self.assemble_ms, self.solve_ms, self.eval_ms, self.probe_points)


def _with_overrides(problem: VolterraProblem, kind: Kind, d=None, alpha=None):
    if d is None and alpha is None:
        return problem
    old = problem.mesh(kind)
    mesh = MeshParameters(old.d if d is None else d, old.alpha if alpha is None else alpha)
    mesh.check(kind)
    field = "mesh_se" if kind is Kind.SE else "mesh_de"
    return dataclasses.replace(problem, **{field: mesh})


def _timed(fn, repeats):
    times, result = [], None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        times.append((time.perf_counter() - t0) * 1e3)
    return result, statistics.median(times)


def _run_one(method, kind, problem, N, probe, repeats):
    transform, grid = solvers.make_grid(problem, kind, N)
    if method == "rz-colloc":
        (A, g), t_asm = _timed(lambda: linear_system.assemble_rz(problem, transform, grid), repeats)
        sol, t_solve = _timed(lambda: solvers.rz_from_system(transform, grid, A, g), repeats)
    else:
        (A, g), t_asm = _timed(
            lambda: linear_system.assemble_nystrom(problem, transform, grid), repeats
        )
        if method.endswith("nystrom"):
            build = lambda: solvers.nystrom_from_system(problem, transform, grid, A, g)  # noqa: E731
        else:
            build = lambda: solvers.collocation_from_nystrom(  # noqa: E731
                solvers.nystrom_from_system(problem, transform, grid, A, g))
        sol, t_solve = _timed(build, repeats)
    values, t_eval = _timed(lambda: [sol(t) for t in probe], repeats)
    err = max(abs(v - problem.exact(t)) for v, t in zip(values, probe))
    return grid.h, err, t_asm, t_solve, t_eval


def run_sweep(method, problem_id, N_list, probe_points=2048, d_override=None,
              alpha_override=None, timed=False, problem=None):
    """Solve for every N and measure the max error on an equispaced probe grid.

    The probe grid includes both endpoints.  Each phase is timed once, or
    as the median of three repetitions when ``timed`` is set.  A solver
    failure produces a row with NaN error and ``failure`` set.
    """
    if method not in METHODS:
        raise ParameterError(f"unknown method {method!r}; choose from {sorted(METHODS)}")
    kind = METHODS[method]
    if problem is None:
        problem = get_problem(problem_id)
    if problem.exact is None:
        raise ParameterError(f"problem {problem_id!r} has no exact solution to compare with")
    problem = _with_overrides(problem, kind, d_override, alpha_override)
    N_list = list(N_list)
    if not N_list or any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ParameterError("N list must be nonempty and strictly increasing")
    if probe_points < 2:
        raise ParameterError("need at least 2 probe points")
    probe = np.linspace(problem.a, problem.b, probe_points).tolist()
    repeats = 3 if timed else 1

    records = []
    for N in N_list:
        try:
            h, err, t_asm, t_solve, t_eval = _run_one(method, kind, problem, N, probe, repeats)
            records.append(ExperimentRecord(method, problem_id, N, float(h), float(err),
                                            t_asm, t_solve, t_eval, probe_points))
        except ArithmeticError as exc:
            nan = math.nan
            records.append(ExperimentRecord(method, problem_id, N, nan, nan, nan, nan, nan,
                                            probe_points, failure=str(exc)))
    return sorted(records, key=lambda r: r.N)


def emit_csv(records, destination):
    """Write records as CSV to a path or text stream (LF line endings, UTF-8)."""
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    if isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__"):
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            _write(records, fh)
    else:
        _write(records, destination)


def _write(records, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in records:
        # repr of a float is the shortest string that round-trips.
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in r.row()])


def read_csv(source):
    """Inverse of :func:`emit_csv`; accepts a path or a text stream."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8", newline="") as fh:
            return _read(fh)
    return _read(source)


def _read(fh):
    reader = csv.DictReader(fh)
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for row in reader:
        out.append(ExperimentRecord(
            method=row["method"], problem_id=row["problem"], N=int(row["N"]),
            h=float(row["h"]), max_error=float(row["max_error"]),
            assemble_ms=float(row["assemble_ms"]), solve_ms=float(row["solve_ms"]),
            eval_ms=float(row["eval_ms"]), probe_points=int(row["probe_points"]),
        ))
    return out


def theoretical_slope(kind, mesh: MeshParameters) -> float:
    """-sqrt(pi d alpha) against sqrt(N) for SE; -pi d against N/log(2dN/alpha) for DE."""
    if Kind(kind) is Kind.SE:
        return -math.sqrt(math.pi * mesh.d * mesh.alpha)
    return -math.pi * mesh.d


def convergence_abscissa(kind, N, mesh: MeshParameters) -> float:
    if Kind(kind) is Kind.SE:
        return math.sqrt(N)
    return N / math.log(2 * mesh.d * N / mesh.alpha)


def fit_slope(xs, errors) -> float:
    """Least-squares slope of log(error) against ``xs``."""
    slope, _ = np.polyfit(np.asarray(xs, float), np.log(np.asarray(errors, float)), 1)
    return float(slope)


_FLOOR = 1e2 * sys.float_info.epsilon


def report_slopes(records, meshes=None) -> str:
    """Fitted vs theoretical convergence slopes and per-point evaluation cost.

    ``meshes`` maps ``(problem_id, kind)`` to :class:`MeshParameters`;
    missing entries are looked up from the problem registry.
    """
    meshes = dict(meshes or {})
    groups = {}
    for r in records:
        groups.setdefault((r.method, r.problem_id), []).append(r)

    lines = []
    fitted = 0
    for (method, pid), rows in sorted(groups.items()):
        if method not in METHODS:
            raise ParameterError(f"unknown method {method!r} in records")
        kind = METHODS[method]
        rows = [r for r in rows if math.isfinite(r.max_error) and r.max_error > _FLOOR]
        Ns = sorted({r.N for r in rows})
        if len(Ns) < 4:
            continue
        mesh = meshes.get((pid, kind)) or get_problem(pid).mesh(kind)
        rows.sort(key=lambda r: r.N)
        xs = [convergence_abscissa(kind, r.N, mesh) for r in rows]
        slope = fit_slope(xs, [r.max_error for r in rows])
        theory = theoretical_slope(kind, mesh)
        against = "sqrt(N)" if kind is Kind.SE else "N/log(2dN/alpha)"
        lines.append(
            f"{method:<11} {pid:<6} slope vs {against}: fitted {slope:.4f}  "
            f"theory {theory:.4f}  rel.dev {abs(slope - theory) / abs(theory):.1%}"
        )
        fitted += 1
    if not fitted:
        raise ParameterError("need at least 4 distinct N for some (method, problem)")

    lines.append("")
    lines.append("per-point evaluation cost (ms):")
    by_key = {(r.method, r.problem_id, r.N): r for r in records}
    pairs = [("se-nystrom", "se-colloc"), ("se-nystrom", "rz-colloc"), ("de-nystrom", "de-colloc")]
    header = len(lines)
    for nys, col in pairs:
        for (m, pid, N), r in sorted(by_key.items()):
            other = by_key.get((col, pid, N))
            if m != nys or other is None:
                continue
            a = r.eval_ms / r.probe_points
            b = other.eval_ms / other.probe_points
            ratio = a / b if b > 0 else math.inf
            lines.append(f"  {pid} N={N}: {nys} {a:.4g}  {col} {b:.4g}  speedup {ratio:.1f}x")
    if len(lines) == header:
        lines.append("  (no Nystrom/collocation pair at equal N in these records)")
    return "\n".join(lines)


def format_records(records) -> str:
    buf = io.StringIO()
    buf.write(f"{'method':<11} {'problem':<7} {'N':>4} {'h':>9} {'max_error':>10} "
              f"{'asm_ms':>8} {'solve_ms':>8} {'eval_ms':>9}\n")
    for r in records:
        buf.write(f"{r.method:<11} {r.problem_id:<7} {r.N:>4} {r.h:>9.5f} {r.max_error:>10.3e} "
                  f"{r.assemble_ms:>8.2f} {r.solve_ms:>8.2f} {r.eval_ms:>9.2f}\n")
    return buf.getvalue()
