import io
import math
import struct

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sinc_volterra import bench, cli, linear_system
from sinc_volterra.errors import ParameterError, SingularMatrixError
from sinc_volterra.bench import ExperimentRecord
from sinc_volterra.problem import make_problem


def bits(x):
    return struct.pack("<d", x)


def same_record(r, s):
    floats = ("h", "max_error", "assemble_ms", "solve_ms", "eval_ms")
    return (
        (r.method, r.problem_id, r.N, r.probe_points) == (s.method, s.problem_id, s.N, s.probe_points)
        and all(bits(getattr(r, f)) == bits(getattr(s, f)) for f in floats)
    )


finite = st.floats(allow_nan=False, allow_infinity=False)
records = st.builds(
    ExperimentRecord,
    method=st.sampled_from(sorted(bench.METHODS)),
    problem_id=st.text(st.characters(blacklist_categories=("Cs", "Cc")), min_size=1, max_size=12),
    N=st.integers(1, 10_000),
    h=finite,
    max_error=st.one_of(finite, st.just(math.nan), st.just(math.inf)),
    assemble_ms=finite,
    solve_ms=finite,
    eval_ms=finite,
    probe_points=st.integers(2, 100_000),
)


@settings(max_examples=200, deadline=None)
@given(st.lists(records, min_size=1, max_size=8))
def test_csv_round_trip_is_bit_exact(recs):
    buf = io.StringIO()
    bench.emit_csv(recs, buf)
    back = bench.read_csv(io.StringIO(buf.getvalue()))
    assert len(back) == len(recs)
    assert all(same_record(r, s) for r, s in zip(recs, back))


def test_csv_layout(tmp_path):
    rec = ExperimentRecord("se-colloc", "rz4", 4, 0.1, 1e-3, 1.0, 2.0, 3.0, 2048)
    path = tmp_path / "one.csv"
    bench.emit_csv([rec], path)
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert len(lines) == 2
    assert lines[0] == "method,problem,N,h,max_error,assemble_ms,solve_ms,eval_ms,probe_points"
    assert lines[1] == "se-colloc,rz4,4,0.1,0.001,1.0,2.0,3.0,2048"


def test_emit_csv_rejects_empty():
    with pytest.raises(ValueError):
        bench.emit_csv([], io.StringIO())


def test_read_csv_rejects_wrong_header():
    with pytest.raises(ValueError):
        bench.read_csv(io.StringIO("a,b\n1,2\n"))


@pytest.mark.parametrize("method", sorted(bench.METHODS))
def test_constant_problem_sweep(method):
    p = make_problem(0.0, 1.0, lambda t, s: 0.0, lambda t: 1.0, (3.14, 1.0), (1.57, 1.0),
                     exact=lambda t: 1.0)
    recs = bench.run_sweep(method, "const", [2, 5, 9], probe_points=257, problem=p)
    assert [r.N for r in recs] == [2, 5, 9]
    assert all(r.max_error <= 1e-13 for r in recs)


def test_zero_kernel_error_is_pure_approximation_error():
    g = lambda t: math.cos(3 * t) + t  # noqa: E731
    p = make_problem(0.0, 1.0, lambda t, s: 0.0, g, (3.14, 1.0), (1.57, 1.0), exact=g)
    # the Nystrom form reproduces g exactly; collocation only interpolates it
    (nys,) = bench.run_sweep("se-nystrom", "zk", [6], probe_points=129, problem=p)
    (col,) = bench.run_sweep("se-colloc", "zk", [6], probe_points=129, problem=p)
    assert nys.max_error <= 1e-15
    assert col.max_error > 1e-8


def test_record_fields_and_timings():
    recs = bench.run_sweep("rz-colloc", "rz4", [4, 9], probe_points=64)
    for r in recs:
        assert r.failure is None
        assert r.probe_points == 64
        assert r.max_error >= 0
        assert min(r.assemble_ms, r.solve_ms, r.eval_ms) >= 0


@pytest.mark.parametrize("method,problem,Ns", [
    ("se-colloc", "rz4", [4, 9, 16, 25, 36, 49, 64]),
    ("se-nystrom", "pm45", [4, 9, 16, 25, 36]),
    ("de-colloc", "rz4", [5, 10, 15, 20, 25]),
    ("rz-colloc", "pm45", [4, 9, 16, 25, 36]),
])
def test_max_error_non_increasing(method, problem, Ns):
    recs = bench.run_sweep(method, problem, Ns)
    errs = [r.max_error for r in recs if r.max_error > 1e2 * np.finfo(float).eps]
    assert all(b <= a for a, b in zip(errs, errs[1:])), errs


def test_se_colloc_sweep_frozen_threshold():
    recs = bench.run_sweep("se-colloc", "rz4", [4, 9, 16, 25, 36, 49, 64])
    assert recs[-1].max_error <= 1e-6


@pytest.mark.parametrize("kwargs", [
    dict(method="bogus", problem_id="rz4", N_list=[4]),
    dict(method="se-colloc", problem_id="rz4", N_list=[9, 4]),
    dict(method="se-colloc", problem_id="rz4", N_list=[4, 4]),
    dict(method="se-colloc", problem_id="rz4", N_list=[]),
    dict(method="se-colloc", problem_id="rz4", N_list=[4], probe_points=1),
    dict(method="de-colloc", problem_id="rz4", N_list=[4], d_override=2.0),
])
def test_run_sweep_parameter_errors(kwargs):
    with pytest.raises(ParameterError):
        bench.run_sweep(**kwargs)


def test_singular_solve_becomes_failed_row(monkeypatch):
    def boom(A):
        raise SingularMatrixError(0)

    monkeypatch.setattr(linear_system, "lu_factor", boom)
    (rec,) = bench.run_sweep("se-colloc", "rz4", [4], probe_points=8)
    assert rec.failure
    assert math.isnan(rec.max_error)


def test_report_slopes_prints_theory():
    recs = bench.run_sweep("se-colloc", "rz4", [4, 9, 16, 25, 36, 49, 64])
    recs += bench.run_sweep("de-colloc", "rz4", [5, 10, 15, 20, 25])
    text = bench.report_slopes(recs)
    assert "theory -3.1408" in text
    assert "theory -4.9323" in text


def test_theoretical_slopes():
    from sinc_volterra.transforms import MeshParameters
    assert bench.theoretical_slope("SE", MeshParameters(3.14, 1)) == pytest.approx(-3.14080, abs=1e-5)
    assert bench.theoretical_slope("SE", MeshParameters(3.14, 0.5)) == pytest.approx(-2.22087, abs=1e-5)
    assert bench.theoretical_slope("DE", MeshParameters(1.57, 1)) == pytest.approx(-4.93230, abs=1e-5)


def test_fit_slope_recovers_exponential():
    xs = np.arange(1.0, 8.0)
    assert bench.fit_slope(xs, 3.0 * np.exp(-2.5 * xs)) == pytest.approx(-2.5)


def test_report_slopes_needs_four_n():
    recs = bench.run_sweep("se-colloc", "rz4", [4, 9, 16], probe_points=64)
    with pytest.raises(ParameterError):
        bench.report_slopes(recs)


def test_report_slopes_compares_eval_cost():
    Ns = [4, 9, 16, 25]
    recs = bench.run_sweep("se-nystrom", "rz4", Ns, probe_points=64)
    recs += bench.run_sweep("se-colloc", "rz4", Ns, probe_points=64)
    text = bench.report_slopes(recs)
    assert "per-point evaluation cost" in text
    assert "rz4 N=25: se-nystrom" in text


# ---- CLI ----

def run(capsys, *argv):
    try:
        code = cli.main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_sweep_to_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--method", "se-colloc", "--problem", "rz4",
                       "--n-list", "4,9", "--probe-points", "33")
    assert code == 0
    back = bench.read_csv(io.StringIO(out))
    assert [r.N for r in back] == [4, 9]


def test_cli_sweep_then_slopes(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code, out, _ = run(capsys, "sweep", "--method", "se-colloc", "--problem", "pm45",
                       "--n-list", "4,9,16,25", "--probe-points", "129", "--out", str(path))
    assert code == 0 and "max_error" in out
    code, out, _ = run(capsys, "slopes", "--in", str(path))
    assert code == 0
    assert "theory -2.2209" in out
    code, out, _ = run(capsys, "slopes", "--in", str(path), "--alpha", "1.0")
    assert code == 0
    assert "theory -3.1408" in out


@pytest.mark.parametrize("argv", [
    ["sweep", "--method", "bogus", "--problem", "rz4", "--n-list", "4"],
    ["sweep", "--method", "se-colloc", "--problem", "nope", "--n-list", "4"],
    ["sweep", "--method", "se-colloc", "--problem", "rz4", "--n-list", "9,4"],
    ["sweep", "--method", "se-colloc", "--problem", "rz4", "--n-list", "x"],
    ["sweep", "--method", "se-colloc", "--problem", "rz4", "--n-list", "4", "--alpha", "2"],
    ["verify-theorem4", "--problem", "nope", "--n", "4"],
    ["verify-theorem4", "--problem", "rz4", "--n", "0"],
    ["frobnicate"],
    [],
])
def test_cli_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_cli_slopes_insufficient_data_exit_2(tmp_path, capsys):
    path = tmp_path / "s.csv"
    bench.emit_csv(bench.run_sweep("se-colloc", "rz4", [4, 9, 16], probe_points=16), path)
    code, _, _ = run(capsys, "slopes", "--in", str(path))
    assert code == 2


def test_cli_slopes_malformed_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("not,a,sweep\n")
    code, _, _ = run(capsys, "slopes", "--in", str(path))
    assert code == 2


def test_cli_slopes_missing_file_exit_1(tmp_path, capsys):
    code, _, err = run(capsys, "slopes", "--in", str(tmp_path / "absent.csv"))
    assert code == 1
    assert "cannot read" in err


def test_cli_unwritable_out_exit_1(tmp_path, capsys):
    code, _, _ = run(capsys, "sweep", "--method", "se-colloc", "--problem", "rz4",
                     "--n-list", "4", "--probe-points", "8", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 1


def test_cli_solver_failure_exit_1(monkeypatch, capsys):
    def boom(A):
        raise SingularMatrixError(3)

    monkeypatch.setattr(linear_system, "lu_factor", boom)
    code, out, err = run(capsys, "sweep", "--method", "de-nystrom", "--problem", "pm45",
                         "--n-list", "4,8", "--probe-points", "8")
    assert code == 1
    assert "solver failure" in err
    assert all(math.isnan(r.max_error) for r in bench.read_csv(io.StringIO(out)))


@pytest.mark.parametrize("problem", ["rz4", "pm45"])
def test_cli_verify_theorem4(capsys, problem):
    code, out, _ = run(capsys, "verify-theorem4", "--problem", problem, "--n", "8")
    assert code == 0
    assert "OK" in out


@settings(max_examples=25, deadline=None)
@given(st.text(max_size=10).filter(lambda s: s not in bench.METHODS))
def test_cli_any_unknown_method_exits_2(method):
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "--method", method, "--problem", "rz4", "--n-list", "4"])
    assert exc.value.code == 2


@pytest.mark.perf
@pytest.mark.parametrize("nys,col,N", [
    ("se-nystrom", "se-colloc", 36),
    ("se-nystrom", "rz-colloc", 36),
    ("de-nystrom", "de-colloc", 32),
])
def test_collocation_evaluates_faster(nys, col, N):
    (a,) = bench.run_sweep(nys, "rz4", [N], probe_points=512, timed=True)
    (b,) = bench.run_sweep(col, "rz4", [N], probe_points=512, timed=True)
    assert a.eval_ms >= 1.5 * b.eval_ms, (a.eval_ms, b.eval_ms)
