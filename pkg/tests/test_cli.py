import json
import math
import subprocess
import sys

import pytest

from fkinetic.cli import (
    COLUMNS,
    EXIT_IO,
    EXIT_OK,
    EXIT_VALIDATION,
    EXIT_VERIFY_FAILED,
    SweepSpec,
    emit,
    emit_grid,
    main,
    parse_csv,
    run_grid,
    run_solve,
    run_verify,
)
from fkinetic.closed_form import GammaMode
from fkinetic.errors import OutputError, ValidationError
from fkinetic.oracle import OracleConfig
from fkinetic.problem import Variant
from fkinetic.srivastava import make_poly

CUBIC = make_poly(3, 1, [1, 1, 1, 1])


@pytest.fixture
def cubic_file(tmp_path):
    path = tmp_path / "cubic.json"
    path.write_text(json.dumps({"w": 3, "p": 1, "coefficients": [1, 1, 1, 1]}))
    return str(path)


def spec(**kw):
    base = dict(
        t_start=0.0, t_end=4.0, t_steps=21, alphas=(0.1, 0.5, 0.9, 1.3),
        variant=Variant.T1, n0=1.0, c=1.0, poly=CUBIC,
    )
    base.update(kw)
    return SweepSpec(**base)


def test_sweep_validation():
    with pytest.raises(ValidationError):
        spec(t_end=0.0)
    with pytest.raises(ValidationError):
        spec(alphas=())
    with pytest.raises(ValidationError):
        spec(alphas=(0.5, -1.0))
    with pytest.raises(ValidationError):
        spec(variant=Variant.T2)  # no d
    with pytest.raises(ValidationError):
        spec(t_steps=0)


def test_table_grid_rows():
    rows = run_solve(spec())
    assert len(rows) == 84
    assert [r["alpha"] for r in rows[::21]] == [0.1, 0.5, 0.9, 1.3]
    ts = [r["t"] for r in rows[:21]]
    assert ts[0] == 0.0 and ts[-1] == 4.0 and ts[3] == 0.6
    assert all(b > a for a, b in zip(ts, ts[1:]))
    assert tuple(rows[0]) == COLUMNS


def test_classical_rows():
    rows = run_solve(spec(t_end=1.0, t_steps=2, alphas=(1.0,), n0=3.0, c=2.0,
                          poly=make_poly(0, 1, [1])))
    assert [r["N"] for r in rows] == [3.0, pytest.approx(3 * math.exp(-2), rel=1e-14)]


def test_singular_cell_is_placeholder():
    rows = run_solve(spec(variant=Variant.T3, lam=0.5, alphas=(0.5,), t_steps=3))
    assert rows[0]["t"] == 0.0 and rows[0]["N"] is None
    assert all(isinstance(r["N"], float) for r in rows[1:])
    text = emit(rows, "csv", placeholder="NA").decode().splitlines()
    assert text[1].endswith(",0,NA")


def test_emit_csv_shape():
    rows = run_solve(spec(t_steps=2, alphas=(0.5,)))
    data = emit(rows, "csv")
    assert data.count(b"\n") == 3 and data.endswith(b"\n") and b"\r" not in data
    assert data.splitlines()[0] == b"variant,gamma_mode,alpha,lambda,c,d,t,N"
    assert emit([], "csv") == b"variant,gamma_mode,alpha,lambda,c,d,t,N\n"


def test_emit_full_precision():
    rows = run_solve(spec(t_steps=5, alphas=(0.9,)))
    parsed = parse_csv(emit(rows))
    assert [r["N"] for r in parsed] == [r["N"] for r in rows]
    assert [r["t"] for r in parsed] == [r["t"] for r in rows]


def test_csv_round_trip_is_byte_identical():
    rows = run_solve(spec(variant=Variant.T4, d=1.2, lam=0.4))
    first = emit(rows)
    assert emit(parse_csv(first)) == first


def test_emit_json():
    rows = run_solve(spec(variant=Variant.T3, lam=0.4, t_steps=2, alphas=(0.5,)))
    objs = json.loads(emit(rows, "json"))
    assert [set(o) for o in objs] == [set(COLUMNS)] * 2
    assert objs[0]["N"] == "nan" and isinstance(objs[1]["N"], float)
    assert objs[1]["N"] == rows[1]["N"]


def test_grid_shape_and_order():
    (g,) = run_grid(spec(variant=Variant.T4, d=1.2, lam=0.4))
    assert g.shape == (21, 4)
    rows = run_solve(spec(variant=Variant.T4, d=1.2, lam=0.4))
    for j in range(4):
        for i in range(21):
            assert g.values[i][j] == rows[21 * j + i]["N"]
    lines = emit_grid([g]).decode().splitlines()
    assert lines[0] == "t,alpha=0.1,alpha=0.5,alpha=0.9,alpha=1.3"
    assert len(lines) == 22 and lines[1] == "0,nan,nan,nan,nan"
    payload = json.loads(emit_grid([g], "json"))
    assert len(payload[0]["rows"]) == 21 and payload[0]["alphas"] == [0.1, 0.5, 0.9, 1.3]


def test_grid_two_modes():
    grids = run_grid(spec(gamma_modes=(GammaMode.DERIVED, GammaMode.LITERAL)))
    text = emit_grid(grids).decode()
    assert text.count("# gamma_mode=") == 2


def test_run_verify_cells():
    s = spec(t_end=2.0, alphas=(0.5, 0.9), poly=make_poly(2, 1, [1, 1, 1]),
             gamma_modes=(GammaMode.DERIVED, GammaMode.LITERAL))
    report = run_verify(s, OracleConfig.covering(2.0, 2.0**-9), tol=5e-3, workers=2)
    assert [(c.gamma_mode, c.alpha) for c in report.cells] == [
        ("derived", 0.5), ("derived", 0.9), ("literal", 0.5), ("literal", 0.9)
    ]
    assert [c.passed for c in report.cells] == [True, True, False, False]
    assert not report.passed


def test_verify_parallel_matches_serial():
    s = spec(t_end=1.0, alphas=(0.3, 0.7, 1.1))
    cfg = OracleConfig.covering(1.0, 2.0**-8)
    assert run_verify(s, cfg, workers=1) == run_verify(s, cfg, workers=3)


def test_main_solve_to_file(tmp_path, capsys):
    out = tmp_path / "n.csv"
    rc = main(["solve", "--alpha", "1", "--c", "2", "--n0", "3", "--t-start", "0",
               "--t-end", "1", "--t-steps", "2", "--out", str(out)])
    assert rc == EXIT_OK
    rows = parse_csv(out.read_bytes())
    assert [r["N"] for r in rows] == [3.0, pytest.approx(3 * math.exp(-2), rel=1e-14)]


def test_main_stdout(capsysbinary):
    assert main(["solve", "--t-steps", "3", "--format", "json"]) == EXIT_OK
    assert len(json.loads(capsysbinary.readouterr().out)) == 3


def test_main_verify_exit_codes(cubic_file, capsys):
    assert main(["verify", "--poly", cubic_file, "--alpha", "0.5", "--t-end", "2",
                 "--h", str(2.0**-9)]) == EXIT_OK
    rc = main(["verify", "--poly", cubic_file, "--alpha", "0.5", "--t-end", "2",
               "--h", str(2.0**-9), "--gamma-mode", "literal"])
    assert rc == EXIT_VERIFY_FAILED
    assert "verify failed" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--theorem", "2"],
        ["solve", "--theorem", "1", "--lambda", "0.3"],
        ["solve", "--alpha", "-1"],
        ["solve", "--t-start", "2", "--t-end", "1"],
        ["verify", "--h", "0.5"],
    ],
)
def test_main_validation_errors(argv, capsys):
    assert main(argv) == EXIT_VALIDATION
    assert "error" in capsys.readouterr().err


def test_main_bad_poly_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"w": 2, "p": 1, "coefficients": [1]}')
    assert main(["solve", "--poly", str(bad)]) == EXIT_VALIDATION
    assert main(["solve", "--poly", str(tmp_path / "missing.json")]) == EXIT_IO


def test_main_unwritable_output(tmp_path, capsys):
    target = tmp_path / "no" / "such" / "dir.csv"
    assert main(["solve", "--out", str(target)]) == EXIT_IO
    assert str(target) in capsys.readouterr().err


def test_output_error_carries_path():
    err = OutputError("/x/y.csv", "Permission denied")
    assert err.path == "/x/y.csv" and "/x/y.csv" in str(err)


def test_module_entry_point(cubic_file):
    proc = subprocess.run(
        [sys.executable, "-m", "fkinetic", "grid", "--table-grid", "--theorem", "3",
         "--poly", cubic_file, "--lambda", "0.4"],
        capture_output=True, check=False,
    )
    assert proc.returncode == 0
    assert len(proc.stdout.splitlines()) == 22
