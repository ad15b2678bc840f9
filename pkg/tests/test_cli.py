from __future__ import annotations

import json
import math

import pytest

from fermatfe.cli import main, parse_radii
from fermatfe.store import StoreRepository, get_engine, get_session

SCALED_EXP = '{"kind": "Thm2_scaledExp", "n": 3, "alpha": 3}'


def _run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_lattice_info(capsys):
    code, out, _ = _run(capsys, "lattice-info")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == 1
    assert payload["omega1"][0] == pytest.approx(3.05990, abs=1e-5)
    assert payload["omega1"][1] == 0.0
    assert payload["e1"] == pytest.approx(4.0 ** (-1.0 / 3.0))
    assert len(payload["zeros"]) == 2


def test_family_list(capsys):
    code, out, _ = _run(capsys, "family", "list")
    assert code == 0
    families = json.loads(out)["families"]
    assert len(families) == 14
    kinds = [family["kind"] for family in families]
    assert "Example4" in kinds and "Thm2A" in kinds
    assert all(family["description"] for family in families)


def test_family_gen_prints_expressions(capsys):
    code, out, _ = _run(capsys, "family", "gen", "--spec", SCALED_EXP)
    assert code == 0
    payload = json.loads(out)
    assert payload["family"] == "Thm2_scaledExp"
    assert payload["mode"]["kind"] == "ode"
    assert "exp" in payload["f"]
    assert payload["config"]["n"] == 3


def test_verify_passes(capsys):
    code, out, _ = _run(capsys, "verify", "--spec", SCALED_EXP)
    assert code == 0
    payload = json.loads(out)
    assert payload["command"] == "verify"
    assert payload["pass"] is True
    assert payload["samples"] == 500


def test_degenerate_parameters_are_a_usage_error(capsys):
    spec = json.dumps({"kind": "DiffTrivial", "n": 2, "alpha": 1, "c": [0, math.pi]})
    code, out, err = _run(capsys, "verify", "--spec", spec)
    assert code == 2
    assert out == ""
    assert "error" in err


def test_unknown_flag_is_a_usage_error(capsys):
    code, _, _ = _run(capsys, "verify", "--spec", SCALED_EXP, "--colour", "red")
    assert code == 2


def test_missing_spec_file_is_a_usage_error(capsys, tmp_path):
    code, _, err = _run(capsys, "verify", "--spec", str(tmp_path / "absent.json"))
    assert code == 2
    assert "error" in err


def test_shift_identity_with_a_lattice_period_fails(capsys, lattice):
    period = repr(lattice.omega1.real)
    code, out, _ = _run(capsys, "eq6", "--h", "z", "--c", period)
    assert code == 1
    assert json.loads(out)["pass"] is False


def test_rearrangement_identity_passes_on_a_disc(capsys):
    code, out, _ = _run(
        capsys,
        "eq7",
        "--h",
        "(exp z)",
        "--alpha",
        "2",
        "--rmin",
        "0",
        "--rmax",
        "2",
        "--tol",
        "1e-8",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["pass"] is True
    assert payload["parameters"]["h"] == "(exp z)"


def test_repeated_runs_are_byte_identical(capsys):
    first = _run(capsys, "verify", "--spec", SCALED_EXP, "--seed", "11")
    second = _run(capsys, "verify", "--spec", SCALED_EXP, "--seed", "11")
    assert first == second


def test_nevanlinna_csv_for_the_exponential(capsys):
    code, out, _ = _run(capsys, "nevanlinna", "--fn", "exp", "--radii", "20,50,100")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "r,m,N,T"
    assert len(lines) == 4
    r, m, n, t = (float(v) for v in lines[1].split(","))
    assert r == 20.0 and n == 0.0
    assert m == pytest.approx(20.0 / math.pi, rel=1e-6)
    assert t == m


def test_nevanlinna_json_echoes_the_config(capsys):
    code, out, _ = _run(
        capsys, "nevanlinna", "--fn", "exp", "--radii", "10,20", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["fn"] == "exp"
    assert len(payload["records"]) == 2
    assert payload["config"]["quad_order"] == 64


def test_expression_without_known_poles_is_a_usage_error(capsys):
    code, _, err = _run(capsys, "nevanlinna", "--fn", "(pow z -1)", "--radii", "1,2")
    assert code == 2
    assert "error" in err


def test_db_flag_records_runs(capsys, tmp_path):
    db_path = tmp_path / "runs.db"
    assert main(["--db", str(db_path), "verify", "--spec", SCALED_EXP]) == 0
    assert main(["--db", str(db_path), "nevanlinna", "--fn", "exp", "--radii", "5,10"]) == 0
    capsys.readouterr()
    with get_session(get_engine(db_path)) as session:
        repo = StoreRepository(session)
        runs = repo.list_verification_runs()
        assert len(runs) == 1 and runs[0].passed
        growth = repo.list_growth_runs()
        assert len(growth) == 1
        assert [point.r for point in growth[0].points] == [5.0, 10.0]


def test_parse_radii_forms():
    assert parse_radii("1,2.5,4") == (1.0, 2.5, 4.0)
    assert parse_radii("1:3:3") == (1.0, 2.0, 3.0)


def test_order_of_the_exponential(capsys):
    code, out, _ = _run(capsys, "order", "--fn", "exp")
    assert code == 0
    payload = json.loads(out)
    assert payload["rho"] == pytest.approx(1.0, abs=0.03)
    assert len(payload["records"]) == 20
