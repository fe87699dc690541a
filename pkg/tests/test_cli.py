import json
import math
import subprocess
import sys

import numpy as np
import pytest

from cenfrac.cli import main

CONST_REF = 3.1052299527891131
RATIO_REF = 2.7519383938841089  # beta*pi/(beta*pi - sin(beta*pi)) at beta = 1/2


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(out):
    lines = [ln for ln in out.strip().splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    rows = [dict(zip(header, ln.split(","))) for ln in lines[1:]]
    return header, rows


def meta_of(out):
    meta = {}
    for ln in out.splitlines():
        if ln.startswith("# "):
            k, v = ln[2:].split("=", 1)
            meta[k] = v
    return meta


def test_solve_constant_value(capsys):
    code, out, _ = run_cli(
        ["solve", "--beta", "0.5", "--g", "const:1", "--T", "1", "--tol", "1e-10"],
        capsys,
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert float(rows[-1]["x"]) == 1.0
    assert float(rows[-1]["u"]) == pytest.approx(CONST_REF, rel=1e-8)


def test_derivative_monomial_table(capsys):
    code, out, _ = run_cli(
        ["derivative", "--beta", "0.5", "--monomial", "0.5", "--grid", "4"], capsys
    )
    assert code == 0
    _, rows = parse_csv(out)
    want = math.gamma(1.5) * (math.pi / 2 - 1) / (math.pi / 2)
    for row in rows:
        assert float(row["closed_form"]) == pytest.approx(want, rel=1e-10)
        assert float(row["D_beta"]) == pytest.approx(want, rel=1e-7)
        # ratio column is the proportionality constant C_(alpha, beta)
        assert float(row["ratio"]) == pytest.approx(1 - 2 / math.pi, rel=1e-7)


def test_derivative_constant_maps_to_zero(capsys):
    code, out, _ = run_cli(
        ["derivative", "--beta", "0.5", "--constant", "3", "--grid", "4"], capsys
    )
    assert code == 0
    _, rows = parse_csv(out)
    for row in rows:
        assert abs(float(row["D_beta"])) < 1e-10
        assert float(row["closed_form"]) == 0.0


def test_compare_caputo_ratio(capsys):
    code, out, _ = run_cli(
        ["compare-caputo", "--beta", "0.5", "--g", "const:1", "--grid", "5",
         "--tol", "1e-11"],
        capsys,
    )
    assert code == 0
    _, rows = parse_csv(out)
    for row in rows:
        assert float(row["ratio"]) == pytest.approx(RATIO_REF, rel=1e-9)


def test_eigen_table(capsys):
    code, out, _ = run_cli(
        ["eigen", "--beta", "0.5", "--lam", "0", "--u0", "2.5", "--grid", "3"],
        capsys,
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert all(float(r["u"]) == 2.5 for r in rows)


def test_nonlinear_linear_rhs(capsys):
    code, out, _ = run_cli(
        ["nonlinear", "--beta", "0.5", "--f", "linear:1", "--u0", "1",
         "--Y", "1", "--tol", "1e-8"],
        capsys,
    )
    assert code == 0
    meta = meta_of(out)
    t1 = float(meta["T1"])
    assert t1 == pytest.approx(0.02592701239531, rel=1e-9)
    # table values solve D u = u: compare against the eigen series
    from cenfrac import FracOrder, solve_eigen

    eig = solve_eigen(1.0, 1.0, FracOrder(0.5), t1, 1e-12)
    _, rows = parse_csv(out)
    for row in rows:
        assert float(row["u"]) == pytest.approx(
            float(eig(float(row["x"]))), abs=1e-6
        )


def test_lifetime_byte_identical(capsys):
    args = ["lifetime", "--beta", "0.5", "--x", "1", "--n", "2000",
            "--depth", "40", "--seed", "7"]
    code1, out1, _ = run_cli(args, capsys)
    code2, out2, _ = run_cli(args, capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    _, rows = parse_csv(out1)
    est = float(rows[0]["estimate"])
    se = float(rows[0]["stderr"])
    assert abs(est - CONST_REF) < 4 * se + float(rows[0]["tail_bound"])


def test_threads_do_not_change_output(capsys, monkeypatch):
    base = ["lifetime", "--x", "1", "--n", "3000", "--depth", "30", "--seed", "3"]
    _, out1, _ = run_cli(base, capsys)
    _, out4, _ = run_cli(base + ["--threads", "4"], capsys)
    assert out1 == out4
    # CENFRAC_THREADS provides the default worker count
    monkeypatch.setenv("CENFRAC_THREADS", "3")
    _, out_env, _ = run_cli(base, capsys)
    assert out_env == out1


def test_simulate_quick(capsys):
    code, out, _ = run_cli(
        ["simulate", "--x", "1", "--h", "2e-3", "--threshold", "1e-3",
         "--n", "1500", "--seed", "11"],
        capsys,
    )
    assert code == 0
    _, rows = parse_csv(out)
    est = float(rows[0]["mean_lifetime"])
    band = 4 * float(rows[0]["stderr"]) + float(rows[0]["bias_bound"])
    assert abs(est - CONST_REF) < band


def test_fk_quick(capsys):
    code, out, _ = run_cli(
        ["fk", "--g", "const:1", "--x", "1", "--h", "2e-3", "--n", "800",
         "--seed", "5"],
        capsys,
    )
    assert code == 0
    _, rows = parse_csv(out)
    est = float(rows[0]["estimate"])
    se = float(rows[0]["stderr"])
    ref = float(rows[0]["reference"])
    assert abs(est - ref) < 4 * se + 0.06 * ref


def test_json_output(capsys):
    code, out, _ = run_cli(
        ["solve", "--g", "const:1", "--output", "json", "--grid", "3"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["meta"]["command"] == "solve"
    assert payload["meta"]["beta"] == 0.5
    assert "version" in payload["meta"]
    assert len(payload["rows"]) == 3
    assert set(payload["rows"][0]) == {"x", "u"}


def test_usage_errors(capsys):
    code, _, err = run_cli(["solve", "--g", "nonsense:1"], capsys)
    assert code == 2
    assert err.startswith("ERROR[USAGE]:")
    code, _, err = run_cli(["solve", "--g", "table:/tmp/nope.csv"], capsys)
    assert code == 2
    code, _, err = run_cli(["eigen", "--lam", "1", "--beta", "1.5"], capsys)
    assert code == 1
    assert err.startswith("ERROR[DOMAIN]:")


def test_argparse_usage_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["derivative"])  # missing required --monomial/--constant
    assert exc.value.code == 2


def test_table_forcing_cli(tmp_path, capsys):
    path = tmp_path / "g.csv"
    xs = np.linspace(0.0, 1.0, 21)
    np.savetxt(path, np.column_stack([xs, np.ones_like(xs)]), delimiter=",")
    code, out, _ = run_cli(
        ["solve", "--g", f"table:{path}", "--env-M", "1.0", "--env-alpha", "0.5",
         "--tol", "1e-9"],
        capsys,
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert float(rows[-1]["u"]) == pytest.approx(CONST_REF, rel=1e-7)


def test_config_file_defaults_and_flag_wins(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("beta=0.3\ngrid=3\n# comment\n")
    code, out, _ = run_cli(
        ["derivative", "--monomial", "1.0", "--config", str(cfg)], capsys
    )
    assert code == 0
    assert meta_of(out)["beta"] == "0.29999999999999999"
    _, rows = parse_csv(out)
    assert len(rows) == 3
    # explicit flag beats the config value
    code, out, _ = run_cli(
        ["derivative", "--monomial", "1.0", "--config", str(cfg), "--beta", "0.5"],
        capsys,
    )
    assert meta_of(out)["beta"] == "0.5"
    code, _, err = run_cli(
        ["derivative", "--monomial", "1.0", "--config", str(tmp_path / "nope")],
        capsys,
    )
    assert code == 2


def test_verify_negative_control(capsys):
    code, out, _ = run_cli(
        ["verify", "--quick", "--tol-scale", "0"], capsys
    )
    assert code == 1
    report = json.loads(out)
    assert report["all_passed"] is False
    assert report["n_passed"] == 0


def test_verify_quick_passes(capsys):
    code, out, _ = run_cli(["verify", "--quick"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["all_passed"] is True
    assert report["n_checks"] >= 20


def test_verify_quick_beta_override(capsys):
    code, out, _ = run_cli(["verify", "--quick", "--beta", "0.3"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["beta"] == [0.3]


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cenfrac.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "0.1.0"
