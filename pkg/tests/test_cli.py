"""Front-end behavior: schemas, determinism, exit codes, config merging."""

from __future__ import annotations

import json

import numpy as np
import pytest

from iongauge.cli import main
from iongauge.transport import loop_holonomy
from iongauge.tripod import LoopSpec


def read_csv(path):
    """Return (header_comment_lines, column_names, data_rows_as_floats)."""
    comments, columns, rows = [], None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                comments.append(line)
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append([float(x) for x in line.split(",")])
    return comments, columns, rows


def sweep_args(out, **overrides):
    base = {
        "alpha_min": 1.0,
        "alpha_max": 7.0,
        "alpha_count": 3,
        "beta_min": 0.0,
        "beta_max": 0.5,
        "beta_count": 3,
        "steps": 1001,
    }
    base.update(overrides)
    argv = ["sweep", "--out", str(out)]
    for key, val in base.items():
        argv += ["--" + key.replace("_", "-"), str(val)]
    return argv


def test_sweep_schema_and_reference_row(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(sweep_args(out)) == 0
    comments, columns, rows = read_csv(out)
    assert columns == [
        "alpha", "beta", "P", "P_prime", "P_d", "u1_defect", "u2_defect", "converged",
    ]
    assert len(rows) == 9
    assert comments[0].startswith("# iongauge ")
    assert "# command = sweep" in comments
    assert "# steps = 1001" in comments
    by_point = {(r[0], r[1]): r for r in rows}
    # identical loops: no order dependence at all
    assert abs(by_point[(1.0, 0.0)][4]) <= 1e-9
    # every row converged at this resolution
    assert all(r[7] == 1.0 for r in rows)
    # grid is row-major: alpha varies slowest
    assert [r[0] for r in rows[:3]] == [1.0, 1.0, 1.0]


def test_sweep_single_cell(tmp_path):
    out = tmp_path / "one.csv"
    assert main(
        sweep_args(out, alpha_min=7.0, alpha_max=7.0, alpha_count=1,
                   beta_min=0.5, beta_max=0.5, beta_count=1)
    ) == 0
    _, _, rows = read_csv(out)
    assert len(rows) == 1
    assert rows[0][4] == pytest.approx(0.4294, abs=0.01)


def test_sweep_is_byte_deterministic(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(sweep_args(a)) == 0
    assert main(sweep_args(b)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_matches_linecut(tmp_path):
    sweep_out = tmp_path / "sweep.csv"
    cut_out = tmp_path / "cut.csv"
    assert main(
        sweep_args(sweep_out, alpha_min=7.0, alpha_max=7.0, alpha_count=1)
    ) == 0
    assert main(
        [
            "linecut", "--alpha", "7", "--beta-min", "0", "--beta-max", "0.5",
            "--beta-count", "3", "--steps", "1001", "--out", str(cut_out),
        ]
    ) == 0
    _, _, sweep_rows = read_csv(sweep_out)
    _, cut_cols, cut_rows = read_csv(cut_out)
    assert cut_cols == ["beta", "P", "P_prime", "P_d"]
    for srow, crow in zip(sweep_rows, cut_rows):
        assert srow[1] == crow[0]
        for j in range(3):
            assert abs(srow[2 + j] - crow[1 + j]) <= 1e-12


def test_linecut_reversed_swaps_columns(tmp_path):
    normal = tmp_path / "n.csv"
    rev = tmp_path / "r.csv"
    args = [
        "linecut", "--alpha", "7", "--beta-min", "0.2", "--beta-max", "0.8",
        "--beta-count", "4", "--steps", "1001",
    ]
    assert main(args + ["--out", str(normal)]) == 0
    assert main(args + ["--order", "reversed", "--out", str(rev)]) == 0
    _, _, rows_n = read_csv(normal)
    _, _, rows_r = read_csv(rev)
    for rn, rr in zip(rows_n, rows_r):
        assert rn[1] == rr[2]  # P <-> P_prime exactly
        assert rn[2] == rr[1]
        assert rn[3] == -rr[3]


def test_adiabatic_outputs(tmp_path):
    out = tmp_path / "dyn.csv"
    argv = [
        "adiabatic", "--omega0", "5", "--tau", "1", "--alpha", "2",
        "--beta", "0.5", "--dt", "2e-4", "--steps", "1001", "--out", str(out),
    ]
    assert main(argv) == 0
    comments, columns, rows = read_csv(out)
    assert columns == ["t", "P_D1", "P_D2", "P_B1", "P_B2", "norm"]
    assert rows[0][0] == -1.0
    assert rows[-1][0] == 3.0
    assert rows[0][2] == pytest.approx(1.0, abs=1e-12)  # starts in |D2>
    norms = np.array([r[5] for r in rows])
    assert np.max(np.abs(norms - 1.0)) <= 1e-7

    summary = json.loads((tmp_path / "dyn.json").read_text())
    for key in (
        "P_B_max", "fidelity", "P_full", "P_holonomy", "final_populations",
        "norm_drift", "dt", "integration_steps", "wall_time_s", "version",
    ):
        assert key in summary
    assert 0.0 <= summary["P_B_max"] <= 1.0
    assert 0.0 <= summary["fidelity"] <= 1.0
    assert summary["integration_steps"] == 20000
    pops = summary["final_populations"]
    assert sum(pops.values()) == pytest.approx(1.0, abs=1e-7)


def test_adiabatic_step_size_failure_exit_code(tmp_path):
    out = tmp_path / "bad.csv"
    argv = [
        "adiabatic", "--omega0", "50", "--tau", "1", "--alpha", "2",
        "--beta", "0.5", "--dt", "0.05", "--out", str(out),
    ]
    assert main(argv) == 3


def test_nmr_report(tmp_path):
    out = tmp_path / "nmr.json"
    assert main(["nmr", "--steps", "2001", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["connection_fd_residual"] <= 1e-6
    assert report["connection_block_residual"] <= 1e-12
    assert report["fixed_theta_commutator"] <= 1e-12
    assert report["fixed_theta_transport_residual"] <= 1e-8
    assert report["varying_loops_commutator"] > 1e-3
    assert report["degeneracy"]["low_multiplicity"] == 2
    assert report["degeneracy"]["high_multiplicity"] == 2
    assert report["degeneracy"]["high"] == pytest.approx(
        9.0 * report["degeneracy"]["low"], rel=1e-10
    )


def test_holonomy_dump_matches_library(tmp_path):
    out = tmp_path / "h.json"
    assert main(
        ["holonomy", "--alpha", "7", "--beta", "0.5", "--steps", "2001",
         "--out", str(out)]
    ) == 0
    dump = json.loads(out.read_text())
    u = loop_holonomy(LoopSpec(alpha=7.0, beta=0.5), steps=2001).matrix
    for i in range(2):
        for j in range(2):
            assert dump[f"u_{i}{j}_re"] == pytest.approx(u[i, j].real, abs=1e-15)
            assert dump[f"u_{i}{j}_im"] == pytest.approx(u[i, j].imag, abs=1e-15)
    assert dump["converged"] is True


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "alpha_min = 7\nalpha_max = 7\nalpha_count = 2\n"
        "beta_min = 0.5\nbeta_max = 0.5\nbeta_count = 1\n"
        "steps = 1001  # comment after value\n",
        encoding="utf-8",
    )
    out = tmp_path / "cfg.csv"
    assert main(
        ["sweep", "--config", str(cfg), "--alpha-count", "1", "--out", str(out)]
    ) == 0
    comments, _, rows = read_csv(out)
    assert len(rows) == 1  # flag override beat the file's count of 2
    assert "# alpha_count = 1" in comments
    assert "# steps = 1001" in comments


def test_unknown_config_key_is_rejected(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("alpa_min = 1\n", encoding="utf-8")
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 2


def test_malformed_config_line_is_rejected(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("steps 1001\n", encoding="utf-8")
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 2


def test_invalid_parameters_exit_2(tmp_path):
    out = str(tmp_path / "x.csv")
    assert main(sweep_args(out, steps=500)) == 2  # too coarse for a sweep
    assert main(sweep_args(out, alpha_min=5.0, alpha_max=1.0)) == 2
    assert main(sweep_args(out, beta_count=0)) == 2
    assert main(["linecut", "--order", "sideways", "--out", out]) == 2
    assert main(["nope"]) == 2


def test_unwritable_output_exits_4(tmp_path):
    target = tmp_path / "no_such_dir" / "out.csv"
    assert main(sweep_args(target, alpha_count=1, beta_count=1)) == 4


def test_version_flag():
    assert main(["--version"]) == 0
