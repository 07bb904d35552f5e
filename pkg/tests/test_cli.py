import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from qollide import bath_from_csv, basis_ordering, thermal_hec_state
from qollide.cli import main, parse_n_range


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParseNRange:
    def test_colon_range(self):
        assert parse_n_range("4:64:4") == list(range(4, 65, 4))
        assert parse_n_range("2:10") == list(range(2, 11))

    def test_comma_list(self):
        assert parse_n_range("4,8,12") == [4, 8, 12]

    def test_single(self):
        assert parse_n_range("8") == [8]

    def test_bad_input(self):
        from qollide import ValidationError

        with pytest.raises(ValidationError):
            parse_n_range("4:2")
        with pytest.raises(ValidationError):
            parse_n_range("x:y")


class TestCoeffs:
    def test_dicke_values(self, capsys):
        code, out, _ = run(
            capsys, "coeffs", "--bath", "dicke", "--N", "8", "--k", "3"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["coefficients"]["r_e"] == 18.0
        assert payload["coefficients"]["r_d"] == 20.0
        assert payload["bath"] == {"kind": "dicke", "N": 8, "k": 3}

    def test_product_values(self, capsys):
        code, out, _ = run(
            capsys, "coeffs", "--bath", "product", "--N", "3", "--pe", "0.2"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["coefficients"]["r_e"] == pytest.approx(0.6)
        assert payload["coefficients"]["r_d"] == pytest.approx(2.4)

    def test_explicit_maximally_mixed(self, capsys, tmp_path):
        path = tmp_path / "rho.csv"
        rows = ["N=2,basis=excitation-sorted"]
        for i in range(4):
            rows.append(",".join("0.25+0j" if i == j else "0+0j" for j in range(4)))
        path.write_text("\n".join(rows) + "\n")
        code, out, _ = run(capsys, "coeffs", "--bath", "explicit", "--file", str(path))
        assert code == 0
        payload = json.loads(out)
        assert payload["coefficients"]["r_e"] == pytest.approx(1.0, abs=1e-12)
        assert payload["coefficients"]["r_d"] == pytest.approx(1.0, abs=1e-12)

    def test_missing_field_exit_2(self, capsys):
        code, _, err = run(capsys, "coeffs", "--bath", "dicke", "--N", "8")
        assert code == 2
        assert "k" in err

    def test_out_of_range_exit_2(self, capsys):
        code, _, err = run(
            capsys, "coeffs", "--bath", "product", "--N", "3", "--pe", "1.4"
        )
        assert code == 2
        assert "p_e" in err

    def test_config_file_with_flag_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bath = dicke\nN = 8\nk = 2  # overridden below\n")
        code, out, _ = run(capsys, "coeffs", "--config", str(cfg), "--k", "3")
        assert code == 0
        assert json.loads(out)["bath"]["k"] == 3

    def test_bad_config_line_exit_2(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bath dicke\n")
        code, _, err = run(capsys, "coeffs", "--config", str(cfg))
        assert code == 2
        assert "config" in err


class TestEvolve:
    def test_analytic_csv(self, capsys, tmp_path):
        out_path = tmp_path / "traj.csv"
        code, _, _ = run(
            capsys,
            "evolve",
            "--bath",
            "dicke",
            "--N",
            "4",
            "--k",
            "1",
            "--t-end",
            "0.5",
            "--n-points",
            "6",
            "--out",
            str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == "t,mu_t,rho_ee,rho_gg,re_rho_eg,im_rho_eg,temperature,entropy"
        assert len(lines) == 7
        last = [float(x) for x in lines[-1].split(",")]
        # t = 0.5, mu = 1: well past t_q = 0.1, close to steady 0.4
        assert last[2] == pytest.approx(0.4, abs=3e-3)

    def test_zero_grid_header_only(self, capsys, tmp_path):
        out_path = tmp_path / "traj.csv"
        code, _, _ = run(
            capsys,
            "evolve",
            "--bath",
            "dicke",
            "--N",
            "4",
            "--k",
            "1",
            "--t-end",
            "1.0",
            "--n-points",
            "0",
            "--out",
            str(out_path),
        )
        assert code == 0
        assert out_path.read_text() == (
            "t,mu_t,rho_ee,rho_gg,re_rho_eg,im_rho_eg,temperature,entropy\n"
        )

    def test_engines_agree(self, capsys, tmp_path):
        common = [
            "--bath", "dicke", "--N", "4", "--k", "1",
            "--g", "0.05", "--tau", "1.0", "--p", "400",
            "--t-end", "0.1", "--n-points", "5",
        ]
        paths = {}
        for engine, extra in (
            ("analytic", []),
            ("ode", ["--dt", "0.0001"]),
            ("collisions", ["--dt", "0.00005"]),
        ):
            path = tmp_path / f"{engine}.csv"
            code, _, _ = run(
                capsys, "evolve", "--engine", engine, *common, *extra,
                "--out", str(path),
            )
            assert code == 0
            rows = [
                [float(x) for x in line.split(",")]
                for line in path.read_text().splitlines()[1:]
            ]
            paths[engine] = np.array(rows)
        np.testing.assert_allclose(
            paths["analytic"][:, 2], paths["ode"][:, 2], atol=1e-6
        )
        np.testing.assert_allclose(
            paths["analytic"][:, 2], paths["collisions"][:, 2], atol=1e-2
        )

    def test_stochastic_seeded_reruns_identical(self, capsys, tmp_path):
        args = [
            "evolve", "--engine", "collisions", "--scheme", "stochastic",
            "--seed", "7", "--trajectories", "50",
            "--bath", "dicke", "--N", "3", "--k", "1",
            "--t-end", "0.02", "--dt", "0.0001", "--n-points", "4",
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(capsys, *args, "--out", str(a))[0] == 0
        assert run(capsys, *args, "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_byte_identical_reruns(self, capsys, tmp_path):
        args = [
            "evolve", "--bath", "thermal-hec", "--N", "3", "--nbar", "1.0",
            "--t-end", "0.3", "--n-points", "20",
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(capsys, *args, "--out", str(a))[0] == 0
        assert run(capsys, *args, "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()
        assert b"\r" not in a.read_bytes()


class TestSweep:
    def test_product_slope_json(self, capsys, tmp_path):
        csv_path = tmp_path / "sweep.csv"
        slopes_path = tmp_path / "slopes.json"
        code, _, _ = run(
            capsys,
            "sweep",
            "--family",
            "product",
            "--pe",
            "0.2",
            "--N",
            "2:32:2",
            "--out",
            str(csv_path),
            "--slopes-out",
            str(slopes_path),
        )
        assert code == 0
        slopes = json.loads(slopes_path.read_text())
        assert slopes["slope_t_q"] == pytest.approx(-1.0, abs=0.01)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "N,k,r_e,r_d,t_q,T_q"
        assert len(lines) == 17

    def test_thermal_hec_temperature_constant(self, capsys, tmp_path):
        csv_path = tmp_path / "sweep.csv"
        code, out, _ = run(
            capsys, "sweep", "--family", "thermal-hec", "--nbar", "1",
            "--N", "2:10", "--out", str(csv_path),
        )
        assert code == 0
        temps = {line.split(",")[5] for line in csv_path.read_text().splitlines()[1:]}
        assert len(temps) == 1  # byte-identical temperature column

    def test_deterministic_across_worker_counts(self, capsys, tmp_path, monkeypatch):
        outputs = []
        for threads in ("1", "3"):
            monkeypatch.setenv("QOLLIDE_THREADS", threads)
            csv_path = tmp_path / f"sweep_{threads}.csv"
            slopes_path = tmp_path / f"slopes_{threads}.json"
            code, _, _ = run(
                capsys, "sweep", "--family", "dicke", "--krule", "half-minus-one",
                "--N", "4:64:4", "--out", str(csv_path),
                "--slopes-out", str(slopes_path),
            )
            assert code == 0
            outputs.append(csv_path.read_bytes() + slopes_path.read_bytes())
        assert outputs[0] == outputs[1]

    def test_missing_krule_exit_2(self, capsys):
        code, _, err = run(capsys, "sweep", "--family", "dicke", "--N", "4:8:4")
        assert code == 2
        assert "k_rule" in err

    def test_undefined_slope_serializes_as_null(self, capsys, tmp_path):
        # N=1 quarter rule gives k=0 and zero temperature: no log-log fit
        slopes_path = tmp_path / "slopes.json"
        code, _, _ = run(
            capsys, "sweep", "--family", "dicke", "--krule", "quarter",
            "--N", "1,2", "--out", str(tmp_path / "s.csv"),
            "--slopes-out", str(slopes_path),
        )
        assert code == 0
        slopes = json.loads(slopes_path.read_text())  # strict JSON parses
        assert slopes["slope_T_q"] is None
        assert slopes["slope_t_q"] is not None


class TestClassify:
    def test_n2_block_map(self, capsys):
        code, out, _ = run(capsys, "classify", "--bath", "dicke", "--N", "2", "--k", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["block_sizes"] == [1, 2, 1]
        assert payload["counts"] == {
            "population": 4,
            "displacement": 8,
            "squeezing": 2,
            "hec": 2,
            "ineffective": 0,
        }
        squeezing = [e for e in payload["entries"] if e["primary"] == "squeezing"]
        assert len(squeezing) == 1  # unordered pair (gg, ee)
        assert {squeezing[0]["state_i"], squeezing[0]["state_j"]} == {"gg", "ee"}

    def test_n4_central_complements_ineffective(self, capsys):
        code, out, _ = run(
            capsys, "classify", "--bath", "product", "--N", "4", "--pe", "0.3"
        )
        assert code == 0
        payload = json.loads(out)
        pairs = {
            frozenset((e["state_i"], e["state_j"])): e["primary"]
            for e in payload["entries"]
        }
        assert pairs[frozenset(("eegg", "ggee"))] == "ineffective"
        assert pairs[frozenset(("egeg", "gege"))] == "ineffective"

    def test_n1_has_no_squeezing_or_hec(self, capsys):
        code, out, _ = run(capsys, "classify", "--bath", "product", "--N", "1", "--pe", "0")
        assert code == 0
        counts = json.loads(out)["counts"]
        assert counts["squeezing"] == 0
        assert counts["hec"] == 0
        assert counts["displacement"] == 2


class TestPrepare:
    def test_long_run_block_ratios(self, capsys, tmp_path):
        ladder_path = tmp_path / "ladder.csv"
        state_path = tmp_path / "state.csv"
        code, _, _ = run(
            capsys, "prepare", "--N", "4", "--nbar", "1", "--gamma0", "1",
            "--t-end", "15", "--dt", "0.002", "--n-points", "11",
            "--out-ladder", str(ladder_path), "--out-state", str(state_path),
        )
        assert code == 0
        n, rho = bath_from_csv(state_path.read_text())
        assert n == 4
        basis = basis_ordering(4)
        traces = [
            np.trace(rho[basis.block_slice(k), basis.block_slice(k)]).real
            for k in range(5)
        ]
        for k in range(4):
            assert traces[k + 1] / traces[k] == pytest.approx(0.5, abs=1e-6)
        header = ladder_path.read_text().splitlines()[0]
        assert header == "t,rho_0,rho_1,rho_2,rho_3,rho_4"

    def test_single_qubit_excited_fraction(self, capsys, tmp_path):
        ladder_path = tmp_path / "ladder.csv"
        state_path = tmp_path / "state.csv"
        code, _, _ = run(
            capsys, "prepare", "--N", "1", "--nbar", "0.5", "--gamma0", "1",
            "--t-end", "30", "--dt", "0.001",
            "--out-ladder", str(ladder_path), "--out-state", str(state_path),
        )
        assert code == 0
        last = ladder_path.read_text().splitlines()[-1].split(",")
        assert float(last[2]) == pytest.approx(0.25, abs=1e-6)

    def test_zero_point_grid_still_writes_state(self, capsys, tmp_path):
        ladder_path = tmp_path / "ladder.csv"
        state_path = tmp_path / "state.csv"
        code, _, _ = run(
            capsys, "prepare", "--N", "2", "--nbar", "1", "--gamma0", "1",
            "--t-end", "15", "--dt", "0.002", "--n-points", "0",
            "--out-ladder", str(ladder_path), "--out-state", str(state_path),
        )
        assert code == 0
        assert ladder_path.read_text() == "t,rho_0,rho_1,rho_2\n"
        _, rho = bath_from_csv(state_path.read_text())
        np.testing.assert_allclose(rho, thermal_hec_state(2, 1.0), atol=1e-6)

    def test_zero_time_initial_ladder(self, capsys, tmp_path):
        ladder_path = tmp_path / "ladder.csv"
        state_path = tmp_path / "state.csv"
        code, _, _ = run(
            capsys, "prepare", "--N", "3", "--nbar", "1", "--gamma0", "1",
            "--t-end", "0", "--dt", "0.01",
            "--out-ladder", str(ladder_path), "--out-state", str(state_path),
        )
        assert code == 0
        lines = ladder_path.read_text().splitlines()
        assert len(lines) == 2
        assert [float(x) for x in lines[1].split(",")] == [0.0, 1.0, 0.0, 0.0, 0.0]

    def test_state_file_matches_closed_form(self, capsys, tmp_path):
        state_path = tmp_path / "state.csv"
        code, _, _ = run(
            capsys, "prepare", "--N", "2", "--nbar", "1", "--gamma0", "1",
            "--t-end", "15", "--dt", "0.002",
            "--out-ladder", str(tmp_path / "l.csv"), "--out-state", str(state_path),
        )
        assert code == 0
        _, rho = bath_from_csv(state_path.read_text())
        np.testing.assert_allclose(rho, thermal_hec_state(2, 1.0), atol=1e-6)

    def test_numeric_failure_exit_3(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "prepare", "--N", "6", "--nbar", "1", "--gamma0", "1",
            "--t-end", "10", "--dt", "1.0",
            "--out-ladder", str(tmp_path / "l.csv"),
            "--out-state", str(tmp_path / "s.csv"),
        )
        assert code == 3
        assert "numeric" in err


class TestFigures:
    def test_writes_all_datasets_deterministically(self, capsys, tmp_path):
        dir_a = tmp_path / "a"
        dir_b = tmp_path / "b"
        for out_dir in (dir_a, dir_b):
            code, out, _ = run(capsys, "figures", "--out-dir", str(out_dir))
            assert code == 0
        names = sorted(p.name for p in dir_a.iterdir())
        assert names == [
            "decay_dicke_N4_k1.csv",
            "decay_dicke_N8_k2.csv",
            "decay_dicke_N8_k3.csv",
            "decay_mixed_N4.csv",
            "decay_mixed_N8.csv",
            "temperature_dicke_N12_k5.csv",
            "temperature_dicke_N4_k1.csv",
            "temperature_dicke_N8_k3.csv",
            "temperature_mixed_N12.csv",
            "temperature_mixed_N4.csv",
            "temperature_mixed_N8.csv",
        ]
        for name in names:
            assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes()

    def test_temperature_dataset_asymptote(self, capsys, tmp_path):
        code, _, _ = run(capsys, "figures", "--out-dir", str(tmp_path))
        assert code == 0
        lines = (tmp_path / "temperature_dicke_N12_k5.csv").read_text().splitlines()
        last_T = float(lines[-1].split(",")[6])
        assert last_T == pytest.approx(-1.0 / math.log(40.0 / 42.0), abs=1e-9)


def test_module_entry_point(tmp_path):
    env = dict(os.environ)
    src = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src")
    env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "qollide", "coeffs", "--bath", "dicke", "--N", "4", "--k", "1"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["coefficients"]["r_e"] == 4.0
