import json
import math

import numpy as np
import pytest

from trivortex.cli import main

EQ_Z = "1,0,-0.5,0.8660254037844386,-0.5,-0.8660254037844386"
FIG_G = "0.08904,0.28196,0.629"


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSimulate:
    def test_writes_csv_and_figure(self, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        code, stdout, _ = run(
            capsys,
            ["simulate", "--gammas", "1,1,1", "--z", EQ_Z, "--t-end", "2",
             "--out", str(out)],
        )
        assert code == 0
        assert out.exists()
        assert out.with_suffix(".png").exists()
        payload = json.loads(stdout)
        assert payload["termination"] == "completed"
        assert payload["energy_drift"] < 1e-9

    def test_no_fig(self, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        code, _, _ = run(
            capsys,
            ["simulate", "--gammas", "1,1,1", "--z", EQ_Z, "--t-end", "1",
             "--out", str(out), "--no-fig"],
        )
        assert code == 0
        assert out.exists() and not out.with_suffix(".png").exists()

    def test_missing_option_exits_2(self, tmp_path, capsys):
        code, _, err = run(capsys, ["simulate", "--gammas", "1,1,1"])
        assert code == 2
        assert "missing" in err

    def test_bad_gammas_exit_2(self, tmp_path, capsys):
        code, _, _ = run(
            capsys,
            ["simulate", "--gammas", "1,0,1", "--z", EQ_Z, "--t-end", "1",
             "--out", str(tmp_path / "x.csv")],
        )
        assert code == 2

    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "run.json"
        cfg.write_text(
            json.dumps(
                {
                    "gammas": [1, 1, 1],
                    "z": [1, 0, -0.5, 0.8660254037844386, -0.5, -0.8660254037844386],
                    "t_end": 1.0,
                    "out": str(tmp_path / "run.csv"),
                }
            )
        )
        code, _, _ = run(capsys, ["simulate", "--config", str(cfg), "--no-fig"])
        assert code == 0
        assert (tmp_path / "run.csv").exists()

    def test_step_failure_exits_3(self, tmp_path, capsys, monkeypatch):
        import trivortex.cli as cli_mod
        from trivortex import Termination
        from trivortex.full_dynamics import Trajectory
        from trivortex.core import VortexConfig, validate_strengths

        def broken_integrate(cfg, s, t_end, opts=None):
            return Trajectory(
                times=np.array([0.0]),
                states=[cfg],
                diagnostics=[],
                termination=Termination.STEP_FAILURE,
                strengths=s,
            )

        monkeypatch.setattr(cli_mod, "integrate_full", broken_integrate)
        code, _, err = run(
            capsys,
            ["simulate", "--gammas", "1,1,1", "--z", EQ_Z, "--t-end", "1",
             "--out", str(tmp_path / "x.csv")],
        )
        assert code == 3
        assert "failure" in err


class TestSimulateReduced:
    def test_happy_path(self, tmp_path, capsys):
        out = tmp_path / "red.csv"
        code, stdout, _ = run(
            capsys,
            ["simulate-reduced", "--gammas", "1,1,1", "--a", "1.5,0,0,1.5",
             "--t-end", "5", "--out", str(out)],
        )
        assert code == 0
        assert out.exists() and out.with_suffix(".png").exists()
        payload = json.loads(stdout)
        assert payload["casimir_drift"] < 1e-10

    def test_off_sphere_rejected(self, tmp_path, capsys):
        code, _, _ = run(
            capsys,
            ["simulate-reduced", "--gammas", "1,1,1", "--a", "1,1,1,1",
             "--t-end", "1", "--out", str(tmp_path / "red.csv")],
        )
        assert code == 2


class TestCompare:
    def test_prints_json(self, capsys):
        code, stdout, _ = run(
            capsys,
            ["compare", "--gammas", FIG_G, "--z", "1,0,-0.3,0.7,-0.6,-0.8",
             "--t-end", "5"],
        )
        assert code == 0
        payload = json.loads(stdout)
        assert payload["sup_deviation"] < 1e-6
        assert payload["casimir_drift"] < 1e-8
        assert set(payload) == {"sup_deviation", "casimir_drift", "energy_drift"}


class TestPortrait:
    def test_csv_with_figure(self, tmp_path, capsys):
        out = tmp_path / "grid.csv"
        code, stdout, _ = run(
            capsys,
            ["portrait", "--gammas", FIG_G, "--mu", "1", "--chart", "alpha",
             "--nu", "24", "--nv", "48", "--out", str(out)],
        )
        assert code == 0
        assert out.exists() and out.with_suffix(".png").exists()
        payload = json.loads(stdout)
        assert len(payload["collision_points"]) == 3

    def test_svg(self, tmp_path, capsys):
        out = tmp_path / "grid.svg"
        code, _, _ = run(
            capsys,
            ["portrait", "--gammas", FIG_G, "--mu", "1", "--nu", "24",
             "--nv", "48", "--out", str(out)],
        )
        assert code == 0
        assert out.read_text().startswith("<svg")

    def test_bad_extension(self, tmp_path, capsys):
        code, _, _ = run(
            capsys,
            ["portrait", "--gammas", FIG_G, "--mu", "1",
             "--out", str(tmp_path / "grid.txt")],
        )
        assert code == 2


class TestVerify:
    def test_residual_report(self, capsys):
        code, stdout, _ = run(
            capsys, ["verify", "--gammas", FIG_G, "--samples", "10", "--seed", "3"]
        )
        assert code == 0
        payload = json.loads(stdout)
        assert set(payload) == {
            "pauli_residual",
            "jacobi_residual",
            "center_residual",
            "poisson_map_residual",
            "special_form_residual",
        }
        assert all(v < 1e-12 for v in payload.values())

    def test_explicit_family_parameter(self, capsys):
        code, stdout, _ = run(
            capsys,
            ["verify", "--gammas", "1,1,1", "--x=-2,2,0", "--samples", "5"],
        )
        assert code == 0
        payload = json.loads(stdout)
        assert payload["pauli_residual"] < 1e-12

    def test_not_admissible_exit_2(self, capsys):
        code, _, _ = run(capsys, ["verify", "--gammas", "1,-1,1"])
        assert code == 2


class TestTransforms:
    def test_states_and_residuals(self, capsys):
        code, stdout, _ = run(
            capsys, ["transforms", "--gammas", "1,1,1", "--z", "0,0,1,0,0,1"]
        )
        assert code == 0
        payload = json.loads(stdout)
        assert payload["jbh"]["r"] == [1.0, 0.0]
        assert payload["action_angle"]["j1"] == pytest.approx(0.25)
        assert payload["mixed"]["i2"] == pytest.approx(2 / 3)
        assert payload["pauli_coords"][0] == pytest.approx(2 / 3)
        res = payload["symplectic_residuals"]
        assert res["T1"] < 1e-7 and res["T3"] < 1e-9 and res["composite"] < 1e-6

    def test_collision_input_exit_2(self, capsys):
        code, _, _ = run(
            capsys, ["transforms", "--gammas", "1,1,1", "--z", "0,0,0,0,1,0"]
        )
        assert code == 2


class TestEquilibria:
    def test_symmetric_list(self, capsys):
        code, stdout, _ = run(
            capsys, ["equilibria", "--gammas", "1,1,1", "--mu", "1.5", "--grid-n", "8"]
        )
        assert code == 0
        payload = json.loads(stdout)
        assert len(payload) == 5
        hs = sorted(p["h"] for p in payload)
        assert hs[0] == pytest.approx(-3 / (4 * math.pi) * math.log(3))

    def test_mu_zero_exit_2(self, capsys):
        code, _, _ = run(capsys, ["equilibria", "--gammas", "1,1,1", "--mu", "0"])
        assert code == 2
