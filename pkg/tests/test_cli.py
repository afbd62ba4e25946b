import json

import pytest

from harmap import __version__
from harmap.export import DISTORTION_COLUMNS, GRID_COLUMNS, TRAJECTORY_COLUMNS
from harmap.schemas import GridSpec

# 빠른 격자 플래그
SMALL_GRID = ["--grid-M", "4", "--grid-N", "16", "--grid-K", "6", "--grid-R", "2"]


def test_version(cli):
    code, out, _ = cli("--version")
    assert code == 0
    assert __version__ in out


def test_missing_command(cli):
    code, _, _ = cli()
    assert code == 2


def test_catalog_text(cli):
    code, out, _ = cli("catalog")
    assert code == 0
    assert "half_plane_L: mu=1.5, upper=1.5" in out
    assert "identity: mu=0, upper=1" in out
    assert "log_example: mu=0.5" in out
    assert "k_alpha: parameters required" in out


def test_catalog_json(cli):
    code, out, _ = cli("catalog", "--format", "json")
    assert code == 0
    listing = json.loads(out)
    assert listing["harmonic_koebe_K"]["known"]["upper"] == 2.5


def test_eval_half_plane_origin(cli):
    code, out, _ = cli("eval", "0", "--map", "half_plane_L")
    assert code == 0
    data = json.loads(out)
    assert data["map"] == "half_plane_L"
    assert data["samples"][0]["abs_A"] == pytest.approx(1.5)


def test_eval_identity_and_log(cli):
    code, out, _ = cli("eval", "0.5", "0.3+0.4j", "--map", "identity")
    assert code == 0
    samples = json.loads(out)["samples"]
    assert samples[0]["re_A"] == pytest.approx(-0.5)
    assert samples[1]["abs_A"] == pytest.approx(0.5)

    code, out, _ = cli("eval", "0.5", "--map", "log_example")
    assert code == 0
    assert json.loads(out)["samples"][0]["re_A"] == pytest.approx(0.75)


def test_eval_csv(cli):
    code, out, _ = cli("eval", "0.1", "--map", "harmonic_koebe_K", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split(",")[:7] == ["re_z", "im_z", "re_P", "im_P", "re_A", "im_A", "abs_A"]
    assert len(lines) == 2


def test_eval_outside_disk_is_usage_error(cli):
    code, out, err = cli("eval", "1.5", "--map", "identity")
    assert code == 2
    assert out == ""
    assert json.loads(err.strip().splitlines()[-1])["code"] == "domain_error"


def test_eval_singular_point_exit_code(cli, tmp_path):
    """h'(0) = 0 인 테일러 사상"""
    taylor = tmp_path / "cube.json"
    taylor.write_text(json.dumps({"h": [[0, 0], [0, 0], [0, 0], [1, 0]], "g": [[0, 0]] * 4}))
    code, out, _ = cli("eval", "0", "0.5", "--taylor", str(taylor))
    assert code == 3
    samples = json.loads(out)["samples"]
    assert samples[0]["error"] == "singularity"
    assert "error" not in samples[1]


def test_unknown_map(cli):
    code, _, err = cli("order", "--map", "koebe_cardioid")
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["code"] == "unknown_map"


def test_invalid_params(cli):
    code, _, _ = cli("order", "--map", "power_map", "--params", '{"n": 1}')
    assert code == 2
    code, _, _ = cli("order", "--map", "power_map", "--params", "{not json")
    assert code == 2


def test_invalid_grid_is_validation_error(cli):
    code, _, err = cli("order", "--map", "identity", "--grid-K", "40")
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["code"] == "validation_error"


def test_order_command(cli):
    code, out, _ = cli("order", "--map", "half_plane_L", "--kind", "upper", *SMALL_GRID)
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "upper"
    assert data["value"] == pytest.approx(1.5, abs=1e-9)


def test_order_csv_boundary_rays(cli):
    code, out, _ = cli("order", "--map", "half_plane_L", "--format", "csv", *SMALL_GRID)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "theta,limit"
    assert len(lines) == 1 + 16


def test_config_file_with_flag_override(cli, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"map": "identity", "grid_M": 4, "grid_N": 16, "grid_K": 6, "grid_R": 2}))
    code, out, _ = cli("order", "--config", str(config), "--kind", "upper")
    assert code == 0
    assert json.loads(out)["map"] == "identity"

    code, out, _ = cli("order", "--config", str(config), "--map", "half_plane_L", "--kind", "upper")
    assert code == 0
    assert json.loads(out)["map"] == "half_plane_L"


def test_config_file_unknown_key(cli, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"map": "identity", "colour": "blue"}))
    code, _, err = cli("order", "--config", str(config))
    assert code == 2
    assert "colour" in err


def test_trajectory_command(cli):
    code, out, _ = cli("trajectory", "--map", "identity", "--z0", "0.5", "--t-end", "0.96")
    assert code == 0
    data = json.loads(out)
    t, re_z, im_z = data["states"][-1]
    assert t == 0.96
    assert re_z == pytest.approx(0.2, abs=1e-6)
    assert data["max_drift"] <= 1e-6
    assert data["probe"]["monotone"] is True


def test_trajectory_growth_failure(cli):
    code, out, _ = cli("trajectory", "--map", "identity", "--z0", "0.5", "--t-end", "0.96", "--mu", "0.5")
    assert code == 1
    assert json.loads(out)["growth"]["pass"] is False


def test_trajectory_csv(cli):
    code, out, _ = cli("trajectory", "--map", "half_plane_L", "--z0", "0.3", "--t-end", "4", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == ",".join(TRAJECTORY_COLUMNS)


def test_trajectory_vanishing_field(cli):
    code, _, err = cli("trajectory", "--map", "identity", "--z0", "0", "--t-end", "2")
    assert code == 3
    assert "integration_error" in err


def test_distortion_exit_codes(cli):
    code, out, _ = cli("distortion", "--map", "identity", "--n-pairs", "50")
    assert code == 0
    assert json.loads(out)["pass"] is True

    code, out, _ = cli("distortion", "--map", "half_plane_L", "--alpha", "1.0", "--ray", "0", "--n-pairs", "10")
    assert code == 1
    assert json.loads(out)["n_failed"] == 10


def test_distortion_ray_equality(cli):
    """L 은 음의 실축 (θ = π) 에서 왼쪽 등호"""
    code, out, _ = cli("distortion", "--map", "half_plane_L", "--ray", "3.141592653589793", "--n-pairs", "5")
    assert code == 0
    assert json.loads(out)["n_left_equality"] == 5


def test_distortion_csv_keeps_equality_flags(cli):
    code, out, _ = cli("distortion", "--map", "half_plane_L", "--ray", "3.141592653589793", "--n-pairs", "5",
                       "--format", "csv")
    assert code == 0
    header, *rows = out.splitlines()
    columns = header.split(",")
    assert {"left_equality", "right_equality"} <= set(columns)
    assert len(rows) == 5
    for row in rows:
        values = dict(zip(columns, row.split(",")))
        assert values["left_equality"] == "true"
        assert values["right_equality"] == "false"


def test_zero_refinement_iterations_rejected(cli):
    code, out, err = cli("order", "--map", "identity", "--grid-M", "4", "--grid-N", "16", "--grid-K", "6",
                         "--grid-R", "0")
    assert code == 2
    assert out == ""
    assert err


def test_distortion_needs_alpha_when_unknown(cli):
    code, _, err = cli("distortion", "--map", "concave_example")
    assert code == 2
    assert "--alpha" in err


def test_distortion_seed_determinism(cli):
    args = ("distortion", "--map", "log_example", "--n-pairs", "20", "--format", "csv")
    _, first, _ = cli(*args, "--seed", "3")
    _, second, _ = cli(*args, "--seed", "3")
    _, other, _ = cli(*args, "--seed", "4")
    assert first == second
    assert first != other
    lines = first.splitlines()
    assert lines[0] == ",".join(DISTORTION_COLUMNS)
    assert len(lines) == 21


def test_criteria_shc_power_map_fails(cli):
    code, out, _ = cli("criteria", "--criterion", "shc", "--map", "power_map", "--params", '{"n": 2}', *SMALL_GRID)
    assert code == 1
    data = json.loads(out)
    assert data["name"] == "shc"
    assert data["pass"] is False


def test_criteria_sense_identity(cli):
    code, out, _ = cli("criteria", "--criterion", "sense", "--map", "identity", *SMALL_GRID)
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_criteria_nh_requires_lambda(cli):
    code, _, err = cli("criteria", "--criterion", "nh", "--map", "identity", *SMALL_GRID)
    assert code == 2
    assert "--lam" in err


def test_criteria_nh_identity(cli):
    code, out, _ = cli("criteria", "--criterion", "nh", "--lam", "0.5", "--map", "identity", *SMALL_GRID)
    assert code == 0
    assert json.loads(out)["extra"]["below_threshold"] is True


def test_criteria_concave_uses_known_alpha(cli):
    code, out, _ = cli("criteria", "--criterion", "concave", "--map", "concave_example",
                       "--params", '{"beta": 0.25, "rho": 0.1}', *SMALL_GRID)
    assert code == 0
    data = json.loads(out)
    assert data["extra"]["alpha"] == 1.5
    assert data["pass"] is True
    assert data["worst_margin"] >= 0.25 - 0.1 / 1.1 - 1e-9


def test_criteria_stable_concave_construction(cli):
    code, out, _ = cli("criteria", "--criterion", "stable_concave", "--map", "concave_example",
                       "--params", '{"beta": 0.25, "rho": 0.1}', *SMALL_GRID)
    assert code == 0
    data = json.loads(out)
    assert data["pass"] is True
    assert data["applicable"] is True
    assert data["extra"]["mu_estimate"] >= 1 - 1e-2


def test_criteria_mu_exit_follows_applicability(cli):
    code, out, _ = cli("criteria", "--criterion", "mu", "--map", "half_plane_L", *SMALL_GRID)
    assert code == 0
    code, _, _ = cli("criteria", "--criterion", "mu", "--map", "identity", *SMALL_GRID)
    assert code == 1


def test_grid_export_csv(cli, tmp_path):
    out_path = tmp_path / "grid.csv"
    code, out, _ = cli("grid-export", "--map", "harmonic_koebe_K", "--format", "csv", "--out", str(out_path),
                       *SMALL_GRID)
    assert code == 0
    assert out == ""
    lines = out_path.read_text().splitlines()
    assert lines[0] == ",".join(GRID_COLUMNS)
    r, _, _ = GridSpec(M=4, N=16, K=6, R=2).points()
    assert len(lines) == 1 + r.size


def test_grid_export_json(cli):
    code, out, _ = cli("grid-export", "--map", "identity", *SMALL_GRID)
    assert code == 0
    data = json.loads(out)
    assert data["grid"]["N"] == 16
    assert data["rows"][0]["abs_A"] == 0
