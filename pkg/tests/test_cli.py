import json

import numpy as np
import pytest

from speclat.cli import main
from speclat.directsum import BlockProfile, DirectSumElement
from speclat.io import emit_element, emit_iso
from speclat.sampling import random_direct_sum_iso, rng_from
from speclat.selftest import motivating_iso


@pytest.fixture
def workdir(tmp_path):
    return tmp_path


def write_diag(path, *diags, cone="sa"):
    profile = BlockProfile(tuple(len(d) for d in diags))
    x = DirectSumElement(profile, [np.diag(np.asarray(d, dtype=float)) for d in diags])
    emit_element(x, cone, path)
    return x


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_order_true_false_and_exit_codes(workdir, capsys):
    write_diag(workdir / "x.json", [1.0, 2.0])
    write_diag(workdir / "y.json", [2.0, 3.0])
    code, report = run_json(capsys, ["order", str(workdir / "x.json"), str(workdir / "y.json")])
    assert code == 0
    assert report["verdicts"][0]["pass"] is True
    code, report = run_json(capsys, ["order", str(workdir / "y.json"), str(workdir / "x.json")])
    assert code == 1
    assert report["verdicts"][0]["pass"] is False


def test_order_profile_mismatch_is_input_error(workdir, capsys):
    write_diag(workdir / "x.json", [1.0, 2.0])
    write_diag(workdir / "y.json", [1.0, 2.0, 3.0])
    code = main(["order", str(workdir / "x.json"), str(workdir / "y.json")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_missing_file_is_input_error(workdir, capsys):
    code = main(["family", str(workdir / "nope.json")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_meet_join_with_out(workdir, capsys):
    write_diag(workdir / "a.json", [1.0, 4.0])
    write_diag(workdir / "b.json", [3.0, 2.0])
    out = workdir / "meet.json"
    code, report = run_json(
        capsys, ["meet", str(workdir / "a.json"), str(workdir / "b.json"), "--out", str(out)]
    )
    assert code == 0
    entries = report["result"]["blocks"][0]
    got = np.array([[complex(*pair) for pair in row] for row in entries])
    np.testing.assert_allclose(got, np.diag([1.0, 2.0]), atol=1e-9)
    assert out.exists()
    code2, report2 = run_json(capsys, ["join", str(workdir / "a.json"), str(workdir / "b.json")])
    got2 = np.array(
        [[complex(*pair) for pair in row] for row in report2["result"]["blocks"][0]]
    )
    np.testing.assert_allclose(got2, np.diag([3.0, 4.0]), atol=1e-9)


def test_family_reports_breakpoints(workdir, capsys):
    write_diag(workdir / "x.json", [1.0, 2.0], [0.5])
    code, report = run_json(capsys, ["family", str(workdir / "x.json")])
    assert code == 0
    blocks = report["result"]["blocks"]
    assert blocks[0]["breakpoints"] == [1.0, 2.0]
    assert blocks[1]["breakpoints"] == [0.5]


def test_posneg(workdir, capsys):
    write_diag(workdir / "x.json", [3.0, -2.0])
    code, report = run_json(capsys, ["posneg", str(workdir / "x.json")])
    assert code == 0
    pos = np.array(
        [[complex(*pair) for pair in row] for row in report["result"]["pos"]["blocks"][0]]
    )
    np.testing.assert_allclose(pos, np.diag([3.0, 0.0]), atol=1e-9)


def test_atoms_found_and_not_found(workdir, capsys):
    write_diag(workdir / "atom.json", [0.5, 0.0], cone="eff")
    code, report = run_json(capsys, ["atoms", str(workdir / "atom.json")])
    assert code == 0
    assert report["result"]["alpha"] == pytest.approx(0.5)
    write_diag(workdir / "full.json", [1.0, 1.0], cone="eff")
    code, _report = run_json(capsys, ["atoms", str(workdir / "full.json")])
    assert code == 1
    write_diag(workdir / "sa.json", [0.5, 0.0], cone="sa")
    assert main(["atoms", str(workdir / "sa.json")]) == 2


def test_center(workdir, capsys):
    write_diag(workdir / "z.json", [2.0, 2.0], [-1.0, -1.0, -1.0])
    code, report = run_json(capsys, ["center", str(workdir / "z.json")])
    assert code == 0
    assert report["result"]["scalars"] == [2.0, -1.0]
    write_diag(workdir / "nz.json", [2.0, 1.0], [-1.0, -1.0, -1.0])
    assert main(["center", str(workdir / "nz.json"), "--json"]) == 1
    capsys.readouterr()


def test_apply_iso(workdir, capsys, rng):
    iso = motivating_iso()
    emit_iso(iso, workdir / "iso.json")
    write_diag(workdir / "x.json", [1.0, -2.0], [1.0, -2.0])
    code, report = run_json(
        capsys, ["apply-iso", str(workdir / "iso.json"), str(workdir / "x.json")]
    )
    assert code == 0
    second = np.array(
        [[complex(*pair) for pair in row] for row in report["result"]["blocks"][1]]
    )
    np.testing.assert_allclose(second, np.diag([1.0, -8.0]), atol=1e-8)


def test_apply_iso_cone_mismatch(workdir, capsys):
    emit_iso(motivating_iso(), workdir / "iso.json")
    write_diag(workdir / "x.json", [0.5, 0.5], [0.5, 0.5], cone="eff")
    assert main(["apply-iso", str(workdir / "iso.json"), str(workdir / "x.json")]) == 2
    capsys.readouterr()


def test_decompose_swap_reports_one_based_pi(workdir, capsys):
    rng = rng_from(11)
    profile = BlockProfile((2, 2))
    while True:
        iso = random_direct_sum_iso(rng, profile, "eff")
        if iso.pi == (1, 0):
            break
    emit_iso(iso, workdir / "swap.json")
    code = main(["decompose", str(workdir / "swap.json")])
    text = capsys.readouterr().out
    assert code == 0
    assert "pi = [2, 1] (1-based)" in text
    code, report = run_json(capsys, ["decompose", str(workdir / "swap.json")])
    assert report["result"]["pi"] == [1, 0]
    assert all(r <= 1e-8 for r in report["result"]["block_residuals"])


def test_decompose_motivating_example(workdir, capsys):
    emit_iso(motivating_iso(), workdir / "cube.json")
    code, report = run_json(capsys, ["decompose", str(workdir / "cube.json")])
    assert code == 0
    assert report["result"]["pi"] == [0, 1]
    actions = report["result"]["scalar_actions"]
    grid = np.asarray(actions[0]["grid"])
    np.testing.assert_allclose(actions[0]["values"], grid, atol=1e-6)
    np.testing.assert_allclose(actions[1]["values"], grid**3, atol=1e-6)
    assert "type-I2" in report["flags"]


def test_verify_iso_ortho_flags_shear(workdir, capsys):
    rng = rng_from(5)
    iso = random_direct_sum_iso(rng, BlockProfile((3,)), "eff", tau_kinds=("shear",))
    emit_iso(iso, workdir / "shear.json")
    code, report = run_json(
        capsys, ["verify-iso", str(workdir / "shear.json"), "--ortho", "--trials", "300"]
    )
    assert code == 1
    checks = {v["check"]: v["pass"] for v in report["verdicts"]}
    assert checks["order preserved in both directions"] is True
    assert checks["orthogonality preserved"] is False
    assert report["witnesses"]


def test_verify_iso_jordan_passes(workdir, capsys):
    rng = rng_from(6)
    iso = random_direct_sum_iso(rng, BlockProfile((2, 3)), "eff", jordan=True)
    emit_iso(iso, workdir / "jordan.json")
    code, report = run_json(
        capsys, ["verify-iso", str(workdir / "jordan.json"), "--ortho", "--trials", "40"]
    )
    assert code == 0
    assert report["verdicts"] and all(v["pass"] for v in report["verdicts"])


def test_json_reports_are_deterministic(workdir, capsys):
    emit_iso(motivating_iso(), workdir / "cube.json")
    argv = ["decompose", str(workdir / "cube.json"), "--seed", "9", "--json"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second


def test_seed_from_environment(workdir, capsys, monkeypatch):
    emit_iso(motivating_iso(), workdir / "cube.json")
    monkeypatch.setenv("SPECLAT_SEED", "123")
    code, report = run_json(capsys, ["decompose", str(workdir / "cube.json")])
    assert report["seed"] == 123


def test_tolerance_overrides(workdir, capsys):
    write_diag(workdir / "x.json", [1.0, 2.0])
    write_diag(workdir / "y.json", [2.0, 3.0])
    code = main(
        ["order", str(workdir / "x.json"), str(workdir / "y.json"), "--tol-proj", "1e-12"]
    )
    capsys.readouterr()
    assert code == 0
    assert (
        main(["order", str(workdir / "x.json"), str(workdir / "y.json"), "--tol-proj", "-1.0"])
        == 2
    )
    capsys.readouterr()


def test_selftest_small(workdir, capsys):
    code, report = run_json(capsys, ["selftest", "--seed", "3", "--trials", "12"])
    assert code == 0
    assert all(v["pass"] for v in report["verdicts"])
