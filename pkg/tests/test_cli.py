import json

import pytest

from diskduality.cli import main
from diskduality.lamination import ALamination, enumerate_alaminations, phi

PENTAGON = ALamination(5, (((0, 2), 1), ((0, 4), -1), ((2, 3), -1), ((3, 4), 1)))


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.fixture
def lam_file(tmp_path):
    def write(obj, name="lam.json"):
        p = tmp_path / name
        p.write_text(json.dumps(obj.to_json() if hasattr(obj, "to_json") else obj))
        return str(p)

    return write


def test_ia_without_lamination_prints_one(capsys):
    code, out = run(capsys, "ia", "--polygon", "5")
    assert code == 0 and out.strip() == "1"


def test_ia_is_deterministic(capsys, lam_file):
    path = lam_file(PENTAGON)
    first = run(capsys, "ia", "--n", "5", "--chart", "1-3,1-4", "--lamination", path)
    second = run(capsys, "ia", "--n", "5", "--chart", "1-3,1-4", "--lamination", path)
    assert first == second and first[0] == 0
    assert first[1].strip() != "1"


def test_ia_q_one_has_integer_coefficients(capsys, lam_file):
    path = lam_file(PENTAGON)
    code, out = run(capsys, "ia", "--n", "5", "--chart", "1-3,1-4", "--lamination", path, "--q-one")
    assert code == 0
    assert "q" not in out and "w" not in out


def test_ia_json_format(capsys, lam_file):
    code, out = run(capsys, "ia", "--n", "5", "--lamination", lam_file(PENTAGON), "--format", "json")
    data = json.loads(out)
    assert code == 0 and set(data) == {"chart", "lamination", "q_one", "value"}


def test_id_projection_check_for_phi_image(capsys, lam_file):
    code, out = run(capsys, "id", "--n", "5", "--chart", "1-3,1-4", "--lamination", lam_file(phi(PENTAGON)))
    data = json.loads(out)
    assert code == 0
    assert set(data) == {"n_l", "denominators", "numerator", "chart", "lamination", "projection_check"}
    assert data["projection_check"] is True


def test_id_denominators(capsys, lam_file):
    d = {"front": [{"chord": [0, 3], "w": 1}, {"chord": [1, 2], "w": 1}, {"chord": [4, 5], "w": 1}],
         "back": [{"chord": [1, 4], "w": 1}, {"chord": [0, 5], "w": 1}, {"chord": [2, 3], "w": 1}]}
    code, out = run(capsys, "id", "--n", "6", "--lamination", lam_file(d))
    data = json.loads(out)
    assert code == 0
    assert data["projection_check"] is None
    (den,) = data["denominators"]
    assert den["mult"] == 1 and den["f"].startswith("1")


def test_invalid_lamination_exit_2(capsys, lam_file):
    bad = {"front": [{"chord": [0, 2], "w": 1}]}
    code, out = run(capsys, "ia", "--n", "5", "--lamination", lam_file(bad))
    assert code == 2
    err = json.loads(out)
    assert err["error"] == "lamination" and "vertex sum" in err["message"]


def test_bad_chart_and_missing_polygon(capsys):
    code, out = run(capsys, "ia", "--n", "5", "--chart", "0-2,1-3")
    assert code == 2 and json.loads(out)["error"] == "chart"
    code, out = run(capsys, "ia")
    assert code == 2 and json.loads(out)["error"] == "usage"


def test_unknown_command_and_suite(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    code, out = run(capsys, "verify", "no-such-suite")
    assert code == 2 and json.loads(out)["error"] == "suite"


def test_product_and_structure(capsys, lam_file):
    ls = enumerate_alaminations(5, 1)
    a, b = lam_file(ls[3], "a.json"), lam_file(ls[7], "b.json")
    code, out = run(capsys, "product", "--n", "5", "--lamination", a, "--lamination", b)
    assert code == 0 and out.strip()
    code, out = run(capsys, "structure", "--n", "5", "--lamination", a, "--lamination", b)
    assert code == 0
    terms = json.loads(out)["terms"]
    assert terms and all({"lamination", "label", "c"} == set(t) for t in terms)
    assert run(capsys, "product", "--n", "5", "--lamination", a)[0] == 2


def test_verify_compat_octagon(capsys):
    code, out = run(capsys, "verify", "compat", "--n", "8")
    data = json.loads(out)
    assert code == 0 and data["status"] == "PASS"
    assert data["suites"][0]["notes"]["triangulations n=8"] == 132


def test_verify_jobs_do_not_change_output(capsys):
    args = ["verify", "compat", "flips", "gsum", "--n", "5", "--order", "4"]
    one = run(capsys, *args, "--jobs", "1")
    two = run(capsys, *args, "--jobs", "2")
    assert one == two and one[0] == 0


def test_verify_nl_reports_failure(capsys):
    code, out = run(capsys, "verify", "nl", "--n", "6", "--samples", "30", "--format", "text")
    assert code == 1 and out.startswith("FAIL nl")


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out = run(capsys, "verify", "compat", "--n", "5", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["status"] == "PASS"


def test_stdin_lamination(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(PENTAGON.to_json())))
    code, out = run(capsys, "ia", "--n", "5", "--chart", "0-2,0-3", "--lamination", "-")
    assert code == 0 and out.strip() != "1"
