import hashlib
import json


from numberwall.cli import main


def test_no_arguments_is_usage_error(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_flag(capsys):
    assert main(["predict", "--p", "3", "--bogus"]) == 2


def test_predict(capsys):
    assert main(["predict", "--p", "3", "--j", "6"]) == 0
    assert capsys.readouterr().out.startswith("2/3 = 0.666")


def test_verify_cantor(capsys):
    assert main(["verify", "--system", "cantor", "--p", "3", "--k", "4"]) == 0
    assert capsys.readouterr().out.startswith("ok")


def test_seq(capsys):
    assert main(["seq", "--name", "cantor", "--p", "3", "--length", "9"]) == 0
    assert capsys.readouterr().out.strip() == "1,0,1,0,0,0,1,0,1"


def test_cf_csv(capsys):
    assert main(["cf", "--seq", "cantor:p=3", "--max-quotients", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "i,deg,coeffs"
    assert lines[1:] == ["0,-1,0", "1,1,t", "2,1,2t", "3,1,2t"]


def test_escape_csv_and_manifest(tmp_path, capsys):
    out, man = tmp_path / "e.csv", tmp_path / "m.json"
    code = main(["escape", "--p", "3", "--k-range", "3:5", "--n", "2", "--out", str(out),
                 "--manifest", str(man), "--threads", "1"])
    assert code == 0
    text = out.read_text()
    assert text.splitlines()[0] == "k,n,e,preperiod,period"
    assert text.splitlines()[2] == "4,2,0.333333333333,0,18"
    data = json.loads(man.read_text())
    assert data["command"] == "escape" and data["flags"]["n"] == 2
    assert data["outputs"][0]["sha256"] == hashlib.sha256(text.encode()).hexdigest()
    assert "duration_ms" in data


def test_profile_and_morph_pbm(tmp_path):
    a, b = tmp_path / "wall.pbm", tmp_path / "morph.pbm"
    assert main(["profile", "--p", "3", "--rows", "9", "--cols", "9", "--out", str(a)]) == 0
    assert main(["morph", "--system", "cantor", "--p", "3", "--k", "2", "--out", str(b)]) == 0
    wall = a.read_text().splitlines()
    morph = b.read_text().splitlines()
    assert wall[:2] == ["P1", "9 10"] and morph[:2] == ["P1", "9 9"]
    assert wall[3:] == morph[2:]


def test_verify_mismatch_exit_code(capsys):
    assert main(["verify", "--system", "thue-morse", "--k", "1"]) == 1
    assert "mismatch" in capsys.readouterr().out


def test_precision_exit_code(capsys):
    assert main(["escape", "--seq", "1,0,1", "--p", "2", "--k", "1", "--horizon", "50"]) == 3


def test_bad_prime(capsys):
    assert main(["seq", "--name", "cantor", "--p", "4", "--length", "3"]) == 2


def test_wall_and_transport(tmp_path, capsys):
    assert main(["wall", "--seq", "thue-morse", "--rows", "2", "--cols", "3"]) == 0
    assert capsys.readouterr().out.splitlines()[:2] == ["m,n,value", "-1,0,1"]
    assert main(["transport", "--p", "3", "--poly", "t^2+1", "--k-range", "1:2"]) == 0


def test_deterministic_replay(tmp_path):
    runs = []
    for i in range(2):
        out = tmp_path / f"d{i}.csv"
        main(["family", "--p", "3", "--family", "two_pk", "--k-max", "2", "--out", str(out)])
        runs.append(out.read_bytes())
    assert runs[0] == runs[1]
