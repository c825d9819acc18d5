import json

import pytest

from cartanq.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, out


def test_bracket_h_e(capsys):
    rc, out = run(capsys, "bracket", "[1;0;1]", "[1;0;2]", "--n", "1")
    assert rc == 0 and json.loads(out) == {"terms": [{"alpha": "[1;0;2]", "c": "1"}]}


def test_dims(capsys):
    rc, out = run(capsys, "dims", "--n", "1", "--p", "5")
    assert rc == 0 and json.loads(out) == {"lie": 125, "utq": "5^126"}


def test_delta_terms(capsys):
    rc, out = run(capsys, "delta", "[0;1;0]", "--family", "vertical", "--k", "1", "--n", "1", "--p", "5", "--q", "0")
    terms = json.loads(out)["terms"]
    assert rc == 0
    assert {"left": "D[0;1;0]", "right": "1", "t": 0, "c": "1"} in terms
    assert {"left": "D[1;0;1]", "right": "D[1;0;2]", "t": 1, "c": "2"} in terms
    assert all(set(t) == {"left", "right", "t", "c"} for t in terms)


def test_antipode_char0(capsys):
    rc, out = run(capsys, "antipode", "[1;0;1]", "--n", "1", "--tdeg", "2")
    assert rc == 0 and json.loads(out)["terms"]


@pytest.mark.parametrize("argv", [
    ("verify", "--suite", "twist", "--family", "horizontal", "--n", "1"),
    ("verify", "--suite", "modular", "--n", "1"),
    ("dims", "--n", "1", "--p", "4"),
    ("bracket", "[1;0]", "[1;0;2]", "--n", "1"),
    ("delta", "[5;0;0]", "--n", "1", "--p", "5"),
    ("verify", "--suite", "nonsense"),
    ("verify", "--suite", "modular", "--n", "1", "--p", "5", "--q", "7"),
])
def test_usage_errors(capsys, argv):
    assert main(list(argv)) == 2


def test_report_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--suite", "twist", "--family", "vertical", "--n", "1", "--workers", "1"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["suite"] == "twist" and rep["params"] == {"n": 1, "p": 0, "q": 0, "N": 3, "seed": 0}
    for c in rep["checks"]:
        assert {"name", "family", "status", "residual-term-count", "millis"} <= set(c)


def test_seed_env_override(tmp_path, monkeypatch):
    out = tmp_path / "r.json"
    monkeypatch.setenv("CARTANQ_SEED", "17")
    assert main(["verify", "--suite", "twist", "--family", "contact", "--n", "1", "--seed", "3",
                 "--workers", "1", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["params"]["seed"] == 17


def test_budget_marks_incomplete(tmp_path):
    out = tmp_path / "r.json"
    rc = main(["verify", "--suite", "twist", "--n", "1", "--max-seconds", "0", "--workers", "1", "--out", str(out)])
    rep = json.loads(out.read_text())
    assert rc == 1 and rep["incomplete"] is True
    assert any(c["status"] == "skipped" for c in rep["checks"])


def test_worker_pool_matches_serial(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--suite", "twist", "--family", "vertical", "--n", "2"]
    assert main(args + ["--workers", "1", "--out", str(a)]) == 0
    assert main(args + ["--workers", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_failing_check_exits_1(tmp_path, monkeypatch):
    from cartanq import cli
    monkeypatch.setitem(cli.CHECKS, "cybe", lambda cfg: (False, {"failures": ["forced"]}))
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "twist", "--family", "vertical", "--n", "1", "--workers", "1",
                 "--out", str(out)]) == 1
    rep = json.loads(out.read_text())
    bad = [c for c in rep["checks"] if c["status"] == "fail"]
    assert bad and bad[0]["witness"] == "forced"


def test_lie_suite_n1_via_cli(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "lie", "--n", "1", "--sample", "300", "--workers", "1", "--out", str(out)]) == 0
