import json

import pytest

from gadet.cli import Config, build_parser, load_config, main
from gadet.detengine import GroupRingElement


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip().splitlines()
    return code, out


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_compute_q9(tmp_path, capsys):
    path = write(tmp_path, "e.json", {"q": 9, "components": {"0": "1", "2": "y", "3": "1", "4": "1"}})
    code, out = run(capsys, "compute", "--element", path)
    rep = json.loads(out[0])
    assert code == 0 and rep["A"] == "32" and rep["B"] == "5" and rep["D"] == str(32 * 5**8)


def test_compute_identity_and_oracle(tmp_path, capsys, rng):
    path = write(tmp_path, "one.json", {"q": 4, "components": {"0": "1"}})
    code, out = run(capsys, "compute", "--element", path)
    assert code == 0 and json.loads(out[0])["D"] == "1"
    from gadet.field import field_for_q

    F = GroupRingElement.random(field_for_q(4), rng, 2)
    path = write(tmp_path, "r.json", F.to_json())
    code, out = run(capsys, "compute", "--element", path, "--oracle")
    rep = json.loads(out[0])
    assert code == 0 and rep["oracle_D"] == rep["D"]


def test_compute_bad_input(tmp_path, capsys):
    assert main(["compute", "--element", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["compute", "--element", str(bad)]) == 2
    assert main(["compute"]) == 2


def test_verify(capsys, tmp_path):
    code, out = run(capsys, "verify", "--q", "8", "--samples", "20", "--coeff-bound", "2", "--oracle")
    summary = json.loads(out[0])
    assert code == 0 and summary["passed"]["oracle"] == 20 and summary["passed"]["congruence"] == 20
    code, out = run(capsys, "verify", "--q", "9", "--samples", "3", "--pinned")
    assert code == 0 and json.loads(out[0])["samples"] == 4
    assert main(["verify", "--q", "6"]) == 2


def test_verify_large_q_samples_starts(capsys):
    code, out = run(capsys, "--symbolic-cap", "8", "verify", "--q", "9", "--samples", "2", "--coeff-bound", "1")
    summary = json.loads(out[0])
    assert code == 0 and summary["passed"]["start_independent"] == 2
    assert "avg_identity" not in summary["passed"]


def test_verify_failure_dumps(capsys, tmp_path, monkeypatch):
    from gadet import cli

    monkeypatch.setattr(cli, "check_element", lambda *a, **k: {"congruence": False})
    dump = tmp_path / "cx.json"
    code, out = run(capsys, "verify", "--q", "4", "--samples", "2", "--dump", str(dump))
    assert code == 1
    assert GroupRingElement.from_json(json.loads(dump.read_text())).spec.q == 4


def test_achieve(capsys, tmp_path):
    code, out = run(capsys, "achieve", "--q", "9", "--A", "32", "--B", "5")
    assert code == 0 and json.loads(out[0])["construction"] == "q9-special"
    code, out = run(capsys, "achieve", "--q", "27", "--A", "4", "--B", "-1670")
    w = json.loads(out[0])
    assert w["construction"] == "q27-special"
    assert w["params"] == {"case": "4*1", "lambda": "0", "m": "0"}
    target = tmp_path / "w.json"
    code, out = run(capsys, "achieve", "--q", "8", "--A", "3", "--B", "3", "--out", str(target))
    assert code == 0 and json.loads(target.read_text())["construction"] == "coprime"
    assert main(["achieve", "--q", "9", "--A", "2", "--B", "2"]) == 3


def test_decide(capsys):
    code, out = run(capsys, "decide", "--q", "8", "--D", "6561")
    assert code == 0 and json.loads(out[0])["verdict"] == "yes"
    code, out = run(capsys, "decide", "--q", "8", "--D", "0")
    assert code == 0 and json.loads(out[0])["witness"]["construction"] == "cyclotomic"
    code, out = run(capsys, "decide", "--q", "9", "--D", "2")
    assert code == 1 and json.loads(out[0])["verdict"] == "no"
    assert main(["decide", "--q", "16", "--D", "5"]) == 3


def test_reproduce(capsys):
    for section in ("q9", "orbits"):
        code, out = run(capsys, "reproduce", "--section", section)
        assert code == 0 and json.loads(out[0])["pass"]
    code, out = run(capsys, "--threads", "2", "reproduce", "--section", "q27")
    report = json.loads(out[0])
    assert code == 0 and sum(r["pass"] for r in report["cases"]) == 7


def test_classify_q4(capsys):
    code, out = run(capsys, "classify", "--q", "4", "--coeff-bound", "1", "--max-abs", "200", "--max-elements", "3000")
    rows = [json.loads(line) for line in out]
    assert code == 0 and rows[-1]["summary"]
    for row in rows[:-1]:
        A, B, D = int(row["A"]), int(row["B"]), int(row["D"])
        assert D == A * B**3 and (B - A) % 4 == 0 and abs(D) <= 200


def test_classify_q8_subset_of_decider(capsys, tmp_path):
    target = tmp_path / "c.jsonl"
    code, _ = run(capsys, "classify", "--q", "8", "--coeff-bound", "1", "--max-abs", "1000", "--max-elements", "300", "--out", str(target))
    rows = [json.loads(line) for line in target.read_text().splitlines()]
    assert code == 0 and rows[-1]["decider_disagreements"] == 0
    assert all(r["decider"] == "yes" for r in rows[:-1])


def test_classify_empty_range(capsys):
    code, out = run(capsys, "classify", "--q", "4", "--coeff-bound", "0")
    rows = [json.loads(line) for line in out]
    assert code == 0 and [r["D"] for r in rows[:-1]] == ["0"]


def test_determinism(capsys):
    outs = [run(capsys, "--seed", "7", "verify", "--q", "4", "--samples", "5")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_config_sources(tmp_path, monkeypatch):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"threads": 3, "seed": 11, "oracle_cap": 256}))
    monkeypatch.setenv("GADET_CONFIG", str(cfg_file))
    monkeypatch.setenv("GADET_THREADS", "2")
    args = build_parser().parse_args(["--seed", "5", "decide", "--q", "8", "--D", "1"])
    cfg = load_config(args)
    assert cfg == Config(threads=2, oracle_cap=256, symbolic_cap=32, seed=5)
    with pytest.raises(ValueError):
        Config(threads=0)
