import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

import xmas
from xmas.cli import main
from xmas.fixtures import red_blue
from xmas.io import dumps_document, load_document
from xmas.state import initial_state

DATA = Path(xmas.__file__).parent / "data"
RB = str(DATA / "rb.json")


def test_validate_ok(capsys):
    assert main(["validate", RB]) == 0
    assert capsys.readouterr().out == "ok\n"


def test_validate_broken_target(capsys):
    assert main(["validate", str(DATA / "rb-broken-target.json")]) == 2
    out = capsys.readouterr().out
    assert "(c)" in out and "('sw', 0)" in out


def test_validate_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"alphabet": [\n')
    assert main(["validate", str(bad)]) == 3
    assert "line 2" in capsys.readouterr().err


def test_validate_missing_file(tmp_path):
    assert main(["validate", str(tmp_path / "nope.json")]) == 3


def test_eval_worked_values(capsys):
    state = str(DATA / "rb-state-red.json")
    assert main(["eval", RB, "--channel", "c2", "--signal", "irdy", "--state", state]) == 0
    assert capsys.readouterr().out == "bool=t routing=[] transfer=[]\n"
    assert main(["eval", RB, "--channel", "c1", "--signal", "trdy", "--state", state]) == 0
    assert capsys.readouterr().out == "bool=t routing=[(q1,red),(q2,red)] transfer=[(q1,red)]\n"
    assert main(["eval", RB, "--channel", "c1", "--signal", "data", "--state", state]) == 0
    assert capsys.readouterr().out == "red\n"


def test_eval_nodata(tmp_path, capsys):
    doc = tmp_path / "rb.json"
    doc.write_text(dumps_document(red_blue()))
    assert main(["eval", str(doc), "--channel", "c1", "--signal", "data"]) == 0
    assert capsys.readouterr().out == "NODATA\n"


def test_eval_unknown_channel(capsys):
    assert main(["eval", RB, "--channel", "c9", "--signal", "irdy"]) == 4


def test_eval_cycle(capsys):
    assert main(["eval", str(DATA / "loop.json"), "--channel", "cA", "--signal", "irdy"]) == 5
    out = capsys.readouterr().out
    assert out.startswith("ERROR: combinatorial cycle via ")
    assert "cA.irdy" in out


def test_eval_rejects_invalid_network():
    assert main(["eval", str(DATA / "rb-broken-target.json"), "--channel", "c1", "--signal", "irdy"]) == 2


def test_eval_stable(capsys):
    args = ["eval", RB, "--channel", "c1", "--signal", "trdy", "--state", str(DATA / "rb-state-red.json")]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_run_drains(tmp_path, capsys):
    trace = tmp_path / "trace.txt"
    assert main(["run", RB, "--cycles", "10", "--trace", str(trace)]) == 0
    assert "drained at cycle" in capsys.readouterr().out
    lines = trace.read_text().splitlines()
    assert lines[0].startswith("cycle=0 fired=[(c0,red)]")
    text = trace.read_text()
    assert "(c4,red)" in text and "(c5,blue)" in text


def test_run_stuck(capsys):
    assert main(["run", str(DATA / "stuck.json")]) == 6
    assert capsys.readouterr().out.splitlines()[-1] == "stuck at cycle 2"


def test_run_active(capsys):
    assert main(["run", RB, "--cycles", "2"]) == 1
    assert capsys.readouterr().out.splitlines()[-1] == "active after 2 cycles"


def test_run_empty_exits_immediately(tmp_path, capsys):
    doc = tmp_path / "empty.json"
    doc.write_text(dumps_document(red_blue(), initial_state(red_blue())))
    assert main(["run", str(doc)]) == 0
    assert capsys.readouterr().out == "drained at cycle 0\n"


def test_run_cycle(capsys):
    assert main(["run", str(DATA / "loop.json")]) == 5


def test_run_seeded_reproducible(tmp_path, capsys):
    ntk, _ = load_document(DATA / "rb.json")
    doc = json.loads(dumps_document(ntk))
    doc["state"] = {"sources": {"src": {"mode": "seeded", "seed": 1, "probability": 0.5}}}
    path = tmp_path / "seeded.json"
    path.write_text(json.dumps(doc))
    outs = []
    for seed in (3, 3, 4):
        trace = tmp_path / f"t{len(outs)}.txt"
        assert main(["run", str(path), "--cycles", "30", "--seed", str(seed), "--trace", str(trace)]) == 1
        outs.append(trace.read_text())
    assert outs[0] == outs[1]
    assert outs[0] != outs[2]


def test_check_rb(capsys):
    assert main(["check", RB]) == 0
    out = capsys.readouterr().out
    assert "0 failures" in out
    for name in ("RoutingNonEmpty", "TargetsAreResources", "TransferSubsetRouting", "TransferAvailable"):
        assert name in out


def test_check_random_1000(capsys):
    assert main(["check", "--random", "1000", "--seed", "42"]) == 0
    out = capsys.readouterr().out
    assert "4000 checks, 0 failures" in out
    assert "TransferSubsetRouting: 1000/1000 passed" in out


def test_check_mutant_writes_witnesses(tmp_path, capsys):
    wdir = tmp_path / "w"
    assert main(["check", RB, "--mutant", "transfer-leak", "--witness-dir", str(wdir)]) == 7
    out = capsys.readouterr().out
    assert "obligation=TransferSubsetRouting passed=f" in out
    files = sorted(p.name for p in wdir.iterdir())
    assert any("TransferSubsetRouting" in f for f in files)
    doc = json.loads(next(wdir.glob("*TransferSubsetRouting.json")).read_text())
    assert "<leak>" in doc["value"]


def test_check_needs_input(capsys):
    assert main(["check"]) == 3


def test_gen_deterministic_and_valid(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["gen", "--seed", "5", "--size", "12", "--out", str(a)]) == 0
    assert main(["gen", "--seed", "5", "--size", "12", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["validate", str(a)]) == 0


def test_gen_smallest_chain(capsys):
    assert main(["gen", "--seed", "1", "--size", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [c["type"] for c in doc["components"]] == ["source", "queue", "sink"]


def test_gen_cyclic_valid(tmp_path):
    for seed in range(20):
        out = tmp_path / f"g{seed}.json"
        assert main(["gen", "--seed", str(seed), "--size", "15", "--cyclic", "--out", str(out)]) == 0
        assert main(["validate", str(out)]) == 0


@pytest.mark.skipif(shutil.which("xmas") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["xmas", "validate", RB], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "ok\n"


def test_module_entry():
    res = subprocess.run([sys.executable, "-m", "xmas", "run", str(DATA / "stuck.json")], capture_output=True, text=True)
    assert res.returncode == 6
