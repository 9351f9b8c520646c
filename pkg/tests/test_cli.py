import os

import numpy as np
import pytest

from mdsarray import cli, shard


def run(*argv):
    return cli.main(list(argv))


@pytest.fixture()
def encoded(tmp_path):
    data = np.random.default_rng(60).bytes(5000)
    src = tmp_path / "input.bin"
    src.write_bytes(data)
    out = tmp_path / "shards"
    assert run("encode", str(src), "--out", str(out),
               "--construction", "C1", "-n", "5", "-k", "3") == 0
    return tmp_path, data, out


def test_encode_verify_decode_roundtrip(encoded):
    tmp_path, data, out = encoded
    assert run("verify", str(out)) == 0
    dest = tmp_path / "back.bin"
    assert run("decode", str(out), "--out", str(dest)) == 0
    assert dest.read_bytes() == data


def test_decode_with_missing_shards(encoded):
    tmp_path, data, out = encoded
    (out / "node_001.shard").unlink()
    (out / "node_004.shard").unlink()
    dest = tmp_path / "back.bin"
    assert run("decode", str(out), "--out", str(dest)) == 0
    assert dest.read_bytes() == data


def test_repair_restores_and_reports(encoded, capsys):
    tmp_path, data, out = encoded
    original = (out / "node_002.shard").read_bytes()
    (out / "node_002.shard").unlink()
    report = tmp_path / "report"
    assert run("repair", str(out), "--out", str(report)) == 0
    assert (out / "node_002.shard").read_bytes() == original
    assert (report / "repair_report.csv").exists()
    assert (report / "repair_report.png").exists()
    assert "bound" in capsys.readouterr().out


def test_corrupt_verify_exit_codes(encoded):
    _tmp, _data, out = encoded
    assert run("corrupt", str(out), "--node", "3", "--seed", "5") == 0
    assert run("verify", str(out)) == 3


def test_corrupt_then_uer_repair_cli(tmp_path):
    data = np.random.default_rng(61).bytes(300)
    src = tmp_path / "in.bin"
    src.write_bytes(data)
    out = tmp_path / "sh"
    assert run("encode", str(src), "--out", str(out),
               "--construction", "C2", "-n", "6", "-k", "2", "-d", "3") == 0
    good = (out / "node_002.shard").read_bytes()
    assert run("corrupt", str(out), "--node", "5", "--seed", "9") == 0
    (out / "node_002.shard").unlink()
    assert run("repair", str(out), "-t", "1") == 0
    assert (out / "node_002.shard").read_bytes() == good


def test_parameter_and_io_exit_codes(tmp_path):
    src = tmp_path / "in.bin"
    src.write_bytes(b"hello")
    # k >= n is a parameter error
    assert run("encode", str(src), "--out", str(tmp_path / "x"),
               "--construction", "C1", "-n", "4", "-k", "4") == 2
    # C2 without d is a parameter error
    assert run("encode", str(src), "--out", str(tmp_path / "x"),
               "--construction", "C2", "-n", "4", "-k", "2") == 2
    # missing input file is an I/O error
    assert run("encode", str(tmp_path / "nope.bin"), "--out",
               str(tmp_path / "x"), "--construction", "C1",
               "-n", "4", "-k", "2") == 4
    # directory without shards is an I/O error
    empty = tmp_path / "empty"
    empty.mkdir()
    assert run("verify", str(empty)) == 4
    # decoding with fewer than k shards is a decode error
    out = tmp_path / "sh"
    assert run("encode", str(src), "--out", str(out),
               "--construction", "C1", "-n", "4", "-k", "2") == 0
    for i in (1, 2, 3):
        (out / f"node_{i:03d}.shard").unlink()
    assert run("decode", str(out), "--out", str(tmp_path / "y.bin")) == 3


def test_bench_csv_and_figures(tmp_path, capsys):
    report = tmp_path / "bench"
    assert run("bench", "--construction", "C1", "--construction", "C4",
               "--out", str(report)) == 0
    out = capsys.readouterr().out
    lines = [l for l in out.strip().splitlines() if l]
    assert lines[0].startswith("construction,")
    assert len(lines) == 3  # header + two grid rows
    for line in lines[1:]:
        fields = dict(zip(lines[0].split(","), line.split(",")))
        assert fields["transmitted"] == fields["bound"]
    assert (report / "bench.csv").exists()
    assert (report / "bench.png").exists()


def test_replay_cli(tmp_path, capsys):
    log = tmp_path / "events.log"
    log.write_text("FAIL 2\nREPAIR F=2 R=1,3,4,5 t=0 strategy=auto\n")
    assert run("replay", str(log), "--construction", "C1",
               "-n", "5", "-k", "3", "--seed", "3") == 0
    out = capsys.readouterr().out
    assert "node 2: healthy" in out
    assert "transmitted=" in out
