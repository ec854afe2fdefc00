import dataclasses
import json
import subprocess
import sys

import pytest

from modgauss import cli
from modgauss.cli import (ConfigError, build_config, format_cell, main, parse_config_text,
                          render_csv, validate)
from modgauss.errors import IntegrityError
from modgauss.experiments import EXPERIMENTS, parse_group
from modgauss.groups import GroupKind


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_parse_config_types():
    entries = parse_config_text("""
        # comment line
        p:int = 31
        eps:float = 0.25   # trailing comment
        label:str = hello
        flag:bool = true
        sizes:ints = 16, 64
        ts:floats = 0.5,1.5
    """)
    assert entries == {"p": ("int", 31), "eps": ("float", 0.25), "label": ("str", "hello"),
                       "flag": ("bool", True), "sizes": ("ints", [16, 64]),
                       "ts": ("floats", [0.5, 1.5])}


@pytest.mark.parametrize("text", ["p = 3", "p:complex = 1", "p:int = x", "p:int = 1\np:int = 2",
                                  "flag:bool = maybe"])
def test_parse_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_schema_checks():
    with pytest.raises(ConfigError):
        build_config("figure2", {"nope": ("int", 1)})
    with pytest.raises(ConfigError):
        build_config("figure2", {"lo": ("int", 1)})
    with pytest.raises(ConfigError):
        build_config("figure2", {"experiment": ("str", "figure1")})
    with pytest.raises(ConfigError):
        build_config("figure2", {}, seed=-1)
    cfg = build_config("figure2", {"seed": ("int", 9), "hi": ("float", 3.0)})
    assert cfg.seed == 9 and cfg.parameters["hi"] == 3.0 and cfg.parameters["lo"] == 1.0
    assert build_config("figure2", {"seed": ("int", 9)}, seed=4).seed == 4


def test_parse_group_labels():
    assert parse_group("U8") == GroupKind.unitary(8)
    assert parse_group("USp8").size == 4 and parse_group("SO8").size == 4
    with pytest.raises(Exception):
        parse_group("GL3")


def test_format_and_csv():
    assert format_cell(True) == "true" and format_cell(3) == "3"
    assert format_cell(float("nan")) == "nan"
    assert format_cell(1 / 3) == "0.333333333333"
    text = render_csv(["a", "b"], [(1, 0.5), (2, 1e-20)])
    assert text == "a,b\n1,0.5\n2,1e-20\n"


def test_validate_reports():
    assert validate("nope", {})["diagnostics"]
    minimal = validate("figure2", {})
    assert minimal["diagnostics"] == [] and minimal["projected_cost"] is None
    big = validate("ff-sweep", {"p": ("int", 101), "d": ("int", 8)})
    assert big["over_budget"] and big["projected_cost"] == 101 ** 8
    ok = validate("ff-sweep", {})
    assert not ok["over_budget"] and ok["projected_cost"] == 31 ** 4


def test_validate_exit_codes(tmp_path, capsys):
    assert main(["figure2", "--validate"]) == 0
    assert main(["ff-sweep", "--validate", "--config", write(tmp_path, "p:int = 101\nd:int = 8")]) == 4
    assert main(["figure2", "--validate", "--config", write(tmp_path, "zz:int = 1")]) == 2
    assert main(["nope", "--validate"]) == 2
    report = json.loads(capsys.readouterr().out.split("\n}\n")[0] + "\n}")
    assert report["experiment"] == "figure2"


def test_figure2_output(tmp_path, capsys):
    assert main(["figure2", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "figure2.csv").read_bytes().split(b"\n")
    assert lines[0] == b"t,value" and len(lines) == 142 and lines[-1] == b""
    assert b"\r" not in (tmp_path / "figure2.csv").read_bytes()
    meta = json.loads((tmp_path / "figure2.json").read_text())
    assert set(meta) >= {"config", "seed", "shards", "wall_time_s", "versions", "checks", "csv_sha256"}
    assert meta["checks"] and all(meta["checks"].values())
    assert "PASS" in capsys.readouterr().out


def test_output_independent_of_shards(tmp_path):
    cfg = write(tmp_path, "groups:str = U4,USp4\nsamples:int = 20000\n")
    outs = []
    for shards in (1, 3):
        out = tmp_path / f"s{shards}"
        assert main(["charfn-oracle", "--config", cfg, "--seed", "17", "--shards", str(shards),
                     "--out", str(out)]) == 0
        outs.append((out / "charfn-oracle.csv").read_bytes())
    assert outs[0] == outs[1]
    other = tmp_path / "other"
    main(["charfn-oracle", "--config", cfg, "--seed", "18", "--out", str(other)])
    assert (other / "charfn-oracle.csv").read_bytes() != outs[0]


def test_error_exit_codes(tmp_path, capsys, monkeypatch):
    assert main(["figure2", "--config", str(tmp_path / "missing.cfg"), "--out", str(tmp_path)]) == 2
    assert main(["figure2", "--config", write(tmp_path, "lo:float = 0"), "--out", str(tmp_path)]) == 2
    rec = json.loads((tmp_path / "figure2.error.json").read_text())
    assert rec["exit_code"] == 2 and rec["error"] == "DomainError"
    code = main(["ff-sweep", "--config", write(tmp_path, "p:int = 101\nd:int = 8"),
                 "--out", str(tmp_path)])
    assert code == 4
    rec = json.loads((tmp_path / "ff-sweep.error.json").read_text())
    assert rec["error"] == "ResourceError" and rec["projected_cost"] > 10 ** 8

    def broken(params, seed, shards):
        raise IntegrityError("RH check failed")
    monkeypatch.setitem(cli.EXPERIMENTS, "figure1",
                        dataclasses.replace(EXPERIMENTS["figure1"], run=broken))
    assert main(["figure1", "--out", str(tmp_path)]) == 3
    assert "IntegrityError" in capsys.readouterr().err


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "modgauss.cli", "figure1", "--validate"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["experiment"] == "figure1"
