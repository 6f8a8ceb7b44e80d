import numpy as np
import pytest

from eikdg.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_SOLVE, main
from eikdg.config import ConfigError, RunConfig, parse_overrides, parse_text
from eikdg.export import read_csv
from eikdg.mesh import read_mesh

SMALL = "case = cylinder\nN = 2\nmesh = 3x3\nsubdivision = 1\n"


def write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_text_comments_and_precedence():
    raw = parse_text("# header\ncase = square  # trailing\nN=2\nN = 4\n\n")
    assert raw == {"case": "square", "N": "4"}
    with pytest.raises(ConfigError, match="line 1"):
        parse_text("no equals sign")
    assert parse_overrides(["c=0.5", "mesh = 4x4"]) == {"c": "0.5", "mesh": "4x4"}
    with pytest.raises(ConfigError):
        parse_overrides(["c"])


def test_config_defaults_and_alias():
    cfg = RunConfig.from_mapping({"case": "square", "order": "4"})
    assert cfg.N == 4 and cfg.c == 0.3 and cfg.mesh_params["far_dist"] == 29.0
    assert cfg.mesh_params["geometry_order"] == 1
    again = RunConfig.from_mapping(parse_text(cfg.echo()))
    assert again.echo() == cfg.echo()


@pytest.mark.parametrize("raw, needle", [
    ({"N": 2}, "'case'"),
    ({"case": "cylinder"}, "'N'"),
    ({"case": "torus", "N": 2}, "unknown case"),
    ({"case": "cylinder", "N": 1}, "'N'"),
    ({"case": "cylinder", "N": "two"}, "'N'"),
    ({"case": "cylinder", "N": 2, "c": -1}, "'c'"),
    ({"case": "cylinder", "N": 2, "g2_mode": "on"}, "g2_mode"),
    ({"case": "cylinder", "N": 2, "export": "png"}, "export"),
    ({"case": "cylinder", "N": 2, "far_dist": 3}, "far_dist"),
    ({"case": "cylinder", "N": 2, "max_iter": 0}, "max_iter"),
    ({"case": "mesh_file", "N": 2}, "mesh_path"),
])
def test_config_validation_names_parameter(raw, needle):
    with pytest.raises(ConfigError, match=needle):
        RunConfig.from_mapping(raw)


def test_run_writes_artifacts_and_reproduces(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    cfg = write(tmp_path, SMALL + f"out = {out1}\n")
    assert main(["--serial", "run", cfg]) == EXIT_OK
    for name in ("config.resolved", "residuals.tsv", "report.txt", "errors.txt", "field.vtu", "field.csv", "field.tsv"):
        assert (out1 / name).is_file(), name
    assert "CONVERGED" in (out1 / "report.txt").read_text()
    # the resolved echo is a complete configuration
    assert main(["--serial", "run", str(out1 / "config.resolved"), f"out={out2}"]) == EXIT_OK
    for name in ("field.csv", "field.vtu", "errors.txt", "residuals.tsv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name
    assert np.all(np.isfinite(read_csv(out1 / "field.csv")))


def test_run_exit_codes(tmp_path, capsys):
    assert main(["run", write(tmp_path, "case = cylinder\nmesh = 3x3\n")]) == EXIT_CONFIG
    assert "'N'" in capsys.readouterr().err
    assert main(["run", write(tmp_path, "case = torus\nN = 2\n")]) == EXIT_CONFIG
    assert main(["run", str(tmp_path / "absent.cfg")]) == EXIT_IO
    missing = write(tmp_path, f"case = mesh_file\nN = 2\nmesh_path = {tmp_path / 'nope.mesh'}\nout = {tmp_path / 'o'}\n")
    assert main(["run", missing]) == EXIT_IO
    blocked = tmp_path / "file"
    blocked.write_text("")
    assert main(["run", write(tmp_path, SMALL + f"out = {blocked / 'sub'}\n")]) == EXIT_IO
    out = tmp_path / "short"
    assert main(["run", write(tmp_path, SMALL + f"max_iter = 2\nout = {out}\n")]) == EXIT_SOLVE
    assert (out / "field.vtu").is_file() and "MAX_ITER" in (out / "report.txt").read_text()


def test_thread_variable_is_validated(tmp_path, monkeypatch):
    monkeypatch.setenv("EIKDG_THREADS", "zero")
    assert main(["run", write(tmp_path, SMALL)]) == EXIT_CONFIG


def test_study_table(tmp_path, capsys):
    cfg = write(tmp_path, "case = cylinder\norders = 2,3\nmeshes = 3x3,6x6\nrate_margin = 0\n", "study.cfg")
    table = tmp_path / "t.tsv"
    assert main(["--serial", "study", cfg, "--out", str(table)]) == EXIT_OK
    lines = table.read_text().splitlines()
    assert lines[0].split("\t")[:3] == ["case", "N", "elements"] and len(lines) == 5
    rates = [float(l.split("\t")[6]) for l in lines[1:] if l.split("\t")[6]]
    assert len(rates) == 2 and min(rates) > 2.5
    assert capsys.readouterr().out == table.read_text()


def test_study_single_mesh_and_no_exact(tmp_path, caplog):
    cfg = write(tmp_path, "case = cylinder\norders = 2\nmeshes = 3x3\n", "one.cfg")
    assert main(["study", cfg]) == EXIT_OK
    assert "single-mesh" in caplog.text
    assert main(["study", write(tmp_path, "case = channel_sin\norders = 2\nmeshes = 2x2\n", "x.cfg")]) == EXIT_CONFIG


def test_mesh_command_round_trip(tmp_path):
    path = tmp_path / "cyl.mesh"
    assert main(["mesh", "cylinder", "mesh=3x3", "N=2", "--out", str(path)]) == EXIT_OK
    m = read_mesh(path)
    assert m.n_elements == 9
    assert main(["mesh", "torus", "--out", str(path)]) == EXIT_CONFIG
    assert main(["mesh", "cylinder", "radius=2", "--out", str(path)]) == EXIT_CONFIG
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["--serial", "run", write(tmp_path, SMALL + f"export = csv\nout = {a}\n")]) == EXIT_OK
    file_cfg = f"case = mesh_file\nN = 2\nmesh_path = {path}\nc = 0\ng1_mode = off\nexport = csv\nout = {b}\n"
    assert main(["--serial", "run", write(tmp_path, file_cfg)]) == EXIT_OK
    assert (a / "field.csv").read_bytes() == (b / "field.csv").read_bytes()
