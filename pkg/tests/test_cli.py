"""Command line tests against the bundled fixtures and their goldens."""

import io
import json
from importlib import resources

import pytest

from snakegraphs.cli import main

FIXTURES = resources.files("snakegraphs") / "fixtures"


def fixture(name):
    return str(FIXTURES / name)


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def golden(name):
    return (FIXTURES / name).read_text(encoding="utf-8")


class TestGoldens:
    @pytest.mark.parametrize("name,argv", [
        ("annulus", ["expand"]),
        ("selffolded_disk", ["expand", "--keep-boundary"]),
        ("punctured_torus", ["expand"]),
        ("hexagon", ["expand"]),
        ("skein_octagon", ["skein-check"]),
    ])
    def test_fixture_matches_golden(self, name, argv):
        code, text = run(argv + [fixture(name + ".json")])
        assert code == 0
        assert text == golden(name + ".golden")

    def test_output_is_byte_stable(self):
        runs = {run(["expand", fixture("annulus.json")])[1]
                for _ in range(3)}
        assert len(runs) == 1


class TestExpand:
    def test_json_format_round_trips(self):
        code, text = run(["expand", "--format", "json",
                          fixture("hexagon.json")])
        assert code == 0
        doc = json.loads(text)
        names = [row["name"] for row in doc["curves"]]
        assert names == ["short-chord", "long-chord"]
        short = next(r for r in doc["curves"] if r["name"] == "short-chord")
        assert short["X"] == "x:0-2^-1*x:0-3*y:0-2 + x:0-2^-1"
        assert short["F"] == "y:0-2 + 1"

    def test_curve_filter(self):
        code, text = run(["expand", "--curve", "short-chord",
                          fixture("hexagon.json")])
        assert code == 0
        assert text.startswith("curve: short-chord\n")
        assert "long-chord" not in text

    def test_unknown_curve_name(self, capsys):
        code, _ = run(["expand", "--curve", "nope",
                       fixture("hexagon.json")])
        assert code == 1
        assert "CLIError" in capsys.readouterr().err

    def test_max_tiles_guard(self, capsys):
        code, _ = run(["expand", "--max-tiles", "2",
                       fixture("hexagon.json")])
        assert code == 1
        assert "max-tiles" in capsys.readouterr().err


class TestOtherVerbs:
    def test_bmatrix_rows(self):
        code, text = run(["bmatrix", fixture("annulus.json")])
        assert code == 0
        lines = text.splitlines()
        assert len(lines) == 4
        assert lines[0].startswith("1: ")
        rows = [[int(v) for v in l.split(":")[1].split()] for l in lines]
        for i in range(4):
            assert rows[i][i] == 0
            for j in range(4):
                assert rows[i][j] == -rows[j][i]
        assert sum(abs(v) for v in rows[0]) == 2

    def test_bmatrix_json(self):
        code, text = run(["bmatrix", "--format", "json",
                          fixture("annulus.json")])
        assert code == 0
        doc = json.loads(text)
        assert doc["arcs"] == ["1", "2", "3", "4"]
        assert all(len(row) == 4 for row in doc["b"])

    def test_matchings_counts(self):
        code, text = run(["matchings", fixture("annulus.json")])
        assert code == 0
        lines = text.splitlines()
        assert sum(1 for l in lines if l.startswith("core:")) == 6
        assert sum(1 for l in lines if l.startswith("bridge:")) == 2

    def test_snake_dot(self):
        code, text = run(["snake-dot", "--curve", "bridge",
                          fixture("annulus.json")])
        assert code == 0
        assert text.startswith("graph")
        assert "x:1" in text

    def test_verify(self):
        code, text = run(["verify", fixture("annulus.json")])
        assert code == 0
        assert text == ("curve core: methods agree\n"
                        "curve bridge: methods agree\n")

    def test_verify_skips_special_kinds(self):
        code, text = run(["verify", fixture("punctured_torus.json")])
        assert code == 0
        assert "curve around-puncture: skipped" in text

    def test_selftest_exit_code(self, monkeypatch):
        monkeypatch.setenv("SNAKE_SELFTEST_TRIALS", "3")
        code1, text1 = run(["selftest", "--seed", "2"])
        code2, text2 = run(["selftest", "--seed", "2"])
        assert code1 == code2 == 0
        assert text1 == text2
        assert text1.endswith("result: PASS\n")


class TestErrors:
    def test_bad_json(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{ nope", encoding="utf-8")
        code, _ = run(["expand", str(p)])
        assert code == 1
        err = capsys.readouterr().err
        assert "ParseError" in err and "line 1" in err

    def test_unknown_document_key(self, tmp_path, capsys):
        p = tmp_path / "odd.json"
        doc = json.loads(golden("annulus.json"))
        doc["extra"] = True
        p.write_text(json.dumps(doc), encoding="utf-8")
        code, _ = run(["expand", str(p)])
        assert code == 1
        assert "ParseError" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        code, _ = run(["expand", "/nonexistent/surface.json"])
        assert code == 1
        assert "ParseError" in capsys.readouterr().err

    def test_skein_check_needs_both_keys(self, tmp_path, capsys):
        p = tmp_path / "half.json"
        p.write_text(json.dumps({"surface": {}}), encoding="utf-8")
        code, _ = run(["skein-check", str(p)])
        assert code == 1
        assert "ParseError" in capsys.readouterr().err
