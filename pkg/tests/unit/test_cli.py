from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from eingeom.cli import main
from eingeom.dynamics import cartan_a
from eingeom.sympl4 import sp_to_so_group

FIXTURE = Path(__file__).parent.parent / "fixtures" / "example_group.json"


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def cartan_file(tmp_path: Path) -> str:
    path = tmp_path / "a12.json"
    path.write_text(json.dumps(cartan_a(1.0, 2.0).tolist()))
    return str(path)


class TestBasics:
    def test_version(self, runner: CliRunner):
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "eingeom" in result.output

    def test_classify(self, runner: CliRunner):
        result = runner.invoke(
            main, ["classify", "--vector", "1,0,0,0,0", "--vector", "0,0,0,0,1", "--format", "csv"]
        )
        assert result.exit_code == 0
        assert "spacelike" in result.output
        assert "lightlike" in result.output

    def test_chart_and_invert(self, runner: CliRunner):
        result = runner.invoke(main, ["chart", "--point", "1,2,3"])
        assert result.exit_code == 0
        assert "patch" in result.output
        result = runner.invoke(main, ["invert", "--point", "0,0,0"])
        assert result.exit_code == 0
        assert "improper" in result.output

    def test_dictionary(self, runner: CliRunner):
        result = runner.invoke(main, ["dict", "--lagrangian", "e1,e3"])
        assert result.exit_code == 0
        assert "1 0 0 0 0" in result.output

    def test_roots(self, runner: CliRunner):
        result = runner.invoke(main, ["lie", "--format", "json"])
        assert result.exit_code == 0
        rows = json.loads(result.output)
        assert len(rows) == 8
        assert sum(r["simple"] for r in rows) == 2

    def test_parabolic(self, runner: CliRunner):
        result = runner.invoke(main, ["lie", "--subset=-2,0", "--format", "json"])
        assert result.exit_code == 0
        assert json.loads(result.output)[0]["dimension"] == 7

    def test_parquet(self, runner: CliRunner, tmp_path: Path):
        out = tmp_path / "classify.parquet"
        result = runner.invoke(
            main, ["classify", "--vector", "0,0,1,0,0", "--format", "parquet", "-o", str(out)]
        )
        assert result.exit_code == 0
        assert pd.read_parquet(out)["tag"].tolist() == ["timelike"]


class TestDynamicsCommands:
    def test_kak(self, runner: CliRunner, cartan_file: str):
        result = runner.invoke(main, ["kak", "--matrix", cartan_file, "--format", "json"])
        assert result.exit_code == 0
        row = json.loads(result.output)[0]
        assert row["group"] == "sp4"
        assert np.isclose(row["exponent1"], 1.0)
        assert np.isclose(row["exponent2"], 2.0)

    def test_distortion(self, runner: CliRunner, cartan_file: str):
        result = runner.invoke(
            main, ["distortion", "--matrix", cartan_file, "--depth", "8", "--format", "json"]
        )
        assert result.exit_code == 0
        rows = json.loads(result.output)
        assert len(rows) == 8
        assert rows[-1]["distortion"] == "mixed"

    def test_limits_of_a_transform(self, runner: CliRunner, tmp_path: Path):
        path = tmp_path / "g.json"
        path.write_text(json.dumps(sp_to_so_group(cartan_a(1.0, 2.0)).matrix.tolist()))
        result = runner.invoke(
            main, ["--form", "anti", "limits", "--matrix", str(path), "--format", "json"]
        )
        assert result.exit_code == 0
        rows = json.loads(result.output)
        assert [r["role"] for r in rows][:2] == ["source", "target"]
        assert rows[0]["distortion"] == "mixed"

    def test_limits_of_a_group(self, runner: CliRunner):
        result = runner.invoke(
            main, ["limits", "--scene", str(FIXTURE), "--depth", "2", "--format", "json"]
        )
        assert result.exit_code == 0
        rows = json.loads(result.output)
        assert len(rows) == 9
        assert rows[0]["word"] == "g0"

    def test_non_symplectic_matrix(self, runner: CliRunner, tmp_path: Path):
        path = tmp_path / "bad.txt"
        path.write_text("2 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n")
        result = runner.invoke(main, ["kak", "--matrix", str(path)])
        assert result.exit_code == 2
        assert "error:" in result.output


class TestCrookedCommands:
    def test_membership(self, runner: CliRunner):
        result = runner.invoke(main, ["crooked", "--point", "0,1,0", "--point", "2,-1,1"])
        assert result.exit_code == 0
        assert "outside+" in result.output
        assert "wing1" in result.output

    def test_strata(self, runner: CliRunner):
        result = runner.invoke(main, ["crooked", "--format", "csv"])
        assert result.exit_code == 0
        assert "ideal1" in result.output
        assert "psi2-" in result.output

    def test_degenerate_spine(self, runner: CliRunner):
        result = runner.invoke(main, ["crooked", "--spine", "0,1,1"])
        assert result.exit_code == 2

    def test_disjoint_scene(self, runner: CliRunner):
        result = runner.invoke(
            main,
            ["disjoint", "--scene", str(FIXTURE), "--samples", "500", "--format", "json"],
        )
        assert result.exit_code == 0
        rows = json.loads(result.output)
        assert len(rows) == 3
        assert all(r["disjoint"] and r["agrees"] for r in rows)


class TestGroupCommands:
    def test_certify(self, runner: CliRunner):
        result = runner.invoke(
            main,
            ["group-certify", "--scene", str(FIXTURE), "--depth", "4", "--samples", "500"],
        )
        assert result.exit_code == 0
        assert "certified-to-depth-4" in result.output
        assert "hyperbolic" in result.output

    def test_orbit(self, runner: CliRunner):
        result = runner.invoke(
            main,
            ["orbit", "--scene", str(FIXTURE), "--object", "c1", "--depth", "1", "--format=json"],
        )
        assert result.exit_code == 0
        assert len(json.loads(result.output)) == 3

    def test_unknown_object(self, runner: CliRunner):
        result = runner.invoke(main, ["orbit", "--scene", str(FIXTURE), "--object", "nope"])
        assert result.exit_code == 2
        assert "nope" in result.output

    def test_broken_scene(self, runner: CliRunner, tmp_path: Path):
        path = tmp_path / "broken.json"
        path.write_text('{"objects": [')
        result = runner.invoke(main, ["group-certify", "--scene", str(path)])
        assert result.exit_code == 2
        assert "line 1" in result.output


class TestExport:
    def test_lightcone_obj(self, runner: CliRunner, tmp_path: Path):
        out = tmp_path / "cone.obj"
        result = runner.invoke(
            main, ["export", "--lightcone", "0,0,0", "--resolution", "100", "-o", str(out)]
        )
        assert result.exit_code == 0
        text = out.read_text()
        assert text.startswith("# eingeom mesh")
        assert "g future" in text

    def test_scene_plane(self, runner: CliRunner):
        result = runner.invoke(
            main,
            ["export", "--scene", str(FIXTURE), "--object", "C1", "--resolution", "100"],
        )
        assert result.exit_code == 0
        assert "g wing1" in result.output

    def test_resolution_too_small(self, runner: CliRunner):
        result = runner.invoke(main, ["export", "--lightcone", "0,0,0", "--resolution", "4"])
        assert result.exit_code == 1


class TestUsageErrors:
    def test_missing_input(self, runner: CliRunner):
        result = runner.invoke(main, ["chart"])
        assert result.exit_code == 1

    def test_bad_vector(self, runner: CliRunner):
        result = runner.invoke(main, ["classify", "--vector", "1,x,0"])
        assert result.exit_code == 1
        assert "not a list of numbers" in result.output

    def test_bad_environment(self, runner: CliRunner):
        result = runner.invoke(main, ["lie"], env={"EINGEOM_EPS": "tiny"})
        assert result.exit_code == 1
        assert "EINGEOM_EPS" in result.output

    def test_unknown_form_in_environment(self, runner: CliRunner):
        result = runner.invoke(main, ["lie"], env={"EINGEOM_FORM": "bogus"})
        assert result.exit_code == 1
        assert "form must be one of" in result.output
