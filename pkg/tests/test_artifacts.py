""" Tests of result files and small helpers """

import json
import math
import os

import numpy as np
import pandas as pd
import pytest

from ringmod.artifacts import RunManifest, load_manifest, map_grid_images, read_csv, write_csv, write_svg
from ringmod.canonical import Annulus, ring_to_domain
from ringmod.const import MANIFEST_FILE, THREADS_ENV_VAR
from ringmod.exceptions import InvalidInputError
from ringmod.harmonic import radial_nitsche_map
from ringmod.utils import dump_json, ordered_map, thread_count, to_serializable


class TestJSON:
    def test_sorted_and_stable(self):
        a = dump_json({"b": 1, "a": [1.5, 2]})
        b = dump_json({"a": [1.5, 2], "b": 1})
        assert a == b
        assert a.index('"a"') < a.index('"b"')

    def test_serializable_values(self):
        data = to_serializable(
            {"z": 1 + 2j, "arr": np.array([1, 2]), "flag": np.bool_(True), "big": math.inf}
        )
        assert data == {"z": [1.0, 2.0], "arr": [1, 2], "flag": True, "big": "inf"}

    def test_write(self, tmp_path):
        path = str(tmp_path / "out.json")
        dump_json({"x": np.float64(0.1)}, path)
        with open(path) as f:
            assert json.load(f) == {"x": 0.1}


class TestCSV:
    def test_schema_line(self, tmp_path):
        path = str(tmp_path / "t.csv")
        write_csv(pd.DataFrame({"h": [0.5, 0.25], "value": [1.0, 1.1]}), path, "levels")
        with open(path) as f:
            assert f.readline().strip() == "#schema=levels/1"
        assert list(read_csv(path)["h"]) == [0.5, 0.25]

    def test_missing_schema(self, tmp_path):
        path = tmp_path / "plain.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(InvalidInputError):
            read_csv(str(path))


class TestThreads:
    def test_env_cap(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV_VAR, "3")
        assert thread_count() == 3

    def test_env_floor(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV_VAR, "0")
        assert thread_count() == 1

    def test_env_invalid(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV_VAR, "many")
        with pytest.raises(InvalidInputError):
            thread_count()

    @pytest.mark.parametrize("threads", [1, 4])
    def test_order_preserved(self, threads):
        assert ordered_map(lambda x: x * x, range(10), threads) == [x * x for x in range(10)]


class TestManifest:
    def test_write_and_load(self, tmp_path):
        manifest = RunManifest(str(tmp_path), "canonical", ["canonical", "--ring", "annulus"])
        manifest.add_input("ring", "annulus")
        manifest.path("canonical.json")
        manifest.write()
        data = load_manifest(str(tmp_path))
        assert data["argv"] == ["canonical", "--ring", "annulus"]
        assert data["outputs"] == ["canonical.json"]
        assert "numpy" in data["versions"]
        assert os.path.isfile(tmp_path / MANIFEST_FILE)

    def test_not_a_manifest(self, tmp_path):
        path = tmp_path / "other.json"
        path.write_text('{"command": "x"}')
        with pytest.raises(InvalidInputError):
            load_manifest(str(path))


class TestFigures:
    def test_svg(self, tmp_path):
        dom = ring_to_domain(Annulus(1, 2), 64)
        path = write_svg(str(tmp_path / "d.svg"), [dom], title="A(1, 2)")
        with open(path) as f:
            assert "<svg" in f.read()

    def test_grid_images_of_annulus(self):
        source = ring_to_domain(Annulus(1, 2), 256)
        hmap = radial_nitsche_map(1, 2, 1, 3).map
        curves = map_grid_images(hmap, source, lines=4, samples=50)
        assert len(curves) == 8
        # circles map to circles
        assert np.allclose(np.abs(curves[0][np.isfinite(curves[0])]), 1.0, atol=1e-3)
