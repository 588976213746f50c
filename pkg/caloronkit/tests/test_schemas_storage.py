"""Tests for data-file schemas, typed loaders and atomic persistence."""

import csv
import json

import numpy as np
import pytest
from pydantic import ValidationError

from caloronkit.errors import InvariantError, SchemaError
from caloronkit.models.forms import graded_defect
from caloronkit.models.grid import torus
from caloronkit.schemas.data import ComplexArray, Component, GradedFormFile, GroupMapFile, PairFile
from caloronkit.schemas.grid import GridSpec
from caloronkit.services.chernweil import chern_character
from caloronkit.services.generator import random_connection
from caloronkit.services.lie import random_smooth_map
from caloronkit.storage import (
    load_map, load_pair, read_model, sha256_file, write_csv, write_model,
)


def test_pair_file_round_trip(tmp_path, pair):
    path = write_model(tmp_path / "pair.json", PairFile.from_pair(pair))
    loaded = load_pair(path)
    assert loaded.rank == 2
    assert loaded.unitary
    assert loaded.grid == pair.grid
    for index, array in pair.connection.coeffs.items():
        assert np.array_equal(loaded.connection.coeffs[index], array)
    assert np.array_equal(loaded.higgs.coeffs[()], pair.higgs.coeffs[()])


def test_group_map_file_round_trip(tmp_path, based_map):
    loaded = load_map(write_model(tmp_path / "map.json", GroupMapFile.from_map(based_map)))
    assert loaded.based and loaded.unitary
    assert np.array_equal(loaded.values, based_map.values)


def test_graded_form_file_round_trip(tmp_path):
    ch = chern_character(random_connection(torus(8, 8), 2, seed=1), 1)
    path = write_model(tmp_path / "chern.json", GradedFormFile.from_graded(ch, "chern"))
    loaded = read_model(path, GradedFormFile).to_graded()
    assert loaded.parity == "even"
    assert loaded.degrees == [0, 2]
    assert max(graded_defect(loaded, ch).values()) == 0.0
    assert read_model(path, GradedFormFile).quantity == "chern"


def test_missing_file(tmp_path):
    with pytest.raises(SchemaError):
        read_model(tmp_path / "absent.json", PairFile)


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError):
        load_pair(path)


def test_unknown_factor_kind(tmp_path, based_map):
    payload = GroupMapFile.from_map(based_map).model_dump()
    payload["grid"]["factors"][0]["kind"] = "cone"
    path = tmp_path / "map.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    with pytest.raises(SchemaError) as excinfo:
        load_map(path)
    assert excinfo.value.details["errors"]


def test_pair_file_needs_distinguished_circle(tmp_path, pair):
    payload = PairFile.from_pair(pair).model_dump()
    payload["grid"]["distinguished_circle"] = None
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    with pytest.raises(SchemaError):
        load_pair(path)


def test_loaded_map_is_revalidated(tmp_path):
    g = random_smooth_map(torus(8, loop=16), 2, seed=1, amplitude=0.1)
    model = GroupMapFile.from_map(g)
    model.based = True
    with pytest.raises(InvariantError):
        load_map(write_model(tmp_path / "map.json", model))


def test_complex_array_shapes():
    values = np.array([[1 + 2j, 3j], [0.5, -1j]])
    assert np.array_equal(ComplexArray.from_array(values).to_array(), values)
    with pytest.raises(ValidationError):
        ComplexArray(re=[1.0, 2.0], im=[1.0])


@pytest.mark.parametrize("index", [[1, 0], [2, 2], [-1]])
def test_component_index_validation(index):
    with pytest.raises(ValidationError):
        Component(index=index, values=ComplexArray(re=0.0, im=0.0))


def test_atomic_write_replaces_without_leftovers(tmp_path):
    spec = GridSpec.from_grid(torus(8, 8))
    path = tmp_path / "out" / "grid.json"
    write_model(path, spec)
    write_model(path, GridSpec.from_grid(torus(8, 12)))
    assert read_model(path, GridSpec).to_grid() == torus(8, 12)
    assert [p.name for p in path.parent.iterdir()] == ["grid.json"]


def test_sha256_is_deterministic(tmp_path, pair):
    a = write_model(tmp_path / "a.json", PairFile.from_pair(pair))
    b = write_model(tmp_path / "b.json", PairFile.from_pair(pair))
    assert sha256_file(a) == sha256_file(b)


def test_csv_uses_given_columns(tmp_path):
    path = write_csv(tmp_path / "rows.csv", [{"degree": 1, "sup_norm": 0.5, "extra": "x"}],
                     ["degree", "sup_norm", "status"])
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    assert rows == [{"degree": "1", "sup_norm": "0.5", "status": ""}]
