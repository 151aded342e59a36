""" Tests of domain file parsing """

import json

import pytest

from ringmod.canonical import Annulus, DoubleTeichmuller
from ringmod.exceptions import DomainFileError, InvalidInputError
from ringmod.parsers import (
    JSONDomainParser,
    YAMLDomainParser,
    domain_from_dict,
    parser_by_ext,
    read_domain,
    select_parser,
)


class TestParserSelection:
    @pytest.mark.parametrize(
        ["name", "parser"],
        [
            ("a.json", JSONDomainParser),
            ("a.yaml", YAMLDomainParser),
            ("a.yml", YAMLDomainParser),
        ],
    )
    def test_by_extension(self, name, parser):
        assert isinstance(select_parser(name), parser)

    def test_registry(self):
        assert set(parser_by_ext()) == {"json", "yaml", "yml"}

    @pytest.mark.parametrize("name", ["domain.txt", "domain"])
    def test_unsupported_extension(self, name):
        with pytest.raises(DomainFileError):
            select_parser(name)


class TestReadDomain:
    @pytest.mark.parametrize(
        "example_domain_path",
        ["annulus_1_2.json", "square_in_square.json", "rectangle_in_rectangle.yaml"],
        indirect=True,
    )
    def test_examples_parse(self, example_domain_path):
        dom = read_domain(example_domain_path)
        assert not dom.is_degenerate

    @pytest.mark.parametrize("example_domain", ["annulus_1_2.json"], indirect=True)
    def test_canonical_record_is_tagged(self, example_domain):
        assert example_domain.canonical_tag == Annulus(1, 2)

    @pytest.mark.parametrize("example_domain", ["rectangle_in_rectangle.yaml"], indirect=True)
    def test_yaml_polygon(self, example_domain):
        assert example_domain.bounded.vertices.size == 4
        assert -3 - 1.5j in example_domain.unbounded.polygon.vertices

    @pytest.mark.parametrize("example_domain_path", ["nonexistent.json"], indirect=True)
    def test_missing_file(self, example_domain_path):
        with pytest.raises(DomainFileError):
            read_domain(example_domain_path)

    @pytest.mark.parametrize("example_domain_path", ["touching.json"], indirect=True)
    def test_intersecting_components(self, example_domain_path):
        with pytest.raises(InvalidInputError):
            read_domain(example_domain_path)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(DomainFileError):
            read_domain(str(path))

    def test_canonical_tag_on_polygonal_record(self, tmp_path):
        path = tmp_path / "slit.json"
        path.write_text(
            json.dumps(
                {
                    "kind": "polygonal",
                    "canonical": {"ring": "double_teichmuller", "params": [2, 3]},
                    "bounded": [[-1, 0], [1, 0]],
                    "unbounded": {
                        "rays": [{"from": [-2, 0], "dir": [-1, 0]}, {"from": [3, 0], "dir": [1, 0]}]
                    },
                }
            )
        )
        assert read_domain(str(path)).canonical_tag == DoubleTeichmuller(2, 3)


class TestRecords:
    @pytest.mark.parametrize(
        "record",
        [
            [],
            {"kind": "spline"},
            {"kind": "canonical"},
            {"kind": "polygonal", "bounded": [[0, 0]]},
            {"kind": "polygonal", "bounded": [[0, 0]], "unbounded": {"polygon": [], "rays": []}},
            {"kind": "polygonal", "bounded": [[0, 0]], "unbounded": {"disk": []}},
            {"kind": "polygonal", "bounded": [[0, 0, 0]], "unbounded": {"infinity": True}},
            {"kind": "polygonal", "bounded": [[0, 0]], "unbounded": {"rays": [{"from": [1, 0]}]}},
        ],
    )
    def test_malformed(self, record):
        with pytest.raises(InvalidInputError):
            domain_from_dict(record)

    def test_bounded_complement(self):
        dom = domain_from_dict(
            {"kind": "polygonal", "bounded": [[0, 0], [1, 0], [0, 1]], "unbounded": {"infinity": None}}
        )
        assert dom.is_degenerate

    def test_canonical_vertices(self):
        dom = domain_from_dict({"kind": "canonical", "canonical": {"ring": "annulus", "params": [1, 2]}}, 64)
        assert dom.bounded.vertices.size == 64
