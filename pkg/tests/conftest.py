""" Configuration for modules with independent tests of models. """

import os

import pytest

from ringmod.canonical import RING_CLASSES, ring_to_domain
from ringmod.condenser import CondenserOptions
from ringmod.parsers import read_domain

# Reduced grids keep condenser-backed tests fast; acceptance-scale runs are marked slow.
FAST_OPTIONS = dict(base_resolution=128, levels=3)


def get_path_to_example_file(file_name):
    return os.path.join(
        os.path.dirname(os.path.abspath(__file__)),
        "data",
        "example_domains",
        file_name,
    )


@pytest.fixture
def example_domain_path(request):
    return get_path_to_example_file(request.param)


@pytest.fixture
def example_domain(request):
    return read_domain(get_path_to_example_file(request.param))


@pytest.fixture
def untagged_domain(request):
    """Canonical realization with the tag dropped, forcing the numeric solver."""
    kind, params = request.param
    domain = ring_to_domain(RING_CLASSES[kind](*params))
    domain.canonical_tag = None
    return domain


@pytest.fixture
def fast_options():
    return CondenserOptions(**FAST_OPTIONS)
