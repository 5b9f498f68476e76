import os

import pytest

from qconvenc import parse_code

CORPUS_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "corpus")


def corpus_path(name: str) -> str:
    return os.path.join(CORPUS_DIR, name + ".qcc")


def load_code(name: str):
    with open(corpus_path(name), "r", encoding="utf-8") as handle:
        return parse_code(handle.read())


@pytest.fixture
def running1():
    return load_code("running1")


@pytest.fixture
def running2():
    return load_code("running2")
