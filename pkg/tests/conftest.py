from importlib import resources

import pytest

import fixture_world
from finhyper.corpus import corpus_from_token_sentences, load_corpus, load_stopwords


@pytest.fixture(scope="session")
def stopwords():
    ref = resources.files("finhyper").joinpath("data/stopwords_en.txt")
    with resources.as_file(ref) as path:
        return load_stopwords(path)


@pytest.fixture(scope="session")
def world(tmp_path_factory):
    """Paths of the materialized synthetic financial world."""
    root = tmp_path_factory.mktemp("world")
    return fixture_world.write_world(root)


@pytest.fixture(scope="session")
def world_corpus(world, stopwords):
    return load_corpus(world["corpus_dir"], stopwords)


@pytest.fixture(scope="session")
def two_topic_corpus():
    sentences, topic_a, topic_b = fixture_world.two_topic_corpus()
    return corpus_from_token_sentences({"doc0": sentences}), topic_a, topic_b
