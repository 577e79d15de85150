import pytest

from rtlcheck.corpus import load_corpus, load_program, load_properties


@pytest.fixture(scope="session")
def corpus():
    """(entry, program term, property file) for each bundled example."""
    out = []
    for entry in load_corpus():
        source = load_program(entry)
        props = load_properties(entry)
        out.append((entry, source, props))
    return out


@pytest.fixture(scope="session")
def corpus_by_name(corpus):
    return {entry.name: (entry, source, props)
            for entry, source, props in corpus}
