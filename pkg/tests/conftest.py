"""Shared fixture paths, corpus builders, and a local fixture web server."""

from __future__ import annotations

import threading
from functools import partial
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from ontosearch.corpus_index import Document

FIXTURES = Path(__file__).parent / "fixtures"


class _QuietHandler(SimpleHTTPRequestHandler):
    def log_message(self, *args) -> None:  # keep test output clean
        pass


@pytest.fixture(scope="session")
def site_server():
    """Serve tests/fixtures/site over real HTTP on an ephemeral port."""
    handler = partial(_QuietHandler, directory=str(FIXTURES / "site"))
    server = ThreadingHTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{server.server_address[1]}"
    finally:
        server.shutdown()
        thread.join(timeout=5)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def make_planted_corpus() -> list[Document]:
    """Two disjoint 4-term topics, each co-occurring in 5 docs, plus noise.

    Topic terms never cross document boundaries, so the two planted
    4-sets are the global maxima of the core-scoring objective.
    """
    topic_a = "alpha bravo charlie delta"
    topic_b = "echo foxtrot golf hotel"
    docs = [Document(i, f"a{i}.txt", topic_a) for i in range(5)]
    docs += [Document(5 + i, f"b{i}.txt", topic_b) for i in range(5)]
    docs.append(Document(10, "n0.txt", "november oscar papa quebec"))
    docs.append(Document(11, "n1.txt", "november romeo sierra tango"))
    return docs


@pytest.fixture()
def planted_corpus() -> list[Document]:
    return make_planted_corpus()


def make_carcinoma_corpus() -> list[Document]:
    """Ten documents about cancer where most relevant ones avoid the word.

    The relevant set is {0,1,2,3,4,5,9}; a raw "cancer" query only reaches
    docs 0, 6 (a zodiac red herring), and 9, while the synonym- and
    concept-expanded vocabulary (carcinoma, malignancy, mammary, breast,
    lump, leukemia) covers the rest.
    """
    texts = [
        "cancer screening saves lives and early cancer detection helps",
        "a breast lump was found during the routine exam",
        "the biopsy confirmed ductal carcinoma in the sampled tissue",
        "mammary carcinoma is usually treated with surgery",
        "leukemia is a malignancy of the blood and marrow",
        "the painless lump turned out to be completely benign",
        "the zodiac sign cancer spans late june and july",
        "my cell phone battery died at the store today",
        "bees build honeycomb cells out of beeswax",
        "oncology clinics offer cancer treatment and supportive care",
    ]
    return [Document(i, f"d{i}.txt", text) for i, text in enumerate(texts)]


CARCINOMA_RELEVANT = frozenset({0, 1, 2, 3, 4, 5, 9})


@pytest.fixture()
def carcinoma_corpus() -> list[Document]:
    return make_carcinoma_corpus()
