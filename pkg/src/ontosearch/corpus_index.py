"""Tokenization, tf-idf statistics, and the on-disk inverted index.

The index is the ground truth every other component works from: the
k-core miner reads term weights and postings from it, retrieval scores
documents against it, and the crawler's output directory is one of the
two supported corpus sources (the other being any directory of ``.txt``
files).
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

INDEX_HEADER = "ONTOSEARCH-INDEX v1"

# A token is a maximal run of letters/digits; underscore is a separator.
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


class IndexFormatError(ValueError):
    """Raised when an index file does not conform to the persistence format."""


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one lowercase word per line, '#' comments allowed."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    """The packaged English stopword list."""
    text = resources.files("ontosearch.data").joinpath("stopwords_en.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


def tokenize(text: str, stopwords: frozenset[str] = frozenset()) -> list[str]:
    """Lowercase, split on any non-letter/non-digit run, and filter.

    Dropped: tokens shorter than two characters, tokens containing no
    letter (pure numbers), and stopwords.  Token order is preserved and
    duplicates are kept; no stemming is applied.
    """
    out: list[str] = []
    for tok in _WORD_RE.findall(text.lower()):
        if len(tok) < 2 or tok in stopwords:
            continue
        if not any(ch.isalpha() for ch in tok):
            continue
        out.append(tok)
    return out


@dataclass(frozen=True)
class Document:
    """One indexed document.  ``text`` is transient: it is never persisted."""

    doc_id: int
    source_uri: str
    text: str = ""
    token_count: int = 0


@dataclass
class TfIdfIndex:
    """In-memory inverted index over a fixed corpus of N documents.

    ``vocab`` maps term -> document frequency; ``postings`` maps
    term -> {doc_id: term frequency}.  Both are kept consistent by
    construction and re-validated when loading from disk.
    """

    documents: dict[int, Document]
    vocab: dict[str, int]
    postings: dict[str, dict[int, int]]
    stopwords: frozenset[str] = field(default_factory=frozenset)

    @property
    def n_docs(self) -> int:
        return len(self.documents)

    def tf(self, term: str, doc_id: int) -> int:
        if doc_id not in self.documents:
            raise KeyError(f"unknown doc_id {doc_id}")
        return self.postings.get(term, {}).get(doc_id, 0)

    def df(self, term: str) -> int:
        return self.vocab.get(term, 0)

    def tfidf(self, term: str, doc_id: int) -> float:
        """tf * ln(N / df); 0.0 for terms absent from the vocabulary or document.

        A term present in every document (df == N) weighs exactly 0.
        """
        if doc_id not in self.documents:
            raise KeyError(f"unknown doc_id {doc_id}")
        df = self.vocab.get(term, 0)
        if df == 0:
            return 0.0
        tf = self.postings[term].get(doc_id, 0)
        if tf == 0:
            return 0.0
        return tf * math.log(self.n_docs / df)

    def aggregate_weight(self, term: str) -> float:
        """Sum of tfidf(term, d) over all documents containing the term."""
        df = self.vocab.get(term, 0)
        if df == 0:
            return 0.0
        total_tf = sum(self.postings[term].values())
        return total_tf * math.log(self.n_docs / df)

    def top_terms(self, m: int) -> list[tuple[str, float]]:
        """The at-most-``m`` terms with the highest aggregate tf-idf weight.

        Zero-weight terms (df == N) are excluded; ties break
        lexicographically so the ranking is deterministic.
        """
        if m < 1:
            raise ValueError("m must be >= 1")
        weighted = [(t, self.aggregate_weight(t)) for t in self.vocab]
        weighted = [(t, w) for t, w in weighted if w > 0.0]
        weighted.sort(key=lambda tw: (-tw[1], tw[0]))
        return weighted[:m]


def build_index(docs: Iterable[Document], stopwords: frozenset[str] = frozenset()) -> TfIdfIndex:
    """Tokenize every document and build the inverted index.

    Documents keep their given doc_ids (which must be unique and >= 0);
    an empty corpus is an error.
    """
    doc_list = list(docs)
    if not doc_list:
        raise ValueError("empty corpus: at least one document is required")
    documents: dict[int, Document] = {}
    postings: dict[str, dict[int, int]] = {}
    for doc in doc_list:
        if doc.doc_id < 0:
            raise ValueError(f"doc_id must be >= 0, got {doc.doc_id}")
        if doc.doc_id in documents:
            raise ValueError(f"duplicate doc_id {doc.doc_id}")
        if "\t" in doc.source_uri or "\n" in doc.source_uri:
            raise ValueError(f"source_uri may not contain tabs or newlines: {doc.source_uri!r}")
        tokens = tokenize(doc.text, stopwords)
        documents[doc.doc_id] = replace(doc, token_count=len(tokens))
        for term, tf in Counter(tokens).items():
            postings.setdefault(term, {})[doc.doc_id] = tf
    vocab = {term: len(by_doc) for term, by_doc in postings.items()}
    return TfIdfIndex(documents=documents, vocab=vocab, postings=postings, stopwords=stopwords)


def load_corpus_dir(path: str | Path, stopwords: frozenset[str] = frozenset()) -> TfIdfIndex:
    """Index every ``*.txt`` file under ``path``.

    File name order (sorted) defines doc_id order, so re-indexing the
    same directory always yields the same index.  A crawler-written
    ``sources.tsv`` sidecar (file name TAB original URL) upgrades
    source_uri from the file name to the page URL when present.
    """
    root = Path(path)
    if not root.is_dir():
        raise ValueError(f"corpus directory not found: {root}")
    files = sorted(p for p in root.iterdir() if p.is_file() and p.suffix == ".txt")
    if not files:
        raise ValueError(f"no .txt files in corpus directory: {root}")
    uri_map: dict[str, str] = {}
    sidecar = root / "sources.tsv"
    if sidecar.is_file():
        for line in sidecar.read_text(encoding="utf-8").splitlines():
            name, _, url = line.partition("\t")
            if name and url:
                uri_map[name] = url
    docs = [
        Document(doc_id=i, source_uri=uri_map.get(p.name, p.name), text=p.read_text(encoding="utf-8"))
        for i, p in enumerate(files)
    ]
    return build_index(docs, stopwords)


def save_index(index: TfIdfIndex, path: str | Path) -> None:
    """Write the canonical text form: header, #DOCS, #VOCAB, #POSTINGS.

    Every section is sorted (docs by id, terms lexicographically,
    postings by term then doc_id), which makes save -> load -> save
    byte-identical.
    """
    lines = [INDEX_HEADER, "#DOCS"]
    for doc_id in sorted(index.documents):
        doc = index.documents[doc_id]
        lines.append(f"{doc.doc_id}\t{doc.source_uri}\t{doc.token_count}")
    lines.append("#VOCAB")
    for term in sorted(index.vocab):
        lines.append(f"{term}\t{index.vocab[term]}")
    lines.append("#POSTINGS")
    for term in sorted(index.postings):
        for doc_id in sorted(index.postings[term]):
            lines.append(f"{term}\t{doc_id}\t{index.postings[term][doc_id]}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_index(path: str | Path) -> TfIdfIndex:
    """Parse an index file, validating structure and statistics."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0] != INDEX_HEADER:
        raise IndexFormatError(f"{path}: missing '{INDEX_HEADER}' header")
    documents: dict[int, Document] = {}
    vocab: dict[str, int] = {}
    postings: dict[str, dict[int, int]] = {}
    section = None
    for lineno, line in enumerate(lines[1:], start=2):
        if line in ("#DOCS", "#VOCAB", "#POSTINGS"):
            section = line
            continue
        if section is None:
            raise IndexFormatError(f"{path}:{lineno}: content before any section header")
        parts = line.split("\t")
        if section == "#DOCS":
            if len(parts) != 3:
                raise IndexFormatError(f"{path}:{lineno}: expected doc_id<TAB>uri<TAB>token_count")
            try:
                doc_id, token_count = int(parts[0]), int(parts[2])
            except ValueError:
                raise IndexFormatError(f"{path}:{lineno}: non-integer doc fields") from None
            if doc_id in documents:
                raise IndexFormatError(f"{path}:{lineno}: duplicate doc_id {doc_id}")
            documents[doc_id] = Document(doc_id=doc_id, source_uri=parts[1], token_count=token_count)
        elif section == "#VOCAB":
            if len(parts) != 2:
                raise IndexFormatError(f"{path}:{lineno}: expected term<TAB>df")
            term = parts[0]
            if term in vocab:
                raise IndexFormatError(f"{path}:{lineno}: duplicate vocab term {term!r}")
            try:
                vocab[term] = int(parts[1])
            except ValueError:
                raise IndexFormatError(f"{path}:{lineno}: non-integer df") from None
        else:
            if len(parts) != 3:
                raise IndexFormatError(f"{path}:{lineno}: expected term<TAB>doc_id<TAB>tf")
            term = parts[0]
            try:
                doc_id, tf = int(parts[1]), int(parts[2])
            except ValueError:
                raise IndexFormatError(f"{path}:{lineno}: non-integer posting fields") from None
            if term not in vocab:
                raise IndexFormatError(f"{path}:{lineno}: posting for unknown term {term!r}")
            if doc_id not in documents:
                raise IndexFormatError(f"{path}:{lineno}: posting for unknown doc_id {doc_id}")
            if tf < 1:
                raise IndexFormatError(f"{path}:{lineno}: tf must be >= 1")
            if doc_id in postings.get(term, {}):
                raise IndexFormatError(f"{path}:{lineno}: duplicate posting ({term!r}, {doc_id})")
            postings.setdefault(term, {})[doc_id] = tf
    if not documents:
        raise IndexFormatError(f"{path}: no documents")
    for term, df in vocab.items():
        actual = len(postings.get(term, {}))
        if df != actual:
            raise IndexFormatError(f"{path}: term {term!r} declares df={df} but has {actual} postings")
    return TfIdfIndex(documents=documents, vocab=vocab, postings=postings)
