"""Concept-based document search.

Pipeline: crawl (or ingest) a corpus, build a tf-idf index, mine
k-cores of co-occurring keywords, disambiguate query terms against a
thesaurus, map them onto a domain ontology, expand the query with
weighted related terms, retrieve, and evaluate keyword vs. expanded
search with interpolated precision/recall.
"""

__version__ = "0.1.0"
