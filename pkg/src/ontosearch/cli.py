"""Command-line entry points for the whole pipeline.

Subcommands: ``crawl`` fetches a bounded page set into a corpus
directory, ``index`` builds and persists the tf-idf index, ``mine``
extracts k-cores, ``query`` runs one search (scripted or interactive),
``serve`` starts the HTTP service, and ``eval`` compares the keyword
and expanded arms over a query file.

Exit codes: 0 success, 1 operational failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import socket
import sys
from itertools import combinations
from pathlib import Path

from .corpus_index import (
    TfIdfIndex,
    default_stopwords,
    load_corpus_dir,
    load_index,
    load_stopwords,
    save_index,
)
from .crawler import CrawlConfig, crawl, save_crawl_table, write_corpus
from .evaluation import (
    compare,
    format_report_table,
    format_report_tsv,
    load_qrels,
    load_queries,
    search,
)
from .expansion import EnrichedQuery, candidates, make_query, reformulate
from .kcore_miner import MinerConfig, load_kcores, mine_kcores, save_kcores
from .ontology import OntologyGraph, load_ontology
from .service import DEFAULT_PORT, create_app, load_state
from .thesaurus import load_thesaurus


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontosearch", description="concept-based search over a local corpus"
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("crawl", help="fetch a bounded set of pages into a corpus directory")
    p.add_argument("--seeds", nargs="+", required=True, metavar="URL")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--max-pages", type=int, default=20, metavar="N")
    p.add_argument("--same-host", action="store_true", help="only follow links on seed hosts")
    p.add_argument("--delay-ms", type=int, default=0, metavar="MS")
    p.set_defaults(func=_cmd_crawl)

    p = sub.add_parser("index", help="build and persist the tf-idf index for a corpus directory")
    p.add_argument("--corpus", required=True, metavar="DIR")
    p.add_argument("--stopwords", metavar="FILE", help="defaults to the packaged english list")
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_index)

    p = sub.add_parser("mine", help="mine keyword k-cores from a persisted index")
    p.add_argument("--index", required=True, metavar="FILE")
    p.add_argument("--k", type=int, default=4, metavar="N", help="terms per core")
    p.add_argument("--m", type=int, default=50, metavar="N", help="candidate pool size")
    p.add_argument("--q", type=int, default=10, metavar="N", help="cores to keep")
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_mine)

    p = sub.add_parser("query", help="run one query against the loaded stores")
    p.add_argument("raw", metavar="QUERY")
    _add_store_flags(p)
    p.add_argument("--interactive", action="store_true", help="choose candidates on stdin")
    p.add_argument("--concept", metavar="ID", help="scripted concept selection")
    p.add_argument("--sense", metavar="ID", help="scripted sense selection")
    p.add_argument("--explain", action="store_true", help="print the enriched query and "
                   "relation-similarity diagnostics")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("serve", help="start the read-only HTTP/JSON service")
    _add_store_flags(p)
    p.add_argument("--port", type=int, default=DEFAULT_PORT, metavar="N")
    p.add_argument("--top-n", type=int, default=10, metavar="N")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("eval", help="compare keyword vs expanded retrieval over a query file")
    _add_store_flags(p)
    p.add_argument("--queries", required=True, metavar="FILE")
    p.add_argument("--qrels", required=True, metavar="FILE")
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_eval)

    return parser


def _add_store_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--index", required=True, metavar="FILE")
    p.add_argument("--kcores", required=True, metavar="FILE")
    p.add_argument("--ontology", required=True, metavar="FILE")
    p.add_argument("--thesaurus", required=True, metavar="FILE")
    p.add_argument("--stopwords", metavar="FILE", help="defaults to the packaged english list")


def _stopwords_from(args: argparse.Namespace) -> frozenset[str]:
    if getattr(args, "stopwords", None):
        return load_stopwords(args.stopwords)
    return default_stopwords()


def _cmd_crawl(args: argparse.Namespace) -> int:
    config = CrawlConfig(
        seeds=tuple(args.seeds),
        max_pages=args.max_pages,
        same_host_only=args.same_host,
        delay_ms=args.delay_ms,
    )
    pages, records = crawl(config)
    if not pages:
        raise RuntimeError("no pages fetched from any seed")
    out_dir = Path(args.out)
    write_corpus(pages, out_dir)
    save_crawl_table(records, out_dir / "crawl.tsv")
    print(f"crawled {len(pages)} pages, discovered {len(records)} urls -> {out_dir}")
    return 0


def _cmd_index(args: argparse.Namespace) -> int:
    stopwords = _stopwords_from(args)
    index = load_corpus_dir(args.corpus, stopwords)
    save_index(index, args.out)
    print(f"indexed {index.n_docs} documents, {len(index.vocab)} terms -> {args.out}")
    return 0


def _cmd_mine(args: argparse.Namespace) -> int:
    index = load_index(args.index)
    cores = mine_kcores(index, MinerConfig(k=args.k, m=args.m, q=args.q))
    save_kcores(cores, args.out)
    print(f"mined {len(cores)} cores -> {args.out}")
    return 0


def _load_query_stores(args: argparse.Namespace):
    index = load_index(args.index)
    index.stopwords = _stopwords_from(args)
    cores = load_kcores(args.kcores)
    graph = load_ontology(args.ontology)
    thesaurus = load_thesaurus(args.thesaurus)
    return index, cores, graph, thesaurus


def _read_choice(label: str, count: int) -> int | None:
    """Read a 1-based selection from stdin; 0, blank, or EOF mean none."""
    print(f"select {label} number (0 = none): ", end="", flush=True)
    line = sys.stdin.readline()
    if not line:
        print()
        return None
    line = line.strip()
    if line in ("", "0"):
        return None
    try:
        choice = int(line)
    except ValueError:
        raise ValueError(f"selection must be a number, got {line!r}") from None
    if not 1 <= choice <= count:
        raise ValueError(f"{label} selection {choice} out of range 1..{count}")
    return choice


def _interactive_selection(index, cores, graph, thesaurus, query) -> tuple[str | None, str | None]:
    cand = candidates(query, cores, graph, thesaurus, index.stopwords)
    flat_senses = [
        (term, sense) for term, ranked in cand.senses.items() for sense in ranked
    ]
    print("candidate senses:")
    if not flat_senses:
        print("  (none)")
    for i, (term, sense) in enumerate(flat_senses, start=1):
        print(f"  {i}. [{term}] {sense.lemma} (score {sense.score}) — {sense.gloss}")
    print("candidate concepts:")
    if not cand.concepts:
        print("  (none)")
    for i, concept in enumerate(cand.concepts, start=1):
        label = graph.concepts[concept.concept_id].label
        print(f"  {i}. {concept.concept_id} (score {concept.similarity_score:.6f}) — {label}")
    sense_choice = _read_choice("sense", len(flat_senses))
    concept_choice = _read_choice("concept", len(cand.concepts))
    sense_id = flat_senses[sense_choice - 1][1].sense_id if sense_choice else None
    concept_id = cand.concepts[concept_choice - 1].concept_id if concept_choice else None
    return sense_id, concept_id


def _print_explanation(enriched: EnrichedQuery, graph: OntologyGraph) -> None:
    print("enriched query:")
    print(f"  {enriched.serialize()}")
    if enriched.chosen_concept:
        relations = sorted({e.relation for e in graph.edges_at(enriched.chosen_concept)})
        print(f"relation similarity around {enriched.chosen_concept}:")
        if len(relations) < 2:
            print("  (fewer than two incident relation types)")
        for a, b in combinations(relations, 2):
            print(f"  {a} ~ {b}: {graph.relation_similarity(a, b):.6f}")


def _cmd_query(args: argparse.Namespace) -> int:
    index, cores, graph, thesaurus = _load_query_stores(args)
    query = make_query(args.raw, index.stopwords)
    if not query.terms:
        raise ValueError("empty query after tokenization")
    if args.interactive:
        sense_id, concept_id = _interactive_selection(index, cores, graph, thesaurus, query)
    else:
        sense_id, concept_id = args.sense, args.concept
    enriched = reformulate(query, sense_id, concept_id, thesaurus, graph)
    results = search(index, enriched, top_n=10)
    print("results:")
    if not results:
        print("  (none)")
    for i, r in enumerate(results, start=1):
        source = index.documents[r.doc_id].source_uri
        print(f"  {i}. doc={r.doc_id} score={r.score:.6f} source={source}")
    if args.explain:
        _print_explanation(enriched, graph)
    print(f"retrieved {len(results)} documents")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    state = load_state(
        args.index,
        args.kcores,
        args.ontology,
        args.thesaurus,
        top_n=args.top_n,
        stopwords=_stopwords_from(args),
    )
    app = create_app(state)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind(("127.0.0.1", args.port))
    except OSError as exc:
        sock.close()
        raise RuntimeError(f"cannot bind port {args.port}: {exc}") from exc
    # listen before announcing readiness so early connections queue in the
    # kernel backlog instead of being refused while uvicorn spins up
    sock.listen(128)
    port = sock.getsockname()[1]
    print(f"serving on http://127.0.0.1:{port}", flush=True)

    import uvicorn

    config = uvicorn.Config(app, log_level="warning", access_log=False)
    uvicorn.Server(config).run(sockets=[sock])
    return 0


def _validate_qrel_lines(path: str, index: TfIdfIndex) -> None:
    """Reject judgments naming documents the index does not contain."""
    with open(path, encoding="utf-8") as handle:
        for line_no, raw_line in enumerate(handle, start=1):
            line = raw_line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) == 2 and parts[1].isdigit() and int(parts[1]) not in index.documents:
                raise ValueError(f"{path}:{line_no}: unknown doc_id {parts[1]}")


def _cmd_eval(args: argparse.Namespace) -> int:
    index, cores, graph, thesaurus = _load_query_stores(args)
    queries = load_queries(args.queries)
    qrels = load_qrels(args.qrels)
    _validate_qrel_lines(args.qrels, index)
    report = compare(index, queries, qrels, cores, graph, thesaurus)
    Path(args.out).write_text(format_report_tsv(report), encoding="utf-8")
    print(format_report_table(report), end="")
    print(f"mean delta {report.mean_delta:+.6f} -> {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "interactive", False) and (args.concept or args.sense):
        parser.error("--interactive cannot be combined with --concept/--sense")
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
