"""Command-line interface: thin wrappers over the pipeline and service.

Batch stages (`ingest` through `export-tei`) operate directly on a corpus
directory; `serve` starts the read-only HTTP service; `stats` prints the
statistics report (add `--server` to query a running service instead).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import CorpusError
from .index import compute_stats
from .pipeline import (
    PipelineConfig,
    normalize_corpus,
    run_pipeline,
    write_concepts,
    write_entities,
    write_relations,
    write_segmentation,
    write_tei,
)
from .store import Collection, CorpusStore, parse_manifest


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="histotext")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("add-collection", help="register a collection in the corpus")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--id", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--kind", default="other",
                   choices=["labour_court_minutes", "worker_press", "monograph", "other"])
    p.add_argument("--role", default="consultation", choices=["consultation", "acquisition"])

    p = sub.add_parser("ingest", help="ingest a transcription plus its manifest")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--collection", required=True)
    p.add_argument("text_file", type=Path)
    p.add_argument("manifest_file", type=Path)

    p = sub.add_parser("normalize", help="apply the rule table, write sidecars")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--rules", type=Path, default=None)

    p = sub.add_parser("annotate", help="tokenize, split, tag, and write standoff layers")
    p.add_argument("--corpus", required=True, type=Path)

    p = sub.add_parser("mine", help="extract terms, cluster concepts, link entities")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--min-frequency", type=int, default=2)
    p.add_argument("--cohesion-threshold", type=float, default=0.0)
    p.add_argument("--similarity-threshold", type=float, default=0.25)

    p = sub.add_parser("extract", help="bootstrap verb lexicon and extract relations")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--seeds", type=Path, default=None)
    p.add_argument("--exclusions", type=Path, default=None)
    p.add_argument("--max-iter", type=int, default=5)
    p.add_argument("--min-support", type=int, default=2)

    p = sub.add_parser("export-tei", help="write one TEI file per document")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("stats", help="print the corpus statistics report")
    p.add_argument("--corpus", type=Path, default=None)
    p.add_argument("--server", default=None, help="query a running service instead")
    p.add_argument("--json", dest="json_out", type=Path, default=None)

    p = sub.add_parser("seal", help="freeze the corpus for read-only serving")
    p.add_argument("--corpus", required=True, type=Path)

    p = sub.add_parser("serve", help="start the consultation service")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except CorpusError as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 1


def _config_from(args: argparse.Namespace) -> PipelineConfig:
    config = PipelineConfig()
    if getattr(args, "rules", None) is not None:
        config.rules_file = args.rules
    if getattr(args, "seeds", None) is not None:
        config.verb_seeds_file = args.seeds
    if getattr(args, "exclusions", None) is not None:
        config.exclusions_file = args.exclusions
    if getattr(args, "min_frequency", None) is not None:
        config.min_frequency = args.min_frequency
    if getattr(args, "cohesion_threshold", None) is not None:
        config.cohesion_threshold = args.cohesion_threshold
    if getattr(args, "similarity_threshold", None) is not None:
        config.similarity_threshold = args.similarity_threshold
    if getattr(args, "max_iter", None) is not None:
        config.max_iterations = args.max_iter
    if getattr(args, "min_support", None) is not None:
        config.min_path_support = args.min_support
    return config


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "add-collection":
        store = CorpusStore(args.corpus)
        store.add_collection(Collection(args.id, args.label, args.kind, args.role))
        print(f"collection {args.id} registered")
        return 0

    if args.command == "ingest":
        store = CorpusStore(args.corpus)
        manifest = parse_manifest(args.manifest_file.read_text(encoding="utf-8"))
        if manifest.collection_id != args.collection:
            print(f"error: manifest names collection {manifest.collection_id!r}, "
                  f"got --collection {args.collection!r}", file=sys.stderr)
            return 1
        raw_text = args.text_file.read_text(encoding="utf-8")
        doc_id = store.ingest_document(raw_text, manifest)
        print(f"ingested {doc_id} into {args.collection}")
        return 0

    if args.command == "normalize":
        store = CorpusStore(args.corpus)
        totals = normalize_corpus(store, _config_from(args))
        corrected = sum(totals.values())
        print(f"corrected {corrected} occurrences across {len(store.document_ids())} documents")
        for rule_id in sorted(totals):
            if totals[rule_id]:
                print(f"  {rule_id}: {totals[rule_id]}")
        return 0

    if args.command == "annotate":
        store = CorpusStore(args.corpus)
        result = run_pipeline(store, _config_from(args))
        write_segmentation(store, result)
        n_tokens = sum(len(d.tokens) for d in result.documents.values())
        n_sentences = sum(len(d.sentences) for d in result.documents.values())
        print(f"annotated {len(result.documents)} documents: "
              f"{n_sentences} sentences, {n_tokens} tokens")
        return 0

    if args.command == "mine":
        store = CorpusStore(args.corpus)
        result = run_pipeline(store, _config_from(args))
        write_concepts(store, result)
        write_entities(store, result)
        n_concepts = sum(len(d.concept_mentions) for d in result.documents.values())
        n_entities = sum(len(d.entity_mentions) for d in result.documents.values())
        print(f"retained {len(result.terms)} terms, "
              f"{sum(len(c.members) for c in result.clusters)} cluster members; "
              f"annotated {n_concepts} concepts, {n_entities} entities")
        return 0

    if args.command == "extract":
        store = CorpusStore(args.corpus)
        result = run_pipeline(store, _config_from(args))
        write_relations(store, result)
        n_relations = sum(len(d.relations) for d in result.documents.values())
        lexicon = result.bootstrap.lexicon if result.bootstrap else None
        members = sorted(lexicon.members) if lexicon else []
        print(f"verb lexicon: {', '.join(members)}")
        print(f"extracted {n_relations} relations, "
              f"{len(result.network.edges) if result.network else 0} network edges")
        return 0

    if args.command == "export-tei":
        store = CorpusStore(args.corpus)
        result = run_pipeline(store, _config_from(args))
        written = write_tei(result, args.out)
        print(f"wrote {len(written)} TEI files to {args.out}")
        return 0

    if args.command == "stats":
        if args.server:
            import httpx

            payload = httpx.get(f"{args.server.rstrip('/')}/stats", timeout=30).json()
        else:
            if args.corpus is None:
                print("error: --corpus or --server required", file=sys.stderr)
                return 1
            store = CorpusStore(args.corpus)
            result = run_pipeline(store)
            index = result.build_index()
            (store.root / "index.json").write_text(index.to_json(), encoding="utf-8")
            report = compute_stats(index)
            payload = {
                "counters": report.counters,
                "entity_distribution": report.entity_distribution,
                "concept_distribution": report.concept_distribution,
                "representative_concepts": report.representative_concepts,
                "gender_distribution": report.gender_distribution,
            }
        text = json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True)
        if args.json_out is not None:
            args.json_out.write_text(text + "\n", encoding="utf-8")
        print(text)
        return 0

    if args.command == "seal":
        store = CorpusStore(args.corpus)
        store.seal()
        print(f"sealed corpus at {args.corpus}")
        return 0

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        app = create_app(args.corpus)
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    raise SystemExit(main())
