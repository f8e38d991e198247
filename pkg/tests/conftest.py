from __future__ import annotations

from pathlib import Path

import pytest

from histotext.pipeline import PipelineConfig, run_pipeline
from histotext.store import Collection, CorpusStore, parse_manifest

DATA_DIR = Path(__file__).parent / "data" / "minicorpus"

COLLECTIONS = [
    Collection("minutes", "Minutes des conseils de prud'hommes", "labour_court_minutes", "consultation"),
    Collection("presse", "Presse ouvrière lyonnaise", "worker_press", "consultation"),
    Collection("monographies", "Monographies de familles ouvrières", "monograph", "acquisition"),
]


def build_store(root: Path) -> CorpusStore:
    """Ingest the bundled mini-corpus into a fresh store at `root`."""
    store = CorpusStore(root)
    for collection in COLLECTIONS:
        store.add_collection(collection)
    for manifest_path in sorted(DATA_DIR.glob("*.manifest")):
        manifest = parse_manifest(manifest_path.read_text(encoding="utf-8"))
        raw_text = manifest_path.with_suffix(".txt").read_text(encoding="utf-8")
        store.ingest_document(raw_text, manifest)
    return store


@pytest.fixture()
def store(tmp_path) -> CorpusStore:
    return build_store(tmp_path / "corpus")


@pytest.fixture(scope="session")
def corpus_result():
    """Full pipeline output over the mini-corpus, computed once."""
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        store = build_store(Path(tmp) / "corpus")
        yield run_pipeline(store, PipelineConfig())


@pytest.fixture(scope="session")
def corpus_index(corpus_result):
    return corpus_result.build_index()
