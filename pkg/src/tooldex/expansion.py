"""Offline document enrichment: synthetic user queries per tool document.

Each tool document gets m independently sampled queries; every query is
appended to the document with a fixed concatenation template to form one
expanded copy. The expanded corpus is cached as JSONL so the expensive
generation stage never reruns for (doc_id, copy_index) pairs already present.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .corpus import ToolDocument
from .errors import GenerationError, MismatchedDoc, ParseError
from .llm import GenerationRequest
from .prompts import build_query_generation_prompt

log = logging.getLogger(__name__)

CONCAT_TEMPLATE = "Documentation: {document} Query: {query}"
EMPTY_COMPLETION_RETRIES = 2


@dataclass(frozen=True)
class SyntheticQuery:
    doc_id: str
    copy_index: int  # 1-based
    text: str
    temperature: float = 0.7
    seed: int | None = None


@dataclass(frozen=True)
class ExpandedDocument:
    doc_id: str
    copy_index: int
    text: str


def build_generation_prompt(doc: ToolDocument) -> str:
    if not doc.text:
        raise ValueError("document text is empty")
    return build_query_generation_prompt(doc.text)


def derive_seed(base_seed: int, doc_id: str, copy_index: int, attempt: int = 0) -> int:
    """Stable per-call seed so reruns and m-extensions reproduce old copies."""
    key = f"{base_seed}:{doc_id}:{copy_index}:{attempt}"
    return int(hashlib.sha256(key.encode("utf-8")).hexdigest()[:12], 16)


def generate_synthetic_queries(doc: ToolDocument, m: int, provider,
                               temperature: float = 0.7,
                               max_output_tokens: int = 1024,
                               base_seed: int = 0) -> list[SyntheticQuery]:
    """Sample m synthetic queries for one document (one completion per call).

    Empty completions are resampled a couple of times, then fall back to the
    document's own text so retrieval still has a usable copy. Raises
    GenerationError when more than half of the calls fail outright.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    prompt = build_generation_prompt(doc)
    queries: list[SyntheticQuery] = []
    failures = 0
    for copy_index in range(1, m + 1):
        text = ""
        seed = None
        for attempt in range(EMPTY_COMPLETION_RETRIES + 1):
            seed = derive_seed(base_seed, doc.doc_id, copy_index, attempt)
            request = GenerationRequest(prompt=prompt, temperature=temperature,
                                        max_output_tokens=max_output_tokens, seed=seed)
            try:
                text = provider.generate(request).text.strip()
            except Exception as exc:  # noqa: BLE001 - provider errors are counted
                log.warning("generation failed for %s copy %d: %s",
                            doc.doc_id, copy_index, exc)
                failures += 1
                text = ""
                break
            if text:
                break
        if not text:
            text = doc.text  # fallback keeps the copy usable
        queries.append(SyntheticQuery(doc_id=doc.doc_id, copy_index=copy_index,
                                      text=text, temperature=temperature, seed=seed))
    if failures * 2 > m:
        raise GenerationError(
            f"{failures}/{m} generation calls failed for document {doc.doc_id!r}")
    return queries


def expand_document(doc: ToolDocument,
                    queries: list[SyntheticQuery]) -> list[ExpandedDocument]:
    """Concatenate each synthetic query onto the document, one copy per query."""
    for q in queries:
        if q.doc_id != doc.doc_id:
            raise MismatchedDoc(
                f"query belongs to {q.doc_id!r}, not {doc.doc_id!r}")
    return [
        ExpandedDocument(
            doc_id=doc.doc_id,
            copy_index=q.copy_index,
            text=CONCAT_TEMPLATE.format(document=doc.text, query=q.text),
        )
        for q in sorted(queries, key=lambda q: q.copy_index)
    ]


# --- expanded-corpus JSONL cache ---

def write_expanded_records(path, records) -> None:
    """Append (synthetic query, expanded copy) pairs to the cache file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as fh:
        for query, expanded in records:
            fh.write(json.dumps({
                "doc_id": expanded.doc_id,
                "copy_index": expanded.copy_index,
                "synthetic_query": query.text,
                "expanded_text": expanded.text,
            }, ensure_ascii=False, sort_keys=True) + "\n")


def read_expanded_records(path) -> tuple[list[SyntheticQuery], list[ExpandedDocument]]:
    """Read the cache back, ordered by (doc_id first-seen, copy_index)."""
    path = Path(path)
    queries: list[SyntheticQuery] = []
    expanded: list[ExpandedDocument] = []
    if not path.exists():
        return queries, expanded
    for i, line in enumerate(path.read_text(encoding="utf-8").splitlines()):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            queries.append(SyntheticQuery(doc_id=rec["doc_id"],
                                          copy_index=int(rec["copy_index"]),
                                          text=rec["synthetic_query"]))
            expanded.append(ExpandedDocument(doc_id=rec["doc_id"],
                                             copy_index=int(rec["copy_index"]),
                                             text=rec["expanded_text"]))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ParseError(f"bad expanded record: {exc}", path=str(path), record=i) from exc
    order = sorted(range(len(expanded)),
                   key=lambda i: (_first_seen(expanded, expanded[i].doc_id),
                                  expanded[i].copy_index))
    return [queries[i] for i in order], [expanded[i] for i in order]


def _first_seen(records, doc_id: str) -> int:
    for i, rec in enumerate(records):
        if rec.doc_id == doc_id:
            return i
    return len(records)
