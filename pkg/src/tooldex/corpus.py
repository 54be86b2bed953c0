"""Tool-document corpora and labeled evaluation datasets.

Supported inputs: ToolBench-style JSON arrays (category/tool/API records with
parameter lists), ToolE-style JSON arrays ({name, description}), and JSONL.
``normalize`` writes the canonical JSONL form ``{"doc_id": ..., "raw": {...}}``;
the flat ``text`` rendering is always recomputed from ``raw``, never stored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DuplicateId, EmptyDocument, ParseError, UnknownDocId

# Known fields come first, in this order; anything else follows alphabetically.
_FIELD_ORDER = (
    "category_name",
    "tool_name",
    "api_name",
    "name",
    "description",
    "api_description",
    "required_parameters",
    "optional_parameters",
    "method",
)


def _render_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, list):
        return "; ".join(_render_value(v) for v in value)
    if isinstance(value, dict):
        if "name" in value:
            # parameter-style record: keep name, type and description visible
            part = str(value["name"])
            if value.get("type"):
                part += f" ({value['type']})"
            if value.get("description"):
                part += f": {value['description']}"
            return part
        return json.dumps(value, sort_keys=True)
    return str(value)


def render_text(raw: dict) -> str:
    """Flatten a raw record into a deterministic "field: value" text block.

    Field order is fixed (identity fields, then descriptions, then parameter
    lists), remaining keys sorted; same raw dict always yields identical bytes.
    """
    ordered = [k for k in _FIELD_ORDER if k in raw]
    ordered += sorted(k for k in raw if k not in _FIELD_ORDER)
    lines = []
    for key in ordered:
        value = raw[key]
        if value is None:
            continue
        rendered = _render_value(value)
        if rendered == "":
            continue
        lines.append(f"{key}: {rendered}")
    if not lines:
        raise EmptyDocument("record has no descriptive content")
    return "\n".join(lines)


@dataclass(frozen=True)
class ToolDocument:
    doc_id: str
    raw: dict
    text: str

    @classmethod
    def from_raw(cls, doc_id: str, raw: dict) -> "ToolDocument":
        return cls(doc_id=doc_id, raw=raw, text=render_text(raw))


@dataclass(frozen=True)
class EvalExample:
    query_id: str
    query_text: str
    relevant_doc_ids: frozenset[str]
    grades: dict[str, float] = field(default_factory=dict)

    def gain(self, doc_id: str) -> float:
        return self.grades.get(doc_id, 1.0)


@dataclass
class Corpus:
    documents: list[ToolDocument]
    source_path: str = ""

    def __post_init__(self):
        self._by_id = {}
        for doc in self.documents:
            if doc.doc_id in self._by_id:
                raise DuplicateId(doc.doc_id)
            self._by_id[doc.doc_id] = doc

    def __len__(self) -> int:
        return len(self.documents)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._by_id

    def get(self, doc_id: str) -> ToolDocument:
        return self._by_id[doc_id]

    @property
    def doc_ids(self) -> list[str]:
        return [d.doc_id for d in self.documents]

    def save(self, path) -> None:
        """Write the canonical corpus JSONL (doc_id + raw record per line)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as fh:
            for doc in self.documents:
                fh.write(json.dumps({"doc_id": doc.doc_id, "raw": doc.raw},
                                    ensure_ascii=False, sort_keys=True) + "\n")


def _identity_id(raw: dict, index: int) -> str:
    for key in ("doc_id", "id"):
        if raw.get(key):
            return str(raw[key])
    parts = [str(raw[k]) for k in ("category_name", "tool_name", "api_name") if raw.get(k)]
    if parts:
        return "/".join(parts)
    if raw.get("name"):
        return str(raw["name"])
    return f"doc-{index}"


def _record_to_document(record, index: int, path: str) -> ToolDocument:
    if not isinstance(record, dict):
        raise ParseError(f"expected an object, got {type(record).__name__}",
                         path=path, record=index)
    if set(record.keys()) == {"doc_id", "raw"}:
        # canonical form written by `normalize`
        raw = record["raw"]
        if not isinstance(raw, dict):
            raise ParseError("canonical record has non-object 'raw'", path=path, record=index)
        return ToolDocument.from_raw(str(record["doc_id"]), raw)
    try:
        return ToolDocument.from_raw(_identity_id(record, index), record)
    except EmptyDocument as exc:
        raise ParseError(str(exc), path=path, record=index) from exc


def load_corpus(path, format: str = "jsonl") -> Corpus:
    """Load a tool corpus; duplicate document identities are rejected.

    format: "toolbench-json" / "toole-json" (JSON array) or "jsonl"
    (one record per line, generic or canonical).
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    records = []
    if format in ("toolbench-json", "toole-json"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", path=str(path)) from exc
        if not isinstance(data, list):
            raise ParseError("expected a JSON array of tool records", path=str(path))
        records = list(enumerate(data))
    elif format == "jsonl":
        for i, line in enumerate(text.splitlines()):
            if not line.strip():
                continue
            try:
                records.append((i, json.loads(line)))
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON line: {exc}", path=str(path), record=i) from exc
    else:
        raise ValueError(f"unknown corpus format: {format!r}")

    documents = [_record_to_document(rec, i, str(path)) for i, rec in records]
    return Corpus(documents=documents, source_path=str(path))


def load_eval_dataset(path, corpus: Corpus, strict: bool = True):
    """Load labeled (query, relevant tools) examples from JSONL.

    Each line: {"query_id": ..., "query": ..., "relevant_ids": [...],
    "grades": {doc_id: gain}?}. With strict=True any unresolved doc id raises
    UnknownDocId; otherwise unresolved ids are dropped and examples left with
    none are excluded. Returns (examples, skipped_query_ids).
    """
    path = Path(path)
    examples: list[EvalExample] = []
    skipped: list[str] = []
    seen_ids: set[str] = set()
    for i, line in enumerate(path.read_text(encoding="utf-8").splitlines()):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON line: {exc}", path=str(path), record=i) from exc
        try:
            query_id = str(rec["query_id"])
            query_text = str(rec["query"])
            relevant = [str(d) for d in rec["relevant_ids"]]
        except KeyError as exc:
            raise ParseError(f"missing field {exc}", path=str(path), record=i) from exc
        if query_id in seen_ids:
            raise DuplicateId(query_id)
        seen_ids.add(query_id)
        unresolved = [d for d in relevant if d not in corpus]
        if unresolved:
            if strict:
                raise UnknownDocId(unresolved)
            relevant = [d for d in relevant if d in corpus]
        if not relevant:
            skipped.append(query_id)
            continue
        grades = {str(k): float(v) for k, v in (rec.get("grades") or {}).items()
                  if str(k) in set(relevant)}
        if any(g <= 0 for g in grades.values()):
            raise ParseError("grades must be positive", path=str(path), record=i)
        examples.append(EvalExample(query_id=query_id, query_text=query_text,
                                    relevant_doc_ids=frozenset(relevant), grades=grades))
    return examples, skipped
